use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Undirected multigraph on vertices `0..n`. Self-loops count twice toward degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub degree: Vec<usize>,
}

impl MultiGraph {
    pub fn empty(n: usize) -> Self {
        Self { n, edges: Vec::new(), degree: vec![0; n] }
    }

    /// Builds a graph; edges are stored with the smaller endpoint first.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return domain(format!("edge ({u},{v}) outside 0..{}", self.n));
        }
        self.degree[u] += 1;
        self.degree[v] += 1;
        self.edges.push((u.min(v), u.max(v)));
        Ok(())
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_self_loop(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    pub fn is_simple(&self) -> bool {
        if self.has_self_loop() {
            return false;
        }
        let mut e = self.edges.clone();
        e.sort_unstable();
        e.windows(2).all(|w| w[0] != w[1])
    }

    /// Sorted edge list, handy for comparing graphs as multisets.
    pub fn canonical_edges(&self) -> Vec<(usize, usize)> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::new(self)
    }

    /// Writes `# n <n>` followed by one 1-based `u v` line per edge.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# n {}", self.n)?;
        for &(u, v) in &self.edges {
            writeln!(out, "{} {}", u + 1, v + 1)?;
        }
        Ok(())
    }

    /// Reads the edge-list format. Without a `# n` header, n is the largest label.
    pub fn read_edge_list<R: BufRead>(input: R) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        let parse = |s: &str| -> Result<usize> {
            let x: usize = s.parse().map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
            if x == 0 {
                return Err(Error::Parse("vertex labels are 1-based".into()));
            }
            Ok(x - 1)
        };
        for line in input.lines() {
            let line = line?;
            let t = line.trim();
            if let Some(rest) = t.strip_prefix('#') {
                let mut it = rest.split_whitespace();
                if it.next() == Some("n") {
                    if let Some(v) = it.next() {
                        n = Some(v.parse().map_err(|e| Error::Parse(format!("header: {e}")))?);
                    }
                }
                continue;
            }
            if t.is_empty() {
                continue;
            }
            let mut it = t.split_whitespace();
            match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) => edges.push((parse(a)?, parse(b)?)),
                _ => return Err(Error::Parse(format!("bad edge line `{t}`"))),
            }
        }
        let n = n.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
        Self::from_edges(n, edges)
    }
}

/// Compressed adjacency. Each edge occupies one slot at each endpoint (two
/// slots at the same vertex for a self-loop); `mate[s]` is the slot at the
/// other end of the same edge.
#[derive(Debug, Clone)]
pub struct Adjacency {
    pub offsets: Vec<usize>,
    pub targets: Vec<usize>,
    pub mate: Vec<usize>,
}

impl Adjacency {
    pub fn new(g: &MultiGraph) -> Self {
        let mut offsets = vec![0usize; g.n + 1];
        for v in 0..g.n {
            offsets[v + 1] = offsets[v] + g.degree[v];
        }
        let m2 = offsets[g.n];
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; m2];
        let mut mate = vec![0usize; m2];
        for &(u, v) in &g.edges {
            let su = fill[u];
            fill[u] += 1;
            let sv = fill[v];
            fill[v] += 1;
            targets[su] = v;
            targets[sv] = u;
            mate[su] = sv;
            mate[sv] = su;
        }
        Self { offsets, targets, mate }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn slots(&self, v: usize) -> std::ops::Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    /// Vertex owning slot `s`.
    pub fn owner(&self, s: usize) -> usize {
        self.offsets.partition_point(|&o| o <= s) - 1
    }
}
