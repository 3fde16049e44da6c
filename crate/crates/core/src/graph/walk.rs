use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::MultiGraph;
use crate::error::{domain, Result};

/// Where the first component of the walk starts. Later components always
/// start at a vertex chosen proportionally to degree among unexplored ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StartRule {
    SizeBiased,
    Fixed(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkComponent {
    /// Index into `steps` of S(0) for this component.
    pub start: usize,
    /// Index into `steps` of the final value; `end - start` is the edge count.
    pub end: usize,
    pub vertices: Vec<usize>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplorationWalk {
    pub steps: Vec<i64>,
    /// Indices into `steps` of values produced by surplus pairings.
    pub surplus_events: Vec<usize>,
    pub components: Vec<WalkComponent>,
    /// Graph built on the fly in degree-sequence mode.
    pub graph: Option<MultiGraph>,
}

impl ExplorationWalk {
    pub fn edge_count(&self, c: usize) -> usize {
        self.components[c].end - self.components[c].start
    }

    pub fn surplus_count(&self, c: usize) -> usize {
        let WalkComponent { start, end, .. } = self.components[c];
        self.surplus_events.iter().filter(|&&i| i > start && i <= end).count()
    }
}

enum Partner<'a> {
    Fixed(&'a [usize]),
    Uniform,
}

struct Engine<'a> {
    offsets: Vec<usize>,
    owner: Vec<usize>,
    partner: Partner<'a>,
    pool: Vec<usize>,
    pos: Vec<usize>,
    paired: Vec<bool>,
}

impl Engine<'_> {
    fn remove(&mut self, h: usize) {
        let i = self.pos[h];
        let last = *self.pool.last().expect("non-empty pool");
        self.pool.swap_remove(i);
        if last != h {
            self.pos[last] = i;
        }
        self.paired[h] = true;
    }
}

fn run<R: Rng + ?Sized>(
    mut eng: Engine<'_>,
    weights: Option<&[f64]>,
    start: StartRule,
    rng: &mut R,
) -> Result<(ExplorationWalk, Vec<(usize, usize)>)> {
    let n = eng.offsets.len() - 1;
    if let StartRule::Fixed(j) = start {
        if j >= n {
            return domain(format!("start vertex {j} out of range 0..{n}"));
        }
    }
    if let Some(w) = weights {
        if w.len() != n {
            return domain(format!("{} weights for {} vertices", w.len(), n));
        }
    }
    let deg = |v: usize, e: &Engine| e.offsets[v + 1] - e.offsets[v];
    let wt = |v: usize| weights.map_or(1.0, |w| w[v]);
    let mut discovered = vec![false; n];
    let mut top: Vec<usize> = eng.offsets[1..].to_vec();
    let mut walk = ExplorationWalk { steps: Vec::new(), surplus_events: Vec::new(), components: Vec::new(), graph: None };
    let mut edges = Vec::new();
    let mut queue = VecDeque::new();
    let mut first = Some(start);
    let mut next_isolated = 0;

    loop {
        let root = match first.take() {
            Some(StartRule::Fixed(j)) => j,
            _ if !eng.pool.is_empty() => eng.owner[eng.pool[rng.random_range(0..eng.pool.len())]],
            _ => {
                while next_isolated < n && discovered[next_isolated] {
                    next_isolated += 1;
                }
                if next_isolated == n {
                    break;
                }
                next_isolated
            }
        };
        discovered[root] = true;
        let begin = walk.steps.len();
        let mut s = deg(root, &eng) as i64;
        walk.steps.push(s);
        let mut vertices = vec![root];
        queue.clear();
        queue.push_back(root);
        while s > 0 {
            let v = *queue.front().expect("active half-edges remain");
            // Largest unpaired slot of v.
            while top[v] > eng.offsets[v] && eng.paired[top[v] - 1] {
                top[v] -= 1;
            }
            if top[v] == eng.offsets[v] {
                queue.pop_front();
                continue;
            }
            let h = top[v] - 1;
            eng.remove(h);
            let mate = match eng.partner {
                Partner::Fixed(m) => m[h],
                Partner::Uniform => eng.pool[rng.random_range(0..eng.pool.len())],
            };
            eng.remove(mate);
            let u = eng.owner[mate];
            edges.push((v, u));
            if discovered[u] {
                s -= 2;
                walk.surplus_events.push(walk.steps.len());
            } else {
                discovered[u] = true;
                vertices.push(u);
                queue.push_back(u);
                s += deg(u, &eng) as i64 - 2;
            }
            walk.steps.push(s);
        }
        let weight = vertices.iter().map(|&v| wt(v)).sum();
        walk.components.push(WalkComponent { start: begin, end: walk.steps.len() - 1, vertices, weight });
    }
    Ok((walk, edges))
}

fn engine_for(offsets: Vec<usize>, partner: Partner<'_>) -> Engine<'_> {
    let total = *offsets.last().unwrap();
    let mut owner = Vec::with_capacity(total);
    for v in 0..offsets.len() - 1 {
        owner.extend(std::iter::repeat_n(v, offsets[v + 1] - offsets[v]));
    }
    Engine { offsets, owner, partner, pool: (0..total).collect(), pos: (0..total).collect(), paired: vec![false; total] }
}

/// Explores a fixed graph. Half-edges at a vertex are its adjacency slots;
/// vertices are served first-in first-out and, within a vertex, the highest
/// remaining slot goes first.
pub fn explore_graph<R: Rng + ?Sized>(
    g: &MultiGraph,
    weights: Option<&[f64]>,
    start: StartRule,
    rng: &mut R,
) -> Result<ExplorationWalk> {
    let adj = g.adjacency();
    let eng = engine_for(adj.offsets.clone(), Partner::Fixed(&adj.mate));
    Ok(run(eng, weights, start, rng)?.0)
}

/// Explores a configuration model on `d`, pairing each half-edge on the fly
/// with a uniform unpaired one. The resulting graph is returned in `graph`.
pub fn explore_degrees<R: Rng + ?Sized>(
    d: &[usize],
    weights: Option<&[f64]>,
    start: StartRule,
    rng: &mut R,
) -> Result<ExplorationWalk> {
    if d.iter().sum::<usize>() % 2 == 1 {
        return domain("degree sum is odd");
    }
    let mut offsets = vec![0; d.len() + 1];
    for (v, &k) in d.iter().enumerate() {
        offsets[v + 1] = offsets[v] + k;
    }
    let eng = engine_for(offsets, Partner::Uniform);
    let (mut walk, edges) = run(eng, weights, start, rng)?;
    walk.graph = Some(MultiGraph::from_edges(d.len(), edges)?);
    Ok(walk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn double_edge_trace() {
        let g = MultiGraph::from_edges(2, [(0, 1), (0, 1)]).unwrap();
        let w = explore_graph(&g, None, StartRule::Fixed(0), &mut seeded(0)).unwrap();
        assert_eq!(w.steps, vec![2, 2, 0]);
        assert_eq!(w.surplus_events, vec![2]);
        assert_eq!(w.edge_count(0), 2);
    }

    #[test]
    fn single_edge_trace() {
        let g = MultiGraph::from_edges(2, [(0, 1)]).unwrap();
        let w = explore_graph(&g, None, StartRule::Fixed(0), &mut seeded(0)).unwrap();
        assert_eq!(w.steps, vec![1, 0]);
        assert!(w.surplus_events.is_empty());
    }

    #[test]
    fn isolated_and_self_loop() {
        let g = MultiGraph::from_edges(3, [(1, 1)]).unwrap();
        let w = explore_graph(&g, Some(&[1.0, 2.0, 3.0]), StartRule::Fixed(0), &mut seeded(0)).unwrap();
        assert_eq!(w.components.len(), 3);
        assert_eq!(w.edge_count(0), 0);
        assert_eq!(w.components[1].vertices, vec![1]);
        assert_eq!(w.surplus_count(1), 1);
        assert_eq!(w.components[2].vertices, vec![2]);
        assert_eq!(w.components[1].weight, 2.0);
        assert!(explore_graph(&g, None, StartRule::Fixed(3), &mut seeded(0)).is_err());
    }

    #[test]
    fn degree_mode_builds_consistent_graph() {
        let d = [3, 3, 2, 2, 1, 1, 1, 1];
        let w = explore_degrees(&d, None, StartRule::SizeBiased, &mut seeded(11)).unwrap();
        let g = w.graph.as_ref().unwrap();
        assert_eq!(g.degree, d.to_vec());
        let total: usize = (0..w.components.len()).map(|c| w.edge_count(c)).sum();
        assert_eq!(total, g.edge_count());
    }
}
