//! Exponential-clock half-edge pairing, blob snapshots, the modified process
//! and the multiplicative coalescent.

use std::io::Write;

use rand::Rng;
use rand_distr::{Binomial, Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::fenwick::Fenwick;
use crate::graph::{component_labels, MultiGraph};

/// t_c(λ) = ½ log(ν/(ν−1)) + ν/(2(ν−1)) · λ n^{-η}.
pub fn critical_time(d: &[usize], lambda: f64, eta: f64) -> Result<f64> {
    let nu = crate::degrees::criticality_parameter(d)?;
    critical_time_from(nu, d.len(), lambda, eta)
}

pub fn critical_time_from(nu: f64, n: usize, lambda: f64, eta: f64) -> Result<f64> {
    if !(nu > 1.0) {
        return domain(format!("criticality parameter must exceed 1, got {nu}"));
    }
    Ok(0.5 * (nu / (nu - 1.0)).ln() + nu / (2.0 * (nu - 1.0)) * lambda * (n as f64).powf(-eta))
}

/// t_n = ½ log(ν/(ν−1)) − ν/(2(ν−1)) · n^{-δ}.
pub fn subcritical_time(d: &[usize], delta: f64) -> Result<f64> {
    let nu = crate::degrees::criticality_parameter(d)?;
    subcritical_time_from(nu, d.len(), delta)
}

pub fn subcritical_time_from(nu: f64, n: usize, delta: f64) -> Result<f64> {
    if !(nu > 1.0) {
        return domain(format!("criticality parameter must exceed 1, got {nu}"));
    }
    Ok(0.5 * (nu / (nu - 1.0)).ln() - nu / (2.0 * (nu - 1.0)) * (n as f64).powf(-delta))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingEvent {
    pub time: f64,
    pub first: usize,
    pub second: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trackers {
    pub s1: u64,
    pub s2: u64,
    pub s_dw: u64,
}

/// State of the pairing process. Half-edges are numbered vertex by vertex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DynamicState {
    /// Simulated horizon; infinite when run to exhaustion.
    pub time: f64,
    pub degrees: Vec<usize>,
    pub offsets: Vec<usize>,
    pub alive: Vec<usize>,
    pub edge_log: Vec<PairingEvent>,
    pub omega: Vec<usize>,
    pub trackers: Trackers,
}

impl DynamicState {
    pub fn owner(&self, h: usize) -> usize {
        self.offsets.partition_point(|&o| o <= h) - 1
    }

    pub fn recompute_trackers(&self) -> Trackers {
        trackers_of(&self.omega, &self.degrees)
    }

    /// Trackers at each grid time (grid must be non-decreasing).
    pub fn trackers_on_grid(&self, grid: &[f64]) -> Vec<Trackers> {
        let mut omega = self.degrees.clone();
        let mut t = trackers_of(&omega, &self.degrees);
        let mut k = 0;
        let mut out = Vec::with_capacity(grid.len());
        for &g in grid {
            while k < self.edge_log.len() && self.edge_log[k].time <= g {
                let e = self.edge_log[k];
                for h in [e.first, e.second] {
                    let v = self.owner(h);
                    let w = omega[v] as u64;
                    t.s1 -= 1;
                    t.s2 -= 2 * w - 1;
                    t.s_dw -= self.degrees[v] as u64;
                    omega[v] -= 1;
                }
                k += 1;
            }
            out.push(t);
        }
        out
    }
}

fn trackers_of(omega: &[usize], d: &[usize]) -> Trackers {
    Trackers {
        s1: omega.iter().map(|&w| w as u64).sum(),
        s2: omega.iter().map(|&w| (w * w) as u64).sum(),
        s_dw: omega.iter().zip(d).map(|(&w, &d)| (w * d) as u64).sum(),
    }
}

/// Closed-form tracker limits (s1/n, s2/n, s_dω/n) at time t.
pub fn tracker_limits(mu: f64, nu: f64, t: f64) -> (f64, f64, f64) {
    let e2 = (-2.0 * t).exp();
    (mu * e2, mu * e2 * e2 * (nu + (2.0 * t).exp()), mu * (1.0 + nu) * e2)
}

/// Event-driven pairing: after Exp(s1) time an alive half-edge chosen
/// uniformly pairs with a uniform other alive half-edge.
pub fn run_dynamic<R: Rng + ?Sized>(d: &[usize], t_end: f64, rng: &mut R) -> Result<DynamicState> {
    if !(t_end >= 0.0) {
        return domain(format!("t_end must be non-negative, got {t_end}"));
    }
    let mut offsets = vec![0usize; d.len() + 1];
    for (v, &k) in d.iter().enumerate() {
        offsets[v + 1] = offsets[v] + k;
    }
    let total = offsets[d.len()];
    let mut owner = Vec::with_capacity(total);
    for (v, &k) in d.iter().enumerate() {
        owner.extend(std::iter::repeat_n(v, k));
    }
    let mut alive: Vec<usize> = (0..total).collect();
    let mut omega = d.to_vec();
    let mut tr = trackers_of(&omega, d);
    let mut log = Vec::with_capacity(total / 2);
    let mut time = 0.0;
    loop {
        if alive.len() < 2 {
            break;
        }
        time += Exp::new(alive.len() as f64).expect("positive rate").sample(rng);
        if time > t_end {
            break;
        }
        let i = rng.random_range(0..alive.len());
        let a = alive.swap_remove(i);
        let j = rng.random_range(0..alive.len());
        let b = alive.swap_remove(j);
        for h in [a, b] {
            let v = owner[h];
            let w = omega[v] as u64;
            tr.s1 -= 1;
            tr.s2 -= 2 * w - 1;
            tr.s_dw -= d[v] as u64;
            omega[v] -= 1;
        }
        log.push(PairingEvent { time, first: a, second: b });
    }
    alive.sort_unstable();
    Ok(DynamicState { time: t_end, degrees: d.to_vec(), offsets, alive, edge_log: log, omega, trackers: tr })
}

/// Components of a snapshot graph with their open half-edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlobSystem {
    /// Blob vertex lists, ordered by smallest vertex.
    pub blobs: Vec<Vec<usize>>,
    pub blob_of: Vec<usize>,
    /// f_b: number of open half-edges in blob b.
    pub masses: Vec<usize>,
    /// Open half-edge ids per blob, each with its owning vertex.
    pub open: Vec<Vec<(usize, usize)>>,
    pub time: f64,
}

impl BlobSystem {
    pub fn total_mass(&self) -> usize {
        self.masses.iter().sum()
    }

    /// Treats each vertex of `g` with the given open-half-edge counts as
    /// already grouped into the components of `g`.
    pub fn from_graph(g: &MultiGraph, open_counts: &[usize], time: f64) -> Self {
        let adj = g.adjacency();
        let (label, sizes) = component_labels(&adj);
        let mut blobs: Vec<Vec<usize>> = sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for v in 0..g.n {
            blobs[label[v]].push(v);
        }
        let mut open = vec![Vec::new(); sizes.len()];
        let mut next = 0;
        for v in 0..g.n {
            for _ in 0..open_counts[v] {
                open[label[v]].push((next, v));
                next += 1;
            }
        }
        let masses = open.iter().map(|o| o.len()).collect();
        Self { blobs, blob_of: label, masses, open, time }
    }
}

/// Graph of edges formed by time `t` and the induced blob system.
pub fn snapshot(state: &DynamicState, t: f64) -> Result<(MultiGraph, BlobSystem)> {
    if t > state.time {
        return domain(format!("snapshot time {t} beyond simulated horizon {}", state.time));
    }
    let mut g = MultiGraph::empty(state.degrees.len());
    let mut used = vec![false; *state.offsets.last().unwrap()];
    for e in state.edge_log.iter().take_while(|e| e.time <= t) {
        g.add_edge(state.owner(e.first), state.owner(e.second))?;
        used[e.first] = true;
        used[e.second] = true;
    }
    let adj = g.adjacency();
    let (label, sizes) = component_labels(&adj);
    let mut blobs: Vec<Vec<usize>> = sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
    for v in 0..g.n {
        blobs[label[v]].push(v);
    }
    let mut open = vec![Vec::new(); sizes.len()];
    for v in 0..g.n {
        for h in state.offsets[v]..state.offsets[v + 1] {
            if !used[h] {
                open[label[v]].push((h, v));
            }
        }
    }
    let masses = open.iter().map(|o| o.len()).collect();
    Ok((g, BlobSystem { blobs, blob_of: label, masses, open, time: t }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperEdge {
    pub time: f64,
    pub half_edges: (usize, usize),
    pub blobs: (usize, usize),
    pub vertices: (usize, usize),
    pub original: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoupledGraphs {
    pub t_start: f64,
    pub t_end: f64,
    pub s1: usize,
    pub edges: Vec<SuperEdge>,
}

impl CoupledGraphs {
    pub fn modified_edges(&self) -> impl Iterator<Item = &SuperEdge> {
        self.edges.iter()
    }

    pub fn original_edges(&self) -> impl Iterator<Item = &SuperEdge> {
        self.edges.iter().filter(|e| e.original)
    }

    /// Blob-level partition of the modified process up to time `t` (labels
    /// in first-occurrence order).
    pub fn blob_partition(&self, blobs: usize, t: f64) -> Vec<usize> {
        let mut uf = UnionFind::new(blobs);
        for e in self.edges.iter().take_while(|e| e.time <= t) {
            uf.union(e.blobs.0, e.blobs.1);
        }
        uf.canonical_labels()
    }

    /// Whether each component of snapshot + original edges lies inside one
    /// component of snapshot + modified edges, and original half-edges are
    /// never reused.
    pub fn coupling_holds(&self, snapshot: &MultiGraph) -> bool {
        let mut seen = std::collections::HashSet::new();
        for e in self.original_edges() {
            if !seen.insert(e.half_edges.0) || !seen.insert(e.half_edges.1) {
                return false;
            }
        }
        let mut orig = UnionFind::new(snapshot.n);
        let mut modi = UnionFind::new(snapshot.n);
        for &(u, v) in &snapshot.edges {
            orig.union(u, v);
            modi.union(u, v);
        }
        for e in &self.edges {
            modi.union(e.vertices.0, e.vertices.1);
            if e.original {
                orig.union(e.vertices.0, e.vertices.1);
            }
        }
        (0..snapshot.n).all(|v| {
            let r = orig.find(v);
            modi.find(v) == modi.find(r)
        })
    }

    /// CSV rows `time,u,v,original_flag` (1-based vertices).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["time", "u", "v", "original_flag"])?;
        for e in &self.edges {
            w.write_record([
                format!("{}", e.time),
                (e.vertices.0 + 1).to_string(),
                (e.vertices.1 + 1).to_string(),
                (e.original as u8).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Modified process: every unordered pair of distinct open half-edges rings
/// at rate 2/(s1−1), so events arrive at total rate s1 and pick a uniform
/// pair. Half-edges never die; an event is original when both half-edges are
/// still unused by earlier original events.
pub fn run_modified<R: Rng + ?Sized>(
    blobs: &BlobSystem,
    t_start: f64,
    t_end: f64,
    rng: &mut R,
) -> Result<CoupledGraphs> {
    if blobs.blobs.is_empty() {
        return domain("empty blob system");
    }
    if !(t_end >= t_start) {
        return domain("t_end must not precede t_start");
    }
    let mut halves: Vec<(usize, usize, usize)> = Vec::new();
    for (b, o) in blobs.open.iter().enumerate() {
        halves.extend(o.iter().map(|&(h, v)| (h, v, b)));
    }
    let s1 = halves.len();
    let mut used = vec![false; s1];
    let mut edges = Vec::new();
    if s1 >= 2 {
        let clock = Exp::new(s1 as f64).expect("positive rate");
        let mut t = t_start;
        loop {
            t += clock.sample(rng);
            if t > t_end {
                break;
            }
            let i = rng.random_range(0..s1);
            let mut j = rng.random_range(0..s1 - 1);
            if j >= i {
                j += 1;
            }
            let original = !used[i] && !used[j];
            if original {
                used[i] = true;
                used[j] = true;
            }
            let (hi, vi, bi) = halves[i];
            let (hj, vj, bj) = halves[j];
            edges.push(SuperEdge { time: t, half_edges: (hi, hj), blobs: (bi, bj), vertices: (vi, vj), original });
        }
    }
    Ok(CoupledGraphs { t_start, t_end, s1, edges })
}

/// x_i = n^{-ρ} f_i and q = 1/σ₂(x) + λν²/(μ(ν−1)²).
pub fn modified_parameters(
    masses: &[usize],
    n: usize,
    rho: f64,
    lambda: f64,
    mu: f64,
    nu: f64,
) -> Result<(Vec<f64>, f64)> {
    let scale = (n as f64).powf(-rho);
    let x: Vec<f64> = masses.iter().map(|&f| f as f64 * scale).collect();
    let s2: f64 = x.iter().map(|v| v * v).sum();
    if s2 == 0.0 {
        return domain("all blob masses are zero");
    }
    Ok((x, 1.0 / s2 + lambda * nu * nu / (mu * (nu - 1.0).powi(2))))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub time: f64,
    /// Representatives (smallest original index) of the merging clusters.
    pub i: usize,
    pub j: usize,
}

/// Multiplicative coalescent by Gillespie simulation: clusters i, j merge
/// at rate X_i X_j.
pub fn simulate_mc<R: Rng + ?Sized>(x: &[f64], duration: f64, rng: &mut R) -> Result<Vec<Merge>> {
    if x.is_empty() {
        return domain("empty mass sequence");
    }
    if x.iter().any(|&v| !(v > 0.0)) {
        return domain("masses must be positive");
    }
    let total: f64 = x.iter().sum();
    let mut mass = Fenwick::new(x);
    let pair: Vec<f64> = x.iter().map(|&v| v * (total - v)).collect();
    let mut pairw = Fenwick::new(&pair);
    let mut rep: Vec<usize> = (0..x.len()).collect();
    let mut uf = UnionFind::new(x.len());
    let mut t = 0.0;
    let mut out = Vec::new();
    loop {
        // Σ_{i<j} X_i X_j = ½ Σ_i X_i (S − X_i).
        let rate = 0.5 * pairw.total();
        if rate <= total * total * 1e-14 {
            break;
        }
        t += Exp::new(rate).expect("positive rate").sample(rng);
        if t > duration {
            break;
        }
        let i = pairw.find(rng.random::<f64>() * pairw.total());
        let j = loop {
            let j = mass.find(rng.random::<f64>() * mass.total());
            if j != i {
                break j;
            }
        };
        let (keep, drop) = (i.min(j), i.max(j));
        out.push(Merge { time: t, i: rep[i], j: rep[j] });
        let m = mass.get(keep) + mass.get(drop);
        mass.set(keep, m);
        mass.set(drop, 0.0);
        pairw.set(keep, m * (total - m).max(0.0));
        pairw.set(drop, 0.0);
        uf.union(rep[keep], rep[drop]);
        rep[keep] = rep[keep].min(rep[drop]);
    }
    Ok(out)
}

/// Block labels (first-occurrence order) after applying merges up to `t`.
pub fn mc_partition(n: usize, history: &[Merge], t: f64) -> Vec<usize> {
    let mut uf = UnionFind::new(n);
    for m in history.iter().take_while(|m| m.time <= t) {
        uf.union(m.i, m.j);
    }
    uf.canonical_labels()
}

/// a_i ~ Bin(f_i, π); one extra half-edge goes to index 0 if Σa is odd.
pub fn thin_half_edges<R: Rng + ?Sized>(f: &[usize], pi: f64, rng: &mut R) -> Result<Vec<usize>> {
    if !(0.0..=1.0).contains(&pi) {
        return domain(format!("retention probability {pi} outside [0,1]"));
    }
    let mut a: Vec<usize> = f
        .iter()
        .map(|&k| Binomial::new(k as u64, pi).expect("valid binomial").sample(rng) as usize)
        .collect();
    if !a.is_empty() && a.iter().sum::<usize>() % 2 == 1 {
        a[0] += 1;
    }
    Ok(a)
}

#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }

    pub(crate) fn canonical_labels(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut map = vec![usize::MAX; n];
        let mut next = 0;
        (0..n)
            .map(|v| {
                let r = self.find(v);
                if map[r] == usize::MAX {
                    map[r] = next;
                    next += 1;
                }
                map[r]
            })
            .collect()
    }
}
