//! Finite measured metric spaces, blob super graphs and distance-matrix
//! statistics.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::graph::{component_labels, Adjacency, MultiGraph};

#[derive(Debug, Clone)]
enum Backing {
    /// Unit-length edges.
    Graph { adj: Adjacency, edges: Vec<(usize, usize)> },
    /// Positive edge lengths. Points of the same block also keep their
    /// within-block distance, which the edges alone do not encode.
    Weighted { offsets: Vec<usize>, targets: Vec<usize>, lengths: Vec<f64>, blocks: Vec<MeasuredMetricSpace>, block_offsets: Vec<usize> },
    /// Dense symmetric matrix, row-major.
    Matrix { n: usize, d: Vec<f64> },
}

/// Points `0..len` with a distance, a probability measure and a scale.
#[derive(Debug, Clone)]
pub struct MeasuredMetricSpace {
    backing: Backing,
    pub mu: Vec<f64>,
    pub scale: f64,
}

fn check_measure(mu: &[f64], n: usize) -> Result<()> {
    if mu.len() != n {
        return domain(format!("measure has {} entries for {} points", mu.len(), n));
    }
    if mu.iter().any(|&x| !(x >= 0.0)) {
        return domain("measure must be non-negative");
    }
    let s: f64 = mu.iter().sum();
    if (s - 1.0).abs() > 1e-9 {
        return domain(format!("measure sums to {s}"));
    }
    Ok(())
}

impl MeasuredMetricSpace {
    /// Graph metric of a connected graph with measure `mu`.
    pub fn from_graph(g: &MultiGraph, mu: Vec<f64>) -> Result<Self> {
        check_measure(&mu, g.n)?;
        let adj = g.adjacency();
        if g.n > 0 && component_labels(&adj).1.len() != 1 {
            return domain("graph is not connected");
        }
        Ok(Self { backing: Backing::Graph { adj, edges: g.edges.clone() }, mu, scale: 1.0 })
    }

    /// Graph metric with the uniform (counting) measure.
    pub fn from_graph_uniform(g: &MultiGraph) -> Result<Self> {
        Self::from_graph(g, vec![1.0 / g.n as f64; g.n])
    }

    pub fn from_matrix(n: usize, d: Vec<f64>, mu: Vec<f64>) -> Result<Self> {
        check_measure(&mu, n)?;
        if d.len() != n * n {
            return domain("matrix size mismatch");
        }
        for i in 0..n {
            if d[i * n + i] != 0.0 {
                return domain("non-zero diagonal");
            }
            for j in 0..n {
                let x = d[i * n + j];
                if !(x >= 0.0) || !x.is_finite() || x != d[j * n + i] {
                    return domain("matrix must be finite, non-negative and symmetric");
                }
            }
        }
        Ok(Self { backing: Backing::Matrix { n, d }, mu, scale: 1.0 })
    }

    pub fn single_point() -> Self {
        Self::from_matrix(1, vec![0.0], vec![1.0]).expect("valid")
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    /// The underlying graph, if the space is graph-backed.
    pub fn graph_edges(&self) -> Option<&[(usize, usize)]> {
        match &self.backing {
            Backing::Graph { edges, .. } => Some(edges),
            _ => None,
        }
    }

    /// Unscaled distances from `x` to every point.
    pub fn distances_from(&self, x: usize) -> Vec<f64> {
        match &self.backing {
            Backing::Graph { adj, .. } => {
                let mut dist = vec![f64::INFINITY; adj.n()];
                let mut q = VecDeque::new();
                dist[x] = 0.0;
                q.push_back(x);
                while let Some(v) = q.pop_front() {
                    for &u in adj.neighbors(v) {
                        if dist[u].is_infinite() {
                            dist[u] = dist[v] + 1.0;
                            q.push_back(u);
                        }
                    }
                }
                dist
            }
            Backing::Weighted { offsets, targets, lengths, blocks, block_offsets } => {
                let mut dist = dijkstra(offsets, targets, lengths, x);
                let k = block_offsets.partition_point(|&o| o <= x) - 1;
                let b = &blocks[k];
                let lo = block_offsets[k];
                for (y, d) in b.distances_from(x - lo).into_iter().enumerate() {
                    dist[lo + y] = dist[lo + y].min(d * b.scale);
                }
                dist
            }
            Backing::Matrix { n, d } => d[x * n..(x + 1) * n].to_vec(),
        }
    }

    /// Scaled distance between two points.
    pub fn dist(&self, x: usize, y: usize) -> f64 {
        match &self.backing {
            Backing::Matrix { n, d } => self.scale * d[x * n + y],
            _ => self.scale * self.distances_from(x)[y],
        }
    }

    /// Scaled diameter (all sources).
    pub fn diameter(&self) -> f64 {
        (0..self.len())
            .map(|x| self.distances_from(x).into_iter().fold(0.0, f64::max))
            .fold(0.0, f64::max)
            * self.scale
    }

    pub fn sampler(&self) -> WeightedAliasIndex<f64> {
        WeightedAliasIndex::new(self.mu.clone()).expect("valid measure")
    }
}

#[derive(Clone, Copy, PartialEq)]
struct HeapItem(f64, usize);
impl Eq for HeapItem {}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for HeapItem {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}

fn dijkstra(offsets: &[usize], targets: &[usize], lengths: &[f64], s: usize) -> Vec<f64> {
    let n = offsets.len() - 1;
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    heap.push(HeapItem(0.0, s));
    while let Some(HeapItem(d, v)) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for k in offsets[v]..offsets[v + 1] {
            let nd = d + lengths[k];
            let u = targets[k];
            if nd < dist[u] {
                dist[u] = nd;
                heap.push(HeapItem(nd, u));
            }
        }
    }
    dist
}

/// c·M: distances multiplied by c, measure unchanged.
pub fn rescale(m: &MeasuredMetricSpace, c: f64) -> Result<MeasuredMetricSpace> {
    if !(c > 0.0) {
        return domain(format!("scale factor must be positive, got {c}"));
    }
    let mut out = m.clone();
    out.scale *= c;
    Ok(out)
}

/// Blobs glued along a superstructure graph by unit edges between junction points.
#[derive(Debug, Clone)]
pub struct SuperGraphSpec {
    pub blobs: Vec<MeasuredMetricSpace>,
    pub p: Vec<f64>,
    pub superstructure: Vec<(usize, usize)>,
    /// For each superstructure edge (i, j): (point of blob i, point of blob j).
    pub junctions: Vec<(usize, usize)>,
}

impl SuperGraphSpec {
    /// Draws junction points X_{i,j} ~ μ_i independently per edge end.
    pub fn with_random_junctions<R: Rng + ?Sized>(
        blobs: Vec<MeasuredMetricSpace>,
        p: Vec<f64>,
        superstructure: Vec<(usize, usize)>,
        rng: &mut R,
    ) -> Self {
        let samplers: Vec<_> = blobs.iter().map(|b| b.sampler()).collect();
        let junctions = superstructure
            .iter()
            .map(|&(i, j)| (samplers[i].sample(rng), samplers[j].sample(rng)))
            .collect();
        Self { blobs, p, superstructure, junctions }
    }
}

/// Points of blob i are numbered after those of blobs 0..i. Returns the
/// offsets used.
pub fn blob_offsets(blobs: &[MeasuredMetricSpace]) -> Vec<usize> {
    let mut off = vec![0];
    for b in blobs {
        off.push(off.last().unwrap() + b.len());
    }
    off
}

pub fn assemble_supergraph(spec: &SuperGraphSpec) -> Result<MeasuredMetricSpace> {
    let m = spec.blobs.len();
    if spec.p.len() != m {
        return domain(format!("{} weights for {} blobs", spec.p.len(), m));
    }
    if spec.junctions.len() != spec.superstructure.len() {
        return domain("one junction pair per superstructure edge required");
    }
    for (&(i, j), &(x, y)) in spec.superstructure.iter().zip(&spec.junctions) {
        if i >= m || j >= m || x >= spec.blobs[i].len() || y >= spec.blobs[j].len() {
            return domain(format!("invalid superstructure edge ({i},{j}) with junctions ({x},{y})"));
        }
    }
    let off = blob_offsets(&spec.blobs);
    let total = off[m];
    let mut mu = Vec::with_capacity(total);
    for (b, &pi) in spec.blobs.iter().zip(&spec.p) {
        mu.extend(b.mu.iter().map(|&w| w * pi));
    }
    let unit = spec
        .blobs
        .iter()
        .all(|b| matches!(b.backing, Backing::Graph { .. }) && b.scale == 1.0);
    if unit {
        let mut g = MultiGraph::empty(total);
        for (k, b) in spec.blobs.iter().enumerate() {
            for &(u, v) in b.graph_edges().unwrap() {
                g.add_edge(off[k] + u, off[k] + v)?;
            }
        }
        for (&(i, j), &(x, y)) in spec.superstructure.iter().zip(&spec.junctions) {
            g.add_edge(off[i] + x, off[j] + y)?;
        }
        return MeasuredMetricSpace::from_graph(&g, mu);
    }
    // Auxiliary weighted graph: every point joined to each junction point of
    // its blob at blob distance, plus unit superstructure edges.
    let mut junction_pts: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (&(i, j), &(x, y)) in spec.superstructure.iter().zip(&spec.junctions) {
        junction_pts[i].push(x);
        junction_pts[j].push(y);
    }
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); total];
    for (k, b) in spec.blobs.iter().enumerate() {
        junction_pts[k].sort_unstable();
        junction_pts[k].dedup();
        for &jp in &junction_pts[k] {
            let dist = b.distances_from(jp);
            for (x, &dx) in dist.iter().enumerate() {
                if !dx.is_finite() {
                    return domain(format!("blob {k} is disconnected"));
                }
                if x != jp {
                    let len = dx * b.scale;
                    adj[off[k] + jp].push((off[k] + x, len));
                    adj[off[k] + x].push((off[k] + jp, len));
                }
            }
        }
    }
    for (&(i, j), &(x, y)) in spec.superstructure.iter().zip(&spec.junctions) {
        adj[off[i] + x].push((off[j] + y, 1.0));
        adj[off[j] + y].push((off[i] + x, 1.0));
    }
    let mut offsets = vec![0];
    let mut targets = Vec::new();
    let mut lengths = Vec::new();
    for row in adj {
        for (t, l) in row {
            targets.push(t);
            lengths.push(l);
        }
        offsets.push(targets.len());
    }
    check_measure(&mu, total)?;
    let backing = Backing::Weighted { offsets, targets, lengths, blocks: spec.blobs.clone(), block_offsets: off };
    let space = MeasuredMetricSpace { backing, mu, scale: 1.0 };
    if total > 0 && space.distances_from(0).iter().any(|d| d.is_infinite()) {
        return domain("super graph is disconnected");
    }
    Ok(space)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlobFunctionals {
    /// u_i = E[d_i(X, X')] with X, X' ~ μ_i independent.
    pub u: Vec<f64>,
    /// Monte Carlo stderr of u_i (zero when exact).
    pub u_stderr: Vec<f64>,
    #[serde(rename = "B")]
    pub b: f64,
    pub delta_max: f64,
    pub assumption_ratio: f64,
}

/// u_i, B = Σ p_i u_i, Δ_max and σ(p)Δ_max/(B+1). Blobs larger than
/// `cutoff` points use `samples` Monte Carlo pairs and skip the diameter
/// search over all sources beyond `cutoff` (Δ then comes from a sweep of
/// sampled sources and is a lower bound).
pub fn blob_functionals<R: Rng + ?Sized>(
    blobs: &[MeasuredMetricSpace],
    p: &[f64],
    cutoff: usize,
    samples: usize,
    rng: &mut R,
) -> Result<BlobFunctionals> {
    if p.len() != blobs.len() {
        return domain(format!("{} weights for {} blobs", p.len(), blobs.len()));
    }
    let mut u = Vec::with_capacity(blobs.len());
    let mut u_stderr = Vec::with_capacity(blobs.len());
    let mut delta_max: f64 = 0.0;
    for b in blobs {
        if b.len() <= cutoff {
            let mut s = 0.0;
            let mut diam: f64 = 0.0;
            for x in 0..b.len() {
                let d = b.distances_from(x);
                for (y, &dy) in d.iter().enumerate() {
                    s += b.mu[x] * b.mu[y] * dy;
                    diam = diam.max(dy);
                }
            }
            u.push(s * b.scale);
            u_stderr.push(0.0);
            delta_max = delta_max.max(diam * b.scale);
        } else {
            let smp = b.sampler();
            let vals: Vec<f64> = (0..samples.max(2))
                .map(|_| {
                    let x = smp.sample(rng);
                    let y = smp.sample(rng);
                    b.dist(x, y)
                })
                .collect();
            let (mean, se) = mean_stderr(&vals);
            u.push(mean);
            u_stderr.push(se);
            for _ in 0..8 {
                let x = smp.sample(rng);
                delta_max = delta_max.max(b.distances_from(x).into_iter().fold(0.0, f64::max) * b.scale);
            }
        }
    }
    let b: f64 = p.iter().zip(&u).map(|(pi, ui)| pi * ui).sum();
    let sigma = p.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(BlobFunctionals { u, u_stderr, b, delta_max, assumption_ratio: sigma * delta_max / (b + 1.0) })
}

pub(crate) fn mean_stderr(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// l×l matrix of scaled distances between l i.i.d. μ-samples.
pub fn sample_distance_matrix<R: Rng + ?Sized>(m: &MeasuredMetricSpace, l: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let smp = m.sampler();
    let pts: Vec<usize> = (0..l).map(|_| smp.sample(rng)).collect();
    distance_matrix_at(m, &pts)
}

/// Scaled distances among the given points.
pub fn distance_matrix_at(m: &MeasuredMetricSpace, pts: &[usize]) -> Vec<Vec<f64>> {
    pts.iter()
        .map(|&x| {
            let d = m.distances_from(x);
            pts.iter().map(|&y| d[y] * m.scale).collect()
        })
        .collect()
}

/// Test functions of a distance matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phi {
    /// D[i][j].
    Coordinate(usize, usize),
    Max,
    /// Mean off-diagonal entry.
    Mean,
    /// Mean off-diagonal exp(−D).
    SoftMin,
}

impl Phi {
    pub fn eval(&self, d: &[Vec<f64>]) -> f64 {
        let l = d.len();
        let off = || (0..l).flat_map(move |i| (0..l).filter(move |&j| j != i).map(move |j| (i, j)));
        match *self {
            Phi::Coordinate(i, j) => d[i][j],
            Phi::Max => d.iter().flatten().cloned().fold(0.0, f64::max),
            Phi::Mean => off().map(|(i, j)| d[i][j]).sum::<f64>() / (l * (l - 1)) as f64,
            Phi::SoftMin => off().map(|(i, j)| (-d[i][j]).exp()).sum::<f64>() / (l * (l - 1)) as f64,
        }
    }
}

/// Monte Carlo estimate of ∫ φ(D) dμ^{⊗l}: (mean, stderr) over `reps` matrices.
pub fn estimate_polynomial<R: Rng + ?Sized>(
    m: &MeasuredMetricSpace,
    phi: &dyn Fn(&[Vec<f64>]) -> f64,
    l: usize,
    reps: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    if l < 2 {
        return domain("need l >= 2");
    }
    if reps == 0 {
        return domain("need at least one repetition");
    }
    let vals: Vec<f64> = (0..reps).map(|_| phi(&sample_distance_matrix(m, l, rng))).collect();
    Ok(mean_stderr(&vals))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub statistic: f64,
    /// 95% quantile of the statistic under random relabeling of the pooled sample.
    pub null_quantile: f64,
    pub exceeds_null: bool,
}

fn sorted_offdiag(d: &[Vec<f64>]) -> Vec<f64> {
    let l = d.len();
    let mut v: Vec<f64> = (0..l).flat_map(|i| (i + 1..l).map(move |j| (i, j))).map(|(i, j)| d[i][j]).collect();
    v.sort_by(f64::total_cmp);
    v
}

fn sum_abs_diff_1d(z: &mut [f64]) -> f64 {
    z.sort_by(f64::total_cmp);
    let n = z.len() as f64;
    z.iter().enumerate().map(|(k, &x)| x * (2.0 * k as f64 - n + 1.0)).sum()
}

fn energy(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let (n, m) = (a.len() as f64, b.len() as f64);
    if a[0].len() == 1 {
        let mut xa: Vec<f64> = a.iter().map(|v| v[0]).collect();
        let mut xb: Vec<f64> = b.iter().map(|v| v[0]).collect();
        let mut pool: Vec<f64> = xa.iter().chain(&xb).cloned().collect();
        let (sa, sb, sp) = (sum_abs_diff_1d(&mut xa), sum_abs_diff_1d(&mut xb), sum_abs_diff_1d(&mut pool));
        let cross = (sp - sa - sb) / (n * m);
        return 2.0 * cross - 2.0 * sa / (n * n) - 2.0 * sb / (m * m);
    }
    let norm = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
    let mean_pair = |u: &[Vec<f64>], v: &[Vec<f64>]| {
        let mut s = 0.0;
        for x in u {
            for y in v {
                s += norm(x, y);
            }
        }
        s / (u.len() * v.len()) as f64
    };
    2.0 * mean_pair(a, b) - mean_pair(a, a) - mean_pair(b, b)
}

/// Energy distance between the laws of sorted off-diagonal distance vectors
/// of the two spaces, with a 95% permutation band. Multi-dimensional inputs
/// are capped at 2000 matrices per side to bound the quadratic cost.
pub fn discrepancy<R: Rng + ?Sized>(
    m1: &MeasuredMetricSpace,
    m2: &MeasuredMetricSpace,
    l: usize,
    reps: usize,
    permutations: usize,
    rng: &mut R,
) -> Result<Discrepancy> {
    if l < 2 || reps < 2 {
        return domain("need l >= 2 and reps >= 2");
    }
    let reps = if l > 2 { reps.min(2000) } else { reps };
    let a: Vec<Vec<f64>> = (0..reps).map(|_| sorted_offdiag(&sample_distance_matrix(m1, l, rng))).collect();
    let b: Vec<Vec<f64>> = (0..reps).map(|_| sorted_offdiag(&sample_distance_matrix(m2, l, rng))).collect();
    Ok(energy_with_band(&a, &b, permutations, rng))
}

pub(crate) fn energy_with_band<R: Rng + ?Sized>(
    a: &[Vec<f64>],
    b: &[Vec<f64>],
    permutations: usize,
    rng: &mut R,
) -> Discrepancy {
    let statistic = energy(a, b);
    let mut pool: Vec<Vec<f64>> = a.iter().chain(b).cloned().collect();
    let mut null: Vec<f64> = (0..permutations.max(1))
        .map(|_| {
            pool.shuffle(rng);
            energy(&pool[..a.len()], &pool[a.len()..])
        })
        .collect();
    null.sort_by(f64::total_cmp);
    let q = null[((null.len() as f64 * 0.95).ceil() as usize).clamp(1, null.len()) - 1];
    Discrepancy { statistic, null_quantile: q, exceeds_null: statistic > q }
}
