use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::{annotate, randomize_child_order, sample_ptree_from, AnnotatedPTree, ProbVector};
use crate::error::{domain, Error, Result};
use crate::graph::MultiGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Poisson count, first endpoint ∝ p_v A(v), ancestor then endpoint.
    Lemma45,
    /// Poisson points under the height profile of A over [0,1].
    Geometric,
}

/// A surplus edge joins `first` to `second`; `ancestor` is the vertex on the
/// root-to-`first` path whose right children contain `second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurplusEdge {
    pub first: usize,
    pub ancestor: usize,
    pub second: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectedSample {
    pub tree: AnnotatedPTree,
    /// Surplus edges after duplicate removal.
    pub surplus: Vec<SurplusEdge>,
    pub duplicates_removed: usize,
    pub graph: MultiGraph,
    pub proposals: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TiltedStats {
    pub proposals: usize,
    pub accepted: usize,
}

impl TiltedStats {
    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.proposals.max(1) as f64
    }
}

/// log M with M = exp(a(1 − σ(p)²)/2). Tree edges and permitted pairs are
/// disjoint sets of unordered pairs, so the exponent of the tilt is at most
/// a Σ_{k<l} p_k p_l, and (e^x − 1)/x ≤ e^x.
pub fn log_envelope(p: &ProbVector, a: f64) -> f64 {
    let s = p.sigma();
    0.5 * a * (1.0 - s * s)
}

/// Rejection sampler for tilted ordered p-trees plus surplus edges.
#[derive(Debug, Clone)]
pub struct TiltedSampler {
    p: ProbVector,
    a: f64,
    route: Route,
    alias: WeightedAliasIndex<f64>,
    log_m: f64,
    pub floor: f64,
    pub min_proposals: usize,
    pub stats: TiltedStats,
}

impl TiltedSampler {
    pub fn new(p: ProbVector, a: f64, route: Route) -> Result<Self> {
        if !(a >= 0.0) || !a.is_finite() {
            return domain(format!("a must be finite and non-negative, got {a}"));
        }
        let alias = p.sampler();
        let log_m = log_envelope(&p, a);
        Ok(Self { p, a, route, alias, log_m, floor: 1e-4, min_proposals: 20_000, stats: TiltedStats::default() })
    }

    pub fn with_floor(mut self, floor: f64, min_proposals: usize) -> Self {
        self.floor = floor;
        self.min_proposals = min_proposals;
        self
    }

    pub fn p(&self) -> &ProbVector {
        &self.p
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Proposes ordered p-trees until one is accepted with probability L/M.
    pub fn sample_tree<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<(AnnotatedPTree, usize)> {
        let mut local = 0;
        loop {
            let m = self.p.len();
            let alias = &self.alias;
            let mut t = sample_ptree_from(m, || alias.sample(rng));
            randomize_child_order(&mut t, rng);
            let an = annotate(&t, &self.p, self.a);
            self.stats.proposals += 1;
            local += 1;
            let log_acc = (an.log_l - self.log_m).min(0.0);
            if rng.random::<f64>() < log_acc.exp() {
                self.stats.accepted += 1;
                return Ok((an, local));
            }
            if self.stats.proposals >= self.min_proposals && self.stats.acceptance_rate() < self.floor {
                return Err(Error::AcceptanceTooLow {
                    rate: self.stats.acceptance_rate(),
                    floor: self.floor,
                    proposals: self.stats.proposals,
                    log_envelope: self.log_m,
                });
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<ConnectedSample> {
        let (tree, proposals) = self.sample_tree(rng)?;
        let raw = match self.route {
            Route::Lemma45 => surplus_lemma45(&tree, rng),
            Route::Geometric => surplus_geometric(&tree, rng),
        };
        Ok(assemble(tree, raw, proposals))
    }
}

/// One-shot convenience wrapper around [`TiltedSampler`].
pub fn sample_tilted_connected<R: Rng + ?Sized>(
    p: &ProbVector,
    a: f64,
    rng: &mut R,
    route: Route,
) -> Result<ConnectedSample> {
    TiltedSampler::new(p.clone(), a, route)?.sample(rng)
}

fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        0
    } else {
        Poisson::new(mean).expect("positive mean").sample(rng) as usize
    }
}

fn surplus_lemma45<R: Rng + ?Sized>(t: &AnnotatedPTree, rng: &mut R) -> Vec<SurplusEdge> {
    let k = poisson(t.lambda, rng);
    if k == 0 {
        return Vec::new();
    }
    let w: Vec<f64> = (0..t.m()).map(|v| t.p[v] * t.a_mass[v]).collect();
    let first = WeightedAliasIndex::new(w).expect("positive Λ");
    (0..k)
        .map(|_| {
            let v = first.sample(rng);
            // Path vertices c (v and its non-root ancestors); RC(parent(c)) =
            // right siblings of c.
            let mut path = Vec::new();
            let mut c = v;
            while t.tree.parent[c].is_some() {
                path.push(c);
                c = t.tree.parent[c].unwrap();
            }
            let mut u = rng.random::<f64>() * t.a_mass[v];
            let mut chosen = *path.iter().rev().find(|&&c| t.right_sum[c] > 0.0).unwrap();
            for &c in &path {
                if u < t.right_sum[c] {
                    chosen = c;
                    break;
                }
                u -= t.right_sum[c];
            }
            let sibs = t.right_siblings(chosen);
            let mut u = rng.random::<f64>() * t.right_sum[chosen];
            let mut second = *sibs.last().unwrap();
            for &s in sibs {
                if u < t.p[s] {
                    second = s;
                    break;
                }
                u -= t.p[s];
            }
            SurplusEdge { first: v, ancestor: t.tree.parent[chosen].unwrap(), second }
        })
        .collect()
}

fn surplus_geometric<R: Rng + ?Sized>(t: &AnnotatedPTree, rng: &mut R) -> Vec<SurplusEdge> {
    let amax = t.a_mass.iter().cloned().fold(0.0, f64::max);
    if amax <= 0.0 || t.a <= 0.0 {
        return Vec::new();
    }
    // Interval of v in [0,1] follows depth-first order with length p_v.
    let mut ends = Vec::with_capacity(t.m());
    let mut acc = 0.0;
    for &v in &t.dfs_order {
        acc += t.p[v];
        ends.push(acc);
    }
    let k = poisson(t.a * amax * acc, rng);
    let mut out = Vec::new();
    for _ in 0..k {
        let x = rng.random::<f64>() * acc;
        let y = rng.random::<f64>() * amax;
        let i = ends.partition_point(|&e| e <= x).min(t.m() - 1);
        let v = t.dfs_order[i];
        if y >= t.a_mass[v] {
            continue;
        }
        let perm = t.permitted(v);
        let mut h = y;
        let mut second = *perm.last().unwrap();
        for &u in &perm {
            if h < t.p[u] {
                second = u;
                break;
            }
            h -= t.p[u];
        }
        out.push(SurplusEdge { first: v, ancestor: t.tree.parent[second].unwrap(), second });
    }
    out
}

fn assemble(tree: AnnotatedPTree, raw: Vec<SurplusEdge>, proposals: usize) -> ConnectedSample {
    let m = tree.m();
    let total = raw.len();
    let mut seen = std::collections::HashSet::new();
    let surplus: Vec<SurplusEdge> = raw
        .into_iter()
        .filter(|e| seen.insert((e.first.min(e.second), e.first.max(e.second))))
        .collect();
    let edges = tree.tree.edges().chain(surplus.iter().map(|e| (e.first, e.second)));
    let graph = MultiGraph::from_edges(m, edges).expect("labels in range");
    ConnectedSample { duplicates_removed: total - surplus.len(), tree, surplus, graph, proposals }
}
