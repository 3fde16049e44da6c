use std::collections::VecDeque;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Adjacency, MultiGraph};
use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentStats {
    pub vertices: Vec<usize>,
    pub size: usize,
    pub edge_count: usize,
    pub surplus: usize,
    pub mass: f64,
    pub diameter: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SusceptibilityReport {
    pub s2: f64,
    pub s3: f64,
    pub spr: f64,
    pub dstar: Option<f64>,
    /// Zero when every component was below the exact cutoff.
    pub dstar_stderr: f64,
    pub max_diameter: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentOptions {
    pub distances: bool,
    pub diameters: bool,
    /// Components above this size get a sampled distance sum.
    pub exact_cutoff: usize,
    /// BFS sources per sampled component.
    pub sampled_sources: usize,
}

impl Default for ComponentOptions {
    fn default() -> Self {
        Self { distances: true, diameters: true, exact_cutoff: 2000, sampled_sources: 64 }
    }
}

impl ComponentOptions {
    pub fn sizes_only() -> Self {
        Self { distances: false, diameters: false, ..Self::default() }
    }
}

/// Component label per vertex, labels in order of smallest vertex, plus sizes.
pub fn component_labels(adj: &Adjacency) -> (Vec<usize>, Vec<usize>) {
    let n = adj.n();
    let mut label = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let c = sizes.len();
        label[s] = c;
        stack.push(s);
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for &u in adj.neighbors(v) {
                if label[u] == usize::MAX {
                    label[u] = c;
                    stack.push(u);
                }
            }
        }
        sizes.push(size);
    }
    (label, sizes)
}

/// BFS distances from `src`; unreachable vertices keep `usize::MAX`. `dist`
/// must be pre-filled with `usize::MAX` and is reset only on `touched`.
pub fn bfs_distances(adj: &Adjacency, src: usize, dist: &mut [usize], touched: &mut Vec<usize>) {
    for &v in touched.iter() {
        dist[v] = usize::MAX;
    }
    touched.clear();
    let mut q = VecDeque::new();
    dist[src] = 0;
    touched.push(src);
    q.push_back(src);
    while let Some(v) = q.pop_front() {
        let dv = dist[v];
        for &u in adj.neighbors(v) {
            if dist[u] == usize::MAX {
                dist[u] = dv + 1;
                touched.push(u);
                q.push_back(u);
            }
        }
    }
}

/// Components sorted by size (ties: smallest vertex), with susceptibilities.
pub fn components_and_stats<R: Rng + ?Sized>(
    g: &MultiGraph,
    weights: Option<&[f64]>,
    opts: &ComponentOptions,
    rng: &mut R,
) -> Result<(Vec<ComponentStats>, SusceptibilityReport)> {
    if let Some(w) = weights {
        if w.len() != g.n {
            return domain(format!("{} weights for {} vertices", w.len(), g.n));
        }
    }
    let w = |v: usize| weights.map_or(1.0, |w| w[v]);
    let adj = g.adjacency();
    let (label, sizes) = component_labels(&adj);
    let mut members: Vec<Vec<usize>> = sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
    for v in 0..g.n {
        members[label[v]].push(v);
    }
    let mut edge_counts = vec![0usize; sizes.len()];
    for &(u, _) in &g.edges {
        edge_counts[label[u]] += 1;
    }

    let mut dist = vec![usize::MAX; g.n];
    let mut touched = Vec::new();
    let mut dsum = 0.0;
    let mut dvar = 0.0;
    let mut comps = Vec::with_capacity(sizes.len());
    for (c, vs) in members.into_iter().enumerate() {
        let size = vs.len();
        let mass: f64 = vs.iter().map(|&v| w(v)).sum();
        let want_all_sources =
            (opts.distances && size <= opts.exact_cutoff) || (opts.diameters && size > 1);
        let mut diameter = if opts.diameters { Some(0) } else { None };
        if want_all_sources && size > 1 {
            let mut ecc_max = 0;
            let mut total = 0.0;
            for &s in &vs {
                bfs_distances(&adj, s, &mut dist, &mut touched);
                let ws = w(s);
                for &t in &touched {
                    ecc_max = ecc_max.max(dist[t]);
                    total += ws * w(t) * dist[t] as f64;
                }
            }
            if opts.diameters {
                diameter = Some(ecc_max);
            }
            if opts.distances && size <= opts.exact_cutoff {
                dsum += total;
            }
        }
        if opts.distances && size > opts.exact_cutoff && mass > 0.0 {
            let (est, var) = sampled_distance_sum(&adj, &vs, &w, mass, opts.sampled_sources, &mut dist, &mut touched, rng);
            dsum += est;
            dvar += var;
        }
        comps.push(ComponentStats {
            vertices: vs,
            size,
            edge_count: edge_counts[c],
            surplus: edge_counts[c] + 1 - size,
            mass,
            diameter,
        });
    }
    comps.sort_by(|a, b| b.size.cmp(&a.size).then(a.vertices[0].cmp(&b.vertices[0])));

    let nf = g.n as f64;
    let report = SusceptibilityReport {
        s2: comps.iter().map(|c| c.mass * c.mass).sum::<f64>() / nf,
        s3: comps.iter().map(|c| c.mass.powi(3)).sum::<f64>() / nf,
        spr: comps.iter().map(|c| c.mass * c.size as f64).sum::<f64>() / nf,
        dstar: opts.distances.then_some(dsum / nf),
        dstar_stderr: dvar.sqrt() / nf,
        max_diameter: if opts.diameters { comps.iter().filter_map(|c| c.diameter).max().or(Some(0)) } else { None },
    };
    Ok((comps, report))
}

/// Estimates Σ_{i,j∈C} w_i w_j d(i,j) = W · E[Σ_j w_j d(X,j)] with X drawn ∝ w.
/// Returns (estimate, variance of the estimate).
#[allow(clippy::too_many_arguments)]
fn sampled_distance_sum<R: Rng + ?Sized>(
    adj: &Adjacency,
    vs: &[usize],
    w: &dyn Fn(usize) -> f64,
    mass: f64,
    sources: usize,
    dist: &mut [usize],
    touched: &mut Vec<usize>,
    rng: &mut R,
) -> (f64, f64) {
    let pick = WeightedIndex::new(vs.iter().map(|&v| w(v))).expect("positive mass");
    let k = sources.max(2);
    let mut vals = Vec::with_capacity(k);
    for _ in 0..k {
        let s = vs[pick.sample(rng)];
        bfs_distances(adj, s, dist, touched);
        vals.push(touched.iter().map(|&t| w(t) * dist[t] as f64).sum::<f64>());
    }
    let mean = vals.iter().sum::<f64>() / k as f64;
    let var = vals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k as f64 - 1.0);
    (mass * mean, mass * mass * var / k as f64)
}

/// Graph distances between `pairs` independent uniform vertex pairs of the
/// largest component (ties by smallest vertex). Empty if that component is a
/// single vertex.
pub fn largest_component_distances<R: Rng + ?Sized>(g: &MultiGraph, pairs: usize, rng: &mut R) -> Vec<usize> {
    let adj = g.adjacency();
    let (label, sizes) = component_labels(&adj);
    let Some(best) = (0..sizes.len()).max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a))) else {
        return Vec::new();
    };
    if sizes[best] < 2 {
        return Vec::new();
    }
    let vs: Vec<usize> = (0..g.n).filter(|&v| label[v] == best).collect();
    let mut dist = vec![usize::MAX; g.n];
    let mut touched = Vec::new();
    (0..pairs)
        .map(|_| {
            let s = vs[rng.random_range(0..vs.len())];
            let t = vs[rng.random_range(0..vs.len())];
            bfs_distances(&adj, s, &mut dist, &mut touched);
            dist[t]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn stats(g: &MultiGraph) -> (Vec<ComponentStats>, SusceptibilityReport) {
        components_and_stats(g, None, &ComponentOptions::default(), &mut seeded(0)).unwrap()
    }

    #[test]
    fn susceptibility_hand_sums() {
        let g = MultiGraph::from_edges(3, [(0, 1)]).unwrap();
        let (c, r) = stats(&g);
        assert_eq!(c[0].vertices, vec![0, 1]);
        assert!((r.s2 - 5.0 / 3.0).abs() < 1e-15);
        assert!((r.s3 - 3.0).abs() < 1e-15);
        assert!((r.spr - 5.0 / 3.0).abs() < 1e-15);

        let p = MultiGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let (c, r) = stats(&p);
        assert!((r.dstar.unwrap() - 8.0 / 3.0).abs() < 1e-15);
        assert_eq!(c[0].diameter, Some(2));
        assert_eq!(r.max_diameter, Some(2));
    }

    #[test]
    fn surplus_cases() {
        let tri = MultiGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(stats(&tri).0[0].surplus, 1);
        let tree = MultiGraph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(stats(&tree).0[0].surplus, 0);
        let lp = MultiGraph::from_edges(1, [(0, 0)]).unwrap();
        assert_eq!(stats(&lp).0[0].surplus, 1);
    }

    #[test]
    fn ordering_and_weights() {
        let g = MultiGraph::from_edges(5, [(3, 4), (1, 2)]).unwrap();
        let w = [1.0, 2.0, 3.0, 4.0, 5.0];
        let (c, _) = components_and_stats(&g, Some(&w), &ComponentOptions::default(), &mut seeded(0)).unwrap();
        assert_eq!(c.iter().map(|c| c.vertices[0]).collect::<Vec<_>>(), vec![1, 3, 0]);
        assert_eq!(c[1].mass, 9.0);
        assert!(components_and_stats(&g, Some(&w[..2]), &ComponentOptions::default(), &mut seeded(0)).is_err());
    }

    #[test]
    fn sampled_matches_exact_on_path() {
        let n = 300;
        let g = MultiGraph::from_edges(n, (0..n - 1).map(|i| (i, i + 1))).unwrap();
        let exact = stats(&g).1.dstar.unwrap();
        let opts = ComponentOptions { exact_cutoff: 10, sampled_sources: 400, ..Default::default() };
        let (_, r) = components_and_stats(&g, None, &opts, &mut seeded(9)).unwrap();
        assert!((r.dstar.unwrap() - exact).abs() < 3.0 * r.dstar_stderr, "{} {} {}", r.dstar.unwrap(), exact, r.dstar_stderr);
    }
}
