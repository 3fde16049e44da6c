use std::collections::VecDeque;

use heavytail_core::metric::{assemble_supergraph, blob_offsets, estimate_polynomial, Phi, SuperGraphSpec};
use heavytail_core::rng::{seeded, stream};
use heavytail_core::{MeasuredMetricSpace, MultiGraph};
use proptest::prelude::*;
use rand::Rng;

fn random_tree<R: Rng>(k: usize, rng: &mut R) -> MultiGraph {
    MultiGraph::from_edges(k, (1..k).map(|v| (rng.random_range(0..v), v))).unwrap()
}

fn random_measure<R: Rng>(k: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 0.05).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Connected superstructure on m blobs: a random tree plus a few extra edges.
fn random_structure<R: Rng>(m: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = (1..m).map(|v| (rng.random_range(0..v), v)).collect();
    for _ in 0..rng.random_range(0..3) {
        let (a, b) = (rng.random_range(0..m), rng.random_range(0..m));
        if a != b {
            e.push((a, b));
        }
    }
    e
}

fn hops(m: usize, edges: &[(usize, usize)], src: usize) -> Vec<usize> {
    let mut adj = vec![Vec::new(); m];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut d = vec![usize::MAX; m];
    d[src] = 0;
    let mut q = VecDeque::from([src]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if d[v] == usize::MAX {
                d[v] = d[u] + 1;
                q.push_back(v);
            }
        }
    }
    d
}

fn as_matrix(b: &MeasuredMetricSpace) -> MeasuredMetricSpace {
    let n = b.len();
    let d = (0..n).flat_map(|x| b.distances_from(x)).collect();
    MeasuredMetricSpace::from_matrix(n, d, b.mu.clone()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn supergraph_metric_properties(seed in any::<u64>(), m in 1usize..30) {
        let mut r = stream(seed, 0);
        let blobs: Vec<MeasuredMetricSpace> = (0..m)
            .map(|_| {
                let k = r.random_range(1..5);
                let mu = random_measure(k, &mut r);
                MeasuredMetricSpace::from_graph(&random_tree(k, &mut r), mu).unwrap()
            })
            .collect();
        let p = random_measure(m, &mut r);
        let structure = random_structure(m, &mut r);
        let spec = SuperGraphSpec::with_random_junctions(blobs.clone(), p.clone(), structure.clone(), &mut r);
        let g = assemble_supergraph(&spec).unwrap();
        let abstract_spec = SuperGraphSpec { blobs: blobs.iter().map(as_matrix).collect(), ..spec.clone() };
        let h = assemble_supergraph(&abstract_spec).unwrap();
        let off = blob_offsets(&blobs);
        let delta_max = blobs.iter().map(|b| b.diameter()).fold(0.0, f64::max);

        for (i, &pi) in p.iter().enumerate() {
            let mass: f64 = g.mu[off[i]..off[i + 1]].iter().sum();
            prop_assert!((mass - pi).abs() < 1e-12);
        }
        let blob_of = |x: usize| off.partition_point(|&o| o <= x) - 1;
        let n = g.len();
        let all: Vec<Vec<f64>> = (0..n).map(|x| g.distances_from(x)).collect();
        for x in 0..n {
            let hx = hops(m, &structure, blob_of(x));
            let dh = h.distances_from(x);
            for y in 0..n {
                prop_assert!((all[x][y] - dh[y]).abs() < 1e-9);
                let k = hx[blob_of(y)] as f64;
                prop_assert!(k <= all[x][y] + 1e-9);
                prop_assert!(all[x][y] <= k + (k + 1.0) * delta_max + 1e-9);
                for z in 0..n {
                    prop_assert!(all[x][z] <= all[x][y] + all[y][z] + 1e-9);
                }
            }
        }
    }

    #[test]
    fn point_blobs_give_superstructure_distance(seed in any::<u64>(), m in 1usize..30) {
        let mut r = stream(seed, 1);
        let blobs = vec![MeasuredMetricSpace::single_point(); m];
        let p = random_measure(m, &mut r);
        let structure = random_structure(m, &mut r);
        let spec = SuperGraphSpec::with_random_junctions(blobs, p, structure.clone(), &mut r);
        let g = assemble_supergraph(&spec).unwrap();
        for x in 0..m {
            let want = hops(m, &structure, x);
            let got = g.distances_from(x);
            for y in 0..m {
                prop_assert_eq!(got[y], want[y] as f64);
            }
        }
    }
}

#[test]
fn polynomial_estimate_is_unbiased() {
    let g = MultiGraph::from_edges(5, [(0, 1), (1, 2), (2, 3), (1, 4)]).unwrap();
    let mu = vec![0.1, 0.3, 0.2, 0.25, 0.15];
    let s = MeasuredMetricSpace::from_graph(&g, mu.clone()).unwrap();
    let mut exact_mean = 0.0;
    let mut exact_soft = 0.0;
    for x in 0..5 {
        let d = s.distances_from(x);
        for y in 0..5 {
            exact_mean += mu[x] * mu[y] * d[y];
            exact_soft += mu[x] * mu[y] * (-d[y]).exp();
        }
    }
    let mut r = seeded(41);
    let (m, se) = estimate_polynomial(&s, &|d| Phi::Mean.eval(d), 3, 40_000, &mut r).unwrap();
    assert!((m - exact_mean).abs() < 3.0 * se, "{m} vs {exact_mean} ± {se}");
    let (m, se) = estimate_polynomial(&s, &|d| Phi::SoftMin.eval(d), 2, 40_000, &mut r).unwrap();
    assert!((m - exact_soft).abs() < 3.0 * se, "{m} vs {exact_soft} ± {se}");
}
