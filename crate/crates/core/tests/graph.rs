use std::collections::BTreeMap;

use heavytail_core::graph::{
    components_and_stats, explore_degrees, explore_graph, percolate, sample_cm, sample_simple,
    ComponentOptions, StartRule,
};
use heavytail_core::rank_one::oracle::cm_multigraph_law;
use heavytail_core::rng::{seeded, stream};
use heavytail_core::MultiGraph;
use proptest::prelude::*;

fn tv_against(counts: &BTreeMap<Vec<(usize, usize)>, usize>, law: &BTreeMap<Vec<(usize, usize)>, f64>, total: usize) -> f64 {
    let mut s = 0.0;
    for (k, &p) in law {
        s += (counts.get(k).copied().unwrap_or(0) as f64 / total as f64 - p).abs();
    }
    let stray: usize = counts.iter().filter(|(k, _)| !law.contains_key(*k)).map(|(_, &c)| c).sum();
    0.5 * (s + stray as f64 / total as f64)
}

#[test]
fn cm_matches_enumerated_multigraph_law() {
    let d = [3usize, 2, 2, 1];
    let law = cm_multigraph_law(&d).unwrap();
    let mut r = seeded(21);
    let n = 100_000;
    let mut counts = BTreeMap::new();
    for _ in 0..n {
        *counts.entry(sample_cm(&d, &mut r).unwrap().canonical_edges()).or_insert(0) += 1;
    }
    let t = tv_against(&counts, &law, n);
    assert!(t < 0.02, "tv {t}");
}

#[test]
fn on_the_fly_pairing_has_cm_law() {
    let d = [2usize, 2, 2, 1, 1];
    let law = cm_multigraph_law(&d).unwrap();
    let mut r = seeded(22);
    let n = 60_000;
    let mut counts = BTreeMap::new();
    for _ in 0..n {
        let w = explore_degrees(&d, None, StartRule::SizeBiased, &mut r).unwrap();
        *counts.entry(w.graph.unwrap().canonical_edges()).or_insert(0) += 1;
    }
    let t = tv_against(&counts, &law, n);
    assert!(t < 0.02, "tv {t}");
}

#[test]
fn simple_graph_on_three_twos_is_a_triangle() {
    let mut r = seeded(23);
    for _ in 0..50 {
        let s = sample_simple(&[2, 2, 2], &mut r, 10_000).unwrap();
        assert_eq!(s.graph.canonical_edges(), vec![(0, 1), (0, 2), (1, 2)]);
    }
}

#[test]
fn percolated_edge_count_is_binomial() {
    let g = MultiGraph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3), (1, 4)]).unwrap();
    let (m, p) = (g.edge_count(), 0.3);
    let mut r = seeded(24);
    let runs = 100_000;
    let mut hist = vec![0usize; m + 1];
    for _ in 0..runs {
        hist[percolate(&g, p, &mut r).unwrap().edge_count()] += 1;
    }
    let mut binom = vec![0.0; m + 1];
    for (k, b) in binom.iter_mut().enumerate() {
        let c: f64 = (0..k).map(|i| (m - i) as f64 / (i + 1) as f64).product();
        *b = c * p.powi(k as i32) * (1.0 - p).powi((m - k) as i32);
    }
    let tv: f64 = 0.5 * hist.iter().zip(&binom).map(|(&h, &b)| (h as f64 / runs as f64 - b).abs()).sum::<f64>();
    assert!(tv < 0.01, "tv {tv}");
}

#[test]
fn sampled_dstar_agrees_with_exact() {
    let mut d: Vec<usize> = (0..3000).map(|i| if i < 30 { 6 } else if i % 3 == 0 { 1 } else { 2 }).collect();
    if d.iter().sum::<usize>() % 2 == 1 {
        d[0] += 1;
    }
    let g = sample_cm(&d, &mut seeded(25)).unwrap();
    let exact = ComponentOptions { diameters: false, exact_cutoff: usize::MAX, ..ComponentOptions::default() };
    let sampled = ComponentOptions { diameters: false, exact_cutoff: 20, sampled_sources: 200, ..ComponentOptions::default() };
    let (_, a) = components_and_stats(&g, None, &exact, &mut seeded(1)).unwrap();
    let (_, b) = components_and_stats(&g, None, &sampled, &mut seeded(2)).unwrap();
    assert!(b.dstar_stderr > 0.0);
    let (x, y) = (a.dstar.unwrap(), b.dstar.unwrap());
    assert!((x - y).abs() <= 3.0 * b.dstar_stderr, "exact {x} sampled {y} stderr {}", b.dstar_stderr);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn handshake_surplus_and_walk_conservation(
        degs in prop::collection::vec(1usize..6, 2..60),
        seed in any::<u64>(),
    ) {
        let mut d = degs;
        if d.iter().sum::<usize>() % 2 == 1 {
            d[0] += 1;
        }
        let mut r = stream(seed, 0);
        let g = sample_cm(&d, &mut r).unwrap();
        prop_assert_eq!(g.degree.iter().sum::<usize>(), 2 * g.edge_count());

        let (comps, _) = components_and_stats(&g, None, &ComponentOptions::sizes_only(), &mut r).unwrap();
        let surplus: usize = comps.iter().map(|c| c.surplus).sum();
        prop_assert_eq!(surplus + g.n, g.edge_count() + comps.len());

        let w = explore_graph(&g, None, StartRule::SizeBiased, &mut r).unwrap();
        let steps: usize = (0..w.components.len()).map(|c| w.edge_count(c)).sum();
        prop_assert_eq!(steps, g.edge_count());
        let by_min: BTreeMap<usize, usize> = comps.iter().map(|c| (c.vertices[0], c.surplus)).collect();
        for (c, wc) in w.components.iter().enumerate() {
            let key = *wc.vertices.iter().min().unwrap();
            prop_assert_eq!(w.surplus_count(c), by_min[&key]);
        }
    }
}
