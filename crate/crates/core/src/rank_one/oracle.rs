//! Exact enumeration oracles for small instances.

use std::collections::BTreeMap;

use super::{PTree, ProbVector};
use crate::error::{domain, Result};
use crate::graph::MultiGraph;

/// Unordered vertex pairs of `0..m` in lexicographic order; bit k of an
/// edge mask refers to `pairs(m)[k]`.
pub fn pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect()
}

/// Edge mask of a simple graph on at most six vertices.
pub fn edge_mask(g: &MultiGraph) -> Option<u32> {
    if g.n > 6 || !g.is_simple() {
        return None;
    }
    let ps = pairs(g.n);
    let mut mask = 0;
    for &(u, v) in &g.edges {
        let k = ps.iter().position(|&e| e == (u.min(v), u.max(v)))?;
        mask |= 1 << k;
    }
    Some(mask)
}

/// Component labels (first-occurrence order) of the graph encoded by `mask`.
pub fn mask_partition(m: usize, mask: u32) -> Vec<usize> {
    let mut uf = crate::dynamic::UnionFind::new(m);
    for (k, &(i, j)) in pairs(m).iter().enumerate() {
        if mask >> k & 1 == 1 {
            uf.union(i, j);
        }
    }
    uf.canonical_labels()
}

pub fn mask_connected(m: usize, mask: u32) -> bool {
    mask_partition(m, mask).iter().all(|&l| l == 0)
}

/// Every rooted labeled tree on `0..m` (m^{m−1} of them).
pub fn enumerate_rooted_trees(m: usize) -> Vec<PTree> {
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    let mut parent = vec![0usize; m];
    for root in 0..m {
        let others: Vec<usize> = (0..m).filter(|&v| v != root).collect();
        let total = m.pow(others.len() as u32);
        for code in 0..total {
            let mut c = code;
            for &v in &others {
                parent[v] = c % m;
                c /= m;
            }
            let reaches_root = others.iter().all(|&v| {
                let mut cur = v;
                for _ in 0..m {
                    if cur == root {
                        return true;
                    }
                    cur = parent[cur];
                }
                cur == root
            });
            if reaches_root {
                let pa = (0..m).map(|v| if v == root { None } else { Some(parent[v]) }).collect();
                out.push(PTree::from_parents(pa));
            }
        }
    }
    out
}

/// p-tree probabilities of all rooted labeled trees, keyed by parent array.
pub fn ptree_law(p: &ProbVector) -> BTreeMap<Vec<Option<usize>>, f64> {
    enumerate_rooted_trees(p.len())
        .into_iter()
        .map(|t| {
            let w = super::ptree_weight(&t, p, false);
            (t.parent, w)
        })
        .collect()
}

fn check_small(m: usize) -> Result<()> {
    if m == 0 || m > 6 {
        return domain(format!("enumeration supports 1..=6 vertices, got {m}"));
    }
    Ok(())
}

/// Law of the rank-one graph with q_ij = 1 − exp(−t x_i x_j) over all edge masks.
pub fn nr_graph_law(x: &[f64], t: f64) -> Result<Vec<(u32, f64)>> {
    check_small(x.len())?;
    let ps = pairs(x.len());
    let q: Vec<f64> = ps.iter().map(|&(i, j)| -(-t * x[i] * x[j]).exp_m1()).collect();
    Ok((0..1u32 << ps.len())
        .map(|mask| {
            let pr = q
                .iter()
                .enumerate()
                .map(|(k, &qk)| if mask >> k & 1 == 1 { qk } else { 1.0 - qk })
                .product();
            (mask, pr)
        })
        .collect())
}

/// Connected-graph law P_con(G) ∝ ∏_{E} q_ij ∏_{∉E} (1 − q_ij), q_ij = 1 − e^{−a p_i p_j}.
pub fn pcon_oracle(p: &ProbVector, a: f64) -> Result<Vec<(u32, f64)>> {
    let m = p.len();
    check_small(m)?;
    if m == 1 {
        return Ok(vec![(0, 1.0)]);
    }
    let law: Vec<(u32, f64)> = nr_graph_law(p.as_slice(), a)?
        .into_iter()
        .filter(|&(mask, _)| mask_connected(m, mask))
        .collect();
    let z: f64 = law.iter().map(|x| x.1).sum();
    if !(z > 0.0) {
        return domain("connection probabilities vanish (a = 0 with m > 1)");
    }
    Ok(law.into_iter().map(|(k, w)| (k, w / z)).collect())
}

/// Component-partition law of the rank-one graph with q_ij = 1 − exp(−t x_i x_j).
pub fn nr_partition_law(x: &[f64], t: f64) -> Result<BTreeMap<Vec<usize>, f64>> {
    let m = x.len();
    let mut out = BTreeMap::new();
    for (mask, pr) in nr_graph_law(x, t)? {
        *out.entry(mask_partition(m, mask)).or_insert(0.0) += pr;
    }
    Ok(out)
}

/// Law of the configuration-model multigraph (sorted edge list) for Σd ≤ 10.
pub fn cm_multigraph_law(d: &[usize]) -> Result<BTreeMap<Vec<(usize, usize)>, f64>> {
    let owners: Vec<usize> = d.iter().enumerate().flat_map(|(v, &k)| std::iter::repeat_n(v, k)).collect();
    if owners.len() % 2 == 1 || owners.len() > 10 {
        return domain("need an even degree sum of at most 10");
    }
    let mut out = BTreeMap::new();
    let mut count = 0usize;
    fn rec(
        free: &mut Vec<usize>,
        owners: &[usize],
        acc: &mut Vec<(usize, usize)>,
        out: &mut BTreeMap<Vec<(usize, usize)>, f64>,
        count: &mut usize,
    ) {
        if free.is_empty() {
            let mut e = acc.clone();
            e.sort_unstable();
            *out.entry(e).or_insert(0.0) += 1.0;
            *count += 1;
            return;
        }
        let h = free.remove(0);
        for k in 0..free.len() {
            let g = free.remove(k);
            let (u, v) = (owners[h], owners[g]);
            acc.push((u.min(v), u.max(v)));
            rec(free, owners, acc, out, count);
            acc.pop();
            free.insert(k, g);
        }
        free.insert(0, h);
    }
    let mut free: Vec<usize> = (0..owners.len()).collect();
    rec(&mut free, &owners, &mut Vec::new(), &mut out, &mut count);
    for v in out.values_mut() {
        *v /= count as f64;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_counts_and_normalization() {
        for m in 1..=5 {
            assert_eq!(enumerate_rooted_trees(m).len(), m.pow(m as u32 - 1));
        }
        for m in 1..=4 {
            let p = ProbVector::from_weights(&(1..=m).map(|i| i as f64).collect::<Vec<_>>()).unwrap();
            let s: f64 = ptree_law(&p).values().sum();
            assert!((s - 1.0).abs() < 1e-12, "m={m} sum={s}");
        }
    }

    #[test]
    fn pcon_small_cases() {
        let p2 = ProbVector::uniform(2).unwrap();
        assert_eq!(pcon_oracle(&p2, 1.0).unwrap(), vec![(1, 1.0)]);
        let p3 = ProbVector::uniform(3).unwrap();
        let law = pcon_oracle(&p3, 1.0).unwrap();
        assert_eq!(law.len(), 4);
        let q = 1.0 - (-1.0f64 / 9.0).exp();
        let tri = q.powi(3) / (3.0 * q * q * (1.0 - q) + q.powi(3));
        let got = law.iter().find(|x| x.0 == 0b111).unwrap().1;
        assert!((got - tri).abs() < 1e-14);
        assert!((law.iter().map(|x| x.1).sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(pcon_oracle(&ProbVector::uniform(7).unwrap(), 1.0).is_err());
    }

    #[test]
    fn partition_law_sums_to_one() {
        let law = nr_partition_law(&[1.0, 2.0, 3.0], 0.1).unwrap();
        assert_eq!(law.len(), 5);
        assert!((law.values().sum::<f64>() - 1.0).abs() < 1e-14);
        let single = law[&vec![0, 1, 2]];
        assert!((single - (-0.1f64 * (2.0 + 3.0 + 6.0)).exp()).abs() < 1e-14);
    }

    #[test]
    fn cm_law_counts() {
        let law = cm_multigraph_law(&[1, 1, 1, 1]).unwrap();
        assert_eq!(law.len(), 3);
        assert!(law.values().all(|&v| (v - 1.0 / 3.0).abs() < 1e-15));
        let law = cm_multigraph_law(&[2, 2, 2]).unwrap();
        assert!((law[&vec![(0, 1), (0, 2), (1, 2)]] - 8.0 / 15.0).abs() < 1e-15);
    }
}
