use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ProbVector;
use crate::error::{domain, Result};
use crate::graph::MultiGraph;

/// Rank-one graph: edge {i,j} present independently with probability
/// 1 − exp(−t x_i x_j). Pairs with probability below `cutoff` are skipped
/// (cutoff 0 is exact).
pub fn sample_nr<R: Rng + ?Sized>(x: &[f64], t: f64, cutoff: f64, rng: &mut R) -> Result<MultiGraph> {
    if !(t >= 0.0) {
        return domain(format!("t must be non-negative, got {t}"));
    }
    let n = x.len();
    let mut g = MultiGraph::empty(n);
    if t == 0.0 {
        return Ok(g);
    }
    for i in 0..n {
        for j in i + 1..n {
            let q = -(-t * x[i] * x[j]).exp_m1();
            if q < cutoff {
                continue;
            }
            if rng.random::<f64>() < q {
                g.add_edge(i, j)?;
            }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockParameters {
    pub vertices: Vec<usize>,
    pub p: ProbVector,
    pub a: f64,
}

/// Per-block p (x restricted and renormalized) and a = t (Σ_block x)².
pub fn two_stage_parameters(partition: &[Vec<usize>], x: &[f64], t: f64) -> Result<Vec<BlockParameters>> {
    let mut covered = vec![false; x.len()];
    let mut out = Vec::with_capacity(partition.len());
    for block in partition {
        if block.is_empty() {
            return domain("empty block");
        }
        for &v in block {
            if v >= x.len() || covered[v] {
                return domain(format!("vertex {v} missing or repeated"));
            }
            covered[v] = true;
        }
        let s: f64 = block.iter().map(|&v| x[v]).sum();
        let p = ProbVector::from_weights(&block.iter().map(|&v| x[v]).collect::<Vec<_>>())?;
        out.push(BlockParameters { vertices: block.clone(), p, a: t * s * s });
    }
    if covered.iter().any(|&c| !c) {
        return domain("partition does not cover all vertices");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn parameter_examples() {
        let b = two_stage_parameters(&[vec![0, 1], vec![2]], &[1.0, 2.0, 4.0], 0.1).unwrap();
        assert!((b[0].p[0] - 1.0 / 3.0).abs() < 1e-15 && (b[0].p[1] - 2.0 / 3.0).abs() < 1e-15);
        assert!((b[0].a - 0.9).abs() < 1e-14);
        assert!((b[1].a - 1.6).abs() < 1e-14);
        assert_eq!(b[1].p.as_slice(), &[1.0]);
        let whole = two_stage_parameters(&[vec![0, 1, 2]], &[1.0, 2.0, 4.0], 0.1).unwrap();
        assert!((whole[0].a - 4.9).abs() < 1e-14);
        assert!(two_stage_parameters(&[vec![0, 1], vec![]], &[1.0, 2.0], 0.1).is_err());
        assert!(two_stage_parameters(&[vec![0]], &[1.0, 2.0], 0.1).is_err());
    }

    #[test]
    fn nr_extremes() {
        let mut r = seeded(1);
        assert_eq!(sample_nr(&[1.0, 2.0, 3.0], 0.0, 0.0, &mut r).unwrap().edge_count(), 0);
        // t x_i x_j = ln 2 gives probability one half.
        let x = [2f64.ln().sqrt(), 2f64.ln().sqrt()];
        let hits = (0..20_000).filter(|_| sample_nr(&x, 1.0, 0.0, &mut r).unwrap().edge_count() == 1).count();
        assert!((hits as f64 / 20_000.0 - 0.5).abs() < 0.015);
    }
}
