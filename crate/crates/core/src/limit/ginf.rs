use rand::Rng;

use crate::error::{domain, Result};
use crate::metric::{rescale, MeasuredMetricSpace};
use crate::rank_one::{sample_tilted_connected, ConnectedSample, ProbVector, Route};

/// Finite-m proxy σ(p)·G̃_m(p, a) with a·σ(p) = γ.
#[derive(Debug, Clone)]
pub struct GInfinity {
    pub space: MeasuredMetricSpace,
    pub p: ProbVector,
    pub a: f64,
    pub sigma: f64,
    pub sample: ConnectedSample,
}

/// p with p_i = σβ_i for i ≤ K and m−K equal filler entries, σ = σ(p).
///
/// Solving Σp = 1 and Σp² = σ² gives σ = 1/(B1 + ((1−B2)(m−K))^{1/2}).
pub fn calibrate_p(beta: &[f64], m: usize) -> Result<ProbVector> {
    let k = beta.len();
    if k == 0 || beta.iter().any(|&b| !(b > 0.0)) {
        return domain("beta must be non-empty and positive");
    }
    if m <= k {
        return domain(format!("m = {m} must exceed the truncation K = {k}"));
    }
    let b1: f64 = beta.iter().sum();
    let b2: f64 = beta.iter().map(|b| b * b).sum();
    if b2 >= 1.0 {
        return domain(format!("sum of beta^2 = {b2} must be below 1"));
    }
    let rest = (m - k) as f64;
    let sigma = 1.0 / (b1 + ((1.0 - b2) * rest).sqrt());
    let filler = (1.0 - sigma * b1) / rest;
    let smallest = sigma * beta.iter().cloned().fold(f64::INFINITY, f64::min);
    if filler > smallest {
        return domain(format!(
            "calibration infeasible: filler mass {filler:.3e} exceeds smallest hub mass {smallest:.3e}; increase m (B1 = {b1:.4}, B2 = {b2:.4})"
        ));
    }
    let mut p: Vec<f64> = beta.iter().map(|b| sigma * b).collect();
    p.resize(m, filler);
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    ProbVector::new(p)
}

pub fn approx_g_infinity<R: Rng + ?Sized>(beta: &[f64], gamma: f64, m: usize, rng: &mut R) -> Result<GInfinity> {
    if !(gamma >= 0.0) {
        return domain("gamma must be non-negative");
    }
    let p = calibrate_p(beta, m)?;
    let sigma = p.sigma();
    let a = gamma / sigma;
    let sample = sample_tilted_connected(&p, a, rng, Route::Lemma45)?;
    let base = MeasuredMetricSpace::from_graph(&sample.graph, p.as_slice().to_vec())?;
    let space = rescale(&base, sigma)?;
    Ok(GInfinity { space, p, a, sigma, sample })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn beta() -> Vec<f64> {
        let raw: Vec<f64> = (1..=10).map(|i| (i as f64).powf(-0.4)).collect();
        let s = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        raw.iter().map(|x| x / s * 0.5f64.sqrt()).collect()
    }

    #[test]
    fn calibration_matches_beta() {
        let b = beta();
        for m in [500, 2000] {
            let p = calibrate_p(&b, m).unwrap();
            let s = p.sigma();
            for i in 0..b.len() {
                assert!((p[i] / s - b[i]).abs() < 1e-10);
            }
        }
        assert!(calibrate_p(&[0.9, 0.9], 100).is_err());
        assert!(calibrate_p(&b, 10).is_err());
        assert!(calibrate_p(&[0.1], 2).is_err());
    }

    #[test]
    fn zero_gamma_is_a_tree() {
        let mut r = seeded(5);
        for _ in 0..5 {
            let g = approx_g_infinity(&beta(), 0.0, 300, &mut r).unwrap();
            assert_eq!(g.a, 0.0);
            assert!(g.sample.surplus.is_empty());
            assert_eq!(g.sample.graph.edge_count(), 299);
        }
    }
}
