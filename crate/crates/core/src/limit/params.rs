use rand::Rng;
use serde::{Deserialize, Serialize};

use super::levy::{excursions_and_marks, simulate_thinned_levy, ThetaSeq};
use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitComponent {
    pub xi_star: f64,
    /// θ_j / (Σ_{v∈Ξ} θ_v²)^{1/2} over the jumps of the excursion, decreasing.
    pub theta_sub: Vec<f64>,
    pub gamma: f64,
    pub head_jumps: Vec<usize>,
    pub degenerate: bool,
    pub truncated: bool,
}

/// Per-excursion parameters of the limiting components: ξ* from
/// ξ(θ/(μ(ν−1)), ν²λ/(μ(ν−1)²)), γ = ξ*/(μ(ν−1)) · (Σ_Ξ θ²)^{1/2} and the
/// renormalized jump sequence.
pub fn limit_component_parameters<R: Rng + ?Sized>(
    theta: &ThetaSeq,
    lambda: f64,
    mu: f64,
    nu: f64,
    horizon: f64,
    rng: &mut R,
) -> Result<Vec<LimitComponent>> {
    if !(nu > 1.0) {
        return domain(format!("nu must exceed 1, got {nu}"));
    }
    let c = mu * (nu - 1.0);
    let path = simulate_thinned_levy(&theta.scaled(1.0 / c), nu * nu * lambda / (c * (nu - 1.0)), horizon, rng)?;
    let set = excursions_and_marks(&path, rng);
    Ok(set
        .excursions
        .into_iter()
        .map(|e| {
            // Jump sizes are θ/c; undo the scaling.
            let mut th: Vec<f64> = e.jump_sizes.iter().map(|s| s * c).collect();
            th.sort_by(|a, b| b.total_cmp(a));
            let norm = th.iter().map(|x| x * x).sum::<f64>().sqrt();
            let degenerate = th.is_empty();
            LimitComponent {
                xi_star: e.length,
                theta_sub: if degenerate { Vec::new() } else { th.iter().map(|x| x / norm).collect() },
                gamma: e.length / c * norm,
                head_jumps: e.jumps,
                degenerate,
                truncated: e.truncated,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizeLimitDraw {
    /// ξ₁/ν, the limit of n^{-ρ}|C_(1)|.
    pub size: f64,
    /// Marks in the largest excursion, the limit of its surplus.
    pub marks: usize,
}

/// Draw of (ξ₁/ν, 𝒩₁) with ξ = ξ(θ/(μν), λ/μ).
pub fn component_size_limit<R: Rng + ?Sized>(
    theta: &ThetaSeq,
    lambda: f64,
    mu: f64,
    nu: f64,
    horizon: f64,
    rng: &mut R,
) -> Result<SizeLimitDraw> {
    let path = simulate_thinned_levy(&theta.scaled(1.0 / (mu * nu)), lambda / mu, horizon, rng)?;
    let set = excursions_and_marks(&path, rng);
    Ok(SizeLimitDraw { size: set.largest_length() / nu, marks: set.marks.first().copied().unwrap_or(0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn parameters_are_consistent() {
        let th = ThetaSeq::new((1..=30).map(|i| (i as f64).powf(-0.4)).collect()).unwrap();
        let mut r = seeded(3);
        for _ in 0..50 {
            for c in limit_component_parameters(&th, 0.0, 2.0, 2.5, 200.0, &mut r).unwrap() {
                if c.degenerate {
                    assert!(c.theta_sub.is_empty());
                } else {
                    assert!(c.gamma > 0.0);
                    let s: f64 = c.theta_sub.iter().map(|x| x * x).sum();
                    assert!((s - 1.0).abs() < 1e-12);
                }
            }
        }
        assert!(limit_component_parameters(&th, 0.0, 2.0, 1.0, 10.0, &mut r).is_err());
    }
}
