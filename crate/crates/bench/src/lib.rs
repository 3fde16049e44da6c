//! Shared fixtures for the sampler benchmarks.

use heavytail_core::degrees::{exponents, quantile_sequence};
use heavytail_core::limit::ThetaSeq;
use heavytail_core::rank_one::ProbVector;

pub const TAU: f64 = 3.5;

/// Quantile degrees at τ = 3.5 with unit scale.
pub fn degrees(n: usize) -> Vec<usize> {
    quantile_sequence(n, TAU, 1.0).expect("valid quantile sequence").d
}

/// θ_i = i^{-α}, i = 1..=k.
pub fn theta(k: usize) -> ThetaSeq {
    let alpha = exponents(TAU).expect("tau in range").alpha;
    ThetaSeq::new((1..=k).map(|i| (i as f64).powf(-alpha)).collect()).expect("valid theta")
}

/// p_i ∝ i^{-α} on m vertices.
pub fn power_p(m: usize) -> ProbVector {
    let alpha = exponents(TAU).expect("tau in range").alpha;
    ProbVector::from_weights(&(1..=m).map(|i| (i as f64).powf(-alpha)).collect::<Vec<_>>()).expect("valid weights")
}
