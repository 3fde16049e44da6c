use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Strictly positive probability vector summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbVector {
    p: Vec<f64>,
}

impl ProbVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return domain("empty probability vector");
        }
        if p.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return domain("probabilities must be positive and finite");
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return domain(format!("probabilities sum to {s}, not 1"));
        }
        Ok(Self { p })
    }

    /// Normalizes positive weights.
    pub fn from_weights(w: &[f64]) -> Result<Self> {
        let s: f64 = w.iter().sum();
        if !(s > 0.0) {
            return domain("weights must have positive sum");
        }
        Self::new(w.iter().map(|x| x / s).collect())
    }

    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return domain("empty probability vector");
        }
        Ok(Self { p: vec![1.0 / m as f64; m] })
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    /// σ(p) = (Σ p_i²)^{1/2}.
    pub fn sigma(&self) -> f64 {
        self.p.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn sampler(&self) -> WeightedAliasIndex<f64> {
        WeightedAliasIndex::new(self.p.clone()).expect("valid probability vector")
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.sampler().sample(rng)
    }
}

impl std::ops::Index<usize> for ProbVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.p[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ProbVector::new(vec![0.5, 0.5]).is_ok());
        assert!(ProbVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbVector::new(vec![1.0, 0.0]).is_err());
        let p = ProbVector::from_weights(&[1.0, 3.0]).unwrap();
        assert_eq!(p.as_slice(), &[0.25, 0.75]);
        assert!((ProbVector::uniform(4).unwrap().sigma() - 0.5).abs() < 1e-15);
    }
}
