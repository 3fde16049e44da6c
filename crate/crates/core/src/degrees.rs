//! Degree and weight sequences, exponents and criticality parameters.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Exponents derived from the power-law index τ ∈ (3, 4).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauExponents {
    pub tau: f64,
    pub alpha: f64,
    pub rho: f64,
    pub eta: f64,
}

pub fn exponents(tau: f64) -> Result<TauExponents> {
    if !(tau > 3.0 && tau < 4.0) {
        return domain(format!("tau must lie in (3,4), got {tau}"));
    }
    Ok(TauExponents {
        tau,
        alpha: 1.0 / (tau - 1.0),
        rho: (tau - 2.0) / (tau - 1.0),
        eta: (tau - 3.0) / (tau - 1.0),
    })
}

/// A non-increasing sequence of positive degrees with even sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeSequence {
    pub n: usize,
    pub d: Vec<usize>,
    #[serde(default, rename = "w", skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
}

impl DegreeSequence {
    /// Validates and sorts `d` (carrying weights along). The sum must be even.
    pub fn new(d: Vec<usize>, weights: Option<Vec<f64>>, tau: Option<f64>) -> Result<Self> {
        if d.is_empty() {
            return domain("empty degree sequence");
        }
        if d.iter().any(|&x| x == 0) {
            return domain("degrees must be positive");
        }
        if d.iter().sum::<usize>() % 2 == 1 {
            return domain("degree sum is odd");
        }
        if let Some(w) = &weights {
            if w.len() != d.len() {
                return domain(format!("{} weights for {} vertices", w.len(), d.len()));
            }
            if w.iter().any(|&x| !(x >= 0.0)) {
                return domain("weights must be non-negative");
            }
        }
        let mut idx: Vec<usize> = (0..d.len()).collect();
        idx.sort_by(|&a, &b| d[b].cmp(&d[a]).then(a.cmp(&b)));
        let sorted_d = idx.iter().map(|&i| d[i]).collect();
        let sorted_w = weights.map(|w| idx.iter().map(|&i| w[i]).collect());
        Ok(Self { n: d.len(), d: sorted_d, weights: sorted_w, tau })
    }

    pub fn total(&self) -> usize {
        self.d.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.total() as f64 / self.n as f64
    }

    pub fn nu(&self) -> f64 {
        criticality_parameter(&self.d).expect("non-empty sequence")
    }

    /// Weights, defaulting to all ones.
    pub fn weights_or_ones(&self) -> Vec<f64> {
        self.weights.clone().unwrap_or_else(|| vec![1.0; self.n])
    }

    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        for d in &self.d {
            writeln!(out, "{d}")?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut d = Vec::new();
        for line in input.lines() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            d.push(t.parse::<usize>().map_err(|e| Error::Parse(format!("`{t}`: {e}")))?);
        }
        Self::new(d, None, None)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: Self = serde_json::from_str(s)?;
        if raw.n != raw.d.len() {
            return domain(format!("n = {} but {} degrees given", raw.n, raw.d.len()));
        }
        Self::new(raw.d, raw.weights, raw.tau)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeMode {
    Quantile,
    Iid,
}

fn quantile_degrees(n: usize, alpha: f64, c: f64) -> Vec<usize> {
    (1..=n)
        .map(|i| {
            let x = (c * (n as f64 / i as f64).powf(alpha)).floor();
            (x as usize).max(1)
        })
        .collect()
}

fn fix_parity(d: &mut [usize]) {
    if d.iter().sum::<usize>() % 2 == 1 {
        d[0] += 1;
    }
}

/// Scale `c` for which the quantile rule has mean at least `target` (smallest such c
/// up to bisection tolerance).
pub fn quantile_scale(n: usize, alpha: f64, target: f64) -> Result<f64> {
    if !(target >= 1.0) {
        return domain(format!("target mean must be at least 1, got {target}"));
    }
    let mean = |c: f64| quantile_degrees(n, alpha, c).iter().sum::<usize>() as f64 / n as f64;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while mean(hi) < target {
        hi *= 2.0;
        if hi > 1e12 {
            return domain("target mean unreachable");
        }
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mean(mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Quantile degrees with an explicit scale, parity fixed.
pub fn quantile_sequence(n: usize, tau: f64, c: f64) -> Result<DegreeSequence> {
    if n < 2 {
        return domain("need n >= 2");
    }
    if !(c > 0.0) {
        return domain("scale must be positive");
    }
    let ex = exponents(tau)?;
    let mut d = quantile_degrees(n, ex.alpha, c);
    fix_parity(&mut d);
    DegreeSequence::new(d, None, Some(tau))
}

/// Generates a degree sequence. In quantile mode the scale is fixed by
/// `target_mean` (c = 1 when absent). In iid mode `target_mean` is ignored.
pub fn generate_degrees<R: Rng + ?Sized>(
    n: usize,
    tau: f64,
    mode: DegreeMode,
    target_mean: Option<f64>,
    rng: &mut R,
) -> Result<DegreeSequence> {
    if n < 2 {
        return domain("need n >= 2");
    }
    let ex = exponents(tau)?;
    match mode {
        DegreeMode::Quantile => {
            let c = match target_mean {
                Some(m) => quantile_scale(n, ex.alpha, m)?,
                None => 1.0,
            };
            quantile_sequence(n, tau, c)
        }
        DegreeMode::Iid => {
            let inv = -1.0 / (tau - 1.0);
            let mut d: Vec<usize> = (0..n)
                .map(|_| {
                    // u in (0,1]; floor(u^{-1/(tau-1)}) has P(D >= x) = x^{-(tau-1)}.
                    let u: f64 = 1.0 - rng.random::<f64>();
                    let x = u.powf(inv).floor();
                    if x >= usize::MAX as f64 / 4.0 { usize::MAX / 4 } else { x as usize }
                })
                .collect();
            d.sort_unstable_by(|a, b| b.cmp(a));
            fix_parity(&mut d);
            DegreeSequence::new(d, None, Some(tau))
        }
    }
}

/// ν_n = Σ d_i(d_i − 1) / Σ d_i.
pub fn criticality_parameter(d: &[usize]) -> Result<f64> {
    let s: u128 = d.iter().map(|&x| x as u128).sum();
    if s == 0 {
        return domain("degree sum must be positive");
    }
    let s2: u128 = d.iter().map(|&x| (x as u128) * (x as u128).saturating_sub(1)).sum();
    Ok(s2 as f64 / s as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowProbability {
    pub p: f64,
    pub clamped: bool,
}

/// p_n(λ) = 1/ν_n + λ n^{-η}, clamped to [0, 1].
pub fn percolation_probability(d: &[usize], lambda: f64, eta: f64) -> Result<WindowProbability> {
    let nu = criticality_parameter(d)?;
    window_probability(nu, d.len(), lambda, eta)
}

pub fn window_probability(nu: f64, n: usize, lambda: f64, eta: f64) -> Result<WindowProbability> {
    if !(nu > 1.0) {
        return domain(format!("criticality parameter must exceed 1, got {nu}"));
    }
    let raw = 1.0 / nu + lambda * (n as f64).powf(-eta);
    let p = raw.clamp(0.0, 1.0);
    Ok(WindowProbability { p, clamped: p != raw })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub theta_estimates: Vec<f64>,
    pub mu_hat: f64,
    pub mu2_hat: f64,
    /// cutoff K' -> n^{-3α} Σ_{i>K'} d_i³ for K' = 0..=K.
    pub third_moment_tail: BTreeMap<usize, f64>,
    pub nu_n: f64,
}

pub fn assumption_diagnostics(d: &[usize], tau: f64, k: usize) -> Result<AssumptionReport> {
    let n = d.len();
    if k >= n {
        return domain(format!("cutoff {k} must be below n = {n}"));
    }
    let ex = exponents(tau)?;
    let nf = n as f64;
    let scale = nf.powf(-ex.alpha);
    let theta_estimates = d[..k].iter().map(|&x| x as f64 * scale).collect();
    let mu_hat = d.iter().sum::<usize>() as f64 / nf;
    let mu2_hat = d.iter().map(|&x| (x * x) as f64).sum::<f64>() / nf;
    let cube_scale = nf.powf(-3.0 * ex.alpha);
    let mut tail: f64 = d.iter().map(|&x| (x as f64).powi(3)).sum();
    let mut third_moment_tail = BTreeMap::new();
    for kk in 0..=k {
        if kk > 0 {
            tail -= (d[kk - 1] as f64).powi(3);
        }
        third_moment_tail.insert(kk, tail.max(0.0) * cube_scale);
    }
    Ok(AssumptionReport {
        theta_estimates,
        mu_hat,
        mu2_hat,
        third_moment_tail,
        nu_n: criticality_parameter(d)?,
    })
}

/// Barely subcritical sequence: quantile hubs (degree ≥ 3) plus a bulk of
/// degree-1 and degree-2 vertices, with the number of 2s chosen so that
/// ν_n ≈ 1 − λ₀ n^{-δ}. The achieved values are reported.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarelySubcritical {
    pub seq: DegreeSequence,
    pub delta: f64,
    pub lambda0_requested: f64,
    pub lambda0_achieved: f64,
    pub nu: f64,
    pub hubs: usize,
}

pub fn barely_subcritical(
    n: usize,
    tau: f64,
    hub_scale: f64,
    delta: f64,
    lambda0: f64,
) -> Result<BarelySubcritical> {
    let ex = exponents(tau)?;
    if !(delta > 0.0 && delta < ex.eta) {
        return domain(format!("delta must lie in (0, {}), got {delta}", ex.eta));
    }
    if !(lambda0 > 0.0) {
        return domain("lambda0 must be positive");
    }
    let nf = n as f64;
    let target_nu = 1.0 - lambda0 * nf.powf(-delta);
    if target_nu <= 0.0 {
        return domain("lambda0 n^{-delta} must be below 1");
    }
    let hubs: Vec<usize> = quantile_degrees(n, ex.alpha, hub_scale)
        .into_iter()
        .take_while(|&x| x >= 3)
        .collect();
    let nh = hubs.len();
    let h0: f64 = hubs.iter().map(|&x| x as f64).sum();
    let h1: f64 = hubs.iter().map(|&x| (x * (x - 1)) as f64).sum();
    let bulk = n - nh;
    let k = (target_nu * (h0 + bulk as f64) - h1) / (2.0 - target_nu);
    if k < 0.0 {
        return domain("hubs alone exceed the target criticality; lower hub_scale");
    }
    let mut twos = (k.round() as usize).min(bulk);
    let mut ones = bulk - twos;
    if (h0 as usize + ones + 2 * twos) % 2 == 1 {
        // Trade a 1 for a 2 (or back) to fix parity while staying in the bulk.
        if ones > 0 {
            ones -= 1;
            twos += 1;
        } else {
            twos -= 1;
            ones += 1;
        }
        if (h0 as usize + ones + 2 * twos) % 2 == 1 {
            return domain("cannot repair parity");
        }
    }
    let mut d = hubs;
    d.extend(std::iter::repeat_n(2, twos));
    d.extend(std::iter::repeat_n(1, ones));
    let nu = criticality_parameter(&d)?;
    let seq = DegreeSequence::new(d, None, Some(tau))?;
    Ok(BarelySubcritical {
        seq,
        delta,
        lambda0_requested: lambda0,
        lambda0_achieved: (1.0 - nu) * nf.powf(delta),
        nu,
        hubs: nh,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn exponent_examples() {
        let e = exponents(3.5).unwrap();
        assert!((e.alpha - 0.4).abs() < 1e-15);
        assert!((e.rho - 0.6).abs() < 1e-15);
        assert!((e.eta - 0.2).abs() < 1e-15);
        let e = exponents(4.0 - 1e-12).unwrap();
        assert!((e.eta - 1.0 / 3.0).abs() < 1e-9 && (e.rho - 2.0 / 3.0).abs() < 1e-9);
        let e = exponents(3.2).unwrap();
        assert!((e.alpha - 1.0 / 2.2).abs() < 1e-15 && (e.eta - 0.2 / 2.2).abs() < 1e-15);
        assert!(exponents(3.0).is_err() && exponents(4.0).is_err() && exponents(f64::NAN).is_err());
    }

    #[test]
    fn exponent_identity_on_grid() {
        for k in 1..1000 {
            let e = exponents(3.0 + k as f64 / 1000.0).unwrap();
            assert!((e.rho - e.alpha - e.eta).abs() < 1e-15);
            assert!(0.0 < e.eta && e.eta < e.alpha && e.alpha < e.rho && e.rho < 1.0);
        }
    }

    #[test]
    fn quantile_small_example() {
        // alpha = 0.5 is outside the tau range, so evaluate the rule directly.
        let mut d = quantile_degrees(4, 0.5, 1.0);
        assert_eq!(d, vec![2, 1, 1, 1]);
        fix_parity(&mut d);
        assert_eq!(d, vec![3, 1, 1, 1]);
    }

    #[test]
    fn quantile_is_deterministic_and_hits_target() {
        let mut r = seeded(1);
        let a = generate_degrees(1000, 3.5, DegreeMode::Quantile, Some(3.0), &mut r).unwrap();
        let b = generate_degrees(1000, 3.5, DegreeMode::Quantile, Some(3.0), &mut r).unwrap();
        assert_eq!(a, b);
        assert!(a.mean() >= 3.0 && a.mean() < 3.1, "{}", a.mean());
        assert_eq!(a.total() % 2, 0);
    }

    #[test]
    fn criticality_examples() {
        assert_eq!(criticality_parameter(&[2, 2, 2]).unwrap(), 1.0);
        assert_eq!(criticality_parameter(&[3, 1, 1, 1]).unwrap(), 1.0);
        assert_eq!(criticality_parameter(&[1, 1]).unwrap(), 0.0);
        assert!(criticality_parameter(&[]).is_err());
    }

    #[test]
    fn window_examples() {
        let w = window_probability(2.0, 10, 0.0, 1.0).unwrap();
        assert_eq!(w.p, 0.5);
        assert!(!w.clamped);
        let w = window_probability(2.0, 10, 1.0, 1.0).unwrap();
        assert!((w.p - 0.6).abs() < 1e-15);
        let w = window_probability(2.0, 10, -100.0, 1.0).unwrap();
        assert_eq!(w.p, 0.0);
        assert!(w.clamped);
        assert!(window_probability(1.0, 10, 0.0, 0.2).is_err());
    }

    #[test]
    fn diagnostics_regular_and_quantile() {
        let d = vec![2usize; 10_000];
        let r = assumption_diagnostics(&d, 3.5, 3).unwrap();
        let expect = 2.0 * 10_000f64.powf(-0.4);
        assert!(r.theta_estimates.iter().all(|&t| (t - expect).abs() < 1e-12));
        assert_eq!(r.nu_n, 1.0);

        let s = quantile_sequence(100_000, 3.5, 1.0).unwrap();
        let r = assumption_diagnostics(&s.d, 3.5, 20).unwrap();
        for (i, t) in r.theta_estimates.iter().enumerate().skip(1) {
            let limit = ((i + 1) as f64).powf(-0.4);
            assert!((t - limit).abs() < 0.01, "i={i} {t} vs {limit}");
        }
        let tails: Vec<f64> = r.third_moment_tail.values().copied().collect();
        assert!(tails.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn text_and_json_roundtrip() {
        let s = DegreeSequence::new(vec![1, 3, 2, 2], Some(vec![0.5, 1.0, 2.0, 3.0]), Some(3.5)).unwrap();
        assert_eq!(s.d, vec![3, 2, 2, 1]);
        assert_eq!(s.weights.as_ref().unwrap(), &vec![1.0, 2.0, 3.0, 0.5]);
        let js = s.to_json().unwrap();
        assert_eq!(DegreeSequence::from_json(&js).unwrap(), s);
        let mut buf = Vec::new();
        s.write_text(&mut buf).unwrap();
        let back = DegreeSequence::read_text(&buf[..]).unwrap();
        assert_eq!(back.d, s.d);
        assert!(DegreeSequence::new(vec![1, 2], None, None).is_err());
    }

    #[test]
    fn barely_subcritical_reports_achieved_lambda() {
        let b = barely_subcritical(100_000, 3.5, 0.5, 0.12, 1.0).unwrap();
        assert!(b.hubs > 0);
        assert!(b.nu < 1.0);
        assert!((b.lambda0_achieved - 1.0).abs() < 0.01, "{}", b.lambda0_achieved);
        assert_eq!(b.seq.total() % 2, 0);
    }
}
