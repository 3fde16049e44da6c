//! Summary statistics used by the experiments.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::fenwick::Fenwick;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    /// Ordinary least-squares standard error of the slope (0 with two points).
    pub stderr: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<Fit> {
    if x.len() != y.len() {
        return domain(format!("length mismatch: {} vs {}", x.len(), y.len()));
    }
    if x.len() < 2 || x.iter().chain(y).any(|v| !v.is_finite()) {
        return domain("need at least two finite points");
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return domain("x values are all equal");
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let stderr = if x.len() > 2 {
        let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
        (rss / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(Fit { slope, intercept, stderr })
}

/// Least-squares fit of log y on log x.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Result<Fit> {
    if x.iter().chain(y).any(|&v| !(v > 0.0)) {
        return domain("log-log regression needs positive values");
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub distance: f64,
    pub critical_5: f64,
    pub critical_1: f64,
    /// Asymptotic p-value from the Kolmogorov distribution.
    pub p_value: f64,
}

/// Two-sample Kolmogorov–Smirnov statistic with asymptotic critical values
/// c(α)·((n+m)/(nm))^{1/2}, c(0.05) = 1.358, c(0.01) = 1.628.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() || a.iter().chain(b).any(|v| v.is_nan()) {
        return domain("KS needs two non-empty samples without NaN");
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0_f64);
    while i < a.len() && j < b.len() {
        let t = a[i].min(b[j]);
        while i < a.len() && a[i] <= t {
            i += 1;
        }
        while j < b.len() && b[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let scale = ((na + nb) / (na * nb)).sqrt();
    let ne = (na * nb / (na + nb)).sqrt();
    let lam = (ne + 0.12 + 0.11 / ne) * d;
    Ok(KsResult { distance: d, critical_5: 1.358 * scale, critical_1: 1.628 * scale, p_value: kolmogorov_q(lam) })
}

fn kolmogorov_q(lam: f64) -> f64 {
    if lam < 1e-3 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=200 {
        let k = k as f64;
        let term = 2.0 * (-1f64).powf(k - 1.0) * (-2.0 * k * k * lam * lam).exp();
        s += term;
        if term.abs() < 1e-16 {
            break;
        }
    }
    s.clamp(0.0, 1.0)
}

/// ½ Σ |counts/N − exact| over the union of outcomes.
pub fn tv_empirical<K: Ord>(counts: &BTreeMap<K, u64>, exact: &BTreeMap<K, f64>) -> Result<f64> {
    let total: u64 = counts.values().sum();
    if total == 0 {
        return domain("no samples");
    }
    let t = total as f64;
    let mut s = 0.0;
    for (k, &c) in counts {
        s += (c as f64 / t - exact.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, &p) in exact {
        if !counts.contains_key(k) {
            s += p;
        }
    }
    Ok(0.5 * s)
}

/// Sequential sampling without replacement with probability proportional to
/// the remaining weights. Zero-weight indices follow in increasing order once
/// the positive mass is used up.
pub fn size_biased_permutation<R: Rng + ?Sized>(x: &[f64], rng: &mut R) -> Result<Vec<usize>> {
    if x.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
        return domain("weights must be finite and non-negative");
    }
    let mut f = Fenwick::new(x);
    let positive = x.iter().filter(|&&v| v > 0.0).count();
    let mut out = Vec::with_capacity(x.len());
    for _ in 0..positive {
        let i = f.find(rng.random::<f64>() * f.total());
        out.push(i);
        f.set(i, 0.0);
    }
    out.extend((0..x.len()).filter(|&i| x[i] == 0.0));
    Ok(out)
}

pub fn median(v: &[f64]) -> Result<f64> {
    quantile(v, 0.5)
}

/// Linear-interpolation quantile (type 7).
pub fn quantile(v: &[f64], q: f64) -> Result<f64> {
    if v.is_empty() || v.iter().any(|x| x.is_nan()) || !(0.0..=1.0).contains(&q) {
        return domain("quantile needs a non-empty sample and q in [0,1]");
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let h = (s.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    Ok(s[lo] + (h - lo as f64) * (s[hi] - s[lo]))
}

pub fn mean_stderr(v: &[f64]) -> Result<(f64, f64)> {
    if v.is_empty() {
        return domain("empty sample");
    }
    Ok(crate::metric::mean_stderr(v))
}

/// Percentile bootstrap interval for `stat` at level `level` (e.g. 0.95).
pub fn bootstrap_ci<R: Rng + ?Sized>(
    v: &[f64],
    stat: impl Fn(&[f64]) -> f64,
    resamples: usize,
    level: f64,
    rng: &mut R,
) -> Result<(f64, f64)> {
    if v.is_empty() || resamples < 2 {
        return domain("bootstrap needs data and at least two resamples");
    }
    let mut buf = vec![0.0; v.len()];
    let stats: Vec<f64> = (0..resamples)
        .map(|_| {
            for b in buf.iter_mut() {
                *b = v[rng.random_range(0..v.len())];
            }
            stat(&buf)
        })
        .collect();
    let a = (1.0 - level) / 2.0;
    Ok((quantile(&stats, a)?, quantile(&stats, 1.0 - a)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn exact_power_slope() {
        let x: Vec<f64> = [1e4, 1e5, 1e6, 3e6].to_vec();
        let y: Vec<f64> = x.iter().map(|v: &f64| v.powf(0.6)).collect();
        let f = log_log_slope(&x, &y).unwrap();
        assert!((f.slope - 0.6).abs() < 1e-10);
        assert!(f.stderr < 1e-10);
        assert!(log_log_slope(&[1.0, 2.0], &[0.0, 1.0]).is_err());
        assert!(linear_fit(&[1.0, 1.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn ks_basics() {
        let a: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let r = ks_two_sample(&a, &a).unwrap();
        assert_eq!(r.distance, 0.0);
        assert!((r.critical_5 - 1.358 * (2.0f64 / 100.0).sqrt()).abs() < 1e-12);
        let b: Vec<f64> = a.iter().map(|x| x + 1000.0).collect();
        let r = ks_two_sample(&a, &b).unwrap();
        assert_eq!(r.distance, 1.0);
        assert!(r.p_value < 1e-10);
        assert!(ks_two_sample(&[], &a).is_err());
    }

    #[test]
    fn tv_of_exact_counts_is_zero() {
        let exact: BTreeMap<u8, f64> = [(0, 0.25), (1, 0.5), (2, 0.25)].into_iter().collect();
        let counts: BTreeMap<u8, u64> = [(0, 1), (1, 2), (2, 1)].into_iter().collect();
        assert_eq!(tv_empirical(&counts, &exact).unwrap(), 0.0);
        let counts: BTreeMap<u8, u64> = [(3, 4)].into_iter().collect();
        assert!((tv_empirical(&counts, &exact).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn size_biased_starts_at_only_positive() {
        let mut r = seeded(2);
        let x = [1.0, 0.0, 0.0, 0.0];
        for _ in 0..100 {
            assert_eq!(size_biased_permutation(&x, &mut r).unwrap(), vec![0, 1, 2, 3]);
        }
        let x = [1.0, 3.0];
        let first_is_1 = (0..20000).filter(|_| size_biased_permutation(&x, &mut r).unwrap()[0] == 1).count();
        assert!((first_is_1 as f64 / 20000.0 - 0.75).abs() < 0.015);
        assert!(size_biased_permutation(&[-1.0], &mut r).is_err());
    }

    #[test]
    fn quantiles_and_bootstrap() {
        assert_eq!(median(&[3.0, 1.0, 2.0]).unwrap(), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]).unwrap(), 2.5);
        let v: Vec<f64> = (0..200).map(|i| i as f64).collect();
        let (lo, hi) = bootstrap_ci(&v, |s| s.iter().sum::<f64>() / s.len() as f64, 500, 0.95, &mut seeded(1)).unwrap();
        assert!(lo < 99.5 && 99.5 < hi && hi - lo < 25.0);
    }
}
