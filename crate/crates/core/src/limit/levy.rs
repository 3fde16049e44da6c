use rand::Rng;
use rand_distr::{Binomial, Distribution, Exp, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Jump sizes of a thinned Lévy process.
///
/// `head` entries are tracked individually (jump index i). `tail` holds
/// (value, multiplicity) groups of further terms that are simulated exactly
/// but reported without an index; it is empty for a plain truncation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaSeq {
    pub head: Vec<f64>,
    #[serde(default)]
    pub tail: Vec<(f64, usize)>,
}

impl ThetaSeq {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        Self::with_tail(theta, Vec::new())
    }

    pub fn with_tail(head: Vec<f64>, tail: Vec<(f64, usize)>) -> Result<Self> {
        if head.iter().chain(tail.iter().map(|t| &t.0)).any(|&x| !(x > 0.0) || !x.is_finite()) {
            return domain("theta entries must be positive and finite");
        }
        if head.windows(2).any(|w| w[1] > w[0]) {
            return domain("theta must be non-increasing");
        }
        Ok(Self { head, tail })
    }

    /// θ_i = n^{-α} d_i: the first `k` degrees individually, the rest grouped
    /// by value when `keep_tail` is set.
    pub fn from_degrees(d: &[usize], alpha: f64, k: usize, keep_tail: bool) -> Result<Self> {
        let scale = (d.len() as f64).powf(-alpha);
        let k = k.min(d.len());
        let head = d[..k].iter().map(|&x| x as f64 * scale).collect();
        let mut tail: Vec<(f64, usize)> = Vec::new();
        if keep_tail {
            for &x in &d[k..] {
                let v = x as f64 * scale;
                match tail.last_mut() {
                    Some((w, c)) if *w == v => *c += 1,
                    _ => tail.push((v, 1)),
                }
            }
        }
        Self::with_tail(head, tail)
    }

    pub fn k(&self) -> usize {
        self.head.len()
    }

    pub fn sum_sq(&self) -> f64 {
        self.head.iter().map(|x| x * x).sum::<f64>() + self.tail.iter().map(|(x, c)| x * x * *c as f64).sum::<f64>()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            head: self.head.iter().map(|x| x * c).collect(),
            tail: self.tail.iter().map(|&(x, k)| (x * c, k)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub time: f64,
    pub size: f64,
    /// Head index, or `None` for a tail term.
    pub index: Option<usize>,
}

/// S(t) = Σ θ_i 1{ζ_i ≤ t} + (λ − Σ θ_i²) t on [0, horizon], ζ_i ~ Exp(θ_i).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevyPath {
    pub lambda: f64,
    pub drift: f64,
    pub horizon: f64,
    /// Jumps up to the horizon in time order.
    pub jumps: Vec<Jump>,
}

impl LevyPath {
    /// Path with given head jump times (tail-free θ).
    pub fn from_jump_times(theta: &[f64], zeta: &[f64], lambda: f64, horizon: f64) -> Self {
        let mut jumps: Vec<Jump> = theta
            .iter()
            .zip(zeta)
            .enumerate()
            .filter(|(_, (_, &z))| z <= horizon)
            .map(|(i, (&s, &z))| Jump { time: z, size: s, index: Some(i) })
            .collect();
        jumps.sort_by(|a, b| a.time.total_cmp(&b.time));
        let drift = lambda - theta.iter().map(|x| x * x).sum::<f64>();
        Self { lambda, drift, horizon, jumps }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.jumps.iter().filter(|j| j.time <= t).map(|j| j.size).sum::<f64>() + self.drift * t
    }

    /// (time, value just after any jump at that time) at 0, each jump and the horizon.
    pub fn breakpoints(&self) -> Vec<(f64, f64)> {
        let mut out = vec![(0.0, 0.0)];
        let mut level = 0.0;
        for j in &self.jumps {
            level += j.size;
            out.push((j.time, level + self.drift * j.time));
        }
        out.push((self.horizon, level + self.drift * self.horizon));
        out
    }
}

pub fn simulate_thinned_levy<R: Rng + ?Sized>(theta: &ThetaSeq, lambda: f64, horizon: f64, rng: &mut R) -> Result<LevyPath> {
    if !(horizon > 0.0) {
        return domain(format!("horizon must be positive, got {horizon}"));
    }
    let mut jumps = Vec::new();
    for (i, &s) in theta.head.iter().enumerate() {
        let z = Exp::new(s).expect("positive rate").sample(rng);
        if z <= horizon {
            jumps.push(Jump { time: z, size: s, index: Some(i) });
        }
    }
    for &(s, c) in &theta.tail {
        // Count of the c i.i.d. Exp(s) clocks before the horizon, then their
        // times from the truncated law.
        let q = -(-s * horizon).exp_m1();
        let k = Binomial::new(c as u64, q.min(1.0)).expect("valid").sample(rng);
        for _ in 0..k {
            let u: f64 = rng.random();
            let z = -(-(u * q)).ln_1p() / s;
            jumps.push(Jump { time: z.min(horizon), size: s, index: None });
        }
    }
    jumps.sort_by(|a, b| a.time.total_cmp(&b.time));
    Ok(LevyPath { lambda, drift: lambda - theta.sum_sq(), horizon, jumps })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Excursion {
    pub start: f64,
    pub length: f64,
    pub area: f64,
    /// Head indices of jumps inside the excursion.
    pub jumps: Vec<usize>,
    /// Sizes of all jumps inside the excursion (head and tail).
    pub jump_sizes: Vec<f64>,
    /// Still open at the horizon.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcursionSet {
    /// Ordered by decreasing length.
    pub excursions: Vec<Excursion>,
    pub marks: Vec<usize>,
}

impl ExcursionSet {
    pub fn largest_length(&self) -> f64 {
        self.excursions.first().map_or(0.0, |e| e.length)
    }
}

/// Excursions of refl(t) = S(t) − inf_{u≤t} S(u) above zero, computed exactly
/// on the piecewise-linear path.
pub fn excursions(path: &LevyPath) -> Vec<Excursion> {
    let c = path.drift;
    let mut out = Vec::new();
    let mut r = 0.0; // reflected value
    let mut t = 0.0;
    let mut open: Option<Excursion> = None;
    let mut k = 0;
    let jumps = &path.jumps;
    loop {
        let next = if k < jumps.len() { jumps[k].time } else { path.horizon };
        let h = next - t;
        // Linear piece on [t, next).
        if let Some(e) = open.as_mut() {
            if c < 0.0 && r + c * h <= 0.0 {
                let hit = r / -c;
                e.area += 0.5 * r * hit;
                e.length = t + hit - e.start;
                r = 0.0;
                out.push(open.take().unwrap());
            } else {
                e.area += (r + 0.5 * c * h) * h;
                r += c * h;
            }
        } else if c > 0.0 && h > 0.0 {
            open = Some(Excursion { start: t, length: 0.0, area: 0.5 * c * h * h, jumps: Vec::new(), jump_sizes: Vec::new(), truncated: false });
            r = c * h;
        }
        t = next;
        if k >= jumps.len() {
            break;
        }
        let j = jumps[k];
        k += 1;
        let e = open.get_or_insert_with(|| Excursion { start: t, length: 0.0, area: 0.0, jumps: Vec::new(), jump_sizes: Vec::new(), truncated: false });
        if let Some(i) = j.index {
            e.jumps.push(i);
        }
        e.jump_sizes.push(j.size);
        r += j.size;
    }
    if let Some(mut e) = open {
        e.length = path.horizon - e.start;
        e.truncated = true;
        out.push(e);
    }
    out.sort_by(|a, b| b.length.total_cmp(&a.length).then(a.start.total_cmp(&b.start)));
    out
}

/// Excursions plus Poisson(area) marks per excursion.
pub fn excursions_and_marks<R: Rng + ?Sized>(path: &LevyPath, rng: &mut R) -> ExcursionSet {
    let excursions = excursions(path);
    let marks = excursions
        .iter()
        .map(|e| if e.area > 0.0 { Poisson::new(e.area).expect("positive").sample(rng) as usize } else { 0 })
        .collect();
    ExcursionSet { excursions, marks }
}

/// Largest excursion lengths of ξ(η₁θ, η₂λ) and of (1/η₁)ξ(θ, η₂λ/η₁²),
/// `samples` independent draws each. Horizons are matched (T/η₁ and T).
pub fn rescaled_excursion_law<R: Rng + ?Sized>(
    theta: &ThetaSeq,
    lambda: f64,
    eta1: f64,
    eta2: f64,
    samples: usize,
    horizon: f64,
    rng: &mut R,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(eta1 > 0.0 && eta2 > 0.0) {
        return domain("eta1 and eta2 must be positive");
    }
    let left_theta = theta.scaled(eta1);
    let mut left = Vec::with_capacity(samples);
    let mut right = Vec::with_capacity(samples);
    for _ in 0..samples {
        let p = simulate_thinned_levy(&left_theta, eta2 * lambda, horizon / eta1, rng)?;
        left.push(excursions(&p).first().map_or(0.0, |e| e.length));
        let p = simulate_thinned_levy(theta, eta2 * lambda / (eta1 * eta1), horizon, rng)?;
        right.push(excursions(&p).first().map_or(0.0, |e| e.length) / eta1);
    }
    Ok((left, right))
}
