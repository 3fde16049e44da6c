use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Truncated inhomogeneous continuum random tree from Poisson stick-breaking.
///
/// Points of the skeleton are positions x ∈ [0, length]; branch k covers
/// (start_k, end_k] and hangs off position `attach_k` of branch `parent_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IcrtTree {
    pub starts: Vec<f64>,
    pub ends: Vec<f64>,
    pub parent: Vec<Option<usize>>,
    pub attach: Vec<f64>,
    /// Hub whose joinpoint a branch hangs from.
    pub hub: Vec<Option<usize>>,
    /// Joinpoint position per hub that owns at least one cutpoint in the tree.
    pub joinpoints: Vec<(usize, f64)>,
    pub length: f64,
    /// No cutpoint fell before the cut time.
    pub no_cutpoint: bool,
}

impl IcrtTree {
    pub fn branch_of(&self, x: f64) -> usize {
        // Branches are contiguous in position.
        self.ends.partition_point(|&e| e < x).min(self.ends.len() - 1)
    }

    /// (branch, position) pairs from x up to the root branch.
    fn lineage(&self, x: f64) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        let mut b = self.branch_of(x);
        let mut pos = x;
        loop {
            out.push((b, pos));
            match self.parent[b] {
                Some(p) => {
                    pos = self.attach[b];
                    b = p;
                }
                None => break,
            }
        }
        out
    }

    /// Distance from the root (position 0).
    pub fn height(&self, x: f64) -> f64 {
        self.height_on(self.branch_of(x), x)
    }

    fn height_on(&self, mut b: usize, mut pos: f64) -> f64 {
        let mut h = 0.0;
        loop {
            h += pos - self.starts[b];
            match self.parent[b] {
                Some(p) => {
                    pos = self.attach[b];
                    b = p;
                }
                None => return h,
            }
        }
    }

    pub fn dist(&self, x: f64, y: f64) -> f64 {
        let lx = self.lineage(x);
        let ly = self.lineage(y);
        for &(bx, px) in &lx {
            if let Some(&(_, py)) = ly.iter().find(|&&(by, _)| by == bx) {
                return self.height(x) + self.height(y) - 2.0 * self.height_on(bx, px.min(py));
            }
        }
        unreachable!("lineages share the root branch")
    }

    /// Number of branches attached at each hub's joinpoint.
    pub fn hub_degrees(&self, hubs: usize) -> Vec<usize> {
        let mut out = vec![0; hubs];
        for h in self.hub.iter().flatten() {
            out[*h] += 1;
        }
        out
    }
}

/// Stick-breaking with rate-β_i Poisson processes; stops at the last
/// cutpoint not exceeding `t_cut`.
pub fn sample_icrt<R: Rng + ?Sized>(beta: &[f64], t_cut: f64, rng: &mut R) -> Result<IcrtTree> {
    if beta.is_empty() || beta.iter().any(|&b| !(b > 0.0)) {
        return domain("beta must be non-empty and positive");
    }
    if !(t_cut > 0.0) {
        return domain("cut time must be positive");
    }
    let mut joins = vec![f64::INFINITY; beta.len()];
    let mut cuts: Vec<(f64, usize)> = Vec::new();
    for (i, &b) in beta.iter().enumerate() {
        let e = Exp::new(b).expect("positive rate");
        let mut t = e.sample(rng);
        if t > t_cut {
            continue;
        }
        joins[i] = t;
        loop {
            t += e.sample(rng);
            if t > t_cut {
                break;
            }
            cuts.push((t, i));
        }
    }
    cuts.sort_by(|a, b| a.0.total_cmp(&b.0));
    if cuts.is_empty() {
        return Ok(IcrtTree {
            starts: vec![0.0],
            ends: vec![t_cut],
            parent: vec![None],
            attach: vec![0.0],
            hub: vec![None],
            joinpoints: Vec::new(),
            length: t_cut,
            no_cutpoint: true,
        });
    }
    let k = cuts.len();
    let mut starts = vec![0.0];
    let mut ends = vec![cuts[0].0];
    let mut parent = vec![None];
    let mut attach = vec![0.0];
    let mut hub = vec![None];
    for w in 0..k - 1 {
        let (eta, i) = cuts[w];
        let jp = joins[i];
        // Joinpoint precedes its cutpoints, so it lies on an earlier branch.
        let host = ends.partition_point(|&e| e < jp).min(ends.len() - 1);
        starts.push(eta);
        ends.push(cuts[w + 1].0);
        parent.push(Some(host));
        attach.push(jp);
        hub.push(Some(i));
    }
    let mut joinpoints: Vec<(usize, f64)> = cuts.iter().map(|&(_, i)| (i, joins[i])).collect();
    joinpoints.sort_by(|a, b| a.0.cmp(&b.0));
    joinpoints.dedup_by_key(|x| x.0);
    Ok(IcrtTree { starts, ends, parent, attach, hub, joinpoints, length: cuts[k - 1].0, no_cutpoint: false })
}
