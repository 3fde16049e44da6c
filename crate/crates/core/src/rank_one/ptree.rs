use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use super::ProbVector;

/// Rooted tree on labels `0..m` with ordered children.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PTree {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
}

impl PTree {
    pub fn m(&self) -> usize {
        self.parent.len()
    }

    /// Builds a tree from a parent array; children are ordered by label.
    pub fn from_parents(parent: Vec<Option<usize>>) -> Self {
        let m = parent.len();
        let mut children = vec![Vec::new(); m];
        let mut root = 0;
        for (v, p) in parent.iter().enumerate() {
            match p {
                Some(u) => children[*u].push(v),
                None => root = v,
            }
        }
        Self { root, parent, children }
    }

    /// Tree edges as (parent, child).
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parent.iter().enumerate().filter_map(|(v, p)| p.map(|u| (u, v)))
    }

    /// Depth-first preorder, children visited in order.
    pub fn dfs_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.m());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children[v].iter().rev());
        }
        out
    }

    /// Strict ancestors of v, nearest first.
    pub fn ancestors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.parent[v];
        while let Some(u) = cur {
            out.push(u);
            cur = self.parent[u];
        }
        out
    }
}

/// Birthday construction driven by an explicit label stream.
pub fn sample_ptree_from(m: usize, mut next: impl FnMut() -> usize) -> PTree {
    let mut parent = vec![None; m];
    let mut children = vec![Vec::new(); m];
    let mut seen = vec![false; m];
    let root = next();
    seen[root] = true;
    let mut remaining = m - 1;
    let mut prev = root;
    while remaining > 0 {
        let y = next();
        if !seen[y] {
            seen[y] = true;
            parent[y] = Some(prev);
            children[prev].push(y);
            remaining -= 1;
        }
        prev = y;
    }
    PTree { root, parent, children }
}

/// p-tree via the birthday construction on an i.i.d. p-sequence. Children
/// appear in order of discovery.
pub fn sample_ptree<R: Rng + ?Sized>(p: &ProbVector, rng: &mut R) -> PTree {
    let s = p.sampler();
    sample_ptree_from(p.len(), || s.sample(rng))
}

/// Replaces every child list with a uniformly random permutation.
pub fn randomize_child_order<R: Rng + ?Sized>(t: &mut PTree, rng: &mut R) {
    for c in &mut t.children {
        c.shuffle(rng);
    }
}

/// ∏ p_v^{d_v} with d_v the number of children, divided by ∏ d_v! when
/// `ordered` is set.
pub fn ptree_weight(t: &PTree, p: &ProbVector, ordered: bool) -> f64 {
    let mut w = 1.0;
    for (v, c) in t.children.iter().enumerate() {
        let d = c.len() as i32;
        w *= p[v].powi(d);
        if ordered {
            w /= (1..=d).map(f64::from).product::<f64>();
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_sequence_gives_path() {
        let mut it = [0usize, 1, 2, 3].into_iter();
        let t = sample_ptree_from(4, || it.next().unwrap());
        assert_eq!(t.root, 0);
        assert_eq!(t.parent, vec![None, Some(0), Some(1), Some(2)]);
        let mut it = [2usize, 2, 0, 2, 1].into_iter();
        let t = sample_ptree_from(3, || it.next().unwrap());
        assert_eq!(t.root, 2);
        assert_eq!(t.children[2], vec![0, 1]);
    }

    #[test]
    fn weights_by_hand() {
        let p = ProbVector::new(vec![0.3, 0.7]).unwrap();
        let t = PTree::from_parents(vec![None, Some(0)]);
        assert!((ptree_weight(&t, &p, false) - 0.3).abs() < 1e-15);
        let p = ProbVector::new(vec![0.5, 0.25, 0.25]).unwrap();
        let star = PTree::from_parents(vec![None, Some(0), Some(0)]);
        assert!((ptree_weight(&star, &p, false) - 0.25).abs() < 1e-15);
        assert!((ptree_weight(&star, &p, true) - 0.125).abs() < 1e-15);
        assert_eq!(star.dfs_order(), vec![0, 1, 2]);
    }
}
