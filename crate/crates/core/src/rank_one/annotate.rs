use serde::{Deserialize, Serialize};

use super::{PTree, ProbVector};

/// Ordered p-tree with depth-first bookkeeping for surplus edges.
///
/// The permitted set of v is the union over strict ancestors y of the
/// children of y lying to the right of the root-to-v path; equivalently the
/// right siblings of v and of each of its non-root ancestors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedPTree {
    pub tree: PTree,
    pub p: Vec<f64>,
    pub a: f64,
    pub dfs_order: Vec<usize>,
    /// Σ p over the right siblings of v.
    pub right_sum: Vec<f64>,
    /// A(v) = Σ p over the permitted set of v.
    #[serde(rename = "A")]
    pub a_mass: Vec<f64>,
    pub lambda: f64,
    pub log_l: f64,
}

impl AnnotatedPTree {
    pub fn m(&self) -> usize {
        self.p.len()
    }

    pub fn l_value(&self) -> f64 {
        self.log_l.exp()
    }

    /// Position of each sibling within its parent's child list.
    fn sibling_index(&self, v: usize) -> usize {
        let par = self.tree.parent[v].expect("non-root");
        self.tree.children[par].iter().position(|&c| c == v).expect("child of parent")
    }

    pub fn right_siblings(&self, v: usize) -> &[usize] {
        match self.tree.parent[v] {
            None => &[],
            Some(par) => &self.tree.children[par][self.sibling_index(v) + 1..],
        }
    }

    /// Permitted set of v in increasing depth-first order.
    pub fn permitted(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut c = v;
        while self.tree.parent[c].is_some() {
            out.extend_from_slice(self.right_siblings(c));
            c = self.tree.parent[c].unwrap();
        }
        out
    }
}

/// Computes A, Λ = aΣ p_v A(v) and
/// L = ∏_{tree edges} (e^{a p_k p_l} − 1)/(a p_k p_l) · e^Λ
/// for the tree in its current child order.
pub fn annotate(tree: &PTree, p: &ProbVector, a: f64) -> AnnotatedPTree {
    let m = tree.m();
    let dfs_order = tree.dfs_order();
    let mut right_sum = vec![0.0; m];
    for c in &tree.children {
        let mut acc = 0.0;
        for &v in c.iter().rev() {
            right_sum[v] = acc;
            acc += p[v];
        }
    }
    let mut a_mass = vec![0.0; m];
    for &v in &dfs_order {
        if let Some(par) = tree.parent[v] {
            a_mass[v] = a_mass[par] + right_sum[v];
        }
    }
    let lambda = a * dfs_order.iter().map(|&v| p[v] * a_mass[v]).sum::<f64>();
    let mut log_l = lambda;
    for (u, v) in tree.edges() {
        let x = a * p[u] * p[v];
        if x > 0.0 {
            log_l += (x.exp_m1() / x).ln();
        }
    }
    AnnotatedPTree {
        tree: tree.clone(),
        p: p.as_slice().to_vec(),
        a,
        dfs_order,
        right_sum,
        a_mass,
        lambda,
        log_l,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_example() {
        let p = ProbVector::uniform(3).unwrap();
        let t = PTree::from_parents(vec![None, Some(0), Some(0)]);
        let an = annotate(&t, &p, 1.0);
        assert!((an.a_mass[1] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(an.a_mass[2], 0.0);
        assert_eq!(an.a_mass[0], 0.0);
        assert!((an.lambda - 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(an.permitted(1), vec![2]);
        assert!(an.permitted(2).is_empty());
    }

    #[test]
    fn path_has_no_permitted_edges() {
        let p = ProbVector::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let t = PTree::from_parents(vec![None, Some(0), Some(1), Some(2)]);
        let an = annotate(&t, &p, 2.0);
        assert!(an.a_mass.iter().all(|&x| x == 0.0));
        assert_eq!(an.lambda, 0.0);
        let expect: f64 = [(0, 1), (1, 2), (2, 3)]
            .iter()
            .map(|&(k, l)| {
                let x = 2.0 * p[k] * p[l];
                x.exp_m1() / x
            })
            .product();
        assert!((an.l_value() - expect).abs() < 1e-13);
        let zero = annotate(&t, &p, 0.0);
        assert_eq!(zero.l_value(), 1.0);
    }

    #[test]
    fn mass_matches_permitted_sets() {
        // root 0 with children (1, 2, 3); 1 has children (4, 5); 4 has child 6.
        let t = PTree::from_parents(vec![None, Some(0), Some(0), Some(0), Some(1), Some(1), Some(4)]);
        let p = ProbVector::from_weights(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]).unwrap();
        let an = annotate(&t, &p, 1.0);
        assert_eq!(an.permitted(6), vec![5, 2, 3]);
        assert_eq!(an.permitted(4), vec![5, 2, 3]);
        assert_eq!(an.permitted(5), vec![2, 3]);
        for v in 0..7 {
            let s: f64 = an.permitted(v).iter().map(|&u| p[u]).sum();
            assert!((s - an.a_mass[v]).abs() < 1e-15);
        }
        // Last children along the whole path have no permitted mass.
        assert_eq!(an.a_mass[3], 0.0);
    }
}
