//! Fenwick tree over non-negative weights with prefix-sum search.

#[derive(Debug, Clone)]
pub struct Fenwick {
    tree: Vec<f64>,
    vals: Vec<f64>,
}

impl Fenwick {
    pub fn new(vals: &[f64]) -> Self {
        let n = vals.len();
        let mut tree = vec![0.0; n + 1];
        for (i, &v) in vals.iter().enumerate() {
            tree[i + 1] += v;
            let j = (i + 1) + ((i + 1) & (i + 1).wrapping_neg());
            if j <= n {
                let t = tree[i + 1];
                tree[j] += t;
            }
        }
        Self { tree, vals: vals.to_vec() }
    }

    pub fn get(&self, i: usize) -> f64 {
        self.vals[i]
    }

    pub fn set(&mut self, i: usize, v: f64) {
        let delta = v - self.vals[i];
        self.vals[i] = v;
        let mut k = i + 1;
        while k < self.tree.len() {
            self.tree[k] += delta;
            k += k & k.wrapping_neg();
        }
    }

    pub fn total(&self) -> f64 {
        let mut k = self.vals.len();
        let mut s = 0.0;
        while k > 0 {
            s += self.tree[k];
            k -= k & k.wrapping_neg();
        }
        s
    }

    /// Index i with prefix(i) <= u < prefix(i+1), skipping zero entries.
    pub fn find(&self, mut u: f64) -> usize {
        let n = self.vals.len();
        let mut pos = 0;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= u {
                pos = next;
                u -= self.tree[next];
            }
            step >>= 1;
        }
        // Rounding can land on a zero-weight slot or past the end.
        let mut i = pos.min(n - 1);
        while self.vals[i] <= 0.0 && i > 0 {
            i -= 1;
        }
        while self.vals[i] <= 0.0 && i + 1 < n {
            i += 1;
        }
        i
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_search() {
        let mut f = Fenwick::new(&[1.0, 0.0, 2.0, 3.0]);
        assert_eq!(f.total(), 6.0);
        assert_eq!(f.find(0.5), 0);
        assert_eq!(f.find(1.0), 2);
        assert_eq!(f.find(2.99), 2);
        assert_eq!(f.find(3.0), 3);
        assert_eq!(f.find(5.999), 3);
        f.set(3, 0.0);
        assert_eq!(f.total(), 3.0);
        assert_eq!(f.find(2.9999999), 2);
    }
}
