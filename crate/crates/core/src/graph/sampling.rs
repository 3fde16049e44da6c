use rand::seq::SliceRandom;
use rand::Rng;

use super::MultiGraph;
use crate::error::{domain, Error, Result};

/// Uniform perfect matching of the half-edges of `d`. Half-edges are numbered
/// vertex by vertex in slot order; the result pairs `2k` with `2k+1` of the
/// returned permutation.
pub fn sample_matching<R: Rng + ?Sized>(d: &[usize], rng: &mut R) -> Result<Vec<usize>> {
    let total: usize = d.iter().sum();
    if total % 2 == 1 {
        return domain(format!("degree sum {total} is odd"));
    }
    let mut owners = Vec::with_capacity(total);
    for (v, &k) in d.iter().enumerate() {
        owners.extend(std::iter::repeat_n(v, k));
    }
    owners.shuffle(rng);
    Ok(owners)
}

/// Configuration model: uniform pairing of half-edges.
pub fn sample_cm<R: Rng + ?Sized>(d: &[usize], rng: &mut R) -> Result<MultiGraph> {
    let owners = sample_matching(d, rng)?;
    let edges = owners.chunks_exact(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
    Ok(MultiGraph { n: d.len(), edges, degree: d.to_vec() })
}

#[derive(Debug, Clone)]
pub struct SimpleSample {
    pub graph: MultiGraph,
    pub attempts: usize,
}

/// Configuration model conditioned on simplicity, by rejection.
pub fn sample_simple<R: Rng + ?Sized>(
    d: &[usize],
    rng: &mut R,
    max_attempts: usize,
) -> Result<SimpleSample> {
    for attempt in 1..=max_attempts {
        let g = sample_cm(d, rng)?;
        if g.is_simple() {
            return Ok(SimpleSample { graph: g, attempts: attempt });
        }
    }
    Err(Error::SimplicityExhausted { attempts: max_attempts })
}

/// Keeps each edge independently with probability `p`.
pub fn percolate<R: Rng + ?Sized>(g: &MultiGraph, p: f64, rng: &mut R) -> Result<MultiGraph> {
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("retention probability {p} outside [0,1]"));
    }
    let mut out = MultiGraph::empty(g.n);
    for &(u, v) in &g.edges {
        if p >= 1.0 || rng.random::<f64>() < p {
            out.degree[u] += 1;
            out.degree[v] += 1;
            out.edges.push((u, v));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn trivial_cm_cases() {
        let mut r = seeded(3);
        assert_eq!(sample_cm(&[1, 1], &mut r).unwrap().edges, vec![(0, 1)]);
        assert_eq!(sample_cm(&[2], &mut r).unwrap().edges, vec![(0, 0)]);
        assert!(sample_cm(&[1, 2], &mut r).is_err());
    }

    #[test]
    fn simple_cases() {
        let mut r = seeded(4);
        for _ in 0..20 {
            assert_eq!(sample_simple(&[1, 1], &mut r, 1).unwrap().attempts, 1);
        }
        match sample_simple(&[2, 2], &mut r, 50) {
            Err(Error::SimplicityExhausted { attempts }) => assert_eq!(attempts, 50),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn percolation_extremes() {
        let mut r = seeded(5);
        let g = MultiGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(percolate(&g, 1.0, &mut r).unwrap(), g);
        let e = percolate(&g, 0.0, &mut r).unwrap();
        assert_eq!(e.edge_count(), 0);
        assert_eq!(e.n, 3);
        assert!(percolate(&g, 1.5, &mut r).is_err());
    }
}
