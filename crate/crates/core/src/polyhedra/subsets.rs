//! Depth-first enumeration of row subsets with an incrementally maintained
//! orthonormal basis. Branches whose rows are already linearly dependent
//! are cut, so only independent subsets reach the leaves.

use crate::linalg::dot;

/// Orthonormal basis of the span of the selected rows, together with the
/// data needed to solve `row_k · z = rhs_k` for all selected rows.
pub(crate) struct IncrementalBasis {
    n: usize,
    q: Vec<Vec<f64>>,
    y: Vec<f64>,
    rank_tol: f64,
}

impl IncrementalBasis {
    pub fn new(n: usize, rank_tol: f64) -> Self {
        IncrementalBasis {
            n,
            q: Vec::with_capacity(n),
            y: Vec::with_capacity(n),
            rank_tol,
        }
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    /// Adds a unit-norm row; returns false (and leaves the basis untouched)
    /// when the row is dependent on the current selection.
    pub fn push(&mut self, row: &[f64], rhs: f64) -> bool {
        let mut r = row.to_vec();
        let mut coeffs = vec![0.0; self.q.len()];
        // Two passes of modified Gram–Schmidt.
        for _ in 0..2 {
            for (k, qk) in self.q.iter().enumerate() {
                let c = dot(&r, qk);
                coeffs[k] += c;
                for (ri, qi) in r.iter_mut().zip(qk) {
                    *ri -= c * qi;
                }
            }
        }
        let diag = dot(&r, &r).sqrt();
        if diag <= self.rank_tol {
            return false;
        }
        for ri in r.iter_mut() {
            *ri /= diag;
        }
        let partial: f64 = coeffs.iter().zip(&self.y).map(|(c, y)| c * y).sum();
        self.y.push((rhs - partial) / diag);
        self.q.push(r);
        true
    }

    pub fn pop(&mut self) {
        self.q.pop();
        self.y.pop();
    }

    /// The minimum-norm point satisfying every selected row with equality.
    pub fn solution(&self) -> Vec<f64> {
        let mut z = vec![0.0; self.n];
        for (qk, yk) in self.q.iter().zip(&self.y) {
            for (zi, qi) in z.iter_mut().zip(qk) {
                *zi += yk * qi;
            }
        }
        z
    }

    /// A unit vector orthogonal to the selected rows (meaningful when the
    /// selection has rank `n − 1`).
    pub fn complement_direction(&self) -> Vec<f64> {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for i in 0..self.n {
            let mut r = vec![0.0; self.n];
            r[i] = 1.0;
            for _ in 0..2 {
                for qk in &self.q {
                    let c = dot(&r, qk);
                    for (ri, qi) in r.iter_mut().zip(qk) {
                        *ri -= c * qi;
                    }
                }
            }
            let nrm = dot(&r, &r).sqrt();
            if best.as_ref().is_none_or(|(b, _)| nrm > *b) {
                best = Some((nrm, r));
            }
        }
        let (nrm, mut r) = best.expect("n > 0");
        for ri in r.iter_mut() {
            *ri /= nrm;
        }
        r
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Visits every independent `size`-subset of `rows` in lexicographic order,
/// calling `leaf` with the basis holding that subset.
pub(crate) fn for_each_independent_subset<F>(
    rows: &[(Vec<f64>, f64)],
    n: usize,
    size: usize,
    rank_tol: f64,
    mut leaf: F,
) where
    F: FnMut(&IncrementalBasis),
{
    let mut basis = IncrementalBasis::new(n, rank_tol);
    if size == 0 {
        leaf(&basis);
        return;
    }
    fn rec<F: FnMut(&IncrementalBasis)>(
        rows: &[(Vec<f64>, f64)],
        start: usize,
        size: usize,
        basis: &mut IncrementalBasis,
        leaf: &mut F,
    ) {
        let need = size - basis.len();
        if rows.len() - start < need {
            return;
        }
        for i in start..=(rows.len() - need) {
            if basis.push(&rows[i].0, rows[i].1) {
                if basis.len() == size {
                    leaf(basis);
                } else {
                    rec(rows, i + 1, size, basis, leaf);
                }
                basis.pop();
            }
        }
    }
    rec(rows, 0, size, &mut basis, &mut leaf);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_square_system() {
        let mut b = IncrementalBasis::new(2, 1e-12);
        let s = 1.0 / 2f64.sqrt();
        assert!(b.push(&[s, s], 1.0 * s));
        assert!(b.push(&[s, -s], 1.0 * s));
        let z = b.solution();
        assert!((z[0] - 1.0).abs() < 1e-12 && z[1].abs() < 1e-12);
    }

    #[test]
    fn rejects_dependent_row() {
        let mut b = IncrementalBasis::new(2, 1e-9);
        assert!(b.push(&[1.0, 0.0], 0.0));
        assert!(!b.push(&[-1.0, 0.0], 1.0));
        assert_eq!(b.len(), 1);
    }

    #[test]
    fn counts_subsets() {
        let rows: Vec<(Vec<f64>, f64)> = (0..5)
            .map(|i| {
                let t = i as f64;
                let v = vec![t.cos(), t.sin()];
                (v, 0.0)
            })
            .collect();
        let mut count = 0;
        for_each_independent_subset(&rows, 2, 2, 1e-9, |_| count += 1);
        assert_eq!(count, 10);
        assert_eq!(binomial(5, 2), 10.0);
    }
}
