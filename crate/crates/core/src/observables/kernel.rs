use nalgebra::DMatrix;

use super::observable::{Effect, Observable};
use super::outcomes::OutcomeSet;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::tolerance::Tolerance;

/// Column-stochastic matrix `p(x, y)`, rows indexed by the output set and
/// columns by the input set.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovKernel {
    out_set: OutcomeSet,
    in_set: OutcomeSet,
    entries: DMatrix<f64>,
}

impl MarkovKernel {
    /// Checks nonnegativity and column sums against `tol.norm`. Entries in
    /// `[-tol.norm, 0)` are clamped to zero.
    pub fn new(
        out_set: OutcomeSet,
        in_set: OutcomeSet,
        mut entries: DMatrix<f64>,
        tol: &Tolerance,
    ) -> Result<Self> {
        if entries.nrows() != out_set.len() || entries.ncols() != in_set.len() {
            return Err(Error::InvalidKernel(format!(
                "{}×{} entries for {} outputs and {} inputs",
                entries.nrows(),
                entries.ncols(),
                out_set.len(),
                in_set.len()
            )));
        }
        for v in entries.iter_mut() {
            if !v.is_finite() || *v < -tol.norm {
                return Err(Error::InvalidKernel(format!("negative entry {v}")));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        for (j, col) in entries.column_iter().enumerate() {
            let s: f64 = col.sum();
            if (s - 1.0).abs() > tol.norm {
                return Err(Error::InvalidKernel(format!(
                    "column {:?} sums to {s}",
                    in_set.label(j)
                )));
            }
        }
        Ok(MarkovKernel {
            out_set,
            in_set,
            entries,
        })
    }

    pub fn identity(set: &OutcomeSet) -> Self {
        MarkovKernel {
            out_set: set.clone(),
            in_set: set.clone(),
            entries: DMatrix::identity(set.len(), set.len()),
        }
    }

    /// Uniform `1/|out|` everywhere.
    pub fn constant(out_set: &OutcomeSet, in_set: &OutcomeSet) -> Self {
        let v = 1.0 / out_set.len() as f64;
        MarkovKernel {
            out_set: out_set.clone(),
            in_set: in_set.clone(),
            entries: DMatrix::from_element(out_set.len(), in_set.len(), v),
        }
    }

    /// `p(x, y) = 1` iff `x = f(y)`.
    pub fn deterministic(
        out_set: &OutcomeSet,
        in_set: &OutcomeSet,
        f: impl Fn(usize) -> usize,
    ) -> Result<Self> {
        let mut m = DMatrix::zeros(out_set.len(), in_set.len());
        for y in 0..in_set.len() {
            let x = f(y);
            if x >= out_set.len() {
                return Err(Error::InvalidKernel(format!("output index {x} out of range")));
            }
            m[(x, y)] = 1.0;
        }
        Ok(MarkovKernel {
            out_set: out_set.clone(),
            in_set: in_set.clone(),
            entries: m,
        })
    }

    pub fn out_set(&self) -> &OutcomeSet {
        &self.out_set
    }

    pub fn in_set(&self) -> &OutcomeSet {
        &self.in_set
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.entries[(x, y)]
    }

    /// `(p ∗ A)(x) = Σ_y p(x, y) A(y)`.
    pub fn apply(&self, a: &Observable) -> Result<Observable> {
        self.in_set.expect_same(a.outcomes(), "kernel input vs observable outcomes")?;
        let d = a.dim();
        let effects = (0..self.out_set.len())
            .map(|x| {
                let mut m = CMatrix::zeros(d, d);
                for (y, e) in a.effects().iter().enumerate() {
                    let w = self.entries[(x, y)];
                    if w != 0.0 {
                        m += e.matrix().scale(w);
                    }
                }
                Effect::new(m)
            })
            .collect::<Result<Vec<_>>>()?;
        Observable::new(self.out_set.clone(), effects)
    }

    /// `(p ∗ q)(x, x′) = Σ_y p(x, y) q(y, x′)`.
    pub fn compose(&self, q: &MarkovKernel) -> Result<MarkovKernel> {
        self.in_set.expect_same(&q.out_set, "p input vs q output")?;
        Ok(MarkovKernel {
            out_set: self.out_set.clone(),
            in_set: q.in_set.clone(),
            entries: &self.entries * &q.entries,
        })
    }

    pub fn with_sets(mut self, out_set: OutcomeSet, in_set: OutcomeSet) -> Result<Self> {
        if out_set.len() != self.out_set.len() || in_set.len() != self.in_set.len() {
            return Err(Error::InvalidKernel("relabeling changes shape".into()));
        }
        self.out_set = out_set;
        self.in_set = in_set;
        Ok(self)
    }

    /// Row-major entries, as used for the variables of kernel polytopes.
    pub fn to_vec(&self) -> Vec<f64> {
        let (r, c) = self.entries.shape();
        (0..r)
            .flat_map(|i| (0..c).map(move |j| (i, j)))
            .map(|(i, j)| self.entries[(i, j)])
            .collect()
    }

    pub fn from_vec(
        out_set: &OutcomeSet,
        in_set: &OutcomeSet,
        v: &[f64],
        tol: &Tolerance,
    ) -> Result<Self> {
        if v.len() != out_set.len() * in_set.len() {
            return Err(Error::InvalidKernel("wrong number of entries".into()));
        }
        let m = DMatrix::from_row_slice(out_set.len(), in_set.len(), v);
        Self::new(out_set.clone(), in_set.clone(), m, tol)
    }

    pub fn max_distance(&self, other: &MarkovKernel) -> f64 {
        if self.entries.shape() != other.entries.shape() {
            return f64::INFINITY;
        }
        (&self.entries - &other.entries).amax()
    }
}

/// `B(x) = Σ_y p(x, y) A(y)`.
pub fn post_process(p: &MarkovKernel, a: &Observable) -> Result<Observable> {
    p.apply(a)
}

pub fn compose_kernels(p: &MarkovKernel, q: &MarkovKernel) -> Result<MarkovKernel> {
    p.compose(q)
}

/// `p((x₁,…,xₙ), y) = ∏ p_ℓ(x_ℓ, y)` over the product of the output sets.
pub fn product_kernel(kernels: &[MarkovKernel]) -> Result<MarkovKernel> {
    let first = kernels.first().ok_or(Error::EmptyOutcomes)?;
    for k in &kernels[1..] {
        k.in_set.expect_same(&first.in_set, "product kernel inputs")?;
    }
    let outs: Vec<OutcomeSet> = kernels.iter().map(|k| k.out_set.clone()).collect();
    let out_set = OutcomeSet::product(&outs)?;
    let n_in = first.in_set.len();
    let mut m = DMatrix::zeros(out_set.len(), n_in);
    for xi in 0..out_set.len() {
        let coords = out_set.coords(xi)?;
        for y in 0..n_in {
            m[(xi, y)] = kernels
                .iter()
                .zip(&coords)
                .map(|(k, &c)| k.entries[(c, y)])
                .product();
        }
    }
    Ok(MarkovKernel {
        out_set,
        in_set: first.in_set.clone(),
        entries: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize) -> OutcomeSet {
        OutcomeSet::indexed(n).unwrap()
    }

    fn kernel(rows: usize, cols: usize, v: &[f64]) -> MarkovKernel {
        MarkovKernel::new(
            set(rows),
            set(cols),
            DMatrix::from_row_slice(rows, cols, v),
            &Tolerance::default(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_non_stochastic() {
        let r = MarkovKernel::new(
            set(2),
            set(1),
            DMatrix::from_row_slice(2, 1, &[0.5, 0.6]),
            &Tolerance::default(),
        );
        assert!(matches!(r, Err(Error::InvalidKernel(_))));
        let r = MarkovKernel::new(
            set(2),
            set(1),
            DMatrix::from_row_slice(2, 1, &[1.5, -0.5]),
            &Tolerance::default(),
        );
        assert!(matches!(r, Err(Error::InvalidKernel(_))));
    }

    #[test]
    fn identity_is_neutral() {
        let p = kernel(2, 3, &[0.2, 1.0, 0.0, 0.8, 0.0, 1.0]);
        let left = MarkovKernel::identity(&set(2)).compose(&p).unwrap();
        let right = p.compose(&MarkovKernel::identity(&set(3))).unwrap();
        assert_eq!(left, p);
        assert_eq!(right, p);
    }

    #[test]
    fn uniform_kernel_is_idempotent() {
        let u = kernel(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        assert_eq!(u.compose(&u).unwrap(), u);
    }

    #[test]
    fn label_mismatch_rejected() {
        let p = kernel(2, 3, &[0.2, 1.0, 0.0, 0.8, 0.0, 1.0]);
        assert!(matches!(p.compose(&p), Err(Error::LabelMismatch(_))));
    }

    #[test]
    fn product_of_identities_is_identity() {
        let a = MarkovKernel::identity(&set(2));
        let p = product_kernel(&[a.clone(), a]).unwrap();
        // out = {1,2}², in = {1,2}: p((x1,x2), y) = δ(x1,y)δ(x2,y).
        assert_eq!(p.entries().shape(), (4, 2));
        assert_eq!(p.get(0, 0), 1.0);
        assert_eq!(p.get(3, 1), 1.0);
        assert_eq!(p.get(1, 0) + p.get(2, 0) + p.get(1, 1) + p.get(2, 1), 0.0);
    }

    #[test]
    fn product_of_uniform_is_uniform() {
        let u = MarkovKernel::constant(&set(2), &set(2));
        let p = product_kernel(&[u.clone(), u]).unwrap();
        assert!(p.entries().iter().all(|&v| (v - 0.25).abs() < 1e-15));
    }

    #[test]
    fn product_with_deterministic_factor() {
        // p₁ sends y ↦ y, p₂ = [[.3,.7],[.7,.3]].
        let p1 = MarkovKernel::identity(&set(2));
        let p2 = kernel(2, 2, &[0.3, 0.7, 0.7, 0.3]);
        let p = product_kernel(&[p1, p2]).unwrap();
        let expect = [[0.3, 0.0], [0.7, 0.0], [0.0, 0.7], [0.0, 0.3]];
        for (i, row) in expect.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert!((p.get(i, j) - v).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn product_rejects_mismatched_inputs() {
        let a = MarkovKernel::identity(&set(2));
        let b = MarkovKernel::identity(&set(3));
        assert!(product_kernel(&[a, b]).is_err());
        assert!(product_kernel(&[]).is_err());
    }
}
