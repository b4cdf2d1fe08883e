use nalgebra::{DMatrix, DVector};

use super::system::{LinearSystem, Row};
use crate::error::Result;
use crate::linalg::null_and_row_space;
use crate::tolerance::Tolerance;

/// Inequality system in the coordinates of the affine hull of the
/// equalities, plus the embedding `x = origin + basis · z`.
#[derive(Debug, Clone)]
pub struct AffineReduction {
    pub system: LinearSystem,
    pub origin: Vec<f64>,
    /// `n × n′`, orthonormal columns.
    pub basis: DMatrix<f64>,
}

impl AffineReduction {
    pub fn reduced_dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn embed(&self, z: &[f64]) -> Vec<f64> {
        let z = DVector::from_column_slice(z);
        let x = &self.basis * z;
        x.iter().zip(&self.origin).map(|(a, b)| a + b).collect()
    }

    /// Maps a direction (no translation).
    pub fn embed_direction(&self, z: &[f64]) -> Vec<f64> {
        let z = DVector::from_column_slice(z);
        (&self.basis * z).iter().cloned().collect()
    }
}

#[derive(Debug, Clone)]
pub enum Reduction {
    /// The equalities are inconsistent; `residual` is the least-squares
    /// residual that exceeded tolerance.
    Empty { residual: f64 },
    Affine(AffineReduction),
}

/// Eliminates the equality rows of `sys`.
///
/// The reduced dimension is `n − rank(eq rows)`, with the rank counted from
/// singular values above `tol.rank · σ_max`.
pub fn affine_reduce(sys: &LinearSystem, tol: &Tolerance) -> Result<Reduction> {
    let n = sys.dim();
    let eq = sys.eq_rows();
    let (origin, basis) = if eq.is_empty() {
        (vec![0.0; n], DMatrix::identity(n, n))
    } else {
        let e = DMatrix::from_fn(eq.len(), n, |i, j| eq[i].coeffs[j]);
        let rhs = DVector::from_iterator(eq.len(), eq.iter().map(|r| r.rhs));
        let (null, row) = null_and_row_space(&e, tol.rank);
        // Minimum-norm solution inside the row space.
        let x0 = if row.ncols() == 0 {
            DVector::zeros(n)
        } else {
            let er = &e * &row;
            let svd = er.svd(true, true);
            let solve = |b: &DVector<f64>| {
                svd.solve(b, 0.0)
                    .map_err(|e| crate::error::Error::Numerical(e.to_string()))
            };
            let mut x = &row * solve(&rhs)?;
            // The SVD solve alone leaves residuals near 1e-9.
            for _ in 0..3 {
                let r = &rhs - &e * &x;
                x += &row * solve(&r)?;
            }
            x
        };
        let residual = (&e * &x0 - &rhs).amax();
        let scale = 1.0 + rhs.amax();
        if residual > tol.norm * scale {
            return Ok(Reduction::Empty { residual });
        }
        (x0.iter().cloned().collect(), null)
    };

    let x0 = DVector::from_column_slice(&origin);
    let mut reduced = LinearSystem::new(basis.ncols());
    for row in sys.ineq_rows() {
        let a = DVector::from_column_slice(&row.coeffs);
        let coeffs: Vec<f64> = (basis.transpose() * &a).iter().cloned().collect();
        let rhs = row.rhs - a.dot(&x0);
        reduced.add_ineq(coeffs, rhs);
    }
    Ok(Reduction::Affine(AffineReduction {
        system: reduced,
        origin,
        basis,
    }))
}

/// Unit-normalized copies of the rows of `rows`, dropping (numerically)
/// zero rows. Zero rows whose constant constraint `0 ≥ rhs` fails are
/// reported through the returned flag.
pub(crate) fn normalized_rows(rows: &[Row], tol: &Tolerance) -> (Vec<Row>, bool) {
    let mut out: Vec<Row> = Vec::with_capacity(rows.len());
    let mut violated = false;
    for row in rows {
        let nrm = crate::linalg::norm(&row.coeffs);
        if nrm <= tol.rank {
            if row.rhs > tol.norm {
                violated = true;
            }
            continue;
        }
        let r = Row::new(
            row.coeffs.iter().map(|c| c / nrm).collect(),
            row.rhs / nrm,
        );
        let duplicate = out.iter().any(|o| {
            (o.rhs - r.rhs).abs() <= 1e-12
                && o.coeffs
                    .iter()
                    .zip(&r.coeffs)
                    .all(|(a, b)| (a - b).abs() <= 1e-12)
        });
        if !duplicate {
            out.push(r);
        }
    }
    (out, violated)
}
