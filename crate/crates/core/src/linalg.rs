//! Small dense linear-algebra helpers over `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Canonical real coordinates of a Hermitian operator: the `d` diagonal
/// real parts, then real and imaginary parts of the strict upper triangle
/// in row-major order. `d²` numbers in total.
pub fn flatten_hermitian(m: &CMatrix) -> Vec<f64> {
    let d = m.nrows();
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        out.push(m[(i, i)].re);
    }
    for i in 0..d {
        for j in (i + 1)..d {
            out.push(m[(i, j)].re);
            out.push(m[(i, j)].im);
        }
    }
    out
}

/// Hilbert–Schmidt inner product `Re tr(A B†)`; real for Hermitian inputs.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x * y.conj()).re).sum()
}

pub fn hs_norm(a: &CMatrix) -> f64 {
    hs_inner(a, a).max(0.0).sqrt()
}

pub fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    max_abs_entry(&(m - m.adjoint()))
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    let herm = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(herm);
    eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Numerical rank of the real matrix whose rows are `rows`, counting
/// singular values above `rel_tol * sigma_max`.
pub fn rank(rows: &[Vec<f64>], rel_tol: f64) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let sv = m.singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Orthonormal basis of the null space and of the row space of `m`
/// (`k × n`), split at `rel_tol * sigma_max`. Columns of the returned
/// matrices are the basis vectors.
pub fn null_and_row_space(m: &DMatrix<f64>, rel_tol: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = m.ncols();
    if m.nrows() == 0 || n == 0 {
        return (DMatrix::identity(n, n), DMatrix::zeros(n, 0));
    }
    // Pad to at least n rows so the SVD yields a full n × n V.
    let rows = m.nrows().max(n);
    let mut padded = DMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let mut null_cols = Vec::new();
    let mut row_cols = Vec::new();
    for (k, s) in svd.singular_values.iter().enumerate() {
        let col = v_t.row(k).transpose();
        if smax > 0.0 && *s > rel_tol * smax {
            row_cols.push(col);
        } else {
            null_cols.push(col);
        }
    }
    (columns(n, &null_cols), columns(n, &row_cols))
}

fn columns(n: usize, cols: &[DVector<f64>]) -> DMatrix<f64> {
    if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(cols)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
