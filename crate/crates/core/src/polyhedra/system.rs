use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::dot;

/// One linear row `coeffs · x (= | ≥) rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

impl Row {
    pub fn new(coeffs: Vec<f64>, rhs: f64) -> Self {
        Row { coeffs, rhs }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.coeffs, x)
    }
}

/// A real system of linear equalities `a·x = α` and inequalities `a·x ≥ α`
/// over `ℝⁿ`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearSystem {
    n: usize,
    eq: Vec<Row>,
    ineq: Vec<Row>,
}

impl LinearSystem {
    pub fn new(n: usize) -> Self {
        LinearSystem {
            n,
            eq: Vec::new(),
            ineq: Vec::new(),
        }
    }

    /// Builds a system from externally supplied rows, checking lengths.
    pub fn from_rows(n: usize, eq: Vec<Row>, ineq: Vec<Row>) -> Result<Self> {
        for row in eq.iter().chain(&ineq) {
            if row.coeffs.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.coeffs.len(),
                });
            }
            if !row.rhs.is_finite() || row.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidInput("non-finite coefficient".into()));
            }
        }
        Ok(LinearSystem { n, eq, ineq })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eq_rows(&self) -> &[Row] {
        &self.eq
    }

    pub fn ineq_rows(&self) -> &[Row] {
        &self.ineq
    }

    /// Adds `coeffs · x = rhs`.
    ///
    /// Panics if `coeffs.len()` differs from the ambient dimension.
    pub fn add_eq(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        assert_eq!(coeffs.len(), self.n, "equality row has wrong length");
        self.eq.push(Row::new(coeffs, rhs));
        self
    }

    /// Adds `coeffs · x ≥ rhs`.
    ///
    /// Panics if `coeffs.len()` differs from the ambient dimension.
    pub fn add_ineq(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        assert_eq!(coeffs.len(), self.n, "inequality row has wrong length");
        self.ineq.push(Row::new(coeffs, rhs));
        self
    }

    /// `x_i ≥ 0` for every coordinate.
    pub fn add_nonnegativity(&mut self) -> &mut Self {
        for i in 0..self.n {
            let mut c = vec![0.0; self.n];
            c[i] = 1.0;
            self.add_ineq(c, 0.0);
        }
        self
    }

    pub fn is_homogeneous(&self) -> bool {
        self.eq.iter().chain(&self.ineq).all(|r| r.rhs == 0.0)
    }

    /// Largest equality residual and largest inequality violation at `x`.
    pub fn residuals(&self, x: &[f64]) -> (f64, f64) {
        let eq = self
            .eq
            .iter()
            .map(|r| (r.eval(x) - r.rhs).abs())
            .fold(0.0, f64::max);
        let ineq = self
            .ineq
            .iter()
            .map(|r| (r.rhs - r.eval(x)).max(0.0))
            .fold(0.0, f64::max);
        (eq, ineq)
    }

    pub fn is_satisfied_by(&self, x: &[f64], tol: f64) -> bool {
        let (e, i) = self.residuals(x);
        x.len() == self.n && e <= tol && i <= tol
    }
}
