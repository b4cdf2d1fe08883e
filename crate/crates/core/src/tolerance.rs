use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by every decision in the crate.
///
/// Effects are bounded by the identity, so entries are O(1) and absolute
/// thresholds are used everywhere except `rank`, which is relative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Max entrywise deviation from Hermiticity.
    pub herm: f64,
    /// Smallest admissible eigenvalue is `-pos`.
    pub pos: f64,
    /// Normalization, column sums and equality residuals.
    pub norm: f64,
    /// Relative threshold for rank and linear-independence tests.
    pub rank: f64,
    /// Band around zero in which strict inequalities are not decided.
    pub boundary: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            herm: 1e-9,
            pos: 1e-10,
            norm: 1e-9,
            rank: 1e-9,
            boundary: 1e-7,
        }
    }
}

impl Tolerance {
    pub fn with_boundary(mut self, boundary: f64) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn is_valid(&self) -> bool {
        [self.herm, self.pos, self.norm, self.rank, self.boundary]
            .iter()
            .all(|v| v.is_finite() && *v >= 0.0)
    }
}
