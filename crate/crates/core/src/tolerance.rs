use serde::Serialize;

/// Default tolerance for every floating-point identity check.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Default relative threshold for deciding that a Krein parameter is nonzero.
pub const DEFAULT_NZ_RELATIVE: f64 = 1e-6;

/// Mixed absolute/relative tolerance: a residual `r` measured against a
/// quantity of magnitude `s` passes iff `|r| <= tol * max(1, |s|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance(pub f64);

impl Tolerance {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn bound(self, scale: f64) -> f64 {
        self.0 * scale.abs().max(1.0)
    }

    pub fn accepts(self, residual: f64, scale: f64) -> bool {
        residual.abs() <= self.bound(scale)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(DEFAULT_TOLERANCE)
    }
}
