//! Global evaluation context: the deformation parameter and truncation policy.

use crate::error::{QcalcError, Result};

/// Default truncation threshold for infinite series and products.
pub const DEFAULT_SERIES_TOL: f64 = 1e-14;

/// Default hard cap on truncation length.
pub const DEFAULT_MAX_TERMS: usize = 10_000;

/// The deformation parameter `q` together with the truncation policy used
/// by every series, product and Jackson sum in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QContext {
    q: f64,
    series_tol: f64,
    max_terms: usize,
    spectral_condition_met: bool,
}

impl QContext {
    /// Context with the default truncation policy. Requires `0 < q < 1`.
    pub fn new(q: f64) -> Result<Self> {
        Self::with_policy(q, DEFAULT_SERIES_TOL, DEFAULT_MAX_TERMS)
    }

    /// Context with an explicit truncation threshold and term cap.
    pub fn with_policy(q: f64, series_tol: f64, max_terms: usize) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) || !q.is_finite() {
            return Err(QcalcError::Domain(format!(
                "q must lie strictly inside (0, 1), got {q}"
            )));
        }
        if !(series_tol > 0.0) {
            return Err(QcalcError::Domain(format!(
                "series_tol must be positive, got {series_tol}"
            )));
        }
        if max_terms == 0 {
            return Err(QcalcError::Domain("max_terms must be at least 1".into()));
        }
        // ln(1-q)/ln(q) within 1e-9 of an even integer. Recorded as a
        // diagnostic only; nothing in the crate enforces it.
        let ratio = (1.0 - q).ln() / q.ln();
        let nearest_even = 2.0 * (ratio / 2.0).round();
        let spectral_condition_met = (ratio - nearest_even).abs() < 1e-9;
        Ok(Self {
            q,
            series_tol,
            max_terms,
            spectral_condition_met,
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn series_tol(&self) -> f64 {
        self.series_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    /// Whether ln(1-q)/ln(q) is within 1e-9 of an even integer.
    pub fn spectral_condition_met(&self) -> bool {
        self.spectral_condition_met
    }

    /// `q^k` for a signed ring exponent.
    pub fn q_pow(&self, k: i32) -> f64 {
        self.q.powi(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_q_outside_open_unit_interval() {
        assert!(QContext::new(0.0).is_err());
        assert!(QContext::new(1.0).is_err());
        assert!(QContext::new(-0.3).is_err());
        assert!(QContext::new(1.5).is_err());
        assert!(QContext::new(f64::NAN).is_err());
        assert!(QContext::new(0.5).is_ok());
    }

    #[test]
    fn rejects_bad_policy() {
        assert!(QContext::with_policy(0.5, 0.0, 100).is_err());
        assert!(QContext::with_policy(0.5, -1e-10, 100).is_err());
        assert!(QContext::with_policy(0.5, 1e-14, 0).is_err());
    }

    #[test]
    fn spectral_condition_is_diagnostic_only() {
        // q = 1/2 gives ln(1/2)/ln(1/2) = 1, odd, so the flag is false,
        // yet construction succeeds.
        let ctx = QContext::new(0.5).unwrap();
        assert!(!ctx.spectral_condition_met());

        // Solve ln(1-q)/ln(q) = 2, i.e. (1-q) = q^2: q = (sqrt(5)-1)/2.
        let golden = (5.0_f64.sqrt() - 1.0) / 2.0;
        let ctx = QContext::new(golden).unwrap();
        assert!(ctx.spectral_condition_met());
    }
}
