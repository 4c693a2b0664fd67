//! Series truncation policy and the diagnostic record returned by every
//! truncated-series evaluation.

use crate::error::{Error, Result};

/// Truncation controls shared by all series evaluations.
///
/// A series stops once three consecutive terms fall below
/// `rel_tol * |partial_sum| + abs_tol`; the three-in-a-row rule guards
/// against false stops on alternating series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPolicy {
    /// Relative tolerance on the truncation tail.
    pub rel_tol: f64,
    /// Absolute floor, so all-but-zero sums can still terminate.
    pub abs_tol: f64,
    /// Hard cap on the number of terms before reporting non-convergence.
    pub max_terms: usize,
}

impl Default for EvalPolicy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-14,
            abs_tol: 1e-300,
            max_terms: 10_000,
        }
    }
}

impl EvalPolicy {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return Err(Error::Domain("EvalPolicy.rel_tol must be positive".into()));
        }
        if self.max_terms < 1 {
            return Err(Error::Domain("EvalPolicy.max_terms must be >= 1".into()));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::Domain("EvalPolicy.abs_tol must be >= 0".into()));
        }
        Ok(())
    }
}

/// Result of a truncated series evaluation.
#[derive(Debug, Clone, Copy)]
pub struct SeriesEval {
    /// Partial sum at the stopping index.
    pub value: f64,
    /// Number of terms actually summed.
    pub terms_used: usize,
    /// Whether the stopping rule fired before `max_terms`.
    pub converged: bool,
    /// Bound on the discarded tail: the largest of the trailing small terms.
    pub abs_tail_estimate: f64,
}

impl SeriesEval {
    /// Converts a non-converged or non-finite evaluation into an error.
    pub fn into_result(self) -> Result<SeriesEval> {
        if !self.value.is_finite() {
            return Err(Error::Overflow(
                "series term or partial sum exceeded f64 range".into(),
            ));
        }
        if !self.converged {
            return Err(Error::NonConvergence {
                terms_used: self.terms_used,
                abs_tail_estimate: self.abs_tail_estimate,
                partial: self.value,
            });
        }
        Ok(self)
    }

    /// Scales the value and tail estimate by a constant factor.
    pub(crate) fn scaled(self, factor: f64) -> SeriesEval {
        SeriesEval {
            value: self.value * factor,
            abs_tail_estimate: self.abs_tail_estimate * factor.abs(),
            ..self
        }
    }
}
