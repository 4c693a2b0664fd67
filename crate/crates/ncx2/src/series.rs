//! Shared series-summation kernel implementing the uniform truncation rule.

use crate::dd::Dd;
use crate::policy::{EvalPolicy, SeriesEval};

/// Number of consecutive below-threshold terms required before stopping.
const SMALL_RUN: u32 = 3;

/// Sums `term(0) + term(1) + ...` until three consecutive terms drop below
/// `rel_tol * |sum| + abs_tol` or `max_terms` is hit.
///
/// A non-finite term aborts the run with `converged = false` and a non-finite
/// value, which `SeriesEval::into_result` maps to an overflow error.
pub(crate) fn sum_series<F>(policy: &EvalPolicy, mut term: F) -> SeriesEval
where
    F: FnMut(usize) -> f64,
{
    let mut sum = 0.0f64;
    let mut run = 0u32;
    let mut tail = 0.0f64;
    let mut last = f64::INFINITY;

    for n in 0..policy.max_terms {
        let t = term(n);
        if !t.is_finite() {
            return SeriesEval {
                value: t,
                terms_used: n + 1,
                converged: false,
                abs_tail_estimate: f64::INFINITY,
            };
        }
        sum += t;
        last = t.abs();
        if last <= policy.rel_tol * sum.abs() + policy.abs_tol {
            tail = if run == 0 { last } else { tail.max(last) };
            run += 1;
            if run >= SMALL_RUN {
                return SeriesEval {
                    value: sum,
                    terms_used: n + 1,
                    converged: true,
                    abs_tail_estimate: tail,
                };
            }
        } else {
            run = 0;
        }
    }

    SeriesEval {
        value: sum,
        terms_used: policy.max_terms,
        converged: false,
        abs_tail_estimate: last,
    }
}

/// Double-double variant of [`sum_series`] for heavily cancelling series.
pub(crate) fn sum_series_dd<F>(policy: &EvalPolicy, mut term: F) -> SeriesEval
where
    F: FnMut(usize) -> Dd,
{
    let mut sum = Dd::default();
    let mut run = 0u32;
    let mut tail = 0.0f64;
    let mut last = f64::INFINITY;

    for n in 0..policy.max_terms {
        let t = term(n);
        if !t.hi.is_finite() {
            return SeriesEval {
                value: t.hi,
                terms_used: n + 1,
                converged: false,
                abs_tail_estimate: f64::INFINITY,
            };
        }
        sum = sum.add(t);
        last = t.to_f64().abs();
        if last <= policy.rel_tol * sum.to_f64().abs() + policy.abs_tol {
            tail = if run == 0 { last } else { tail.max(last) };
            run += 1;
            if run >= SMALL_RUN {
                return SeriesEval {
                    value: sum.to_f64(),
                    terms_used: n + 1,
                    converged: true,
                    abs_tail_estimate: tail,
                };
            }
        } else {
            run = 0;
        }
    }

    SeriesEval {
        value: sum.to_f64(),
        terms_used: policy.max_terms,
        converged: false,
        abs_tail_estimate: last,
    }
}
