//! Incomplete Fox-Wright function 1Psi1^(gamma): a Fox-Wright series whose
//! leading Gamma factor is replaced by a lower incomplete gamma,
//!
//!   sum_n gamma(mu + n M, x) / Gamma(b + n B) * z^n / n!.
//!
//! For finite x the incomplete gamma factor decays super-exponentially once
//! mu + n M outruns x, so the series is entire in z even where the complete
//! Fox-Wright function (x = infinity) would sit on or beyond its |z| = nabla
//! convergence boundary. Overflowing intermediate terms are detected and
//! reported rather than guarded by the complete-function convergence test,
//! which would wrongly reject in-range boundary cases such as x = lambda.

use crate::error::{Error, Result};
use crate::policy::{EvalPolicy, SeriesEval};
use crate::series::sum_series;
use crate::special::{lgamma_raw, reg_gamma_pair};

/// Parameter block for the p = q = 1 incomplete Fox-Wright series.
#[derive(Debug, Clone, Copy)]
pub struct IncFoxWrightParams {
    /// Base of the incomplete-gamma argument, mu > 0.
    pub mu: f64,
    /// Step of the incomplete-gamma argument, M > 0.
    pub m_step: f64,
    /// Split point of the incomplete gamma, x >= 0.
    pub x_split: f64,
    /// Base of the denominator Gamma, b > 0.
    pub b: f64,
    /// Step of the denominator Gamma, B > 0.
    pub b_step: f64,
}

impl IncFoxWrightParams {
    pub fn new(mu: f64, m_step: f64, x_split: f64, b: f64, b_step: f64) -> Result<Self> {
        let p = Self {
            mu,
            m_step,
            x_split,
            b,
            b_step,
        };
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::Domain(format!("Fox-Wright mu must be > 0, got {mu}")));
        }
        if !(m_step > 0.0) || !(b_step > 0.0) {
            return Err(Error::Domain(
                "Fox-Wright steps M and B must be > 0".into(),
            ));
        }
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::Domain(format!("Fox-Wright b must be > 0, got {b}")));
        }
        if !(x_split >= 0.0) || !x_split.is_finite() {
            return Err(Error::Domain(format!(
                "Fox-Wright x must be >= 0, got {x_split}"
            )));
        }
        if p.delta_gamma() < 0.0 {
            return Err(Error::Divergence(format!(
                "Fox-Wright convergence constraint Delta = 1 + B - M >= 0 violated: {}",
                p.delta_gamma()
            )));
        }
        Ok(p)
    }

    /// Convergence exponent Delta^(gamma) = 1 + B - M.
    pub fn delta_gamma(&self) -> f64 {
        1.0 + self.b_step - self.m_step
    }

    /// Radius parameter nabla = B^B M^{-M} of the complete series when
    /// Delta^(gamma) = 0.
    pub fn nabla(&self) -> f64 {
        self.b_step.powf(self.b_step) * self.m_step.powf(-self.m_step)
    }
}

/// Evaluates the incomplete Fox-Wright series.
///
/// Each term is assembled in log space,
/// exp(ln P(mu+nM, x) + lnGamma(mu+nM) - lnGamma(b+nB) - ln n! + n ln|z|),
/// with an explicit sign factor for z < 0.
pub fn inc_foxwright_1psi1(
    params: &IncFoxWrightParams,
    z: f64,
    policy: &EvalPolicy,
) -> Result<SeriesEval> {
    policy.validate()?;
    if !z.is_finite() {
        return Err(Error::Domain(format!("Fox-Wright argument must be finite, got {z}")));
    }
    if params.x_split == 0.0 {
        return Ok(SeriesEval {
            value: 0.0,
            terms_used: 1,
            converged: true,
            abs_tail_estimate: 0.0,
        });
    }
    let ln_abs_z = z.abs().ln();
    let negative = z < 0.0;
    let IncFoxWrightParams {
        mu,
        m_step,
        x_split,
        b,
        b_step,
    } = *params;

    let eval = sum_series(policy, |n| {
        let nf = n as f64;
        let a_n = mu + nf * m_step;
        let p = match reg_gamma_pair(a_n, x_split) {
            Ok((p, _)) => p,
            Err(_) => return f64::NAN,
        };
        if p == 0.0 {
            return 0.0;
        }
        let mut ln_t = p.ln() + lgamma_raw(a_n) - lgamma_raw(b + nf * b_step)
            - lgamma_raw(nf + 1.0);
        if n > 0 {
            ln_t += nf * ln_abs_z;
        }
        let t = ln_t.exp();
        if negative && n % 2 == 1 {
            -t
        } else {
            t
        }
    });
    eval.into_result()
}
