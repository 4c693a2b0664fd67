//! Finite exponential-Bessel integrals S_nu, their infinite complements
//! T_nu, closed forms for the sum S_nu + T_nu, Fox-Wright series
//! representations of S, and the two-variable Lommel function.

use crate::error::{Error, Result};
use crate::foxwright::{inc_foxwright_1psi1, IncFoxWrightParams};
use crate::policy::{EvalPolicy, SeriesEval};
use crate::quad::integrate;
use crate::series::sum_series;
use crate::special::bessel_i_scaled;

/// Margin on the p > 1/2 guard for the closed S_0 forms (see
/// [`s0_closed_forms`]).
const S0_P_MARGIN: f64 = 1e-6;

/// Arguments of S_nu(sqrt(lambda x), omega) with
/// omega = (x + lambda)/(2 sqrt(lambda x)) - 1 >= 0.
#[derive(Debug, Clone, Copy)]
pub struct SvArgs {
    /// Bessel order nu > -1.
    pub nu: f64,
    /// lambda > 0.
    pub lambda: f64,
    /// x > 0.
    pub x: f64,
}

impl SvArgs {
    pub fn new(nu: f64, lambda: f64, x: f64) -> Result<Self> {
        if !(nu > -1.0) || !nu.is_finite() {
            return Err(Error::Domain(format!("S_nu requires nu > -1, got {nu}")));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Domain(format!("S_nu requires lambda > 0, got {lambda}")));
        }
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("S_nu requires x > 0, got {x}")));
        }
        Ok(Self { nu, lambda, x })
    }

    /// omega = (x + lambda)/(2 sqrt(lambda x)) - 1; zero exactly when
    /// x = lambda (AM-GM).
    pub fn omega(&self) -> f64 {
        (self.x + self.lambda) / (2.0 * (self.lambda * self.x).sqrt()) - 1.0
    }

    /// Upper integration limit sqrt(lambda x).
    pub fn z_limit(&self) -> f64 {
        (self.lambda * self.x).sqrt()
    }
}

/// S_nu = int_0^{sqrt(lambda x)} e^{-(omega+1) t} I_nu(t) dt by adaptive
/// quadrature of e^{-omega t} [e^{-t} I_nu(t)].
pub fn s_integral(args: &SvArgs, policy: &EvalPolicy) -> Result<f64> {
    Ok(s_integral_detail(args, policy)?.0)
}

pub(crate) fn s_integral_detail(args: &SvArgs, policy: &EvalPolicy) -> Result<(f64, usize)> {
    let omega = args.omega();
    let nu = args.nu;
    let f = |t: f64| {
        let scaled = match bessel_i_scaled(nu, t, policy) {
            Ok(e) => e.value,
            Err(_) => return f64::NAN,
        };
        (-omega * t).exp() * scaled
    };
    let r = integrate(f, 0.0, args.z_limit(), 1e-13, 1e-12, 4000)?;
    Ok((r.value, r.panels))
}

/// S_nu through its incomplete Fox-Wright series,
///
///   S_nu = 2 (lambda x)^{(nu+1)/2} / (x+lambda)^{nu+1}
///          * Psi[(nu+1, 2, (x+lambda)/2); (nu+1, 1) | lambda x/(x+lambda)^2],
///
/// obtained by expanding the Bessel function term by term. The argument is
/// at most 1/4 (AM-GM), with equality exactly at x = lambda.
pub fn s_via_foxwright(args: &SvArgs, policy: &EvalPolicy) -> Result<f64> {
    let SvArgs { nu, lambda, x } = *args;
    let params = IncFoxWrightParams::new(nu + 1.0, 2.0, 0.5 * (x + lambda), nu + 1.0, 1.0)?;
    let z = lambda * x / ((x + lambda) * (x + lambda));
    let series = inc_foxwright_1psi1(&params, z, policy)?;
    let ln_pref = std::f64::consts::LN_2
        + (nu + 1.0) * (0.5 * (lambda * x).ln() - (x + lambda).ln());
    Ok(ln_pref.exp() * series.value)
}

/// Both closed-form Fox-Wright evaluations of
/// S_0(p, b) = int_0^b e^{-p t} I_0(t) dt:
///
///   S_0 = (1/p) Psi[(1, 2, p b); (1, 1) | 1/(4 p^2)]
///       = 1/p + (1/(2 p^3)) Psi[(2, 2, p b); (2, 1) | 1/(4 p^2)]
///             - e^{-p b} I_0(b) / p.
///
/// The second form follows from the first by the contiguous recurrence for
/// the lower incomplete gamma; carrying the k = 0 term through that
/// recurrence leaves the constant 1/p, which the b -> 0 limit confirms.
///
/// Both series have Delta^(gamma) = 0, and 1/(4 p^2) stays below 1 only for
/// p > 1/2; smaller p is rejected so intermediate terms cannot blow up
/// before the incomplete-gamma cutoff.
pub fn s0_closed_forms(p: f64, b: f64, policy: &EvalPolicy) -> Result<(f64, f64)> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::Domain(format!("s0_closed_forms requires b > 0, got {b}")));
    }
    if !(p >= 0.5 * (1.0 + S0_P_MARGIN)) || !p.is_finite() {
        return Err(Error::Divergence(format!(
            "s0_closed_forms requires p >= {}, got {p}",
            0.5 * (1.0 + S0_P_MARGIN)
        )));
    }
    let z = 1.0 / (4.0 * p * p);
    let first = {
        let params = IncFoxWrightParams::new(1.0, 2.0, p * b, 1.0, 1.0)?;
        inc_foxwright_1psi1(&params, z, policy)?.value / p
    };
    let second = {
        let params = IncFoxWrightParams::new(2.0, 2.0, p * b, 2.0, 1.0)?;
        let psi = inc_foxwright_1psi1(&params, z, policy)?.value;
        let scaled_i0 = bessel_i_scaled(0.0, b, policy)?.value;
        // e^{-p b} I_0(b) = e^{(1-p) b} * [e^{-b} I_0(b)]
        let correction = ((1.0 - p) * b).exp() * scaled_i0;
        if !correction.is_finite() {
            return Err(Error::Overflow(
                "e^{-p b} I_0(b) exceeds f64 range in s0_closed_forms".into(),
            ));
        }
        1.0 / p + psi / (2.0 * p * p * p) - correction / p
    };
    Ok((first, second))
}

/// Closed form for S_nu + T_nu = int_0^inf e^{-(omega+1) t} I_nu(t) dt,
/// the Laplace transform of I_nu at (x+lambda)/(2 sqrt(lambda x)):
///
///   (x + lambda - |x - lambda|)^nu / ((2 sqrt(lambda x))^{nu-1} |x - lambda|).
///
/// Singular at x = lambda.
pub fn st_sum_closed(args: &SvArgs) -> Result<f64> {
    let SvArgs { nu, lambda, x } = *args;
    if x == lambda {
        return Err(Error::Singular(
            "S_nu + T_nu closed form has a |x - lambda| denominator; x = lambda is singular"
                .into(),
        ));
    }
    let two_min = x + lambda - (x - lambda).abs();
    let two_root = 2.0 * (lambda * x).sqrt();
    Ok(two_min.powf(nu) / (two_root.powf(nu - 1.0) * (x - lambda).abs()))
}

/// Tail integral T_nu = int_{sqrt(lambda x)}^inf e^{-(omega+1) t} I_nu(t) dt,
/// derived as the closed-form sum minus the finite part; no infinite-range
/// quadrature is involved.
pub fn t_integral(args: &SvArgs, policy: &EvalPolicy) -> Result<f64> {
    let total = st_sum_closed(args)?;
    let s = s_integral(args, policy)?;
    Ok((total - s).max(0.0))
}

/// Lommel function of two variables,
/// Y_nu(w, z) = sum_k (w/z)^{nu+2k} I_{nu+2k}(z).
///
/// Computed with scaled Bessel terms and unscaled by e^z at the end, so z is
/// limited to <= 600. The Neumann-series convergence condition w/z < 1 is
/// enforced as a precondition.
pub fn lommel_y(nu: f64, w: f64, z: f64, policy: &EvalPolicy) -> Result<SeriesEval> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::Domain(format!("lommel_y requires nu >= 0, got {nu}")));
    }
    if !(w >= 0.0) || !w.is_finite() {
        return Err(Error::Domain(format!("lommel_y requires w >= 0, got {w}")));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("lommel_y requires z > 0, got {z}")));
    }
    if w / z >= 1.0 {
        return Err(Error::Divergence(format!(
            "lommel_y Neumann series requires w/z < 1, got {}",
            w / z
        )));
    }
    if z > 600.0 {
        return Err(Error::Overflow(
            "lommel_y unscales by e^z and is limited to z <= 600".into(),
        ));
    }
    let ratio = w / z;
    let mut bessel_failed = false;
    let eval = sum_series(policy, |k| {
        let order = nu + 2.0 * k as f64;
        let scaled = match bessel_i_scaled(order, z, policy) {
            Ok(e) => e.value,
            Err(_) => {
                bessel_failed = true;
                return f64::NAN;
            }
        };
        ratio.powf(order) * scaled
    });
    if bessel_failed {
        return Err(Error::Domain("lommel_y inner Bessel evaluation failed".into()));
    }
    eval.into_result().map(|e| e.scaled(z.exp()))
}
