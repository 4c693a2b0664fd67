//! Generalized Marcum Q-function Q_mu(a, b): direct quadrature of the
//! defining integral, the incomplete confluent hypergeometric series route,
//! the Gauss-hypergeometric confluence limit, and the diagonal (b = a)
//! closed forms for integer and half-integer order.

use crate::error::{Error, Result};
use crate::hyper::{hyp1f1_inc_upper, hyp2f1_inc_upper};
use crate::policy::EvalPolicy;
use crate::quad::{integrate, QuadResult};
use crate::special::{bessel_i_scaled, erfc, reg_gamma_upper};

/// Gaussian-decay margin: e^{-(t-a)^2/2} < 1e-300 beyond max(a, b) + 40,
/// so the integral is cut there.
const TAIL_MARGIN: f64 = 40.0;

/// Arguments of Q_mu(a, b).
#[derive(Debug, Clone, Copy)]
pub struct MarcumArgs {
    /// Order mu > 0.
    pub mu: f64,
    /// Noncentrality argument a >= 0.
    pub a: f64,
    /// Threshold b >= 0.
    pub b: f64,
}

impl MarcumArgs {
    pub fn new(mu: f64, a: f64, b: f64) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::Domain(format!("Marcum order mu must be > 0, got {mu}")));
        }
        if !(a >= 0.0) || !a.is_finite() {
            return Err(Error::Domain(format!("Marcum argument a must be >= 0, got {a}")));
        }
        if !(b >= 0.0) || !b.is_finite() {
            return Err(Error::Domain(format!("Marcum threshold b must be >= 0, got {b}")));
        }
        Ok(Self { mu, a, b })
    }
}

/// Q_mu(a, b) by adaptive quadrature of
/// a^{1-mu} int_b^inf t^mu e^{-(t^2+a^2)/2} I_{mu-1}(a t) dt.
///
/// The integrand is evaluated as
/// exp(mu ln t + (1-mu) ln a - (t-a)^2/2) * [e^{-at} I_{mu-1}(a t)], which
/// never overflows: (t^2+a^2)/2 - at = (t-a)^2/2 pairs the exponential with
/// the Bessel growth.
///
/// Requires a > 0 (the a^{mu-1} normalization is singular in form at a = 0;
/// use [`marcum_q_via_1g1`] there).
pub fn marcum_q_quadrature(args: &MarcumArgs, policy: &EvalPolicy) -> Result<f64> {
    Ok(marcum_q_quadrature_detail(args, policy)?.0)
}

pub(crate) fn marcum_q_quadrature_detail(
    args: &MarcumArgs,
    policy: &EvalPolicy,
) -> Result<(f64, usize)> {
    let MarcumArgs { mu, a, b } = *args;
    if a <= 0.0 {
        return Err(Error::Domain(
            "marcum_q_quadrature requires a > 0; use marcum_q_via_1g1 for a = 0".into(),
        ));
    }
    let cut = a.max(b) + TAIL_MARGIN;
    let ln_a = a.ln();
    let f = |t: f64| {
        let scaled = match bessel_i_scaled(mu - 1.0, a * t, policy) {
            Ok(e) => e.value,
            Err(_) => return f64::NAN,
        };
        (mu * t.ln() + (1.0 - mu) * ln_a - 0.5 * (t - a) * (t - a)).exp() * scaled
    };
    let QuadResult { value, panels, .. } = integrate(f, b, cut, 1e-13, 1e-12, 4000)?;
    Ok((value.clamp(0.0, 1.0), panels))
}

/// Q_M(sqrt(2 a), sqrt(2 x)) through the incomplete confluent
/// hypergeometric series:
///
///   e^{-a} sum_n Gamma(M+n, x)/Gamma(M) / (M)_n * a^n / n!
///     = e^{-a} sum_n Q(M+n, x) a^n / n!.
///
/// Valid at a = 0, where it reduces to the central case Gamma(M, x)/Gamma(M).
pub fn marcum_q_via_1g1(m: f64, a_half: f64, x_half: f64, policy: &EvalPolicy) -> Result<f64> {
    Ok(marcum_q_via_1g1_detail(m, a_half, x_half, policy)?.0)
}

pub(crate) fn marcum_q_via_1g1_detail(
    m: f64,
    a_half: f64,
    x_half: f64,
    policy: &EvalPolicy,
) -> Result<(f64, usize)> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::Domain(format!("Marcum order must be > 0, got {m}")));
    }
    if !(a_half >= 0.0) || !(x_half >= 0.0) {
        return Err(Error::Domain(
            "marcum_q_via_1g1 requires a >= 0 and x >= 0".into(),
        ));
    }
    if a_half == 0.0 {
        return Ok((reg_gamma_upper(m, x_half)?, 1));
    }
    let series = hyp1f1_inc_upper(m, x_half, m, a_half, policy)?;
    Ok((
        ((-a_half).exp() * series.value).clamp(0.0, 1.0),
        series.terms_used,
    ))
}

/// Q_{n+1}(a, a) closed form: 1/2 (1 + e^{-a^2} I_0(a^2)) +
/// e^{-a^2} sum_{k=1}^n I_k(a^2).
pub fn marcum_q_diag_int(n: u32, a: f64, policy: &EvalPolicy) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("diagonal Marcum requires a > 0, got {a}")));
    }
    let z = a * a;
    let mut q = 0.5 * (1.0 + bessel_i_scaled(0.0, z, policy)?.value);
    for k in 1..=n {
        q += bessel_i_scaled(k as f64, z, policy)?.value;
    }
    Ok(q.clamp(0.0, 1.0))
}

/// Q_{n+1/2}(a, a) closed form: 1/2 (1 + erfc(sqrt 2 a)) +
/// e^{-a^2} sum_{k=1}^n I_{k-1/2}(a^2).
pub fn marcum_q_diag_halfint(n: u32, a: f64, policy: &EvalPolicy) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("diagonal Marcum requires a > 0, got {a}")));
    }
    let z = a * a;
    let mut q = 0.5 * (1.0 + erfc(std::f64::consts::SQRT_2 * a));
    for k in 1..=n {
        q += bessel_i_scaled(k as f64 - 0.5, z, policy)?.value;
    }
    Ok(q.clamp(0.0, 1.0))
}

/// Q_M(sqrt(2 a), sqrt(2 x)) through the confluence limit of the incomplete
/// Gauss hypergeometric series at finite b:
///
///   e^{-a} 2G1([M, x], b; M | a/b),
///
/// which converges to [`marcum_q_via_1g1`] at rate O(1/b) as b -> infinity.
pub fn marcum_q_confluence(
    m: f64,
    a_half: f64,
    x_half: f64,
    b: f64,
    policy: &EvalPolicy,
) -> Result<f64> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::Domain(format!("Marcum order must be > 0, got {m}")));
    }
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::Domain(format!("confluence parameter b must be > 0, got {b}")));
    }
    if !(a_half >= 0.0) || !(x_half >= 0.0) {
        return Err(Error::Domain(
            "marcum_q_confluence requires a >= 0 and x >= 0".into(),
        ));
    }
    if a_half == 0.0 {
        return reg_gamma_upper(m, x_half);
    }
    if a_half / b >= 1.0 {
        return Err(Error::Divergence(format!(
            "confluence series requires a/b < 1, got {}",
            a_half / b
        )));
    }
    let series = hyp2f1_inc_upper(m, x_half, b, m, a_half / b, policy)?;
    Ok(((-a_half).exp() * series.value).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    const POLICY: EvalPolicy = EvalPolicy {
        rel_tol: 1e-14,
        abs_tol: 1e-300,
        max_terms: 10_000,
    };

    fn rel_err(got: f64, want: f64) -> f64 {
        (got - want).abs() / want.abs().max(1e-300)
    }

    #[test]
    fn quadrature_boundary_cases() {
        // Q_mu(a, 0) = 1: the full density integrates to one
        for (mu, a) in [(1.0, 1.0), (2.5, 0.5), (0.75, 2.0)] {
            let q = marcum_q_quadrature(&MarcumArgs::new(mu, a, 0.0).unwrap(), &POLICY).unwrap();
            assert!((q - 1.0).abs() < 1e-12, "Q_{mu}({a}, 0) = {q}");
        }
        // far tail vanishes
        let q = marcum_q_quadrature(&MarcumArgs::new(1.0, 1.0, 41.0).unwrap(), &POLICY).unwrap();
        assert!(q < 1e-12);
        // a = 0 is routed elsewhere
        assert!(marcum_q_quadrature(&MarcumArgs::new(1.0, 0.0, 1.0).unwrap(), &POLICY).is_err());
    }

    #[test]
    fn quadrature_known_value() {
        // Q_1(sqrt2, sqrt3), mpmath reference
        let args = MarcumArgs::new(1.0, 2.0f64.sqrt(), 3.0f64.sqrt()).unwrap();
        let q = marcum_q_quadrature(&args, &POLICY).unwrap();
        assert!(rel_err(q, 0.512054316683796) < 1e-12, "{q}");
    }

    #[test]
    fn via_1g1_matches_quadrature() {
        // Q_M(sqrt(2a), sqrt(2x)) with (M, a, x) mapped to the quadrature args
        for (m, ah, xh) in [(1.0, 1.0, 1.0), (2.0, 0.5, 2.0), (0.75, 3.0, 1.0), (3.5, 2.0, 0.25)] {
            let via = marcum_q_via_1g1(m, ah, xh, &POLICY).unwrap();
            let args = MarcumArgs::new(m, (2.0 * ah).sqrt(), (2.0 * xh).sqrt()).unwrap();
            let quad = marcum_q_quadrature(&args, &POLICY).unwrap();
            assert!(
                (via - quad).abs() < 1e-10,
                "M={m} a={ah} x={xh}: {via} vs {quad}"
            );
        }
    }

    #[test]
    fn via_1g1_boundaries() {
        // a = 0: central case Gamma(M, x)/Gamma(M)
        let q = marcum_q_via_1g1(2.0, 0.0, 1.5, &POLICY).unwrap();
        assert!(rel_err(q, reg_gamma_upper(2.0, 1.5).unwrap()) < 1e-14);
        // x = 0: series collapses to e^{-a} e^{a} = 1
        let q = marcum_q_via_1g1(2.0, 3.0, 0.0, &POLICY).unwrap();
        assert!((q - 1.0).abs() < 1e-13);
        // mpmath reference: Q_1(sqrt2, 1) = e^{-1} 1G1([1, 1/2]; 1 | 1)
        let q = marcum_q_via_1g1(1.0, 1.0, 0.5, &POLICY).unwrap();
        assert!(rel_err(q, 0.81930997272516141) < 1e-13);
    }

    #[test]
    fn diag_int_values() {
        // n = 0: Q_1(1,1) = (1 + e^{-1} I_0(1))/2, mpmath 0.73287980379682022
        let q = marcum_q_diag_int(0, 1.0, &POLICY).unwrap();
        assert!(rel_err(q, 0.73287980379682022) < 1e-13);
        // n = 2: Q_3(1,1), mpmath 0.99072899604075221
        let q = marcum_q_diag_int(2, 1.0, &POLICY).unwrap();
        assert!(rel_err(q, 0.99072899604075221) < 1e-13);
        // a -> 0+ limit is 1
        let q = marcum_q_diag_int(0, 1e-8, &POLICY).unwrap();
        assert!((q - 1.0).abs() < 1e-10);
    }

    #[test]
    fn diag_halfint_values() {
        // n = 0: (1 + erfc(sqrt 2 a))/2
        let q = marcum_q_diag_halfint(0, 1.0, &POLICY).unwrap();
        assert!(rel_err(q, 0.52275013194817921) < 1e-13);
        // erfc of a large argument vanishes: Q -> 1/2
        let q = marcum_q_diag_halfint(0, 5.0, &POLICY).unwrap();
        assert!((q - 0.5).abs() < 1e-12);
        // n = 1: Q_{3/2}(1,1), mpmath 0.86770144583642383
        let q = marcum_q_diag_halfint(1, 1.0, &POLICY).unwrap();
        assert!(rel_err(q, 0.86770144583642383) < 1e-13);
    }

    #[test]
    fn diag_matches_quadrature() {
        for (n, a) in [(0u32, 0.5), (1, 1.0), (3, 2.0)] {
            let d = marcum_q_diag_int(n, a, &POLICY).unwrap();
            let q = marcum_q_quadrature(
                &MarcumArgs::new(n as f64 + 1.0, a, a).unwrap(),
                &POLICY,
            )
            .unwrap();
            assert!((d - q).abs() < 1e-10, "n={n} a={a}: {d} vs {q}");
            let dh = marcum_q_diag_halfint(n, a, &POLICY).unwrap();
            let qh = marcum_q_quadrature(
                &MarcumArgs::new(n as f64 + 0.5, a, a).unwrap(),
                &POLICY,
            )
            .unwrap();
            assert!((dh - qh).abs() < 1e-10, "half n={n} a={a}: {dh} vs {qh}");
        }
    }

    #[test]
    fn confluence_converges_to_1g1() {
        let limit = marcum_q_via_1g1(1.0, 1.0, 1.0, &POLICY).unwrap();
        // error shrinks ~1/b; the ratio between b = 128 and b = 256 sits at
        // 2.007 (mpmath), so assert the first-order window
        let e128 = (marcum_q_confluence(1.0, 1.0, 1.0, 128.0, &POLICY).unwrap() - limit).abs();
        let e256 = (marcum_q_confluence(1.0, 1.0, 1.0, 256.0, &POLICY).unwrap() - limit).abs();
        let ratio = e128 / e256;
        assert!((1.8..=2.2).contains(&ratio), "ratio {ratio}");
        assert!(rel_err(e128, 0.0037887914993601) < 1e-8, "{e128}");
        // large-b agreement
        let big = marcum_q_confluence(2.0, 0.5, 0.5, 1e6, &POLICY).unwrap();
        let lim = marcum_q_via_1g1(2.0, 0.5, 0.5, &POLICY).unwrap();
        assert!((big - lim).abs() < 1e-5, "{big} vs {lim}");
        // a/b >= 1 is rejected
        assert!(matches!(
            marcum_q_confluence(1.0, 2.0, 1.0, 2.0, &POLICY),
            Err(Error::Divergence(_))
        ));
        // a = 0 reduces to the central case
        let c = marcum_q_confluence(2.0, 0.0, 1.5, 64.0, &POLICY).unwrap();
        assert!(rel_err(c, reg_gamma_upper(2.0, 1.5).unwrap()) < 1e-14);
    }

    #[test]
    fn range_and_monotonicity() {
        for mu in [0.5, 1.0, 1.5, 2.0, 5.0] {
            for a in [0.1, 1.0, 3.0] {
                let mut prev = 1.0 + 1e-15;
                for b in [0.0, 0.5, 2.0, 8.0] {
                    let q = if b == 0.0 {
                        1.0
                    } else {
                        marcum_q_quadrature(&MarcumArgs::new(mu, a, b).unwrap(), &POLICY).unwrap()
                    };
                    assert!((0.0..=1.0).contains(&q), "Q out of range at {mu},{a},{b}");
                    assert!(q <= prev + 1e-12, "Q not nonincreasing at {mu},{a},{b}");
                    prev = q;
                }
            }
        }
    }
}
