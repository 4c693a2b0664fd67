//! Complete and incomplete hypergeometric series: 0F1, 1F1, 2F2, incomplete
//! Pochhammer symbols, and the incomplete confluent / Gauss hypergeometric
//! sums built from them.
//!
//! Complete and incomplete series both run on exact term-ratio recurrences
//! with double-double accumulation, so alternating arguments like
//! 2F2(...; -2 lambda) keep full precision; each incomplete term carries its
//! own regularized incomplete gamma factor. The contiguous recurrence for
//! gamma(a+1, x) is deliberately never used as a computation path.

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::policy::{EvalPolicy, SeriesEval};
use crate::series::sum_series_dd;
use crate::special::{lgamma_raw, reg_gamma_pair};

fn is_nonpositive_integer(v: f64) -> bool {
    v <= 0.0 && v.fract() == 0.0
}

/// Generic ratio-driven sum of Prod(num_i)_n / Prod(den_j)_n * z^n / n!.
fn sum_ratio_series(num: &[f64], den: &[f64], z: f64, policy: &EvalPolicy) -> SeriesEval {
    let mut term = Dd::from_f64(1.0);
    let num = num.to_vec();
    let den = den.to_vec();
    sum_series_dd(policy, move |n| {
        if n > 0 {
            let k = (n - 1) as f64;
            for a in &num {
                term = term.mul_f64(a + k);
            }
            for b in &den {
                term = term.div_f64(b + k);
            }
            term = term.mul_f64(z).div_f64(n as f64);
        }
        term
    })
}

/// Confluent limit series 0F1(; c; z).
pub fn hyp0f1(c: f64, z: f64, policy: &EvalPolicy) -> Result<SeriesEval> {
    if is_nonpositive_integer(c) {
        return Err(Error::Domain(format!(
            "hyp0f1 lower parameter must not be a nonpositive integer, got {c}"
        )));
    }
    policy.validate()?;
    sum_ratio_series(&[], &[c], z, policy).into_result()
}

/// Kummer confluent hypergeometric 1F1(a; b; z).
///
/// For z < -30 the Kummer transform 1F1(a;b;z) = e^z 1F1(b-a;b;-z) avoids
/// the worst of the alternating-series cancellation.
pub fn hyp1f1(a: f64, b: f64, z: f64, policy: &EvalPolicy) -> Result<SeriesEval> {
    if is_nonpositive_integer(b) {
        return Err(Error::Domain(format!(
            "hyp1f1 lower parameter must not be a nonpositive integer, got {b}"
        )));
    }
    policy.validate()?;
    if z < -30.0 {
        let transformed = sum_ratio_series(&[b - a], &[b], -z, policy).into_result()?;
        return Ok(transformed.scaled(z.exp()));
    }
    sum_ratio_series(&[a], &[b], z, policy).into_result()
}

/// Generalized hypergeometric 2F2(a1, a2; b1, b2; z), entire in z.
pub fn hyp2f2(
    a1: f64,
    a2: f64,
    b1: f64,
    b2: f64,
    z: f64,
    policy: &EvalPolicy,
) -> Result<SeriesEval> {
    if is_nonpositive_integer(b1) || is_nonpositive_integer(b2) {
        return Err(Error::Domain(format!(
            "hyp2f2 lower parameters must not be nonpositive integers, got {b1}, {b2}"
        )));
    }
    policy.validate()?;
    sum_ratio_series(&[a1, a2], &[b1, b2], z, policy).into_result()
}

/// Gamma(a+n)/Gamma(a): the direct product while it is exactly
/// representable, the log-space ratio beyond the overflow threshold.
fn pochhammer_ratio(a: f64, n: u32) -> f64 {
    if a + n as f64 <= 170.0 {
        let mut prod = 1.0f64;
        for k in 0..n {
            prod *= a + k as f64;
        }
        prod
    } else {
        (lgamma_raw(a + n as f64) - lgamma_raw(a)).exp()
    }
}

/// Lower incomplete Pochhammer symbol (a; x)_n = gamma(a+n, x) / Gamma(a),
/// evaluated as P(a+n, x) * Gamma(a+n)/Gamma(a) with the ratio switched to
/// log space once a + n crosses the Gamma overflow threshold.
pub fn inc_pochhammer_lower(a: f64, x_split: f64, n: u32) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!(
            "incomplete Pochhammer requires a > 0, got {a}"
        )));
    }
    let (p, _) = reg_gamma_pair(a + n as f64, x_split)?;
    Ok(p * pochhammer_ratio(a, n))
}

/// Upper incomplete Pochhammer symbol [a; x]_n = Gamma(a+n, x) / Gamma(a).
pub fn inc_pochhammer_upper(a: f64, x_split: f64, n: u32) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!(
            "incomplete Pochhammer requires a > 0, got {a}"
        )));
    }
    let (_, q) = reg_gamma_pair(a + n as f64, x_split)?;
    Ok(q * pochhammer_ratio(a, n))
}

/// Which incomplete gamma factor an incomplete series carries.
#[derive(Clone, Copy)]
enum IncKind {
    Lower,
    Upper,
}

/// Shared kernel for the incomplete hypergeometric sums: terms
///   R(a+n, x) * (a)_n [(b)_n] / ((c)_n n!) * z^n,
/// with R = P or Q. The rational coefficient runs on an exact term-ratio
/// recurrence in double-double, so at x = 0 (where R = 1 or 0 exactly) the
/// incomplete sum reduces to its complete counterpart at full precision,
/// and alternating z keeps its accuracy through the cancellation.
fn inc_hyp_series(
    a: f64,
    x_split: f64,
    extra_num: Option<f64>,
    c: f64,
    z: f64,
    kind: IncKind,
    policy: &EvalPolicy,
) -> Result<SeriesEval> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!(
            "incomplete hypergeometric requires a > 0, got {a}"
        )));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::Domain(format!(
            "incomplete hypergeometric requires c > 0, got {c}"
        )));
    }
    if let Some(b) = extra_num {
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::Domain(format!(
                "incomplete hypergeometric requires b > 0, got {b}"
            )));
        }
    }
    if !(x_split >= 0.0) || !x_split.is_finite() {
        return Err(Error::Domain(format!(
            "incomplete hypergeometric requires x >= 0, got {x_split}"
        )));
    }
    policy.validate()?;

    let mut base = Dd::from_f64(1.0);
    let eval = sum_series_dd(policy, |n| {
        if n > 0 {
            let k = (n - 1) as f64;
            base = base.mul_f64(a + k);
            if let Some(b) = extra_num {
                base = base.mul_f64(b + k);
            }
            base = base.div_f64(c + k).mul_f64(z).div_f64(n as f64);
        }
        let r = match reg_gamma_pair(a + n as f64, x_split) {
            Ok((p, q)) => match kind {
                IncKind::Lower => p,
                IncKind::Upper => q,
            },
            Err(_) => return Dd::from_f64(f64::NAN),
        };
        base.mul_f64(r)
    });
    eval.into_result()
}

/// Incomplete confluent hypergeometric series with upper factor:
/// sum_n [a; x]_n / (c)_n * z^n / n!.
///
/// At `x_split = 0` this reduces to 1F1(a; c; z).
pub fn hyp1f1_inc_upper(
    a: f64,
    x_split: f64,
    c: f64,
    z: f64,
    policy: &EvalPolicy,
) -> Result<SeriesEval> {
    inc_hyp_series(a, x_split, None, c, z, IncKind::Upper, policy)
}

/// Incomplete Gauss hypergeometric series with upper factor:
/// sum_n [a; x]_n (b)_n / (c)_n * z^n / n!, convergent for |z| < 1.
pub fn hyp2f1_inc_upper(
    a: f64,
    x_split: f64,
    b: f64,
    c: f64,
    z: f64,
    policy: &EvalPolicy,
) -> Result<SeriesEval> {
    if z.abs() >= 1.0 {
        return Err(Error::Divergence(format!(
            "incomplete Gauss series requires |z| < 1, got z = {z}"
        )));
    }
    inc_hyp_series(a, x_split, Some(b), c, z, IncKind::Upper, policy)
}

/// Incomplete Gauss hypergeometric series with lower factor:
/// sum_n (a; x)_n (b)_n / (c)_n * z^n / n!.
///
/// |z| = 1 is admitted: the lower incomplete gamma factor decays
/// super-exponentially once a + n outruns x, so the series still terminates.
pub fn hyp2f1_inc_lower(
    a: f64,
    x_split: f64,
    b: f64,
    c: f64,
    z: f64,
    policy: &EvalPolicy,
) -> Result<SeriesEval> {
    if z.abs() > 1.0 {
        return Err(Error::Divergence(format!(
            "incomplete Gauss series requires |z| <= 1, got z = {z}"
        )));
    }
    inc_hyp_series(a, x_split, Some(b), c, z, IncKind::Lower, policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::bessel_i_scaled;

    const POLICY: EvalPolicy = EvalPolicy {
        rel_tol: 1e-14,
        abs_tol: 1e-300,
        max_terms: 10_000,
    };

    fn rel_err(got: f64, want: f64) -> f64 {
        (got - want).abs() / want.abs().max(1e-300)
    }

    #[test]
    fn hyp0f1_values() {
        assert_eq!(hyp0f1(2.5, 0.0, &POLICY).unwrap().value, 1.0);
        // 30-term direct summation reference
        assert!(rel_err(hyp0f1(2.0, 1.0, &POLICY).unwrap().value, 1.5906368546373291) < 1e-14);
        assert!(rel_err(hyp0f1(0.5, -3.0, &POLICY).unwrap().value, -0.94844319584182776) < 1e-13);
        assert!(hyp0f1(-2.0, 1.0, &POLICY).is_err());
    }

    #[test]
    fn hyp0f1_matches_scaled_bessel() {
        // I_0(z) = 0F1(; 1; z^2/4), so e^{-z} 0F1 = scaled I_0
        for z in [0.5, 2.0, 10.0] {
            let f = hyp0f1(1.0, z * z / 4.0, &POLICY).unwrap().value * (-z).exp();
            let b = bessel_i_scaled(0.0, z, &POLICY).unwrap().value;
            assert!(rel_err(f, b) < 1e-13, "z = {z}");
        }
    }

    #[test]
    fn hyp1f1_closed_forms() {
        // 1F1(1; 2; z) = (e^z - 1)/z
        for z in [-8.0, -1.0, 0.5, 3.0, 20.0] {
            let got = hyp1f1(1.0, 2.0, z, &POLICY).unwrap().value;
            let want = (z.exp() - 1.0) / z;
            assert!(rel_err(got, want) < 1e-13, "z = {z}: {got} vs {want}");
        }
        assert_eq!(hyp1f1(3.2, 1.5, 0.0, &POLICY).unwrap().value, 1.0);
    }

    #[test]
    fn hyp1f1_kummer_transform_region() {
        // deep negative z goes through the transform; reference from mpmath
        let got = hyp1f1(2.0, 3.0, -45.0, &POLICY).unwrap().value;
        assert!(rel_err(got, 0.00098765432098765432) < 1e-12);
        let got = hyp1f1(1.5, 2.5, 10.0, &POLICY).unwrap().value;
        assert!(rel_err(got, 3128.7352996840916) < 1e-13);
    }

    #[test]
    fn hyp1f1_matches_scaled_bessel() {
        // I_0(z) = e^{-z} 1F1(1/2; 1; 2z), so e^{-2z} 1F1(1/2;1;2z) = scaled I_0(z)
        for z in [0.5, 1.0, 4.0] {
            let f = hyp1f1(0.5, 1.0, 2.0 * z, &POLICY).unwrap().value * (-2.0 * z).exp();
            let b = bessel_i_scaled(0.0, z, &POLICY).unwrap().value;
            assert!(rel_err(f, b) < 1e-13, "z = {z}");
        }
    }

    #[test]
    fn hyp2f2_values() {
        assert_eq!(hyp2f2(0.3, 0.7, 1.1, 1.9, 0.0, &POLICY).unwrap().value, 1.0);
        // parameter cancellation: 2F2(1,1;1,1;z) = e^z
        for z in [-3.0, 0.5, 5.0] {
            assert!(rel_err(hyp2f2(1.0, 1.0, 1.0, 1.0, z, &POLICY).unwrap().value, z.exp()) < 1e-13);
        }
        // (1)_n/(1)_n cancels: 2F2(1/2,1;2,1;-2) = 1F1(1/2;2;-2); mpmath reference
        assert!(
            rel_err(hyp2f2(0.5, 1.0, 2.0, 1.0, -2.0, &POLICY).unwrap().value, 0.67367002294334889)
                < 1e-13
        );
        // strongly cancelling argument where the double-double pays off
        assert!(
            rel_err(
                hyp2f2(1.5, 2.0, 3.0, 2.5, -40.0, &POLICY).unwrap().value,
                0.017268717061492233
            ) < 1e-11
        );
    }

    #[test]
    fn inc_pochhammer_reductions() {
        // [a; 0]_n = (a)_n and (a; 0)_n = 0
        for (a, n) in [(1.5, 3u32), (0.7, 5), (2.0, 0)] {
            let upper = inc_pochhammer_upper(a, 0.0, n).unwrap();
            let complete = crate::special::pochhammer(a, n).unwrap();
            assert!(rel_err(upper, complete) < 1e-13, "a={a} n={n}");
            assert_eq!(inc_pochhammer_lower(a, 0.0, n).unwrap(), 0.0);
        }
        // (1; 1)_1 = gamma(2, 1) = 1 - 2/e
        assert!(rel_err(inc_pochhammer_lower(1.0, 1.0, 1).unwrap(), 0.26424111765711536) < 1e-14);
    }

    #[test]
    fn inc_pochhammer_decomposition() {
        for a in [0.5, 1.0, 3.75] {
            for x in [0.0, 0.5, 2.0, 10.0] {
                for n in [0u32, 1, 4, 9] {
                    let lo = inc_pochhammer_lower(a, x, n).unwrap();
                    let hi = inc_pochhammer_upper(a, x, n).unwrap();
                    let complete = crate::special::pochhammer(a, n).unwrap();
                    assert!(
                        ((lo + hi) - complete).abs() <= 4.0 * complete * f64::EPSILON,
                        "a={a} x={x} n={n}: {} vs {complete}",
                        lo + hi
                    );
                }
            }
        }
    }

    #[test]
    fn inc_pochhammer_large_index_stays_finite() {
        // a + n beyond the Gamma(172) overflow point: the regularized route
        // must still produce the exact ratio Gamma(a+n,x)/Gamma(a) when it
        // fits, or +inf only when (a)_n itself overflows.
        let v = inc_pochhammer_upper(1.0, 1.0, 150).unwrap();
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn inc_1f1_reduces_to_complete_at_zero_split() {
        for (a, c, z) in [(1.0, 1.0, 1.0), (1.5, 2.5, 0.3), (2.0, 1.0, -4.0)] {
            let inc = hyp1f1_inc_upper(a, 0.0, c, z, &POLICY).unwrap().value;
            let complete = hyp1f1(a, c, z, &POLICY).unwrap().value;
            assert!(
                rel_err(inc, complete) < 1e-12,
                "a={a} c={c} z={z}: {inc} vs {complete}"
            );
        }
    }

    #[test]
    fn inc_1f1_known_values() {
        // mpmath references
        assert!(
            rel_err(hyp1f1_inc_upper(1.0, 0.5, 1.0, 1.0, &POLICY).unwrap().value, 2.2271154107340822)
                < 1e-13
        );
        assert!(
            rel_err(
                hyp1f1_inc_upper(1.5, 0.8, 2.5, 0.3, &POLICY).unwrap().value,
                0.84207994065657898
            ) < 1e-13
        );
        // z = 0 leaves only the n = 0 term, Q(a, x)
        let q = crate::special::reg_gamma_upper(1.5, 0.8).unwrap();
        assert!(rel_err(hyp1f1_inc_upper(1.5, 0.8, 2.5, 0.0, &POLICY).unwrap().value, q) < 1e-14);
    }

    #[test]
    fn inc_2f1_upper_reduces_and_diverges() {
        // x = 0 reduction to the complete Gauss series (mpmath 2F1 reference)
        let inc = hyp2f1_inc_upper(0.5, 0.0, 0.7, 1.3, 0.4, &POLICY).unwrap().value;
        assert!(rel_err(inc, 1.1409888082066317) < 1e-12);
        assert!(matches!(
            hyp2f1_inc_upper(1.0, 1.0, 2.0, 1.0, 1.0, &POLICY),
            Err(Error::Divergence(_))
        ));
        // mpmath reference
        assert!(
            rel_err(
                hyp2f1_inc_upper(1.5, 0.8, 2.0, 2.5, 0.3, &POLICY).unwrap().value,
                1.1488177006749391
            ) < 1e-13
        );
    }

    #[test]
    fn inc_2f1_lower_values() {
        // all terms vanish at x = 0
        assert_eq!(hyp2f1_inc_lower(1.0, 0.0, 0.5, 1.0, 0.5, &POLICY).unwrap().value, 0.0);
        // term-by-term mpmath oracle
        assert!(
            rel_err(
                hyp2f1_inc_lower(1.0, 2.0, 0.5, 1.0, 0.5, &POLICY).unwrap().value,
                1.0501011442461324
            ) < 1e-13
        );
        // z = 1 converges through the incomplete-gamma cutoff
        let at_one = hyp2f1_inc_lower(1.0, 2.0, 0.5, 1.0, 1.0, &POLICY).unwrap();
        assert!(at_one.converged);
        assert!(matches!(
            hyp2f1_inc_lower(1.0, 2.0, 0.5, 1.0, 1.5, &POLICY),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn lower_plus_upper_is_complete_gauss() {
        let (a, x, b, c, z) = (1.5, 0.8, 2.0, 2.5, 0.3);
        let lo = hyp2f1_inc_lower(a, x, b, c, z, &POLICY).unwrap();
        let hi = hyp2f1_inc_upper(a, x, b, c, z, &POLICY).unwrap();
        let complete = sum_ratio_series(&[a, b], &[c], z, &POLICY).into_result().unwrap();
        let err = (lo.value + hi.value - complete.value).abs();
        assert!(
            err <= lo.abs_tail_estimate + hi.abs_tail_estimate + complete.abs_tail_estimate + 1e-14,
            "decomposition residual {err:e}"
        );
    }

    #[test]
    fn confluence_error_halves_with_b() {
        // |2G1(a, x; b; c; z/b) - 1G1(a, x; c; z)| should shrink ~1/b
        let (a, x, c, z) = (1.0, 1.0, 1.0, 1.0);
        let limit = hyp1f1_inc_upper(a, x, c, z, &POLICY).unwrap().value;
        let mut prev = f64::INFINITY;
        for b in [8.0, 16.0, 32.0, 64.0, 128.0] {
            let v = hyp2f1_inc_upper(a, x, b, c, z / b, &POLICY).unwrap().value;
            let err = (v - limit).abs();
            assert!(err < prev / 1.8, "b={b}: err {err} vs prev {prev}");
            prev = err;
        }
    }
}
