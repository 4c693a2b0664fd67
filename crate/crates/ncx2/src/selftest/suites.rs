//! The individual invariant suites behind `selftest`.
//!
//! Each suite walks a grid, counts checks, and collects one message per
//! violated invariant rather than stopping at the first failure.

use super::{SelftestLevel, SuiteOutcome};
use crate::cdf::{
    cdf, cdf_bessel_series, cdf_central_limit, cdf_diag, cdf_marcum, CdfMethod, MarcumPath,
    Ncx2Params,
};
use crate::hyper::{
    hyp1f1, hyp1f1_inc_upper, hyp2f1_inc_upper, inc_pochhammer_lower, inc_pochhammer_upper,
};
use crate::marcum::{marcum_q_diag_int, marcum_q_quadrature, MarcumArgs};
use crate::oracle::{mc_cdf, quad_cdf, McConfig, MuVectorPolicy};
use crate::policy::EvalPolicy;
use crate::special::{bessel_i_scaled, gamma_lower, gamma_upper, log_gamma, pochhammer};
use crate::sv::{s_integral, s_via_foxwright, st_sum_closed, SvArgs};

struct Recorder {
    name: &'static str,
    checks: usize,
    failures: Vec<String>,
}

impl Recorder {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(msg());
        }
    }

    fn finish(self) -> SuiteOutcome {
        SuiteOutcome {
            name: self.name,
            checks: self.checks,
            failures: self.failures,
        }
    }
}

pub fn special_functions(_level: SelftestLevel, policy: &EvalPolicy) -> SuiteOutcome {
    let mut r = Recorder::new("core-special invariants");

    // decomposition gamma + Gamma = Gamma(a)
    for a in [0.5, 1.0, 2.0, 5.0, 10.0] {
        let g = log_gamma(a).unwrap().exp();
        for x in [0.1, 1.0, 5.0, 20.0] {
            let lo = gamma_lower(a, x).unwrap();
            let hi = gamma_upper(a, x).unwrap();
            r.check(((lo + hi) - g).abs() <= 4.0 * g * f64::EPSILON, || {
                format!("gamma decomposition failed at a={a}, x={x}")
            });
        }
    }

    // contiguous recurrence, test-only: gamma(a+1,x) = a gamma(a,x) - x^a e^{-x}
    for a in [0.5, 1.0, 2.0, 5.0, 10.0] {
        for x in [0.1, 1.0, 5.0, 20.0] {
            let lhs = gamma_lower(a + 1.0, x).unwrap();
            let rhs = a * gamma_lower(a, x).unwrap() - x.powf(a) * (-x).exp();
            r.check(
                (lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1e-300),
                || format!("incomplete-gamma recurrence failed at a={a}, x={x}"),
            );
        }
    }

    // Soni: I_{nu+1}(x) < I_nu(x), and Joshi-Bissu: I_{nu+1}/I_nu < x/(2(nu+1))
    for nu in [-0.25, 0.0, 0.5, 1.0, 3.0, 7.5] {
        for x in [0.1, 1.0, 5.0, 25.0] {
            let hi = bessel_i_scaled(nu + 1.0, x, policy).unwrap().value;
            let lo = bessel_i_scaled(nu, x, policy).unwrap().value;
            if nu > -0.5 {
                r.check(hi < lo, || format!("Soni bound failed at nu={nu}, x={x}"));
            }
            r.check(hi / lo < x / (2.0 * (nu + 1.0)), || {
                format!("Joshi-Bissu bound failed at nu={nu}, x={x}")
            });
        }
    }

    // scaled-Bessel boundedness
    for nu in [0.0, 0.5, 2.0, 11.0] {
        for x in [1e-6, 0.5, 5.0, 80.0] {
            let v = bessel_i_scaled(nu, x, policy).unwrap().value;
            r.check(v > 0.0 && v <= 1.0, || {
                format!("scaled Bessel out of (0,1] at nu={nu}, x={x}: {v}")
            });
        }
    }

    // Pochhammer sanity
    r.check(pochhammer(1.0, 6).unwrap() == 720.0, || "pochhammer(1,6) != 720".into());

    r.finish()
}

pub fn hypergeometric(level: SelftestLevel, policy: &EvalPolicy) -> SuiteOutcome {
    let mut r = Recorder::new("incomplete-hypergeometric identities");

    // Pochhammer decomposition
    let (a_grid, x_grid): (&[f64], &[f64]) = match level {
        SelftestLevel::Quick => (&[0.5, 2.0], &[0.5, 5.0]),
        SelftestLevel::Full => (&[0.5, 1.0, 2.0, 3.75], &[0.0, 0.5, 2.0, 10.0]),
    };
    for &a in a_grid {
        for &x in x_grid {
            for n in [0u32, 1, 4, 9] {
                let lo = inc_pochhammer_lower(a, x, n).unwrap();
                let hi = inc_pochhammer_upper(a, x, n).unwrap();
                let complete = pochhammer(a, n).unwrap();
                r.check(
                    ((lo + hi) - complete).abs() <= 4.0 * complete * f64::EPSILON,
                    || format!("Pochhammer decomposition failed at a={a}, x={x}, n={n}"),
                );
            }
        }
    }

    // x = 0 reduction of the incomplete confluent series
    for (a, c, z) in [(1.0, 1.0, 1.0), (1.5, 2.5, 0.3), (2.0, 1.0, -4.0)] {
        let inc = hyp1f1_inc_upper(a, 0.0, c, z, policy).unwrap().value;
        let complete = hyp1f1(a, c, z, policy).unwrap().value;
        r.check(
            (inc - complete).abs() <= 1e-12 * complete.abs().max(1e-300),
            || format!("x=0 reduction failed at a={a}, c={c}, z={z}"),
        );
    }

    // confluence: error shrinks by >= 1.8 per doubling of b
    let (a, x, c, z) = (1.0, 1.0, 1.0, 1.0);
    let limit = hyp1f1_inc_upper(a, x, c, z, policy).unwrap().value;
    let mut prev = f64::INFINITY;
    for b in [8.0, 16.0, 32.0, 64.0, 128.0] {
        let v = hyp2f1_inc_upper(a, x, b, c, z / b, policy).unwrap().value;
        let err = (v - limit).abs();
        r.check(err < prev / 1.8, || {
            format!("confluence shrink factor below 1.8 at b={b}")
        });
        prev = err;
    }

    // Fox-Wright route for S_nu against quadrature
    let grid: &[f64] = match level {
        SelftestLevel::Quick => &[0.5, 2.0],
        SelftestLevel::Full => &[0.5, 2.0, 10.0],
    };
    for nu in [0.0, 0.5, 1.0, 3.0] {
        for &lam in grid {
            for &x in grid {
                let args = SvArgs::new(nu, lam, x).unwrap();
                let quad = s_integral(&args, policy).unwrap();
                let fw = s_via_foxwright(&args, policy).unwrap();
                r.check(
                    (fw - quad).abs() <= 1e-10 * quad.abs().max(1e-300),
                    || format!("S_nu Fox-Wright mismatch at nu={nu}, lam={lam}, x={x}"),
                );
            }
        }
    }

    r.finish()
}

pub fn marcum(level: SelftestLevel, policy: &EvalPolicy) -> SuiteOutcome {
    let mut r = Recorder::new("marcum-q properties");

    let (mu_grid, a_grid, b_grid): (&[f64], &[f64], &[f64]) = match level {
        SelftestLevel::Quick => (&[0.5, 1.0, 2.0], &[0.1, 1.0], &[0.0, 0.5, 2.0]),
        SelftestLevel::Full => (
            &[0.5, 1.0, 1.5, 2.0, 5.0],
            &[0.1, 1.0, 3.0],
            &[0.0, 0.5, 2.0, 8.0],
        ),
    };

    for &mu in mu_grid {
        for &a in a_grid {
            let mut prev = 1.0f64 + 1e-12;
            for &b in b_grid {
                let q = marcum_q_quadrature(&MarcumArgs::new(mu, a, b).unwrap(), policy).unwrap();
                r.check((0.0..=1.0).contains(&q), || {
                    format!("Q out of [0,1] at mu={mu}, a={a}, b={b}")
                });
                r.check(q <= prev + 1e-12, || {
                    format!("Q not nonincreasing in b at mu={mu}, a={a}, b={b}")
                });
                if b == 0.0 {
                    r.check((q - 1.0).abs() < 1e-12, || {
                        format!("Q(a, 0) != 1 at mu={mu}, a={a}")
                    });
                }
                prev = q;

                // path agreement: quadrature vs the 1G1 series
                let via = crate::marcum::marcum_q_via_1g1(
                    mu,
                    0.5 * a * a,
                    0.5 * b * b,
                    policy,
                )
                .unwrap();
                r.check((via - q).abs() <= 1e-10, || {
                    format!("Marcum path disagreement at mu={mu}, a={a}, b={b}")
                });
            }
        }
    }

    // diagonal consistency
    for n in [0u32, 1, 2, 3] {
        for a in [0.5, 1.0, 2.0] {
            let d = marcum_q_diag_int(n, a, policy).unwrap();
            let q = marcum_q_quadrature(
                &MarcumArgs::new(n as f64 + 1.0, a, a).unwrap(),
                policy,
            )
            .unwrap();
            r.check((d - q).abs() <= 1e-10, || {
                format!("diagonal closed form mismatch at n={n}, a={a}")
            });
        }
    }

    r.finish()
}

pub fn s_integrals(_level: SelftestLevel, policy: &EvalPolicy) -> SuiteOutcome {
    let mut r = Recorder::new("s-integral identities");

    // positivity
    for nu in [0.0, 0.5, 1.0, 3.0] {
        for lam in [0.5, 2.0, 10.0] {
            for x in [0.5, 2.0, 10.0] {
                let s = s_integral(&SvArgs::new(nu, lam, x).unwrap(), policy).unwrap();
                r.check(s > 0.0, || format!("S not positive at nu={nu}, lam={lam}, x={x}"));
            }
        }
    }

    // closed-form sum at the two exact substitution points
    let v0 = st_sum_closed(&SvArgs::new(0.0, 1.0, 4.0).unwrap()).unwrap();
    r.check((v0 - 4.0 / 3.0).abs() < 1e-10, || "S+T closed form (nu=0) off".into());
    let v1 = st_sum_closed(&SvArgs::new(1.0, 1.0, 4.0).unwrap()).unwrap();
    r.check((v1 - 2.0 / 3.0).abs() < 1e-10, || "S+T closed form (nu=1) off".into());

    // S-difference positivity under the lambda' <= n normalization
    for n in [2u32, 4, 8] {
        for frac in [0.5, 1.0] {
            let lam = frac * n as f64;
            for x in [0.5, 2.0, 10.0] {
                let hi = s_integral(&SvArgs::new(n as f64 / 2.0 - 1.0, lam, x).unwrap(), policy)
                    .unwrap();
                let lo =
                    s_integral(&SvArgs::new(n as f64 / 2.0, lam, x).unwrap(), policy).unwrap();
                r.check(hi - (lam / x).sqrt() * lo >= -1e-13, || {
                    format!("S-difference negative at n={n}, lam={lam}, x={x}")
                });
            }
        }
    }

    r.finish()
}

pub fn cdf_cross_paths(level: SelftestLevel, policy: &EvalPolicy) -> SuiteOutcome {
    let mut r = Recorder::new("cdf cross-path agreement");

    let (nu_even, nu_any, lam_grid, x_grid): (&[f64], &[f64], &[f64], &[f64]) = match level {
        SelftestLevel::Quick => (&[2.0, 4.0], &[1.0, 3.0], &[1.0, 4.0], &[0.5, 2.0]),
        SelftestLevel::Full => (
            &[2.0, 4.0, 8.0, 16.0],
            &[1.0, 2.0, 3.0, 5.0, 7.0],
            &[0.25, 1.0, 4.0, 20.0],
            &[0.1, 1.0, 5.0, 40.0],
        ),
    };

    let mut points: Vec<Ncx2Params> = Vec::new();
    for &nu in nu_even.iter().chain(nu_any) {
        for &lam in lam_grid {
            for &x in x_grid.iter().chain(std::iter::once(&lam)) {
                points.push(Ncx2Params::new(nu, lam, x).unwrap());
            }
        }
    }

    for p in &points {
        let mut values: Vec<(CdfMethod, f64)> = Vec::new();
        for m in CdfMethod::ALL {
            if !m.applicable(p) {
                continue;
            }
            match cdf(p, Some(m), policy) {
                Ok(rep) => values.push((m, rep.value)),
                Err(e) => r.check(false, || {
                    format!("{m} failed at nu={}, lam={}, x={}: {e}", p.nu, p.lambda, p.x)
                }),
            }
        }
        for w in values.windows(2) {
            let (m1, v1) = w[0];
            let (m2, v2) = w[1];
            let tol = 1e-9 * v1.abs().max(v2.abs()) + 1e-12;
            r.check((v1 - v2).abs() <= tol, || {
                format!(
                    "{m1} vs {m2} disagree at nu={}, lam={}, x={}: {v1} vs {v2}",
                    p.nu, p.lambda, p.x
                )
            });
        }
        // range
        for (m, v) in &values {
            r.check((0.0..=1.0).contains(v), || {
                format!("{m} out of [0,1] at nu={}, lam={}, x={}", p.nu, p.lambda, p.x)
            });
        }
    }

    // monotonicity along x for the auto path
    let xs: Vec<f64> = (0..=30).map(|i| 10f64.powf(-2.0 + i as f64 / 6.0)).collect();
    for &nu in nu_any {
        let mut prev = -1.0;
        for &x in &xs {
            let p = Ncx2Params::new(nu, 2.0, x).unwrap();
            let v = cdf(&p, None, policy).unwrap().value;
            r.check(v + 1e-12 >= prev, || {
                format!("CDF not monotone at nu={nu}, x={x}")
            });
            prev = v;
        }
    }

    // lambda -> 0 limit
    for nu in [1.0, 2.0, 4.0] {
        for x in [0.5, 3.0] {
            let p = Ncx2Params::new(nu, 1e-10, x).unwrap();
            let lim = cdf_central_limit(nu, x).unwrap();
            let v = cdf_marcum(&p, MarcumPath::GammaSeries, policy).unwrap();
            r.check((v - lim).abs() <= 1e-7, || {
                format!("lambda->0 limit off at nu={nu}, x={x}")
            });
        }
    }

    // diagonal continuity of the Temme seam
    for (n, lam) in [(2u32, 1.0), (4, 4.0)] {
        let center = crate::cdf::cdf_temme(n, lam, lam, policy).unwrap();
        for dx in [-1e-6, 1e-6] {
            let off = crate::cdf::cdf_temme(n, lam, lam + dx, policy).unwrap();
            r.check((off - center).abs() <= 1e-5, || {
                format!("Temme seam discontinuity at n={n}, lam={lam}")
            });
        }
    }

    // diagonal identity against the Bessel series
    for n in [2u32, 3, 4] {
        for lam in [0.5, 1.0, 4.0] {
            let d = cdf_diag(2 * n, lam, policy).unwrap();
            let b = cdf_bessel_series(n, lam, lam, policy).unwrap();
            r.check((d - b).abs() <= 1e-10, || {
                format!("diagonal vs Bessel series mismatch at n={n}, lam={lam}")
            });
        }
    }

    r.finish()
}

pub fn oracles(level: SelftestLevel, policy: &EvalPolicy) -> SuiteOutcome {
    let mut r = Recorder::new("oracle agreement");

    let points: &[(f64, f64, f64)] = match level {
        SelftestLevel::Quick => &[(2.0, 1.0, 1.0), (4.0, 2.0, 3.0), (1.0, 1.0, 2.0)],
        SelftestLevel::Full => &[
            (2.0, 1.0, 1.0),
            (4.0, 2.0, 3.0),
            (1.0, 1.0, 2.0),
            (3.0, 4.0, 4.0),
            (7.0, 4.0, 20.0),
            (16.0, 20.0, 5.0),
            (2.5, 0.25, 1.5),
        ],
    };
    for &(nu, lam, x) in points {
        let q = quad_cdf(nu, lam, x).unwrap();
        let m = cdf_marcum(
            &Ncx2Params::new(nu, lam, x).unwrap(),
            MarcumPath::GammaSeries,
            policy,
        )
        .unwrap();
        r.check((q - m).abs() <= 1e-9 * q.abs().max(1.0), || {
            format!("quad_cdf vs marcum mismatch at nu={nu}, lam={lam}, x={x}")
        });
    }

    // Monte Carlo reproducibility and agreement
    let n_samples = match level {
        SelftestLevel::Quick => 100_000,
        SelftestLevel::Full => 1_000_000,
    };
    let cfg = McConfig {
        n_samples,
        seed: 42,
        mu_policy: MuVectorPolicy::SingleComponent,
    };
    let (a, se) = mc_cdf(2, 1.0, 1.0, &cfg).unwrap();
    let (b, _) = mc_cdf(2, 1.0, 1.0, &cfg).unwrap();
    r.check(a.to_bits() == b.to_bits(), || "Monte Carlo not reproducible".into());
    let truth = quad_cdf(2.0, 1.0, 1.0).unwrap();
    r.check((a - truth).abs() <= 4.0 * se, || {
        format!("Monte Carlo estimate {a} further than 4 se from {truth}")
    });

    // policy invariance
    let split = McConfig {
        mu_policy: MuVectorPolicy::EqualSplit,
        ..cfg
    };
    let (c, sc) = mc_cdf(3, 2.5, 3.0, &cfg).unwrap();
    let (d, sd) = mc_cdf(3, 2.5, 3.0, &split).unwrap();
    r.check((c - d).abs() <= 5.0 * (sc * sc + sd * sd).sqrt(), || {
        "mu-vector policies disagree beyond 5 combined standard errors".into()
    });

    r.finish()
}
