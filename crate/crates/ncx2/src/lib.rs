//! Numerical evaluation of the noncentral chi-square distribution.
//!
//! The CDF is computed through several analytic representations — the
//! generalized Marcum Q-function (by quadrature and by an incomplete
//! confluent hypergeometric series), Bessel tail series, finite
//! exponential-Bessel integrals, incomplete Fox-Wright series, and an
//! incomplete Gauss hypergeometric form — together with quadrature and
//! Monte Carlo oracles for cross-validation.

pub mod cdf;
mod dd;
pub mod error;
pub mod foxwright;
pub mod hyper;
pub mod marcum;
pub mod oracle;
pub mod policy;
pub mod quad;
pub mod selftest;
mod series;
pub mod special;
pub mod sv;

pub use cdf::{cdf, pdf, CdfMethod, MethodReport, Ncx2Params};
pub use error::{Error, Result};
pub use policy::{EvalPolicy, SeriesEval};
