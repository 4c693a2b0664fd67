//! Crate-wide error type.

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument violated a precondition; the message names the constraint.
    Domain(String),
    /// A series hit `max_terms` before the stopping rule fired.
    NonConvergence {
        terms_used: usize,
        abs_tail_estimate: f64,
        partial: f64,
    },
    /// A series argument lies outside its convergence region.
    Divergence(String),
    /// A value exceeded the representable f64 range.
    Overflow(String),
    /// A closed form is singular at the requested point.
    Singular(String),
    /// Adaptive quadrature ran out of panels.
    Quadrature {
        panels: usize,
        abs_error: f64,
        partial: f64,
    },
    /// A CDF method was asked for outside its declared domain.
    MethodDomain {
        method: &'static str,
        constraint: String,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::NonConvergence {
                terms_used,
                abs_tail_estimate,
                partial,
            } => write!(
                f,
                "series failed to converge after {terms_used} terms \
                 (partial sum {partial:e}, tail estimate {abs_tail_estimate:e})"
            ),
            Error::Divergence(msg) => write!(f, "divergent series: {msg}"),
            Error::Overflow(msg) => write!(f, "overflow: {msg}"),
            Error::Singular(msg) => write!(f, "singular point: {msg}"),
            Error::Quadrature {
                panels,
                abs_error,
                partial,
            } => write!(
                f,
                "quadrature failed to reach tolerance with {panels} panels \
                 (partial {partial:e}, error estimate {abs_error:e})"
            ),
            Error::MethodDomain { method, constraint } => {
                write!(f, "method {method} not applicable: {constraint}")
            }
        }
    }
}

impl std::error::Error for Error {}
