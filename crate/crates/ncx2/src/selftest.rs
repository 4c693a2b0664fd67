//! Named invariant suites, runnable from the CLI (`selftest`) at two grid
//! densities.

use crate::policy::EvalPolicy;

pub mod suites;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelftestLevel {
    /// Coarse grids, a few seconds end to end.
    Quick,
    /// Acceptance-sized grids.
    Full,
}

#[derive(Debug)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs every invariant suite and reports per-suite outcomes.
pub fn run_selftest(level: SelftestLevel) -> Vec<SuiteOutcome> {
    let policy = EvalPolicy::default();
    vec![
        suites::special_functions(level, &policy),
        suites::hypergeometric(level, &policy),
        suites::marcum(level, &policy),
        suites::s_integrals(level, &policy),
        suites::cdf_cross_paths(level, &policy),
        suites::oracles(level, &policy),
    ]
}
