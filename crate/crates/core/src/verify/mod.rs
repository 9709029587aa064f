//! Runnable property suites and the scenario builders they share with the
//! acceptance tests.
//!
//! Each suite returns one [`Check`] per property; a suite passes when every
//! check does.

mod oracles;
mod scenarios;
mod suites;

use std::fmt;
use std::str::FromStr;

pub use oracles::{abm_blowup_time, fitted_order, scalar_l1_solve};
pub use scenarios::{
    allee_parameters, blowup_comparison, bounded_2d_run, global_mass_run, homogeneous_run, linear_oracle_error,
    BlowupComparison, BoundedRun,
};
pub use suites::{inequality_sweep, run_suite};

/// Outcome of one property check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }

    /// A check that could not be evaluated because of an error.
    pub fn error(name: impl Into<String>, err: impl fmt::Display) -> Self {
        Check { name: name.into(), pass: false, detail: format!("error: {err}") }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Caputo,
    Mlf,
    Operators,
    LinearOracle,
    Allee,
    Boundedness,
    Inequalities,
    GlobalMass,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Caputo,
        Suite::Mlf,
        Suite::Operators,
        Suite::LinearOracle,
        Suite::Allee,
        Suite::Boundedness,
        Suite::Inequalities,
        Suite::GlobalMass,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Caputo => "caputo",
            Suite::Mlf => "mlf",
            Suite::Operators => "operators",
            Suite::LinearOracle => "linear-oracle",
            Suite::Allee => "allee",
            Suite::Boundedness => "boundedness",
            Suite::Inequalities => "inequalities",
            Suite::GlobalMass => "theorem3",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                format!("unknown suite `{s}`; expected one of {}", names.join(", "))
            })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
