//! Time-fractional machinery: the L1 discretisation of the Caputo derivative,
//! Mittag-Leffler functions, exact and mild solutions of linear fractional
//! ODEs, and discrete checkers for the fractional inequalities used in the
//! energy estimates.

mod fode;
mod inequalities;
mod l1;
mod mittag_leffler;

pub use fode::{duhamel_mode, linear_fode_solution};
pub use inequalities::{
    alikhanov_check, bernoulli_decay_bound, gronwall_bound_check, l1_caputo_series,
    power_inequality_check, GronwallOutcome, InequalityReport, StepComparison,
};
pub use l1::{discrete_caputo, HistoryBuffer, L1Weights};
pub use mittag_leffler::mittag_leffler;
