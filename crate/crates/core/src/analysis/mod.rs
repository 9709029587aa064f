//! Verdicts on runs: boundedness against `K`, the Mittag-Leffler decay
//! envelope, the Allee dichotomy, and the local Lyapunov functionals `H`, `D`.

mod functionals;
mod verdicts;

pub use functionals::{admissible_delta, d_functional, h_functional, h_prime, h_second, h_value};
pub use verdicts::{
    allee_classify, boundedness_check, decay_envelope_check, lyapunov_monitor, AlleeBands, AlleeVerdict,
    BoundednessReport, DecayReport, LyapunovReport, LyapunovSeries, Verdict,
};
