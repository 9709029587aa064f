//! Run manifests, output files and the single-run pipeline.
//!
//! A manifest is a JSON object with the keys `model`, `domain`, `solver`,
//! `analysis`, `kernel`, `initial`, `output` and `seed`; everything except
//! `model` and `domain` may be omitted.

mod manifest;
mod output;
mod simulate;

pub use manifest::{
    parse_config, AnalysisSection, DomainSection, InitialCondition, KernelSection, OutputSection, RunManifest,
    RunSetup,
};
pub use output::{read_snapshot, series_csv, snapshot_bytes, write_series, write_snapshot, SNAPSHOT_MAGIC, SNAPSHOT_VERSION};
pub use simulate::{evaluate_verdicts, simulate, RunVerdicts, SimulationOutcome};
