use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::grid::Field;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    /// Sup-norm exceeded the threshold at time `t`.
    Blowup { t: f64 },
    /// A non-finite value appeared at time `t`.
    NonFinite { t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPoint {
    pub t: f64,
    pub sup_norm: f64,
    pub l2_norm: f64,
    pub l1_norm: f64,
    pub min_value: f64,
}

impl SeriesPoint {
    pub fn of(t: f64, u: &Field) -> Self {
        SeriesPoint { t, sup_norm: u.sup_norm(), l2_norm: u.l2_norm(), l1_norm: u.l1_norm(), min_value: u.min_value() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub field: Field,
}

/// Outcome of [`run`](super::run). Equality ignores `wall_time`.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub status: RunStatus,
    pub series: Vec<SeriesPoint>,
    pub final_field: Field,
    pub final_time: f64,
    pub steps: usize,
    pub snapshots: Vec<Snapshot>,
    pub warnings: Vec<String>,
    pub wall_time: Duration,
}

impl PartialEq for RunReport {
    fn eq(&self, other: &Self) -> bool {
        self.status == other.status
            && self.series == other.series
            && self.final_field == other.final_field
            && self.final_time == other.final_time
            && self.steps == other.steps
            && self.snapshots == other.snapshots
            && self.warnings == other.warnings
    }
}

impl RunReport {
    pub fn max_sup_norm(&self) -> f64 {
        self.series.iter().map(|p| p.sup_norm).fold(0.0, f64::max)
    }

    pub fn terminal_sup_norm(&self) -> f64 {
        self.series.last().map_or(f64::NAN, |p| p.sup_norm)
    }

    pub fn blew_up(&self) -> bool {
        !matches!(self.status, RunStatus::Completed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlowupStatus {
    Ok,
    Blowup,
    NonFinite,
}

pub fn detect_blowup(field: &Field, threshold: f64) -> BlowupStatus {
    if !field.is_finite() {
        BlowupStatus::NonFinite
    } else if field.sup_norm() > threshold {
        BlowupStatus::Blowup
    } else {
        BlowupStatus::Ok
    }
}
