use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::manifest::{RunManifest, RunSetup};
use super::output::{write_series, write_snapshot};
use crate::analysis::{
    allee_classify, boundedness_check, decay_envelope_check, lyapunov_monitor, AlleeBands, AlleeVerdict, Verdict,
};
use crate::error::{Error, Result};
use crate::integrator::{Integrator, RunReport, RunStatus};
use crate::model::{bound_k, equilibrium_roots, sigma, smallness_threshold, validate_params, CouplingMode};

/// Verdicts attached to a finished run. `None` means the check did not apply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunVerdicts {
    pub boundedness: Option<Verdict>,
    /// The bound `K`, when its formula is defined.
    pub bound: Option<f64>,
    pub max_ratio: Option<f64>,
    pub decay: Option<Verdict>,
    pub sigma: f64,
    pub smallness_threshold: f64,
    pub allee: Option<AlleeVerdict>,
    pub lyapunov: Option<Verdict>,
    pub notes: Vec<String>,
}

impl RunVerdicts {
    /// True unless some applicable check returned `Fail`.
    pub fn no_failures(&self) -> bool {
        ![self.boundedness, self.decay, self.lyapunov].contains(&Some(Verdict::Fail))
    }
}

#[derive(Debug, Clone, Serialize)]
struct ReportFile<'a> {
    manifest_hash: &'a str,
    status: &'a RunStatus,
    final_time: f64,
    steps: usize,
    max_sup_norm: f64,
    terminal_sup_norm: f64,
    wall_time_s: f64,
    warnings: &'a [String],
    verdicts: &'a RunVerdicts,
}

#[derive(Debug, Clone)]
pub struct SimulationOutcome {
    pub report: RunReport,
    pub verdicts: RunVerdicts,
    pub hash: String,
    pub dir: PathBuf,
}

/// Runs the analysis checks that apply to this parameter set.
pub fn evaluate_verdicts(manifest: &RunManifest, setup: &RunSetup, run: &RunReport) -> Result<RunVerdicts> {
    let p = &setup.params;
    let u0_sup = setup.u0.sup_norm();
    let mut v = RunVerdicts {
        boundedness: None,
        bound: None,
        max_ratio: None,
        decay: None,
        sigma: sigma(p.gamma, p.mu, u0_sup),
        smallness_threshold: if p.mu > 0.0 { smallness_threshold(p, manifest.analysis.tau) } else { f64::INFINITY },
        allee: None,
        lyapunov: None,
        notes: Vec::new(),
    };
    if p.coupling == CouplingMode::GlobalMass {
        v.notes.push("global-mass coupling: kernel-based checks skipped".into());
        return Ok(v);
    }
    if !validate_params(p).is_empty() || p.k == 0.0 {
        v.notes.push("parameters outside the analysed ranges: bound not evaluated".into());
    } else {
        match bound_k(p, &setup.consts, u0_sup, setup.config.t_final) {
            Ok(bound) => {
                let r = boundedness_check(run, &bound);
                v.boundedness = Some(r.verdict);
                v.bound = bound.value();
                v.max_ratio = r.max_ratio.is_finite().then_some(r.max_ratio);
            }
            Err(e) => v.notes.push(format!("bound not evaluated: {e}")),
        }
    }
    if v.sigma > 0.0 {
        v.decay = Some(decay_envelope_check(run, v.sigma, p.alpha)?.verdict);
    }
    if p.mu > 0.0 && p.k > 0.0 && p.gamma > 0.0 {
        let roots = equilibrium_roots(p.mu, p.k, p.gamma)?;
        if roots.real {
            let mut bands = AlleeBands::for_roots(&roots);
            if let Some(t) = manifest.analysis.tol_ext {
                bands.tol_ext = t;
            }
            if let Some(t) = manifest.analysis.tol_per {
                bands.tol_per = t;
            }
            v.allee = Some(allee_classify(run, &roots, &bands));
            if !run.snapshots.is_empty() && u0_sup < roots.a {
                let delta = setup.consts.delta;
                let lyap = lyapunov_monitor(&run.snapshots, &roots, p.mu, p.k, delta)?;
                v.lyapunov = Some(lyap.verdict);
            }
        } else {
            v.notes.push("complex equilibrium roots: Allee classification skipped".into());
        }
    }
    Ok(v)
}

/// Builds, runs and analyses a manifest, writing `series.csv`,
/// `report.json`, `manifest.json` and (optionally) `.fplp` snapshots into
/// `dir`, or into the manifest's output directory when `dir` is `None`.
pub fn simulate(manifest: &RunManifest, dir: Option<&Path>) -> Result<SimulationOutcome> {
    let setup = manifest.build()?;
    let dir = dir.map(Path::to_path_buf).unwrap_or_else(|| manifest.output.dir.clone());
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;

    let mut integrator =
        Integrator::new(setup.params, setup.coupling.clone(), setup.config.clone(), &setup.domain)?;
    let mut report = integrator.run(&setup.u0)?;
    for violation in validate_params(&setup.params) {
        report.warnings.push(format!("outside the analysed parameter range: {violation}"));
    }
    let verdicts = evaluate_verdicts(manifest, &setup, &report)?;
    let hash = manifest.hash();

    write_series(&dir.join("series.csv"), &report.series)?;
    if manifest.output.snapshots {
        write_snapshot(&dir.join("final.fplp"), &report.final_field)?;
        for (i, snap) in report.snapshots.iter().enumerate() {
            write_snapshot(&dir.join(format!("snapshot_{i:03}.fplp")), &snap.field)?;
        }
    }
    let file = ReportFile {
        manifest_hash: &hash,
        status: &report.status,
        final_time: report.final_time,
        steps: report.steps,
        max_sup_norm: report.max_sup_norm(),
        terminal_sup_norm: report.terminal_sup_norm(),
        wall_time_s: report.wall_time.as_secs_f64(),
        warnings: &report.warnings,
        verdicts: &verdicts,
    };
    let json = serde_json::to_string_pretty(&file).expect("report serialises");
    let path = dir.join("report.json");
    fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
    let path = dir.join("manifest.json");
    fs::write(&path, manifest.to_json()).map_err(|e| Error::io(&path, e))?;
    Ok(SimulationOutcome { report, verdicts, hash, dir })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{parse_config, read_snapshot};

    #[test]
    fn pipeline_writes_outputs() {
        let dir = std::env::temp_dir().join(format!("fracplap-sim-{}", std::process::id()));
        let text = r#"{
            "model": {"alpha": 0.5, "p": 1.5, "mu": 1, "k": 1, "gamma": 0.2},
            "domain": {"half_width": 4, "points": 16},
            "solver": {"dt": 0.05, "t_final": 0.5, "snapshot_times": [0.25]},
            "initial": {"type": "constant", "value": 0.1}
        }"#;
        let m = parse_config(text).unwrap();
        let out = simulate(&m, Some(&dir)).unwrap();
        assert_eq!(out.report.status, RunStatus::Completed);
        assert_eq!(out.verdicts.decay, Some(Verdict::Pass));
        let csv = fs::read_to_string(dir.join("series.csv")).unwrap();
        assert_eq!(csv.lines().count(), out.report.series.len() + 1);
        assert_eq!(read_snapshot(&dir.join("final.fplp")).unwrap(), out.report.final_field);
        assert!(dir.join("snapshot_000.fplp").exists());
        let report: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
        assert_eq!(report["manifest_hash"], out.hash);
        let again = parse_config(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
        assert_eq!(again, m);
        fs::remove_dir_all(&dir).unwrap();
    }
}
