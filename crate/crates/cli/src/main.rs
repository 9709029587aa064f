use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::Value;

use fracplap::io::{parse_config, simulate, RunManifest};
use fracplap::model::{equilibrium_roots, k_star};
use fracplap::verify::{run_suite, Suite};
use fracplap::{AnalysisConstants, Error};

#[derive(Parser)]
#[command(name = "fracplap", version, about = "Nonlocal time-fractional p-Laplacian solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one manifest and write its outputs.
    Simulate {
        config: PathBuf,
        /// Output directory; overrides `output.dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a property suite, or `all`.
    Verify { suite: String },
    /// Expand a base manifest over parameter lists and run every combination.
    Sweep {
        spec: PathBuf,
        #[arg(long, default_value = "sweep")]
        out: PathBuf,
    },
    /// Print the equilibrium roots and the competition threshold.
    Roots {
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        k: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 1.0)]
        c_gn: f64,
        /// Kernel floor used by the two-dimensional threshold.
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
    },
    /// Evaluate the Mittag-Leffler function E_{α,β}(z).
    Mlf {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
    },
}

/// Failure classes mapped to exit codes.
enum Failure {
    Check(String),
    Config(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config { .. } | Error::InvalidParameter { .. } | Error::KernelFloor { .. } => {
                Failure::Config(e.to_string())
            }
            other => Failure::Check(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Some(n) = std::env::var("FRACPLAP_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("could not cap the thread pool: {e}");
            }
        }
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate { config, out } => cmd_simulate(&config, out.as_deref()),
        Command::Verify { suite } => cmd_verify(&suite),
        Command::Sweep { spec, out } => cmd_sweep(&spec, &out),
        Command::Roots { mu, k, gamma, dim, c_gn, eta } => cmd_roots(mu, k, gamma, dim, c_gn, eta),
        Command::Mlf { alpha, beta, z } => {
            fracplap::fractional::mittag_leffler(alpha, beta, z).map(|v| println!("{v}")).map_err(Failure::from)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_manifest(path: &Path) -> Result<RunManifest, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    Ok(parse_config(&text)?)
}

fn cmd_simulate(config: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let manifest = load_manifest(config)?;
    let outcome = simulate(&manifest, out)?;
    let r = &outcome.report;
    println!("status: {:?}", r.status);
    println!("steps: {}  final time: {}", r.steps, r.final_time);
    println!("max sup-norm: {:.6e}  terminal sup-norm: {:.6e}", r.max_sup_norm(), r.terminal_sup_norm());
    println!("verdicts: {}", serde_json::to_string(&outcome.verdicts).expect("verdicts serialise"));
    for w in &r.warnings {
        println!("warning: {w}");
    }
    println!("outputs: {}", outcome.dir.display());
    if outcome.verdicts.no_failures() {
        Ok(())
    } else {
        Err(Failure::Check("an analysis check failed".into()))
    }
}

fn cmd_verify(name: &str) -> Result<(), Failure> {
    let suites: Vec<Suite> = if name == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![name.parse().map_err(Failure::Config)?]
    };
    let mut failed = 0;
    for suite in suites {
        for check in run_suite(suite) {
            println!("[{suite}] {check}");
            failed += usize::from(!check.pass);
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Check(format!("{failed} check(s) failed")))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSpec {
    base: Value,
    /// JSON pointer into the base manifest → values to substitute.
    vary: BTreeMap<String, Vec<Value>>,
}

fn expand(spec: &SweepSpec) -> Result<Vec<(Vec<Value>, Value)>, Failure> {
    let mut runs = vec![(Vec::new(), spec.base.clone())];
    for (pointer, values) in &spec.vary {
        let mut next = Vec::with_capacity(runs.len() * values.len());
        for (labels, doc) in &runs {
            for v in values {
                let mut doc = doc.clone();
                set_pointer(&mut doc, pointer, v.clone())?;
                let mut labels = labels.clone();
                labels.push(v.clone());
                next.push((labels, doc));
            }
        }
        runs = next;
    }
    Ok(runs)
}

/// Sets `doc[pointer] = value`, creating missing object keys on the way.
fn set_pointer(doc: &mut Value, pointer: &str, value: Value) -> Result<(), Failure> {
    let bad = || Failure::Config(format!("{pointer}: not a valid path into the base manifest"));
    let mut cur = doc;
    let parts: Vec<&str> = pointer.strip_prefix('/').ok_or_else(bad)?.split('/').collect();
    for (i, part) in parts.iter().enumerate() {
        let obj = cur.as_object_mut().ok_or_else(bad)?;
        if i + 1 == parts.len() {
            obj.insert(part.to_string(), value);
            return Ok(());
        }
        cur = obj.entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    Err(bad())
}

fn cmd_sweep(spec_path: &Path, out: &Path) -> Result<(), Failure> {
    let text = fs::read_to_string(spec_path).map_err(|e| Failure::Config(format!("{}: {e}", spec_path.display())))?;
    let spec: SweepSpec =
        serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", spec_path.display())))?;
    let runs = expand(&spec)?;
    let manifests = runs
        .into_iter()
        .map(|(labels, doc)| Ok((labels, parse_config(&doc.to_string())?)))
        .collect::<Result<Vec<_>, Error>>()?;
    fs::create_dir_all(out).map_err(|e| Failure::Check(format!("{}: {e}", out.display())))?;

    let rows: Vec<Result<String, Error>> = manifests
        .par_iter()
        .map(|(labels, manifest)| {
            let hash = manifest.hash();
            let dir = out.join(&hash[..16]);
            let report_path = dir.join("report.json");
            let report: Value = match fs::read_to_string(&report_path).ok().and_then(|t| serde_json::from_str::<Value>(&t).ok()) {
                Some(r) if r["manifest_hash"] == hash.as_str() => r,
                _ => {
                    simulate(manifest, Some(&dir))?;
                    let t = fs::read_to_string(&report_path).map_err(|e| Error::Io { path: report_path.clone(), source: e })?;
                    serde_json::from_str(&t).expect("report written by simulate")
                }
            };
            let mut row = hash[..16].to_string();
            for v in labels {
                write!(row, ",{v}").unwrap();
            }
            let v = &report["verdicts"];
            let field = |x: &Value| match x {
                Value::Null => String::from("n/a"),
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let status = report["status"]["kind"].as_str().unwrap_or("unknown").to_string();
            write!(
                row,
                ",{status},{},{},{},{},{}",
                field(&report["max_sup_norm"]),
                field(&v["boundedness"]),
                field(&v["decay"]),
                field(&v["allee"]),
                field(&v["lyapunov"])
            )
            .unwrap();
            Ok(row)
        })
        .collect();

    let mut table = String::from("run");
    for pointer in spec.vary.keys() {
        write!(table, ",{pointer}").unwrap();
    }
    table.push_str(",status,max_sup_norm,boundedness,decay,allee,lyapunov\n");
    let mut errors = 0;
    for row in rows {
        match row {
            Ok(r) => {
                table.push_str(&r);
                table.push('\n');
            }
            Err(e) => {
                eprintln!("run failed: {e}");
                errors += 1;
            }
        }
    }
    let path = out.join("verdicts.csv");
    fs::write(&path, &table).map_err(|e| Failure::Check(format!("{}: {e}", path.display())))?;
    print!("{table}");
    if errors == 0 {
        Ok(())
    } else {
        Err(Failure::Check(format!("{errors} run(s) failed")))
    }
}

fn cmd_roots(mu: f64, k: f64, gamma: f64, dim: usize, c_gn: f64, eta: f64) -> Result<(), Failure> {
    let roots = equilibrium_roots(mu, k, gamma)?;
    if roots.real {
        println!("a={} A={}", roots.a, roots.big_a);
    } else {
        println!("complex roots (real part {})", roots.a);
    }
    let mut consts = AnalysisConstants::new(eta, 1.0);
    consts.c_gn = c_gn;
    println!("k_star={}", k_star(dim, mu, &consts)?);
    Ok(())
}
