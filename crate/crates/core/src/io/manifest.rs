use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::output::read_snapshot;
use crate::error::{Error, Result};
use crate::grid::{DomainSpec, Field};
use crate::integrator::{Coupling, SolverConfig};
use crate::model::{validate_numerics, AnalysisConstants, CouplingMode, ModelParameters};
use crate::spatial::{discretize_kernel, KernelShape};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub half_width: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSection {
    pub c_gn: f64,
    pub c4: f64,
    pub c1: f64,
    pub c2: f64,
    /// Ball radius of the local functionals; `δ₀/2` when absent.
    pub delta: Option<f64>,
    /// Replaces `γ` in the decay-regime threshold `γ/μ`.
    pub tau: Option<f64>,
    /// Allee bands; `0.02·a` and `0.05·A` when absent.
    pub tol_ext: Option<f64>,
    pub tol_per: Option<f64>,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        AnalysisSection { c_gn: 1.0, c4: 1.0, c1: 1.0, c2: 1.0, delta: None, tau: None, tol_ext: None, tol_per: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelSection {
    pub shape: KernelShape,
    pub delta0: f64,
    /// Kernel floor; 90% of the discrete core minimum when absent.
    pub eta: Option<f64>,
}

impl Default for KernelSection {
    fn default() -> Self {
        KernelSection { shape: KernelShape::Box, delta0: 0.5, eta: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCondition {
    Constant {
        value: f64,
    },
    /// `height · exp(−|x − center|² / (2 width²))`.
    GaussianBump {
        #[serde(default)]
        center: [f64; 2],
        width: f64,
        height: f64,
    },
    /// Independent uniform samples in `[0, amplitude)`.
    Random {
        amplitude: f64,
        /// Falls back to the manifest seed.
        #[serde(default)]
        seed: Option<u64>,
    },
    /// A snapshot file on the same grid.
    File {
        path: PathBuf,
    },
}

impl Default for InitialCondition {
    fn default() -> Self {
        InitialCondition::GaussianBump { center: [0.0, 0.0], width: 1.0, height: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    /// Write `final.fplp` and one file per snapshot time.
    pub snapshots: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: PathBuf::from("out"), snapshots: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub model: ModelParameters,
    pub domain: DomainSection,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub analysis: AnalysisSection,
    #[serde(default)]
    pub kernel: KernelSection,
    #[serde(default)]
    pub initial: InitialCondition,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub seed: u64,
}

/// Everything needed to start a run, derived from a manifest.
#[derive(Debug, Clone)]
pub struct RunSetup {
    pub params: ModelParameters,
    pub domain: DomainSpec,
    pub coupling: Coupling,
    pub config: SolverConfig,
    pub consts: AnalysisConstants,
    pub u0: Field,
}

fn at(pointer: &str, message: impl Into<String>) -> Error {
    Error::Config { pointer: pointer.to_string(), message: message.into() }
}

fn relocate(section: &str, e: Error) -> Error {
    match e {
        Error::InvalidParameter { name, reason } => at(&format!("/{section}/{name}"), reason),
        Error::KernelFloor { .. } => at(&format!("/{section}/eta"), e.to_string()),
        other => at(&format!("/{section}"), other.to_string()),
    }
}

/// Parses and validates a manifest. Errors carry a JSON pointer to the
/// offending key.
pub fn parse_config(text: &str) -> Result<RunManifest> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let manifest: RunManifest = serde_path_to_error::deserialize(de).map_err(|e| {
        let mut pointer = String::new();
        for seg in e.path().iter() {
            match seg {
                serde_path_to_error::Segment::Seq { index } => pointer.push_str(&format!("/{index}")),
                serde_path_to_error::Segment::Map { key } => pointer.push_str(&format!("/{key}")),
                serde_path_to_error::Segment::Enum { .. } | serde_path_to_error::Segment::Unknown => {}
            }
        }
        at(if pointer.is_empty() { "/" } else { &pointer }, e.inner().to_string())
    })?;
    manifest.validate()?;
    Ok(manifest)
}

impl RunManifest {
    pub fn validate(&self) -> Result<()> {
        if let Some(v) = validate_numerics(&self.model).into_iter().next() {
            return Err(at(&format!("/model/{}", v.field), v.message));
        }
        let domain = self.domain_spec()?;
        self.solver.validate().map_err(|e| relocate("solver", e))?;
        let a = &self.analysis;
        for (name, v) in [("c_gn", a.c_gn), ("c4", a.c4), ("c1", a.c1), ("c2", a.c2)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(at(&format!("/analysis/{name}"), format!("must be positive, got {v}")));
            }
        }
        if let Some(d) = a.delta {
            if !(d > 0.0 && d <= self.kernel.delta0 / 2.0) {
                return Err(at("/analysis/delta", format!("must lie in (0, delta0/2], got {d}")));
            }
        }
        if self.model.coupling == CouplingMode::Kernel {
            self.kernel_grid(&domain)?;
        }
        match &self.initial {
            InitialCondition::Constant { value } if !value.is_finite() => {
                Err(at("/initial/value", "must be finite"))
            }
            InitialCondition::GaussianBump { width, height, center } => {
                if !(*width > 0.0) {
                    Err(at("/initial/width", format!("must be positive, got {width}")))
                } else if !height.is_finite() || !center.iter().all(|c| c.is_finite()) {
                    Err(at("/initial", "height and center must be finite"))
                } else {
                    Ok(())
                }
            }
            InitialCondition::Random { amplitude, .. } if !(*amplitude >= 0.0 && amplitude.is_finite()) => {
                Err(at("/initial/amplitude", format!("must be finite and >= 0, got {amplitude}")))
            }
            _ => Ok(()),
        }
    }

    pub fn domain_spec(&self) -> Result<DomainSpec> {
        DomainSpec::new(self.domain.half_width, self.domain.points, self.model.dim).map_err(|e| match e {
            Error::InvalidParameter { name: "dim", reason } => at("/model/dim", reason),
            e => relocate("domain", e),
        })
    }

    fn kernel_grid(&self, domain: &DomainSpec) -> Result<crate::spatial::KernelGrid> {
        let k = &self.kernel;
        match k.eta {
            Some(eta) => discretize_kernel(k.shape, k.delta0, eta, domain).map_err(|e| relocate("kernel", e)),
            None => {
                let probe = discretize_kernel(k.shape, k.delta0, 0.0, domain).map_err(|e| relocate("kernel", e))?;
                let eta = 0.9 * probe.core_min();
                discretize_kernel(k.shape, k.delta0, eta, domain).map_err(|e| relocate("kernel", e))
            }
        }
    }

    pub fn initial_field(&self, domain: &DomainSpec) -> Result<Field> {
        match &self.initial {
            InitialCondition::Constant { value } => Ok(Field::constant(*domain, *value)),
            InitialCondition::GaussianBump { center, width, height } => Ok(Field::from_fn(*domain, |x| {
                let r2 = (x[0] - center[0]).powi(2) + if domain.dim() == 2 { (x[1] - center[1]).powi(2) } else { 0.0 };
                height * (-r2 / (2.0 * width * width)).exp()
            })),
            InitialCondition::Random { amplitude, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(self.seed));
                let values = (0..domain.len()).map(|_| amplitude * rng.gen::<f64>()).collect();
                Field::from_values(*domain, values)
            }
            InitialCondition::File { path } => {
                let f = read_snapshot(path)?;
                if f.domain() != domain {
                    return Err(at(
                        "/initial/path",
                        format!("snapshot grid {:?} does not match the manifest grid {:?}", f.domain(), domain),
                    ));
                }
                Ok(f)
            }
        }
    }

    pub fn build(&self) -> Result<RunSetup> {
        self.validate()?;
        let domain = self.domain_spec()?;
        let (coupling, eta) = match self.model.coupling {
            CouplingMode::Kernel => {
                let k = self.kernel_grid(&domain)?;
                let eta = k.eta();
                (Coupling::Kernel(k), eta)
            }
            CouplingMode::GlobalMass => (Coupling::GlobalMass, self.kernel.eta.unwrap_or(1.0)),
        };
        let a = &self.analysis;
        let mut consts = AnalysisConstants::new(eta.max(f64::MIN_POSITIVE), self.kernel.delta0);
        consts.c_gn = a.c_gn;
        consts.c4 = a.c4;
        consts.c1 = a.c1;
        consts.c2 = a.c2;
        if let Some(d) = a.delta {
            consts.delta = d;
        }
        Ok(RunSetup {
            params: self.model,
            domain,
            coupling,
            config: self.solver.clone(),
            consts,
            u0: self.initial_field(&domain)?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serialises")
    }

    /// SHA-256 of the compact JSON form, hex encoded.
    pub fn hash(&self) -> String {
        let compact = serde_json::to_string(self).expect("manifest serialises");
        hex::encode(Sha256::digest(compact.as_bytes()))
    }
}
