//! Run configuration read from `--config` and overridden by command-line flags.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use lielac::energy::EnergyConfig;
use lielac::fields::{GrfParams, SineIcParams};
use lielac::lie::GroupId;
use lielac::optim::OptimConfig;
use lielac::solvers::{AceConfig, HeatConfig, PseudoSpectralConfig};
use lielac::toy2d::{Lattice, RingMixture};

use crate::CliError;

/// Every command reads the same document; each uses the sections it needs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub threads: Option<usize>,
    /// Check tolerance or canonical-energy acceptance threshold, depending on the command.
    pub tol: Option<f64>,
    pub out_dir: Option<PathBuf>,
    pub group: Option<GroupId>,
    pub n_samples: Option<usize>,
    pub n_jets: Option<usize>,
    pub eps: Option<f64>,
    pub energy: Option<EnergyConfig>,
    /// Optimizer fields laid over the command's own defaults.
    pub optim: Option<serde_json::Map<String, serde_json::Value>>,
    pub heat: HeatRun,
    pub burgers: BurgersRun,
    pub ace: AceRun,
    pub toy: ToyRun,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct HeatRun {
    pub ic: SineIcParams,
    pub n_points: usize,
    pub solver: HeatConfig,
    pub times: Vec<f64>,
}

impl Default for HeatRun {
    fn default() -> Self {
        HeatRun {
            ic: SineIcParams::single(5.0, 1.0, 0.0, TAU),
            n_points: 257,
            solver: HeatConfig::default(),
            times: (0..=16).map(f64::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct BurgersRun {
    pub ic: GrfParams,
    pub n_points: usize,
    pub nu: f64,
    pub times: Vec<f64>,
    pub reference: PseudoSpectralConfig,
}

impl Default for BurgersRun {
    fn default() -> Self {
        BurgersRun {
            ic: GrfParams { mean_offset: 0.2, ..GrfParams::default() },
            n_points: 257,
            nu: 0.01,
            times: (0..=10).map(|k| 0.1 * k as f64).collect(),
            reference: PseudoSpectralConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct AceRun {
    pub n: usize,
    /// Draw random `x₀, y₀` offsets for the initial condition.
    pub shifted: bool,
    pub tf_lo: f64,
    pub tf_hi: f64,
    pub times: Vec<f64>,
    pub solver: AceConfig,
}

impl Default for AceRun {
    fn default() -> Self {
        AceRun { n: 64, shifted: true, tf_lo: 0.0, tf_hi: 0.005, times: vec![0.002, 0.005], solver: AceConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct ToyRun {
    pub mixture: RingMixture,
    pub n_train_per_ring: usize,
    pub n_test_per_ring: usize,
    pub k: usize,
    /// KDE bandwidth; `None` uses `0.2 ×` the mean training radius.
    pub bandwidth: Option<f64>,
    /// Number of evenly spaced test rotations for the invariance metrics.
    pub rotations: usize,
    pub lattice: Lattice,
}

impl Default for ToyRun {
    fn default() -> Self {
        ToyRun {
            mixture: RingMixture::default(),
            n_train_per_ring: 100,
            n_test_per_ring: 100,
            k: 5,
            bandwidth: None,
            rotations: 8,
            lattice: Lattice::default(),
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub tol: Option<f64>,
}

impl RunConfig {
    /// Reads `path` (or defaults when absent) and applies `flags`.
    pub fn load(path: Option<&Path>, flags: &Overrides) -> Result<Self, CliError> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
            }
            None => RunConfig::default(),
        };
        if let Some(s) = flags.seed {
            cfg.seed = s;
        }
        if flags.threads.is_some() {
            cfg.threads = flags.threads;
        }
        if flags.tol.is_some() {
            cfg.tol = flags.tol;
        }
        if flags.out.is_some() {
            cfg.out_dir = flags.out.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.to_string()));
        if self.threads == Some(0) {
            return bad("threads must be at least 1");
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return bad("tol must be positive");
            }
        }
        if let Some(e) = &self.energy {
            e.validate()?;
        }
        self.optim_or(OptimConfig::default())?;
        let sorted = |t: &[f64]| !t.is_empty() && t.iter().all(|v| v.is_finite() && *v >= 0.0) && t.windows(2).all(|w| w[0] <= w[1]);
        if !sorted(&self.heat.times) || !sorted(&self.burgers.times) || !sorted(&self.ace.times) {
            return bad("times must be nonempty, nonnegative and nondecreasing");
        }
        if self.heat.n_points < 3 || self.burgers.n_points < 3 || self.ace.n < 4 {
            return bad("grids are too small");
        }
        if self.toy.k == 0 || self.toy.rotations == 0 || self.toy.n_train_per_ring == 0 || self.toy.n_test_per_ring == 0 {
            return bad("toy k, rotations and sample counts must be positive");
        }
        Ok(())
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out_dir.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    /// `base` with the file's optimizer fields applied and the run seed.
    pub fn optim_or(&self, base: OptimConfig) -> Result<OptimConfig, CliError> {
        let bad = |e: String| CliError::Config(format!("optim: {e}"));
        let mut merged = match serde_json::to_value(base).map_err(|e| bad(e.to_string()))? {
            serde_json::Value::Object(m) => m,
            _ => unreachable!("OptimConfig serializes to an object"),
        };
        for (k, v) in self.optim.iter().flatten() {
            merged.insert(k.clone(), v.clone());
        }
        let mut cfg: OptimConfig = serde_json::from_value(serde_json::Value::Object(merged)).map_err(|e| bad(e.to_string()))?;
        cfg.seed = self.seed;
        cfg.validate()?;
        Ok(cfg)
    }

    /// The configured energy, checked against the command's group.
    pub fn energy_for(&self, group: GroupId) -> Result<Option<&EnergyConfig>, CliError> {
        match &self.energy {
            Some(e) if e.group() != Some(group) => {
                Err(CliError::Config(format!("energy kind does not canonicalize over the {} group", group.name())))
            }
            other => Ok(other.as_ref()),
        }
    }
}
