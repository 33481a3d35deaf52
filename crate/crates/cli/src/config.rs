//! Run configuration: a TOML file, overridden by command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// output directory; models and samples are read from here too
    pub out: PathBuf,
    /// seeds the design, hyperparameter search and solver starts
    pub seed: u64,
    pub data: DataConfig,
    pub normalization: NormalizationConfig,
    pub gpr: GprConfig,
    pub uncertainty: UncertaintyConfig,
    pub pce: PceConfig,
    pub problem: ProblemConfig,
    pub propagate: PropagateConfig,
    pub validate: ValidateConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            out: PathBuf::from("out"),
            seed: 0,
            data: DataConfig::default(),
            normalization: NormalizationConfig::default(),
            gpr: GprConfig::default(),
            uncertainty: UncertaintyConfig::default(),
            pce: PceConfig::default(),
            problem: ProblemConfig::default(),
            propagate: PropagateConfig::default(),
            validate: ValidateConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataConfig {
    /// sample CSV; `<out>/samples.csv` when absent
    pub samples: Option<PathBuf>,
    pub n_boundary: usize,
    pub n_interior: usize,
}

impl Default for DataConfig {
    fn default() -> Self {
        Self {
            samples: None,
            n_boundary: 20,
            n_interior: 80,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BoundsSource {
    /// `# bounds:` header when present, column extremes otherwise
    #[default]
    Metadata,
    Columns,
}

/// Physical bounds used when writing synthetic samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormalizationConfig {
    pub source: BoundsSource,
    pub x1: [f64; 2],
    pub x2: [f64; 2],
    pub y1: [f64; 2],
    pub y2: [f64; 2],
}

impl Default for NormalizationConfig {
    fn default() -> Self {
        Self {
            source: BoundsSource::Metadata,
            x1: [0.015, 0.5],
            x2: [0.05, 0.15],
            y1: [50.87, 1437.0],
            y2: [12.87, 16.29],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum HyperStrategy {
    #[default]
    Fixed,
    /// maximize the log marginal likelihood
    Ml,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GprConfig {
    pub alpha: f64,
    pub hyper: HyperStrategy,
    pub sigma_f: f64,
    pub length_scale: f64,
}

impl Default for GprConfig {
    fn default() -> Self {
        Self {
            alpha: rdo_core::gpr::DEFAULT_ALPHA,
            hyper: HyperStrategy::Fixed,
            sigma_f: rdo_core::gpr::DEFAULT_SIGMA_F,
            length_scale: rdo_core::gpr::DEFAULT_LENGTH_SCALE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UncertaintyConfig {
    /// 95% half-width of the input scatter, normalized units
    pub e_x: f64,
}

impl Default for UncertaintyConfig {
    fn default() -> Self {
        Self { e_x: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PceConfig {
    pub order: usize,
}

impl Default for PceConfig {
    fn default() -> Self {
        Self {
            order: rdo_core::pce::DEFAULT_ORDER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProblemConfig {
    /// 1 weighted, 2 worst case of f2, 3 worst case of f1
    pub kind: u8,
    pub omega: f64,
    pub sigma_bounds: Option<[f64; 2]>,
    /// `f̄` for problems 2 and 3; absent means unconstrained
    pub bound: Option<f64>,
    pub k_sigma: f64,
    pub omegas: Vec<f64>,
    pub bounds: Vec<f64>,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        Self {
            kind: 1,
            omega: 0.5,
            sigma_bounds: None,
            bound: None,
            k_sigma: rdo_core::robust::DEFAULT_K_SIGMA,
            omegas: (0..=20).map(|i| i as f64 / 20.0).collect(),
            bounds: vec![0.2, 0.25, 0.3, 0.35, 0.4, 0.5, 0.6],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GridDomain {
    /// `[0, 1]²`
    #[default]
    Unit,
    /// `[-0.1, 1.1]²`
    Extended,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropagateConfig {
    /// `NxM`: N points along x1, M along x2
    pub grid: String,
    pub domain: GridDomain,
}

impl Default for PropagateConfig {
    fn default() -> Self {
        Self {
            grid: "100x100".into(),
            domain: GridDomain::Unit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidateConfig {
    pub mc_samples: usize,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        Self { mc_samples: 1_000_000 }
    }
}

/// Flag values that replace their config-file counterparts.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub omega: Option<f64>,
    pub order: Option<u32>,
    pub ex: Option<f64>,
    pub alpha: Option<f64>,
    pub grid: Option<String>,
    pub problem: Option<u8>,
    pub bound: Option<f64>,
    pub sigma_bounds: Option<[f64; 2]>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn apply(&mut self, o: Overrides) {
        if let Some(v) = o.out {
            self.out = v;
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.omega {
            self.problem.omega = v;
        }
        if let Some(v) = o.order {
            self.pce.order = v as usize;
        }
        if let Some(v) = o.ex {
            self.uncertainty.e_x = v;
        }
        if let Some(v) = o.alpha {
            self.gpr.alpha = v;
        }
        if let Some(v) = o.grid {
            self.propagate.grid = v;
        }
        if let Some(v) = o.problem {
            self.problem.kind = v;
        }
        if let Some(v) = o.bound {
            self.problem.bound = Some(v);
        }
        if let Some(v) = o.sigma_bounds {
            self.problem.sigma_bounds = Some(v);
        }
    }

    pub fn samples_path(&self) -> PathBuf {
        self.data.samples.clone().unwrap_or_else(|| self.out.join("samples.csv"))
    }
}

/// Parses `NxM` into `(N, M)`, both at least 1.
pub fn parse_grid(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Input(format!("grid must look like 100x100, got `{s}`"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let n: usize = a.trim().parse().map_err(|_| bad())?;
    let m: usize = b.trim().parse().map_err(|_| bad())?;
    if n == 0 || m == 0 {
        return Err(bad());
    }
    Ok((n, m))
}

/// Parses `a,b` into two floats.
pub fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    let a: f64 = a.trim().parse().map_err(|e| format!("`{a}`: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("`{b}`: {e}"))?;
    Ok([a, b])
}
