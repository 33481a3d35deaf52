//! JSON model files.
//!
//! The file carries everything needed to reproduce predictions: training
//! inputs and targets, kernel parameters, the jitter that was applied and
//! the weight vector. The Cholesky factor is rebuilt on load.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{GprError, GprModel, KernelParams};
use crate::dataset::DesignPoint;
use crate::Scalar;

pub const MODEL_FORMAT: &str = "rdo-gpr-model/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GprModelFile {
    pub format: String,
    pub kernel: String,
    pub sigma_f: f64,
    pub length_scale: f64,
    pub alpha: f64,
    pub jitter: f64,
    pub inputs: Vec<[f64; 2]>,
    pub targets: Vec<f64>,
    pub weights: Vec<f64>,
}

impl<T: Scalar> From<&GprModel<T>> for GprModelFile {
    fn from(m: &GprModel<T>) -> Self {
        Self {
            format: MODEL_FORMAT.into(),
            kernel: "squared_exponential".into(),
            sigma_f: m.params.sigma_f.to_f64_lossy(),
            length_scale: m.params.length_scale.to_f64_lossy(),
            alpha: m.params.alpha.to_f64_lossy(),
            jitter: m.jitter.to_f64_lossy(),
            inputs: m
                .inputs
                .iter()
                .map(|p| [p.x1.to_f64_lossy(), p.x2.to_f64_lossy()])
                .collect(),
            targets: m.targets.iter().map(|v| v.to_f64_lossy()).collect(),
            weights: m.weights.iter().map(|v| v.to_f64_lossy()).collect(),
        }
    }
}

impl GprModelFile {
    pub fn into_model<T: Scalar>(self) -> Result<GprModel<T>, GprError> {
        if self.format != MODEL_FORMAT {
            return Err(GprError::Persist(format!(
                "unsupported format `{}` (expected `{MODEL_FORMAT}`)",
                self.format
            )));
        }
        if self.kernel != "squared_exponential" {
            return Err(GprError::Persist(format!("unsupported kernel `{}`", self.kernel)));
        }
        let params = KernelParams::new(T::lit(self.sigma_f), T::lit(self.length_scale), T::lit(self.alpha))?;
        let inputs = self
            .inputs
            .iter()
            .map(|p| DesignPoint::new(T::lit(p[0]), T::lit(p[1])))
            .collect();
        GprModel::from_parts(
            inputs,
            self.targets.into_iter().map(T::lit).collect(),
            params,
            T::lit(self.jitter),
            self.weights.into_iter().map(T::lit).collect(),
        )
    }
}

pub fn save_model<T: Scalar, W: Write>(model: &GprModel<T>, out: W) -> Result<(), GprError> {
    serde_json::to_writer_pretty(out, &GprModelFile::from(model))
        .map_err(|e| GprError::Persist(e.to_string()))
}

pub fn load_model<T: Scalar, R: Read>(input: R) -> Result<GprModel<T>, GprError> {
    let file: GprModelFile =
        serde_json::from_reader(input).map_err(|e| GprError::Persist(e.to_string()))?;
    file.into_model()
}
