//! Exact Gaussian process regression with a squared-exponential kernel.
//!
//! `mean(x) = kᵀ (K + αI)⁻¹ y` and `var(x) = k(x, x) − kᵀ (K + αI)⁻¹ k`,
//! evaluated through a Cholesky factor of `K + αI`. The reported standard
//! deviation is the square root of that variance (clamped at zero).

mod hyper;
mod persist;
mod sensitivity;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::DesignPoint;
use crate::linalg::Cholesky;
use crate::Scalar;

pub use hyper::{log_marginal_likelihood, select_hyperparameters, HyperSearch};
pub use persist::{load_model, save_model, GprModelFile, MODEL_FORMAT};
pub use sensitivity::{alpha_sensitivity, AlphaRow, AlphaStats};

/// Noise level used for noise-free simulation data.
pub const DEFAULT_ALPHA: f64 = 1e-12;

/// Fixed kernel used when no likelihood search is requested. Likelihood
/// maximization on smooth data drives `l` towards 1, where `α = 1e-12`
/// no longer interpolates to 1e-6.
pub const DEFAULT_SIGMA_F: f64 = 1.0;
pub const DEFAULT_LENGTH_SCALE: f64 = 0.4;

/// Jitter ladder tried when `K + αI` does not factor: 1e-12 up to 1e-6.
pub const JITTER_LADDER: [f64; 7] = [1e-12, 1e-11, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6];

const DUPLICATE_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum GprError {
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("{points} design points but {targets} targets")]
    LengthMismatch { points: usize, targets: usize },
    #[error("samples {first} and {second} share a design point")]
    DuplicateInput { first: usize, second: usize },
    #[error("invalid kernel parameters: {0}")]
    InvalidParams(String),
    #[error("non-finite training data at sample {0}")]
    NonFinite(usize),
    #[error("covariance matrix not positive definite even with jitter {jitter:e}")]
    Conditioning { jitter: f64 },
    #[error("hyperparameter search failed: {0}")]
    Optimization(String),
    #[error("model file: {0}")]
    Persist(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams<T> {
    /// signal amplitude σ_f
    pub sigma_f: T,
    pub length_scale: T,
    /// observation noise variance α
    pub alpha: T,
}

impl<T: Scalar> KernelParams<T> {
    pub fn new(sigma_f: T, length_scale: T, alpha: T) -> Result<Self, GprError> {
        let p = Self {
            sigma_f,
            length_scale,
            alpha,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), GprError> {
        let ok = self.sigma_f.is_finite()
            && self.length_scale.is_finite()
            && self.alpha.is_finite()
            && self.sigma_f > T::zero()
            && self.length_scale > T::zero()
            && self.alpha >= T::zero();
        if ok {
            Ok(())
        } else {
            Err(GprError::InvalidParams(format!(
                "sigma_f={}, l={}, alpha={} (need sigma_f > 0, l > 0, alpha >= 0)",
                self.sigma_f, self.length_scale, self.alpha
            )))
        }
    }

    /// `σ_f = 1`, `l = 0.4`, `α = 1e-12`.
    pub fn defaults() -> Self {
        Self {
            sigma_f: T::lit(DEFAULT_SIGMA_F),
            length_scale: T::lit(DEFAULT_LENGTH_SCALE),
            alpha: T::lit(DEFAULT_ALPHA),
        }
    }

    pub fn with_alpha(self, alpha: T) -> Self {
        Self { alpha, ..self }
    }
}

/// `σ_f² exp(−|p − q|² / (2 l²))`.
#[inline]
pub fn se_kernel<T: Scalar>(p: &DesignPoint<T>, q: &DesignPoint<T>, params: &KernelParams<T>) -> T {
    let l = params.length_scale;
    params.sigma_f * params.sigma_f * (-p.dist2(q) / (T::lit(2.0) * l * l)).exp()
}

/// Dense kernel matrix of a point set (row-major).
pub fn kernel_matrix<T: Scalar>(points: &[DesignPoint<T>], params: &KernelParams<T>) -> Vec<T> {
    let n = points.len();
    let mut k = vec![T::zero(); n * n];
    for i in 0..n {
        k[i * n + i] = params.sigma_f * params.sigma_f;
        for j in 0..i {
            let v = se_kernel(&points[i], &points[j], params);
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
    }
    k
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction<T> {
    pub mean: T,
    pub std: T,
}

/// A fitted surrogate. Immutable; safe to share across threads.
#[derive(Debug, Clone)]
pub struct GprModel<T> {
    inputs: Vec<DesignPoint<T>>,
    targets: Vec<T>,
    params: KernelParams<T>,
    /// diagonal added on top of α to make the factorization succeed
    jitter: T,
    factor: Cholesky<T>,
    weights: Vec<T>,
}

impl<T: Scalar> GprModel<T> {
    pub fn fit(
        inputs: &[DesignPoint<T>],
        targets: &[T],
        params: KernelParams<T>,
    ) -> Result<Self, GprError> {
        check_training_set(inputs, targets, 2)?;
        params.validate()?;
        let (factor, jitter) = factorize(inputs, &params)?;
        let weights = factor.solve(targets);
        Ok(Self {
            inputs: inputs.to_vec(),
            targets: targets.to_vec(),
            params,
            jitter,
            factor,
            weights,
        })
    }

    /// Rebuilds a model from stored parts with a known jitter; the factor is
    /// recomputed deterministically.
    pub(crate) fn from_parts(
        inputs: Vec<DesignPoint<T>>,
        targets: Vec<T>,
        params: KernelParams<T>,
        jitter: T,
        weights: Vec<T>,
    ) -> Result<Self, GprError> {
        check_training_set(&inputs, &targets, 2)?;
        params.validate()?;
        if weights.len() != inputs.len() {
            return Err(GprError::Persist("weights length differs from inputs".into()));
        }
        let n = inputs.len();
        let mut k = kernel_matrix(&inputs, &params);
        for i in 0..n {
            k[i * n + i] = k[i * n + i] + params.alpha + jitter;
        }
        let factor = Cholesky::factor(&k, n).ok_or(GprError::Conditioning {
            jitter: jitter.to_f64_lossy(),
        })?;
        Ok(Self {
            inputs,
            targets,
            params,
            jitter,
            factor,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn inputs(&self) -> &[DesignPoint<T>] {
        &self.inputs
    }

    pub fn targets(&self) -> &[T] {
        &self.targets
    }

    pub fn params(&self) -> &KernelParams<T> {
        &self.params
    }

    /// Extra diagonal beyond α that was needed to factor `K + αI` (0 if none).
    pub fn jitter(&self) -> T {
        self.jitter
    }

    pub fn effective_noise(&self) -> T {
        self.params.alpha + self.jitter
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn factor(&self) -> &Cholesky<T> {
        &self.factor
    }

    /// Cross-covariance vector `k(p, x_j)`.
    pub fn cross_covariance(&self, p: &DesignPoint<T>) -> Vec<T> {
        self.inputs
            .iter()
            .map(|q| se_kernel(p, q, &self.params))
            .collect()
    }

    pub fn predict_mean(&self, p: &DesignPoint<T>) -> T {
        self.inputs
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (q, &w)| acc + w * se_kernel(p, q, &self.params))
    }

    /// Posterior variance `k(p,p) − kᵀ(K+αI)⁻¹k`, clamped at zero.
    pub fn predict_variance(&self, p: &DesignPoint<T>) -> T {
        let k = self.cross_covariance(p);
        let v = self.factor.solve_lower(&k);
        let explained = v.iter().fold(T::zero(), |acc, &x| acc + x * x);
        let prior = self.params.sigma_f * self.params.sigma_f;
        (prior - explained).max(T::zero())
    }

    pub fn predict_std(&self, p: &DesignPoint<T>) -> T {
        self.predict_variance(p).sqrt()
    }

    pub fn predict(&self, p: &DesignPoint<T>) -> Prediction<T> {
        let k = self.cross_covariance(p);
        let mean = k
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&a, &b)| acc + a * b);
        let v = self.factor.solve_lower(&k);
        let explained = v.iter().fold(T::zero(), |acc, &x| acc + x * x);
        let prior = self.params.sigma_f * self.params.sigma_f;
        Prediction {
            mean,
            std: (prior - explained).max(T::zero()).sqrt(),
        }
    }

    /// Largest `|mean(x_j) − y_j|` over the training set.
    pub fn max_training_residual(&self) -> T {
        self.inputs
            .iter()
            .zip(&self.targets)
            .map(|(p, &y)| (self.predict_mean(p) - y).abs())
            .fold(T::zero(), T::max)
    }
}

pub(crate) fn check_training_set<T: Scalar>(
    inputs: &[DesignPoint<T>],
    targets: &[T],
    min_len: usize,
) -> Result<(), GprError> {
    if inputs.len() != targets.len() {
        return Err(GprError::LengthMismatch {
            points: inputs.len(),
            targets: targets.len(),
        });
    }
    if inputs.len() < min_len {
        return Err(GprError::TooFewSamples {
            need: min_len,
            got: inputs.len(),
        });
    }
    for (i, (p, y)) in inputs.iter().zip(targets).enumerate() {
        if !p.is_finite() || !y.is_finite() {
            return Err(GprError::NonFinite(i));
        }
    }
    let tol = T::lit(DUPLICATE_TOL);
    for i in 0..inputs.len() {
        for j in 0..i {
            if inputs[i].max_abs_diff(&inputs[j]) <= tol {
                return Err(GprError::DuplicateInput { first: j, second: i });
            }
        }
    }
    Ok(())
}

/// Factors `K + αI`, escalating a diagonal jitter through [`JITTER_LADDER`]
/// on failure. Returns the factor and the jitter used.
pub(crate) fn factorize<T: Scalar>(
    inputs: &[DesignPoint<T>],
    params: &KernelParams<T>,
) -> Result<(Cholesky<T>, T), GprError> {
    let n = inputs.len();
    let base = kernel_matrix(inputs, params);
    let attempt = |extra: T| {
        let mut k = base.clone();
        for i in 0..n {
            k[i * n + i] = k[i * n + i] + params.alpha + extra;
        }
        Cholesky::factor(&k, n)
    };
    if let Some(c) = attempt(T::zero()) {
        return Ok((c, T::zero()));
    }
    for &j in JITTER_LADDER.iter() {
        let jt = T::lit(j);
        if let Some(c) = attempt(jt) {
            return Ok((c, jt));
        }
    }
    Err(GprError::Conditioning {
        jitter: *JITTER_LADDER.last().unwrap(),
    })
}
