use rayon::prelude::*;

use super::{GprError, GprModel, KernelParams};
use crate::dataset::DesignPoint;
use crate::grid::grid_norm;
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaStats<T> {
    /// grid norm of the posterior mean
    pub mean_norm: T,
    /// grid norm of the posterior standard deviation
    pub std_norm: T,
    /// jitter added on top of α to factor the covariance
    pub jitter: T,
}

#[derive(Debug)]
pub struct AlphaRow<T> {
    pub alpha: T,
    pub result: Result<AlphaStats<T>, GprError>,
}

/// Refits at every α (other hyperparameters fixed) and records the grid
/// norms of mean and standard deviation. A failed fit only fails its row;
/// `alphas` must be positive and strictly ascending.
pub fn alpha_sensitivity<T: Scalar>(
    inputs: &[DesignPoint<T>],
    targets: &[T],
    params: KernelParams<T>,
    alphas: &[T],
    grid: &[DesignPoint<T>],
) -> Result<Vec<AlphaRow<T>>, GprError> {
    let ascending = alphas.windows(2).all(|w| w[1] > w[0]);
    if alphas.is_empty() || !ascending || !(alphas[0] > T::zero()) {
        return Err(GprError::InvalidParams(
            "alpha sweep must be positive and strictly ascending".into(),
        ));
    }
    Ok(alphas
        .iter()
        .map(|&alpha| {
            let result = GprModel::fit(inputs, targets, params.with_alpha(alpha)).map(|m| {
                let preds: Vec<_> = grid.par_iter().map(|p| m.predict(p)).collect();
                let means: Vec<T> = preds.iter().map(|p| p.mean).collect();
                let stds: Vec<T> = preds.iter().map(|p| p.std).collect();
                AlphaStats {
                    mean_norm: grid_norm(&means),
                    std_norm: grid_norm(&stds),
                    jitter: m.jitter(),
                }
            });
            AlphaRow { alpha, result }
        })
        .collect())
}
