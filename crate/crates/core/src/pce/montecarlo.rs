use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{InputUncertainty, PceError};
use crate::dataset::DesignPoint;
use crate::Scalar;

/// Sample statistics of a Monte Carlo propagation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate<T> {
    pub mean: T,
    /// sample standard deviation with `n − 1` denominator
    pub std: T,
    /// standard error of the mean, `std / √n`
    pub mean_se: T,
    /// large-sample standard error of `std`, `std / √(2(n − 1))`
    pub std_se: T,
    pub n: usize,
}

/// Brute-force propagation: `n_samples` Gaussian perturbations of `center`.
/// Accumulates in `f64` (Welford) regardless of `T`.
pub fn mc_propagate<T: Scalar, F: Fn(&DesignPoint<T>) -> T>(
    f: F,
    center: DesignPoint<T>,
    unc: &InputUncertainty<T>,
    n_samples: usize,
    seed: u64,
) -> Result<McEstimate<T>, PceError> {
    if n_samples < 2 {
        return Err(PceError::InvalidArgument(format!(
            "Monte Carlo needs at least 2 samples, got {n_samples}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mean = 0.0f64;
    let mut m2 = 0.0f64;
    for i in 0..n_samples {
        let t1: f64 = StandardNormal.sample(&mut rng);
        let t2: f64 = StandardNormal.sample(&mut rng);
        let x = unc.perturb(&center, &[T::lit(t1), T::lit(t2)]);
        let v = f(&x).to_f64_lossy();
        if !v.is_finite() {
            return Err(PceError::NonFiniteSample(i));
        }
        let delta = v - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (v - mean);
    }
    let n = n_samples as f64;
    let std = (m2 / (n - 1.0)).max(0.0).sqrt();
    Ok(McEstimate {
        mean: T::lit(mean),
        std: T::lit(std),
        mean_se: T::lit(std / n.sqrt()),
        std_se: T::lit(std / (2.0 * (n - 1.0)).sqrt()),
        n: n_samples,
    })
}
