use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{HermiteBasis, InputUncertainty, PceError, PcePropagation};
use crate::dataset::DesignPoint;
use crate::linalg::Cholesky;
use crate::Scalar;

/// Least-squares chaos coefficients from `2 × terms` seeded Gaussian samples,
/// solved through the normal equations.
pub fn regress<T: Scalar, F: Fn(&DesignPoint<T>) -> T>(
    f: F,
    center: DesignPoint<T>,
    unc: &InputUncertainty<T>,
    order: usize,
    seed: u64,
) -> Result<PcePropagation<T>, PceError> {
    let basis = HermiteBasis::total_degree(order);
    let p = basis.len();
    let n = 2 * p;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gram = vec![T::zero(); p * p];
    let mut rhs = vec![T::zero(); p];
    for i in 0..n {
        let t1: f64 = StandardNormal.sample(&mut rng);
        let t2: f64 = StandardNormal.sample(&mut rng);
        let t = [T::lit(t1), T::lit(t2)];
        let y = f(&unc.perturb(&center, &t));
        if !y.is_finite() {
            return Err(PceError::NonFiniteSample(i));
        }
        let row = basis.eval(t);
        for a in 0..p {
            rhs[a] = rhs[a] + row[a] * y;
            for b in 0..=a {
                gram[a * p + b] = gram[a * p + b] + row[a] * row[b];
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            gram[b * p + a] = gram[a * p + b];
        }
    }
    let chol = Cholesky::factor(&gram, p).ok_or(PceError::SingularRegression)?;
    let coef = chol.solve(&rhs);
    Ok(PcePropagation::from_coefficients(center, &basis, coef))
}
