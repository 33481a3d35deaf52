use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DataError, DesignPoint};
use crate::Scalar;

/// Training design on the unit square: `n_boundary` points evenly spaced
/// along the perimeter (corners included once each) followed by
/// `n_interior` uniform points strictly inside, reproducible from `seed`.
///
/// The perimeter walk starts at `(0, 0)` and runs counter-clockwise.
pub fn generate_design<T: Scalar>(
    n_boundary: usize,
    n_interior: usize,
    seed: u64,
) -> Result<Vec<DesignPoint<T>>, DataError> {
    if n_boundary < 4 || !n_boundary.is_multiple_of(4) {
        return Err(DataError::InvalidArgument(format!(
            "n_boundary must be a positive multiple of 4, got {n_boundary}"
        )));
    }
    let per_side = n_boundary / 4;
    let mut points = Vec::with_capacity(n_boundary + n_interior);
    for side in 0..4 {
        for k in 0..per_side {
            let t = k as f64 / per_side as f64;
            let (a, b) = match side {
                0 => (t, 0.0),
                1 => (1.0, t),
                2 => (1.0 - t, 1.0),
                _ => (0.0, 1.0 - t),
            };
            points.push(DesignPoint::new(T::lit(a), T::lit(b)));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut open_unit = || loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    };
    for _ in 0..n_interior {
        let a = open_unit();
        let b = open_unit();
        points.push(DesignPoint::new(T::lit(a), T::lit(b)));
    }
    Ok(points)
}
