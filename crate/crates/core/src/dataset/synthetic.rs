//! Closed-form stand-in for the conjugate heat transfer simulator.
//!
//! `y1` (pressure drop) decays steeply with channel height `x2` and depends
//! only weakly on width `x1`. `y2` (temperature deviation) is a bowl in
//! `s = x1 + x2`, `d = x1 - x2` plus a Gaussian bump, so it is exactly
//! symmetric under `x1 <-> x2`.

use super::{generate_design, DataError, DesignPoint, SampleRecord};
use crate::Scalar;

pub fn synthetic_cht<T: Scalar>(p: DesignPoint<T>) -> Result<(T, T), DataError> {
    if !p.is_finite() {
        return Err(DataError::NonFinite { what: "synthetic input" });
    }
    let c = T::lit;
    let (x1, x2) = (p.x1, p.x2);

    let y1 = c(0.06) + c(0.88) * (c(-3.0) * x2).exp() * (T::one() + c(0.12) * (T::one() - x1)) / c(1.12);

    let s = x1 + x2;
    let d = x1 - x2;
    let hx = x1 - c(0.5);
    let hy = x2 - c(0.5);
    let bump = c(0.05) * (c(-4.0) * (hx * hx + hy * hy)).exp();
    let y2 = c(0.1) + c(0.3) * (s - c(0.6)) * (s - c(0.6)) + c(0.25) * d * d + bump;

    Ok((y1, y2))
}

/// Standard training set: design from [`generate_design`] evaluated with
/// [`synthetic_cht`].
pub fn synthetic_dataset<T: Scalar>(
    n_boundary: usize,
    n_interior: usize,
    seed: u64,
) -> Result<Vec<SampleRecord<T>>, DataError> {
    generate_design(n_boundary, n_interior, seed)?
        .into_iter()
        .map(|p| {
            let (y1, y2) = synthetic_cht(p)?;
            SampleRecord::new(p, y1, y2)
        })
        .collect()
}
