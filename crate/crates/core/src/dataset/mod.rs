//! Design points, sample records, normalization and the synthetic simulator.
//!
//! All downstream modules work in normalized coordinates: design variables
//! live in `[0, 1]²` (the optimization box) and responses are scaled by the
//! observed or declared output ranges.

mod csv;
mod design;
mod synthetic;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Scalar;

pub use self::csv::{
    format_sig17, load_samples, load_samples_with, parse_samples, write_samples, BoundsPolicy,
};
pub use self::design::generate_design;
pub use self::synthetic::{synthetic_cht, synthetic_dataset};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },
    #[error("invalid bounds for {name}: max ({hi}) must exceed min ({lo})")]
    InvalidBounds { name: &'static str, lo: f64, hi: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing column `{0}` in header")]
    MissingColumn(&'static str),
    #[error("line {line} (row {row}): {msg}")]
    Row { line: usize, row: usize, msg: String },
    #[error("line {line} (row {row}): duplicate design point (first seen on line {first})")]
    Duplicate { line: usize, row: usize, first: usize },
}

/// A point in the normalized 2-D design space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DesignPoint<T> {
    pub x1: T,
    pub x2: T,
}

impl<T: Scalar> DesignPoint<T> {
    pub fn new(x1: T, x2: T) -> Self {
        Self { x1, x2 }
    }

    pub fn from_array(a: [T; 2]) -> Self {
        Self { x1: a[0], x2: a[1] }
    }

    pub fn to_array(self) -> [T; 2] {
        [self.x1, self.x2]
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }

    pub fn dist2(&self, other: &Self) -> T {
        let a = self.x1 - other.x1;
        let b = self.x2 - other.x2;
        a * a + b * b
    }

    /// Mirror image across the diagonal `x1 = x2`.
    pub fn swapped(self) -> Self {
        Self { x1: self.x2, x2: self.x1 }
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.x1 - other.x1).abs().max((self.x2 - other.x2).abs())
    }
}

/// Closed interval `[lo, hi]` with `hi > lo`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> Bounds<T> {
    pub fn new(name: &'static str, lo: T, hi: T) -> Result<Self, DataError> {
        if !lo.is_finite() || !hi.is_finite() || !(hi > lo) {
            return Err(DataError::InvalidBounds {
                name,
                lo: lo.to_f64_lossy(),
                hi: hi.to_f64_lossy(),
            });
        }
        Ok(Self { lo, hi })
    }

    #[inline]
    pub fn normalize(&self, v: T) -> T {
        (v - self.lo) / (self.hi - self.lo)
    }

    #[inline]
    pub fn denormalize(&self, u: T) -> T {
        self.lo + u * (self.hi - self.lo)
    }
}

/// Affine maps between physical units and the normalized `[0, 1]` scale,
/// one per design variable and per response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationMap<T> {
    pub inputs: [Bounds<T>; 2],
    pub outputs: [Bounds<T>; 2],
}

impl<T: Scalar> NormalizationMap<T> {
    pub fn new(inputs: [Bounds<T>; 2], outputs: [Bounds<T>; 2]) -> Self {
        Self { inputs, outputs }
    }

    /// Channel width `[0.015, 0.5]` mm, height `[0.05, 0.15]` mm, pressure
    /// drop `[50.87, 1437]` Pa and temperature deviation `[12.87, 16.29]` °C.
    pub fn channel_default() -> Self {
        let b = |name, lo, hi| Bounds::new(name, T::lit(lo), T::lit(hi)).expect("valid default");
        Self {
            inputs: [b("x1", 0.015, 0.5), b("x2", 0.05, 0.15)],
            outputs: [b("y1", 50.87, 1437.0), b("y2", 12.87, 16.29)],
        }
    }

    /// The identity map (all bounds `[0, 1]`).
    pub fn unit() -> Self {
        let b = |name| Bounds::new(name, T::zero(), T::one()).expect("valid unit");
        Self {
            inputs: [b("x1"), b("x2")],
            outputs: [b("y1"), b("y2")],
        }
    }

    /// Normalizes a physical `(x1, x2, y1, y2)` vector.
    pub fn normalize(&self, values: [T; 4]) -> Result<[T; 4], DataError> {
        check_finite(&values, "physical values")?;
        Ok([
            self.inputs[0].normalize(values[0]),
            self.inputs[1].normalize(values[1]),
            self.outputs[0].normalize(values[2]),
            self.outputs[1].normalize(values[3]),
        ])
    }

    /// Inverse of [`normalize`](Self::normalize).
    pub fn denormalize(&self, values: [T; 4]) -> Result<[T; 4], DataError> {
        check_finite(&values, "normalized values")?;
        Ok([
            self.inputs[0].denormalize(values[0]),
            self.inputs[1].denormalize(values[1]),
            self.outputs[0].denormalize(values[2]),
            self.outputs[1].denormalize(values[3]),
        ])
    }

    pub fn normalize_point(&self, physical: [T; 2]) -> Result<DesignPoint<T>, DataError> {
        check_finite(&physical, "physical design point")?;
        Ok(DesignPoint::new(
            self.inputs[0].normalize(physical[0]),
            self.inputs[1].normalize(physical[1]),
        ))
    }

    pub fn denormalize_point(&self, p: DesignPoint<T>) -> Result<[T; 2], DataError> {
        check_finite(&p.to_array(), "design point")?;
        Ok([
            self.inputs[0].denormalize(p.x1),
            self.inputs[1].denormalize(p.x2),
        ])
    }

    pub fn denormalize_record(&self, r: &SampleRecord<T>) -> Result<[T; 4], DataError> {
        self.denormalize([r.point.x1, r.point.x2, r.y1, r.y2])
    }
}

fn check_finite<T: Scalar>(v: &[T], what: &'static str) -> Result<(), DataError> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(DataError::NonFinite { what })
    }
}

/// One simulation outcome in normalized units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord<T> {
    pub point: DesignPoint<T>,
    /// pressure drop
    pub y1: T,
    /// temperature deviation
    pub y2: T,
}

impl<T: Scalar> SampleRecord<T> {
    pub fn new(point: DesignPoint<T>, y1: T, y2: T) -> Result<Self, DataError> {
        if !point.is_finite() || !y1.is_finite() || !y2.is_finite() {
            return Err(DataError::NonFinite { what: "sample record" });
        }
        Ok(Self { point, y1, y2 })
    }
}

/// Splits records into the column views the regression code consumes.
pub fn split_columns<T: Scalar>(
    records: &[SampleRecord<T>],
) -> (Vec<DesignPoint<T>>, Vec<T>, Vec<T>) {
    let points = records.iter().map(|r| r.point).collect();
    let y1 = records.iter().map(|r| r.y1).collect();
    let y2 = records.iter().map(|r| r.y2).collect();
    (points, y1, y2)
}
