//! Surrogate-based robust design optimization.
//!
//! The pipeline: fit one Gaussian process per objective to normalized
//! simulation samples ([`gpr`]), push Gaussian manufacturing scatter on the
//! design variables through the surrogate means with Hermite polynomial chaos
//! ([`pce`]), and optimize the resulting mean / standard-deviation models
//! ([`robust`]).
//!
//! Everything numerical is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix `f64`, which is what the tolerances in this crate are
//! calibrated for.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::type_complexity)]

pub mod dataset;
pub mod gpr;
pub mod grid;
pub mod linalg;
pub mod optim;
pub mod pce;
pub mod robust;
mod scalar;

pub use scalar::Scalar;

pub type DesignPoint = dataset::DesignPoint<f64>;
pub type SampleRecord = dataset::SampleRecord<f64>;
pub type NormalizationMap = dataset::NormalizationMap<f64>;
pub type KernelParams = gpr::KernelParams<f64>;
pub type GprModel = gpr::GprModel<f64>;
pub type Prediction = gpr::Prediction<f64>;
pub type InputUncertainty = pce::InputUncertainty<f64>;
pub type QuadratureRule = pce::QuadratureRule<f64>;
pub type PcePropagation = pce::PcePropagation<f64>;
pub type ProbabilisticSurrogate = robust::ProbabilisticSurrogate<f64>;
pub type RobustOptimum = robust::RobustOptimum<f64>;
pub type ParetoPoint = robust::ParetoPoint<f64>;
pub type ProblemSpec = robust::ProblemSpec<f64>;

pub type DesignPointF32 = dataset::DesignPoint<f32>;
pub type GprModelF32 = gpr::GprModel<f32>;
pub type PcePropagationF32 = pce::PcePropagation<f32>;
