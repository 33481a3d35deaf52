//! Robust design problems on the probabilistic surrogate.
//!
//! The surrogate maps a design `x` to `(μ₁, σ₁, μ₂, σ₂)`: each GPR mean is
//! propagated through a Hermite chaos expansion of the input scatter. Three
//! formulations are solved over the unit box:
//!
//! * weighted: minimize `ω μ₁ + (1 − ω) μ₂` subject to `σ₁ ≤ σ̄₁`, `σ₂ ≤ σ̄₂`;
//! * worst case of `f₂`: minimize `μ₂ + k σ₂` subject to `μ₁ + k σ₁ ≤ f̄₁`;
//! * worst case of `f₁`: the mirror image.

mod problems;
mod solver;

use serde::{Deserialize, Serialize};

use crate::dataset::DesignPoint;
use crate::dataset::{split_columns, SampleRecord};
use crate::gpr::{GprError, GprModel, KernelParams};
use crate::pce::{InputUncertainty, PceError, PcePropagation, Projector};
use crate::Scalar;

pub use problems::{
    bound_sweep, non_dominated, pareto_sweep, solve, solve_problem1, solve_problem2,
    solve_problem3, write_sweep_csv, BoundRow, ParetoFront, SweepRow,
};
pub use solver::{constrained_minimize, ConstrainedResult, SolverOptions};

/// Confidence multiplier for the two-sided 95% worst case `μ + 2σ`.
pub const DEFAULT_K_SIGMA: f64 = 2.0;

/// Mean and standard deviation of both objectives at one design.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SurrogateStats<T> {
    pub mu1: T,
    pub sigma1: T,
    pub mu2: T,
    pub sigma2: T,
}

impl<T: Scalar> SurrogateStats<T> {
    pub fn is_finite(&self) -> bool {
        self.mu1.is_finite() && self.sigma1.is_finite() && self.mu2.is_finite() && self.sigma2.is_finite()
    }
}

/// Anything that yields objective statistics at a design point.
pub trait StatsModel<T>: Sync {
    fn stats(&self, x: &DesignPoint<T>) -> Result<SurrogateStats<T>, PceError>;
}

/// GPR means for both objectives combined with chaos propagation of the
/// input scatter. Immutable after construction.
#[derive(Debug, Clone)]
pub struct ProbabilisticSurrogate<T> {
    pub gpr_f1: GprModel<T>,
    pub gpr_f2: GprModel<T>,
    pub unc: InputUncertainty<T>,
    projector: Projector<T>,
}

impl<T: Scalar> ProbabilisticSurrogate<T> {
    pub fn new(gpr_f1: GprModel<T>, gpr_f2: GprModel<T>, unc: InputUncertainty<T>, order: usize) -> Self {
        Self {
            gpr_f1,
            gpr_f2,
            unc,
            projector: Projector::new(order),
        }
    }

    /// Fits both objectives with the same kernel parameters.
    pub fn from_samples(
        records: &[SampleRecord<T>],
        params: KernelParams<T>,
        unc: InputUncertainty<T>,
        order: usize,
    ) -> Result<Self, GprError> {
        let (points, y1, y2) = split_columns(records);
        let f1 = GprModel::fit(&points, &y1, params)?;
        let f2 = GprModel::fit(&points, &y2, params)?;
        Ok(Self::new(f1, f2, unc, order))
    }

    pub fn order(&self) -> usize {
        self.projector.order()
    }

    pub fn propagate_f1(&self, x: &DesignPoint<T>) -> Result<PcePropagation<T>, PceError> {
        self.projector.project(|p| self.gpr_f1.predict_mean(p), *x, &self.unc)
    }

    pub fn propagate_f2(&self, x: &DesignPoint<T>) -> Result<PcePropagation<T>, PceError> {
        self.projector.project(|p| self.gpr_f2.predict_mean(p), *x, &self.unc)
    }

    pub fn evaluate(&self, x: &DesignPoint<T>) -> Result<SurrogateStats<T>, PceError> {
        let nodes = self.projector.nodes(x, &self.unc);
        let v1: Vec<T> = nodes.iter().map(|p| self.gpr_f1.predict_mean(p)).collect();
        let v2: Vec<T> = nodes.iter().map(|p| self.gpr_f2.predict_mean(p)).collect();
        let a = self.projector.project_values(*x, &self.unc, &v1)?;
        let b = self.projector.project_values(*x, &self.unc, &v2)?;
        Ok(SurrogateStats {
            mu1: a.mean,
            sigma1: a.std,
            mu2: b.mean,
            sigma2: b.std,
        })
    }
}

impl<T: Scalar> StatsModel<T> for ProbabilisticSurrogate<T> {
    fn stats(&self, x: &DesignPoint<T>) -> Result<SurrogateStats<T>, PceError> {
        self.evaluate(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    /// `ω μ₁ + (1 − ω) μ₂` with optional σ bounds
    Weighted,
    /// `μ₂ + k σ₂` subject to `μ₁ + k σ₁ ≤ f̄₁`
    WorstCaseF2,
    /// `μ₁ + k σ₁` subject to `μ₂ + k σ₂ ≤ f̄₂`
    WorstCaseF1,
}

/// One robust formulation with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec<T> {
    pub kind: ProblemKind,
    pub omega: T,
    pub sigma_bounds: Option<(T, T)>,
    /// upper bound on the constrained objective's worst case; `None` = unconstrained
    pub f_bar: Option<T>,
    pub k_sigma: T,
}

impl<T: Scalar> ProblemSpec<T> {
    pub fn weighted(omega: T, sigma_bounds: Option<(T, T)>) -> Result<Self, PceError> {
        let s = Self {
            kind: ProblemKind::Weighted,
            omega,
            sigma_bounds,
            f_bar: None,
            k_sigma: T::lit(DEFAULT_K_SIGMA),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn worst_case_f2(f1_bar: Option<T>, k_sigma: T) -> Result<Self, PceError> {
        Self::worst_case(ProblemKind::WorstCaseF2, f1_bar, k_sigma)
    }

    pub fn worst_case_f1(f2_bar: Option<T>, k_sigma: T) -> Result<Self, PceError> {
        Self::worst_case(ProblemKind::WorstCaseF1, f2_bar, k_sigma)
    }

    fn worst_case(kind: ProblemKind, f_bar: Option<T>, k_sigma: T) -> Result<Self, PceError> {
        let s = Self {
            kind,
            omega: T::zero(),
            sigma_bounds: None,
            f_bar,
            k_sigma,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), PceError> {
        let bad = |m: String| Err(PceError::InvalidArgument(m));
        if !(self.omega >= T::zero() && self.omega <= T::one()) {
            return bad(format!("omega must lie in [0, 1], got {}", self.omega));
        }
        if let Some((a, b)) = self.sigma_bounds {
            if !(a > T::zero()) || !(b > T::zero()) {
                return bad(format!("sigma bounds must be positive, got ({a}, {b})"));
            }
        }
        if let Some(f) = self.f_bar {
            if !(f > T::zero()) {
                return bad(format!("upper bound must be positive, got {f}"));
            }
        }
        if !(self.k_sigma >= T::zero()) || !self.k_sigma.is_finite() {
            return bad(format!("k_sigma must be finite and non-negative, got {}", self.k_sigma));
        }
        Ok(())
    }

    pub fn constraint_count(&self) -> usize {
        match self.kind {
            ProblemKind::Weighted => {
                if self.sigma_bounds.is_some() {
                    2
                } else {
                    0
                }
            }
            _ => usize::from(self.f_bar.map(|f| f.is_finite()).unwrap_or(false)),
        }
    }

    pub fn objective(&self, s: &SurrogateStats<T>) -> T {
        match self.kind {
            ProblemKind::Weighted => self.omega * s.mu1 + (T::one() - self.omega) * s.mu2,
            ProblemKind::WorstCaseF2 => s.mu2 + self.k_sigma * s.sigma2,
            ProblemKind::WorstCaseF1 => s.mu1 + self.k_sigma * s.sigma1,
        }
    }

    /// Constraint values in `g ≤ 0` form.
    pub fn constraints(&self, s: &SurrogateStats<T>) -> Vec<T> {
        match self.kind {
            ProblemKind::Weighted => match self.sigma_bounds {
                Some((b1, b2)) => vec![s.sigma1 - b1, s.sigma2 - b2],
                None => Vec::new(),
            },
            ProblemKind::WorstCaseF2 => match self.f_bar {
                Some(f) if f.is_finite() => vec![s.mu1 + self.k_sigma * s.sigma1 - f],
                _ => Vec::new(),
            },
            ProblemKind::WorstCaseF1 => match self.f_bar {
                Some(f) if f.is_finite() => vec![s.mu2 + self.k_sigma * s.sigma2 - f],
                _ => Vec::new(),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Diagnostics<T> {
    pub starts: usize,
    pub evaluations: usize,
    /// largest constraint value at the reported point (≤ 0 when satisfied)
    pub max_violation: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustOptimum<T> {
    pub x_star: DesignPoint<T>,
    pub objective_value: T,
    pub stats: SurrogateStats<T>,
    pub feasible: bool,
    pub diagnostics: Diagnostics<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParetoPoint<T> {
    pub omega: T,
    pub x_star: DesignPoint<T>,
    pub mu1: T,
    pub mu2: T,
    pub sigma1: T,
    pub sigma2: T,
}
