//! Non-intrusive Hermite polynomial chaos for Gaussian design scatter.
//!
//! A design point `x` is perturbed as `x̃ = x + σ ⊙ t` with `t ~ N(0, I)`.
//! The response `f(x̃)` is expanded in the orthonormal Hermite basis, so the
//! mean is the constant coefficient and the variance is the sum of squares
//! of the others.

mod hermite;
mod montecarlo;
mod quadrature;
mod regression;

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{format_sig17, DesignPoint};
use crate::Scalar;

pub use hermite::{hermite_value, hermite_values, HermiteBasis};
pub use montecarlo::{mc_propagate, McEstimate};
pub use quadrature::{gauss_hermite_1d, gauss_hermite_rule, QuadratureRule};
pub use regression::regress;

/// Polynomial order used unless configured otherwise.
pub const DEFAULT_ORDER: usize = 3;

#[derive(Debug, Error)]
pub enum PceError {
    #[error("non-finite response at quadrature node {node} (x1={x1}, x2={x2})")]
    NonFiniteNode { node: usize, x1: f64, x2: f64 },
    #[error("non-finite response at Monte Carlo sample {0}")]
    NonFiniteSample(usize),
    #[error("invalid input uncertainty: {0}")]
    InvalidUncertainty(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("regression system is singular")]
    SingularRegression,
}

/// Gaussian scatter on each design variable, stated as a 95% half-width
/// `e_x`; the per-input standard deviation is `e_x / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InputUncertainty<T> {
    e_x: [T; 2],
    sigma: [T; 2],
}

impl<T: Scalar> InputUncertainty<T> {
    /// Same half-width on both inputs.
    pub fn isotropic(e_x: T) -> Result<Self, PceError> {
        Self::from_half_widths([e_x, e_x])
    }

    pub fn from_half_widths(e_x: [T; 2]) -> Result<Self, PceError> {
        if e_x.iter().any(|e| !e.is_finite() || !(*e > T::zero())) {
            return Err(PceError::InvalidUncertainty(format!(
                "half-widths must be positive, got [{}, {}]",
                e_x[0], e_x[1]
            )));
        }
        let two = T::lit(2.0);
        Ok(Self {
            e_x,
            sigma: [e_x[0] / two, e_x[1] / two],
        })
    }

    pub fn from_sigmas(sigma: [T; 2]) -> Result<Self, PceError> {
        let two = T::lit(2.0);
        Self::from_half_widths([sigma[0] * two, sigma[1] * two])
    }

    /// `e_x = 0.05`, `σ = 0.025` on both inputs.
    pub fn manufacturing_default() -> Self {
        Self::isotropic(T::lit(0.05)).expect("positive default")
    }

    pub fn half_widths(&self) -> [T; 2] {
        self.e_x
    }

    pub fn sigmas(&self) -> [T; 2] {
        self.sigma
    }

    /// Maps a standardized node to design space: `center + σ ⊙ t`.
    #[inline]
    pub fn perturb(&self, center: &DesignPoint<T>, t: &[T]) -> DesignPoint<T> {
        DesignPoint::new(center.x1 + self.sigma[0] * t[0], center.x2 + self.sigma[1] * t[1])
    }
}

/// Local chaos expansion of a response around one design point.
#[derive(Debug, Clone, PartialEq)]
pub struct PcePropagation<T> {
    pub center: DesignPoint<T>,
    pub order: usize,
    /// multi-indices `(k1, k2)`, aligned with `coefficients`
    pub terms: Vec<(usize, usize)>,
    pub coefficients: Vec<T>,
    pub mean: T,
    pub std: T,
}

impl<T: Scalar> PcePropagation<T> {
    fn from_coefficients(
        center: DesignPoint<T>,
        basis: &HermiteBasis,
        coefficients: Vec<T>,
    ) -> Self {
        let mean = coefficients[0];
        let var = coefficients[1..].iter().fold(T::zero(), |a, &c| a + c * c);
        Self {
            center,
            order: basis.order(),
            terms: basis.terms().to_vec(),
            coefficients,
            mean,
            std: var.sqrt(),
        }
    }

    /// Evaluates the expansion at a standardized point.
    pub fn eval_standardized(&self, t: [T; 2]) -> T {
        let a = hermite_values(self.order, t[0]);
        let b = hermite_values(self.order, t[1]);
        self.terms
            .iter()
            .zip(&self.coefficients)
            .fold(T::zero(), |acc, (&(i, j), &c)| acc + c * a[i] * b[j])
    }
}

/// Pseudo-spectral projector for a fixed order: a tensor Gauss-Hermite rule
/// with `order + 1` points per axis and the basis tabulated at its nodes.
#[derive(Debug, Clone)]
pub struct Projector<T> {
    basis: HermiteBasis,
    rule: QuadratureRule<T>,
    /// `table[q * terms + k] = w_q φ_k(node_q)`
    table: Vec<T>,
}

impl<T: Scalar> Projector<T> {
    pub fn new(order: usize) -> Self {
        let basis = HermiteBasis::total_degree(order);
        let rule = gauss_hermite_rule::<T>(order + 1, 2);
        let mut table = Vec::with_capacity(rule.len() * basis.len());
        for (node, w) in rule.iter() {
            for phi in basis.eval([node[0], node[1]]) {
                table.push(w * phi);
            }
        }
        Self { basis, rule, table }
    }

    pub fn order(&self) -> usize {
        self.basis.order()
    }

    pub fn basis(&self) -> &HermiteBasis {
        &self.basis
    }

    pub fn rule(&self) -> &QuadratureRule<T> {
        &self.rule
    }

    /// Design-space points where the response must be evaluated.
    pub fn nodes(&self, center: &DesignPoint<T>, unc: &InputUncertainty<T>) -> Vec<DesignPoint<T>> {
        self.rule.iter().map(|(t, _)| unc.perturb(center, t)).collect()
    }

    /// Coefficients from responses already evaluated at [`nodes`](Self::nodes).
    pub fn project_values(
        &self,
        center: DesignPoint<T>,
        unc: &InputUncertainty<T>,
        values: &[T],
    ) -> Result<PcePropagation<T>, PceError> {
        assert_eq!(values.len(), self.rule.len(), "one value per node");
        let p = self.basis.len();
        let mut coef = vec![T::zero(); p];
        for (q, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                let x = unc.perturb(&center, self.rule.node(q));
                return Err(PceError::NonFiniteNode {
                    node: q,
                    x1: x.x1.to_f64_lossy(),
                    x2: x.x2.to_f64_lossy(),
                });
            }
            let row = &self.table[q * p..(q + 1) * p];
            for (c, &t) in coef.iter_mut().zip(row) {
                *c = *c + v * t;
            }
        }
        Ok(PcePropagation::from_coefficients(center, &self.basis, coef))
    }

    pub fn project<F>(
        &self,
        f: F,
        center: DesignPoint<T>,
        unc: &InputUncertainty<T>,
    ) -> Result<PcePropagation<T>, PceError>
    where
        F: Fn(&DesignPoint<T>) -> T,
    {
        let values: Vec<T> = self.nodes(&center, unc).iter().map(&f).collect();
        self.project_values(center, unc, &values)
    }

    /// As [`project`](Self::project) but each node value is `f_mean + ε`,
    /// `ε ~ N(0, f_std²)`, drawn from a generator seeded with `seed`.
    pub fn project_with_noise<F, G>(
        &self,
        f_mean: F,
        f_std: G,
        center: DesignPoint<T>,
        unc: &InputUncertainty<T>,
        seed: u64,
    ) -> Result<PcePropagation<T>, PceError>
    where
        F: Fn(&DesignPoint<T>) -> T,
        G: Fn(&DesignPoint<T>) -> T,
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values = Vec::with_capacity(self.rule.len());
        for (q, x) in self.nodes(&center, unc).iter().enumerate() {
            let z: f64 = StandardNormal.sample(&mut rng);
            let s = f_std(x);
            if !(s >= T::zero()) {
                return Err(PceError::NonFiniteNode {
                    node: q,
                    x1: x.x1.to_f64_lossy(),
                    x2: x.x2.to_f64_lossy(),
                });
            }
            let m = f_mean(x);
            values.push(if s > T::zero() { m + s * T::lit(z) } else { m });
        }
        self.project_values(center, unc, &values)
    }
}

/// Pseudo-spectral projection of `f` around `center` at total degree `order`.
pub fn project<T: Scalar, F: Fn(&DesignPoint<T>) -> T>(
    f: F,
    center: DesignPoint<T>,
    unc: &InputUncertainty<T>,
    order: usize,
) -> Result<PcePropagation<T>, PceError> {
    Projector::new(order).project(f, center, unc)
}

pub fn project_with_noise<T, F, G>(
    f_mean: F,
    f_std: G,
    center: DesignPoint<T>,
    unc: &InputUncertainty<T>,
    order: usize,
    seed: u64,
) -> Result<PcePropagation<T>, PceError>
where
    T: Scalar,
    F: Fn(&DesignPoint<T>) -> T,
    G: Fn(&DesignPoint<T>) -> T,
{
    Projector::new(order).project_with_noise(f_mean, f_std, center, unc, seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow<T> {
    pub order: usize,
    pub mean: T,
    pub std: T,
    /// `|mean − previous mean|`; `None` on the first row
    pub dmean: Option<T>,
    pub dstd: Option<T>,
}

/// One projection per order with successive differences.
pub fn convergence_study<T: Scalar, F: Fn(&DesignPoint<T>) -> T>(
    f: F,
    center: DesignPoint<T>,
    unc: &InputUncertainty<T>,
    orders: &[usize],
) -> Result<Vec<ConvergenceRow<T>>, PceError> {
    if orders.is_empty() || orders[0] < 1 || orders.windows(2).any(|w| w[1] <= w[0]) {
        return Err(PceError::InvalidArgument(
            "orders must be ascending and at least 1".into(),
        ));
    }
    let mut rows: Vec<ConvergenceRow<T>> = Vec::with_capacity(orders.len());
    for &order in orders {
        let p = project(&f, center, unc, order)?;
        let (dmean, dstd) = match rows.last() {
            Some(prev) => (Some((p.mean - prev.mean).abs()), Some((p.std - prev.std).abs())),
            None => (None, None),
        };
        rows.push(ConvergenceRow {
            order,
            mean: p.mean,
            std: p.std,
            dmean,
            dstd,
        });
    }
    Ok(rows)
}

/// CSV `order,mean,std,dmean,dstd`; the first row leaves the differences empty.
pub fn write_convergence_csv<T: Scalar, W: Write>(
    mut out: W,
    rows: &[ConvergenceRow<T>],
) -> std::io::Result<()> {
    writeln!(out, "order,mean,std,dmean,dstd")?;
    let opt = |v: Option<T>| v.map(|x| format_sig17(x.to_f64_lossy())).unwrap_or_default();
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.order,
            format_sig17(r.mean.to_f64_lossy()),
            format_sig17(r.std.to_f64_lossy()),
            opt(r.dmean),
            opt(r.dstd)
        )?;
    }
    Ok(())
}
