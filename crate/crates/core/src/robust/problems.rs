use std::io::Write;

use rayon::prelude::*;

use super::{
    constrained_minimize, Diagnostics, ParetoPoint, ProblemKind, ProblemSpec, RobustOptimum, SolverOptions,
    StatsModel,
};
use crate::dataset::{format_sig17, DesignPoint};
use crate::pce::PceError;
use crate::Scalar;

/// Solves one formulation over `[0, 1]²`. An infeasible problem is not an
/// error: the least-violating point comes back with `feasible = false`.
pub fn solve<T: Scalar, M: StatsModel<T>>(
    model: &M,
    spec: &ProblemSpec<T>,
    opts: &SolverOptions<T>,
) -> Result<RobustOptimum<T>, PceError> {
    solve_from(model, spec, opts, &[])
}

fn solve_from<T: Scalar, M: StatsModel<T>>(
    model: &M,
    spec: &ProblemSpec<T>,
    opts: &SolverOptions<T>,
    warm: &[DesignPoint<T>],
) -> Result<RobustOptimum<T>, PceError> {
    spec.validate()?;
    let eval = |x: &[T]| {
        let s = model.stats(&DesignPoint::new(x[0], x[1])).ok()?;
        s.is_finite().then(|| (spec.objective(&s), spec.constraints(&s)))
    };
    let warm: Vec<Vec<T>> = warm.iter().map(|p| vec![p.x1, p.x2]).collect();
    let (lo, hi) = ([T::zero(), T::zero()], [T::one(), T::one()]);
    let r = constrained_minimize(eval, &lo, &hi, &warm, opts);
    let x_star = DesignPoint::new(r.x[0], r.x[1]);
    // surfaces the model error when nothing in the box could be evaluated
    let stats = model.stats(&x_star)?;
    Ok(RobustOptimum {
        x_star,
        objective_value: spec.objective(&stats),
        stats,
        feasible: r.feasible,
        diagnostics: Diagnostics {
            starts: r.starts,
            evaluations: r.evaluations,
            max_violation: r.max_violation,
        },
    })
}

/// `min ω μ₁ + (1 − ω) μ₂` subject to `σᵢ ≤ σ̄ᵢ` when bounds are given.
pub fn solve_problem1<T: Scalar, M: StatsModel<T>>(
    model: &M,
    omega: T,
    sigma_bounds: Option<(T, T)>,
    opts: &SolverOptions<T>,
) -> Result<RobustOptimum<T>, PceError> {
    solve(model, &ProblemSpec::weighted(omega, sigma_bounds)?, opts)
}

/// `min μ₂ + k σ₂` subject to `μ₁ + k σ₁ ≤ f̄₁`.
pub fn solve_problem2<T: Scalar, M: StatsModel<T>>(
    model: &M,
    f1_bar: Option<T>,
    k_sigma: T,
    opts: &SolverOptions<T>,
) -> Result<RobustOptimum<T>, PceError> {
    solve(model, &ProblemSpec::worst_case_f2(f1_bar, k_sigma)?, opts)
}

/// `min μ₁ + k σ₁` subject to `μ₂ + k σ₂ ≤ f̄₂`.
pub fn solve_problem3<T: Scalar, M: StatsModel<T>>(
    model: &M,
    f2_bar: Option<T>,
    k_sigma: T,
    opts: &SolverOptions<T>,
) -> Result<RobustOptimum<T>, PceError> {
    solve(model, &ProblemSpec::worst_case_f1(f2_bar, k_sigma)?, opts)
}

/// One solve of a sweep, keyed by the swept parameter (`ω` or the bound).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow<T> {
    pub parameter: T,
    pub optimum: RobustOptimum<T>,
}

pub type BoundRow<T> = SweepRow<T>;

#[derive(Debug, Clone, PartialEq)]
pub struct ParetoFront<T> {
    /// non-dominated feasible solves, `μ₁` descending
    pub front: Vec<SweepRow<T>>,
    /// every solve in input order
    pub solves: Vec<SweepRow<T>>,
}

impl<T: Scalar> ParetoFront<T> {
    pub fn points(&self) -> Vec<ParetoPoint<T>> {
        self.front.iter().map(to_point).collect()
    }
}

fn to_point<T: Scalar>(r: &SweepRow<T>) -> ParetoPoint<T> {
    let s = &r.optimum.stats;
    ParetoPoint {
        omega: r.parameter,
        x_star: r.optimum.x_star,
        mu1: s.mu1,
        mu2: s.mu2,
        sigma1: s.sigma1,
        sigma2: s.sigma2,
    }
}

/// Indices of the non-dominated pairs, duplicates collapsed onto the first
/// occurrence, ordered by the first coordinate descending.
fn front_indices<T: Scalar>(mu: &[(T, T)]) -> Vec<usize> {
    let eps = T::lit(1e-12);
    let dominates = |a: (T, T), b: (T, T)| a.0 <= b.0 && a.1 <= b.1 && (a.0 < b.0 || a.1 < b.1);
    let same = |a: (T, T), b: (T, T)| (a.0 - b.0).abs() <= eps && (a.1 - b.1).abs() <= eps;
    let mut keep: Vec<usize> = (0..mu.len())
        .filter(|&i| !mu.iter().any(|&q| dominates(q, mu[i])))
        .filter(|&i| !(0..i).any(|j| same(mu[j], mu[i])))
        .collect();
    keep.sort_by(|&a, &b| {
        mu[b].0
            .partial_cmp(&mu[a].0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(mu[a].1.partial_cmp(&mu[b].1).unwrap_or(std::cmp::Ordering::Equal))
    });
    keep
}

/// Non-dominated subset in `(μ₁, μ₂)`, ordered by `μ₁` descending.
pub fn non_dominated<T: Scalar>(points: &[ParetoPoint<T>]) -> Vec<ParetoPoint<T>> {
    let mu: Vec<(T, T)> = points.iter().map(|p| (p.mu1, p.mu2)).collect();
    front_indices(&mu).into_iter().map(|i| points[i]).collect()
}

/// Weighted problem at each `ω`, then the non-dominated feasible subset.
pub fn pareto_sweep<T: Scalar, M: StatsModel<T>>(
    model: &M,
    omegas: &[T],
    sigma_bounds: Option<(T, T)>,
    opts: &SolverOptions<T>,
) -> Result<ParetoFront<T>, PceError> {
    let specs = omegas
        .iter()
        .map(|&w| ProblemSpec::weighted(w, sigma_bounds))
        .collect::<Result<Vec<_>, _>>()?;
    let solves = specs
        .par_iter()
        .map(|spec| {
            solve(model, spec, opts).map(|optimum| SweepRow {
                parameter: spec.omega,
                optimum,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let feasible: Vec<&SweepRow<T>> = solves.iter().filter(|r| r.optimum.feasible).collect();
    let mu: Vec<(T, T)> = feasible.iter().map(|r| (r.optimum.stats.mu1, r.optimum.stats.mu2)).collect();
    let front = front_indices(&mu).into_iter().map(|i| *feasible[i]).collect();
    Ok(ParetoFront { front, solves })
}

/// Worst-case problem for each bound, loosest last. Bounds must ascend;
/// each solve is warm-started from the previous feasible optimum, so the
/// optimal value is non-increasing along the sweep.
pub fn bound_sweep<T: Scalar, M: StatsModel<T>>(
    model: &M,
    kind: ProblemKind,
    bounds: &[T],
    k_sigma: T,
    opts: &SolverOptions<T>,
) -> Result<Vec<BoundRow<T>>, PceError> {
    if kind == ProblemKind::Weighted {
        return Err(PceError::InvalidArgument(
            "bound sweeps apply to the worst-case problems".into(),
        ));
    }
    if bounds.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(PceError::InvalidArgument("bounds must be strictly ascending".into()));
    }
    let mut rows = Vec::with_capacity(bounds.len());
    let mut warm: Vec<DesignPoint<T>> = Vec::new();
    for &b in bounds {
        let spec = if kind == ProblemKind::WorstCaseF2 {
            ProblemSpec::worst_case_f2(Some(b), k_sigma)?
        } else {
            ProblemSpec::worst_case_f1(Some(b), k_sigma)?
        };
        let optimum = solve_from(model, &spec, opts, &warm)?;
        if optimum.feasible {
            warm = vec![optimum.x_star];
        }
        rows.push(SweepRow { parameter: b, optimum });
    }
    Ok(rows)
}

/// `omega_or_bound,x1,x2,mu1,sigma1,mu2,sigma2,objective,feasible`, values
/// at 17 significant digits.
pub fn write_sweep_csv<T: Scalar, W: Write>(mut out: W, rows: &[SweepRow<T>]) -> std::io::Result<()> {
    writeln!(out, "omega_or_bound,x1,x2,mu1,sigma1,mu2,sigma2,objective,feasible")?;
    for r in rows {
        let o = &r.optimum;
        let v = [
            r.parameter,
            o.x_star.x1,
            o.x_star.x2,
            o.stats.mu1,
            o.stats.sigma1,
            o.stats.mu2,
            o.stats.sigma2,
            o.objective_value,
        ];
        let cells: Vec<String> = v.iter().map(|x| format_sig17(x.to_f64_lossy())).collect();
        writeln!(out, "{},{}", cells.join(","), o.feasible)?;
    }
    Ok(())
}
