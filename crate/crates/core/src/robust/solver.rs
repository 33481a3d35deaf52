//! Multi-start augmented-Lagrangian minimization in a box.

use rayon::prelude::*;

use crate::optim::{halton_points, nelder_mead, NelderMeadOptions};
use crate::Scalar;

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions<T> {
    /// low-discrepancy starts, in addition to any caller-supplied ones
    pub starts: usize,
    pub seed: u64,
    /// `g(x) ≤ feasibility_tol` counts as satisfied
    pub feasibility_tol: T,
    /// objective values closer than this are tied; the smaller `x` wins
    pub tie_tol: T,
    pub max_outer: usize,
    pub local: NelderMeadOptions<T>,
}

impl<T: Scalar> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            starts: 16,
            seed: 0,
            feasibility_tol: T::lit(1e-9),
            tie_tol: T::lit(1e-9),
            max_outer: 30,
            local: NelderMeadOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedResult<T> {
    pub x: Vec<T>,
    pub value: T,
    /// largest constraint value at `x`; zero when there are no constraints
    pub max_violation: T,
    pub feasible: bool,
    pub evaluations: usize,
    pub starts: usize,
}

#[derive(Debug, Clone)]
struct Candidate<T> {
    x: Vec<T>,
    value: T,
    violation: T,
}

/// Best feasible and least-violating points seen during one local solve.
struct Tracker<T> {
    tol: T,
    best_feasible: Option<Candidate<T>>,
    least_violating: Option<Candidate<T>>,
    evals: usize,
}

impl<T: Scalar> Tracker<T> {
    fn new(tol: T) -> Self {
        Self {
            tol,
            best_feasible: None,
            least_violating: None,
            evals: 0,
        }
    }

    fn record(&mut self, x: &[T], value: T, g: &[T]) {
        self.evals += 1;
        if !value.is_finite() || g.iter().any(|v| !v.is_finite()) {
            return;
        }
        let violation = max_violation(g);
        let cand = || Candidate {
            x: x.to_vec(),
            value,
            violation,
        };
        if violation <= self.tol {
            if self.best_feasible.as_ref().is_none_or(|b| value < b.value) {
                self.best_feasible = Some(cand());
            }
        } else if self.least_violating.as_ref().is_none_or(|b| {
            violation < b.violation || (violation == b.violation && value < b.value)
        }) {
            self.least_violating = Some(cand());
        }
    }
}

fn max_violation<T: Scalar>(g: &[T]) -> T {
    g.iter().fold(None, |m: Option<T>, &v| Some(m.map_or(v, |m| m.max(v)))).unwrap_or_else(T::zero)
}

/// Minimizes `f(x).0` subject to `f(x).1[i] ≤ 0` inside `[lower, upper]`.
///
/// `f` returns `None` where the model cannot be evaluated; such points are
/// never selected. Each start runs an augmented-Lagrangian outer loop with a
/// projected Nelder-Mead inner solve, and every evaluated point is a
/// candidate. Starts are independent and run in parallel; the result does not
/// depend on the thread count.
pub fn constrained_minimize<T, F>(
    f: F,
    lower: &[T],
    upper: &[T],
    extra_starts: &[Vec<T>],
    opts: &SolverOptions<T>,
) -> ConstrainedResult<T>
where
    T: Scalar,
    F: Fn(&[T]) -> Option<(T, Vec<T>)> + Sync,
{
    let dim = lower.len();
    assert_eq!(upper.len(), dim);
    let mut starts: Vec<Vec<T>> = extra_starts.to_vec();
    for h in halton_points(opts.starts, dim, opts.seed) {
        starts.push(
            h.iter()
                .enumerate()
                .map(|(i, &u)| lower[i] + (upper[i] - lower[i]) * T::lit(u))
                .collect(),
        );
    }
    let n_starts = starts.len();
    let runs: Vec<(Option<Candidate<T>>, Option<Candidate<T>>, usize)> = starts
        .par_iter()
        .map(|x0| local_solve(&f, x0, lower, upper, opts))
        .collect();

    let evaluations = runs.iter().map(|r| r.2).sum();
    let mut best: Option<Candidate<T>> = None;
    for c in runs.iter().filter_map(|r| r.0.as_ref()) {
        best = Some(match best {
            None => c.clone(),
            Some(b) => {
                let tied = (c.value - b.value).abs() <= opts.tie_tol;
                if (tied && lex_less(&c.x, &b.x)) || (!tied && c.value < b.value) {
                    c.clone()
                } else {
                    b
                }
            }
        });
    }
    let feasible = best.is_some();
    if best.is_none() {
        for c in runs.iter().filter_map(|r| r.1.as_ref()) {
            if best.as_ref().is_none_or(|b| c.violation < b.violation) {
                best = Some(c.clone());
            }
        }
    }
    match best {
        Some(c) => ConstrainedResult {
            x: c.x,
            value: c.value,
            max_violation: c.violation,
            feasible,
            evaluations,
            starts: n_starts,
        },
        None => ConstrainedResult {
            x: lower.to_vec(),
            value: T::infinity(),
            max_violation: T::infinity(),
            feasible: false,
            evaluations,
            starts: n_starts,
        },
    }
}

fn lex_less<T: Scalar>(a: &[T], b: &[T]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

type LocalOutcome<T> = (Option<Candidate<T>>, Option<Candidate<T>>, usize);

fn local_solve<T, F>(f: &F, x0: &[T], lower: &[T], upper: &[T], opts: &SolverOptions<T>) -> LocalOutcome<T>
where
    T: Scalar,
    F: Fn(&[T]) -> Option<(T, Vec<T>)>,
{
    let mut tracker = Tracker::new(opts.feasibility_tol);
    let m = match f(x0) {
        Some((v, g)) => {
            tracker.record(x0, v, &g);
            g.len()
        }
        None => {
            // probe the box centre for the constraint count
            let c: Vec<T> = lower.iter().zip(upper).map(|(&a, &b)| (a + b) * T::lit(0.5)).collect();
            f(&c).map_or(0, |(_, g)| g.len())
        }
    };

    if m == 0 {
        nelder_mead(
            |x| match f(x) {
                Some((v, g)) => {
                    tracker.record(x, v, &g);
                    v
                }
                None => T::infinity(),
            },
            x0,
            lower,
            upper,
            &opts.local,
        );
        return (tracker.best_feasible, tracker.least_violating, tracker.evals);
    }

    let half = T::lit(0.5);
    let mut lambda = vec![T::zero(); m];
    let mut rho = T::lit(10.0);
    let rho_max = T::lit(1e9);
    let mut x = x0.to_vec();
    let mut prev_violation = T::infinity();
    let mut local = opts.local;
    for outer in 0..opts.max_outer {
        let lam = lambda.clone();
        let r = rho;
        let min = nelder_mead(
            |y| match f(y) {
                Some((v, g)) => {
                    tracker.record(y, v, &g);
                    let mut pen = T::zero();
                    for (gi, li) in g.iter().zip(&lam) {
                        let s = (*li + r * *gi).max(T::zero());
                        pen = pen + (s * s - *li * *li) * half / r;
                    }
                    v + pen
                }
                None => T::infinity(),
            },
            &x,
            lower,
            upper,
            &local,
        );
        let moved = min
            .x
            .iter()
            .zip(&x)
            .fold(T::zero(), |a, (p, q)| a.max((*p - *q).abs()));
        x = min.x;
        let Some((_, g)) = f(&x) else { break };
        let violation = max_violation(&g).max(T::zero());
        for (li, gi) in lambda.iter_mut().zip(&g) {
            *li = (*li + rho * *gi).max(T::zero());
        }
        if violation <= opts.feasibility_tol && moved <= T::lit(1e-9) && outer > 0 {
            break;
        }
        if violation > T::lit(0.25) * prev_violation {
            rho = (rho * T::lit(10.0)).min(rho_max);
        }
        prev_violation = violation;
        local.initial_step = opts.local.initial_step * T::lit(0.1);
    }

    // pull a slightly infeasible final iterate back onto the feasible side
    if let Some(feas) = tracker.best_feasible.as_ref().map(|c| c.x.clone()) {
        if let Some((_, g)) = f(&x) {
            if max_violation(&g) > opts.feasibility_tol {
                let (mut lo, mut hi) = (T::zero(), T::one());
                let at = |t: T| -> Vec<T> { feas.iter().zip(&x).map(|(&a, &b)| a + (b - a) * t).collect() };
                for _ in 0..60 {
                    let mid = (lo + hi) * half;
                    let p = at(mid);
                    match f(&p) {
                        Some((v, g)) => {
                            tracker.record(&p, v, &g);
                            if max_violation(&g) <= opts.feasibility_tol {
                                lo = mid;
                            } else {
                                hi = mid;
                            }
                        }
                        None => hi = mid,
                    }
                }
            }
        }
    }
    (tracker.best_feasible, tracker.least_violating, tracker.evals)
}
