//! Derivative-free local minimization in a box and low-discrepancy start sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Scalar;

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions<T> {
    pub initial_step: T,
    /// simplex diameter below which a run stops
    pub xtol: T,
    /// spread of simplex values below which a run stops
    pub ftol: T,
    pub max_evals: usize,
    /// fresh simplices built around the incumbent after convergence
    pub max_restarts: usize,
}

impl<T: Scalar> Default for NelderMeadOptions<T> {
    fn default() -> Self {
        Self {
            initial_step: T::lit(0.1),
            xtol: T::lit(1e-10),
            ftol: T::lit(1e-14),
            max_evals: 4000,
            max_restarts: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum<T> {
    pub x: Vec<T>,
    pub value: T,
    pub evals: usize,
}

/// Nelder-Mead with every trial point projected onto `[lower, upper]`.
///
/// Non-finite objective values are treated as `+inf`. After each converged
/// run the simplex is rebuilt around the best point (at half the previous
/// initial step) until a restart no longer improves the incumbent.
pub fn nelder_mead<T, F>(
    mut f: F,
    x0: &[T],
    lower: &[T],
    upper: &[T],
    opts: &NelderMeadOptions<T>,
) -> Minimum<T>
where
    T: Scalar,
    F: FnMut(&[T]) -> T,
{
    let dim = x0.len();
    assert!(lower.len() == dim && upper.len() == dim);
    let project = |x: &mut Vec<T>| {
        for i in 0..dim {
            x[i] = x[i].max(lower[i]).min(upper[i]);
        }
    };
    let mut evals = 0usize;
    let mut eval = |x: &[T], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            T::infinity()
        }
    };

    let mut best_x = x0.to_vec();
    project(&mut best_x);
    let mut best_f = eval(&best_x, &mut evals);
    let mut step = opts.initial_step;
    let half = T::lit(0.5);

    for _restart in 0..=opts.max_restarts {
        let (x, fx) = run_simplex(&mut eval, &mut evals, &best_x, best_f, step, lower, upper, opts, &project);
        let improved = best_f - fx > opts.ftol;
        if fx <= best_f {
            best_x = x;
            best_f = fx;
        }
        if !improved || evals >= opts.max_evals {
            break;
        }
        step = step * half;
    }

    Minimum {
        x: best_x,
        value: best_f,
        evals,
    }
}

#[allow(clippy::too_many_arguments)]
fn run_simplex<T, E, P>(
    eval: &mut E,
    evals: &mut usize,
    x0: &[T],
    f0: T,
    step: T,
    lower: &[T],
    upper: &[T],
    opts: &NelderMeadOptions<T>,
    project: &P,
) -> (Vec<T>, T)
where
    T: Scalar,
    E: FnMut(&[T], &mut usize) -> T,
    P: Fn(&mut Vec<T>),
{
    let dim = x0.len();
    let (alpha, gamma, rho, sigma) = (T::one(), T::lit(2.0), T::lit(0.5), T::lit(0.5));

    let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), f0));
    for i in 0..dim {
        let mut v = x0.to_vec();
        let span = upper[i] - lower[i];
        let s = step.min(span);
        v[i] = if v[i] + s <= upper[i] { v[i] + s } else { v[i] - s };
        project(&mut v);
        let fv = eval(&v, evals);
        simplex.push((v, fv));
    }

    let order = |s: &mut Vec<(Vec<T>, T)>| {
        s.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    };

    while *evals < opts.max_evals {
        order(&mut simplex);
        let fbest = simplex[0].1;
        let fworst = simplex[dim].1;
        let mut diam = T::zero();
        for v in &simplex[1..] {
            for i in 0..dim {
                diam = diam.max((v.0[i] - simplex[0].0[i]).abs());
            }
        }
        let spread = if fworst.is_finite() { fworst - fbest } else { T::infinity() };
        if diam <= opts.xtol || (spread <= opts.ftol && diam <= opts.xtol.sqrt()) {
            break;
        }

        let mut centroid = vec![T::zero(); dim];
        for v in &simplex[..dim] {
            for i in 0..dim {
                centroid[i] = centroid[i] + v.0[i];
            }
        }
        let nd = T::from_usize_lossy(dim);
        for c in centroid.iter_mut() {
            *c = *c / nd;
        }
        let along = |t: T| {
            let mut p: Vec<T> = (0..dim)
                .map(|i| centroid[i] + t * (simplex[dim].0[i] - centroid[i]))
                .collect();
            project(&mut p);
            p
        };

        let xr = along(-alpha);
        let fr = eval(&xr, evals);
        if fr < simplex[0].1 {
            let xe = along(-alpha * gamma);
            let fe = eval(&xe, evals);
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[dim - 1].1 {
            simplex[dim] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < simplex[dim].1 {
            let xc = along(-alpha * rho);
            let fc = eval(&xc, evals);
            (xc, fc)
        } else {
            let xc = along(rho);
            let fc = eval(&xc, evals);
            (xc, fc)
        };
        if fc < simplex[dim].1.min(fr) {
            simplex[dim] = (xc, fc);
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[0].0.clone();
        for v in simplex.iter_mut().skip(1) {
            let mut p: Vec<T> = (0..dim).map(|i| best[i] + sigma * (v.0[i] - best[i])).collect();
            project(&mut p);
            let fp = eval(&p, evals);
            *v = (p, fp);
        }
    }
    order(&mut simplex);
    simplex.swap_remove(0)
}

/// `n` points of a Halton sequence (bases 2, 3, 5, ...) in `[0, 1)^dim`,
/// Cranley-Patterson rotated by a shift drawn from `seed`.
pub fn halton_points(n: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
    assert!(dim <= PRIMES.len(), "at most {} dimensions", PRIMES.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
    (1..=n as u64)
        .map(|i| {
            (0..dim)
                .map(|d| (radical_inverse(i, PRIMES[d]) + shift[d]).fract())
                .collect()
        })
        .collect()
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}
