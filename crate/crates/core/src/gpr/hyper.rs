use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_training_set, kernel_matrix, GprError, KernelParams};
use crate::dataset::DesignPoint;
use crate::linalg::Cholesky;
use crate::optim::{nelder_mead, NelderMeadOptions};
use crate::Scalar;

/// Multi-start likelihood ascent over `(l, σ_f)` in log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperSearch {
    pub length_scale_range: (f64, f64),
    pub sigma_f_range: (f64, f64),
    /// starts are laid out as `starts / 2` length-scale cells × 2 amplitude cells
    pub starts: usize,
    pub seed: u64,
}

impl Default for HyperSearch {
    fn default() -> Self {
        Self {
            length_scale_range: (0.05, 2.0),
            sigma_f_range: (0.1, 10.0),
            starts: 8,
            seed: 0,
        }
    }
}

/// `−½ yᵀ(K+αI)⁻¹y − ½ log det(K+αI) − (n/2) log 2π`, with no jitter.
pub fn log_marginal_likelihood<T: Scalar>(
    inputs: &[DesignPoint<T>],
    targets: &[T],
    params: &KernelParams<T>,
) -> Result<T, GprError> {
    params.validate()?;
    let n = inputs.len();
    let mut k = kernel_matrix(inputs, params);
    for i in 0..n {
        k[i * n + i] = k[i * n + i] + params.alpha;
    }
    let c = Cholesky::factor(&k, n).ok_or(GprError::Conditioning { jitter: 0.0 })?;
    let z = c.solve_lower(targets);
    let quad = z.iter().fold(T::zero(), |a, &v| a + v * v);
    let half = T::lit(0.5);
    let two_pi = T::lit(2.0 * std::f64::consts::PI);
    Ok(-half * quad - half * c.log_det() - half * T::from_usize_lossy(n) * two_pi.ln())
}

/// Picks `(σ_f, l)` maximizing the log marginal likelihood at fixed `alpha`.
///
/// Ties within 1e-9 (relative) go to the smaller length scale.
pub fn select_hyperparameters<T: Scalar>(
    inputs: &[DesignPoint<T>],
    targets: &[T],
    alpha: T,
    search: &HyperSearch,
) -> Result<KernelParams<T>, GprError> {
    check_training_set(inputs, targets, 5)?;
    if !(alpha >= T::zero()) || !alpha.is_finite() {
        return Err(GprError::InvalidParams(format!("alpha={alpha}")));
    }
    let (l_lo, l_hi) = (search.length_scale_range.0.ln(), search.length_scale_range.1.ln());
    let (s_lo, s_hi) = (search.sigma_f_range.0.ln(), search.sigma_f_range.1.ln());
    if !(l_hi > l_lo) || !(s_hi > s_lo) || search.starts == 0 {
        return Err(GprError::InvalidParams("empty hyperparameter search box".into()));
    }

    let n_l = search.starts.div_ceil(2);
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    let mut starts = Vec::with_capacity(search.starts);
    'outer: for i in 0..n_l {
        for j in 0..2 {
            if starts.len() == search.starts {
                break 'outer;
            }
            let a = l_lo + (l_hi - l_lo) * (i as f64 + rng.random::<f64>()) / n_l as f64;
            let b = s_lo + (s_hi - s_lo) * (j as f64 + rng.random::<f64>()) / 2.0;
            starts.push([a, b]);
        }
    }

    let objective = |z: &[T]| {
        let p = KernelParams {
            sigma_f: z[1].exp(),
            length_scale: z[0].exp(),
            alpha,
        };
        match log_marginal_likelihood(inputs, targets, &p) {
            Ok(v) => -v,
            Err(_) => T::infinity(),
        }
    };
    let lower = [T::lit(l_lo), T::lit(s_lo)];
    let upper = [T::lit(l_hi), T::lit(s_hi)];
    let opts = NelderMeadOptions {
        initial_step: T::lit(0.3),
        xtol: T::lit(1e-8),
        ftol: T::lit(1e-10),
        max_evals: 600,
        max_restarts: 2,
    };

    let mut best: Option<(T, T, T)> = None; // (lml, l, sigma_f)
    let mut failures = 0;
    for s in &starts {
        let m = nelder_mead(objective, &[T::lit(s[0]), T::lit(s[1])], &lower, &upper, &opts);
        if !m.value.is_finite() {
            failures += 1;
            continue;
        }
        let cand = (-m.value, m.x[0].exp(), m.x[1].exp());
        best = Some(match best {
            None => cand,
            Some(b) => {
                let scale = b.0.abs().max(T::one());
                let tie = (cand.0 - b.0).abs() <= T::lit(1e-9) * scale;
                if (tie && cand.1 < b.1) || (!tie && cand.0 > b.0) {
                    cand
                } else {
                    b
                }
            }
        });
    }
    let (_, l, sf) = best.ok_or_else(|| {
        GprError::Optimization(format!(
            "all {failures} starts hit non-factorizable covariances (alpha={alpha})"
        ))
    })?;
    KernelParams::new(sf, l, alpha)
}
