mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rdo_core::dataset::{split_columns, DesignPoint};
use rdo_core::gpr::{
    alpha_sensitivity, kernel_matrix, load_model, save_model, se_kernel, select_hyperparameters, GprError,
    GprModel, HyperSearch, KernelParams,
};
use rdo_core::grid::{grid_norm, Domain};
use rdo_core::linalg::Cholesky;

/// Cyclic Jacobi rotations; returns the eigenvalues of a symmetric matrix.
fn jacobi_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    let mut m = a.to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j] * m[i * n + j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (m[k * n + p], m[k * n + q]);
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (m[p * n + k], m[q * n + k]);
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i * n + i]).collect()
}

fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<DesignPoint<f64>> {
    (0..n)
        .map(|_| DesignPoint::new(rng.random_range(-0.1..1.1), rng.random_range(-0.1..1.1)))
        .collect()
}

#[test]
fn jacobi_oracle_on_known_matrix() {
    let mut ev = jacobi_eigenvalues(&[2.0, 1.0, 1.0, 2.0], 2);
    ev.sort_by(f64::total_cmp);
    assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
}

#[test]
fn kernel_matrix_is_positive_semidefinite() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let n = rng.random_range(2..25);
        let params = KernelParams::new(
            10f64.powf(rng.random_range(-1.0..1.0)),
            10f64.powf(rng.random_range(-1.3..0.3)),
            0.0,
        )
        .unwrap();
        let pts = random_points(&mut rng, n);
        let mut k = kernel_matrix(&pts, &params);
        for i in 0..n {
            k[i * n + i] += 1e-10;
            for j in 0..n {
                assert_eq!(k[i * n + j], k[j * n + i]);
            }
        }
        let min = jacobi_eigenvalues(&k, n).into_iter().fold(f64::INFINITY, f64::min);
        assert!(min > 0.0, "n={n} {params:?}: smallest eigenvalue {min}");
    }
}

#[test]
fn kernel_reference_values() {
    let unit = KernelParams::new(1.0, 1.0, 0.0).unwrap();
    let p = DesignPoint::new(0.0, 0.0);
    let v: f64 = se_kernel(&p, &DesignPoint::new(0.6, 0.8), &unit);
    assert!((v - 0.606_530_659_712_633_4).abs() < 1e-15);
    let kp = KernelParams::new(2.0, 0.3, 0.0).unwrap();
    assert_eq!(se_kernel(&p, &p, &kp), 4.0);
    let far = se_kernel(&p, &DesignPoint::new(3.0, 0.0), &kp);
    assert!((far / (4.0 * (-50f64).exp()) - 1.0).abs() < 1e-12);
}

/// Worst relative deviation of `mean(a·y)` from `a·mean(y)` at 20 random
/// queries; std must not depend on the targets at all.
fn linearity_gap(alpha: f64) -> f64 {
    let recs = common::synthetic_samples();
    let (pts, y1, y2) = split_columns(&recs);
    let kp = KernelParams::defaults().with_alpha(alpha);
    let base = GprModel::fit(&pts, &y1, kp).unwrap();
    let a = -3.7;
    let scaled: Vec<f64> = y1.iter().map(|v| a * v).collect();
    let scaled = GprModel::fit(&pts, &scaled, kp).unwrap();
    let other = GprModel::fit(&pts, &y2, kp).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for q in random_points(&mut rng, 20) {
        let m = base.predict_mean(&q);
        worst = worst.max((scaled.predict_mean(&q) - a * m).abs() / (a * m).abs());
        assert_eq!(base.predict_std(&q), other.predict_std(&q));
    }
    worst
}

#[test]
fn mean_is_linear_in_targets() {
    let gap = linearity_gap(1e-8);
    assert!(gap <= 1e-10, "{gap:e}");
}

#[test]
fn mean_linearity_at_default_noise_is_conditioning_bound() {
    // cond(K + 1e-12 I) is near 1e12, so roundoff alone reaches ~1e-9
    let gap = linearity_gap(1e-12);
    assert!(gap <= 1e-8, "{gap:e}");
}

#[test]
fn interpolates_synthetic_training_set() {
    let recs = common::synthetic_samples();
    let (pts, y1, y2) = split_columns(&recs);
    for y in [&y1, &y2] {
        let m = GprModel::fit(&pts, y, KernelParams::defaults()).unwrap();
        assert!(m.max_training_residual() < 1e-6);
        for (p, &t) in pts.iter().zip(y.iter()) {
            assert!((m.predict_mean(p) - t).abs() < 1e-6);
            assert!(m.predict_std(p) < 1e-4);
        }
    }
}

#[test]
fn reverts_to_prior_far_from_data() {
    let recs = common::synthetic_samples();
    let (pts, y1, _) = split_columns(&recs);
    let kp = KernelParams::defaults();
    let m = GprModel::fit(&pts, &y1, kp).unwrap();
    let ymax = y1.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    // every training point is more than 10 l away from these corners
    for q in [(-5.0, -5.0), (6.0, -5.0), (-5.0, 6.0), (6.0, 6.0)] {
        let q = DesignPoint::new(q.0, q.1);
        assert!(pts.iter().all(|p| p.dist2(&q).sqrt() > 10.0 * kp.length_scale));
        assert!(m.predict_mean(&q).abs() < 1e-6 * ymax);
        assert!((m.predict_std(&q) / kp.sigma_f - 1.0).abs() < 1e-6);
    }
    let centre = m.predict_std(&DesignPoint::new(0.5, 0.5));
    assert!(centre > 0.0 && centre < 1e-2, "{centre}");
}

#[test]
fn recovers_length_scale_of_a_gp_sample() {
    let pts = rdo_core::dataset::generate_design::<f64>(20, 80, 2).unwrap();
    let truth = KernelParams::new(1.0, 0.2, 1e-8).unwrap();
    let n = pts.len();
    let mut k = kernel_matrix(&pts, &truth);
    for i in 0..n {
        k[i * n + i] += truth.alpha;
    }
    let chol = Cholesky::factor(&k, n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let z: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    let y: Vec<f64> = (0..n).map(|i| (0..=i).map(|j| chol.get(i, j) * z[j]).sum()).collect();
    let got = select_hyperparameters(&pts, &y, 1e-8, &HyperSearch::default()).unwrap();
    assert!((got.length_scale - 0.2).abs() <= 0.1, "{got:?}");
}

#[test]
fn target_scaling_leaves_length_scale() {
    let recs = common::synthetic_samples();
    let (pts, _, y2) = split_columns(&recs);
    let search = HyperSearch::default();
    let a = select_hyperparameters(&pts, &y2, 1e-8, &search).unwrap();
    let c = 3.0;
    let scaled: Vec<f64> = y2.iter().map(|v| c * v).collect();
    // α is a variance in target units, so it scales with c²
    let b = select_hyperparameters(&pts, &scaled, c * c * 1e-8, &search).unwrap();
    assert!((a.length_scale / b.length_scale - 1.0).abs() < 1e-3, "{a:?} vs {b:?}");
    assert!((b.sigma_f / (c * a.sigma_f) - 1.0).abs() < 1e-2, "{a:?} vs {b:?}");
}

#[test]
fn hyperparameter_search_needs_five_points() {
    let pts: Vec<DesignPoint<f64>> = (0..4).map(|i| DesignPoint::new(i as f64 * 0.3, 0.5)).collect();
    let y = vec![0.0, 1.0, 0.5, 0.2];
    let err = select_hyperparameters(&pts, &y, 1e-12, &HyperSearch::default()).unwrap_err();
    assert!(matches!(err, GprError::TooFewSamples { need: 5, got: 4 }), "{err:?}");
}

#[test]
fn alpha_sweep_keeps_mean_and_orders_std() {
    let recs = common::synthetic_samples();
    let (pts, y1, y2) = split_columns(&recs);
    let grid = Domain::extended(0.1).grid(100, 100);
    let alphas = [1e-14, 1e-13, 1e-12, 1e-11, 1e-10];
    for y in [&y1, &y2] {
        let rows = alpha_sensitivity(&pts, y, KernelParams::defaults(), &alphas, &grid).unwrap();
        let stats: Vec<_> = rows.iter().map(|r| *r.result.as_ref().unwrap()).collect();
        let lo = stats.iter().map(|s| s.mean_norm).fold(f64::INFINITY, f64::min);
        let hi = stats.iter().map(|s| s.mean_norm).fold(0.0, f64::max);
        assert!((hi - lo) / lo < 1e-3, "mean norm spread {lo}..{hi}");
        for w in stats.windows(2) {
            assert!(w[1].std_norm >= w[0].std_norm, "{:?}", stats);
        }
    }

    let single = alpha_sensitivity(&pts, &y1, KernelParams::defaults(), &[1e-12], &grid).unwrap();
    assert_eq!(single.len(), 1);
    let direct = GprModel::fit(&pts, &y1, KernelParams::defaults()).unwrap();
    let means: Vec<f64> = grid.iter().map(|p| direct.predict_mean(p)).collect();
    let stds: Vec<f64> = grid.iter().map(|p| direct.predict_std(p)).collect();
    let row = single[0].result.as_ref().unwrap();
    assert_eq!(row.mean_norm, grid_norm(&means));
    assert_eq!(row.std_norm, grid_norm(&stds));
}

#[test]
fn model_file_round_trip() {
    let recs = common::synthetic_samples();
    let (pts, y1, _) = split_columns(&recs);
    let m = GprModel::fit(&pts, &y1, KernelParams::defaults()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model_f1.json");
    save_model(&m, std::fs::File::create(&path).unwrap()).unwrap();
    let back: GprModel<f64> = load_model(std::fs::File::open(&path).unwrap()).unwrap();
    for q in Domain::extended(0.1).grid(15, 15) {
        let (a, b) = (m.predict(&q), back.predict(&q));
        assert!((a.mean - b.mean).abs() <= 1e-12);
        assert!((a.std - b.std).abs() <= 1e-12);
    }
}
