//! One function per subcommand. Each returns the lines to print on success.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use rdo_core::dataset::{
    format_sig17, load_samples_with, split_columns, synthetic_dataset, write_samples, BoundsPolicy, Bounds,
    DesignPoint, NormalizationMap,
};
use rdo_core::gpr::{load_model, save_model, select_hyperparameters, GprModel, HyperSearch, KernelParams};
use rdo_core::grid::Domain;
use rdo_core::pce::{convergence_study, mc_propagate, project, write_convergence_csv, InputUncertainty};
use rdo_core::robust::{
    bound_sweep, pareto_sweep, solve as solve_spec, write_sweep_csv, ProbabilisticSurrogate, ProblemKind,
    ProblemSpec, SolverOptions,
};

use crate::config::{parse_grid, BoundsSource, GridDomain, HyperStrategy, RunConfig};
use crate::error::CliError;

type Lines = Vec<String>;

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Result<(), CliError> {
    w.flush()
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

/// Creates the output directory and records the effective configuration.
fn prepare_out(cfg: &RunConfig) -> Result<(), CliError> {
    std::fs::create_dir_all(&cfg.out)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", cfg.out.display())))?;
    write_text(&cfg.out.join("config.toml"), &cfg.to_toml())
}

fn normalization_map(cfg: &RunConfig) -> Result<NormalizationMap<f64>, CliError> {
    let n = &cfg.normalization;
    Ok(NormalizationMap::new(
        [Bounds::new("x1", n.x1[0], n.x1[1])?, Bounds::new("x2", n.x2[0], n.x2[1])?],
        [Bounds::new("y1", n.y1[0], n.y1[1])?, Bounds::new("y2", n.y2[0], n.y2[1])?],
    ))
}

pub fn generate(cfg: &RunConfig) -> Result<Lines, CliError> {
    let map = normalization_map(cfg)?;
    let records = synthetic_dataset::<f64>(cfg.data.n_boundary, cfg.data.n_interior, cfg.seed)?;
    prepare_out(cfg)?;
    let path = cfg.out.join("samples.csv");
    let mut w = create(&path)?;
    write_samples(&mut w, &records, &map)?;
    finish(w, &path)?;
    Ok(vec![format!("wrote {} samples to {}", records.len(), path.display())])
}

#[derive(Serialize)]
struct ModelReport {
    sigma_f: f64,
    length_scale: f64,
    jitter: f64,
    max_training_residual: f64,
}

#[derive(Serialize)]
struct FitReport {
    samples: usize,
    alpha: f64,
    hyper: HyperStrategy,
    f1: ModelReport,
    f2: ModelReport,
}

fn model_report(m: &GprModel<f64>) -> ModelReport {
    ModelReport {
        sigma_f: m.params().sigma_f,
        length_scale: m.params().length_scale,
        jitter: m.jitter(),
        max_training_residual: m.max_training_residual(),
    }
}

pub fn fit(cfg: &RunConfig) -> Result<Lines, CliError> {
    let path = cfg.samples_path();
    if !path.exists() {
        return Err(CliError::Input(format!(
            "samples file {} not found (run `rdo generate` or set data.samples)",
            path.display()
        )));
    }
    let policy = match cfg.normalization.source {
        BoundsSource::Metadata => BoundsPolicy::MetadataOrColumns,
        BoundsSource::Columns => BoundsPolicy::Columns,
    };
    let (records, _) = load_samples_with::<f64>(&path, policy)?;
    let (points, y1, y2) = split_columns(&records);
    let alpha = cfg.gpr.alpha;
    let params = |y: &[f64]| -> Result<KernelParams<f64>, CliError> {
        Ok(match cfg.gpr.hyper {
            HyperStrategy::Fixed => KernelParams::new(cfg.gpr.sigma_f, cfg.gpr.length_scale, alpha)?,
            HyperStrategy::Ml => {
                let search = HyperSearch {
                    seed: cfg.seed,
                    ..HyperSearch::default()
                };
                select_hyperparameters(&points, y, alpha, &search)?
            }
        })
    };
    let f1 = GprModel::fit(&points, &y1, params(&y1)?)?;
    let f2 = GprModel::fit(&points, &y2, params(&y2)?)?;

    prepare_out(cfg)?;
    for (name, m) in [("model_f1.json", &f1), ("model_f2.json", &f2)] {
        let p = cfg.out.join(name);
        let mut w = create(&p)?;
        save_model(m, &mut w)?;
        finish(w, &p)?;
    }
    let report = FitReport {
        samples: records.len(),
        alpha,
        hyper: cfg.gpr.hyper,
        f1: model_report(&f1),
        f2: model_report(&f2),
    };
    let text = toml::to_string(&report).expect("report serializes");
    write_text(&cfg.out.join("fit_report.toml"), &text)?;
    Ok(text.lines().map(str::to_owned).collect())
}

fn load_surrogate(cfg: &RunConfig) -> Result<ProbabilisticSurrogate<f64>, CliError> {
    let read = |name: &str| -> Result<GprModel<f64>, CliError> {
        let p = cfg.out.join(name);
        let f = File::open(&p).map_err(|e| {
            CliError::Input(format!("cannot open model {}: {e} (run `rdo fit` first)", p.display()))
        })?;
        Ok(load_model(std::io::BufReader::new(f))?)
    };
    let unc = InputUncertainty::isotropic(cfg.uncertainty.e_x)?;
    Ok(ProbabilisticSurrogate::new(read("model_f1.json")?, read("model_f2.json")?, unc, cfg.pce.order))
}

pub fn propagate(cfg: &RunConfig) -> Result<Lines, CliError> {
    let (n1, n2) = parse_grid(&cfg.propagate.grid)?;
    let s = load_surrogate(cfg)?;
    let domain = match cfg.propagate.domain {
        GridDomain::Unit => Domain::unit(),
        GridDomain::Extended => Domain::extended(0.1),
    };
    let k = cfg.problem.k_sigma;
    prepare_out(cfg)?;
    let path = cfg.out.join("surface.csv");
    let mut w = create(&path)?;
    writeln!(w, "x1,x2,mu1,sigma1,mu1_lower,mu1_upper,mu2,sigma2,mu2_lower,mu2_upper")?;
    let points = domain.grid(n1, n2);
    for x in &points {
        let st = s.evaluate(x)?;
        let row = [
            x.x1,
            x.x2,
            st.mu1,
            st.sigma1,
            st.mu1 - k * st.sigma1,
            st.mu1 + k * st.sigma1,
            st.mu2,
            st.sigma2,
            st.mu2 - k * st.sigma2,
            st.mu2 + k * st.sigma2,
        ];
        let cells: Vec<String> = row.iter().map(|&v| format_sig17(v)).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    finish(w, &path)?;
    Ok(vec![format!("wrote {} rows to {}", points.len(), path.display())])
}

fn problem_spec(cfg: &RunConfig) -> Result<ProblemSpec<f64>, CliError> {
    let p = &cfg.problem;
    Ok(match p.kind {
        1 => ProblemSpec::weighted(p.omega, p.sigma_bounds.map(|b| (b[0], b[1])))?,
        2 => ProblemSpec::worst_case_f2(p.bound, p.k_sigma)?,
        3 => ProblemSpec::worst_case_f1(p.bound, p.k_sigma)?,
        k => return Err(CliError::Input(format!("problem must be 1, 2 or 3, got {k}"))),
    })
}

fn solver_options(cfg: &RunConfig) -> SolverOptions<f64> {
    SolverOptions {
        seed: cfg.seed,
        ..SolverOptions::default()
    }
}

#[derive(Serialize)]
struct SolveReport {
    problem: u8,
    omega: f64,
    sigma_bounds: Option<[f64; 2]>,
    bound: Option<f64>,
    k_sigma: f64,
    feasible: bool,
    x1: f64,
    x2: f64,
    objective: f64,
    mu1: f64,
    sigma1: f64,
    mu2: f64,
    sigma2: f64,
    starts: usize,
    evaluations: usize,
    max_violation: f64,
}

pub fn solve(cfg: &RunConfig) -> Result<Lines, CliError> {
    let spec = problem_spec(cfg)?;
    let s = load_surrogate(cfg)?;
    let r = solve_spec(&s, &spec, &solver_options(cfg))?;
    let p = &cfg.problem;
    let report = SolveReport {
        problem: p.kind,
        omega: p.omega,
        sigma_bounds: p.sigma_bounds,
        bound: p.bound,
        k_sigma: p.k_sigma,
        feasible: r.feasible,
        x1: r.x_star.x1,
        x2: r.x_star.x2,
        objective: r.objective_value,
        mu1: r.stats.mu1,
        sigma1: r.stats.sigma1,
        mu2: r.stats.mu2,
        sigma2: r.stats.sigma2,
        starts: r.diagnostics.starts,
        evaluations: r.diagnostics.evaluations,
        max_violation: r.diagnostics.max_violation,
    };
    let text = toml::to_string(&report).expect("report serializes");
    prepare_out(cfg)?;
    write_text(&cfg.out.join("solve_report.toml"), &text)?;
    if !r.feasible {
        return Err(CliError::Infeasible(format!(
            "least violation {:e} at ({}, {})",
            r.diagnostics.max_violation, r.x_star.x1, r.x_star.x2
        )));
    }
    Ok(text.lines().map(str::to_owned).collect())
}

pub fn pareto(cfg: &RunConfig) -> Result<Lines, CliError> {
    let omegas = &cfg.problem.omegas;
    if omegas.is_empty() || omegas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(CliError::Input("problem.omegas must be non-empty and ascending".into()));
    }
    let s = load_surrogate(cfg)?;
    let bounds = cfg.problem.sigma_bounds.map(|b| (b[0], b[1]));
    let front = pareto_sweep(&s, omegas, bounds, &solver_options(cfg))?;
    prepare_out(cfg)?;
    for (name, rows) in [("pareto.csv", &front.front), ("pareto_solves.csv", &front.solves)] {
        let p = cfg.out.join(name);
        let mut w = create(&p)?;
        write_sweep_csv(&mut w, rows)?;
        finish(w, &p)?;
    }
    let infeasible = front.solves.iter().filter(|r| !r.optimum.feasible).count();
    if front.front.is_empty() {
        return Err(CliError::Infeasible(format!("all {} weights infeasible", omegas.len())));
    }
    Ok(vec![format!(
        "{} weights, {} infeasible, {} on the front; wrote {}",
        omegas.len(),
        infeasible,
        front.front.len(),
        cfg.out.join("pareto.csv").display()
    )])
}

pub fn sweep_bounds(cfg: &RunConfig) -> Result<Lines, CliError> {
    let kind = match cfg.problem.kind {
        2 => ProblemKind::WorstCaseF2,
        3 => ProblemKind::WorstCaseF1,
        k => return Err(CliError::Input(format!("bound sweeps need problem 2 or 3, got {k}"))),
    };
    let s = load_surrogate(cfg)?;
    let rows = bound_sweep(&s, kind, &cfg.problem.bounds, cfg.problem.k_sigma, &solver_options(cfg))?;
    prepare_out(cfg)?;
    let path = cfg.out.join("bound_sweep.csv");
    let mut w = create(&path)?;
    write_sweep_csv(&mut w, &rows)?;
    finish(w, &path)?;
    let feasible = rows.iter().filter(|r| r.optimum.feasible).count();
    if feasible == 0 {
        return Err(CliError::Infeasible(format!("all {} bounds infeasible", rows.len())));
    }
    Ok(vec![format!(
        "{} bounds, {} feasible; wrote {}",
        rows.len(),
        feasible,
        path.display()
    )])
}

fn benchmark_fn(p: &DesignPoint<f64>) -> f64 {
    p.x1.sin() / p.x2.cos() + p.x2 * p.x2
}

struct Case {
    name: &'static str,
    pass: bool,
    detail: String,
}

pub fn validate(cfg: &RunConfig) -> Result<Lines, CliError> {
    let mut cases = Vec::new();
    let order = cfg.pce.order.max(1);

    let linear = [
        ("linear x1+x2", [1.0, 1.0], [0.5, 0.7], [3.0, 4.0], 1.2, 5.0),
        ("linear x1+2x2", [1.0, 2.0], [0.3, 0.5], [0.3, 0.2], 1.3, 0.5),
    ];
    for (name, ab, mu, sigma, mean, std) in linear {
        let unc = InputUncertainty::from_sigmas(sigma)?;
        let p = project(|x: &DesignPoint<f64>| ab[0] * x.x1 + ab[1] * x.x2, DesignPoint::new(mu[0], mu[1]), &unc, order)?;
        let err = (p.mean - mean).abs().max((p.std - std).abs());
        cases.push(Case {
            name,
            pass: err <= 1e-10,
            detail: format!("mean {:.12} (exact {mean}), std {:.12} (exact {std}), tol 1e-10", p.mean, p.std),
        });
    }

    let unc = InputUncertainty::from_sigmas([0.3, 0.2])?;
    let centre = DesignPoint::new(0.3, 0.5);
    let n = cfg.validate.mc_samples;
    let mc = mc_propagate(benchmark_fn, centre, &unc, n, cfg.seed)?;
    let p = project(benchmark_fn, centre, &unc, order)?;
    let (zm, zs) = ((p.mean - mc.mean).abs() / mc.mean_se, (p.std - mc.std).abs() / mc.std_se);
    cases.push(Case {
        name: "nonlinear sin(x1)/cos(x2)+x2^2 vs Monte Carlo",
        pass: zm <= 4.0 && zs <= 4.0,
        detail: format!(
            "order {order}: mean {:.6} std {:.6}; MC({n}) mean {:.6} std {:.6}; |z| {zm:.2}, {zs:.2}, tol 4 SE",
            p.mean, p.std, mc.mean, mc.std
        ),
    });

    let orders: Vec<usize> = (1..=8).collect();
    let rows = convergence_study(benchmark_fn, centre, &unc, &orders)?;
    prepare_out(cfg)?;
    let path = cfg.out.join("convergence.csv");
    let mut w = create(&path)?;
    write_convergence_csv(&mut w, &rows)?;
    finish(w, &path)?;
    let reference = rows.last().expect("orders").std;
    let settled = rows[3..].iter().all(|r| r.dstd.unwrap_or(0.0) / r.std < 0.01);
    let o3 = (rows[2].std - reference).abs() / reference;
    cases.push(Case {
        name: "order convergence",
        pass: settled && o3 < 0.01,
        detail: format!("relative std change below 1% from order 4 on: {settled}; order 3 vs 8 {:.2e}, tol 1e-2", o3),
    });

    let path = cfg.out.join("mc_convergence.csv");
    let mut w = create(&path)?;
    writeln!(w, "n,mean,std,mean_se,abs_err_mean,abs_err_std")?;
    let mut table = vec!["Monte Carlo convergence (reference: order 8):".to_owned()];
    let high = rows.last().expect("orders");
    let mut samples = 100;
    while samples <= n {
        let e = mc_propagate(benchmark_fn, centre, &unc, samples, cfg.seed)?;
        let (em, es) = ((e.mean - high.mean).abs(), (e.std - high.std).abs());
        writeln!(
            w,
            "{samples},{},{},{},{},{}",
            format_sig17(e.mean),
            format_sig17(e.std),
            format_sig17(e.mean_se),
            format_sig17(em),
            format_sig17(es)
        )?;
        table.push(format!("  n={samples:>8}  mean {:.6}  std {:.6}  |err| {em:.2e} / {es:.2e}  SE {:.2e}", e.mean, e.std, e.mean_se));
        samples *= 10;
    }
    finish(w, &path)?;

    let mut out: Lines = cases
        .iter()
        .map(|c| format!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail))
        .collect();
    out.extend(table);
    let failed: Vec<&str> = cases.iter().filter(|c| !c.pass).map(|c| c.name).collect();
    if failed.is_empty() {
        Ok(out)
    } else {
        for line in &out {
            println!("{line}");
        }
        Err(CliError::Validation(failed.join(", ")))
    }
}
