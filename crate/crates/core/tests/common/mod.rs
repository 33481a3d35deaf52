//! Shared fixtures: the synthetic surrogate and an exhaustive grid oracle.
#![allow(dead_code)]

use rayon::prelude::*;
use rdo_core::dataset::{synthetic_cht, synthetic_dataset, DesignPoint, SampleRecord};
use rdo_core::gpr::{GprModel, KernelParams};
use rdo_core::grid::Domain;
use rdo_core::pce::InputUncertainty;
use rdo_core::robust::{ProbabilisticSurrogate, StatsModel, SurrogateStats};
use rdo_core::ProblemSpec;

pub const SEED: u64 = 0;

pub fn synthetic_samples() -> Vec<SampleRecord<f64>> {
    synthetic_dataset(20, 80, SEED).expect("synthetic dataset")
}

/// Default surrogate on the 100-point synthetic design.
pub fn synthetic_surrogate() -> ProbabilisticSurrogate<f64> {
    ProbabilisticSurrogate::from_samples(
        &synthetic_samples(),
        KernelParams::defaults(),
        InputUncertainty::manufacturing_default(),
        3,
    )
    .expect("surrogate fit")
}

/// Surrogate whose objectives are exact mirror images: `f₂` is fitted to a
/// height-flipped `y1` and `f₁` to the same targets on swapped inputs, so
/// `μ₁(x₁, x₂) = μ₂(x₂, x₁)` and likewise for σ.
pub fn mirrored_surrogate() -> ProbabilisticSurrogate<f64> {
    let recs = synthetic_samples();
    let pts: Vec<DesignPoint<f64>> = recs.iter().map(|r| r.point).collect();
    let t: Vec<f64> = pts
        .iter()
        .map(|p| synthetic_cht(DesignPoint::new(p.x1, 1.0 - p.x2)).unwrap().0)
        .collect();
    let swapped: Vec<DesignPoint<f64>> = pts.iter().map(|p| p.swapped()).collect();
    let kp = KernelParams::defaults();
    let f2 = GprModel::fit(&pts, &t, kp).unwrap();
    let f1 = GprModel::fit(&swapped, &t, kp).unwrap();
    ProbabilisticSurrogate::new(f1, f2, InputUncertainty::manufacturing_default(), 3)
}

/// Wraps a model and adds constants to both means.
pub struct Shifted<'a, M>(pub &'a M, pub f64);

impl<M: StatsModel<f64>> StatsModel<f64> for Shifted<'_, M> {
    fn stats(&self, x: &DesignPoint<f64>) -> Result<SurrogateStats<f64>, rdo_core::pce::PceError> {
        let mut s = self.0.stats(x)?;
        s.mu1 += self.1;
        s.mu2 += self.1;
        Ok(s)
    }
}

const FEAS_TOL: f64 = 1e-9;

pub fn feasible(spec: &ProblemSpec, s: &SurrogateStats<f64>) -> bool {
    spec.constraints(s).iter().all(|&g| g <= FEAS_TOL)
}

#[derive(Debug, Clone, Copy)]
pub struct OracleHit {
    /// best feasible cell of the exhaustive grid
    pub cell: DesignPoint<f64>,
    pub cell_value: f64,
    /// after zooming around near-best cells and tracing the feasible boundary
    pub refined: DesignPoint<f64>,
    pub refined_value: f64,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    p: DesignPoint<f64>,
    v: f64,
}

fn keep_better(best: &mut Option<Candidate>, c: Candidate) {
    if best.is_none_or(|b| c.v < b.v) {
        *best = Some(c);
    }
}

/// Point on lattice line `t` (a fixed `x1` for axis 0, fixed `x2` for axis 1)
/// at coordinate `s` along it.
fn on_line(axis: usize, t: f64, s: f64) -> DesignPoint<f64> {
    if axis == 0 {
        DesignPoint::new(t, s)
    } else {
        DesignPoint::new(s, t)
    }
}

/// Exhaustive evaluation of a model on an `n × n` lattice over `[0, 1]²`.
/// The statistics are cached so every problem shares one sweep.
pub struct GridOracle {
    pub n: usize,
    pub points: Vec<DesignPoint<f64>>,
    pub stats: Vec<SurrogateStats<f64>>,
}

impl GridOracle {
    pub fn new<M: StatsModel<f64>>(model: &M, n: usize) -> Self {
        let points = Domain::unit().grid(n, n);
        let stats = points.par_iter().map(|p| model.stats(p).expect("grid evaluation")).collect();
        Self { n, points, stats }
    }

    fn spacing(&self) -> f64 {
        1.0 / (self.n - 1) as f64
    }

    fn index(&self, i1: usize, i2: usize) -> usize {
        i2 * self.n + i1
    }

    fn ranked(&self, spec: &ProblemSpec) -> Vec<(usize, f64)> {
        let mut v: Vec<(usize, f64)> = self
            .stats
            .iter()
            .enumerate()
            .filter(|(_, s)| feasible(spec, s))
            .map(|(i, s)| (i, spec.objective(s)))
            .collect();
        // ties go to the lexicographically smallest point, as in the solver
        v.sort_by(|a, b| {
            a.1.partial_cmp(&b.1).unwrap().then_with(|| {
                let (p, q) = (self.points[a.0], self.points[b.0]);
                (p.x1, p.x2).partial_cmp(&(q.x1, q.x2)).unwrap()
            })
        });
        v
    }

    /// Best feasible lattice cell and its value.
    pub fn best_cell(&self, spec: &ProblemSpec) -> Option<(DesignPoint<f64>, f64)> {
        self.ranked(spec).first().map(|&(i, v)| (self.points[i], v))
    }

    /// Best feasible cell, refined two ways:
    ///
    /// * four levels of 41 × 41 zooming (window shrinking tenfold) around
    ///   up to four well-separated near-best cells, for interior optima;
    /// * along every lattice line, each feasibility change is bisected onto
    ///   the feasible boundary, and the best boundary points are refined by
    ///   a one-dimensional zoom over nearby lines. A lattice alone cannot
    ///   resolve optima on a constraint curve: the cell nearest the curve is
    ///   up to one spacing away, and the objective is steep across it.
    pub fn solve<M: StatsModel<f64>>(&self, model: &M, spec: &ProblemSpec) -> Option<OracleHit> {
        let ranked = self.ranked(spec);
        let &(best, best_value) = ranked.first()?;
        let mut refined = Some(Candidate {
            p: self.points[best],
            v: best_value,
        });
        let cells: Vec<(DesignPoint<f64>, f64)> = ranked.iter().map(|&(i, v)| (self.points[i], v)).collect();
        for seed in separated(&cells, best_value, 5.0 * self.spacing()) {
            keep_better(&mut refined, self.zoom(model, spec, seed));
        }
        if spec.constraint_count() > 0 {
            for axis in 0..2 {
                let crossings = self.lattice_crossings(model, spec, axis);
                let pts: Vec<(DesignPoint<f64>, f64)> = crossings.iter().map(|c| (c.p, c.v)).collect();
                let Some(top) = crossings.first() else { continue };
                for seed in separated(&pts, top.v, 5.0 * self.spacing()) {
                    keep_better(&mut refined, self.trace(model, spec, axis, seed));
                }
            }
        }
        let r = refined.unwrap();
        Some(OracleHit {
            cell: self.points[best],
            cell_value: best_value,
            refined: r.p,
            refined_value: r.v,
        })
    }

    fn zoom<M: StatsModel<f64>>(&self, model: &M, spec: &ProblemSpec, seed: (DesignPoint<f64>, f64)) -> Candidate {
        let mut c = Candidate { p: seed.0, v: seed.1 };
        let mut h = 2.0 * self.spacing();
        for _ in 0..4 {
            let dom = Domain {
                x1: ((c.p.x1 - h).max(0.0), (c.p.x1 + h).min(1.0)),
                x2: ((c.p.x2 - h).max(0.0), (c.p.x2 + h).min(1.0)),
            };
            for p in dom.grid(41, 41) {
                let s = model.stats(&p).expect("zoom evaluation");
                if feasible(spec, &s) {
                    let v = spec.objective(&s);
                    if v < c.v {
                        c = Candidate { p, v };
                    }
                }
            }
            h /= 10.0;
        }
        c
    }

    /// Boundary points on every lattice line, best first.
    fn lattice_crossings<M: StatsModel<f64>>(&self, model: &M, spec: &ProblemSpec, axis: usize) -> Vec<Candidate> {
        let n = self.n;
        let at = |line: usize, k: usize| if axis == 0 { self.index(line, k) } else { self.index(k, line) };
        let mut out = Vec::new();
        for line in 0..n {
            for k in 0..n - 1 {
                let (i, j) = (at(line, k), at(line, k + 1));
                let (fi, fj) = (feasible(spec, &self.stats[i]), feasible(spec, &self.stats[j]));
                if fi != fj {
                    let (a, b) = if fi { (i, j) } else { (j, i) };
                    out.push(bisect(model, spec, self.points[a], self.points[b]));
                }
            }
        }
        out.sort_by(|a, b| a.v.partial_cmp(&b.v).unwrap());
        out
    }

    /// One-dimensional zoom along the feasible boundary: 41 lines around the
    /// incumbent, each searched for crossings within ±5 lattice spacings.
    fn trace<M: StatsModel<f64>>(
        &self,
        model: &M,
        spec: &ProblemSpec,
        axis: usize,
        seed: (DesignPoint<f64>, f64),
    ) -> Candidate {
        let coord = |p: &DesignPoint<f64>| if axis == 0 { (p.x1, p.x2) } else { (p.x2, p.x1) };
        let mut c = Candidate { p: seed.0, v: seed.1 };
        let mut h = 2.0 * self.spacing();
        let w = 5.0 * self.spacing();
        for _ in 0..5 {
            let (t0, s0) = coord(&c.p);
            for t in rdo_core::grid::linspace((t0 - h).max(0.0), (t0 + h).min(1.0), 41) {
                let ss = rdo_core::grid::linspace((s0 - w).max(0.0), (s0 + w).min(1.0), 51);
                let flags: Vec<(DesignPoint<f64>, bool)> = ss
                    .iter()
                    .map(|&s| {
                        let p = on_line(axis, t, s);
                        (p, feasible(spec, &model.stats(&p).expect("trace evaluation")))
                    })
                    .collect();
                for pair in flags.windows(2) {
                    if pair[0].1 != pair[1].1 {
                        let (a, b) = if pair[0].1 { (pair[0].0, pair[1].0) } else { (pair[1].0, pair[0].0) };
                        let cand = bisect(model, spec, a, b);
                        if cand.v < c.v {
                            c = cand;
                        }
                    }
                }
            }
            h /= 10.0;
        }
        c
    }
}

/// Feasible end of a bisection between feasible `a` and infeasible `b`.
fn bisect<M: StatsModel<f64>>(model: &M, spec: &ProblemSpec, a: DesignPoint<f64>, b: DesignPoint<f64>) -> Candidate {
    let (mut a, mut b) = (a, b);
    for _ in 0..45 {
        let m = DesignPoint::new(0.5 * (a.x1 + b.x1), 0.5 * (a.x2 + b.x2));
        if feasible(spec, &model.stats(&m).expect("bisection evaluation")) {
            a = m;
        } else {
            b = m;
        }
    }
    Candidate {
        p: a,
        v: spec.objective(&model.stats(&a).unwrap()),
    }
}

/// Up to four candidates within 1e-3 of `best`, pairwise farther apart than
/// `min_gap` in the infinity norm. `sorted` must be best first.
fn separated(sorted: &[(DesignPoint<f64>, f64)], best: f64, min_gap: f64) -> Vec<(DesignPoint<f64>, f64)> {
    let mut seeds: Vec<(DesignPoint<f64>, f64)> = Vec::new();
    for &(p, v) in sorted {
        if v > best + 1e-3 || seeds.len() == 4 {
            break;
        }
        if seeds.iter().all(|(q, _)| p.max_abs_diff(q) > min_gap) {
            seeds.push((p, v));
        }
    }
    seeds
}
