//! Predictor–corrector path tracking for square polynomial homotopies.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

pub type CVec = DVector<Complex64>;
pub type CMat = DMatrix<Complex64>;

/// A square polynomial system `F: C^m → C^m`.
pub trait PolySystem: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &CVec) -> CVec;
    fn jacobian(&self, x: &CVec) -> CMat;
}

/// `H(x, t)` with `H(·, t)` square for every `t`.
pub trait Homotopy: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &CVec, t: f64) -> CVec;
    fn jacobian(&self, x: &CVec, t: f64) -> CMat;
    fn dt(&self, x: &CVec, t: f64) -> CVec;
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackerOptions {
    pub initial_step: f64,
    pub max_step: f64,
    pub min_step: f64,
    /// Newton step size, relative to `1 + ‖x‖`, accepted as converged.
    pub corrector_tol: f64,
    pub max_corrector_iters: usize,
    /// Paths whose norm exceeds this are reported as diverged.
    pub divergence_bound: f64,
    pub max_steps: usize,
}

impl Default for TrackerOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.01,
            max_step: 0.05,
            min_step: 1e-14,
            corrector_tol: 1e-10,
            max_corrector_iters: 3,
            divergence_bound: 1e8,
            max_steps: 200_000,
        }
    }
}

impl TrackerOptions {
    /// Smaller steps and a stricter corrector, for retries.
    pub fn cautious(&self, level: u32) -> Self {
        let f = 4f64.powi(level as i32);
        Self {
            initial_step: self.initial_step / f,
            max_step: self.max_step / f,
            max_steps: self.max_steps * (level as usize + 1),
            ..*self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PathStatus {
    Reached,
    Diverged,
    Failed { reason: String },
}

#[derive(Clone, Debug)]
pub struct PathResult {
    pub x: CVec,
    pub t: f64,
    pub status: PathStatus,
    pub steps: usize,
}

fn solve(j: &CMat, rhs: &CVec) -> Option<CVec> {
    let x = j.clone().lu().solve(rhs)?;
    x.iter().all(|v| v.re.is_finite() && v.im.is_finite()).then_some(x)
}

fn velocity(h: &impl Homotopy, x: &CVec, t: f64) -> Option<CVec> {
    solve(&h.jacobian(x, t), &(-h.dt(x, t)))
}

/// Newton iterations on `H(·, t)`; returns the point and the iteration count.
fn correct(h: &impl Homotopy, mut x: CVec, t: f64, opts: &TrackerOptions) -> Option<(CVec, usize)> {
    let mut last = f64::INFINITY;
    for it in 1..=opts.max_corrector_iters {
        let dx = solve(&h.jacobian(&x, t), &(-h.eval(&x, t)))?;
        let n = dx.norm();
        x += dx;
        if n <= opts.corrector_tol * (1.0 + x.norm()) {
            return Some((x, it));
        }
        if it > 1 && n > 0.5 * last {
            return None;
        }
        last = n;
    }
    None
}

/// Tracks a solution of `H(·, t0)` to `t1` with a Heun predictor and Newton
/// corrector, halving the step on corrector failure.
pub fn track(h: &impl Homotopy, x0: CVec, t0: f64, t1: f64, opts: &TrackerOptions) -> PathResult {
    let mut x = x0;
    let mut t = t0;
    let mut step = opts.initial_step.min(t1 - t0);
    let mut steps = 0;
    let done = |x: CVec, t: f64, status: PathStatus, steps: usize| PathResult { x, t, status, steps };
    while t < t1 {
        steps += 1;
        if steps > opts.max_steps {
            return done(x, t, PathStatus::Failed { reason: "step budget exhausted".into() }, steps);
        }
        let last = t1 - t <= step;
        let hh = if last { t1 - t } else { step };
        let predicted = velocity(h, &x, t).and_then(|k1| {
            let mid = &x + &k1 * Complex64::new(hh, 0.0);
            let k2 = velocity(h, &mid, t + hh)?;
            Some(&x + (k1 + k2) * Complex64::new(hh / 2.0, 0.0))
        });
        let tn = if last { t1 } else { t + hh };
        match predicted.and_then(|xp| correct(h, xp, tn, opts)) {
            Some((xn, iters)) => {
                x = xn;
                t = tn;
                if x.norm() > opts.divergence_bound {
                    return done(x, t, PathStatus::Diverged, steps);
                }
                if iters <= 1 {
                    step = (step * 2.0).min(opts.max_step);
                } else if iters == 2 {
                    step = (step * 1.25).min(opts.max_step);
                }
            }
            None => {
                step /= 2.0;
                if step < opts.min_step {
                    let status = if x.norm() > opts.divergence_bound.sqrt() {
                        PathStatus::Diverged
                    } else {
                        PathStatus::Failed { reason: format!("step below {:e} at t={t}", opts.min_step) }
                    };
                    return done(x, t, status, steps);
                }
            }
        }
    }
    done(x, t, PathStatus::Reached, steps)
}

/// Newton refinement of `F(x) = 0`; returns the refined point and the final
/// residual sup-norm. Stops when the residual no longer decreases.
pub fn refine(f: &impl PolySystem, x0: &CVec, max_iters: usize) -> (CVec, f64) {
    let res = |x: &CVec| f.eval(x).iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut x = x0.clone();
    let mut r = res(&x);
    for _ in 0..max_iters {
        let Some(dx) = solve(&f.jacobian(&x), &(-f.eval(&x))) else { break };
        let xn = &x + dx;
        let rn = res(&xn);
        if rn.is_nan() || rn >= r {
            break;
        }
        x = xn;
        r = rn;
        if r < 1e-15 {
            break;
        }
    }
    (x, r)
}

/// Random complex number with independent standard normal parts, scaled to
/// unit modulus.
pub fn random_unit(rng: &mut impl Rng) -> Complex64 {
    let z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    z / z.norm()
}

pub fn random_gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// `γ (1 − t) S(x) + t F(x)` with the start system `S_i = x_i² − r_i`.
pub struct TotalDegree<'a, F: PolySystem> {
    pub target: &'a F,
    pub gamma: Complex64,
    pub roots: Vec<Complex64>,
}

impl<'a, F: PolySystem> TotalDegree<'a, F> {
    pub fn new(target: &'a F, rng: &mut impl Rng) -> Self {
        let roots = (0..target.dim()).map(|_| random_unit(rng)).collect();
        Self { target, gamma: random_unit(rng), roots }
    }

    /// The `2^m` solutions `x_i = ±√r_i`, indexed by the bits of `k`.
    pub fn start_solution(&self, k: usize) -> CVec {
        CVec::from_iterator(
            self.roots.len(),
            self.roots.iter().enumerate().map(|(i, r)| if k >> i & 1 == 1 { -r.sqrt() } else { r.sqrt() }),
        )
    }

    pub fn path_count(&self) -> usize {
        1 << self.roots.len()
    }

    fn start(&self, x: &CVec) -> CVec {
        CVec::from_iterator(x.len(), x.iter().zip(&self.roots).map(|(v, r)| v * v - r))
    }
}

impl<F: PolySystem> Homotopy for TotalDegree<'_, F> {
    fn dim(&self) -> usize {
        self.target.dim()
    }

    fn eval(&self, x: &CVec, t: f64) -> CVec {
        self.start(x) * (self.gamma * (1.0 - t)) + self.target.eval(x) * Complex64::new(t, 0.0)
    }

    fn jacobian(&self, x: &CVec, t: f64) -> CMat {
        let mut j = self.target.jacobian(x) * Complex64::new(t, 0.0);
        for i in 0..x.len() {
            j[(i, i)] += self.gamma * (1.0 - t) * 2.0 * x[i];
        }
        j
    }

    fn dt(&self, x: &CVec, _t: f64) -> CVec {
        self.target.eval(x) - self.start(x) * self.gamma
    }
}

/// Solutions of `F(x) = 0` found by total-degree continuation: tracks all
/// `2^m` paths to `t_end`, refines finite endpoints at `t = 1`.
pub struct TotalDegreeRun {
    pub endpoints: Vec<PathResult>,
    pub paths: usize,
}

pub fn run_total_degree(f: &impl PolySystem, rng: &mut impl Rng, t_end: f64, opts: &TrackerOptions) -> TotalDegreeRun {
    use rayon::prelude::*;
    let h = TotalDegree::new(f, rng);
    let paths = h.path_count();
    let endpoints =
        (0..paths).into_par_iter().map(|k| track_with_retries(&h, h.start_solution(k), 0.0, t_end, opts)).collect();
    TotalDegreeRun { endpoints, paths }
}

/// Retries a failed path on the same homotopy with smaller steps; the
/// homotopy is kept so that the start-to-end correspondence is unchanged.
pub fn track_with_retries(h: &impl Homotopy, x0: CVec, t0: f64, t1: f64, opts: &TrackerOptions) -> PathResult {
    let mut r = track(h, x0.clone(), t0, t1, opts);
    for level in 1..=5 {
        if !matches!(r.status, PathStatus::Failed { .. }) {
            break;
        }
        r = track(h, x0.clone(), t0, t1, &opts.cautious(level));
    }
    r
}
