//! Complete solution of `Φ(f, g) = (1, 1)` on odd or equivariant functions by
//! continuation, with clustering of singular endpoints.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fiber::{fiber_residual, start_fiber, BilinearSystem, Segment};
use super::tracker::{
    random_gaussian, refine, run_total_degree, track_with_retries, CVec, PathResult, PathStatus, TrackerOptions,
};
use crate::error::{Error, Result};
use crate::geometry::{EquivariantSpace, SubgroupChar};
use crate::group_fourier::{CyclicFn, DirichletChar, GroupCtx};

/// How start points are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Parameter continuation from the explicit fiber over `(1_H, 1_H)`.
    Fiber,
    /// Total-degree continuation from `x_i² = r_i`.
    TotalDegree,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fiber" => Ok(Self::Fiber),
            "total-degree" => Ok(Self::TotalDegree),
            other => Err(Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveConfig {
    pub seed: u64,
    /// Endpoints closer than this are one solution.
    pub cluster_radius: f64,
    /// Paths stop at `t = 1 − endgame`.
    pub endgame: f64,
    /// Endpoints with larger coordinate norm count as diverged.
    pub finite_bound: f64,
    /// Tolerance for the unimodular, real and character tags.
    pub tag_tol: f64,
    pub tracker: TrackerOptions,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            cluster_radius: 1e-4,
            endgame: 1e-10,
            finite_bound: 1e4,
            tag_tol: 1e-6,
            tracker: TrackerOptions::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tags {
    /// Exponent `t` when `f = ω^t`.
    pub dirichlet: Option<u64>,
    pub unimodular: bool,
    pub real_valued: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Solution {
    pub f: CyclicFn,
    pub g: CyclicFn,
    /// Sup-norm of `(fg, f̂·ĝ(−·)) − (1, 1)` off 0.
    pub residual: f64,
    pub multiplicity: usize,
    pub tags: Tags,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolutionSet {
    pub d: u64,
    pub method: Method,
    pub seed: u64,
    pub total_paths: usize,
    pub diverged: usize,
    pub failed: usize,
    pub solutions: Vec<Solution>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    /// With multiplicity.
    pub total: usize,
    pub distinct: usize,
    /// With multiplicity.
    pub unimodular: usize,
    pub dirichlet: usize,
    pub real_valued: usize,
    pub max_multiplicity: usize,
}

impl SolutionSet {
    pub fn counts(&self) -> Counts {
        let s = &self.solutions;
        Counts {
            total: s.iter().map(|x| x.multiplicity).sum(),
            distinct: s.len(),
            unimodular: s.iter().filter(|x| x.tags.unimodular).map(|x| x.multiplicity).sum(),
            dirichlet: s.iter().filter(|x| x.tags.dirichlet.is_some()).count(),
            real_valued: s.iter().filter(|x| x.tags.real_valued).count(),
            max_multiplicity: s.iter().map(|x| x.multiplicity).max().unwrap_or(0),
        }
    }

    /// Every path is accounted for exactly once.
    pub fn paths_balance(&self) -> bool {
        self.counts().total + self.diverged + self.failed == self.total_paths
    }

    pub fn max_residual(&self) -> f64 {
        self.solutions.iter().map(|s| s.residual).fold(0.0, f64::max)
    }
}

/// True when both sets list the same functions `f` with the same multiplicities.
pub fn same_solutions(a: &SolutionSet, b: &SolutionSet, tol: f64) -> bool {
    if a.solutions.len() != b.solutions.len() {
        return false;
    }
    let mut used = vec![false; b.solutions.len()];
    a.solutions.iter().all(|s| {
        let hit = b.solutions.iter().enumerate().position(|(j, t)| {
            !used[j] && t.multiplicity == s.multiplicity && t.f.distance(&s.f).is_ok_and(|e| e <= tol)
        });
        match hit {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        }
    })
}

fn units(d: u64) -> Vec<u64> {
    (1..d).collect()
}

fn tags(f: &CyclicFn, chars: &[DirichletChar], tol: f64) -> Tags {
    let unimodular = (1..f.order() as i64).all(|x| (f.at(x).norm() - 1.0).abs() <= tol);
    let dirichlet = chars.iter().find(|c| c.to_fn().distance(f).is_ok_and(|e| e <= tol)).map(|c| c.exponent());
    Tags { dirichlet, unimodular, real_valued: f.is_real(tol) }
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut i = i;
    while parent[i] != r {
        let next = parent[i];
        parent[i] = r;
        i = next;
    }
    r
}

/// Groups points closer than `radius` (transitively).
pub fn cluster(points: &[CVec], radius: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if (&points[i] - &points[j]).norm() < radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

fn sort_key(f: &CyclicFn) -> Vec<i64> {
    f.values().iter().flat_map(|v| [(v.re * 1e8).round() as i64, (v.im * 1e8).round() as i64]).collect()
}

fn assemble(
    sys: &BilinearSystem,
    d: u64,
    method: Method,
    endpoints: Vec<PathResult>,
    cfg: &SolveConfig,
) -> SolutionSet {
    let total_paths = endpoints.len();
    let mut finite = Vec::new();
    let (mut diverged, mut failed) = (0, 0);
    for e in endpoints {
        match e.status {
            PathStatus::Reached if e.x.norm() < cfg.finite_bound => finite.push(e.x),
            PathStatus::Reached | PathStatus::Diverged => diverged += 1,
            PathStatus::Failed { .. } => failed += 1,
        }
    }
    let ctx = sys.ctx().clone();
    let chars: Vec<DirichletChar> = if ctx.is_prime() {
        DirichletChar::all(&ctx).expect("prime").into_iter().filter(|c| c.is_odd()).collect()
    } else {
        Vec::new()
    };
    let units = units(d);
    let groups = cluster(&finite, cfg.cluster_radius);
    let mut solutions: Vec<Solution> = groups
        .par_iter()
        .map(|g| {
            let mean = g.iter().fold(CVec::zeros(sys.unknowns()), |acc, &i| acc + &finite[i])
                / Complex64::new(g.len() as f64, 0.0);
            let z = if mean.is_empty() { mean } else { refine(sys, &mean, 50).0 };
            let (f, gg) = sys.functions(&z);
            let residual = fiber_residual(&f, &gg, &units).expect("same ctx");
            let tags = tags(&f, &chars, cfg.tag_tol);
            Solution { f, g: gg, residual, multiplicity: g.len(), tags }
        })
        .collect();
    solutions.sort_by_key(|s| sort_key(&s.f));
    SolutionSet { d, method, seed: cfg.seed, total_paths, diverged, failed, solutions }
}

fn trivial_set(sys: &BilinearSystem, d: u64, method: Method, cfg: &SolveConfig) -> SolutionSet {
    let end = PathResult { x: CVec::zeros(0), t: 1.0, status: PathStatus::Reached, steps: 0 };
    assemble(sys, d, method, vec![end], cfg)
}

/// Parameter continuation on `V_{H,c} × V_{H,c̄}` from the explicit fiber over
/// `(1_H, 1_H)` to `(1, 1)`, through a random complex waypoint.
pub fn solve_equivariant(space: &EquivariantSpace, cfg: &SolveConfig) -> Result<SolutionSet> {
    let sys = BilinearSystem::equivariant(space);
    let p = space.base.p;
    if sys.unknowns() == 0 {
        return Ok(trivial_set(&sys, p, Method::Fiber, cfg));
    }
    let starts = start_fiber(space)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let waypoint = CVec::from_fn(sys.unknowns(), |_, _| random_gaussian(&mut rng));
    let first = Segment { system: &sys, from: CVec::zeros(sys.unknowns()), to: waypoint.clone() };
    let second = Segment { system: &sys, from: waypoint, to: sys.target().clone() };
    let t_end = 1.0 - cfg.endgame;
    let endpoints: Vec<PathResult> = starts
        .par_iter()
        .map(|s| {
            let z0 = sys.coordinates(&s.f, &s.g);
            let mid = track_with_retries(&first, z0, 0.0, 1.0, &cfg.tracker);
            if !matches!(mid.status, PathStatus::Reached) {
                return mid;
            }
            track_with_retries(&second, mid.x, 0.0, t_end, &cfg.tracker)
        })
        .collect();
    Ok(assemble(&sys, p, Method::Fiber, endpoints, cfg))
}

/// All C-functions among odd functions on C_d, counted with multiplicity.
/// The fiber method needs `d` prime.
pub fn solve_odd_cfunctions(d: u64, method: Method, cfg: &SolveConfig) -> Result<SolutionSet> {
    let ctx = GroupCtx::new(d)?;
    let sys = BilinearSystem::odd(&ctx);
    if sys.unknowns() == 0 {
        return Ok(trivial_set(&sys, d, method, cfg));
    }
    match method {
        Method::Fiber => {
            if !ctx.is_prime() {
                return Err(Error::NotPrime(d));
            }
            let mut set = solve_equivariant(&EquivariantSpace::new(SubgroupChar::odd(d)?), cfg)?;
            set.d = d;
            Ok(set)
        }
        Method::TotalDegree => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let run = run_total_degree(&sys, &mut rng, 1.0 - cfg.endgame, &cfg.tracker);
            Ok(assemble(&sys, d, method, run.endpoints, cfg))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clustering_is_transitive() {
        let p = |x: f64| CVec::from_vec(vec![Complex64::new(x, 0.0)]);
        let pts = vec![p(0.0), p(0.6e-4), p(1.2e-4), p(1.0)];
        let groups = cluster(&pts, 1e-4);
        let mut sizes: Vec<usize> = groups.iter().map(|g| g.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 3]);
    }

    #[test]
    fn seven_by_both_methods() {
        let cfg = SolveConfig::default();
        let a = solve_odd_cfunctions(7, Method::Fiber, &cfg).unwrap();
        let b = solve_odd_cfunctions(7, Method::TotalDegree, &cfg).unwrap();
        for s in [&a, &b] {
            let c = s.counts();
            assert_eq!(c.total, 6, "{c:?}");
            assert_eq!(c.max_multiplicity, 4);
            assert_eq!(c.dirichlet, 3);
            assert!(s.paths_balance());
            assert!(s.max_residual() < 1e-8, "{}", s.max_residual());
        }
        assert_eq!(a.total_paths, 6);
        assert_eq!(b.total_paths, 16);
        assert!(same_solutions(&a, &b, 1e-6));
    }

    #[test]
    fn three_and_five() {
        let cfg = SolveConfig::default();
        let s = solve_odd_cfunctions(3, Method::TotalDegree, &cfg).unwrap();
        assert_eq!(s.counts().total, 1);
        assert_eq!(s.solutions[0].tags.dirichlet, Some(1));
        let s = solve_odd_cfunctions(5, Method::Fiber, &cfg).unwrap();
        let c = s.counts();
        assert_eq!((c.total, c.dirichlet, c.unimodular), (2, 2, 2));
        assert!(solve_odd_cfunctions(9, Method::Fiber, &cfg).is_err());
    }

    #[test]
    fn method_parsing() {
        assert_eq!("fiber".parse::<Method>().unwrap(), Method::Fiber);
        assert_eq!("total-degree".parse::<Method>().unwrap(), Method::TotalDegree);
        assert!("x".parse::<Method>().is_err());
    }
}
