use num_complex::Complex64;

use cfunc_core::group_fourier::CyclicFn;
use cfunc_core::solver::{same_solutions, solve_odd_cfunctions, Method, SolutionSet, SolveConfig};

/// Naive O(d²) transform, independent of the library's.
fn naive_dft(f: &CyclicFn) -> Vec<Complex64> {
    let d = f.order() as usize;
    (0..d)
        .map(|k| {
            let s: Complex64 = (0..d)
                .map(|x| {
                    f.values()[x] * Complex64::from_polar(1.0, std::f64::consts::TAU * (k * x % d) as f64 / d as f64)
                })
                .sum();
            s / (d as f64).sqrt()
        })
        .collect()
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

fn check_set(set: &SolutionSet) {
    let d = set.d as usize;
    for s in &set.solutions {
        let (f, g) = (s.f.values(), s.g.values());
        let (fh, gh) = (naive_dft(&s.f), naive_dft(&s.g));
        for x in 1..d {
            assert!((f[x] * g[x] - 1.0).norm() < 1e-8);
            assert!((fh[x] * gh[(d - x) % d] - 1.0).norm() < 1e-8);
            assert!((f[x] + f[d - x]).norm() < 1e-8, "odd");
        }
        assert!(f[0].norm() < 1e-8 && g[0].norm() < 1e-8);
    }
}

#[test]
fn fiber_counts_are_central_binomials() {
    for d in [5u64, 7, 11, 13] {
        let set = solve_odd_cfunctions(d, Method::Fiber, &SolveConfig::default()).unwrap();
        let n = (d - 1) / 2;
        assert_eq!(set.counts().total as u64, binomial(2 * n - 2, n - 1), "d={d}");
        assert!(set.paths_balance());
        check_set(&set);
    }
}

#[test]
fn methods_agree() {
    for d in [5u64, 7] {
        let cfg = SolveConfig::default();
        let a = solve_odd_cfunctions(d, Method::Fiber, &cfg).unwrap();
        let b = solve_odd_cfunctions(d, Method::TotalDegree, &cfg).unwrap();
        check_set(&b);
        assert!(same_solutions(&a, &b, 1e-6), "d={d}");
    }
}

#[test]
fn deterministic_and_round_trips() {
    let cfg = SolveConfig { seed: 17, ..SolveConfig::default() };
    let a = solve_odd_cfunctions(11, Method::Fiber, &cfg).unwrap();
    let b = solve_odd_cfunctions(11, Method::Fiber, &cfg).unwrap();
    let ja = serde_json::to_string(&a).unwrap();
    assert_eq!(ja, serde_json::to_string(&b).unwrap());
    let back: SolutionSet = serde_json::from_str(&ja).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), ja);
}

#[test]
fn every_odd_character_appears() {
    let set = solve_odd_cfunctions(13, Method::Fiber, &SolveConfig::default()).unwrap();
    let mut t: Vec<u64> = set.solutions.iter().filter_map(|s| s.tags.dirichlet).collect();
    t.sort_unstable();
    assert_eq!(t, vec![1, 3, 5, 7, 9, 11]);
}
