use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CyclicFn;
use crate::error::Error;

/// Outcome of [`is_c_function`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CFunctionReport {
    pub holds: bool,
    /// `max_{ℓ≠0} |Σ_{k≠0} f(k−ℓ)/f(k) + 1|`.
    pub residual: f64,
    /// `max_{k≠0} |f̂(k)·ĝ(−k) − 1|` with `g = 1/f` off 0.
    pub fourier_residual: f64,
    /// Set when the input fails a precondition rather than the identity.
    pub structural_failure: Option<String>,
}

impl CFunctionReport {
    fn structural(reason: String) -> Self {
        Self {
            holds: false,
            residual: f64::INFINITY,
            fourier_residual: f64::INFINITY,
            structural_failure: Some(reason),
        }
    }
}

/// Tests `Σ_{k≠0} f(k−ℓ) f(k)^{-1} = −1` for every `ℓ ≠ 0`, together with the
/// equivalent Fourier form `f̂(k) ĝ(−k) = 1` off 0 for `g = 1/f` off 0.
pub fn is_c_function(f: &CyclicFn, tol: f64) -> CFunctionReport {
    let d = f.order() as i64;
    if f.at(0).norm() > tol {
        return CFunctionReport::structural(format!("f(0) = {} is not zero", f.at(0)));
    }
    if let Some(k) = (1..d).find(|&k| f.at(k) == Complex64::new(0.0, 0.0)) {
        return CFunctionReport::structural(Error::VanishesOffZero(k as u64).to_string());
    }
    let f = f.clone().with_origin_zero();
    let inv = f.map(|v| if v == Complex64::new(0.0, 0.0) { v } else { v.inv() });

    let residual = (1..d)
        .map(|l| {
            let s: Complex64 = (1..d).map(|k| f.at(k - l) * inv.at(k)).sum();
            (s + 1.0).norm()
        })
        .fold(0.0, f64::max);

    let fh = f.dft();
    let gh = inv.dft();
    let fourier_residual = (1..d).map(|k| (fh.at(k) * gh.at(-k) - 1.0).norm()).fold(0.0, f64::max);

    CFunctionReport {
        holds: residual <= tol && fourier_residual <= tol,
        residual,
        fourier_residual,
        structural_failure: None,
    }
}

/// Outcome of [`is_biunimodular`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiunimodularReport {
    pub holds: bool,
    /// Largest deviation from the required moduli of `f` and `f̂`.
    pub residual: f64,
}

/// Unit modulus of `f` and `f̂` everywhere, or, when `punctured`, on C_d∖{0}
/// with `f(0) = f̂(0) = 0`.
pub fn is_biunimodular(f: &CyclicFn, punctured: bool, tol: f64) -> BiunimodularReport {
    let fh = f.dft();
    let deviation = |g: &CyclicFn| {
        g.values()
            .iter()
            .enumerate()
            .map(|(x, v)| if punctured && x == 0 { v.norm() } else { (v.norm() - 1.0).abs() })
            .fold(0.0, f64::max)
    };
    let residual = deviation(f).max(deviation(&fh));
    BiunimodularReport { holds: residual <= tol, residual }
}

impl CyclicFn {
    fn with_origin_zero(mut self) -> Self {
        self.values[0] = Complex64::new(0.0, 0.0);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::super::{DirichletChar, GroupCtx, DEFAULT_TOL};
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn legendre_cosine(p: u64) -> CyclicFn {
        let ctx = GroupCtx::new(p).unwrap();
        let chi = DirichletChar::legendre(&ctx).unwrap();
        CyclicFn::from_fn(&ctx, |k| {
            let t = 2.0 * PI * (k * k % p) as f64 / p as f64;
            chi.eval(k as i64) * (t.cos() + 2.0 * (4.0 * t).cos())
        })
    }

    #[test]
    fn characters_are_c_functions() {
        let ctx = GroupCtx::new(11).unwrap();
        for chi in DirichletChar::all(&ctx).unwrap().into_iter().skip(1) {
            let r = is_c_function(&chi.to_fn(), DEFAULT_TOL);
            assert!(r.holds, "{r:?}");
        }
    }

    #[test]
    fn punctured_one_is_not() {
        let ctx = GroupCtx::new(7).unwrap();
        let r = is_c_function(&CyclicFn::punctured_one(&ctx), DEFAULT_TOL);
        assert!(!r.holds);
        assert!((r.residual - 6.0).abs() < 1e-12);
        assert!(r.structural_failure.is_none());
    }

    #[test]
    fn real_solution_and_its_inverse() {
        let f = legendre_cosine(11);
        assert!(is_c_function(&f, DEFAULT_TOL).holds);
        let inv = f.map(|v| if v.norm() == 0.0 { v } else { v.inv() });
        assert!(is_c_function(&inv, DEFAULT_TOL).holds);
        assert!(!is_biunimodular(&f, true, DEFAULT_TOL).holds);
    }

    #[test]
    fn zero_off_origin_is_structural() {
        let ctx = GroupCtx::new(5).unwrap();
        let f = CyclicFn::delta(&ctx, 1);
        let r = is_c_function(&f, DEFAULT_TOL);
        assert!(!r.holds);
        assert_eq!(r.structural_failure.unwrap(), Error::VanishesOffZero(2).to_string());
    }

    #[test]
    fn biunimodular_examples() {
        let ctx = GroupCtx::new(7).unwrap();
        let odd = DirichletChar::new(&ctx, 1).unwrap().to_fn();
        assert!(is_biunimodular(&odd, true, DEFAULT_TOL).holds);
        assert!(!is_biunimodular(&odd, false, DEFAULT_TOL).holds);
        assert!(!is_biunimodular(&CyclicFn::delta(&ctx, 0), false, DEFAULT_TOL).holds);
    }

    #[test]
    fn character_transform_matches_conjugate() {
        let ctx = GroupCtx::new(7).unwrap();
        let one = CyclicFn::punctured_one(&ctx);
        let s = 7f64.sqrt();
        let expected = CyclicFn::from_fn(&ctx, |x| if x == 0 { (6.0 / s).into() } else { (-1.0 / s).into() });
        assert!(one.dft().distance(&expected).unwrap() < 1e-12);
        let chi0 = DirichletChar::legendre(&ctx).unwrap().to_fn();
        let conv = chi0.convolve(&chi0).unwrap();
        let expected = CyclicFn::from_fn(&ctx, |x| if x == 0 { (-6.0).into() } else { 1.0.into() });
        assert!(conv.distance(&expected).unwrap() < 1e-12);
    }

    fn unimodular_odd(p: u64, phases: &[f64]) -> CyclicFn {
        let ctx = GroupCtx::new(p).unwrap();
        let n = (p - 1) / 2;
        CyclicFn::from_fn(&ctx, |x| {
            if x == 0 {
                0.0.into()
            } else if x <= n {
                Complex64::from_polar(1.0, phases[x as usize - 1])
            } else {
                -Complex64::from_polar(1.0, phases[(p - x) as usize - 1])
            }
        })
    }

    proptest! {
        #[test]
        fn scale_invariance(re in -3.0f64..3.0, im in -3.0f64..3.0, t in 0i64..10) {
            prop_assume!(re.abs() + im.abs() > 0.1);
            let ctx = GroupCtx::new(11).unwrap();
            let chi = DirichletChar::new(&ctx, t).unwrap().to_fn();
            let lambda = Complex64::new(re, im);
            let base = is_c_function(&chi, DEFAULT_TOL);
            let scaled = is_c_function(&chi.scale(lambda), DEFAULT_TOL);
            prop_assert_eq!(base.holds, scaled.holds);
        }

        #[test]
        fn unimodular_c_function_iff_punctured_biunimodular(
            phases in proptest::collection::vec(0.0f64..6.3, 3),
            t in 0i64..3,
        ) {
            let p = 7;
            let random = unimodular_odd(p, &phases);
            let ctx = GroupCtx::new(p).unwrap();
            let chi = DirichletChar::new(&ctx, 2 * t + 1).unwrap().to_fn();
            for f in [random, chi] {
                let c = is_c_function(&f, 1e-9).holds;
                let b = is_biunimodular(&f, true, 1e-9).holds;
                prop_assert_eq!(c, b);
            }
        }
    }
}
