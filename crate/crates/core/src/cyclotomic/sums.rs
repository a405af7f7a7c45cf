use super::CycInt;
use crate::error::{Error, Result};
use crate::group_fourier::DirichletChar;

/// Conductor `p(p−1)` holding both ζ_p and ζ_{p−1}.
pub fn gauss_conductor(p: u64) -> u64 {
    p * (p - 1)
}

/// `G(χ) = Σ_x χ(x) ζ_p^x` in Z[ζ_{p(p−1)}], with `ζ_p = ζ_M^{p−1}` and
/// `ζ_{p−1} = ζ_M^p`.
pub fn gauss_sum_exact(chi: &DirichletChar) -> Result<CycInt> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    let p = chi.p();
    let m = gauss_conductor(p);
    let mut counts = vec![0i64; m as usize];
    for x in 1..p {
        let e = chi.exponent_at(x as i64).expect("x is a unit");
        counts[((p * e + (p - 1) * x) % m) as usize] += 1;
    }
    Ok(CycInt::from_exponent_counts(m, &counts))
}

/// `J(χ₁, χ₂) = Σ_x χ₁(x) χ₂(1 − x)` in Z[ζ_{p−1}], characters extended by 0.
pub fn jacobi_sum_exact(chi1: &DirichletChar, chi2: &DirichletChar) -> Result<CycInt> {
    if chi1.ctx() != chi2.ctx() {
        return Err(Error::ContextMismatch { left: chi1.p(), right: chi2.p() });
    }
    let p = chi1.p();
    let m = p - 1;
    let mut counts = vec![0i64; m as usize];
    for x in 2..p as i64 {
        let a = chi1.exponent_at(x).expect("unit");
        let b = chi2.exponent_at(1 - x).expect("unit");
        counts[((a + b) % m) as usize] += 1;
    }
    Ok(CycInt::from_exponent_counts(m, &counts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith;
    use crate::group_fourier::{CyclicFn, GroupCtx};
    use num_bigint::BigInt;
    use num_complex::Complex64;

    fn chars(p: u64) -> Vec<DirichletChar> {
        DirichletChar::all(&GroupCtx::prime(p).unwrap()).unwrap()
    }

    #[test]
    fn quadratic_gauss_sums() {
        let g5 = gauss_sum_exact(&chars(5)[2]).unwrap().to_complex();
        assert!((g5 - Complex64::new(5f64.sqrt(), 0.0)).norm() < 1e-12);
        let g7 = gauss_sum_exact(&chars(7)[3]).unwrap().to_complex();
        assert!((g7 - Complex64::new(0.0, 7f64.sqrt())).norm() < 1e-12);
        assert_eq!(gauss_sum_exact(&chars(7)[0]).unwrap_err(), Error::PrincipalCharacter);
    }

    #[test]
    fn gauss_sum_norm_and_conjugate_product() {
        for p in [3u64, 5, 7, 11, 13, 17, 19] {
            let m = gauss_conductor(p);
            for chi in chars(p).into_iter().skip(1) {
                let g = gauss_sum_exact(&chi).unwrap();
                assert!((g.to_complex().norm() - (p as f64).sqrt()).abs() < 1e-9);
                let gbar = gauss_sum_exact(&chi.conj()).unwrap();
                let expected = CycInt::integer(m, chi.sign() * p as i64);
                assert_eq!(g.mul(&gbar).unwrap(), expected);
            }
        }
    }

    #[test]
    fn jacobi_from_gauss_sums() {
        for p in [3u64, 5, 7, 11, 13, 17, 19] {
            let cs = chars(p);
            let m = gauss_conductor(p);
            for a in cs.iter().skip(1) {
                for b in cs.iter().skip(1) {
                    let ab = a.mul(b).unwrap();
                    if ab.is_principal() {
                        continue;
                    }
                    let j = jacobi_sum_exact(a, b).unwrap();
                    assert!((j.to_complex().norm() - (p as f64).sqrt()).abs() < 1e-9);
                    let lhs = gauss_sum_exact(a).unwrap().mul(&gauss_sum_exact(b).unwrap()).unwrap();
                    let rhs = j.lift(m).unwrap().mul(&gauss_sum_exact(&ab).unwrap()).unwrap();
                    assert_eq!(lhs, rhs, "p={p} a={} b={}", a.exponent(), b.exponent());
                }
            }
        }
    }

    #[test]
    fn jacobi_symmetries() {
        for p in arith::units(20).into_iter().filter(|&p| arith::is_prime(p) && p > 2) {
            let cs = chars(p);
            for a in &cs {
                for b in &cs {
                    let j = jacobi_sum_exact(a, b).unwrap();
                    assert_eq!(j, jacobi_sum_exact(b, a).unwrap());
                    let ab_bar = a.mul(b).unwrap().conj();
                    let other = jacobi_sum_exact(&ab_bar, b).unwrap();
                    let signed = if b.is_odd() { other.neg() } else { other };
                    if !a.is_principal() && !b.is_principal() {
                        assert_eq!(j, signed, "p={p} {} {}", a.exponent(), b.exponent());
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_values_under_the_teichmuller_embedding() {
        let at = |p: u64, t1: i64, t2: i64| {
            let ctx = GroupCtx::prime(p).unwrap();
            let (a, b) = (DirichletChar::new(&ctx, t1).unwrap(), DirichletChar::new(&ctx, t2).unwrap());
            jacobi_sum_exact(&a, &b).unwrap()
        };
        // i√3 = 2ζ₆ − 1 and i = ζ₄, written in Z[ζ_{p−1}].
        let i_sqrt3 =
            |m: u64| CycInt::zeta_pow(m, m as i64 / 6).scale(&BigInt::from(2)).sub(&CycInt::integer(m, 1)).unwrap();
        let int = |m: u64, c: i64| CycInt::integer(m, c);
        let times = |z: CycInt, c: i64| z.scale(&BigInt::from(c));
        // p = 7, g0 = 3: the five terms sum to 1 − 2ζ₃² = 2 + i√3.
        let j7 = at(7, 3, 2);
        assert_eq!(j7, int(6, 2).add(&i_sqrt3(6)).unwrap());
        assert_eq!(at(7, -3, 2), j7);
        assert_eq!(at(37, 9, 6), int(36, -5).sub(&times(i_sqrt3(36), 2)).unwrap());
        assert_eq!(at(73, 24, 18), int(72, 8).sub(&times(CycInt::zeta_pow(72, 18), 3)).unwrap());
        assert_eq!(at(109, 36, 18), int(108, -1).sub(&times(i_sqrt3(108), 6)).unwrap());
        assert!((at(7, 3, 2).to_complex() - Complex64::new(2.0, 3f64.sqrt())).norm() < 1e-12);
    }

    #[test]
    fn character_transform_uses_gauss_sum() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let s = (p as f64).sqrt();
            for chi in chars(p).into_iter().skip(1) {
                let g = gauss_sum_exact(&chi).unwrap().to_complex();
                let expected = chi.conj().to_fn().scale(g / s);
                let got: CyclicFn = chi.to_fn().dft();
                assert!(got.distance(&expected).unwrap() < 1e-10, "p={p} t={}", chi.exponent());
            }
        }
    }

    #[test]
    fn galois_action_permutes_exponents() {
        for p in [7u64, 11, 13, 17] {
            let ctx = GroupCtx::prime(p).unwrap();
            let m = p - 1;
            let w = |t: i64| DirichletChar::new(&ctx, t).unwrap();
            for a in arith::units(m) {
                let a = a as i64;
                for j in 1..m as i64 {
                    for k in 1..m as i64 {
                        let z = jacobi_sum_exact(&w(-j), &w(-k)).unwrap();
                        let expected = jacobi_sum_exact(&w(-a * j), &w(-a * k)).unwrap();
                        assert_eq!(z.galois(a).unwrap(), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn convolution_of_characters() {
        let ctx = GroupCtx::prime(7).unwrap();
        let cs = DirichletChar::all(&ctx).unwrap();
        for a in cs.iter().skip(1) {
            for b in cs.iter().skip(1) {
                let ab = a.mul(b).unwrap();
                if ab.is_principal() {
                    continue;
                }
                let j = jacobi_sum_exact(a, b).unwrap().to_complex();
                let conv = a.to_fn().convolve(&b.to_fn()).unwrap();
                assert!(conv.distance(&ab.to_fn().scale(j)).unwrap() < 1e-12);
            }
        }
    }
}
