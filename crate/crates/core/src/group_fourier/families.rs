use num_complex::Complex64;

use super::{unit_root, CyclicFn, DirichletChar, GroupCtx};
use crate::arith;
use crate::error::{Error, Result};

/// The gaussian `x ↦ e^{2iπ m (x − a)² / d}`.
pub fn gaussian(ctx: &GroupCtx, m: i64, a: i64) -> Result<CyclicFn> {
    let d = ctx.order();
    let m = arith::modulo(m, d);
    if arith::gcd(m, d) != 1 {
        return Err(Error::NotAUnit { value: m, modulus: d });
    }
    let a = arith::modulo(a, d);
    Ok(CyclicFn::from_fn(ctx, |x| {
        let y = (x + d - a) % d;
        let e = (m as u128 * (y as u128 * y as u128) % d as u128) as i64;
        unit_root(e, d)
    }))
}

/// One (F_p^*)²-invariant biunimodular function
/// `e^{iθ₀} δ₀ + cos θ 1_{F_p^*} + i ε₂ sin θ χ₀`.
#[derive(Clone, Debug)]
pub struct BjorckSaffari {
    pub theta0: f64,
    pub theta: f64,
    pub eps2: i8,
    pub function: CyclicFn,
}

impl BjorckSaffari {
    /// Right-hand side of the self-duality identity
    /// `ε_p^{-1} ĥ = σ (e^{-iθ₀} δ₀ + cos θ 1_{F_p^*} + i σ ε₂ sin θ χ₀)`,
    /// where σ = −1 exactly when θ₀ = −θ.
    pub fn expected_transform(&self) -> Result<CyclicFn> {
        let sigma: i8 = if self.theta0 < 0.0 { -1 } else { 1 };
        let base = build(self.function.ctx(), -self.theta0, self.theta, sigma * self.eps2)?;
        Ok(base.scale(Complex64::new(sigma as f64, 0.0)))
    }

    /// Sup-norm residual of `ε_p^{-1} ĥ` against [`Self::expected_transform`].
    pub fn transform_residual(&self) -> Result<f64> {
        let eps_p = quadratic_sign(self.function.order());
        let lhs = self.function.dft().scale(eps_p.inv());
        lhs.distance(&self.expected_transform()?)
    }
}

/// `ε_p = G(χ₀)/√p`: 1 for p ≡ 1 (mod 4), i for p ≡ 3 (mod 4).
pub fn quadratic_sign(p: u64) -> Complex64 {
    if p % 4 == 1 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(0.0, 1.0)
    }
}

fn build(ctx: &GroupCtx, theta0: f64, theta: f64, eps2: i8) -> Result<CyclicFn> {
    let legendre = DirichletChar::legendre(ctx)?;
    let (c, s) = (theta.cos(), theta.sin());
    Ok(CyclicFn::from_fn(ctx, |x| {
        if x == 0 {
            Complex64::from_polar(1.0, theta0)
        } else {
            Complex64::new(c, 0.0) + Complex64::new(0.0, eps2 as f64 * s) * legendre.eval(x as i64)
        }
    }))
}

/// The Björck–Saffari functions on F_p, p ≥ 5 prime: two when p ≡ 1 (mod 4)
/// (θ₀ = 0, cos θ = 1/(1+√p)), four when p ≡ 3 (mod 4) (θ₀ = ±θ, tan θ = √p).
/// The first entry is the base function with all signs positive.
pub fn bjorck_saffari(ctx: &GroupCtx) -> Result<Vec<BjorckSaffari>> {
    let p = ctx.order();
    if !ctx.is_prime() {
        return Err(Error::NotPrime(p));
    }
    if p < 5 {
        return Err(Error::OutOfRange(format!("Björck–Saffari functions need p >= 5, got {p}")));
    }
    let sp = (p as f64).sqrt();
    let mut out = Vec::new();
    if p % 4 == 1 {
        let theta = (1.0 / (1.0 + sp)).acos();
        for eps2 in [1i8, -1] {
            out.push(BjorckSaffari { theta0: 0.0, theta, eps2, function: build(ctx, 0.0, theta, eps2)? });
        }
    } else {
        let theta = sp.atan();
        for eps1 in [1.0, -1.0] {
            for eps2 in [1i8, -1] {
                let theta0 = eps1 * theta;
                out.push(BjorckSaffari { theta0, theta, eps2, function: build(ctx, theta0, theta, eps2)? });
            }
        }
    }
    Ok(out)
}

/// The basis `E_j = δ_j − δ_{−j}`, 1 ≤ j ≤ (d−1)/2, of odd functions.
pub fn odd_basis(ctx: &GroupCtx) -> Vec<CyclicFn> {
    let n = (ctx.order() - 1) / 2;
    (1..=n as i64).map(|j| CyclicFn::delta(ctx, j).sub(&CyclicFn::delta(ctx, -j)).expect("same ctx")).collect()
}

#[cfg(test)]
mod tests {
    use super::super::{is_biunimodular, DEFAULT_TOL};
    use super::*;

    #[test]
    fn gaussian_values_by_substitution() {
        let ctx = GroupCtx::new(3).unwrap();
        let g = gaussian(&ctx, 1, 1).unwrap();
        let w = unit_root(1, 3);
        let expected = [w, Complex64::new(1.0, 0.0), w];
        for (a, b) in g.values().iter().zip(expected) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn gaussian_requires_unit() {
        let ctx = GroupCtx::new(9).unwrap();
        assert_eq!(gaussian(&ctx, 3, 0).unwrap_err(), Error::NotAUnit { value: 3, modulus: 9 });
    }

    #[test]
    fn gaussian_transform_is_conjugate_dilate() {
        for p in [3u64, 5, 7, 11, 13] {
            let ctx = GroupCtx::new(p).unwrap();
            let g0 = gaussian(&ctx, 1, 0).unwrap();
            let half = arith::mod_inv(2, p).unwrap() as i64;
            let eps = quadratic_sign(p);
            let expected = CyclicFn::from_fn(&ctx, |x| eps * g0.at(x as i64 * half).conj());
            assert!(g0.dft().distance(&expected).unwrap() < 1e-12, "p = {p}");
        }
    }

    #[test]
    fn gaussians_are_biunimodular() {
        let ctx = GroupCtx::new(7).unwrap();
        let g = gaussian(&ctx, 3, 2).unwrap();
        let r = is_biunimodular(&g, false, DEFAULT_TOL);
        assert!(r.holds);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn bjorck_saffari_counts_and_identity() {
        let ctx5 = GroupCtx::new(5).unwrap();
        let five = bjorck_saffari(&ctx5).unwrap();
        assert_eq!(five.len(), 2);
        assert!((five[0].theta.cos() - 1.0 / (1.0 + 5f64.sqrt())).abs() < 1e-15);
        let ctx7 = GroupCtx::new(7).unwrap();
        let seven = bjorck_saffari(&ctx7).unwrap();
        assert_eq!(seven.len(), 4);
        assert_eq!(quadratic_sign(7), Complex64::new(0.0, 1.0));
        for h in five.iter().chain(&seven) {
            assert!(h.transform_residual().unwrap() < 1e-12);
            for a in 0..h.function.order() as i64 {
                assert!(is_biunimodular(&h.function.translate(a), false, DEFAULT_TOL).holds);
            }
        }
    }

    #[test]
    fn bjorck_saffari_rejects_composite() {
        let ctx = GroupCtx::new(15).unwrap();
        assert_eq!(bjorck_saffari(&ctx).unwrap_err(), Error::NotPrime(15));
    }

    #[test]
    fn odd_basis_shape() {
        let ctx = GroupCtx::new(3).unwrap();
        let b = odd_basis(&ctx);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].values(), &[0.0.into(), 1.0.into(), (-1.0).into()]);
        let ctx = GroupCtx::new(7).unwrap();
        let b = odd_basis(&ctx);
        assert_eq!(b.len(), 3);
        for (i, e) in b.iter().enumerate() {
            for (j, f) in b.iter().enumerate() {
                let ip = e.inner(f).unwrap();
                let want = if i == j { 2.0 } else { 0.0 };
                assert!((ip - Complex64::new(want, 0.0)).norm() < 1e-15);
            }
            let eh = e.dft();
            assert!(eh.is_odd(1e-12));
            assert!(eh.at(0).norm() < 1e-12);
        }
    }
}
