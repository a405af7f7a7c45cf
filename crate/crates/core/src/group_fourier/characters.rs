use num_complex::Complex64;

use super::{unit_root, CyclicFn, GroupCtx};
use crate::arith;
use crate::error::{Error, Result};

/// A multiplicative character `ω^t` of F_p^*, where the Teichmüller character
/// ω sends the smallest primitive root `g0` to `e^{2iπ/(p-1)}`.
/// Extended to F_p by `χ(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletChar {
    ctx: GroupCtx,
    t: u64,
}

impl DirichletChar {
    pub fn new(ctx: &GroupCtx, t: i64) -> Result<Self> {
        ctx.require_prime()?;
        let t = arith::modulo(t, ctx.order() - 1);
        Ok(Self { ctx: ctx.clone(), t })
    }

    /// The unique character of order 2 (Legendre symbol).
    pub fn legendre(ctx: &GroupCtx) -> Result<Self> {
        Self::new(ctx, (ctx.order() as i64 - 1) / 2)
    }

    pub fn principal(ctx: &GroupCtx) -> Result<Self> {
        Self::new(ctx, 0)
    }

    /// All p − 1 characters, by exponent.
    pub fn all(ctx: &GroupCtx) -> Result<Vec<Self>> {
        ctx.require_prime()?;
        (0..ctx.order() as i64 - 1).map(|t| Self::new(ctx, t)).collect()
    }

    pub fn ctx(&self) -> &GroupCtx {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.order()
    }

    pub fn exponent(&self) -> u64 {
        self.t
    }

    pub fn order(&self) -> u64 {
        let m = self.p() - 1;
        m / arith::gcd(self.t, m)
    }

    pub fn is_principal(&self) -> bool {
        self.t == 0
    }

    pub fn is_odd(&self) -> bool {
        self.t % 2 == 1
    }

    pub fn conj(&self) -> Self {
        Self { ctx: self.ctx.clone(), t: (self.p() - 1 - self.t) % (self.p() - 1) }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch { left: self.p(), right: other.p() });
        }
        Ok(Self { ctx: self.ctx.clone(), t: (self.t + other.t) % (self.p() - 1) })
    }

    pub fn pow(&self, k: i64) -> Self {
        let m = self.p() - 1;
        Self { ctx: self.ctx.clone(), t: arith::modulo(k * self.t as i64, m) }
    }

    /// Exponent `e` with `χ(x) = ζ_{p-1}^e`, or `None` at `x ≡ 0`.
    pub fn exponent_at(&self, x: i64) -> Option<u64> {
        let x = self.ctx.reduce(x) as u64;
        let j = self.ctx.dlog(x)?;
        Some(self.t * j % (self.p() - 1))
    }

    pub fn eval(&self, x: i64) -> Complex64 {
        match self.exponent_at(x) {
            Some(e) => unit_root(e as i64, self.p() - 1),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// χ(−1) as ±1.
    pub fn sign(&self) -> i64 {
        if self.is_odd() {
            -1
        } else {
            1
        }
    }

    pub fn to_fn(&self) -> CyclicFn {
        CyclicFn::from_fn(&self.ctx, |x| self.eval(x as i64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicative_and_zero_extended() {
        let ctx = GroupCtx::new(11).unwrap();
        for chi in DirichletChar::all(&ctx).unwrap() {
            assert_eq!(chi.eval(0), Complex64::new(0.0, 0.0));
            for x in 1..11 {
                for y in 1..11 {
                    let lhs = chi.eval(x * y);
                    let rhs = chi.eval(x) * chi.eval(y);
                    assert!((lhs - rhs).norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn parity_and_order() {
        let ctx = GroupCtx::new(13).unwrap();
        for chi in DirichletChar::all(&ctx).unwrap() {
            let minus_one = chi.eval(-1);
            assert!((minus_one - Complex64::new(chi.sign() as f64, 0.0)).norm() < 1e-13);
            let k = chi.order();
            assert!(chi.pow(k as i64).is_principal());
            assert!((1..k).all(|j| !chi.pow(j as i64).is_principal()));
        }
        let legendre = DirichletChar::legendre(&ctx).unwrap();
        assert_eq!(legendre.order(), 2);
        for x in 1..13i64 {
            let is_square = (1..13i64).any(|y| (y * y - x) % 13 == 0);
            assert_eq!(legendre.eval(x).re > 0.0, is_square);
        }
    }

    #[test]
    fn teichmuller_at_generator() {
        let ctx = GroupCtx::new(7).unwrap();
        let omega = DirichletChar::new(&ctx, 1).unwrap();
        assert!((omega.eval(3) - unit_root(1, 6)).norm() < 1e-15);
    }

    #[test]
    fn composite_modulus_rejected() {
        let ctx = GroupCtx::new(9).unwrap();
        assert_eq!(DirichletChar::new(&ctx, 1).unwrap_err(), Error::NotPrime(9));
    }
}
