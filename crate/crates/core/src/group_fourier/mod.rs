//! Functions on the cyclic group Z/dZ, the unitary Fourier transform, and the
//! named families (characters, gaussians, Björck–Saffari functions).

mod characters;
mod families;
mod predicates;

pub use characters::DirichletChar;
pub use families::{bjorck_saffari, gaussian, odd_basis, BjorckSaffari};
pub use predicates::{is_biunimodular, is_c_function, BiunimodularReport, CFunctionReport};

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};

/// Default tolerance for the numerical predicates.
pub const DEFAULT_TOL: f64 = 1e-10;

/// `e^{2iπ k/d}` with `k` reduced modulo `d` before the angle is formed.
pub fn unit_root(k: i64, d: u64) -> Complex64 {
    let r = arith::modulo(k, d);
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / d as f64)
}

/// Discrete logarithm tables for a prime modulus.
#[derive(Debug)]
pub struct PrimeData {
    g0: u64,
    dlog: Vec<u64>,
    powers: Vec<u64>,
}

impl PrimeData {
    fn new(p: u64) -> Self {
        let g0 = arith::smallest_primitive_root(p);
        let mut dlog = vec![0; p as usize];
        let mut powers = Vec::with_capacity(p as usize - 1);
        let mut x = 1u64;
        for j in 0..p - 1 {
            dlog[x as usize] = j;
            powers.push(x);
            x = x * g0 % p;
        }
        Self { g0, dlog, powers }
    }
}

/// The cyclic group C_d of odd order `d >= 3`.
#[derive(Clone)]
pub struct GroupCtx {
    d: u64,
    prime: Option<Arc<PrimeData>>,
}

impl fmt::Debug for GroupCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupCtx").field("d", &self.d).field("g0", &self.primitive_root()).finish()
    }
}

impl PartialEq for GroupCtx {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d
    }
}

impl Eq for GroupCtx {}

impl GroupCtx {
    pub fn new(d: u64) -> Result<Self> {
        if d < 3 || d.is_multiple_of(2) {
            return Err(Error::InvalidOrder(d));
        }
        let prime = arith::is_prime(d).then(|| Arc::new(PrimeData::new(d)));
        Ok(Self { d, prime })
    }

    /// Like [`GroupCtx::new`] but rejects composite orders.
    pub fn prime(p: u64) -> Result<Self> {
        let ctx = Self::new(p)?;
        if !ctx.is_prime() {
            return Err(Error::NotPrime(p));
        }
        Ok(ctx)
    }

    pub fn order(&self) -> u64 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.d as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_prime(&self) -> bool {
        self.prime.is_some()
    }

    pub fn primitive_root(&self) -> Option<u64> {
        self.prime.as_ref().map(|p| p.g0)
    }

    /// Index `j` with `g0^j = x`, for `x` a unit of a prime field.
    pub fn dlog(&self, x: u64) -> Option<u64> {
        let data = self.prime.as_ref()?;
        let x = x % self.d;
        (x != 0).then(|| data.dlog[x as usize])
    }

    /// `g0^j mod p`.
    pub fn gen_pow(&self, j: i64) -> Option<u64> {
        let data = self.prime.as_ref()?;
        Some(data.powers[arith::modulo(j, self.d - 1) as usize])
    }

    pub fn reduce(&self, k: i64) -> usize {
        arith::modulo(k, self.d) as usize
    }

    fn require_prime(&self) -> Result<()> {
        if self.is_prime() {
            Ok(())
        } else {
            Err(Error::NotPrime(self.d))
        }
    }
}

/// A complex-valued function on C_d.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicFn {
    ctx: GroupCtx,
    values: Vec<Complex64>,
}

impl CyclicFn {
    pub fn new(ctx: GroupCtx, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != ctx.len() {
            return Err(Error::SizeMismatch(values.len(), ctx.len()));
        }
        Ok(Self { ctx, values })
    }

    /// Builds a function from its values; the group order is the length.
    pub fn from_values(values: Vec<Complex64>) -> Result<Self> {
        let ctx = GroupCtx::new(values.len() as u64)?;
        Ok(Self { ctx, values })
    }

    pub fn from_fn(ctx: &GroupCtx, f: impl Fn(u64) -> Complex64) -> Self {
        let values = (0..ctx.order()).map(f).collect();
        Self { ctx: ctx.clone(), values }
    }

    pub fn zeros(ctx: &GroupCtx) -> Self {
        Self::from_fn(ctx, |_| Complex64::new(0.0, 0.0))
    }

    pub fn delta(ctx: &GroupCtx, at: i64) -> Self {
        let k = ctx.reduce(at) as u64;
        Self::from_fn(ctx, |x| if x == k { 1.0.into() } else { 0.0.into() })
    }

    /// Indicator of C_d minus the origin.
    pub fn punctured_one(ctx: &GroupCtx) -> Self {
        Self::from_fn(ctx, |x| if x == 0 { 0.0.into() } else { 1.0.into() })
    }

    pub fn constant(ctx: &GroupCtx, c: Complex64) -> Self {
        Self::from_fn(ctx, |_| c)
    }

    pub fn ctx(&self) -> &GroupCtx {
        &self.ctx
    }

    pub fn order(&self) -> u64 {
        self.ctx.order()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn at(&self, k: i64) -> Complex64 {
        self.values[self.ctx.reduce(k)]
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch { left: self.order(), right: other.order() });
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { ctx: self.ctx.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.check_ctx(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { ctx: self.ctx.clone(), values })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    /// `x ↦ f(-x)`.
    pub fn reflect(&self) -> Self {
        Self::from_fn(&self.ctx, |x| self.at(-(x as i64)))
    }

    /// `x ↦ f(x - a)`.
    pub fn translate(&self, a: i64) -> Self {
        Self::from_fn(&self.ctx, |x| self.at(x as i64 - a))
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Hermitian inner product, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_ctx(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.sup_norm())
    }

    pub fn sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    pub fn is_odd(&self, tol: f64) -> bool {
        (0..self.order() as i64).all(|x| (self.at(x) + self.at(-x)).norm() <= tol)
    }

    pub fn is_even(&self, tol: f64) -> bool {
        (0..self.order() as i64).all(|x| (self.at(x) - self.at(-x)).norm() <= tol)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.values.iter().all(|v| v.im.abs() <= tol)
    }

    /// Unitary transform `f̂(k) = d^{-1/2} Σ_ℓ e^{2iπkℓ/d} f(ℓ)`.
    pub fn dft(&self) -> Self {
        self.transform(1)
    }

    /// Inverse of [`CyclicFn::dft`].
    pub fn idft(&self) -> Self {
        self.transform(-1)
    }

    fn transform(&self, sign: i64) -> Self {
        let d = self.order();
        let scale = 1.0 / (d as f64).sqrt();
        let roots: Vec<Complex64> = (0..d).map(|r| unit_root(sign * r as i64, d)).collect();
        let values = (0..d)
            .map(|k| {
                let s: Complex64 = (0..d).map(|l| roots[((k * l) % d) as usize] * self.values[l as usize]).sum();
                s * scale
            })
            .collect();
        Self { ctx: self.ctx.clone(), values }
    }

    /// `(f ∗ g)(k) = Σ_ℓ f(k − ℓ) g(ℓ)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let d = self.order() as i64;
        let values = (0..d).map(|k| (0..d).map(|l| self.at(k - l) * other.values[l as usize]).sum()).collect();
        Ok(Self { ctx: self.ctx.clone(), values })
    }
}

impl Serialize for CyclicFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.values.iter().map(|v| [v.re, v.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclicFn {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(de)?;
        let values = pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        CyclicFn::from_values(values).map_err(D::Error::custom)
    }
}
