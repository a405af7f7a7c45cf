use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};

/// Coefficients of the cyclotomic polynomial Φ_m, lowest degree first.
pub fn cyclotomic_poly(m: u64) -> Arc<[i64]> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<[i64]>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().expect("poisoned").get(&m) {
        return p.clone();
    }
    // x^m − 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in arith::divisors(m).into_iter().filter(|&d| d < m) {
        num = divide_monic(&num, &cyclotomic_poly(d));
    }
    let poly: Arc<[i64]> = num.into();
    cache.lock().expect("poisoned").insert(m, poly.clone());
    poly
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = num.len() - dd;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &b) in den.iter().enumerate() {
                rem[i + j] -= c * b;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    q
}

/// An element of Z[ζ_m] in the power basis `1, ζ_m, …, ζ_m^{φ(m)−1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    m: u64,
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "CycInt(m={}, [{}])", self.m, c.join(", "))
    }
}

impl CycInt {
    /// Reduces `Σ c_i ζ_m^i` for an arbitrary-length coefficient list.
    pub fn from_coeffs(m: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        if m == 0 {
            return Err(Error::OutOfRange("conductor must be positive".into()));
        }
        let mut folded = vec![BigInt::zero(); m as usize];
        for (i, c) in coeffs.into_iter().enumerate() {
            folded[i % m as usize] += c;
        }
        Ok(Self::reduce(m, folded))
    }

    /// `Σ_e counts[e] ζ_m^e` for exponents `0 ≤ e < m`.
    pub fn from_exponent_counts(m: u64, counts: &[i64]) -> Self {
        debug_assert_eq!(counts.len(), m as usize);
        Self::reduce(m, counts.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(m: u64) -> Self {
        Self { m, coeffs: vec![BigInt::zero(); arith::euler_phi(m) as usize] }
    }

    pub fn integer(m: u64, c: i64) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[0] = BigInt::from(c);
        z
    }

    /// `ζ_m^k`.
    pub fn zeta_pow(m: u64, k: i64) -> Self {
        let mut counts = vec![0i64; m as usize];
        counts[arith::modulo(k, m) as usize] = 1;
        Self::from_exponent_counts(m, &counts)
    }

    fn reduce(m: u64, mut dense: Vec<BigInt>) -> Self {
        let phi = cyclotomic_poly(m);
        let deg = phi.len() - 1;
        for i in (deg..dense.len()).rev() {
            if dense[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut dense[i]);
            for (j, &b) in phi.iter().enumerate().take(deg) {
                if b != 0 {
                    dense[i - deg + j] -= &c * b;
                }
            }
        }
        dense.truncate(deg);
        dense.resize(deg, BigInt::zero());
        Self { m, coeffs: dense }
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::ConductorMismatch { expected: self.m, got: other.m });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { m: self.m, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { m: self.m, coeffs })
    }

    pub fn neg(&self) -> Self {
        Self { m: self.m, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self { m: self.m, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.coeffs.len();
        let mut dense = vec![BigInt::zero(); (2 * n).saturating_sub(1).max(1)];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                dense[i + j] += a * b;
            }
        }
        Ok(Self::reduce(self.m, dense))
    }

    /// Multiplication by `ζ_m^k`.
    pub fn mul_zeta(&self, k: i64) -> Self {
        let shift = arith::modulo(k, self.m) as usize;
        let m = self.m as usize;
        let mut dense = vec![BigInt::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            dense[(i + shift) % m] += c;
        }
        Self::reduce(self.m, dense)
    }

    /// Image under the Galois automorphism `ζ_m ↦ ζ_m^a`.
    pub fn galois(&self, a: i64) -> Result<Self> {
        let a = arith::modulo(a, self.m);
        if arith::gcd(a, self.m) != 1 {
            return Err(Error::NotAUnit { value: a, modulus: self.m });
        }
        let m = self.m as usize;
        let mut dense = vec![BigInt::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            dense[i * a as usize % m] += c;
        }
        Ok(Self::reduce(self.m, dense))
    }

    /// Complex conjugation, the automorphism `ζ_m ↦ ζ_m^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1).expect("-1 is a unit")
    }

    /// The same element in Z[ζ_M] for a multiple `M` of the conductor.
    pub fn lift(&self, big: u64) -> Result<Self> {
        if !big.is_multiple_of(self.m) {
            return Err(Error::ConductorMismatch { expected: self.m, got: big });
        }
        let step = (big / self.m) as usize;
        let mut dense = vec![BigInt::zero(); big as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            dense[i * step] += c;
        }
        Ok(Self::reduce(big, dense))
    }

    /// Complex embedding `ζ_m ↦ e^{2iπ/m}`.
    pub fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let angle = 2.0 * PI * i as f64 / self.m as f64;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle)
            })
            .sum()
    }

    /// The exponent `k` with `self = ζ_m^k · other`, if any.
    pub fn root_of_unity_quotient(&self, other: &Self) -> Result<Option<u64>> {
        self.check(other)?;
        if other.is_zero() {
            return Ok(None);
        }
        let (a, b) = (self.to_complex(), other.to_complex());
        let r = a / b;
        if (r.norm() - 1.0).abs() > 1e-6 {
            return Ok(None);
        }
        let m = self.m as f64;
        let guess = (r.arg() * m / (2.0 * PI)).round() as i64;
        for k in [guess, guess - 1, guess + 1] {
            if other.mul_zeta(k) == *self {
                return Ok(Some(arith::modulo(k, self.m)));
            }
        }
        Ok(None)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.first().is_some_and(One::is_one) && self.coeffs[1..].iter().all(Zero::is_zero)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Coeff {
    Small(i64),
    Big(String),
}

#[derive(Serialize, Deserialize)]
struct CycIntRepr {
    m: u64,
    coeffs: Vec<Coeff>,
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| match c.to_i64() {
                Some(v) if v.abs() < (1i64 << 53) => Coeff::Small(v),
                _ => Coeff::Big(c.to_string()),
            })
            .collect();
        CycIntRepr { m: self.m, coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycInt {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = CycIntRepr::deserialize(de)?;
        let coeffs = repr
            .coeffs
            .into_iter()
            .map(|c| match c {
                Coeff::Small(v) => Ok(BigInt::from(v)),
                Coeff::Big(s) => s.parse::<BigInt>().map_err(D::Error::custom),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CycInt::from_coeffs(repr.m, coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(&*cyclotomic_poly(1), &[-1, 1]);
        assert_eq!(&*cyclotomic_poly(6), &[1, -1, 1]);
        assert_eq!(&*cyclotomic_poly(12), &[1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(105).iter().map(|c| c.abs()).max(), Some(2));
        assert_eq!(cyclotomic_poly(930).len() as u64 - 1, arith::euler_phi(930));
    }

    #[test]
    fn zeta_relations() {
        for m in [1u64, 2, 6, 10, 12, 30, 36] {
            assert!(CycInt::zeta_pow(m, m as i64).is_one());
            let phi = cyclotomic_poly(m);
            let coeffs = phi.iter().map(|&c| BigInt::from(c)).collect();
            assert!(CycInt::from_coeffs(m, coeffs).unwrap().is_zero());
        }
    }

    #[test]
    fn lift_and_galois() {
        let z = CycInt::zeta_pow(6, 1);
        let lifted = z.lift(42).unwrap();
        assert_eq!(lifted, CycInt::zeta_pow(42, 7));
        assert!((lifted.to_complex() - z.to_complex()).norm() < 1e-12);
        assert_eq!(z.galois(5).unwrap(), CycInt::zeta_pow(6, 5));
        assert_eq!(z.galois(2).unwrap_err(), Error::NotAUnit { value: 2, modulus: 6 });
        assert_eq!(z.conj().mul(&z).unwrap(), CycInt::integer(6, 1));
    }

    #[test]
    fn root_of_unity_quotient_finds_exponent() {
        let a = CycInt::from_exponent_counts(12, &[2, 0, -1, 0, 0, 3, 0, 0, 0, 0, 1, 0]);
        let b = a.mul_zeta(7);
        assert_eq!(b.root_of_unity_quotient(&a).unwrap(), Some(7));
        assert_eq!(a.scale(&BigInt::from(2)).root_of_unity_quotient(&a).unwrap(), None);
    }

    #[test]
    fn json_shape() {
        let z = CycInt::from_exponent_counts(6, &[2, -1, 0, 0, 0, 0]);
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, r#"{"m":6,"coeffs":[2,-1]}"#);
        let back: CycInt = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
        let big = z.scale(&BigInt::from(10).pow(30));
        let back: CycInt = serde_json::from_str(&serde_json::to_string(&big).unwrap()).unwrap();
        assert_eq!(back, big);
    }

    fn arb(m: u64) -> impl Strategy<Value = CycInt> {
        proptest::collection::vec(-5i64..5, m as usize).prop_map(move |c| CycInt::from_exponent_counts(m, &c))
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb(30), b in arb(30), c in arb(30)) {
            let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
            let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
            let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let re = CycInt::from_coeffs(30, a.coeffs().to_vec()).unwrap();
            prop_assert_eq!(&re, &a);
        }

        #[test]
        fn embedding_is_a_homomorphism(a in arb(12), b in arb(12)) {
            let prod = a.mul(&b).unwrap().to_complex();
            let expected = a.to_complex() * b.to_complex();
            prop_assert!((prod - expected).norm() < 1e-10 * (1.0 + expected.norm()));
        }
    }
}
