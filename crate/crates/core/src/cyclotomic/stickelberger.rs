use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::CycInt;
use crate::arith;
use crate::error::{Error, Result};

/// The Jacobi sum reduced modulo p, computed two ways.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StickelbergerReduction {
    pub p: u64,
    pub j: u64,
    pub k: u64,
    /// `Σ_{x≠0,1} x^{−j} (1−x)^{−k} mod p`.
    pub direct: u64,
    /// `−C(j+k, k) mod p`.
    pub binomial: u64,
    /// `j + k < p`.
    pub nonvanishing: bool,
}

impl StickelbergerReduction {
    pub fn consistent(&self) -> bool {
        self.direct == self.binomial && (self.direct != 0) == self.nonvanishing
    }
}

pub fn stickelberger_reduce(p: u64, j: u64, k: u64) -> Result<StickelbergerReduction> {
    if !arith::is_prime(p) || p < 3 {
        return Err(Error::NotPrime(p));
    }
    if j == 0 || k == 0 || j >= p - 1 || k >= p - 1 {
        return Err(Error::OutOfRange(format!("need 0 < j, k < {}, got ({j}, {k})", p - 1)));
    }
    let direct = (2..p).fold(0u64, |acc, x| {
        let a = arith::mod_pow(x, p - 1 - j, p);
        let b = arith::mod_pow(p + 1 - x, p - 1 - k, p);
        (acc + a * b) % p
    });
    let binomial = (p - arith::binomial_mod_prime(j + k, k, p)) % p;
    Ok(StickelbergerReduction { p, j, k, direct, binomial, nonvanishing: j + k < p })
}

/// Image in F_p of an element of Z[ζ_{p−1}] under the reduction modulo the
/// prime ideal containing `g0 − ζ_{p−1}`.
pub fn reduce_mod_prime_ideal(z: &CycInt, p: u64) -> Result<u64> {
    if z.conductor() != p - 1 {
        return Err(Error::ConductorMismatch { expected: p - 1, got: z.conductor() });
    }
    let g0 = arith::smallest_primitive_root(p);
    let pb = BigInt::from(p);
    let mut acc = 0u64;
    let mut pow = 1u64;
    for c in z.coeffs() {
        let r = ((c % &pb + &pb) % &pb).to_u64().expect("reduced");
        acc = (acc + r * pow) % p;
        pow = pow * g0 % p;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::jacobi_sum_exact;
    use crate::group_fourier::{DirichletChar, GroupCtx};

    #[test]
    fn small_cases() {
        let r = stickelberger_reduce(7, 2, 3).unwrap();
        assert_eq!((r.direct, r.binomial, r.nonvanishing), (4, 4, true));
        let r = stickelberger_reduce(7, 4, 3).unwrap();
        assert_eq!((r.direct, r.nonvanishing), (0, false));
        assert!(stickelberger_reduce(7, 0, 3).is_err());
        assert!(stickelberger_reduce(7, 6, 3).is_err());
    }

    #[test]
    fn exhaustive_p11() {
        let mut n = 0;
        for j in 1..10 {
            for k in 1..10 {
                assert!(stickelberger_reduce(11, j, k).unwrap().consistent());
                n += 1;
            }
        }
        assert_eq!(n, 81);
    }

    #[test]
    fn ideal_reduction() {
        assert_eq!(reduce_mod_prime_ideal(&CycInt::zeta_pow(6, 1), 7).unwrap(), 3);
        assert_eq!(reduce_mod_prime_ideal(&CycInt::integer(6, -9), 7).unwrap(), 5);
        assert!(reduce_mod_prime_ideal(&CycInt::integer(4, 1), 7).is_err());
    }

    #[test]
    fn ideal_reduction_of_jacobi_sums() {
        for p in [5u64, 7, 11, 13] {
            let ctx = GroupCtx::prime(p).unwrap();
            for j in 1..p - 1 {
                for k in 1..p - 1 {
                    let a = DirichletChar::new(&ctx, -(j as i64)).unwrap();
                    let b = DirichletChar::new(&ctx, -(k as i64)).unwrap();
                    let z = jacobi_sum_exact(&a, &b).unwrap();
                    let r = stickelberger_reduce(p, j, k).unwrap();
                    assert_eq!(reduce_mod_prime_ideal(&z, p).unwrap(), r.direct, "p={p} j={j} k={k}");
                }
            }
        }
    }
}
