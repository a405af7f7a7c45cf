use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::group_fourier::{unit_root, CyclicFn, DirichletChar, GroupCtx};

/// A subgroup `H = ⟨g0^n⟩` of index `n` in F_p^* with a non-trivial character
/// `c(g0^{nj}) = ζ_{d_H}^{e j}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupChar {
    pub p: u64,
    pub n: u64,
    pub h: Vec<u64>,
    pub c_exponent: u64,
}

impl SubgroupChar {
    pub fn new(p: u64, n: u64, c_exponent: u64) -> Result<Self> {
        let ctx = GroupCtx::prime(p)?;
        if n < 2 || !(p - 1).is_multiple_of(n) {
            return Err(Error::OutOfRange(format!("index {n} must divide {} and be at least 2", p - 1)));
        }
        let dh = (p - 1) / n;
        let e = c_exponent % dh;
        if e == 0 {
            return Err(Error::OutOfRange("the character of H must be non-trivial".into()));
        }
        let h = (0..dh).map(|j| ctx.gen_pow((n * j) as i64).expect("prime")).collect();
        Ok(Self { p, n, h, c_exponent: e })
    }

    /// The odd character of `H = {±1}`.
    pub fn odd(p: u64) -> Result<Self> {
        Self::new(p, (p - 1) / 2, 1)
    }

    pub fn ctx(&self) -> GroupCtx {
        GroupCtx::prime(self.p).expect("validated")
    }

    pub fn order_h(&self) -> u64 {
        (self.p - 1) / self.n
    }

    pub fn order_c(&self) -> u64 {
        let dh = self.order_h();
        dh / arith::gcd(self.c_exponent, dh)
    }

    pub fn contains_minus_one(&self) -> bool {
        self.order_h().is_multiple_of(2)
    }

    /// `c(−1) = −1`; requires `−1 ∈ H`.
    pub fn is_odd(&self) -> bool {
        self.contains_minus_one() && self.c_exponent % 2 == 1
    }

    /// Value of `c` at `g0^{n j}`.
    pub fn c_at(&self, j: i64) -> Complex64 {
        unit_root(self.c_exponent as i64 * j, self.order_h())
    }

    pub fn conj(&self) -> Self {
        let dh = self.order_h();
        Self { p: self.p, n: self.n, h: self.h.clone(), c_exponent: (dh - self.c_exponent) % dh }
    }

    /// Exponents `t` with `ω^t|_H = c`.
    pub fn extension_exponents(&self) -> Vec<u64> {
        let dh = self.order_h();
        (0..self.n).map(|s| self.c_exponent + dh * s).collect()
    }

    /// Characters of F_p^* trivial on H, the trivial one first.
    pub fn trivial_on_h(&self) -> Vec<DirichletChar> {
        let ctx = self.ctx();
        let dh = self.order_h();
        (0..self.n).map(|s| DirichletChar::new(&ctx, (dh * s) as i64).expect("prime")).collect()
    }
}

/// The space `V_{H,c}` of functions with `f(hx) = c(h) f(x)`.
#[derive(Clone, Debug)]
pub struct EquivariantSpace {
    pub base: SubgroupChar,
    /// `g0^i` for `0 ≤ i < n`.
    pub coset_reps: Vec<u64>,
    /// `f_i(g0^{i + n j}) = c(g0^{n j})`, zero off the coset of `g0^i`.
    pub basis: Vec<CyclicFn>,
    pub character_members: Vec<DirichletChar>,
}

impl EquivariantSpace {
    pub fn new(base: SubgroupChar) -> Self {
        let ctx = base.ctx();
        let n = base.n;
        let coset_reps: Vec<u64> = (0..n).map(|i| ctx.gen_pow(i as i64).expect("prime")).collect();
        let basis = (0..n)
            .map(|i| {
                CyclicFn::from_fn(&ctx, |x| match ctx.dlog(x) {
                    Some(l) if l % n == i => base.c_at(((l - i) / n) as i64),
                    _ => Complex64::new(0.0, 0.0),
                })
            })
            .collect();
        let character_members = base
            .extension_exponents()
            .into_iter()
            .map(|t| DirichletChar::new(&ctx, t as i64).expect("prime"))
            .collect();
        Self { base, coset_reps, basis, character_members }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ctx(&self) -> GroupCtx {
        self.base.ctx()
    }

    /// The space for the conjugate character, with the same coset representatives.
    pub fn conj(&self) -> Self {
        Self::new(self.base.conj())
    }

    /// Index of the coset containing the unit `x`.
    pub fn coset_of(&self, x: u64) -> Option<usize> {
        self.ctx().dlog(x).map(|l| (l % self.base.n) as usize)
    }

    /// `Σ λ_i f_i`.
    pub fn combine(&self, coeffs: &[Complex64]) -> Result<CyclicFn> {
        if coeffs.len() != self.dim() {
            return Err(Error::SizeMismatch(coeffs.len(), self.dim()));
        }
        let mut out = CyclicFn::zeros(&self.ctx());
        for (c, f) in coeffs.iter().zip(&self.basis) {
            out = out.add(&f.scale(*c))?;
        }
        Ok(out)
    }

    /// Coordinates `λ_i = f(g_i)` of a member; errors when `f ∉ V_{H,c}`.
    pub fn coordinates(&self, f: &CyclicFn, tol: f64) -> Result<Vec<Complex64>> {
        let coeffs: Vec<Complex64> = self.coset_reps.iter().map(|&g| f.at(g as i64)).collect();
        let back = self.combine(&coeffs)?;
        let err = back.distance(f)?;
        if err > tol * (1.0 + f.norm()) {
            return Err(Error::NotInSubspace(format!("distance {err:.3e} from V_(H,c)")));
        }
        Ok(coeffs)
    }

    pub fn contains(&self, f: &CyclicFn, tol: f64) -> bool {
        self.coordinates(f, tol).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn subgroup_elements_and_parity() {
        let s = SubgroupChar::odd(11).unwrap();
        let mut h = s.h.clone();
        h.sort();
        assert_eq!(h, vec![1, 10]);
        assert!(s.is_odd());
        let s = SubgroupChar::new(13, 3, 1).unwrap();
        assert_eq!(s.order_h(), 4);
        assert_eq!(s.order_c(), 4);
        assert!(s.contains_minus_one() && s.is_odd());
        let s = SubgroupChar::new(7, 2, 1).unwrap();
        assert!(!s.contains_minus_one() && !s.is_odd());
        assert!(SubgroupChar::new(13, 5, 1).is_err());
        assert!(SubgroupChar::new(13, 3, 4).is_err());
    }

    #[test]
    fn members_vanish_at_zero_and_are_equivariant() {
        for (p, n, e) in [(7u64, 3u64, 1u64), (13, 3, 1), (13, 2, 5), (13, 4, 2), (11, 2, 3)] {
            let space = EquivariantSpace::new(SubgroupChar::new(p, n, e).unwrap());
            let ctx = space.ctx();
            assert_eq!(space.character_members.len(), n as usize);
            for chi in &space.character_members {
                let f = chi.to_fn();
                assert!(space.contains(&f, 1e-12), "p={p} n={n} t={}", chi.exponent());
            }
            let inside =
                DirichletChar::all(&ctx).unwrap().into_iter().filter(|c| space.contains(&c.to_fn(), 1e-9)).count();
            assert_eq!(inside, n as usize);
            for f in &space.basis {
                assert_eq!(f.at(0), Complex64::new(0.0, 0.0));
                for (j, &h) in space.base.h.iter().enumerate() {
                    for x in 1..p {
                        let lhs = f.at((h * x % p) as i64);
                        let rhs = space.base.c_at(j as i64) * f.at(x as i64);
                        assert!((lhs - rhs).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn transform_maps_into_conjugate_space() {
        for (p, n, e) in [(7u64, 3u64, 1u64), (13, 3, 1), (13, 4, 1), (11, 5, 1), (13, 2, 1)] {
            let space = EquivariantSpace::new(SubgroupChar::new(p, n, e).unwrap());
            let conj = space.conj();
            for f in &space.basis {
                assert!(conj.contains(&f.dft(), 1e-10));
            }
        }
    }

    proptest! {
        #[test]
        fn sup_norm_matches_coefficients(re in proptest::collection::vec(-3.0f64..3.0, 3), im in proptest::collection::vec(-3.0f64..3.0, 3)) {
            let space = EquivariantSpace::new(SubgroupChar::new(13, 3, 1).unwrap());
            let coeffs: Vec<Complex64> = re.iter().zip(&im).map(|(a, b)| Complex64::new(*a, *b)).collect();
            let f = space.combine(&coeffs).unwrap();
            let sup = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
            prop_assert!((f.sup_norm() - sup).abs() < 1e-12);
            let back = space.coordinates(&f, 1e-12).unwrap();
            for (a, b) in back.iter().zip(&coeffs) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }
    }
}
