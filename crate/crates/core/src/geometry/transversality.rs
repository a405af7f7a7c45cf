use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{EquivariantSpace, SubgroupChar};
use crate::arith;
use crate::cyclotomic::{gauss_sum_exact, jacobi_sum_exact};
use crate::error::{Error, Result};
use crate::group_fourier::{bjorck_saffari, gaussian, CyclicFn, DirichletChar, GroupCtx};

/// Default relative threshold below which a singular value counts as zero.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransversalityReport {
    pub point: String,
    /// Verdict of the Jacobi-sum test, for character points.
    pub criterion_verdict: Option<bool>,
    pub numeric_verdict: bool,
    /// Exponents of the characters ψ trivial on H with `J(χ,ψ) = ψ(−1) J(χ̄,ψ)`.
    pub offending: Vec<u64>,
    pub intersection_dim: usize,
    pub singular_values: Vec<f64>,
}

impl TransversalityReport {
    /// True when the two verdicts agree, or only the numeric one exists.
    pub fn agrees(&self) -> bool {
        self.criterion_verdict.is_none_or(|c| c == self.numeric_verdict)
    }
}

/// Dimension of the intersection of the tangent spaces, at `[point]`, of the
/// torus `|f| const on source` and of the torus `|f̂| const on target`, in the
/// affine chart `f = point + Σ a_k chart_k`. Returns the dimension and the
/// singular values of the real system.
pub fn tangent_intersection(
    point: &CyclicFn,
    chart: &[CyclicFn],
    source: &[u64],
    target: &[u64],
    tol: f64,
) -> Result<(usize, Vec<f64>)> {
    let hat = point.dft();
    check_on_torus(point, source)?;
    check_on_torus(&hat, target)?;
    let k = chart.len();
    let rows = source.len().saturating_sub(1) + target.len().saturating_sub(1);
    let mut m = DMatrix::<f64>::zeros(rows.max(1), 2 * k);
    for (ci, c) in chart.iter().enumerate() {
        let c_hat = c.dft();
        for (col, u) in [(2 * ci, Complex64::new(1.0, 0.0)), (2 * ci + 1, Complex64::new(0.0, 1.0))] {
            let mut r = 0;
            for (v, dv, pts) in [(point, c, source), (&hat, &c_hat, target)] {
                let phase = |x: u64| ((u * dv.at(x as i64)) / v.at(x as i64)).re;
                let base = phase(pts[0]);
                for &x in &pts[1..] {
                    m[(r, col)] = phase(x) - base;
                    r += 1;
                }
            }
        }
    }
    let sv: Vec<f64> = m.singular_values().iter().copied().collect();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let rank = sv.iter().filter(|&&s| s > tol * smax.max(f64::MIN_POSITIVE)).count();
    let mut sorted = sv;
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok((2 * k - rank, sorted))
}

fn check_on_torus(f: &CyclicFn, pts: &[u64]) -> Result<()> {
    let r0 = f.at(pts[0] as i64).norm();
    let dev = pts.iter().map(|&x| (f.at(x as i64).norm() - r0).abs()).fold(0.0, f64::max);
    if r0 == 0.0 || dev > 1e-8 * r0 {
        return Err(Error::OffTorus(dev));
    }
    Ok(())
}

/// Generic numeric check on the full torus of F_p, chart `φ ↦ (1 + φ) point`
/// with `φ(0) = 0`.
pub fn numeric_transversal_at(point: &CyclicFn, label: &str, tol: f64) -> Result<TransversalityReport> {
    let ctx = point.ctx().clone();
    let p = ctx.order();
    let chart: Vec<CyclicFn> = (1..p).map(|y| CyclicFn::delta(&ctx, y as i64).scale(point.at(y as i64))).collect();
    let pts: Vec<u64> = (0..p).collect();
    let (dim, sv) = tangent_intersection(point, &chart, &pts, &pts, tol)?;
    Ok(TransversalityReport {
        point: label.to_string(),
        criterion_verdict: None,
        numeric_verdict: dim == 0,
        offending: vec![],
        intersection_dim: dim,
        singular_values: sv,
    })
}

/// Characters ψ ≠ 1 trivial on H violating `J(χ,ψ) ≠ ψ(−1) J(χ̄,ψ)`, by exact
/// comparison in Z[ζ_{p−1}].
pub fn criterion_offenders(chi: &DirichletChar, space: &EquivariantSpace) -> Result<Vec<u64>> {
    check_extends(chi, space)?;
    let mut out = Vec::new();
    for psi in space.base.trivial_on_h().into_iter().skip(1) {
        let lhs = jacobi_sum_exact(chi, &psi)?;
        let rhs = jacobi_sum_exact(&chi.conj(), &psi)?;
        let rhs = if psi.is_odd() { rhs.neg() } else { rhs };
        if lhs == rhs {
            out.push(psi.exponent());
        }
    }
    Ok(out)
}

fn check_extends(chi: &DirichletChar, space: &EquivariantSpace) -> Result<()> {
    if !space.character_members.contains(chi) {
        return Err(Error::NotInSubspace(format!("ω^{} does not extend the character of H", chi.exponent())));
    }
    Ok(())
}

/// Exact criterion only.
pub fn criterion_transversal_at(chi: &DirichletChar, space: &EquivariantSpace) -> Result<TransversalityReport> {
    let offending = criterion_offenders(chi, space)?;
    Ok(TransversalityReport {
        point: format!("omega^{}", chi.exponent()),
        criterion_verdict: Some(offending.is_empty()),
        numeric_verdict: offending.is_empty(),
        intersection_dim: 2 * offending.len(),
        offending,
        singular_values: vec![],
    })
}

/// Exact criterion together with the tangent computation in the chart
/// `a ↦ (1 + Σ_{ψ ≠ 1} a_ψ ψ) χ`, evaluated on coset representatives.
pub fn transversality_at_character(
    chi: &DirichletChar,
    space: &EquivariantSpace,
    tol: f64,
) -> Result<TransversalityReport> {
    let offending = criterion_offenders(chi, space)?;
    let point = chi.to_fn();
    let chart: Vec<CyclicFn> =
        space.base.trivial_on_h().into_iter().skip(1).map(|psi| psi.mul(chi).expect("same field").to_fn()).collect();
    let reps = &space.coset_reps;
    let (dim, sv) = tangent_intersection(&point, &chart, reps, reps, tol)?;
    Ok(TransversalityReport {
        point: format!("omega^{}", chi.exponent()),
        criterion_verdict: Some(offending.is_empty()),
        numeric_verdict: dim == 0,
        offending,
        intersection_dim: dim,
        singular_values: sv,
    })
}

/// `α_ψ` measured from the transform, against `G(ψ)/J(χ,ψ)`; returns the
/// largest discrepancy over ψ ≠ 1 trivial on H.
pub fn alpha_discrepancy(chi: &DirichletChar, space: &EquivariantSpace) -> Result<f64> {
    check_extends(chi, space)?;
    let coeff = |c: &DirichletChar| -> Result<Complex64> {
        let f = c.to_fn();
        f.conj().inner(&f.dft())
    };
    let base = coeff(chi)?;
    let mut worst = 0.0f64;
    for psi in space.base.trivial_on_h().into_iter().skip(1) {
        let measured = coeff(&psi.mul(chi)?)? / base;
        let exact = gauss_sum_exact(&psi)?.to_complex() / jacobi_sum_exact(chi, &psi)?.to_complex();
        worst = worst.max((measured - exact).norm());
    }
    Ok(worst)
}

/// Every (H, c, χ) with H proper, c non-trivial and χ extending c, for one prime.
pub fn all_character_instances(p: u64) -> Result<Vec<(EquivariantSpace, DirichletChar)>> {
    let mut out = Vec::new();
    for n in arith::divisors(p - 1).into_iter().filter(|&n| n >= 2) {
        let dh = (p - 1) / n;
        for e in 1..dh {
            let space = EquivariantSpace::new(SubgroupChar::new(p, n, e)?);
            for chi in space.character_members.clone() {
                out.push((space.clone(), chi));
            }
        }
    }
    Ok(out)
}

/// Which of the four excluded configurations `(d_c, n)` applies, if any.
pub fn excluded_configuration(d_c: u64, n: u64) -> Option<&'static str> {
    if d_c == 2 && n % 2 == 1 {
        Some("i")
    } else if d_c == 2 && n % 12 == 6 {
        Some("ii")
    } else if d_c == 3 && (n.is_multiple_of(4) || n.is_multiple_of(10)) && !n.is_multiple_of(3) {
        Some("iii")
    } else if d_c == 5 && n.is_multiple_of(6) && !n.is_multiple_of(5) {
        Some("iv")
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum Setup {
    /// `(p−1)/2` prime: only the odd space is available.
    SafePrime { p: u64 },
    /// H of prime index `n = ℓ`, ℓ the smallest odd prime factor of p−1.
    OddPrimeIndex { p: u64, base: SubgroupChar, d_c: u64, all_transverse: bool },
    /// p−1 a power of two: H of index 4.
    PowerOfTwo { p: u64, base: SubgroupChar, d_c: u64, all_transverse: bool },
}

/// Picks (H, c) with `−1 ∈ H`, c odd and `(d_c, n)` outside the excluded
/// configurations, or flags a safe prime; the choice is checked against the
/// exact criterion at every character of the space.
pub fn classify_setup(p: u64) -> Result<Setup> {
    if p < 11 || !arith::is_prime(p) {
        return Err(Error::OutOfRange(format!("need a prime p >= 11, got {p}")));
    }
    if arith::is_safe_prime(p) {
        return Ok(Setup::SafePrime { p });
    }
    let d = p - 1;
    let odd = arith::prime_factors(d).into_iter().find(|&l| l % 2 == 1);
    let n = odd.unwrap_or(4);
    let base = SubgroupChar::new(p, n, 1)?;
    let d_c = base.order_c();
    if !base.contains_minus_one() || !base.is_odd() {
        return Err(Error::DegenerateKernel(format!("p={p}: chosen character is not odd")));
    }
    if let Some(case) = excluded_configuration(d_c, n) {
        return Err(Error::DegenerateKernel(format!("p={p}: (d_c, n) = ({d_c}, {n}) is excluded ({case})")));
    }
    let space = EquivariantSpace::new(base.clone());
    let mut all_transverse = true;
    for chi in &space.character_members {
        all_transverse &= criterion_offenders(chi, &space)?.is_empty();
    }
    Ok(match odd {
        Some(_) => Setup::OddPrimeIndex { p, base, d_c, all_transverse },
        None => Setup::PowerOfTwo { p, base, d_c, all_transverse },
    })
}

/// Numeric reports at every gaussian `g_{m,a}` with `m = 1` (the others are
/// images under symmetries) and every Björck–Saffari function.
pub fn family_reports(p: u64, tol: f64) -> Result<Vec<TransversalityReport>> {
    let ctx = GroupCtx::prime(p)?;
    let mut out = vec![numeric_transversal_at(&gaussian(&ctx, 1, 0)?, "gaussian m=1 a=0", tol)?];
    if p >= 5 {
        for (i, h) in bjorck_saffari(&ctx)?.into_iter().enumerate() {
            out.push(numeric_transversal_at(&h.function, &format!("bjorck-saffari #{i}"), tol)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(p: u64, t: i64) -> DirichletChar {
        DirichletChar::new(&GroupCtx::prime(p).unwrap(), t).unwrap()
    }

    #[test]
    fn legendre_in_odd_space_is_not_transverse() {
        for p in [7u64, 11] {
            let space = EquivariantSpace::new(SubgroupChar::odd(p).unwrap());
            let legendre = DirichletChar::legendre(&space.ctx()).unwrap();
            let r = transversality_at_character(&legendre, &space, RANK_TOL).unwrap();
            assert_eq!(r.criterion_verdict, Some(false));
            assert!(!r.numeric_verdict);
            assert!(r.intersection_dim >= 1);
        }
    }

    #[test]
    fn order_ten_character_is_transverse() {
        let space = EquivariantSpace::new(SubgroupChar::odd(11).unwrap());
        let r = transversality_at_character(&ch(11, 1), &space, RANK_TOL).unwrap();
        assert_eq!(r.criterion_verdict, Some(true));
        assert!(r.numeric_verdict);
        assert!(r.offending.is_empty());
    }

    #[test]
    fn index_three_at_thirteen() {
        for e in [1u64, 3] {
            let space = EquivariantSpace::new(SubgroupChar::new(13, 3, e).unwrap());
            for chi in &space.character_members {
                let r = transversality_at_character(chi, &space, RANK_TOL).unwrap();
                assert_eq!(r.criterion_verdict, Some(true));
                assert!(r.agrees());
            }
        }
    }

    #[test]
    fn criterion_matches_tangent_rank() {
        for p in [3u64, 5, 7, 11, 13] {
            for (space, chi) in all_character_instances(p).unwrap() {
                let r = transversality_at_character(&chi, &space, RANK_TOL).unwrap();
                assert!(r.agrees(), "p={p} n={} e={} t={}", space.base.n, space.base.c_exponent, chi.exponent());
                assert!(alpha_discrepancy(&chi, &space).unwrap() < 1e-9);
            }
        }
    }

    #[test]
    fn character_not_extending_c_is_rejected() {
        let space = EquivariantSpace::new(SubgroupChar::odd(7).unwrap());
        assert!(matches!(criterion_transversal_at(&ch(7, 2), &space), Err(Error::NotInSubspace(_))));
    }

    #[test]
    fn setups() {
        match classify_setup(13).unwrap() {
            Setup::OddPrimeIndex { base, d_c, all_transverse, .. } => {
                assert_eq!((base.n, d_c), (3, 4));
                assert!(all_transverse);
            }
            s => panic!("{s:?}"),
        }
        match classify_setup(17).unwrap() {
            Setup::PowerOfTwo { base, d_c, all_transverse, .. } => {
                assert_eq!((base.n, d_c), (4, 4));
                assert!(all_transverse);
            }
            s => panic!("{s:?}"),
        }
        assert_eq!(classify_setup(11).unwrap(), Setup::SafePrime { p: 11 });
        assert!(classify_setup(7).is_err());
        assert!(classify_setup(15).is_err());
        for p in (11..200).filter(|&p| arith::is_prime(p)) {
            match classify_setup(p).unwrap() {
                Setup::SafePrime { .. } => assert!(arith::is_prime((p - 1) / 2)),
                Setup::OddPrimeIndex { all_transverse, .. } | Setup::PowerOfTwo { all_transverse, .. } => {
                    assert!(all_transverse, "p={p}")
                }
            }
        }
    }

    #[test]
    fn gaussian_and_bjorck_saffari_points() {
        for p in [3u64, 5, 7, 11, 13] {
            for r in family_reports(p, RANK_TOL).unwrap() {
                assert!(r.numeric_verdict, "p={p} {}", r.point);
            }
        }
    }

    #[test]
    fn off_torus_point_is_rejected() {
        let ctx = GroupCtx::prime(7).unwrap();
        let f = CyclicFn::from_fn(&ctx, |x| Complex64::new(1.0 + x as f64, 0.0));
        assert!(matches!(numeric_transversal_at(&f, "ramp", RANK_TOL), Err(Error::OffTorus(_))));
    }
}
