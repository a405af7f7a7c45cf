use std::fmt;

use serde::{Deserialize, Serialize};

use super::{gauss_conductor, gauss_sum_exact, jacobi_sum_exact};
use crate::error::{Error, Result};
use crate::group_fourier::DirichletChar;

/// Label of the seven exceptional configurations shared by the Jacobi ratio
/// classifier and the orbit scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseLabel {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 7] =
        [CaseLabel::A, CaseLabel::B, CaseLabel::C, CaseLabel::D, CaseLabel::E, CaseLabel::F, CaseLabel::G];
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            CaseLabel::A => 'a',
            CaseLabel::B => 'b',
            CaseLabel::C => 'c',
            CaseLabel::D => 'd',
            CaseLabel::E => 'e',
            CaseLabel::F => 'f',
            CaseLabel::G => 'g',
        };
        write!(f, "{c}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RatioVerdict {
    NotRootOfUnity,
    /// `J(χ̄₁, χ₂) = ζ_{p−1}^k J(χ₁, χ₂)`.
    RootOfUnity {
        k: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobiRatioClass {
    #[serde(flatten)]
    pub verdict: RatioVerdict,
    /// Case matched by the order pattern alone.
    pub case_label: Option<CaseLabel>,
    /// Case matched by the exponents: as `case_label`, except that the order
    /// pattern (5, 10) also needs `χ₁ = χ₂^{±2}`.
    pub refined_case: Option<CaseLabel>,
}

impl JacobiRatioClass {
    pub fn is_root_of_unity(&self) -> bool {
        matches!(self.verdict, RatioVerdict::RootOfUnity { .. })
    }
}

/// The case of the order pattern `(d₁, d₂)` of `(χ₁, χ₂)` modulo `p`, if any.
pub fn ratio_case(p: u64, d1: u64, d2: u64) -> Option<CaseLabel> {
    let q = |m: u64| p % m == 1;
    match (d1, d2) {
        (2, _) => Some(CaseLabel::A),
        (3, 6) if q(6) => Some(CaseLabel::B),
        (5, 10) if q(10) => Some(CaseLabel::C),
        (4, 6) if q(12) => Some(CaseLabel::D),
        (3, 4) if q(12) => Some(CaseLabel::E),
        (5, 6) if q(30) => Some(CaseLabel::F),
        (3, 10) if q(30) => Some(CaseLabel::G),
        _ => None,
    }
}

/// The case of `(ω^j, ω^k)` modulo `p` with the exponent condition on (c).
pub fn ratio_case_refined(p: u64, j: u64, k: u64) -> Option<CaseLabel> {
    let d = p - 1;
    let order = |t: u64| d / crate::arith::gcd(t % d, d);
    match ratio_case(p, order(j), order(k)) {
        Some(CaseLabel::C) => {
            let (j, k2) = (j % d, 2 * k % d);
            (j == k2 || (j + k2) % d == 0).then_some(CaseLabel::C)
        }
        other => other,
    }
}

/// Decides exactly whether `J(χ̄₁, χ₂)/J(χ₁, χ₂)` is a root of unity.
pub fn ratio_is_root_of_unity(chi1: &DirichletChar, chi2: &DirichletChar) -> Result<JacobiRatioClass> {
    if chi1.is_principal() || chi2.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    let num = jacobi_sum_exact(&chi1.conj(), chi2)?;
    let den = jacobi_sum_exact(chi1, chi2)?;
    let verdict = match num.root_of_unity_quotient(&den)? {
        Some(k) => RatioVerdict::RootOfUnity { k },
        None => RatioVerdict::NotRootOfUnity,
    };
    let p = chi1.p();
    Ok(JacobiRatioClass {
        verdict,
        case_label: ratio_case(p, chi1.order(), chi2.order()),
        refined_case: ratio_case_refined(p, chi1.exponent(), chi2.exponent()),
    })
}

/// Decides that `G(χ₀χ)/G(χ)` is not a root of unity, χ₀ the Legendre
/// character. Uses `G(χ₀)/J(χ, χ₀)` when χ ∉ {1, χ₀}; otherwise the moduli
/// `√p` and `1` differ.
pub fn gauss_ratio_not_root_of_unity(chi: &DirichletChar) -> Result<bool> {
    let legendre = DirichletChar::legendre(chi.ctx())?;
    if chi.is_principal() || *chi == legendre {
        return Ok(true);
    }
    let p = chi.p();
    let g0 = gauss_sum_exact(&legendre)?;
    let j = jacobi_sum_exact(chi, &legendre)?.lift(gauss_conductor(p))?;
    Ok(g0.root_of_unity_quotient(&j)?.is_none())
}
