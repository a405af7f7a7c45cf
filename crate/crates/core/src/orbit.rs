//! Orbits of exponent pairs `(j, k)` modulo `d` under `(j, k) ~ (xj, xk)` for
//! units `x`, canonical representatives, and the seven exceptional families.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::cyclotomic::CaseLabel;
use crate::error::{Error, Result};

/// A unit `x` with `(j', k') ≡ (±xj, xk)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub x: u64,
    /// True when the representative is equivalent to `(−j, k)`.
    pub negated: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalCase {
    pub label: CaseLabel,
    pub m: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairClass {
    pub d: u64,
    pub j: u64,
    pub k: u64,
    pub representative: Option<(u64, u64)>,
    pub witness: Option<Witness>,
    pub exceptional_case: Option<ExceptionalCase>,
}

impl PairClass {
    /// Representative found exactly when no family matches.
    pub fn is_consistent(&self) -> bool {
        self.representative.is_some() != self.exceptional_case.is_some()
    }
}

/// `(j, k) ~ (j', k')`: some unit `x` with `j' ≡ xj` and `k' ≡ xk` (mod d).
pub fn equivalent(d: u64, a: (u64, u64), b: (u64, u64)) -> bool {
    arith::units(d).into_iter().any(|x| x * a.0 % d == b.0 % d && x * a.1 % d == b.1 % d)
}

fn check_range(d: u64, j: u64, k: u64) -> Result<()> {
    if d < 2 {
        return Err(Error::OutOfRange(format!("modulus must be at least 2, got {d}")));
    }
    if j == 0 || k == 0 || j >= d || k >= d {
        return Err(Error::OutOfRange(format!("need 0 < j, k < {d}, got ({j}, {k})")));
    }
    Ok(())
}

/// Every family among (a)–(g) that the pair belongs to. Family (c) is taken
/// closed under the unit action: besides `j ≡ ±2m, k ≡ ±m` it contains the
/// image `j ≡ ±4m, k ≡ ±3m` under multiplication by 3.
pub fn exceptional_families(d: u64, j: u64, k: u64) -> Vec<ExceptionalCase> {
    families(d, j, k, true)
}

/// The families with (c) restricted to the literal pattern `j ≡ ±2m, k ≡ ±m`,
/// which is not a union of orbits when `10 | d`.
pub fn exceptional_families_literal(d: u64, j: u64, k: u64) -> Vec<ExceptionalCase> {
    families(d, j, k, false)
}

fn families(d: u64, j: u64, k: u64, closed: bool) -> Vec<ExceptionalCase> {
    let mut out = Vec::new();
    let pm = |r: u64, base: u64| r % d == base % d || (r + base).is_multiple_of(d);
    let mut push = |label, base: u64, hit: &dyn Fn(u64) -> bool| {
        if d.is_multiple_of(base) && hit(d / base) {
            out.push(ExceptionalCase { label, m: d / base });
        }
    };
    push(CaseLabel::A, 2, &|m| j == m && k != m);
    push(CaseLabel::B, 6, &|m| pm(j, 2 * m) && pm(k, m));
    push(CaseLabel::C, 10, &|m| (pm(j, 2 * m) && pm(k, m)) || (closed && pm(j, 4 * m) && pm(k, 3 * m)));
    push(CaseLabel::D, 12, &|m| pm(j, 3 * m) && pm(k, 2 * m));
    push(CaseLabel::E, 12, &|m| pm(j, 4 * m) && pm(k, 3 * m));
    push(CaseLabel::F, 30, &|m| (pm(j, 6 * m) || pm(j, 12 * m)) && pm(k, 5 * m));
    push(CaseLabel::G, 30, &|m| pm(j, 10 * m) && (pm(k, 3 * m) || pm(k, 9 * m)));
    out
}

/// Exhaustive search over units and both signs for `(j', k')` with
/// `j' ≤ k' ≤ d − j'`; the lexicographically smallest one is returned.
pub fn find_representative(d: u64, j: u64, k: u64) -> Result<PairClass> {
    check_range(d, j, k)?;
    let mut best: Option<((u64, u64), Witness)> = None;
    for x in arith::units(d) {
        for negated in [false, true] {
            let jj = if negated { (d - x * j % d) % d } else { x * j % d };
            let kk = x * k % d;
            if jj == 0 || jj > kk || kk > d - jj {
                continue;
            }
            if best.is_none_or(|(b, _)| (jj, kk) < b) {
                best = Some(((jj, kk), Witness { x, negated }));
            }
        }
    }
    Ok(PairClass {
        d,
        j,
        k,
        representative: best.map(|b| b.0),
        witness: best.map(|b| b.1),
        exceptional_case: exceptional_families(d, j, k).first().copied(),
    })
}

/// Largest gap between consecutive integers coprime to `n`.
pub fn jacobsthal(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("jacobsthal needs n >= 2, got {n}")));
    }
    let mut prev = 1u64;
    let mut gap = 0u64;
    for x in 2..=n + 1 {
        if arith::gcd(x, n) == 1 {
            gap = gap.max(x - prev);
            prev = x;
        }
    }
    Ok(gap)
}

/// Number of distinct prime factors.
pub fn omega(n: u64) -> u32 {
    arith::prime_factors(n).len() as u32
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub d: u64,
    pub pairs: usize,
    pub exceptional: Vec<PairClass>,
    /// Pairs where the search and the family patterns disagree.
    pub mismatches: Vec<(u64, u64)>,
    /// Pairs matching more than one family.
    pub ambiguous: Vec<(u64, u64)>,
}

impl ScanSummary {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty() && self.ambiguous.is_empty()
    }

    pub fn labels(&self) -> Vec<CaseLabel> {
        let mut l: Vec<CaseLabel> =
            self.exceptional.iter().filter_map(|c| c.exceptional_case).map(|c| c.label).collect();
        l.sort();
        l.dedup();
        l
    }
}

/// Exceptional pairs, mismatches and ambiguous pairs for one value of `j`.
type ScanRow = (Vec<PairClass>, Vec<(u64, u64)>, Vec<(u64, u64)>);

/// Classifies every pair `0 < j, k < d` from both directions.
pub fn scan_all_pairs(d: u64) -> Result<ScanSummary> {
    if d < 2 {
        return Err(Error::OutOfRange(format!("modulus must be at least 2, got {d}")));
    }
    let rows: Vec<ScanRow> = (1..d)
        .into_par_iter()
        .map(|j| {
            let mut exc = Vec::new();
            let mut bad = Vec::new();
            let mut amb = Vec::new();
            for k in 1..d {
                let c = find_representative(d, j, k).expect("in range");
                if !c.is_consistent() {
                    bad.push((j, k));
                }
                if exceptional_families(d, j, k).len() > 1 {
                    amb.push((j, k));
                }
                if c.representative.is_none() {
                    exc.push(c);
                }
            }
            (exc, bad, amb)
        })
        .collect();
    let mut summary = ScanSummary {
        d,
        pairs: ((d - 1) * (d - 1)) as usize,
        exceptional: vec![],
        mismatches: vec![],
        ambiguous: vec![],
    };
    for (e, b, a) in rows {
        summary.exceptional.extend(e);
        summary.mismatches.extend(b);
        summary.ambiguous.extend(a);
    }
    Ok(summary)
}
