//! Random-start search for unpunctured biunimodular functions on F_p.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group_fourier::{bjorck_saffari, gaussian, is_biunimodular, unit_root, CyclicFn, GroupCtx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    Gaussian {
        m: u64,
        a: u64,
    },
    /// `h(x − a)` for the listed Björck–Saffari function.
    BjorckSaffariTranslate {
        index: usize,
        a: u64,
    },
    /// `h(x − a) ζ^{bx}` with `b ≠ 0`.
    BjorckSaffariModulation {
        index: usize,
        a: u64,
        b: u64,
    },
    New,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Find {
    /// Normalized by `f(0) = 1`.
    pub f: CyclicFn,
    pub residual: f64,
    pub family: Family,
    /// Number of starts that converged here.
    pub hits: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchReport {
    pub p: u64,
    pub seed: u64,
    pub starts: usize,
    pub converged: usize,
    pub finds: Vec<Find>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCounts {
    pub gaussian: usize,
    pub translate: usize,
    pub modulation: usize,
    pub new: usize,
}

impl SearchReport {
    pub fn family_counts(&self) -> FamilyCounts {
        let mut c = FamilyCounts::default();
        for f in &self.finds {
            match f.family {
                Family::Gaussian { .. } => c.gaussian += 1,
                Family::BjorckSaffariTranslate { .. } => c.translate += 1,
                Family::BjorckSaffariModulation { .. } => c.modulation += 1,
                Family::New => c.new += 1,
            }
        }
        c
    }
}

/// Known biunimodular functions: all gaussians, and every translate and
/// modulation of every Björck–Saffari function.
pub fn known_functions(ctx: &GroupCtx) -> Result<Vec<(Family, CyclicFn)>> {
    let p = ctx.order();
    let mut out = Vec::new();
    for m in 1..p {
        for a in 0..p {
            out.push((Family::Gaussian { m, a }, gaussian(ctx, m as i64, a as i64)?));
        }
    }
    for (index, h) in bjorck_saffari(ctx)?.into_iter().enumerate() {
        for a in 0..p {
            let t = h.function.translate(a as i64);
            out.push((Family::BjorckSaffariTranslate { index, a }, t.clone()));
            for b in 1..p {
                let m = CyclicFn::from_fn(ctx, |x| t.at(x as i64) * unit_root((b * x) as i64, p));
                out.push((Family::BjorckSaffariModulation { index, a, b }, m));
            }
        }
    }
    Ok(out)
}

/// Largest `|⟨f, k⟩| / (‖f‖‖k‖)` over `known`; 1 means proportional.
pub fn max_overlap(f: &CyclicFn, known: &[(Family, CyclicFn)]) -> (f64, Family) {
    known
        .iter()
        .map(|(fam, k)| {
            let ip = f.inner(k).expect("same ctx").norm() / (f.norm() * k.norm());
            (ip, *fam)
        })
        .fold((0.0, Family::New), |a, b| if b.0 > a.0 { b } else { a })
}

fn key(f: &CyclicFn) -> Vec<i64> {
    f.values().iter().flat_map(|v| [(v.re * 1e8).round() as i64, (v.im * 1e8).round() as i64]).collect()
}

fn phases_to_fn(ctx: &GroupCtx, phi: &DVector<f64>) -> CyclicFn {
    CyclicFn::from_fn(ctx, |x| {
        if x == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::from_polar(1.0, phi[x as usize - 1])
        }
    })
}

/// Levenberg–Marquardt on `|f̂(k)|² − 1 = 0` over the phases of `f(1..p)`.
fn descend(ctx: &GroupCtx, mut phi: DVector<f64>, iters: usize, tol: f64) -> Option<(CyclicFn, f64)> {
    let p = ctx.order() as usize;
    let mut lambda = 1e-3;
    let residuals = |phi: &DVector<f64>| {
        let fh = phases_to_fn(ctx, phi).dft();
        DVector::from_iterator(p, fh.values().iter().map(|v| v.norm_sqr() - 1.0))
    };
    let mut r = residuals(&phi);
    for _ in 0..iters {
        if r.amax() < tol {
            return Some((phases_to_fn(ctx, &phi), r.amax()));
        }
        let f = phases_to_fn(ctx, &phi);
        let fh = f.dft();
        let scale = 1.0 / (p as f64).sqrt();
        let j = DMatrix::from_fn(p, p - 1, |k, x| {
            let x = x + 1;
            let d = Complex64::new(0.0, scale) * f.at(x as i64) * unit_root((k * x) as i64, p as u64);
            2.0 * (fh.at(k as i64).conj() * d).re
        });
        let jt = j.transpose();
        let g = &jt * &r;
        let mut a = &jt * &j;
        loop {
            let mut m = a.clone();
            for i in 0..p - 1 {
                m[(i, i)] += lambda * (1.0 + a[(i, i)]);
            }
            let step = m.cholesky()?.solve(&(-&g));
            let cand = &phi + step;
            let rc = residuals(&cand);
            if rc.norm() < r.norm() {
                phi = cand;
                r = rc;
                lambda = (lambda / 3.0).max(1e-12);
                break;
            }
            lambda *= 4.0;
            if lambda > 1e8 {
                return None;
            }
            a = &jt * &j;
        }
    }
    (r.amax() < tol).then(|| (phases_to_fn(ctx, &phi), r.amax()))
}

const DEDUP_RADIUS: f64 = 1e-6;
const DEDUP_CELL: f64 = 1e-4;

/// Searches from `starts` uniformly random phase vectors; converged points are
/// deduplicated and tagged against [`known_functions`].
pub fn biunimodular_search(p: u64, starts: usize, seed: u64) -> Result<SearchReport> {
    let ctx = GroupCtx::prime(p)?;
    if p < 5 {
        return Err(Error::OutOfRange(format!("search needs p >= 5, got {p}")));
    }
    let hits: Vec<(CyclicFn, f64)> = (0..starts)
        .into_par_iter()
        .filter_map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let phi = DVector::from_fn(p as usize - 1, |_, _| rng.gen_range(0.0..std::f64::consts::TAU));
            descend(&ctx, phi, 100, 1e-13)
        })
        .collect();
    let converged = hits.len();
    let mut finds: Vec<Find> = Vec::new();
    let cell = |f: &CyclicFn| {
        let v = f.at(1);
        ((v.re / DEDUP_CELL).floor() as i64, (v.im / DEDUP_CELL).floor() as i64)
    };
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (f, residual) in hits {
        let (cx, cy) = cell(&f);
        let near = (-1..=1)
            .flat_map(|dx| (-1..=1).map(move |dy| (cx + dx, cy + dy)))
            .filter_map(|c| grid.get(&c))
            .flatten()
            .copied()
            .find(|&i| finds[i].f.distance(&f).is_ok_and(|d| d < DEDUP_RADIUS));
        match near {
            Some(i) => finds[i].hits += 1,
            None => {
                grid.entry((cx, cy)).or_default().push(finds.len());
                finds.push(Find { f, residual, family: Family::New, hits: 1 });
            }
        }
    }
    let known = known_functions(&ctx)?;
    finds.par_iter_mut().for_each(|e| {
        let (overlap, fam) = max_overlap(&e.f, &known);
        if overlap > 1.0 - 1e-9 {
            e.family = fam;
        }
    });
    finds.sort_by(|a, b| b.hits.cmp(&a.hits).then_with(|| key(&a.f).cmp(&key(&b.f))));
    Ok(SearchReport { p, seed, starts, converged, finds })
}

/// Independent check of a NEW find: biunimodular by direct transform, not
/// proportional to any known function, and an isolated point of the torus
/// intersection.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NewCertificate {
    pub biunimodular_residual: f64,
    pub max_overlap: f64,
    /// Smallest singular value of the phase Jacobian.
    pub min_singular: f64,
    pub holds: bool,
}

pub fn certify_new(f: &CyclicFn) -> Result<NewCertificate> {
    let ctx = f.ctx().clone();
    let p = ctx.order() as usize;
    let bi = is_biunimodular(f, false, 1e-10);
    let known = known_functions(&ctx)?;
    let (overlap, _) = max_overlap(f, &known);
    let fh = f.dft();
    let scale = 1.0 / (p as f64).sqrt();
    let f0 = f.at(0);
    let j = DMatrix::from_fn(p, p - 1, |k, x| {
        let x = x + 1;
        let d = Complex64::new(0.0, scale) * f.at(x as i64) / f0 * unit_root((k * x) as i64, p as u64);
        2.0 * ((fh.at(k as i64) / f0).conj() * d).re
    });
    let min_singular = j.singular_values().min();
    Ok(NewCertificate {
        biunimodular_residual: bi.residual,
        max_overlap: overlap,
        min_singular,
        holds: bi.holds && overlap < 1.0 - 1e-6 && min_singular > 1e-6,
    })
}
