//! The map `(f, g) ↦ (fg, f̂·ĝ(−·))` on a pair of equivariant affine spaces and
//! its explicit fiber over `(1_H, 1_H)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::tracker::{CMat, CVec, Homotopy, PolySystem};
use crate::arith;
use crate::error::{Error, Result};
use crate::geometry::EquivariantSpace;
use crate::group_fourier::{odd_basis, CyclicFn, GroupCtx};

/// `f = f_0 + Σ x_i f_i`, `g = g_0 + Σ y_i g_i`, with `f_i(r_j) = g_i(r_j) = δ_ij`
/// on the representatives `r_0 = 1, r_1, …`. The equations are the values of
/// `fg` and of `f̂·ĝ(−·)` at `r_1, …, r_{n−1}`; the value at `r_0` is fixed by
/// the normalization and by Parseval.
#[derive(Clone, Debug)]
pub struct BilinearSystem {
    ctx: GroupCtx,
    f_basis: Vec<CyclicFn>,
    g_basis: Vec<CyclicFn>,
    points: Vec<u64>,
    pf: CMat,
    pg: CMat,
    tf: CMat,
    tg: CMat,
    target: CVec,
}

impl BilinearSystem {
    fn build(ctx: GroupCtx, f_basis: Vec<CyclicFn>, g_basis: Vec<CyclicFn>, points: Vec<u64>) -> Self {
        let n = f_basis.len();
        let rows = n - 1;
        let fh: Vec<CyclicFn> = f_basis.iter().map(|f| f.dft()).collect();
        let gh: Vec<CyclicFn> = g_basis.iter().map(|g| g.dft()).collect();
        let pt = |i: usize| points[i + 1] as i64;
        let pf = CMat::from_fn(rows, n, |i, j| f_basis[j].at(pt(i)));
        let pg = CMat::from_fn(rows, n, |i, j| g_basis[j].at(pt(i)));
        let tf = CMat::from_fn(rows, n, |i, j| fh[j].at(pt(i)));
        let tg = CMat::from_fn(rows, n, |i, j| gh[j].at(-pt(i)));
        let target = CVec::from_element(2 * rows, Complex64::new(1.0, 0.0));
        Self { ctx, f_basis, g_basis, points, pf, pg, tf, tg, target }
    }

    /// Odd functions on C_d for odd `d`, representatives `1, …, (d−1)/2`.
    pub fn odd(ctx: &GroupCtx) -> Self {
        let basis = odd_basis(ctx);
        let points = (1..=basis.len() as u64).collect();
        Self::build(ctx.clone(), basis.clone(), basis, points)
    }

    /// `V_1 × V̄_1` for an (H, c)-equivariant space.
    pub fn equivariant(space: &EquivariantSpace) -> Self {
        let conj = space.conj();
        Self::build(space.ctx(), space.basis.clone(), conj.basis, space.coset_reps.clone())
    }

    pub fn ctx(&self) -> &GroupCtx {
        &self.ctx
    }

    /// Number of unknowns, `2(n − 1)`.
    pub fn unknowns(&self) -> usize {
        2 * (self.f_basis.len() - 1)
    }

    pub fn representatives(&self) -> &[u64] {
        &self.points
    }

    pub fn target(&self) -> &CVec {
        &self.target
    }

    /// The fiber value aimed at; all ones is the C-function fiber.
    pub fn with_target(mut self, target: CVec) -> Result<Self> {
        if target.len() != self.unknowns() {
            return Err(Error::SizeMismatch(target.len(), self.unknowns()));
        }
        self.target = target;
        Ok(self)
    }

    fn split(&self, z: &CVec) -> (CVec, CVec) {
        let r = self.f_basis.len() - 1;
        let one = Complex64::new(1.0, 0.0);
        let x = CVec::from_iterator(r + 1, std::iter::once(one).chain(z.rows(0, r).iter().copied()));
        let y = CVec::from_iterator(r + 1, std::iter::once(one).chain(z.rows(r, r).iter().copied()));
        (x, y)
    }

    /// The map itself, without subtracting the target.
    pub fn phi(&self, z: &CVec) -> CVec {
        let (x, y) = self.split(z);
        let a = &self.pf * &x;
        let b = &self.pg * &y;
        let c = &self.tf * &x;
        let d = &self.tg * &y;
        let r = a.len();
        CVec::from_iterator(2 * r, a.component_mul(&b).iter().chain(c.component_mul(&d).iter()).copied())
    }

    pub fn phi_jacobian(&self, z: &CVec) -> CMat {
        let (x, y) = self.split(z);
        let a = &self.pf * &x;
        let b = &self.pg * &y;
        let c = &self.tf * &x;
        let d = &self.tg * &y;
        let r = a.len();
        let mut j = CMat::zeros(2 * r, 2 * r);
        for i in 0..r {
            for k in 0..r {
                j[(i, k)] = self.pf[(i, k + 1)] * b[i];
                j[(i, r + k)] = a[i] * self.pg[(i, k + 1)];
                j[(r + i, k)] = self.tf[(i, k + 1)] * d[i];
                j[(r + i, r + k)] = c[i] * self.tg[(i, k + 1)];
            }
        }
        j
    }

    pub fn functions(&self, z: &CVec) -> (CyclicFn, CyclicFn) {
        let (x, y) = self.split(z);
        let comb = |basis: &[CyclicFn], c: &CVec| {
            let mut out = CyclicFn::zeros(&self.ctx);
            for (b, k) in basis.iter().zip(c.iter()) {
                out = out.add(&b.scale(*k)).expect("same ctx");
            }
            out
        };
        (comb(&self.f_basis, &x), comb(&self.g_basis, &y))
    }

    /// Coordinates of `(f, g)`; both must satisfy `f(1) = g(1) = 1`.
    pub fn coordinates(&self, f: &CyclicFn, g: &CyclicFn) -> CVec {
        let r = self.points.len() - 1;
        CVec::from_iterator(
            2 * r,
            self.points[1..].iter().map(|&x| f.at(x as i64)).chain(self.points[1..].iter().map(|&x| g.at(x as i64))),
        )
    }

    /// Sup-norm of `Φ(z) − target`.
    pub fn residual(&self, z: &CVec) -> f64 {
        (self.phi(z) - &self.target).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

impl PolySystem for BilinearSystem {
    fn dim(&self) -> usize {
        self.unknowns()
    }
    fn eval(&self, x: &CVec) -> CVec {
        self.phi(x) - &self.target
    }
    fn jacobian(&self, x: &CVec) -> CMat {
        self.phi_jacobian(x)
    }
}

/// `Φ(z) = (1 − s) a + s b` along one straight segment of target values.
pub struct Segment<'a> {
    pub system: &'a BilinearSystem,
    pub from: CVec,
    pub to: CVec,
}

impl Homotopy for Segment<'_> {
    fn dim(&self) -> usize {
        self.system.unknowns()
    }
    fn eval(&self, x: &CVec, s: f64) -> CVec {
        self.system.phi(x) - (&self.from * Complex64::new(1.0 - s, 0.0) + &self.to * Complex64::new(s, 0.0))
    }
    fn jacobian(&self, x: &CVec, _s: f64) -> CMat {
        self.system.phi_jacobian(x)
    }
    fn dt(&self, _x: &CVec, _s: f64) -> CVec {
        &self.from - &self.to
    }
}

/// One point `(f_{A,B}, g_{A,B})` of the fiber over `(1_H, 1_H)`, with `A`, `B`
/// given as coset indices (index 0 is H itself).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StartPoint {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub f: CyclicFn,
    pub g: CyclicFn,
    /// Sup-norm of `Φ(f, g) − (1_H, 1_H)` over the whole group.
    pub residual: f64,
}

/// Unique `f` in the span of `basis[i]`, `i ∈ support`, with `f(1) = 1` and
/// `transform(f)` vanishing at the listed points.
fn kernel_function(basis: &[CyclicFn], support: &[usize], zeros: &[i64], reflect: bool) -> Result<CyclicFn> {
    let k = support.len();
    let hats: Vec<CyclicFn> = support.iter().map(|&i| basis[i].dft()).collect();
    let rows = zeros.len().max(k);
    let mut m = DMatrix::<Complex64>::zeros(rows, k);
    for (r, &x) in zeros.iter().enumerate() {
        for (c, h) in hats.iter().enumerate() {
            m[(r, c)] = h.at(if reflect { -x } else { x });
        }
    }
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let sv = &svd.singular_values;
    let (imin, smin) = sv.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty");
    let smax = sv.iter().copied().fold(0.0, f64::max).max(1.0);
    let second = sv.iter().enumerate().filter(|(i, _)| *i != imin).map(|(_, s)| *s).fold(f64::INFINITY, f64::min);
    if *smin > 1e-9 * smax || second < 1e-9 * smax {
        return Err(Error::DegenerateKernel(format!("kernel singular values {smin:.3e}, {second:.3e}")));
    }
    let v: Vec<Complex64> = vt.row(imin).iter().map(|c| c.conj()).collect();
    let pos0 = support.iter().position(|&i| i == 0).expect("support contains H");
    let scale = v[pos0];
    if scale.norm() < 1e-12 {
        return Err(Error::DegenerateKernel("kernel function vanishes at 1".into()));
    }
    let mut f = CyclicFn::zeros(basis[0].ctx());
    for (&i, c) in support.iter().zip(&v) {
        f = f.add(&basis[i].scale(c / scale))?;
    }
    Ok(f)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All points of the fiber over `(1_H, 1_H)`: for H-invariant `A, B ⊇ H` with
/// `n_A + n_B = n + 1`, `f` has support A and transform support B, and `g` has
/// support `A'` and reflected transform support `B'`, where `A ∩ A' = B ∩ B' = H`
/// and `A ∪ A' = B ∪ B' = G`.
pub fn start_fiber(space: &EquivariantSpace) -> Result<Vec<StartPoint>> {
    let n = space.dim();
    let conj = space.conj();
    let reps: Vec<i64> = space.coset_reps.iter().map(|&r| r as i64).collect();
    let rest: Vec<usize> = (1..n).collect();
    let mut out = Vec::new();
    for na in 0..n {
        for sa in subsets(n - 1, na) {
            for sb in subsets(n - 1, n - 1 - na) {
                let a: Vec<usize> = std::iter::once(0).chain(sa.iter().map(|i| rest[*i])).collect();
                let b: Vec<usize> = std::iter::once(0).chain(sb.iter().map(|i| rest[*i])).collect();
                let a2: Vec<usize> = (0..n).filter(|i| *i == 0 || !a.contains(i)).collect();
                let b2: Vec<usize> = (0..n).filter(|i| *i == 0 || !b.contains(i)).collect();
                let off = |s: &[usize]| (0..n).filter(|i| !s.contains(i)).map(|i| reps[i]).collect::<Vec<_>>();
                let f = kernel_function(&space.basis, &a, &off(&b), false)?;
                let g = kernel_function(&conj.basis, &a2, &off(&b2), true)?;
                let residual = fiber_residual(&f, &g, &space.base.h)?;
                out.push(StartPoint { a, b, f, g, residual });
            }
        }
    }
    let expected = arith::binomial(2 * n as u64 - 2, n as u64 - 1) as usize;
    if out.len() != expected {
        return Err(Error::DegenerateKernel(format!("{} start points, expected {expected}", out.len())));
    }
    Ok(out)
}

/// Sup-norm of `(fg, f̂·ĝ(−·)) − (1_H, 1_H)` over the whole group.
pub fn fiber_residual(f: &CyclicFn, g: &CyclicFn, h: &[u64]) -> Result<f64> {
    let d = f.order();
    let prod = f.mul(g)?;
    let tr = f.dft().mul(&g.dft().reflect())?;
    let mut worst = 0.0f64;
    for x in 0..d {
        let want = if h.contains(&x) { 1.0 } else { 0.0 };
        worst = worst.max((prod.at(x as i64) - want).norm()).max((tr.at(x as i64) - want).norm());
    }
    Ok(worst)
}

/// Sizes of the supports of `f` and `f̂` (entries above `tol`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    pub support: usize,
    pub transform_support: usize,
    /// `#supp f + #supp f̂ ≥ p + 1`.
    pub holds: bool,
    pub equality: bool,
}

pub fn uncertainty_check(f: &CyclicFn, tol: f64) -> Result<UncertaintyReport> {
    if f.sup_norm() <= tol {
        return Err(Error::ZeroFunction);
    }
    let count = |g: &CyclicFn| g.values().iter().filter(|v| v.norm() > tol).count();
    let support = count(f);
    let transform_support = count(&f.dft());
    let bound = f.order() as usize + 1;
    Ok(UncertaintyReport {
        support,
        transform_support,
        holds: support + transform_support >= bound,
        equality: support + transform_support == bound,
    })
}

/// Determinant of `(ζ_p^{jk})_{j ∈ A, k ∈ B}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinorReport {
    pub p: u64,
    pub rows: Vec<u64>,
    pub cols: Vec<u64>,
    pub det: Complex64,
    pub nonzero: bool,
}

pub fn chebotarev_minor(p: u64, rows: &[u64], cols: &[u64]) -> Result<MinorReport> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if rows.len() != cols.len() {
        return Err(Error::SizeMismatch(rows.len(), cols.len()));
    }
    let k = rows.len();
    let m = CMat::from_fn(k, k, |i, j| crate::group_fourier::unit_root((rows[i] * cols[j] % p) as i64, p));
    let det = m.determinant();
    Ok(MinorReport { p, rows: rows.to_vec(), cols: cols.to_vec(), det, nonzero: det.norm() > 1e-9 })
}
