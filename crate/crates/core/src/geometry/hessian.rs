use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group_fourier::{CyclicFn, DirichletChar, GroupCtx};
use crate::solver::tracker::{refine, run_total_degree, CMat, CVec, PolySystem, TrackerOptions};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// The space `W₀` of even β with `β(0) = 0` and `Σ β = 0` for a prime
/// `p ≡ 3 (mod 4)`, with a real orthonormal basis, and the Legendre character.
#[derive(Clone, Debug)]
pub struct W0 {
    pub p: u64,
    pub legendre: CyclicFn,
    pub basis: Vec<CyclicFn>,
    legendre_square: CyclicFn,
}

impl W0 {
    pub fn new(p: u64) -> Result<Self> {
        let ctx = GroupCtx::prime(p)?;
        if p % 4 != 3 {
            return Err(Error::OutOfRange(format!("need p ≡ 3 (mod 4), got {p}")));
        }
        let n = (p - 1) / 2;
        let even = |j: u64| CyclicFn::delta(&ctx, j as i64).add(&CyclicFn::delta(&ctx, -(j as i64))).expect("same ctx");
        // Helmert vectors of {u ∈ R^n : Σu = 0}, mapped through u ↦ Σ u_j (δ_j + δ_{−j}) / √2.
        let basis = (1..n)
            .map(|k| {
                let s = 1.0 / ((k * (k + 1)) as f64).sqrt() / 2f64.sqrt();
                let mut f = even(k + 1).scale(c(-(k as f64) * s));
                for j in 1..=k {
                    f = f.add(&even(j).scale(c(s))).expect("same ctx");
                }
                f
            })
            .collect();
        let legendre = DirichletChar::legendre(&ctx)?.to_fn();
        let legendre_square = legendre.convolve(&legendre)?;
        Ok(Self { p, legendre, basis, legendre_square })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ctx(&self) -> &GroupCtx {
        self.legendre.ctx()
    }

    pub fn embed(&self, z: &[Complex64]) -> CyclicFn {
        let mut out = CyclicFn::zeros(self.ctx());
        for (a, b) in z.iter().zip(&self.basis) {
            out = out.add(&b.scale(*a)).expect("same ctx");
        }
        out
    }

    /// Coordinates `Σ_x f(x) b_k(x)`, bilinear so that holomorphic maps stay holomorphic.
    pub fn coords(&self, f: &CyclicFn) -> CVec {
        CVec::from_iterator(
            self.dim(),
            self.basis.iter().map(|b| f.values().iter().zip(b.values()).map(|(x, y)| x * y).sum()),
        )
    }

    /// Distance from `f` to its projection onto `W₀`.
    pub fn projection_residual(&self, f: &CyclicFn) -> f64 {
        let z: Vec<Complex64> = self.coords(f).iter().copied().collect();
        self.embed(&z).distance(f).expect("same ctx")
    }

    pub fn check_member(&self, beta: &CyclicFn, tol: f64) -> Result<()> {
        if beta.ctx() != self.ctx() {
            return Err(Error::ContextMismatch { left: beta.order(), right: self.p });
        }
        let r = self.projection_residual(beta);
        if r > tol * (1.0 + beta.norm()) {
            return Err(Error::NotInSubspace(format!("distance {r:.3e} from W0")));
        }
        Ok(())
    }

    /// `B(α, β) = χ₀α ∗ χ₀β − χ₀ ∗ (χ₀αβ)`, so that `Q(β) = B(β, β)`.
    pub fn bilinear(&self, a: &CyclicFn, b: &CyclicFn) -> CyclicFn {
        let l = &self.legendre;
        let la = l.mul(a).expect("same ctx");
        let lb = l.mul(b).expect("same ctx");
        let conv = la.convolve(&lb).expect("same ctx");
        let lab = la.mul(b).expect("same ctx");
        conv.sub(&l.convolve(&lab).expect("same ctx")).expect("same ctx")
    }

    /// `Ψ₀(β) = χ₀e^{iβ} ∗ χ₀e^{−iβ} − χ₀∗χ₀`.
    pub fn psi0(&self, beta: &CyclicFn) -> CyclicFn {
        self.psi_with(beta, |f| f.clone())
    }

    fn psi_with(&self, beta: &CyclicFn, u: impl Fn(&CyclicFn) -> CyclicFn) -> CyclicFn {
        let i = Complex64::i();
        let plus = u(&self.legendre.mul(&beta.map(|v| (i * v).exp())).expect("same ctx"));
        let minus = u(&self.legendre.mul(&beta.map(|v| (-i * v).exp())).expect("same ctx"));
        plus.convolve(&minus).expect("same ctx").sub(&self.legendre_square).expect("same ctx")
    }

    /// The quadratic map in coordinates: `Q_k(z) = Σ T_kij z_i z_j`.
    pub fn quadratic_map(&self) -> QuadraticMap {
        let m = self.dim();
        let mut t = vec![0.0; m * m * m];
        for i in 0..m {
            for j in i..m {
                let b = self.coords(&self.bilinear(&self.basis[i], &self.basis[j]));
                for k in 0..m {
                    t[(k * m + i) * m + j] = b[k].re;
                    t[(k * m + j) * m + i] = b[k].re;
                }
            }
        }
        QuadraticMap { m, tensor: t }
    }
}

/// `Q(β)` for `β ∈ W₀`.
pub fn hessian_q(p: u64, beta: &CyclicFn, tol: f64) -> Result<CyclicFn> {
    let w = W0::new(p)?;
    w.check_member(beta, tol)?;
    Ok(w.bilinear(beta, beta))
}

/// Homogeneous quadratic map `C^m → C^m` with a real symmetric tensor.
#[derive(Clone, Debug)]
pub struct QuadraticMap {
    pub m: usize,
    tensor: Vec<f64>,
}

impl QuadraticMap {
    pub fn eval(&self, z: &CVec) -> CVec {
        let m = self.m;
        CVec::from_iterator(
            m,
            (0..m).map(|k| {
                let mut s = Complex64::new(0.0, 0.0);
                for i in 0..m {
                    for j in 0..m {
                        s += z[i] * z[j] * self.tensor[(k * m + i) * m + j];
                    }
                }
                s
            }),
        )
    }

    pub fn jacobian(&self, z: &CVec) -> CMat {
        let m = self.m;
        CMat::from_fn(m, m, |k, i| {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..m {
                s += z[j] * self.tensor[(k * m + i) * m + j];
            }
            s * 2.0
        })
    }

    /// `Q(z) − w` as a square system.
    pub fn shifted(&self, w: CVec) -> ShiftedQuadratic<'_> {
        ShiftedQuadratic { q: self, w }
    }
}

pub struct ShiftedQuadratic<'a> {
    q: &'a QuadraticMap,
    w: CVec,
}

impl PolySystem for ShiftedQuadratic<'_> {
    fn dim(&self) -> usize {
        self.q.m
    }
    fn eval(&self, x: &CVec) -> CVec {
        self.q.eval(x) - &self.w
    }
    fn jacobian(&self, x: &CVec) -> CMat {
        self.q.jacobian(x)
    }
}

/// Distinct solutions of `Q(z) = w` by total-degree continuation, with the
/// smallest `|det DQ|` among them relative to `‖z‖^m`.
pub struct Fiber {
    pub solutions: Vec<CVec>,
    pub paths: usize,
    pub min_jacobian: f64,
}

pub fn solve_fiber(q: &QuadraticMap, w: &CVec, rng: &mut impl Rng) -> Fiber {
    let sys = q.shifted(w.clone());
    let run = run_total_degree(&sys, rng, 1.0, &TrackerOptions::default());
    let mut solutions: Vec<CVec> = Vec::new();
    let mut min_jacobian = f64::INFINITY;
    for e in &run.endpoints {
        let (x, r) = refine(&sys, &e.x, 20);
        if r > 1e-9 * (1.0 + w.norm()) {
            continue;
        }
        if solutions.iter().any(|s| (s - &x).norm() < 1e-8 * (1.0 + x.norm())) {
            continue;
        }
        let det = q.jacobian(&x).determinant().norm() / x.norm().max(1e-300).powi(q.m as i32);
        min_jacobian = min_jacobian.min(det);
        solutions.push(x);
    }
    Fiber { solutions, paths: run.paths, min_jacobian }
}

fn is_real(z: &CVec, tol: f64) -> bool {
    z.iter().map(|v| v.im * v.im).sum::<f64>().sqrt() <= tol * z.norm()
}

/// Numerical evidence that `Q⁻¹(0) = {0}` and that generic fibers have `2^m` points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnisotropyCertificate {
    pub p: u64,
    pub m: usize,
    pub seed: u64,
    pub trials: usize,
    /// Smallest `‖Q(z)‖` found on the complex unit sphere of `W₀`.
    pub min_norm: f64,
    /// Distinct regular solutions of `Q(z) = w` for a random complex `w`.
    pub fiber_count: usize,
    pub expected_fiber: usize,
    pub paths: usize,
    pub min_jacobian: f64,
    /// Real solutions of `Q(z) = w` and of `Q(z) = −w`, `w` a random real point.
    pub real_counts: (usize, usize),
    /// `min(real_counts) ≤ 2^{m−1}`.
    pub sign_dichotomy: bool,
}

/// Riemannian gradient descent of `‖Q(z)‖²` on the unit sphere from one start.
fn descend(q: &QuadraticMap, mut z: CVec) -> f64 {
    z /= c(z.norm());
    let obj = |z: &CVec| q.eval(z).norm_squared();
    let mut f = obj(&z);
    let mut eta = 0.1;
    for _ in 0..400 {
        let val = q.eval(&z);
        let g = q.jacobian(&z).adjoint() * val * c(2.0);
        let radial = z.dotc(&g).re;
        let gt = &g - &z * c(radial);
        let gn = gt.norm_squared();
        if gn < 1e-28 {
            break;
        }
        let mut accepted = false;
        while eta > 1e-12 {
            let mut zn = &z - &gt * c(eta);
            zn /= c(zn.norm());
            let fnew = obj(&zn);
            if fnew <= f - 1e-4 * eta * gn {
                z = zn;
                f = fnew;
                eta *= 1.5;
                accepted = true;
                break;
            }
            eta /= 2.0;
        }
        if !accepted {
            break;
        }
    }
    f.sqrt()
}

fn random_cvec(m: usize, rng: &mut impl Rng) -> CVec {
    CVec::from_iterator(m, (0..m).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))))
}

fn random_rvec(m: usize, rng: &mut impl Rng) -> CVec {
    CVec::from_iterator(m, (0..m).map(|_| c(rng.sample(StandardNormal))))
}

pub fn certify_anisotropy(p: u64, trials: usize, seed: u64) -> Result<AnisotropyCertificate> {
    let w0 = W0::new(p)?;
    let q = w0.quadratic_map();
    let m = q.m;
    let min_norm = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            descend(&q, random_cvec(m, &mut rng))
        })
        .reduce(|| f64::INFINITY, f64::min);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = random_cvec(m, &mut rng);
    let fiber = solve_fiber(&q, &w, &mut rng);
    let wr = random_rvec(m, &mut rng);
    let real_fiber = solve_fiber(&q, &wr, &mut rng);
    let plus = real_fiber.solutions.iter().filter(|z| is_real(z, 1e-7)).count();
    let minus = real_fiber.solutions.iter().filter(|z| is_real(&(*z * Complex64::i()), 1e-7)).count();
    let expected_fiber = 1usize << m;
    Ok(AnisotropyCertificate {
        p,
        m,
        seed,
        trials,
        min_norm,
        fiber_count: fiber.solutions.len(),
        expected_fiber,
        paths: fiber.paths,
        min_jacobian: fiber.min_jacobian,
        real_counts: (plus, minus),
        sign_dichotomy: plus.min(minus) <= expected_fiber / 2,
    })
}

/// Largest `‖(Ψ₀(hβ) − Ψ₀(−hβ)) / 2h‖` over the basis of `W₀`.
pub fn differential_at_zero(p: u64, h: f64) -> Result<f64> {
    let w = W0::new(p)?;
    let mut worst = 0.0f64;
    for b in &w.basis {
        let d = w.psi0(&b.scale(c(h))).sub(&w.psi0(&b.scale(c(-h))))?.scale(c(1.0 / (2.0 * h)));
        worst = worst.max(d.norm());
    }
    Ok(worst)
}

/// The unitary deformation `e^{tX₀}` of the odd functions, `X₀` real antisymmetric.
struct Deformation {
    odd: Vec<CyclicFn>,
    x0: DMatrix<f64>,
}

impl Deformation {
    fn sample(ctx: &GroupCtx, rng: &mut impl Rng) -> Self {
        let n = ((ctx.order() - 1) / 2) as usize;
        let s = 1.0 / 2f64.sqrt();
        let odd = (1..=n as i64)
            .map(|j| CyclicFn::delta(ctx, j).sub(&CyclicFn::delta(ctx, -j)).expect("same ctx").scale(c(s)))
            .collect();
        let a = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
        Self { odd, x0: &a - a.transpose() }
    }

    fn apply(&self, m: &DMatrix<f64>, f: &CyclicFn) -> CyclicFn {
        let coords: Vec<Complex64> =
            self.odd.iter().map(|b| f.values().iter().zip(b.values()).map(|(x, y)| x * y).sum()).collect();
        let mut out = CyclicFn::zeros(f.ctx());
        for (i, b) in self.odd.iter().enumerate() {
            let v: Complex64 = (0..coords.len()).map(|j| coords[j] * m[(i, j)]).sum();
            out = out.add(&b.scale(v)).expect("same ctx");
        }
        out
    }

    fn exp(&self, t: f64) -> DMatrix<f64> {
        (&self.x0 * t).exp()
    }
}

/// `Ψ_t(β) = e^{tX₀}(χ₀e^{iβ}) ∗ e^{tX₀}(χ₀e^{−iβ}) − χ₀∗χ₀` in `W₀` coordinates.
struct PsiT<'a> {
    w0: &'a W0,
    def: &'a Deformation,
    u: DMatrix<f64>,
}

impl PolySystem for PsiT<'_> {
    fn dim(&self) -> usize {
        self.w0.dim()
    }

    fn eval(&self, z: &CVec) -> CVec {
        let beta = self.w0.embed(z.as_slice());
        self.w0.coords(&self.w0.psi_with(&beta, |f| self.def.apply(&self.u, f)))
    }

    fn jacobian(&self, z: &CVec) -> CMat {
        let i = Complex64::i();
        let beta = self.w0.embed(z.as_slice());
        let l = &self.w0.legendre;
        let fp = l.mul(&beta.map(|v| (i * v).exp())).expect("same ctx");
        let fm = l.mul(&beta.map(|v| (-i * v).exp())).expect("same ctx");
        let (ufp, ufm) = (self.def.apply(&self.u, &fp), self.def.apply(&self.u, &fm));
        let m = self.dim();
        let mut j = CMat::zeros(m, m);
        for (k, b) in self.w0.basis.iter().enumerate() {
            let dp = self.def.apply(&self.u, &fp.mul(b).expect("same ctx").scale(i));
            let dm = self.def.apply(&self.u, &fm.mul(b).expect("same ctx").scale(-i));
            let d = dp.convolve(&ufm).expect("same ctx").add(&ufp.convolve(&dm).expect("same ctx")).expect("same ctx");
            j.set_column(k, &self.w0.coords(&d));
        }
        j
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderRow {
    pub t: f64,
    /// Distinct solutions of `Ψ_t = 0` reached from `√|t| v_k`.
    pub converged: usize,
    pub real: usize,
    pub max_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationReport {
    pub p: u64,
    pub seed: u64,
    /// Generators sampled until `w₀` was a regular value.
    pub attempts: usize,
    /// Distance of `w₀ = −2X₀(χ₀)∗χ₀` from `W₀`.
    pub w0_residual: f64,
    /// `|d/dt Ψ_t(0) + w₀|` by central differences.
    pub derivative_check: f64,
    pub fiber_count: usize,
    pub min_jacobian: f64,
    /// Real points of `Q⁻¹(w₀)` and of `Q⁻¹(−w₀)`.
    pub real_counts: (usize, usize),
    pub ladder: Vec<LadderRow>,
    /// Largest distance of `Ψ_t(β)` from `W₀` over the sampled `t` and β.
    pub closure_residual: f64,
}

impl PerturbationReport {
    /// One time sign has at most `2^{m−1}` real points near `[χ₀]`.
    pub fn split_holds(&self) -> bool {
        let half = self.fiber_count / 2;
        let by_sign = |positive: bool| self.ladder.iter().filter(|r| (r.t > 0.0) == positive).all(|r| r.real <= half);
        by_sign(true) || by_sign(false)
    }
}

pub fn perturbation_split(p: u64, seed: u64) -> Result<PerturbationReport> {
    let w0 = W0::new(p)?;
    let q = w0.quadratic_map();
    let m = q.m;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=5 {
        let def = Deformation::sample(w0.ctx(), &mut rng);
        let xchi = def.apply(&def.x0, &w0.legendre);
        let w = xchi.convolve(&w0.legendre)?.scale(c(-2.0));
        let w0_residual = w0.projection_residual(&w);
        let wc = w0.coords(&w);
        let fiber = solve_fiber(&q, &wc, &mut rng);
        if fiber.solutions.len() != 1 << m || fiber.min_jacobian < 1e-8 {
            continue;
        }
        let h = 1e-5;
        let zero = CVec::zeros(m);
        let at = |t: f64| PsiT { w0: &w0, def: &def, u: def.exp(t) }.eval(&zero);
        let derivative_check = ((at(h) - at(-h)) / c(2.0 * h) + &wc).norm();
        let plus = fiber.solutions.iter().filter(|z| is_real(z, 1e-7)).count();
        let minus = fiber.solutions.iter().filter(|z| is_real(&(*z * Complex64::i()), 1e-7)).count();
        let mut ladder = Vec::new();
        let mut closure_residual = 0.0f64;
        for t in [1e-3, 1e-4, 1e-5, -1e-3, -1e-4, -1e-5] {
            let sys = PsiT { w0: &w0, def: &def, u: def.exp(t) };
            let scale = t.abs().sqrt();
            let rot = if t > 0.0 { c(1.0) } else { Complex64::i() };
            let mut found: Vec<CVec> = Vec::new();
            for v in &fiber.solutions {
                let (z, r) = refine(&sys, &(v * rot * c(scale)), 30);
                if r < 1e-12 && !found.iter().any(|s| (s - &z).norm() < 1e-6 * scale) {
                    found.push(z);
                }
            }
            for z in found.iter().take(2) {
                let beta = w0.embed(z.as_slice());
                let full = w0.psi_with(&beta, |f| def.apply(&sys.u, f));
                closure_residual = closure_residual.max(w0.projection_residual(&full));
            }
            ladder.push(LadderRow {
                t,
                converged: found.len(),
                real: found.iter().filter(|z| is_real(z, 1e-6)).count(),
                max_norm: found.iter().map(|z| z.norm()).fold(0.0, f64::max),
            });
        }
        return Ok(PerturbationReport {
            p,
            seed,
            attempts: attempt,
            w0_residual,
            derivative_check,
            fiber_count: fiber.solutions.len(),
            min_jacobian: fiber.min_jacobian,
            real_counts: (plus, minus),
            ladder,
            closure_residual,
        });
    }
    Err(Error::DegenerateKernel(format!("p={p}: no regular w0 after 5 generators")))
}
