//! C ABI over `cfunc-core`.
//!
//! Every fallible call returns a [`CfuncStatus`]; on failure the message is
//! available from [`cfunc_last_error`] until the next call on the same thread.
//! Strings returned by the library are freed with [`cfunc_free_string`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cfunc_core::cyclotomic::jacobi_sum_exact;
use cfunc_core::group_fourier::{is_c_function, CyclicFn, DirichletChar, GroupCtx};
use cfunc_core::solver::{solve_odd_cfunctions, Method, SolutionSet, SolveConfig};
use cfunc_core::Error;
use num_complex::Complex64;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfuncStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotPrime = 3,
    Numerical = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfuncMethod {
    Fiber = 0,
    TotalDegree = 1,
}

/// Summary of a solution set; totals count multiplicity.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CfuncCounts {
    pub total: usize,
    pub distinct: usize,
    pub unimodular: usize,
    pub dirichlet: usize,
    pub real_valued: usize,
    pub max_multiplicity: usize,
    pub total_paths: usize,
    pub diverged: usize,
}

/// Opaque set of odd C-functions.
pub struct CfuncSolutionSet {
    inner: SolutionSet,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CfuncStatus {
    match e {
        Error::NotPrime(_) => CfuncStatus::NotPrime,
        Error::TrackingFailed(_) | Error::DegenerateKernel(_) | Error::OffTorus(_) => CfuncStatus::Numerical,
        _ => CfuncStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), CfuncStatus>) -> CfuncStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CfuncStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            CfuncStatus::Panic
        }
    }
}

fn lib<T>(r: cfunc_core::Result<T>) -> Result<T, CfuncStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), CfuncStatus> {
    if p.is_null() {
        set_error(format!("{name} is null"));
        Err(CfuncStatus::NullPointer)
    } else {
        Ok(())
    }
}

/// Message of the last failure on this thread, or null. Owned by the library;
/// valid until the next call.
#[no_mangle]
pub extern "C" fn cfunc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cfunc_free_string(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// J(ω^j1, ω^j2) modulo the prime `p`, written to `re` and `im`.
///
/// # Safety
/// `re` and `im` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cfunc_jacobi_sum(p: u64, j1: i64, j2: i64, re: *mut f64, im: *mut f64) -> CfuncStatus {
    guard(|| {
        non_null(re, "re")?;
        non_null(im, "im")?;
        let ctx = lib(GroupCtx::prime(p))?;
        let j = lib(jacobi_sum_exact(&lib(DirichletChar::new(&ctx, j1))?, &lib(DirichletChar::new(&ctx, j2))?))?;
        let z = j.to_complex();
        *re = z.re;
        *im = z.im;
        Ok(())
    })
}

unsafe fn read_fn(re: *const f64, im: *const f64, d: usize) -> Result<CyclicFn, CfuncStatus> {
    non_null(re, "re")?;
    non_null(im, "im")?;
    let re = std::slice::from_raw_parts(re, d);
    let im = std::slice::from_raw_parts(im, d);
    lib(CyclicFn::from_values(re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect()))
}

/// Whether the function with values `re[x] + i·im[x]`, `x < d`, is a
/// C-function up to `tol`. The verdict goes to `out`.
///
/// # Safety
/// `re` and `im` must point to `d` doubles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cfunc_is_c_function(
    re: *const f64,
    im: *const f64,
    d: usize,
    tol: f64,
    out: *mut bool,
) -> CfuncStatus {
    guard(|| {
        non_null(out, "out")?;
        let f = read_fn(re, im, d)?;
        *out = is_c_function(&f, tol).holds;
        Ok(())
    })
}

/// Unitary transform `f̂(k) = d^{-1/2} Σ f(x) e^{2πikx/d}`, in place.
///
/// # Safety
/// `re` and `im` must point to `d` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn cfunc_dft(re: *mut f64, im: *mut f64, d: usize) -> CfuncStatus {
    guard(|| {
        let f = read_fn(re, im, d)?;
        for (x, v) in f.dft().values().iter().enumerate() {
            *re.add(x) = v.re;
            *im.add(x) = v.im;
        }
        Ok(())
    })
}

/// Every odd C-function on C_d with multiplicity. The handle written to
/// `out` is released with [`cfunc_solution_set_free`].
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cfunc_solve(
    d: u64,
    method: CfuncMethod,
    seed: u64,
    out: *mut *mut CfuncSolutionSet,
) -> CfuncStatus {
    guard(|| {
        non_null(out, "out")?;
        let method = match method {
            CfuncMethod::Fiber => Method::Fiber,
            CfuncMethod::TotalDegree => Method::TotalDegree,
        };
        let inner = lib(solve_odd_cfunctions(d, method, &SolveConfig { seed, ..SolveConfig::default() }))?;
        *out = Box::into_raw(Box::new(CfuncSolutionSet { inner }));
        Ok(())
    })
}

/// # Safety
/// `set` must come from [`cfunc_solve`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cfunc_solution_set_free(set: *mut CfuncSolutionSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// # Safety
/// `set` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cfunc_solution_set_counts(set: *const CfuncSolutionSet, out: *mut CfuncCounts) -> CfuncStatus {
    guard(|| {
        non_null(set, "set")?;
        non_null(out, "out")?;
        let s = &(*set).inner;
        let c = s.counts();
        *out = CfuncCounts {
            total: c.total,
            distinct: c.distinct,
            unimodular: c.unimodular,
            dirichlet: c.dirichlet,
            real_valued: c.real_valued,
            max_multiplicity: c.max_multiplicity,
            total_paths: s.total_paths,
            diverged: s.diverged,
        };
        Ok(())
    })
}

/// JSON text of the whole set, freed with [`cfunc_free_string`].
///
/// # Safety
/// `set` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cfunc_solution_set_to_json(
    set: *const CfuncSolutionSet,
    out: *mut *mut c_char,
) -> CfuncStatus {
    guard(|| {
        non_null(set, "set")?;
        non_null(out, "out")?;
        let text = serde_json::to_string(&(*set).inner).expect("serializable");
        *out = CString::new(text).expect("json has no nul").into_raw();
        Ok(())
    })
}
