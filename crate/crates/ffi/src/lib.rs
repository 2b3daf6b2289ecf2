//! C interface to `bvtn`.
//!
//! A `BvtnBd` handle owns the bidiagonal decomposition of one
//! Bernstein–Vandermonde matrix. Every fallible call returns a `BvtnStatus`;
//! on failure `bvtn_last_error_message` describes the error for the calling
//! thread. Matrices cross the boundary row-major, and callers provide every
//! output buffer along with its length in doubles.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use bvtn::algebra::{expand, solve_system};
use bvtn::spectral;
use bvtn::{compute_bd, validate_nodes, BasisDegree, BdMatrix, Error, PrecisionPolicy};

/// Opaque handle to a decomposition, created by `bvtn_bd_new`.
pub struct BvtnBd {
    inner: BdMatrix<f64>,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BvtnStatus {
    Ok = 0,
    NullPointer = 1,
    BufferTooSmall = 2,
    Empty = 3,
    NonMonotonic = 4,
    OutOfRange = 5,
    DegreeExceedsRows = 6,
    UnderflowDetected = 7,
    DimensionMismatch = 8,
    NotSquare = 9,
    NotOverdetermined = 10,
    PrecisionExhausted = 11,
    NoConvergence = 12,
    InvalidPolicy = 13,
    Internal = 14,
}

/// Working-precision schedule; see `bvtn_policy_default`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct BvtnPolicy {
    pub start_bits: u32,
    pub max_bits: u32,
    pub stabilization_rtol: f64,
}

impl From<BvtnPolicy> for PrecisionPolicy {
    fn from(p: BvtnPolicy) -> Self {
        PrecisionPolicy {
            start_bits: p.start_bits,
            max_bits: p.max_bits,
            stabilization_rtol: p.stabilization_rtol,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> BvtnStatus {
    match e {
        Error::Empty => BvtnStatus::Empty,
        Error::NonMonotonic { .. } => BvtnStatus::NonMonotonic,
        Error::OutOfRange { .. } => BvtnStatus::OutOfRange,
        Error::DegreeExceedsRows { .. } => BvtnStatus::DegreeExceedsRows,
        Error::UnderflowDetected { .. } => BvtnStatus::UnderflowDetected,
        Error::DimensionMismatch { .. } | Error::LengthMismatch { .. } => {
            BvtnStatus::DimensionMismatch
        }
        Error::NotSquare { .. } => BvtnStatus::NotSquare,
        Error::NotOverdetermined { .. } => BvtnStatus::NotOverdetermined,
        Error::PrecisionExhausted { .. } => BvtnStatus::PrecisionExhausted,
        Error::NoConvergence { .. } => BvtnStatus::NoConvergence,
        Error::InvalidPolicy(_) => BvtnStatus::InvalidPolicy,
        Error::ZeroPivot { .. } => BvtnStatus::Internal,
    }
}

enum Fail {
    Status(BvtnStatus, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> BvtnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BvtnStatus::Ok,
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            BvtnStatus::Internal
        }
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(BvtnStatus::NullPointer, format!("{what} is null"))
}

unsafe fn handle<'a>(bd: *const BvtnBd) -> Result<&'a BdMatrix<f64>, Fail> {
    bd.as_ref().map(|h| &h.inner).ok_or_else(|| null("handle"))
}

unsafe fn input<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Fail> {
    if p.is_null() {
        if len == 0 {
            return Ok(&[]);
        }
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn output<'a>(
    p: *mut f64,
    len: usize,
    need: usize,
    what: &str,
) -> Result<&'a mut [f64], Fail> {
    if len < need {
        return Err(Fail::Status(
            BvtnStatus::BufferTooSmall,
            format!("{what} holds {len} doubles, {need} needed"),
        ));
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts_mut(p, need))
}

unsafe fn policy_of(p: *const BvtnPolicy) -> PrecisionPolicy {
    p.as_ref()
        .map_or_else(PrecisionPolicy::default, |p| (*p).into())
}

/// The default schedule: 106 bits doubling up to 1024, relative tolerance 1e-15.
#[no_mangle]
pub extern "C" fn bvtn_policy_default() -> BvtnPolicy {
    let p = PrecisionPolicy::default();
    BvtnPolicy {
        start_bits: p.start_bits,
        max_bits: p.max_bits,
        stabilization_rtol: p.stabilization_rtol,
    }
}

/// Message for the last failed call on this thread, or an empty string.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bvtn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Computes the decomposition for `len` strictly increasing nodes in (0, 1)
/// and basis degree `degree <= len - 1`. On success `*out` receives a handle
/// to release with `bvtn_bd_free`.
#[no_mangle]
pub unsafe extern "C" fn bvtn_bd_new(
    nodes: *const f64,
    len: usize,
    degree: usize,
    out: *mut *mut BvtnBd,
) -> BvtnStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let x = validate_nodes(input(nodes, len, "nodes")?)?;
        let bd = compute_bd(&x, BasisDegree::new(degree, &x)?)?;
        *out = Box::into_raw(Box::new(BvtnBd { inner: bd }));
        Ok(())
    })
}

/// Wraps a packed `rows x cols` array (as returned by `bvtn_bd_entries`).
/// Every entry must be positive and finite.
#[no_mangle]
pub unsafe extern "C" fn bvtn_bd_from_entries(
    entries: *const f64,
    rows: usize,
    cols: usize,
    out: *mut *mut BvtnBd,
) -> BvtnStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let len = rows.checked_mul(cols).ok_or(Error::Empty)?;
        let data = input(entries, len, "entries")?;
        let m = bvtn::Matrix::from_fn(rows, cols, |i, j| data[i * cols + j]);
        let bd = BdMatrix::checked(m)?;
        *out = Box::into_raw(Box::new(BvtnBd { inner: bd }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bvtn_bd_free(bd: *mut BvtnBd) {
    if !bd.is_null() {
        drop(Box::from_raw(bd));
    }
}

/// Number of nodes, `l + 1`. Zero for a null handle.
#[no_mangle]
pub unsafe extern "C" fn bvtn_bd_rows(bd: *const BvtnBd) -> usize {
    bd.as_ref().map_or(0, |h| h.inner.rows())
}

/// Number of basis functions, `n + 1`. Zero for a null handle.
#[no_mangle]
pub unsafe extern "C" fn bvtn_bd_cols(bd: *const BvtnBd) -> usize {
    bd.as_ref().map_or(0, |h| h.inner.cols())
}

/// Copies the packed pivots and multipliers, `rows * cols` doubles.
#[no_mangle]
pub unsafe extern "C" fn bvtn_bd_entries(
    bd: *const BvtnBd,
    out: *mut f64,
    len: usize,
) -> BvtnStatus {
    guard(|| {
        let bd = handle(bd)?;
        let src = bd.entries().as_slice();
        output(out, len, src.len(), "out")?.copy_from_slice(src);
        Ok(())
    })
}

/// Writes the Bernstein–Vandermonde matrix itself, `rows * cols` doubles.
#[no_mangle]
pub unsafe extern "C" fn bvtn_bd_expand(
    bd: *const BvtnBd,
    out: *mut f64,
    len: usize,
) -> BvtnStatus {
    guard(|| {
        let a = expand(handle(bd)?);
        output(out, len, a.as_slice().len(), "out")?.copy_from_slice(a.as_slice());
        Ok(())
    })
}

/// Solves `A x = b` for square `A`; `b` and `x` have `rows` entries.
#[no_mangle]
pub unsafe extern "C" fn bvtn_bd_solve(
    bd: *const BvtnBd,
    b: *const f64,
    b_len: usize,
    x: *mut f64,
    x_len: usize,
) -> BvtnStatus {
    guard(|| {
        let bd = handle(bd)?;
        let sol = solve_system(bd, input(b, b_len, "b")?)?;
        output(x, x_len, sol.len(), "x")?.copy_from_slice(&sol);
        Ok(())
    })
}

/// Eigenvalues of square `A`, descending, into `out` (`rows` doubles).
/// `policy` may be null for the default; `achieved_bits` may be null.
#[no_mangle]
pub unsafe extern "C" fn bvtn_bd_eigenvalues(
    bd: *const BvtnBd,
    policy: *const BvtnPolicy,
    out: *mut f64,
    len: usize,
    achieved_bits: *mut u32,
) -> BvtnStatus {
    guard(|| {
        let s = spectral::eigenvalues(handle(bd)?, &policy_of(policy))?;
        output(out, len, s.values.len(), "out")?.copy_from_slice(&s.values);
        if let Some(b) = achieved_bits.as_mut() {
            *b = s.achieved_bits;
        }
        Ok(())
    })
}

/// Singular values of `A`, descending, into `out` (`cols` doubles).
#[no_mangle]
pub unsafe extern "C" fn bvtn_bd_singular_values(
    bd: *const BvtnBd,
    policy: *const BvtnPolicy,
    out: *mut f64,
    len: usize,
    achieved_bits: *mut u32,
) -> BvtnStatus {
    guard(|| {
        let s = spectral::singular_values(handle(bd)?, &policy_of(policy))?;
        output(out, len, s.values.len(), "out")?.copy_from_slice(&s.values);
        if let Some(b) = achieved_bits.as_mut() {
            *b = s.achieved_bits;
        }
        Ok(())
    })
}

/// Least-squares fit `min ‖A c - f‖₂` for `rows > cols`. `f` has `rows`
/// entries and `c` receives `cols`. `residual` (`rows` doubles) and
/// `residual_norm` may be null.
#[no_mangle]
pub unsafe extern "C" fn bvtn_bd_least_squares(
    bd: *const BvtnBd,
    policy: *const BvtnPolicy,
    f: *const f64,
    f_len: usize,
    c: *mut f64,
    c_len: usize,
    residual: *mut f64,
    residual_len: usize,
    residual_norm: *mut f64,
) -> BvtnStatus {
    guard(|| {
        let sol = spectral::least_squares(handle(bd)?, input(f, f_len, "f")?, &policy_of(policy))?;
        output(c, c_len, sol.coefficients.len(), "c")?.copy_from_slice(&sol.coefficients);
        if !residual.is_null() {
            output(residual, residual_len, sol.residual.len(), "residual")?
                .copy_from_slice(&sol.residual);
        }
        if let Some(n) = residual_norm.as_mut() {
            *n = sol.residual_norm;
        }
        Ok(())
    })
}
