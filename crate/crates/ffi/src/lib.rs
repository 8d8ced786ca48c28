//! C ABI over `xu-birkhoff`.
//!
//! Matrices and decompositions cross the boundary as opaque handles.
//! Every function returns an [`XuStatus`]; on failure a message for the
//! calling thread is available from [`xu_last_error_message`]. Complex
//! numbers are passed as interleaved `(re, im)` doubles, rows first.
//! Permutations are 1-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use xu_birkhoff::birkhoff::{decompose, DecomposeOptions, Decomposed, Method, Terms, VerificationReport};
use xu_birkhoff::io::{to_json, DecompositionDoc};
use xu_birkhoff::sampling::{SampleKind, SampleSpec};
use xu_birkhoff::scaling::ScalingOptions;
use xu_birkhoff::xu_group::pitch;
use xu_birkhoff::{ComplexMatrix, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XuStatus {
    Ok = 0,
    InvalidArgument = 1,
    Parse = 2,
    NotUnitary = 3,
    NotXu = 4,
    UnsupportedDimension = 5,
    ScalingFailed = 6,
    Internal = 7,
    Panic = 8,
}

/// Values accepted by the `method` argument of [`xu_decompose`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XuMethod {
    Auto = 0,
    Theorem2 = 1,
    Prime = 2,
    Xu3 = 3,
    Xu4 = 4,
}

/// Values accepted by the `kind` argument of [`xu_sample`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XuSampleKind {
    Unitary = 0,
    Xu = 1,
    CirculantXu = 2,
    Zu = 3,
}

/// Opaque square complex matrix.
pub struct XuMatrix(ComplexMatrix);

/// Opaque decomposition result.
pub struct XuDecomposition(Decomposed);

/// Verification of a decomposition against a matrix.
///
/// `line_sum_deviation` is NaN and `line_sums_ok` is -1 for complex
/// decompositions, where line sums are not checked.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct XuReport {
    pub reconstruction_error: f64,
    pub weight_sum_re: f64,
    pub weight_sum_im: f64,
    pub sq_moduli_sum: f64,
    pub term_count: usize,
    pub line_sum_deviation: f64,
    pub shape_defect: f64,
    pub tol: f64,
    pub reconstruction_ok: bool,
    pub weight_sum_ok: bool,
    pub sq_moduli_sum_ok: bool,
    pub line_sums_ok: i32,
    pub term_shape_ok: bool,
    /// Every check the engine claims passes.
    pub accepted: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(XuStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse(_) | Error::Malformed(_) => XuStatus::Parse,
            Error::NotUnitary { .. } => XuStatus::NotUnitary,
            Error::NotXu { .. } | Error::OffBlockLeak { .. } => XuStatus::NotXu,
            Error::UnsupportedDimension { .. } | Error::InvalidDimension(_) => XuStatus::UnsupportedDimension,
            Error::ScalingFailed { .. } => XuStatus::ScalingFailed,
            Error::IndexOutOfRange { .. } | Error::DimensionMismatch { .. } => XuStatus::InvalidArgument,
            Error::NotCirculant { .. } | Error::NotPermutation(_) => XuStatus::Internal,
        };
        Fail(status, e.to_string())
    }
}

fn invalid(msg: &str) -> Fail {
    Fail(XuStatus::InvalidArgument, msg.to_string())
}

/// Runs `f`, records any error or panic, and maps the outcome to a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> XuStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => XuStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(format!("panic: {msg}"));
            XuStatus::Panic
        }
    }
}

unsafe fn matrix_ref<'a>(m: *const XuMatrix) -> Result<&'a ComplexMatrix, Fail> {
    m.as_ref().map(|m| &m.0).ok_or_else(|| invalid("null matrix handle"))
}

unsafe fn decomposition_ref<'a>(d: *const XuDecomposition) -> Result<&'a Decomposed, Fail> {
    d.as_ref()
        .map(|d| &d.0)
        .ok_or_else(|| invalid("null decomposition handle"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(invalid("null output pointer"));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Fail(XuStatus::Internal, "string contains NUL".into()))
}

fn positive_tol(tol: f64) -> Result<f64, Fail> {
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(invalid("tolerance must be positive and finite"))
    }
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn xu_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a `dim` x `dim` matrix from `2 * dim * dim` interleaved doubles.
///
/// # Safety
/// `entries` must point to `2 * dim * dim` readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xu_matrix_new(dim: usize, entries: *const f64, out: *mut *mut XuMatrix) -> XuStatus {
    guard(|| {
        if dim == 0 {
            return Err(invalid("dimension must be at least 1"));
        }
        if entries.is_null() {
            return Err(invalid("null entries"));
        }
        let len = dim
            .checked_mul(dim)
            .and_then(|d| d.checked_mul(2))
            .ok_or_else(|| invalid("dimension too large"))?;
        let raw = std::slice::from_raw_parts(entries, len);
        let m = ComplexMatrix::from_fn(dim, |k, l| {
            let i = 2 * (k * dim + l);
            Complex64::new(raw[i], raw[i + 1])
        });
        write_out(out, Box::into_raw(Box::new(XuMatrix(m))))
    })
}

/// Parses a matrix from its JSON form `{"dim": n, "entries": [[[re, im], ...], ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xu_matrix_from_json(json: *const c_char, out: *mut *mut XuMatrix) -> XuStatus {
    guard(|| {
        if json.is_null() {
            return Err(invalid("null string"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Fail(XuStatus::Parse, e.to_string()))?;
        let m: ComplexMatrix = serde_json::from_str(text).map_err(Error::from)?;
        write_out(out, Box::into_raw(Box::new(XuMatrix(m))))
    })
}

/// Writes the JSON form of `m` to `*out`; release it with [`xu_string_free`].
///
/// # Safety
/// `m` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xu_matrix_to_json(m: *const XuMatrix, out: *mut *mut c_char) -> XuStatus {
    guard(|| {
        let text = to_json(matrix_ref(m)?)?;
        write_out(out, c_string(text)?)
    })
}

/// # Safety
/// `s` must come from this library, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn xu_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Dimension of `m`, or 0 for a NULL handle.
///
/// # Safety
/// `m` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn xu_matrix_dim(m: *const XuMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.dim())
}

/// Reads entry `(row, col)`, 0-based.
///
/// # Safety
/// `m` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xu_matrix_get(
    m: *const XuMatrix,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> XuStatus {
    guard(|| {
        let m = matrix_ref(m)?;
        if row >= m.dim() || col >= m.dim() {
            return Err(invalid("index out of range"));
        }
        let z = m[(row, col)];
        write_out(re, z.re)?;
        write_out(im, z.im)
    })
}

/// # Safety
/// `m` must come from this library, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn xu_matrix_free(m: *mut XuMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Draws a random matrix; `kind` is an [`XuSampleKind`] value.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xu_sample(n: usize, kind: u32, seed: u64, out: *mut *mut XuMatrix) -> XuStatus {
    guard(|| {
        let kind = match kind {
            0 => SampleKind::Unitary,
            1 => SampleKind::Xu,
            2 => SampleKind::CirculantXu,
            3 => SampleKind::Zu,
            _ => return Err(invalid("unknown sample kind")),
        };
        let m = SampleSpec { n, kind, seed }.draw()?;
        write_out(out, Box::into_raw(Box::new(XuMatrix(m))))
    })
}

/// Decomposes `m`. XU input gives real permutation weights; any other
/// unitary gives complex permutation terms. `method` is an [`XuMethod`]
/// value, `p_re + i p_im` splits the XU(3) family, and `seed` drives the
/// scaling restarts.
///
/// # Safety
/// `m` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xu_decompose(
    m: *const XuMatrix,
    method: u32,
    tol: f64,
    seed: u64,
    p_re: f64,
    p_im: f64,
    out: *mut *mut XuDecomposition,
) -> XuStatus {
    guard(|| {
        let m = matrix_ref(m)?;
        let tol = positive_tol(tol)?;
        let method = match method {
            0 => Method::Auto,
            1 => Method::Theorem2,
            2 => Method::Prime,
            3 => Method::Xu3,
            4 => Method::Xu4,
            _ => return Err(invalid("unknown method")),
        };
        let defaults = DecomposeOptions::default();
        let opts = DecomposeOptions {
            tol,
            scaling: ScalingOptions {
                tol: tol.min(defaults.scaling.tol),
                rng_seed: seed,
                ..defaults.scaling
            },
            p: Complex64::new(p_re, p_im),
        };
        let d = decompose(m, method, &opts)?;
        write_out(out, Box::into_raw(Box::new(XuDecomposition(d))))
    })
}

/// # Safety
/// `d` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn xu_decomposition_term_count(d: *const XuDecomposition) -> usize {
    d.as_ref().map_or(0, |d| d.0.terms.len())
}

/// # Safety
/// `d` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn xu_decomposition_dim(d: *const XuDecomposition) -> usize {
    d.as_ref().map_or(0, |d| d.0.n)
}

/// True when the terms carry phases, i.e. the input was unitary but not XU.
///
/// # Safety
/// `d` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn xu_decomposition_is_complex(d: *const XuDecomposition) -> bool {
    d.as_ref().is_some_and(|d| matches!(d.0.terms, Terms::Complex(_)))
}

/// Name of the engine that produced `d` as a static string, or NULL.
///
/// # Safety
/// `d` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn xu_decomposition_engine(d: *const XuDecomposition) -> *const c_char {
    use xu_birkhoff::birkhoff::Engine;
    let Some(d) = d.as_ref() else { return ptr::null() };
    let name: &'static CStr = match d.0.engine {
        Engine::Trivial => c"trivial",
        Engine::Permutation => c"permutation",
        Engine::Xu2 => c"xu2",
        Engine::Xu3 => c"xu3",
        Engine::Prime => c"prime",
        Engine::Xu4 => c"xu4",
        Engine::Theorem2 => c"theorem2",
    };
    name.as_ptr()
}

/// Reads term `idx`. `perm_out` receives `n` 1-based images. `phases_out`
/// receives `2n` interleaved doubles (all ones for real decompositions)
/// and may be NULL.
///
/// # Safety
/// `d` must be a live handle; `perm_out` must hold `n` entries,
/// `phases_out` `2n` doubles if non-NULL; `w_re`, `w_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xu_decomposition_term(
    d: *const XuDecomposition,
    idx: usize,
    perm_out: *mut usize,
    phases_out: *mut f64,
    w_re: *mut f64,
    w_im: *mut f64,
) -> XuStatus {
    guard(|| {
        let d = decomposition_ref(d)?;
        if perm_out.is_null() {
            return Err(invalid("null permutation buffer"));
        }
        let (perm, phases, weight) = match &d.terms {
            Terms::Real(s) => {
                let (p, &w) = s.iter().nth(idx).ok_or_else(|| invalid("term index out of range"))?;
                (p.one_based(), vec![Complex64::new(1.0, 0.0); d.n], w)
            }
            Terms::Complex(s) => {
                let t = s.terms.get(idx).ok_or_else(|| invalid("term index out of range"))?;
                (t.perm.one_based(), t.phases.clone(), t.weight)
            }
        };
        std::slice::from_raw_parts_mut(perm_out, perm.len()).copy_from_slice(&perm);
        if !phases_out.is_null() {
            let buf = std::slice::from_raw_parts_mut(phases_out, 2 * phases.len());
            for (k, z) in phases.iter().enumerate() {
                buf[2 * k] = z.re;
                buf[2 * k + 1] = z.im;
            }
        }
        write_out(w_re, weight.re)?;
        write_out(w_im, weight.im)
    })
}

/// Writes the JSON document for `d` (no report) to `*out`; release it with
/// [`xu_string_free`].
///
/// # Safety
/// `d` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xu_decomposition_to_json(d: *const XuDecomposition, out: *mut *mut c_char) -> XuStatus {
    guard(|| {
        let d = decomposition_ref(d)?;
        let text = to_json(&DecompositionDoc::new(d, None))?;
        write_out(out, c_string(text)?)
    })
}

fn report_to_c(d: &Decomposed, r: &VerificationReport) -> XuReport {
    XuReport {
        reconstruction_error: r.reconstruction_error,
        weight_sum_re: r.weight_sum.re,
        weight_sum_im: r.weight_sum.im,
        sq_moduli_sum: r.sq_moduli_sum,
        term_count: r.term_count,
        line_sum_deviation: r.line_sum_deviation.unwrap_or(f64::NAN),
        shape_defect: r.shape_defect,
        tol: r.tol,
        reconstruction_ok: r.flags.reconstruction,
        weight_sum_ok: r.flags.weight_sum,
        sq_moduli_sum_ok: r.flags.sq_moduli_sum,
        line_sums_ok: r.flags.line_sums.map_or(-1, i32::from),
        term_shape_ok: r.flags.term_shape,
        accepted: d.accepts(r),
    }
}

/// Checks `d` against `target` at tolerance `tol`.
///
/// # Safety
/// Both handles must be live and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xu_decomposition_verify(
    d: *const XuDecomposition,
    target: *const XuMatrix,
    tol: f64,
    out: *mut XuReport,
) -> XuStatus {
    guard(|| {
        let d = decomposition_ref(d)?;
        let target = matrix_ref(target)?;
        let tol = positive_tol(tol)?;
        if target.dim() != d.n {
            return Err(Error::DimensionMismatch {
                left: d.n,
                right: target.dim(),
            }
            .into());
        }
        write_out(out, report_to_c(d, &d.verify(target, tol)))
    })
}

/// # Safety
/// `d` must come from this library, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn xu_decomposition_free(d: *mut XuDecomposition) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Pitches `(x, y)` of the transfer matrix `M_rs` for prime `n`.
///
/// # Safety
/// `x` and `y` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xu_pitch(n: usize, r: usize, s: usize, x: *mut usize, y: *mut usize) -> XuStatus {
    guard(|| {
        let (px, py) = pitch(n, r, s)?;
        write_out(x, px)?;
        write_out(y, py)
    })
}
