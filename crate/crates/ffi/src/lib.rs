//! C ABI for `grasslp`.
//!
//! Every fallible call returns a [`GlStatus`]; on failure the message is kept
//! per thread and can be fetched with [`grasslp_last_error`]. Handles are
//! opaque and must be released with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use grasslp::bounds::{self, BoundResult};
use grasslp::rational::{from_f64, to_f64};
use grasslp::spectra::{self, JacobiOperator, Source};
use grasslp::zonal::ZonalTable;
use grasslp::{Error, Partition};

/// Status codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlStatus {
    Ok = 0,
    /// Mathematical domain or applicability failure.
    Domain = 1,
    /// Bad argument (null pointer, malformed partition, size mismatch).
    InvalidArgument = 2,
    /// Output buffer too small; the required size was reported.
    BufferTooSmall = 3,
    /// Numerical failure (eigensolver).
    Numerical = 4,
    Internal = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlSource {
    Exact = 0,
    ClosedForm = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlMethod {
    Simplex = 0,
    Orthoplex = 1,
    Degree2 = 2,
    Degree3 = 3,
    Eigen = 4,
    Teps = 5,
    Best = 6,
}

/// Zonal polynomials `P_κ` for fixed `(m, n)` up to some degree.
pub struct GlZonalTable {
    inner: Arc<ZonalTable>,
}

/// The truncated Jacobi operator `J′_k`.
pub struct GlJacobi {
    inner: JacobiOperator,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| {
        let mut e = e.borrow_mut();
        e.clear();
        e.extend(msg.bytes().filter(|&b| b != 0));
    });
}

fn status_of(e: &Error) -> GlStatus {
    match e {
        Error::Convergence { .. } => GlStatus::Numerical,
        Error::Parse(_) | Error::DimensionMismatch { .. } | Error::MalformedCode(_) | Error::NonOrthonormal { .. } => {
            GlStatus::InvalidArgument
        }
        e if e.is_domain() => GlStatus::Domain,
        _ => GlStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), GlStatus>) -> GlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            GlStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside grasslp");
            GlStatus::Panic
        }
    }
}

fn fail(e: Error) -> GlStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn invalid(msg: &str) -> GlStatus {
    set_error(msg);
    GlStatus::InvalidArgument
}

unsafe fn partition_from(parts: *const u32, len: usize) -> Result<Partition, GlStatus> {
    if len == 0 {
        return Ok(Partition::empty());
    }
    if parts.is_null() {
        return Err(invalid("null partition pointer"));
    }
    let v = std::slice::from_raw_parts(parts, len).to_vec();
    if v.windows(2).any(|w| w[0] < w[1]) {
        return Err(invalid("partition parts must be weakly decreasing"));
    }
    Partition::new(v).map_err(fail)
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), GlStatus> {
    if out.is_null() {
        return Err(invalid("null output pointer"));
    }
    *out = v;
    Ok(())
}

/// Copies `text` plus a NUL into `buf` when it fits; always stores the
/// required size (including the NUL) in `needed` if non-null.
unsafe fn write_str(text: &str, buf: *mut c_char, cap: usize, needed: *mut usize) -> Result<(), GlStatus> {
    let bytes = text.as_bytes();
    if !needed.is_null() {
        *needed = bytes.len() + 1;
    }
    if buf.is_null() || cap < bytes.len() + 1 {
        set_error("buffer too small");
        return Err(GlStatus::BufferTooSmall);
    }
    std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, bytes.len());
    *buf.add(bytes.len()) = 0;
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn grasslp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copies the last error message of this thread into `buf`.
///
/// # Safety
/// `buf` must be valid for `cap` bytes (or null); `needed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn grasslp_last_error(buf: *mut c_char, cap: usize, needed: *mut usize) -> GlStatus {
    let msg = LAST_ERROR.with(|e| String::from_utf8_lossy(&e.borrow()).into_owned());
    match write_str(&msg, buf, cap, needed) {
        Ok(()) => GlStatus::Ok,
        Err(s) => s,
    }
}

/// Builds (or fetches from the in-process memo) the table for `(m, n)` up to
/// degree `max_degree`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn grasslp_zonal_table_new(
    m: usize,
    n: usize,
    max_degree: usize,
    out: *mut *mut GlZonalTable,
) -> GlStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("null output pointer"));
        }
        let inner = ZonalTable::shared(m, n, max_degree).map_err(fail)?;
        *out = Box::into_raw(Box::new(GlZonalTable { inner }));
        Ok(())
    })
}

/// # Safety
/// `table` must come from [`grasslp_zonal_table_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn grasslp_zonal_table_free(table: *mut GlZonalTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

unsafe fn table_ref<'a>(t: *const GlZonalTable) -> Result<&'a ZonalTable, GlStatus> {
    t.as_ref().map(|t| &*t.inner).ok_or_else(|| invalid("null table handle"))
}

/// `P_κ(y_1, …, y_m)`.
///
/// # Safety
/// `parts` holds `len` values, `y` holds `y_len` values, `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn grasslp_zonal_eval(
    table: *const GlZonalTable,
    parts: *const u32,
    len: usize,
    y: *const f64,
    y_len: usize,
    out: *mut f64,
) -> GlStatus {
    guard(|| {
        let t = table_ref(table)?;
        let kappa = partition_from(parts, len)?;
        if y.is_null() && y_len > 0 {
            return Err(invalid("null point pointer"));
        }
        let pt = if y_len == 0 { &[][..] } else { std::slice::from_raw_parts(y, y_len) };
        let v = t.get(&kappa).map_err(fail)?.eval_f64(pt).map_err(fail)?;
        write_out(out, v)
    })
}

/// Eigenvalue of `P_κ` under the radial Laplacian.
///
/// # Safety
/// As for [`grasslp_zonal_eval`].
#[no_mangle]
pub unsafe extern "C" fn grasslp_zonal_eigenvalue(
    table: *const GlZonalTable,
    parts: *const u32,
    len: usize,
    out: *mut f64,
) -> GlStatus {
    guard(|| {
        let t = table_ref(table)?;
        let kappa = partition_from(parts, len)?;
        let v = to_f64(t.eigenvalue(&kappa).map_err(fail)?);
        write_out(out, v)
    })
}

/// Dimension `d_{2κ}` of the corresponding representation (as a double).
///
/// # Safety
/// As for [`grasslp_zonal_eval`].
#[no_mangle]
pub unsafe extern "C" fn grasslp_zonal_dim(
    table: *const GlZonalTable,
    parts: *const u32,
    len: usize,
    out: *mut f64,
) -> GlStatus {
    guard(|| {
        let t = table_ref(table)?;
        let kappa = partition_from(parts, len)?;
        let v = to_f64(&t.dim_rational(&kappa).map_err(fail)?);
        write_out(out, v)
    })
}

/// `P_κ` on the monomial basis, exact, e.g. `m(1) - 1`.
///
/// # Safety
/// `buf` valid for `cap` bytes or null; `needed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn grasslp_zonal_render(
    table: *const GlZonalTable,
    parts: *const u32,
    len: usize,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> GlStatus {
    guard(|| {
        let t = table_ref(table)?;
        let kappa = partition_from(parts, len)?;
        let text = t.get(&kappa).map_err(fail)?.to_string();
        write_str(&text, buf, cap, needed)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn grasslp_jacobi_new(
    m: usize,
    n: usize,
    k: usize,
    source: GlSource,
    out: *mut *mut GlJacobi,
) -> GlStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("null output pointer"));
        }
        let src = match source {
            GlSource::Exact => Source::Exact,
            GlSource::ClosedForm => Source::ClosedForm,
        };
        let inner = JacobiOperator::build(m, n, k, src).map_err(fail)?;
        *out = Box::into_raw(Box::new(GlJacobi { inner }));
        Ok(())
    })
}

/// # Safety
/// `op` must come from [`grasslp_jacobi_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn grasslp_jacobi_free(op: *mut GlJacobi) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Matrix size; 0 for a null handle.
///
/// # Safety
/// `op` null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn grasslp_jacobi_dim(op: *const GlJacobi) -> usize {
    op.as_ref().map_or(0, |o| o.inner.dim())
}

/// Largest eigenvalue; the Perron vector is copied into `vector` when it is
/// non-null (it must then hold `grasslp_jacobi_dim` values).
///
/// # Safety
/// `op` live; `out` writable; `vector` null or valid for the dimension.
#[no_mangle]
pub unsafe extern "C" fn grasslp_jacobi_lambda_max(op: *const GlJacobi, out: *mut f64, vector: *mut f64) -> GlStatus {
    guard(|| {
        let o = op.as_ref().ok_or_else(|| invalid("null operator handle"))?;
        let p = o.inner.lambda_max().map_err(fail)?;
        if !vector.is_null() {
            std::ptr::copy_nonoverlapping(p.vector.as_ptr(), vector, p.vector.len());
        }
        write_out(out, p.eigenvalue)
    })
}

/// All eigenvalues in increasing order into `values` (`grasslp_jacobi_dim` slots).
///
/// # Safety
/// `op` live; `values` valid for the dimension.
#[no_mangle]
pub unsafe extern "C" fn grasslp_jacobi_eigenvalues(op: *const GlJacobi, values: *mut f64) -> GlStatus {
    guard(|| {
        let o = op.as_ref().ok_or_else(|| invalid("null operator handle"))?;
        if values.is_null() {
            return Err(invalid("null output pointer"));
        }
        let ev = o.inner.eigenvalues();
        std::ptr::copy_nonoverlapping(ev.as_ptr(), values, ev.len());
        Ok(())
    })
}

/// Upper bound on the size of a code in `G_{m,n}` with `σ ≤ s` between
/// distinct elements. `k` is the degree for eigen/teps and the largest degree
/// tried for `Best`. A non-applicable method gives `Domain`; `Best` with no
/// applicable method gives `Ok` and +inf.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn grasslp_bound(
    m: usize,
    n: usize,
    s: f64,
    method: GlMethod,
    k: usize,
    out: *mut f64,
) -> GlStatus {
    guard(|| {
        let sr = from_f64(s).map_err(fail)?;
        let value = match method {
            GlMethod::Simplex => bounds::simplex_bound(m, n, &sr).map(|b: BoundResult| b.value),
            GlMethod::Orthoplex => bounds::orthoplex_bound(m, n, &sr).map(|b| b.value),
            GlMethod::Degree2 => bounds::degree2_bound(m, n, &sr).map(|b| b.value),
            GlMethod::Degree3 => bounds::degree3_bound(m, n, &sr).map(|b| b.value),
            GlMethod::Eigen => spectra::eigen_bound_simple(m, n, k, s, Source::ClosedForm).map(|b| b.bound),
            GlMethod::Teps => spectra::eigen_bound_teps(m, n, k, None, s, Source::ClosedForm).map(|b| b.bound),
            GlMethod::Best => bounds::best_bound(m, n, &sr, k).map(|b| b.value()),
        }
        .map_err(fail)?;
        write_out(out, value)
    })
}

/// Asymptotic LP rate (natural log).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn grasslp_lp_rate(m: usize, s: f64, out: *mut f64) -> GlStatus {
    guard(|| write_out(out, bounds::lp_rate(m, s).map_err(fail)?))
}

/// Asymptotic Hamming rate (natural log).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn grasslp_hamming_rate(m: usize, s: f64, out: *mut f64) -> GlStatus {
    guard(|| write_out(out, bounds::hamming_rate(m, s).map_err(fail)?))
}

/// Crossing point of the two rates.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn grasslp_crossing(m: usize, out: *mut f64) -> GlStatus {
    guard(|| write_out(out, bounds::crossing_point(m).map_err(fail)?.s0))
}

/// Audits a code file, writing the JSON report into `buf`. `pass` receives
/// 1 when every bound holds and every positivity sum is nonnegative.
///
/// # Safety
/// `path` NUL-terminated; `buf`/`needed`/`pass` as for [`grasslp_zonal_render`].
#[no_mangle]
pub unsafe extern "C" fn grasslp_audit_file(
    path: *const c_char,
    k_max: usize,
    pass: *mut i32,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> GlStatus {
    guard(|| {
        if path.is_null() {
            return Err(invalid("null path"));
        }
        let p = CStr::from_ptr(path).to_str().map_err(|_| invalid("path is not UTF-8"))?;
        let code = grasslp::codes::load_code(std::path::Path::new(p), false).map_err(fail)?;
        let rep = grasslp::codes::audit(&code, k_max).map_err(fail)?;
        if !pass.is_null() {
            *pass = rep.pass as i32;
        }
        let text = serde_json::to_string(&rep).map_err(|e| fail(e.into()))?;
        write_str(&text, buf, cap, needed)
    })
}
