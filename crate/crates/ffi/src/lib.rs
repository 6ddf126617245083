//! C interface to `qracah-td`.
//!
//! Inputs and outputs are JSON strings in the same formats as the command-line tool.
//! Strings returned through `char **` belong to the caller and are released with
//! [`qrtd_string_free`]; realizations with [`qrtd_realization_free`]. After a call
//! returns anything other than `QRTD_STATUS_OK`, [`qrtd_last_error`] describes the failure
//! on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use qracah_td::cli::{dispatch, Command, Mode, RunConfig};
use qracah_td::json::{error_json, realization};
use qracah_td::linalg::rank;
use qracah_td::scalar::{BigComplex, PrecisionConfig, RBig};
use qracah_td::td::{shape_check, TDRealization};
use qracah_td::Error;
use serde_json::Value;

/// Outcome of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QrtdStatus {
    Ok = 0,
    /// The input is well formed but the mathematics rules it out, e.g. the existence
    /// criterion fails for a parameter array.
    Refused = 1,
    InvalidInput = 2,
    NullPointer = 3,
    Internal = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QrtdMode {
    Exact = 0,
    Complex = 1,
}

/// Settings for a call. Zero fields select the defaults: 128 bits, tolerance
/// `2^(-bits/2)`, diameter limit 6 (exact) or 10 (complex), one worker.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QrtdOptions {
    pub mode: QrtdMode,
    pub precision_bits: u32,
    pub tolerance: f64,
    pub max_d: u32,
    pub jobs: u32,
}

/// A constructed realization.
pub struct QrtdRealization {
    json: Value,
    inner: Inner,
}

enum Inner {
    Exact(TDRealization<RBig>),
    Complex(TDRealization<BigComplex>),
}

thread_local! {
    static LAST_ERROR: RefCell<Option<(CString, CString)>> = const { RefCell::new(None) };
}

fn set_error(reason: &str, message: &str) {
    let clean = |s: &str| CString::new(s.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some((clean(reason), clean(message))));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(QrtdStatus, String, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if e.is_refusal() { QrtdStatus::Refused } else { QrtdStatus::InvalidInput };
        let message = error_json(&e).to_string();
        Failure(status, e.reason_code().to_string(), message)
    }
}

fn null(what: &str) -> Failure {
    Failure(QrtdStatus::NullPointer, "null-pointer".into(), format!("{what} is null"))
}

/// Runs `f`, recording any failure or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QrtdStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QrtdStatus::Ok,
        Ok(Err(Failure(status, reason, message))) => {
            set_error(&reason, &message);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error("internal", &msg);
            QrtdStatus::Internal
        }
    }
}

/// # Safety
/// `p` is null or a NUL-terminated string.
unsafe fn input_json(p: *const c_char, what: &str) -> Result<Value, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    let text = CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(QrtdStatus::InvalidInput, "parse-error".into(), format!("{what} is not UTF-8")))?;
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")).into())
}

/// # Safety
/// `out` is null or valid for writes.
unsafe fn put_string(out: *mut *mut c_char, v: &Value) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = CString::new(v.to_string()).expect("JSON has no NUL").into_raw();
    Ok(())
}

/// # Safety
/// `opts` is null or points to a valid `QrtdOptions`.
unsafe fn run_config(opts: *const QrtdOptions) -> Result<RunConfig, Failure> {
    let o = if opts.is_null() {
        QrtdOptions { mode: QrtdMode::Exact, precision_bits: 0, tolerance: 0.0, max_d: 0, jobs: 0 }
    } else {
        *opts
    };
    let bits = if o.precision_bits == 0 { 128 } else { o.precision_bits as usize };
    if o.mode == QrtdMode::Complex && bits < 64 {
        return Err(Error::Parse(format!("precision {bits} is below the minimum of 64 bits")).into());
    }
    let precision = if o.tolerance > 0.0 {
        PrecisionConfig::with_tolerance(bits, o.tolerance).map_err(|e| Error::Parse(e.to_string()))?
    } else {
        PrecisionConfig::new(bits)
    };
    Ok(RunConfig {
        mode: if o.mode == QrtdMode::Complex { Mode::Complex } else { Mode::Exact },
        precision,
        max_d: (o.max_d > 0).then_some(o.max_d as usize),
        u: None,
        v: None,
        jobs: o.jobs.max(1) as usize,
    })
}

fn command(name: &str) -> Option<Command> {
    let input: Option<PathBuf> = None;
    Some(match name {
        "construct" => Command::Construct { input },
        "verify" => Command::Verify { input },
        "drinfeld" => Command::Drinfeld { input },
        "relations" => Command::Relations { input },
        "shape" => Command::Shape { input },
        "roundtrip" => Command::Roundtrip { input },
        _ => return None,
    })
}

/// Runs a command by name (`construct`, `verify`, `drinfeld`, `relations`, `shape`,
/// `roundtrip`) on a JSON input and writes the JSON result to `*out`.
///
/// # Safety
/// `name` and `input` are NUL-terminated strings, `opts` is null or valid, and `out` is
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qrtd_run(
    name: *const c_char,
    input: *const c_char,
    opts: *const QrtdOptions,
    out: *mut *mut c_char,
) -> QrtdStatus {
    guard(|| {
        if name.is_null() {
            return Err(null("name"));
        }
        let name = CStr::from_ptr(name).to_string_lossy();
        let cmd = command(&name).ok_or_else(|| Error::Parse(format!("unknown command {name:?}")))?;
        let value = input_json(input, "input")?;
        let cfg = run_config(opts)?;
        put_string(out, &dispatch(&cmd, &value, &cfg)?)
    })
}

/// Constructs a realization from a parameter array. Exact mode moves to the complex
/// backend when the evaluation parameters are not rational.
///
/// # Safety
/// `array` is a NUL-terminated string, `opts` is null or valid, and `out` is valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn qrtd_construct(
    array: *const c_char,
    opts: *const QrtdOptions,
    out: *mut *mut QrtdRealization,
) -> QrtdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let value = input_json(array, "array")?;
        let cfg = run_config(opts)?;
        let json = dispatch(&Command::Construct { input: None }, &value, &cfg)?;
        let inner = if json["backend"] == "exact" {
            Inner::Exact(realization::<RBig>(&json, &())?)
        } else {
            Inner::Complex(realization::<BigComplex>(&json, &cfg.precision)?)
        };
        *out = Box::into_raw(Box::new(QrtdRealization { json, inner }));
        Ok(())
    })
}

/// Dimension of the realization.
///
/// # Safety
/// `r` is null or a live handle; `dim` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qrtd_realization_dim(r: *const QrtdRealization, dim: *mut usize) -> QrtdStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("realization"))?;
        if dim.is_null() {
            return Err(null("dim"));
        }
        *dim = match &r.inner {
            Inner::Exact(x) => x.dim,
            Inner::Complex(x) => x.dim,
        };
        Ok(())
    })
}

/// Diameter `d`; the shape has `d + 1` entries.
///
/// # Safety
/// `r` is null or a live handle; `d` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qrtd_realization_diameter(r: *const QrtdRealization, d: *mut usize) -> QrtdStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("realization"))?;
        if d.is_null() {
            return Err(null("d"));
        }
        *d = match &r.inner {
            Inner::Exact(x) => x.d(),
            Inner::Complex(x) => x.d(),
        };
        Ok(())
    })
}

/// Copies the shape into `shape`, which holds `len` entries; `len` must be at least `d + 1`.
///
/// # Safety
/// `r` is null or a live handle; `shape` is valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qrtd_realization_shape(
    r: *const QrtdRealization,
    shape: *mut usize,
    len: usize,
) -> QrtdStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("realization"))?;
        if shape.is_null() {
            return Err(null("shape"));
        }
        let s: Vec<usize> = match &r.inner {
            Inner::Exact(x) => x.e.iter().map(rank).collect(),
            Inner::Complex(x) => x.e.iter().map(rank).collect(),
        };
        if len < s.len() {
            return Err(Error::DimensionMismatch(format!("shape needs {} entries, buffer has {len}", s.len())).into());
        }
        ptr::copy_nonoverlapping(s.as_ptr(), shape, s.len());
        Ok(())
    })
}

/// Whether the shape passes its bound checks; writes 1 or 0.
///
/// # Safety
/// `r` is null or a live handle; `passed` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qrtd_realization_shape_ok(r: *const QrtdRealization, passed: *mut i32) -> QrtdStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("realization"))?;
        if passed.is_null() {
            return Err(null("passed"));
        }
        let ok = match &r.inner {
            Inner::Exact(x) => shape_check(x).report.passed(),
            Inner::Complex(x) => shape_check(x).report.passed(),
        };
        *passed = ok as i32;
        Ok(())
    })
}

/// The realization as JSON, including the construction certificate.
///
/// # Safety
/// `r` is null or a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qrtd_realization_json(r: *const QrtdRealization, out: *mut *mut c_char) -> QrtdStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("realization"))?;
        put_string(out, &r.json)
    })
}

/// The parameter array read back from the realization.
///
/// # Safety
/// `r` is null or a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qrtd_realization_parameter_array(
    r: *const QrtdRealization,
    out: *mut *mut c_char,
) -> QrtdStatus {
    use qracah_td::json::parameter_array_json;
    use qracah_td::td::parameter_array_of;
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("realization"))?;
        let v = match &r.inner {
            Inner::Exact(x) => parameter_array_json(&parameter_array_of(x)?),
            Inner::Complex(x) => parameter_array_json(&parameter_array_of(x)?),
        };
        put_string(out, &v)
    })
}

/// # Safety
/// `r` is null or a handle from [`qrtd_construct`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qrtd_realization_free(r: *mut QrtdRealization) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `s` is null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qrtd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Reason code of the last failure on this thread (e.g. `condition-ii-sum-zero`), or null.
/// Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn qrtd_last_error_reason() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |(r, _)| r.as_ptr()))
}

/// JSON description of the last failure on this thread, or null. Valid until the next
/// call on this thread.
#[no_mangle]
pub extern "C" fn qrtd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |(_, m)| m.as_ptr()))
}

/// Library version, static.
#[no_mangle]
pub extern "C" fn qrtd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn options_defaults_and_limits() {
        let cfg = unsafe { run_config(ptr::null()) }.ok().unwrap();
        assert_eq!((cfg.mode, cfg.precision.bits, cfg.max_d, cfg.jobs), (Mode::Exact, 128, None, 1));
        let o = QrtdOptions { mode: QrtdMode::Complex, precision_bits: 32, tolerance: 0.0, max_d: 0, jobs: 0 };
        let err = unsafe { run_config(&o) }.err().unwrap();
        assert_eq!(err.0, QrtdStatus::InvalidInput);
    }

    #[test]
    fn panics_become_internal() {
        let s = guard(|| panic!("boom"));
        assert_eq!(s, QrtdStatus::Internal);
        let msg = unsafe { CStr::from_ptr(qrtd_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "boom");
        assert_eq!(guard(|| Ok(())), QrtdStatus::Ok);
        assert!(qrtd_last_error().is_null());
    }
}
