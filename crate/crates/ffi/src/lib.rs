//! C ABI for `hlsym`.
//!
//! Every fallible call returns an [`HlsymStatus`]. On failure the message is
//! kept in a thread-local slot readable through [`hlsym_last_error`]. Results
//! are JSON strings owned by the caller and released with [`hlsym_string_free`].
//! Partitions are passed as text (`"[2,1]"`), scalars as exact rationals (`"1/3"`).

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;

use hlsym::bases::{parse_element, Basis, Converter};
use hlsym::hlbasis::{HLContext, ModifiedBasis, TwistedStructure};
use hlsym::partitions::Partition;
use hlsym::scalar::{self, Scalar};
use hlsym::serial::{
    coefficients_to_json, structconst_to_json, sym_from_json, sym_to_json, StructRow,
};
use hlsym::verify::{run_suite, RunConfig};
use hlsym::{Error, SymElement};
use serde_json::{json, Value};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HlsymStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Parameter = 4,
    DegreeCap = 5,
    DivisionByZero = 6,
    Internal = 7,
    /// The suite ran and found counterexamples; the report is still written.
    VerifyFailed = 8,
}

/// HL data `P_λ(·;t)`, `Q_λ(·;t)` at one parameter.
pub struct HlsymContext(HLContext);

/// Modified basis `P̃_λ(·;-t)`.
pub struct HlsymModified(ModifiedBasis);

/// Pairing of `P_μ(·;t²)` with the modified basis at `t`.
pub struct HlsymTwisted(TwistedStructure);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: HlsymStatus,
    message: String,
}

impl Failure {
    fn new(status: HlsymStatus, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse(_) | Error::UnknownSuite(_) => HlsymStatus::Parse,
            Error::DegreeCap { .. } => HlsymStatus::DegreeCap,
            Error::DivisionByZero(_) => HlsymStatus::DivisionByZero,
            Error::SizeMismatch(..)
            | Error::NotACover(..)
            | Error::NotInSimplex(_)
            | Error::Constraint(_)
            | Error::ParameterRange(_) => HlsymStatus::Parameter,
        };
        Failure::new(status, e.to_string())
    }
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

/// Runs `body`, converting errors and panics into a status.
fn guard<F: FnOnce() -> Result<(), Failure>>(body: F) -> HlsymStatus {
    match panic::catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => HlsymStatus::Ok,
        Ok(Err(f)) => {
            set_last_error(&f.message);
            f.status
        }
        Err(payload) => {
            let detail = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_last_error(&format!("internal error: {detail}"));
            HlsymStatus::Internal
        }
    }
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(
            HlsymStatus::NullPointer,
            format!("`{what}` is null"),
        ));
    }
    // SAFETY: non-null and NUL-terminated per the caller contract.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Failure::new(HlsymStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

fn read_partition(p: *const c_char, what: &str) -> Result<Partition, Failure> {
    // SAFETY: forwarded caller contract.
    Ok(unsafe { read_str(p, what) }?.parse()?)
}

fn read_scalar(p: *const c_char, what: &str) -> Result<Scalar, Failure> {
    // SAFETY: forwarded caller contract.
    Ok(scalar::parse(unsafe { read_str(p, what) }?)?)
}

/// # Safety
/// `h` is null or a live handle from the matching constructor.
unsafe fn handle<'a, T>(h: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: null or live per the caller contract.
    unsafe { h.as_ref() }
        .ok_or_else(|| Failure::new(HlsymStatus::NullPointer, format!("`{what}` is null")))
}

/// Clears `*out`, runs `body`, and stores its text in `*out` on success.
fn with_out_string<F>(out: *mut *mut c_char, body: F) -> HlsymStatus
where
    F: FnOnce() -> Result<String, Failure>,
{
    if out.is_null() {
        set_last_error("`out` is null");
        return HlsymStatus::NullPointer;
    }
    // SAFETY: `out` is non-null and writable per the caller contract.
    unsafe { *out = ptr::null_mut() };
    guard(|| {
        let text = body()?;
        let c = CString::new(text)
            .map_err(|_| Failure::new(HlsymStatus::Internal, "output contains a NUL byte"))?;
        // SAFETY: as above.
        unsafe { *out = c.into_raw() };
        Ok(())
    })
}

/// Stores `value` in `*out` on success.
fn with_out_handle<T, F>(out: *mut *mut T, body: F) -> HlsymStatus
where
    F: FnOnce() -> Result<T, Failure>,
{
    if out.is_null() {
        set_last_error("`out` is null");
        return HlsymStatus::NullPointer;
    }
    // SAFETY: `out` is non-null and writable per the caller contract.
    unsafe { *out = ptr::null_mut() };
    guard(|| {
        let value = body()?;
        // SAFETY: as above.
        unsafe { *out = Box::into_raw(Box::new(value)) };
        Ok(())
    })
}

fn coefficients_text(coeffs: &BTreeMap<Partition, Scalar>) -> String {
    coefficients_to_json(coeffs).to_string()
}

fn element_text(f: &SymElement) -> String {
    sym_to_json(f).to_string()
}

fn read_element(p: *const c_char) -> Result<SymElement, Failure> {
    // SAFETY: forwarded caller contract.
    let text = unsafe { read_str(p, "element") }?;
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Failure::new(HlsymStatus::Parse, format!("bad element JSON: {e}")))?;
    Ok(sym_from_json(&v)?)
}

fn structconst_text(
    kind: &str,
    t: &Scalar,
    mu: &Partition,
    nu: &Partition,
    coeffs: BTreeMap<Partition, Scalar>,
) -> String {
    let rows: Vec<StructRow> = coeffs
        .into_iter()
        .filter(|(_, v)| *v != scalar::int(0))
        .map(|(lambda, value)| StructRow {
            lambda,
            mu: mu.clone(),
            nu: nu.clone(),
            value,
        })
        .collect();
    structconst_to_json(kind, t, &rows).to_string()
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hlsym_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn hlsym_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is null or a string from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn hlsym_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by `CString::into_raw` per the caller contract.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// # Safety
/// `t` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hlsym_context_new(
    t: *const c_char,
    degree_cap: u32,
    out: *mut *mut HlsymContext,
) -> HlsymStatus {
    with_out_handle(out, || {
        Ok(HlsymContext(HLContext::new(
            read_scalar(t, "t")?,
            degree_cap as usize,
        )?))
    })
}

/// # Safety
/// `ctx` is null or a live handle; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hlsym_context_free(ctx: *mut HlsymContext) {
    if !ctx.is_null() {
        // SAFETY: allocated by `hlsym_context_new` per the caller contract.
        drop(unsafe { Box::from_raw(ctx) });
    }
}

/// `P_λ` in power sums, as `{"terms": [{"mu": [...], "c": "..."}]}`.
///
/// # Safety
/// Pointers are null or valid per their types.
#[no_mangle]
pub unsafe extern "C" fn hlsym_context_hl_p(
    ctx: *const HlsymContext,
    lambda: *const c_char,
    out: *mut *mut c_char,
) -> HlsymStatus {
    with_out_string(out, || {
        // SAFETY: caller contract.
        let ctx = unsafe { handle(ctx, "ctx") }?;
        Ok(element_text(
            &ctx.0.hl_p(&read_partition(lambda, "lambda")?)?,
        ))
    })
}

/// `Q_λ` in power sums.
///
/// # Safety
/// Pointers are null or valid per their types.
#[no_mangle]
pub unsafe extern "C" fn hlsym_context_hl_q(
    ctx: *const HlsymContext,
    lambda: *const c_char,
    out: *mut *mut c_char,
) -> HlsymStatus {
    with_out_string(out, || {
        // SAFETY: caller contract.
        let ctx = unsafe { handle(ctx, "ctx") }?;
        Ok(element_text(
            &ctx.0.hl_q(&read_partition(lambda, "lambda")?)?,
        ))
    })
}

/// Coefficients in the `P` basis of an element given in power-sum JSON,
/// as `[{"mu": [...], "c": "..."}]`.
///
/// # Safety
/// Pointers are null or valid per their types.
#[no_mangle]
pub unsafe extern "C" fn hlsym_context_expand_in_p(
    ctx: *const HlsymContext,
    element_json: *const c_char,
    out: *mut *mut c_char,
) -> HlsymStatus {
    with_out_string(out, || {
        // SAFETY: caller contract.
        let ctx = unsafe { handle(ctx, "ctx") }?;
        Ok(coefficients_text(
            &ctx.0.expand_in_p(&read_element(element_json)?)?,
        ))
    })
}

/// Nonzero `f^λ_{μν}` as `{"kind": "f", "t", "entries": [...]}`.
///
/// # Safety
/// Pointers are null or valid per their types.
#[no_mangle]
pub unsafe extern "C" fn hlsym_context_structconst_f(
    ctx: *const HlsymContext,
    mu: *const c_char,
    nu: *const c_char,
    out: *mut *mut c_char,
) -> HlsymStatus {
    with_out_string(out, || {
        // SAFETY: caller contract.
        let ctx = unsafe { handle(ctx, "ctx") }?;
        let (mu, nu) = (read_partition(mu, "mu")?, read_partition(nu, "nu")?);
        let coeffs = ctx.0.structconst_f(&mu, &nu)?;
        Ok(structconst_text("f", ctx.0.t(), &mu, &nu, coeffs))
    })
}

/// # Safety
/// `t` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hlsym_modified_new(
    t: *const c_char,
    degree_cap: u32,
    out: *mut *mut HlsymModified,
) -> HlsymStatus {
    with_out_handle(out, || {
        Ok(HlsymModified(ModifiedBasis::new(
            read_scalar(t, "t")?,
            degree_cap as usize,
        )?))
    })
}

/// # Safety
/// `basis` is null or a live handle; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hlsym_modified_free(basis: *mut HlsymModified) {
    if !basis.is_null() {
        // SAFETY: allocated by `hlsym_modified_new` per the caller contract.
        drop(unsafe { Box::from_raw(basis) });
    }
}

/// `P̃_λ` in power sums.
///
/// # Safety
/// Pointers are null or valid per their types.
#[no_mangle]
pub unsafe extern "C" fn hlsym_modified_p_tilde(
    basis: *const HlsymModified,
    lambda: *const c_char,
    out: *mut *mut c_char,
) -> HlsymStatus {
    with_out_string(out, || {
        // SAFETY: caller contract.
        let basis = unsafe { handle(basis, "basis") }?;
        Ok(element_text(
            &basis.0.p_tilde(&read_partition(lambda, "lambda")?)?,
        ))
    })
}

/// `Q̃_λ` in power sums.
///
/// # Safety
/// Pointers are null or valid per their types.
#[no_mangle]
pub unsafe extern "C" fn hlsym_modified_q_tilde(
    basis: *const HlsymModified,
    lambda: *const c_char,
    out: *mut *mut c_char,
) -> HlsymStatus {
    with_out_string(out, || {
        // SAFETY: caller contract.
        let basis = unsafe { handle(basis, "basis") }?;
        Ok(element_text(
            &basis.0.q_tilde(&read_partition(lambda, "lambda")?)?,
        ))
    })
}

/// Coefficients in the `P̃` basis of an element given in power-sum JSON.
///
/// # Safety
/// Pointers are null or valid per their types.
#[no_mangle]
pub unsafe extern "C" fn hlsym_modified_expand(
    basis: *const HlsymModified,
    element_json: *const c_char,
    out: *mut *mut c_char,
) -> HlsymStatus {
    with_out_string(out, || {
        // SAFETY: caller contract.
        let basis = unsafe { handle(basis, "basis") }?;
        Ok(coefficients_text(
            &basis.0.expand(&read_element(element_json)?)?,
        ))
    })
}

/// Nonzero sign-twisted constants `f̄^λ_{μν}`.
///
/// # Safety
/// Pointers are null or valid per their types.
#[no_mangle]
pub unsafe extern "C" fn hlsym_modified_structconst_fbar(
    basis: *const HlsymModified,
    mu: *const c_char,
    nu: *const c_char,
    out: *mut *mut c_char,
) -> HlsymStatus {
    with_out_string(out, || {
        // SAFETY: caller contract.
        let basis = unsafe { handle(basis, "basis") }?;
        let (mu, nu) = (read_partition(mu, "mu")?, read_partition(nu, "nu")?);
        let coeffs = basis.0.structconst_fbar(&mu, &nu)?;
        Ok(structconst_text("fbar", basis.0.t(), &mu, &nu, coeffs))
    })
}

/// # Safety
/// `t` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hlsym_twisted_new(
    t: *const c_char,
    degree_cap: u32,
    out: *mut *mut HlsymTwisted,
) -> HlsymStatus {
    with_out_handle(out, || {
        Ok(HlsymTwisted(TwistedStructure::new(
            read_scalar(t, "t")?,
            degree_cap as usize,
        )?))
    })
}

/// # Safety
/// `twisted` is null or a live handle; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hlsym_twisted_free(twisted: *mut HlsymTwisted) {
    if !twisted.is_null() {
        // SAFETY: allocated by `hlsym_twisted_new` per the caller contract.
        drop(unsafe { Box::from_raw(twisted) });
    }
}

/// Nonzero `f̃^λ_{μν}` for `π(P_μ(·;t²)) P̃_ν`.
///
/// # Safety
/// Pointers are null or valid per their types.
#[no_mangle]
pub unsafe extern "C" fn hlsym_twisted_structconst_ftilde(
    twisted: *const HlsymTwisted,
    mu: *const c_char,
    nu: *const c_char,
    out: *mut *mut c_char,
) -> HlsymStatus {
    with_out_string(out, || {
        // SAFETY: caller contract.
        let twisted = unsafe { handle(twisted, "twisted") }?;
        let (mu, nu) = (read_partition(mu, "mu")?, read_partition(nu, "nu")?);
        let coeffs = twisted.0.structconst_ftilde(&mu, &nu)?;
        Ok(structconst_text("ftilde", twisted.0.t(), &mu, &nu, coeffs))
    })
}

/// Rewrites an element such as `"3/2*p[2,1] - P[1]"` in basis `to`
/// (`p`, `P`, `Q`, `Pt`, `Qt`). Output: `{"basis", "t", "terms": [...]}`.
///
/// # Safety
/// Pointers are null or valid per their types.
#[no_mangle]
pub unsafe extern "C" fn hlsym_expand(
    t: *const c_char,
    degree_cap: u32,
    to: *const c_char,
    element: *const c_char,
    out: *mut *mut c_char,
) -> HlsymStatus {
    with_out_string(out, || {
        let t = read_scalar(t, "t")?;
        // SAFETY: caller contract.
        let to: Basis = unsafe { read_str(to, "to") }?.parse()?;
        // SAFETY: caller contract.
        let terms = parse_element(unsafe { read_str(element, "element") }?)?;
        let mut conv = Converter::new(t.clone(), degree_cap as usize)?;
        let f = conv.element(&terms, Basis::Power)?;
        let coeffs = conv.expand(&f, to)?;
        Ok(json!({
            "basis": to.symbol(),
            "t": scalar::format(&t),
            "terms": coefficients_to_json(&coeffs),
        })
        .to_string())
    })
}

/// Runs a verification suite and writes its JSON report. A negative `cap`
/// selects the suite default; `workers == 0` uses all cores. Returns
/// `VerifyFailed` (with the report written) when counterexamples were found.
///
/// # Safety
/// Pointers are null or valid per their types.
#[no_mangle]
pub unsafe extern "C" fn hlsym_verify(
    suite: *const c_char,
    t: *const c_char,
    cap: i32,
    workers: u32,
    out: *mut *mut c_char,
) -> HlsymStatus {
    let mut failed = false;
    let status = with_out_string(out, || {
        // SAFETY: caller contract.
        let suite = unsafe { read_str(suite, "suite") }?;
        let config = RunConfig {
            t: read_scalar(t, "t")?,
            cap: usize::try_from(cap).ok(),
            workers: workers as usize,
        };
        let report = run_suite(suite, &config)?;
        failed = !report.passed();
        Ok(report.to_json().to_string())
    });
    if status == HlsymStatus::Ok && failed {
        set_last_error("verification suite reported failures");
        HlsymStatus::VerifyFailed
    } else {
        status
    }
}
