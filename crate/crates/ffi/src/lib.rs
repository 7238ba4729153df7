//! C ABI over `zetacert`.
//!
//! Conventions: every fallible function returns a [`ZcErrorCode`] and
//! writes its result through an out-pointer. Signed integer parameters
//! are accepted so that C callers passing negative values get
//! `ZC_ERROR_CODE_INVALID_INPUT` instead of a silent wrap-around. Strings
//! returned by the library are owned by the caller and must be released
//! with [`zc_string_free`]; handles with their matching `*_free`.
//! After a failure, [`zc_last_error_message`] describes it (per thread).

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use zetacert::bernoulli::bernoulli_number;
use zetacert::certificates::{phi_factorization, valuation_certificate, verify_integrality, ValuationCertificate};
use zetacert::constants::constants_report;
use zetacert::forms::{make_params, partial_fractions, FormTable};
use zetacert::zeta::zeta_p;
use zetacert::Error;

/// Status of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZcErrorCode {
    Ok = 0,
    InvalidInput = 1,
    Domain = 2,
    Pole = 3,
    Construction = 4,
    Hypothesis = 5,
    PrecisionShortfall = 6,
    Evaluation = 7,
    NotAdmissible = 8,
    Internal = 9,
    NullPointer = 10,
    Panic = 11,
}

/// Opaque partial-fraction table.
pub struct ZcFormTable(FormTable);

/// Opaque valuation certificate.
pub struct ZcCertificate(ValuationCertificate);

/// Constants for one prime.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZcConstants {
    pub p: u64,
    pub varpi: f64,
    pub c_p: f64,
    pub greatest_odd_le_cp: i64,
    pub s_min: i64,
    pub bounds_ok: bool,
    pub odd_threshold_ok: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn code_of(e: &Error) -> ZcErrorCode {
    match e {
        Error::InvalidInput(_) => ZcErrorCode::InvalidInput,
        Error::Domain(_) => ZcErrorCode::Domain,
        Error::Pole(_) => ZcErrorCode::Pole,
        Error::Construction(_) => ZcErrorCode::Construction,
        Error::Hypothesis(_) => ZcErrorCode::Hypothesis,
        Error::PrecisionShortfall { .. } => ZcErrorCode::PrecisionShortfall,
        Error::Evaluation { .. } => ZcErrorCode::Evaluation,
        Error::NotAdmissible(_) => ZcErrorCode::NotAdmissible,
        Error::Internal(_) => ZcErrorCode::Internal,
    }
}

/// Failure carried out of a guarded body.
enum Fail {
    Lib(Error),
    Null(&'static str),
    Input(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> ZcErrorCode {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ZcErrorCode::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            code_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer passed as {what}"));
            ZcErrorCode::NullPointer
        }
        Ok(Err(Fail::Input(msg))) => {
            set_error(msg);
            ZcErrorCode::InvalidInput
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            ZcErrorCode::Panic
        }
    }
}

fn unsigned(name: &str, v: i64) -> Result<u64, Fail> {
    u64::try_from(v).map_err(|_| Fail::Input(format!("{name} must be nonnegative, got {v}")))
}

fn small(name: &str, v: i64) -> Result<u32, Fail> {
    u32::try_from(v).map_err(|_| Fail::Input(format!("{name} out of range: {v}")))
}

fn out_ref<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Fail> {
    // SAFETY: caller promises `p` is either null or valid for writes.
    unsafe { p.as_mut() }.ok_or(Fail::Null(name))
}

fn in_ref<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Fail> {
    // SAFETY: caller promises `p` is either null or a live handle.
    unsafe { p.as_ref() }.ok_or(Fail::Null(name))
}

fn c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s).map(CString::into_raw).map_err(|_| Fail::Lib(Error::Internal("string contains NUL".into())))
}

/// Message for the last failed call on this thread, or null. Free with
/// [`zc_string_free`].
#[no_mangle]
pub extern "C" fn zc_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        Some(m) => CString::new(m.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut()),
        None => ptr::null_mut(),
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn zc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn zc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Builds the partial-fraction table of `R_n`.
#[no_mangle]
pub extern "C" fn zc_form_table_build(p: i64, s: i64, n: i64, relaxed: bool, out: *mut *mut ZcFormTable) -> ZcErrorCode {
    guard(|| {
        let slot = out_ref(out, "out")?;
        *slot = ptr::null_mut();
        let params = make_params(unsigned("p", p)?, unsigned("s", s)?, unsigned("n", n)?, relaxed)?;
        let table = partial_fractions(&params)?;
        *slot = Box::into_raw(Box::new(ZcFormTable(table)));
        Ok(())
    })
}

/// # Safety
/// `table` must be null or a handle from [`zc_form_table_build`].
#[no_mangle]
pub unsafe extern "C" fn zc_form_table_free(table: *mut ZcFormTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Highest pole order `p - 1 + s` and `n`.
#[no_mangle]
pub extern "C" fn zc_form_table_dims(table: *const ZcFormTable, order: *mut i64, n: *mut i64) -> ZcErrorCode {
    guard(|| {
        let t = &in_ref(table, "table")?.0;
        *out_ref(order, "order")? = t.params.e() as i64;
        *out_ref(n, "n")? = t.params.n as i64;
        Ok(())
    })
}

/// `r_{i,k}` as `"num/den"`, or `"num"` when integral.
#[no_mangle]
pub extern "C" fn zc_form_table_r(table: *const ZcFormTable, i: i64, k: i64, out: *mut *mut c_char) -> ZcErrorCode {
    guard(|| {
        let t = &in_ref(table, "table")?.0;
        let slot = out_ref(out, "out")?;
        let (i, k) = (unsigned("i", i)?, unsigned("k", k)?);
        if i < 1 || i > t.params.e() || k < 1 || k > t.params.n {
            return Err(Fail::Input(format!("(i, k) = ({i}, {k}) outside the table")));
        }
        *slot = c_string(t.r(i, k).to_string())?;
        Ok(())
    })
}

/// `ρ_i` for `0 ≤ i ≤ p-1+s` as `"num/den"`, or `"num"` when integral.
#[no_mangle]
pub extern "C" fn zc_form_table_rho(table: *const ZcFormTable, i: i64, out: *mut *mut c_char) -> ZcErrorCode {
    guard(|| {
        let t = &in_ref(table, "table")?.0;
        let slot = out_ref(out, "out")?;
        let i = unsigned("i", i)?;
        let v = t.rho.get(i as usize).ok_or_else(|| Fail::Input(format!("i = {i} outside the table")))?;
        *slot = c_string(v.to_string())?;
        Ok(())
    })
}

/// All divisibility checks; `pass` is true when every one holds.
#[no_mangle]
pub extern "C" fn zc_form_table_verify_integrality(table: *const ZcFormTable, pass: *mut bool) -> ZcErrorCode {
    guard(|| {
        let t = &in_ref(table, "table")?.0;
        let slot = out_ref(pass, "pass")?;
        let phi = phi_factorization(t.params.p, t.params.n)?;
        *slot = verify_integrality(t, &phi)?.passed();
        Ok(())
    })
}

/// The table as JSON.
#[no_mangle]
pub extern "C" fn zc_form_table_to_json(table: *const ZcFormTable, with_timing: bool, out: *mut *mut c_char) -> ZcErrorCode {
    guard(|| {
        let t = &in_ref(table, "table")?.0;
        let slot = out_ref(out, "out")?;
        let text = serde_json::to_string(&t.to_json(with_timing)).map_err(|e| Error::Internal(e.to_string()))?;
        *slot = c_string(text)?;
        Ok(())
    })
}

/// Valuation certificate for `n = n(N)` at the given precision.
#[no_mangle]
pub extern "C" fn zc_certificate_compute(p: i64, s: i64, big_n: i64, precision: i64, out: *mut *mut ZcCertificate) -> ZcErrorCode {
    guard(|| {
        let slot = out_ref(out, "out")?;
        *slot = ptr::null_mut();
        let cert = valuation_certificate(unsigned("p", p)?, unsigned("s", s)?, small("N", big_n)?, precision)?;
        *slot = Box::into_raw(Box::new(ZcCertificate(cert)));
        Ok(())
    })
}

/// # Safety
/// `cert` must be null or a handle from [`zc_certificate_compute`].
#[no_mangle]
pub unsafe extern "C" fn zc_certificate_free(cert: *mut ZcCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Overall verdict of a certificate.
#[no_mangle]
pub extern "C" fn zc_certificate_passed(cert: *const ZcCertificate, pass: *mut bool) -> ZcErrorCode {
    guard(|| {
        *out_ref(pass, "pass")? = in_ref(cert, "cert")?.0.passed();
        Ok(())
    })
}

/// Predicted and computed valuations; `has_computed` is false when `S_n`
/// vanished to the working precision or a path failed.
#[no_mangle]
pub extern "C" fn zc_certificate_valuations(
    cert: *const ZcCertificate,
    predicted: *mut i64,
    computed: *mut i64,
    has_computed: *mut bool,
) -> ZcErrorCode {
    guard(|| {
        let c = &in_ref(cert, "cert")?.0;
        *out_ref(predicted, "predicted")? = c.predicted_valuation;
        *out_ref(computed, "computed")? = c.computed_valuation.unwrap_or(0);
        *out_ref(has_computed, "has_computed")? = c.computed_valuation.is_some();
        Ok(())
    })
}

/// The certificate as JSON; `stable` drops timings.
#[no_mangle]
pub extern "C" fn zc_certificate_to_json(cert: *const ZcCertificate, stable: bool, out: *mut *mut c_char) -> ZcErrorCode {
    guard(|| {
        let c = &in_ref(cert, "cert")?.0;
        let slot = out_ref(out, "out")?;
        let mut c = c.clone();
        if stable {
            c.timings = None;
        }
        let text = serde_json::to_string(&c).map_err(|e| Error::Internal(e.to_string()))?;
        *slot = c_string(text)?;
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn zc_constants(p: i64, out: *mut ZcConstants) -> ZcErrorCode {
    guard(|| {
        let slot = out_ref(out, "out")?;
        let r = constants_report(unsigned("p", p)?)?;
        *slot = ZcConstants {
            p: r.p,
            varpi: r.varpi.to_f64(),
            c_p: r.c_p.to_f64(),
            greatest_odd_le_cp: r.greatest_odd_le_cp,
            s_min: r.s_min,
            bounds_ok: r.bounds_ok,
            odd_threshold_ok: r.odd_threshold_ok,
        };
        Ok(())
    })
}

/// `ζ_p(i)` modulo `p^precision`: the valuation and the comma-separated
/// base-p digits of the unit part, least significant first. A value that
/// vanishes to the working precision has `has_valuation = false` and an
/// empty digit string.
#[no_mangle]
pub extern "C" fn zc_zeta_digits(
    p: i64,
    i: i64,
    precision: i64,
    valuation: *mut i64,
    has_valuation: *mut bool,
    digits: *mut *mut c_char,
) -> ZcErrorCode {
    guard(|| {
        let v_slot = out_ref(valuation, "valuation")?;
        let h_slot = out_ref(has_valuation, "has_valuation")?;
        let d_slot = out_ref(digits, "digits")?;
        let z = zeta_p(unsigned("p", p)?, i, precision)?;
        let text: Vec<String> = z.unit_digits().iter().map(u64::to_string).collect();
        *v_slot = z.valuation().unwrap_or(precision);
        *h_slot = z.valuation().is_some();
        *d_slot = c_string(text.join(","))?;
        Ok(())
    })
}

/// `B_n` as `"num/den"`, or `"num"` when integral.
#[no_mangle]
pub extern "C" fn zc_bernoulli(n: i64, out: *mut *mut c_char) -> ZcErrorCode {
    guard(|| {
        let slot = out_ref(out, "out")?;
        *slot = c_string(bernoulli_number(n)?.to_string())?;
        Ok(())
    })
}
