//! C ABI over `fp-selberg`.
//!
//! Every function returns an [`FpsStatus`]; results are written through out
//! pointers only on success. After a non-`Ok` status,
//! [`fps_last_error_message`] describes the failure on the calling thread.
//! Prime fields are passed as opaque [`FpsField`] handles; strings returned
//! by the library must be released with [`fps_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fp_selberg::cli::table::build_table;
use fp_selberg::closedform::{
    aomoto_rhs, binom_form_rhs, factorization_rhs, jacobi_check, morris_form_rhs, region_classify, selberg_rhs, Region,
};
use fp_selberg::fpintegral::{beta_fp, selberg_s, selberg_skn, selberg_sum_oracle};
use fp_selberg::kz::{kz_closed_form, kz_residual, kz_solution, singular_check, KZParams};
use fp_selberg::zidentity::{normal_form, verify_identity};
use fp_selberg::{Error, FpElement, PrimeField, SelbergParams};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FpsStatus {
    Ok = 0,
    /// Argument outside the domain of the operation or closed form.
    Domain = 1,
    /// Operands from different fields.
    Type = 2,
    /// A denominator vanishes mod p.
    Singular = 3,
    /// Term or cell budget exceeded.
    Resource = 4,
    /// Two routes that must agree disagreed.
    Mismatch = 5,
    NullPointer = 6,
    InvalidArgument = 7,
    /// A Rust panic was caught at the boundary.
    Panic = 8,
}

/// Opaque prime field handle.
pub struct FpsField {
    inner: PrimeField,
}

/// `(n, a, b, c)` of an F_p-Selberg integral; the prime comes from the field handle.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct FpsSelbergParams {
    pub n: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

/// Outcome of checking one KZ instance.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct FpsKzOutcome {
    pub regime: bool,
    pub matches_closed_form: bool,
    pub residuals_vanish: bool,
    pub singular: bool,
    pub identically_zero: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let clean = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = clean);
}

struct Failure(FpsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Domain(_) => FpsStatus::Domain,
            Error::Type(_) => FpsStatus::Type,
            Error::Singular(_) => FpsStatus::Singular,
            Error::Resource(_) => FpsStatus::Resource,
            Error::Mismatch(_) => FpsStatus::Mismatch,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(FpsStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FpsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            FpsStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("panic: {msg}"));
            FpsStatus::Panic
        }
    }
}

unsafe fn field_ref<'a>(f: *const FpsField) -> Result<&'a PrimeField, Failure> {
    f.as_ref().map(|h| &h.inner).ok_or_else(|| null("field"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn params(f: *const FpsField, s: *const FpsSelbergParams) -> Result<SelbergParams, Failure> {
    let field = field_ref(f)?;
    let s = s.as_ref().ok_or_else(|| null("params"))?;
    Ok(SelbergParams::new(field, s.n, s.a, s.b, s.c)?)
}

fn string_out(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure(FpsStatus::InvalidArgument, e.to_string()))?;
    unsafe { write(out, c.into_raw()) }
}

/// Message for the most recent failure on this thread; empty after success.
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn fps_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates the prime field F_p, `3 <= p < 2^31`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fps_field_new(p: u64, out: *mut *mut FpsField) -> FpsStatus {
    guard(|| {
        let inner = PrimeField::new(p)?;
        write(out, Box::into_raw(Box::new(FpsField { inner })))
    })
}

/// Releases a field handle; null is ignored.
///
/// # Safety
/// `f` must come from [`fps_field_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fps_field_free(f: *mut FpsField) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// The prime of a field handle, or 0 for null.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fps_field_prime(f: *const FpsField) -> u64 {
    f.as_ref().map_or(0, |h| h.inner.p())
}

fn elem_out(f: *const FpsField, out: *mut u64, body: impl FnOnce(&PrimeField) -> Result<FpElement, Error>) -> FpsStatus {
    guard(|| {
        let v = body(unsafe { field_ref(f)? })?;
        unsafe { write(out, v.value()) }
    })
}

fn selberg_out(
    f: *const FpsField,
    params_in: *const FpsSelbergParams,
    out: *mut u64,
    body: impl FnOnce(SelbergParams) -> Result<FpElement, Error>,
) -> FpsStatus {
    guard(|| {
        let v = body(unsafe { params(f, params_in)? })?;
        unsafe { write(out, v.value()) }
    })
}

/// `n! mod p` for `0 <= n <= p-1`.
///
/// # Safety
/// Pointer arguments must be null or valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fps_factorial(f: *const FpsField, n: i64, out: *mut u64) -> FpsStatus {
    elem_out(f, out, |field| field.factorial(n))
}

/// `C(n, m) mod p` by Lucas' theorem.
///
/// # Safety
/// Pointer arguments must be null or valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fps_binom_lucas(f: *const FpsField, n: u64, m: u64, out: *mut u64) -> FpsStatus {
    elem_out(f, out, |field| Ok(field.binom_lucas(n, m)))
}

/// The F_p-beta integral of `x^a (1-x)^b`, `a, b < p`.
///
/// # Safety
/// Pointer arguments must be null or valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fps_beta(f: *const FpsField, a: u64, b: u64, out: *mut u64) -> FpsStatus {
    elem_out(f, out, |field| beta_fp(a, b, field))
}

/// The F_p-Selberg integral by coefficient extraction.
///
/// # Safety
/// Pointer arguments must be null or valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fps_selberg_s(f: *const FpsField, params_in: *const FpsSelbergParams, out: *mut u64) -> FpsStatus {
    selberg_out(f, params_in, out, |s| selberg_s(&s))
}

/// The integral decorated by `x_1 ... x_k`.
///
/// # Safety
/// Pointer arguments must be null or valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fps_selberg_skn(f: *const FpsField, params_in: *const FpsSelbergParams, k: u64, out: *mut u64) -> FpsStatus {
    selberg_out(f, params_in, out, |s| selberg_skn(&s, k))
}

/// The main product formula; Domain outside its regime.
///
/// # Safety
/// Pointer arguments must be null or valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fps_selberg_rhs(f: *const FpsField, params_in: *const FpsSelbergParams, out: *mut u64) -> FpsStatus {
    selberg_out(f, params_in, out, |s| selberg_rhs(&s))
}

/// Sum of the integrand over all points of F_p^n.
///
/// # Safety
/// Pointer arguments must be null or valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fps_selberg_sum_oracle(f: *const FpsField, params_in: *const FpsSelbergParams, out: *mut u64) -> FpsStatus {
    selberg_out(f, params_in, out, |s| Ok(selberg_sum_oracle(&s)))
}

/// The decorated product formula, `0 <= k <= n-1`.
///
/// # Safety
/// Pointer arguments must be null or valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fps_aomoto_rhs(f: *const FpsField, params_in: *const FpsSelbergParams, k: u64, out: *mut u64) -> FpsStatus {
    selberg_out(f, params_in, out, |s| aomoto_rhs(&s, k))
}

/// The Morris-derived formula.
///
/// # Safety
/// Pointer arguments must be null or valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fps_morris_form_rhs(f: *const FpsField, params_in: *const FpsSelbergParams, out: *mut u64) -> FpsStatus {
    selberg_out(f, params_in, out, |s| morris_form_rhs(&s))
}

/// The binomial formula for `a = p-1-(n-1)c-k`.
///
/// # Safety
/// Pointer arguments must be null or valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fps_binom_form_rhs(f: *const FpsField, params_in: *const FpsSelbergParams, k: u64, out: *mut u64) -> FpsStatus {
    selberg_out(f, params_in, out, |s| binom_form_rhs(&s, k))
}

/// The factorized value on region `i >= 1`.
///
/// # Safety
/// Pointer arguments must be null or valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fps_factorization_rhs(f: *const FpsField, params_in: *const FpsSelbergParams, i: u64, out: *mut u64) -> FpsStatus {
    selberg_out(f, params_in, out, |s| factorization_rhs(&s, i))
}

/// Region index of `(a, b)`: `i` for `Omega_i`, `-1` when outside.
///
/// # Safety
/// Pointer arguments must be null or valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fps_region(f: *const FpsField, params_in: *const FpsSelbergParams, out: *mut i64) -> FpsStatus {
    guard(|| {
        let s = params(f, params_in)?;
        let r = match region_classify(&s) {
            Region::Omega(i) => i as i64,
            Region::Outside => -1,
        };
        write(out, r)
    })
}

/// Whether the Jacobi-polynomial identity holds for the parameters.
///
/// # Safety
/// Pointer arguments must be null or valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fps_jacobi_check(f: *const FpsField, params_in: *const FpsSelbergParams, out: *mut bool) -> FpsStatus {
    guard(|| {
        let s = params(f, params_in)?;
        write(out, jacobi_check(&s)?)
    })
}

/// Whether the two-variable summation identity holds for `(n, c)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fps_verify_identity(n: u32, c: u32, out: *mut bool) -> FpsStatus {
    guard(|| write(out, verify_identity(n as usize, c)?))
}

/// The identity's right-hand side with the common summand factor removed,
/// e.g. `12(x+y+2)(x+y+3)` for `n = 2, c = 2`. Free with [`fps_string_free`].
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fps_identity_normal_form(n: u32, c: u32, out: *mut *mut c_char) -> FpsStatus {
    guard(|| string_out(out, normal_form(n as usize, c)?.to_string()))
}

/// Builds the KZ solution for `(p, m1, m2, n, kappa_num/kappa_den)` and checks it.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fps_kz_check(
    p: u64,
    m1: u64,
    m2: u64,
    n: u64,
    kappa_num: i64,
    kappa_den: i64,
    out: *mut FpsKzOutcome,
) -> FpsStatus {
    guard(|| {
        let field = PrimeField::new(p)?;
        let k = KZParams::new(&field, m1, m2, n, kappa_num, kappa_den)?;
        let u = kz_solution(&k)?;
        let (r1, r2) = kz_residual(&u, &k)?;
        let regime = k.theorem71_regime();
        let matches = regime && kz_closed_form(&k)? == u;
        write(
            out,
            FpsKzOutcome {
                regime,
                matches_closed_form: matches,
                residuals_vanish: r1.is_zero() && r2.is_zero(),
                singular: singular_check(&u),
                identically_zero: u.is_zero(),
            },
        )
    })
}

/// CSV table `a,b,value,region` of `S_n(a, b, c)`. Free with [`fps_string_free`].
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fps_table_csv(p: u64, n: u64, c: u64, full: bool, out: *mut *mut c_char) -> FpsStatus {
    guard(|| {
        let table = build_table(p, n, c, full).map_err(|e| Failure(FpsStatus::InvalidArgument, e.to_string()))?;
        string_out(out, table.to_csv())
    })
}

/// Releases a string returned by the library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fps_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Length of a NUL-terminated string, for callers without `strlen`.
///
/// # Safety
/// `s` must be null or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn fps_string_len(s: *const c_char) -> usize {
    if s.is_null() {
        0
    } else {
        CStr::from_ptr(s).to_bytes().len()
    }
}
