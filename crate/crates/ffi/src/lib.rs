//! C ABI over `spectral_tail`.
//!
//! Every function returns an `StStatus`; results go through out-pointers.
//! On failure the message is kept per thread and read with
//! `st_last_error_message`. Panics are caught at the boundary.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use spectral_tail::coeffbounds::{
    bound_gegenbauer, bound_jacobi, bound_legendre, bound_xiang, truncation_bound, BoundReport, ConstantMode,
};
use spectral_tail::gammafn::log_gamma;
use spectral_tail::num_complex::Complex64;
use spectral_tail::orthopoly::gegenbauer_on_ellipse;
use spectral_tail::quadrature::{
    bound_quad_computable, bound_quad_gegenbauer, gauss_jacobi_rule, theta_profile, QuadBoundForm, QuadratureRule,
    ThetaProfile,
};
use spectral_tail::sigma::sigma_table;
use spectral_tail::{Error, JacobiIndex};

pub type StStatus = i32;

pub const ST_OK: StStatus = 0;
pub const ST_ERR_DOMAIN: StStatus = 1;
pub const ST_ERR_ANALYTICITY: StStatus = 2;
pub const ST_ERR_PRECISION: StStatus = 3;
pub const ST_ERR_NUMERICAL: StStatus = 4;
pub const ST_ERR_NULL_POINTER: StStatus = 5;
pub const ST_ERR_PANIC: StStatus = 6;

pub const ST_CONSTANT_EXPLICIT: i32 = 0;
pub const ST_CONSTANT_UNIT: i32 = 1;

pub const ST_QUAD_SERIES: i32 = 0;
pub const ST_QUAD_THETA: i32 = 1;

/// Opaque Gauss rule.
pub struct StQuadratureRule {
    rule: QuadratureRule,
}

/// Opaque θ profile.
pub struct StThetaProfile {
    profile: ThetaProfile,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> StStatus {
    match e {
        Error::Domain(_) => ST_ERR_DOMAIN,
        Error::Analyticity { .. } => ST_ERR_ANALYTICITY,
        Error::Precision { .. } => ST_ERR_PRECISION,
        Error::Numerical(_) => ST_ERR_NUMERICAL,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, records any failure, and maps it to a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> StStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            ST_OK
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(name))) => {
            set_error(format!("null pointer passed as {name}"));
            ST_ERR_NULL_POINTER
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            ST_ERR_PANIC
        }
    }
}

/// # Safety
/// `p` is null or valid for a write of `T`.
unsafe fn write<T>(p: *mut T, v: T, name: &'static str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(Fail::Null(name));
    }
    p.write(v);
    Ok(())
}

fn index(alpha: f64, beta: f64) -> Result<JacobiIndex, Fail> {
    Ok(JacobiIndex::new(alpha, beta)?)
}

fn mode(m: i32) -> Result<ConstantMode, Fail> {
    match m {
        ST_CONSTANT_EXPLICIT => Ok(ConstantMode::Explicit),
        ST_CONSTANT_UNIT => Ok(ConstantMode::Unit),
        _ => Err(Error::Domain(format!("unknown constant mode {m}")).into()),
    }
}

fn value(r: spectral_tail::Result<BoundReport>) -> Result<f64, Fail> {
    Ok(r?.value)
}

/// Copies the calling thread's last error message (NUL-terminated, truncated
/// to `len`) into `buf` and returns the full length including the NUL.
/// Pass a null `buf` to query the length.
///
/// # Safety
/// `buf` is null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn st_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len() + 1
    })
}

/// ln Γ(x), x > 0.
///
/// # Safety
/// `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn st_log_gamma(x: f64, out: *mut f64) -> StStatus {
    guard(|| write(out, log_gamma(x)?, "out"))
}

/// σ_{n,j}^{α,β}.
///
/// # Safety
/// `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn st_sigma(n: usize, j: usize, alpha: f64, beta: f64, out: *mut f64) -> StStatus {
    guard(|| {
        let t = sigma_table(n, index(alpha, beta)?, j)?;
        write(out, t.values[j], "out")
    })
}

/// General Jacobi coefficient bound.
///
/// # Safety
/// `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn st_bound_jacobi(n: usize, alpha: f64, beta: f64, rho: f64, m: f64, out: *mut f64) -> StStatus {
    guard(|| write(out, value(bound_jacobi(n, index(alpha, beta)?, rho, m))?, "out"))
}

/// Gegenbauer coefficient bound.
///
/// # Safety
/// `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn st_bound_gegenbauer(n: usize, alpha: f64, rho: f64, m: f64, out: *mut f64) -> StStatus {
    guard(|| write(out, value(bound_gegenbauer(n, alpha, rho, m))?, "out"))
}

/// Legendre coefficient bound, n ≥ 1.
///
/// # Safety
/// `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn st_bound_legendre(n: usize, rho: f64, m: f64, out: *mut f64) -> StStatus {
    guard(|| write(out, value(bound_legendre(n, rho, m))?, "out"))
}

/// Xiang's Jacobi coefficient bound.
///
/// # Safety
/// `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn st_bound_xiang(n: usize, alpha: f64, beta: f64, rho: f64, m: f64, out: *mut f64) -> StStatus {
    guard(|| write(out, value(bound_xiang(n, index(alpha, beta)?, rho, m))?, "out"))
}

/// L² truncation bound for the degree-(N-1) partial sum.
///
/// # Safety
/// `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn st_truncation_bound(
    big_n: usize,
    alpha: f64,
    beta: f64,
    rho: f64,
    m: f64,
    constant_mode: i32,
    out: *mut f64,
) -> StStatus {
    guard(|| write(out, value(truncation_bound(big_n, index(alpha, beta)?, rho, m, mode(constant_mode)?))?, "out"))
}

/// Computable quadrature bound; `form` is `ST_QUAD_SERIES` or `ST_QUAD_THETA`.
///
/// # Safety
/// `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn st_bound_quad_computable(n: usize, alpha: f64, rho: f64, m: f64, form: i32, out: *mut f64) -> StStatus {
    guard(|| {
        let form = match form {
            ST_QUAD_SERIES => QuadBoundForm::Series,
            ST_QUAD_THETA => QuadBoundForm::Theta,
            _ => return Err(Error::Domain(format!("unknown quadrature bound form {form}")).into()),
        };
        write(out, value(bound_quad_computable(n, alpha, rho, m, form))?, "out")
    })
}

/// Gegenbauer quadrature bound with the given constant mode.
///
/// # Safety
/// `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn st_bound_quad_gegenbauer(
    n: usize,
    alpha: f64,
    rho: f64,
    m: f64,
    constant_mode: i32,
    out: *mut f64,
) -> StStatus {
    guard(|| write(out, value(bound_quad_gegenbauer(n, alpha, rho, m, mode(constant_mode)?))?, "out"))
}

/// J_n^{α,α}((w+1/w)/2).
///
/// # Safety
/// `out_re` and `out_im` are valid for writes.
#[no_mangle]
pub unsafe extern "C" fn st_gegenbauer_on_ellipse(
    n: usize,
    alpha: f64,
    w_re: f64,
    w_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> StStatus {
    guard(|| {
        if out_re.is_null() || out_im.is_null() {
            return Err(Fail::Null("out_re/out_im"));
        }
        let v = gegenbauer_on_ellipse(n, alpha, Complex64::new(w_re, w_im))?;
        write(out_re, v.re, "out_re")?;
        write(out_im, v.im, "out_im")
    })
}

/// n-point Gauss rule for (1-x)^α(1+x)^β. Free with `st_quadrature_rule_free`.
///
/// # Safety
/// `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn st_quadrature_rule_new(n: usize, alpha: f64, beta: f64, out: *mut *mut StQuadratureRule) -> StStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let rule = gauss_jacobi_rule(n, index(alpha, beta)?)?;
        write(out, Box::into_raw(Box::new(StQuadratureRule { rule })), "out")
    })
}

/// Number of nodes; 0 for a null handle.
///
/// # Safety
/// `rule` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn st_quadrature_rule_len(rule: *const StQuadratureRule) -> usize {
    rule.as_ref().map_or(0, |r| r.rule.nodes.len())
}

/// Copies nodes and weights into arrays of length `len`, which must equal the rule length.
///
/// # Safety
/// `rule` is a live handle; `nodes` and `weights` are valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn st_quadrature_rule_copy(
    rule: *const StQuadratureRule,
    nodes: *mut f64,
    weights: *mut f64,
    len: usize,
) -> StStatus {
    guard(|| {
        let r = rule.as_ref().ok_or(Fail::Null("rule"))?;
        if nodes.is_null() || weights.is_null() {
            return Err(Fail::Null("nodes/weights"));
        }
        if len != r.rule.nodes.len() {
            return Err(Error::Domain(format!("buffer length {len} != rule length {}", r.rule.nodes.len())).into());
        }
        std::ptr::copy_nonoverlapping(r.rule.nodes.as_ptr(), nodes, len);
        std::ptr::copy_nonoverlapping(r.rule.weights.as_ptr(), weights, len);
        Ok(())
    })
}

/// Releases a rule; null is ignored.
///
/// # Safety
/// `rule` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn st_quadrature_rule_free(rule: *mut StQuadratureRule) {
    if !rule.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(rule))));
    }
}

/// θ_{n,l}, l = 0..=L, for (1-x²)^α. Free with `st_theta_profile_free`.
///
/// # Safety
/// `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn st_theta_profile_new(n: usize, alpha: f64, big_l: usize, out: *mut *mut StThetaProfile) -> StStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let profile = theta_profile(n, alpha, big_l)?;
        write(out, Box::into_raw(Box::new(StThetaProfile { profile })), "out")
    })
}

/// Number of θ values (L + 1); 0 for a null handle.
///
/// # Safety
/// `p` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn st_theta_profile_len(p: *const StThetaProfile) -> usize {
    p.as_ref().map_or(0, |p| p.profile.theta.len())
}

/// Copies θ into an array of length `len`, which must equal the profile length.
///
/// # Safety
/// `p` is a live handle; `theta` is valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn st_theta_profile_copy(p: *const StThetaProfile, theta: *mut f64, len: usize) -> StStatus {
    guard(|| {
        let p = p.as_ref().ok_or(Fail::Null("profile"))?;
        if theta.is_null() {
            return Err(Fail::Null("theta"));
        }
        if len != p.profile.theta.len() {
            return Err(Error::Domain(format!("buffer length {len} != profile length {}", p.profile.theta.len())).into());
        }
        std::ptr::copy_nonoverlapping(p.profile.theta.as_ptr(), theta, len);
        Ok(())
    })
}

/// Θ_n^α and the smallest l attaining it.
///
/// # Safety
/// `p` is a live handle; `theta_max` and `argmax_l` are valid for writes.
#[no_mangle]
pub unsafe extern "C" fn st_theta_profile_max(p: *const StThetaProfile, theta_max: *mut f64, argmax_l: *mut usize) -> StStatus {
    guard(|| {
        let p = p.as_ref().ok_or(Fail::Null("profile"))?;
        if theta_max.is_null() || argmax_l.is_null() {
            return Err(Fail::Null("theta_max/argmax_l"));
        }
        write(theta_max, p.profile.theta_max, "theta_max")?;
        write(argmax_l, p.profile.argmax_l, "argmax_l")
    })
}

/// Releases a profile; null is ignored.
///
/// # Safety
/// `p` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn st_theta_profile_free(p: *mut StThetaProfile) {
    if !p.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(p))));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panics_become_status() {
        let s = guard(|| panic!("boom"));
        assert_eq!(s, ST_ERR_PANIC);
        let mut buf = [0 as c_char; 64];
        let n = unsafe { st_last_error_message(buf.as_mut_ptr(), buf.len()) };
        let msg = unsafe { std::ffi::CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
        assert_eq!(msg, "panic: boom");
        assert_eq!(n, msg.len() + 1);
        assert_eq!(guard(|| Ok(())), ST_OK);
        assert_eq!(unsafe { st_last_error_message(std::ptr::null_mut(), 0) }, 1);
    }
}
