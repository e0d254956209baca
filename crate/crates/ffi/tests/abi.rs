use std::ffi::{c_char, CStr};
use std::ptr;

use spectral_tail_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 512];
    unsafe { st_last_error_message(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn scalars_match_library() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(st_log_gamma(10.0, &mut v), ST_OK);
        assert!((v - 362880f64.ln()).abs() < 1e-13);
        assert_eq!(st_sigma(3, 0, 0.0, 0.0, &mut v), ST_OK);
        let want = spectral_tail::sigma::sigma_general(3, 0, spectral_tail::JacobiIndex::LEGENDRE).unwrap();
        assert!((v - want).abs() <= 1e-14 * want.abs());
        assert_eq!(st_bound_legendre(5, 1.5, 2.0, &mut v), ST_OK);
        assert_eq!(v, spectral_tail::coeffbounds::bound_legendre(5, 1.5, 2.0).unwrap().value);
        let mut x = 0.0;
        assert_eq!(st_bound_jacobi(7, 1.0, 0.5, 1.5, 1.0, &mut v), ST_OK);
        assert_eq!(st_bound_xiang(7, 1.0, 0.5, 1.5, 1.0, &mut x), ST_OK);
        assert!(v < x);
        assert_eq!(st_bound_gegenbauer(7, 1.0, 1.5, 1.0, &mut v), ST_OK);
        assert_eq!(st_truncation_bound(10, 0.0, 0.0, 1.5, 1.0, ST_CONSTANT_UNIT, &mut v), ST_OK);
        assert_eq!(st_bound_quad_computable(4, -0.5, 1.9, 1.0, ST_QUAD_SERIES, &mut v), ST_OK);
        assert!((v - 2.0 * std::f64::consts::PI / (1.9f64.powi(8) - 1.0)).abs() < 1e-12 * v);
        assert_eq!(st_bound_quad_gegenbauer(4, 0.0, 1.9, 1.0, ST_CONSTANT_EXPLICIT, &mut v), ST_OK);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(st_gegenbauer_on_ellipse(0, 1.0, 1.5, 0.2, &mut re, &mut im), ST_OK);
        assert!((re - 1.0).abs() < 1e-15 && im.abs() < 1e-15);
    }
}

#[test]
fn errors_map_to_codes() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(st_log_gamma(-1.0, &mut v), ST_ERR_DOMAIN);
        assert!(last_error().contains("log_gamma"));
        assert_eq!(st_bound_legendre(5, 0.9, 1.0, &mut v), ST_ERR_DOMAIN);
        assert_eq!(st_bound_jacobi(5, -2.0, 0.0, 1.5, 1.0, &mut v), ST_ERR_DOMAIN);
        assert_eq!(st_truncation_bound(5, 0.0, 0.0, 1.5, 1.0, 7, &mut v), ST_ERR_DOMAIN);
        assert_eq!(st_bound_quad_computable(5, 0.0, 1.5, 1.0, 9, &mut v), ST_ERR_DOMAIN);
        assert_eq!(st_log_gamma(2.0, ptr::null_mut()), ST_ERR_NULL_POINTER);
        assert!(last_error().contains("null"));
        assert_eq!(st_log_gamma(2.0, &mut v), ST_OK);
        assert_eq!(last_error(), "");
    }
}

#[test]
fn error_message_truncates() {
    let mut v = 0.0;
    unsafe {
        st_log_gamma(-1.0, &mut v);
        let full = st_last_error_message(ptr::null_mut(), 0);
        let mut small = [0 as c_char; 5];
        assert_eq!(st_last_error_message(small.as_mut_ptr(), small.len()), full);
        assert_eq!(CStr::from_ptr(small.as_ptr()).to_bytes().len(), 4);
    }
}

#[test]
fn errors_are_thread_local() {
    let mut v = 0.0;
    unsafe { st_log_gamma(-1.0, &mut v) };
    let other = std::thread::spawn(last_error).join().unwrap();
    assert_eq!(other, "");
    assert!(!last_error().is_empty());
}

#[test]
fn quadrature_rule_handle() {
    unsafe {
        let mut h: *mut StQuadratureRule = ptr::null_mut();
        assert_eq!(st_quadrature_rule_new(5, 0.0, 0.0, &mut h), ST_OK);
        assert_eq!(st_quadrature_rule_len(h), 5);
        let (mut x, mut w) = (vec![0.0; 5], vec![0.0; 5]);
        assert_eq!(st_quadrature_rule_copy(h, x.as_mut_ptr(), w.as_mut_ptr(), 5), ST_OK);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        assert_eq!(st_quadrature_rule_copy(h, x.as_mut_ptr(), w.as_mut_ptr(), 4), ST_ERR_DOMAIN);
        assert_eq!(st_quadrature_rule_copy(h, ptr::null_mut(), w.as_mut_ptr(), 5), ST_ERR_NULL_POINTER);
        st_quadrature_rule_free(h);
        st_quadrature_rule_free(ptr::null_mut());
        assert_eq!(st_quadrature_rule_len(ptr::null()), 0);
        assert_eq!(st_quadrature_rule_new(0, 0.0, 0.0, &mut h), ST_ERR_DOMAIN);
        assert_eq!(st_quadrature_rule_new(3, 0.0, 0.0, ptr::null_mut()), ST_ERR_NULL_POINTER);
    }
}

#[test]
fn theta_profile_handle() {
    unsafe {
        let mut h: *mut StThetaProfile = ptr::null_mut();
        assert_eq!(st_theta_profile_new(36, 0.5, 250, &mut h), ST_OK);
        let len = st_theta_profile_len(h);
        assert_eq!(len, 251);
        let mut t = vec![0.0; len];
        assert_eq!(st_theta_profile_copy(h, t.as_mut_ptr(), len), ST_OK);
        let (mut m, mut l) = (0.0, 99usize);
        assert_eq!(st_theta_profile_max(h, &mut m, &mut l), ST_OK);
        assert!((m - std::f64::consts::PI).abs() < 1e-10);
        assert_eq!(l, 0);
        assert!((t[37] - std::f64::consts::PI).abs() < 1e-10);
        st_theta_profile_free(h);
        assert_eq!(st_theta_profile_max(ptr::null(), &mut m, &mut l), ST_ERR_NULL_POINTER);
    }
}
