use angleset_ffi::*;
use std::ffi::{CStr, CString};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6};
use std::ptr;

fn c(re: f64, im: f64) -> AsComplex {
    AsComplex { re, im }
}

fn last_error() -> String {
    let p = as_last_error_message();
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { as_string_free(p) };
    s
}

fn domain(json: &str) -> *mut AsDomain {
    let json = CString::new(json).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { as_domain_from_json(json.as_ptr(), &mut h) }, AsStatus::Ok);
    assert!(!h.is_null());
    h
}

#[test]
fn amplitude_and_distances() {
    let mut r = 0.0;
    assert_eq!(unsafe { as_amplitude(FRAC_PI_3, &mut r) }, AsStatus::Ok);
    assert!((r - (FRAC_PI_6).tan().atanh()).abs() < 1e-14);

    let mut d = 0.0;
    assert_eq!(unsafe { as_distance_disk(c(0.0, 0.0), c(0.5, 0.0), &mut d) }, AsStatus::Ok);
    assert!((d - 0.5f64.atanh()).abs() < 1e-14);

    // rho_H(1, 3) = artanh(|1-3| / |1+3|)
    assert_eq!(unsafe { as_distance_halfplane(c(1.0, 0.0), c(3.0, 0.0), &mut d) }, AsStatus::Ok);
    assert!((d - 0.5f64.atanh()).abs() < 1e-14);

    assert_eq!(unsafe { as_distance_disk(c(2.0, 0.0), c(0.0, 0.0), &mut d) }, AsStatus::Domain);
    assert!(last_error().contains("domain"));
}

#[test]
fn null_pointers_are_reported() {
    assert_eq!(unsafe { as_amplitude(1.0, ptr::null_mut()) }, AsStatus::NullPointer);
    assert!(last_error().contains("result"));
    let mut b = false;
    assert_eq!(unsafe { as_domain_contains(ptr::null(), c(1.0, 0.0), &mut b) }, AsStatus::NullPointer);
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { as_domain_from_json(ptr::null(), &mut h) }, AsStatus::NullPointer);
    unsafe {
        as_domain_free(ptr::null_mut());
        as_semigroup_free(ptr::null_mut());
        as_string_free(ptr::null_mut());
    }
}

#[test]
fn success_clears_the_error() {
    let mut r = 0.0;
    assert_ne!(unsafe { as_amplitude(f64::NAN, &mut r) }, AsStatus::Ok);
    let p = as_last_error_message();
    assert!(!p.is_null());
    unsafe { as_string_free(p) };
    assert_eq!(unsafe { as_amplitude(1.0, &mut r) }, AsStatus::Ok);
    assert!(as_last_error_message().is_null());
}

#[test]
fn invalid_utf8_and_bad_json() {
    let bytes = [0xffu8, 0xfe, 0];
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { as_domain_from_json(bytes.as_ptr().cast(), &mut h) }, AsStatus::InvalidUtf8);
    let json = CString::new(r#"{"kind":"nowhere"}"#).unwrap();
    assert_eq!(unsafe { as_domain_from_json(json.as_ptr(), &mut h) }, AsStatus::Schema);
    assert!(h.is_null());
    let json = CString::new(r#"{"kind":"sector","alpha1":4.0,"alpha2":1.0}"#).unwrap();
    assert_eq!(unsafe { as_domain_from_json(json.as_ptr(), &mut h) }, AsStatus::Input);
}

#[test]
fn domain_handle_round_trip() {
    let h = domain(r#"{"kind":"sector","alpha1":0.5,"alpha2":1.0}"#);
    let mut inside = false;
    unsafe {
        assert_eq!(as_domain_contains(h, c(1.0, 0.5), &mut inside), AsStatus::Ok);
        assert!(inside);
        assert_eq!(as_domain_contains(h, c(-1.0, 0.0), &mut inside), AsStatus::Ok);
        assert!(!inside);
        let z = c(2.0, 0.3);
        let mut q = c(0.0, 0.0);
        assert_eq!(as_domain_to_disk(h, z, &mut q), AsStatus::Ok);
        assert!(q.re.hypot(q.im) < 1.0);
        let mut back = c(0.0, 0.0);
        assert_eq!(as_domain_from_disk(h, q, &mut back), AsStatus::Ok);
        assert!((back.re - z.re).abs() < 1e-10 && (back.im - z.im).abs() < 1e-10);
        let mut d = -1.0;
        assert_eq!(as_domain_distance(h, z, z, &mut d), AsStatus::Ok);
        assert!(d.abs() < 1e-12);
        as_domain_free(h);
    }
}

#[test]
fn classify_a_ray_and_a_spiral() {
    let h = domain(r#"{"kind":"half_plane"}"#);
    // ray at arg -pi/6; the angle coordinate is arg + pi/2
    let phi = -FRAC_PI_6;
    let ray: Vec<AsComplex> = (1..=2000).map(|n| {
        let t = n as f64;
        c(t * phi.cos(), t * phi.sin())
    }).collect();
    let mut out = AsClassification { kind: AsConvergenceClass::Tangential, theta1: 0.0, theta2: 0.0, sigma: c(0.0, 0.0), sigma_estimated: false };
    let status = unsafe { as_classify(h, ray.as_ptr(), ray.len(), ptr::null(), 0.5, 0.02, &mut out) };
    assert_eq!(status, AsStatus::Ok, "{}", last_error());
    assert_eq!(out.kind, AsConvergenceClass::ByAngle);
    assert!((out.theta1 - (phi + FRAC_PI_2)).abs() < 0.02, "{out:?}");
    assert!((out.sigma.re - 1.0).abs() < 1e-9);

    let spiral: Vec<AsComplex> = (1..=5000).map(|n| {
        let t = n as f64;
        let a = FRAC_PI_6 * t.sin();
        c(t * a.cos(), t * a.sin())
    }).collect();
    let status = unsafe { as_classify(h, spiral.as_ptr(), spiral.len(), ptr::null(), 0.5, 0.02, &mut out) };
    assert_eq!(status, AsStatus::Ok, "{}", last_error());
    assert_eq!(out.kind, AsConvergenceClass::AngleSet);
    assert!((out.theta1 - FRAC_PI_3).abs() < 0.02 && (out.theta2 - 2.0 * FRAC_PI_3).abs() < 0.02, "{out:?}");

    let short = [c(1.0, 0.0)];
    assert_eq!(unsafe { as_classify(h, short.as_ptr(), 1, ptr::null(), 0.5, 0.02, &mut out) }, AsStatus::Input);
    unsafe { as_domain_free(h) };
}

#[test]
fn harmonic_measure_exact_and_mc_agree() {
    let h = domain(r#"{"kind":"rotated_half_plane","theta":0.0}"#);
    let target = CString::new(r#"{"type":"real_interval","a":-1.0,"b":1.0}"#).unwrap();
    let z = c(0.3, 1.2);
    let mut exact = 0.0;
    assert_eq!(unsafe { as_harmonic_measure(h, target.as_ptr(), z, &mut exact) }, AsStatus::Ok, "{}", last_error());
    // oracle: (1/pi)(arg(z-1) - arg(z+1))
    let oracle = ((1.2f64).atan2(0.3 - 1.0) - (1.2f64).atan2(0.3 + 1.0)) / std::f64::consts::PI;
    assert!((exact - oracle).abs() < 1e-12);

    let mut est = AsEstimate { mean: 0.0, std_err: 0.0, unreliable: true };
    assert_eq!(unsafe { as_harmonic_measure_mc(h, target.as_ptr(), z, 20_000, 3, &mut est) }, AsStatus::Ok);
    assert!((est.mean - exact).abs() < 4.0 * est.std_err + 1e-3, "{est:?} vs {exact}");
    let mut again = est;
    assert_eq!(unsafe { as_harmonic_measure_mc(h, target.as_ptr(), z, 20_000, 3, &mut again) }, AsStatus::Ok);
    assert_eq!(est, again);

    let bad = CString::new(r#"{"type":"real_interval","a":1.0}"#).unwrap();
    assert_eq!(unsafe { as_harmonic_measure(h, bad.as_ptr(), z, &mut exact) }, AsStatus::Schema);
    unsafe { as_domain_free(h) };
}

#[test]
fn semigroup_handle() {
    let json = CString::new(r#"{"model":"half_plane","c":1.0}"#).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { as_semigroup_from_json(json.as_ptr(), &mut s) }, AsStatus::Ok, "{}", last_error());
    let mut tau = c(0.0, 0.0);
    let z = c(0.2, -0.1);
    let mut w0 = c(9.0, 9.0);
    let mut a = c(0.0, 0.0);
    let mut b = c(0.0, 0.0);
    let mut ab = c(0.0, 0.0);
    unsafe {
        assert_eq!(as_semigroup_denjoy_wolff(s, &mut tau), AsStatus::Ok);
        assert!((tau.re - 1.0).abs() < 1e-12 && tau.im.abs() < 1e-12);
        assert_eq!(as_semigroup_trajectory(s, z, 0.0, &mut w0), AsStatus::Ok);
        assert!((w0.re - z.re).abs() < 1e-12 && (w0.im - z.im).abs() < 1e-12);
        assert_eq!(as_semigroup_trajectory(s, z, 0.7, &mut a), AsStatus::Ok);
        assert_eq!(as_semigroup_trajectory(s, a, 1.1, &mut b), AsStatus::Ok);
        assert_eq!(as_semigroup_trajectory(s, z, 1.8, &mut ab), AsStatus::Ok);
        assert!((b.re - ab.re).abs() < 1e-10 && (b.im - ab.im).abs() < 1e-10);
        as_semigroup_free(s);
    }
    let bad = CString::new(r#"{"model":"spiral"}"#).unwrap();
    assert_eq!(unsafe { as_semigroup_from_json(bad.as_ptr(), &mut s) }, AsStatus::Schema);
}

#[test]
fn run_scenario_json_reports() {
    let json = CString::new(format!(
        r#"{{"id":"spiral","kind":"classify","domain":{{"kind":"half_plane"}},
            "sequence":{{"type":"spiral","amplitude":{FRAC_PI_6},"count":5000}},
            "expect":{{"class":"angle_set","theta1":{FRAC_PI_3},"theta2":{}}}}}"#,
        2.0 * FRAC_PI_3
    ))
    .unwrap();
    let mut report = ptr::null_mut();
    let mut code = -1;
    assert_eq!(unsafe { as_run_scenario_json(json.as_ptr(), &mut report, &mut code) }, AsStatus::Ok, "{}", last_error());
    assert_eq!(code, 0);
    let text = unsafe { CStr::from_ptr(report) }.to_str().unwrap().to_owned();
    unsafe { as_string_free(report) };
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["id"], "spiral");
    assert_eq!(value["pass"], true);

    let broken = CString::new("{").unwrap();
    assert_eq!(unsafe { as_run_scenario_json(broken.as_ptr(), &mut report, &mut code) }, AsStatus::Schema);
    assert_eq!(code, 2);
    assert!(report.is_null());
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(as_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
