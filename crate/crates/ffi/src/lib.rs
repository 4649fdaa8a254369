//! C ABI over the angleset toolkit.
//!
//! Every entry point returns an [`AsStatus`]; results are written through out
//! pointers. On failure the message is kept per thread and can be fetched
//! with [`as_last_error_message`]. Domains and semigroups are opaque handles
//! built from the same JSON descriptors the CLI reads.

use angleset::classifier::{classify_convergence, ClassifyOptions, Convergence};
use angleset::domains::{DomainDescriptor, ModelDomain};
use angleset::harmonic::{exact_harmonic_measure, hm_monte_carlo, BoundarySet, McOptions};
use angleset::scenario::{exit_code_for, run_scenario, Overrides, Scenario};
use angleset::semigroup::{trajectory, SemigroupKind, SemigroupModel};
use angleset::{sectors, ComplexPoint, Error};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes returned by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Domain = 3,
    Branch = 4,
    Input = 5,
    Sampling = 6,
    UndefinedAngle = 7,
    WrongEnd = 8,
    OutOfHypothesis = 9,
    Precondition = 10,
    Schema = 11,
    Io = 12,
    Panic = 13,
}

/// A complex number as two doubles.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsComplex {
    pub re: f64,
    pub im: f64,
}

impl From<AsComplex> for ComplexPoint {
    fn from(z: AsComplex) -> Self {
        ComplexPoint::new(z.re, z.im)
    }
}

impl From<ComplexPoint> for AsComplex {
    fn from(z: ComplexPoint) -> Self {
        AsComplex { re: z.re, im: z.im }
    }
}

/// Convergence class of a classified sequence.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsConvergenceClass {
    ByAngle = 0,
    AngleSet = 1,
    Tangential = 2,
    NonIntervalCluster = 3,
}

/// Outcome of [`as_classify`]. For `ByAngle`, `theta1 == theta2` is the angle;
/// otherwise `[theta1, theta2]` is the cluster interval.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsClassification {
    pub kind: AsConvergenceClass,
    pub theta1: f64,
    pub theta2: f64,
    pub sigma: AsComplex,
    pub sigma_estimated: bool,
}

/// Monte-Carlo estimate of a harmonic measure.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub unreliable: bool,
}

/// Opaque domain handle.
pub struct AsDomain {
    inner: ModelDomain,
}

/// Opaque semigroup handle.
pub struct AsSemigroup {
    inner: SemigroupModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(error: &Error) -> AsStatus {
    match error {
        Error::Domain(_) => AsStatus::Domain,
        Error::Branch(_) => AsStatus::Branch,
        Error::Input(_) => AsStatus::Input,
        Error::Sampling(_) => AsStatus::Sampling,
        Error::UndefinedAngle { .. } => AsStatus::UndefinedAngle,
        Error::WrongEnd(_) => AsStatus::WrongEnd,
        Error::OutOfHypothesis(_) => AsStatus::OutOfHypothesis,
        Error::Precondition(_) => AsStatus::Precondition,
        Error::Schema { .. } => AsStatus::Schema,
        Error::Io(_) => AsStatus::Io,
    }
}

enum Failure {
    Status(AsStatus, String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<(), Failure>;

fn guard(f: impl FnOnce() -> Outcome) -> AsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            AsStatus::Ok
        }
        Ok(Err(Failure::Status(status, message))) => {
            set_error(message);
            status
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            AsStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure::Status(AsStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure::Status(AsStatus::InvalidUtf8, format!("`{what}`: {e}")))
}

unsafe fn domain<'a>(p: *const AsDomain) -> Result<&'a ModelDomain, Failure> {
    p.as_ref().map(|d| &d.inner).ok_or_else(|| null("domain"))
}

fn parse<T: serde::de::DeserializeOwned>(json: &str, what: &str) -> Result<T, Failure> {
    serde_json::from_str(json).map_err(|e| Failure::Core(Error::Schema { path: what.into(), message: e.to_string() }))
}

/// Message of the last failed call on this thread, or NULL after a success.
/// The caller frees the string with [`as_string_free`].
#[no_mangle]
pub extern "C" fn as_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().clone().map_or(std::ptr::null_mut(), CString::into_raw))
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn as_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn as_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Hyperbolic distance in the unit disk (curvature -4).
///
/// # Safety
/// `result` must be a valid pointer to a double.
#[no_mangle]
pub unsafe extern "C" fn as_distance_disk(z: AsComplex, w: AsComplex, result: *mut f64) -> AsStatus {
    guard(|| {
        let result = out(result, "result")?;
        *result = angleset::geometry::hyperbolic_distance_disk(z.into(), w.into())?;
        Ok(())
    })
}

/// Hyperbolic distance in the right half-plane (curvature -4).
///
/// # Safety
/// `result` must be a valid pointer to a double.
#[no_mangle]
pub unsafe extern "C" fn as_distance_halfplane(z: AsComplex, w: AsComplex, result: *mut f64) -> AsStatus {
    guard(|| {
        let result = out(result, "result")?;
        *result = angleset::geometry::hyperbolic_distance_halfplane(z.into(), w.into())?;
        Ok(())
    })
}

/// Sector amplitude `artanh|tan(theta/2)|`.
///
/// # Safety
/// `result` must be a valid pointer to a double.
#[no_mangle]
pub unsafe extern "C" fn as_amplitude(theta: f64, result: *mut f64) -> AsStatus {
    guard(|| {
        let result = out(result, "result")?;
        *result = sectors::amplitude_r(theta)?;
        Ok(())
    })
}

/// Builds a domain from a JSON descriptor such as `{"kind":"sector","alpha1":1,"alpha2":1}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `handle` a valid pointer.
/// Free the handle with [`as_domain_free`].
#[no_mangle]
pub unsafe extern "C" fn as_domain_from_json(json: *const c_char, handle: *mut *mut AsDomain) -> AsStatus {
    guard(|| {
        let handle = out(handle, "handle")?;
        *handle = std::ptr::null_mut();
        let desc: DomainDescriptor = parse(text(json, "json")?, "domain")?;
        let inner = ModelDomain::from_descriptor(&desc)?;
        *handle = Box::into_raw(Box::new(AsDomain { inner }));
        Ok(())
    })
}

/// # Safety
/// `handle` must be NULL or a handle from [`as_domain_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn as_domain_free(handle: *mut AsDomain) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// # Safety
/// `handle` must be a live domain handle and `result` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn as_domain_contains(handle: *const AsDomain, z: AsComplex, result: *mut bool) -> AsStatus {
    guard(|| {
        let d = domain(handle)?;
        *out(result, "result")? = d.contains(z.into());
        Ok(())
    })
}

/// Riemann map from the unit disk into the domain.
///
/// # Safety
/// `handle` must be a live domain handle and `result` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn as_domain_from_disk(handle: *const AsDomain, q: AsComplex, result: *mut AsComplex) -> AsStatus {
    guard(|| {
        let d = domain(handle)?;
        *out(result, "result")? = d.from_disk(q.into())?.into();
        Ok(())
    })
}

/// Inverse Riemann map from the domain to the unit disk.
///
/// # Safety
/// `handle` must be a live domain handle and `result` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn as_domain_to_disk(handle: *const AsDomain, z: AsComplex, result: *mut AsComplex) -> AsStatus {
    guard(|| {
        let d = domain(handle)?;
        *out(result, "result")? = d.to_disk(z.into())?.into();
        Ok(())
    })
}

/// Hyperbolic distance between two points of the domain.
///
/// # Safety
/// `handle` must be a live domain handle and `result` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn as_domain_distance(
    handle: *const AsDomain,
    z: AsComplex,
    w: AsComplex,
    result: *mut f64,
) -> AsStatus {
    guard(|| {
        let d = domain(handle)?;
        *out(result, "result")? = d.hyperbolic_distance(z.into(), w.into())?;
        Ok(())
    })
}

/// Classifies the boundary approach of `points[0..len]` in the domain.
/// `sigma` may be NULL to estimate the boundary point.
///
/// # Safety
/// `points` must hold `len` values; `sigma` is NULL or valid; `result` valid.
#[no_mangle]
pub unsafe extern "C" fn as_classify(
    handle: *const AsDomain,
    points: *const AsComplex,
    len: usize,
    sigma: *const AsComplex,
    tail_fraction: f64,
    tol: f64,
    result: *mut AsClassification,
) -> AsStatus {
    guard(|| {
        let d = domain(handle)?;
        let result = out(result, "result")?;
        if points.is_null() {
            return Err(null("points"));
        }
        let pts: Vec<ComplexPoint> = std::slice::from_raw_parts(points, len).iter().map(|&p| p.into()).collect();
        let sigma = sigma.as_ref().map(|&s| ComplexPoint::from(s));
        let c = classify_convergence(&pts, d, sigma, &ClassifyOptions { tail_fraction, tol })?;
        let (kind, theta1, theta2) = match c.result {
            Convergence::ByAngle { theta } => (AsConvergenceClass::ByAngle, theta, theta),
            Convergence::AngleSet { theta1, theta2 } => (AsConvergenceClass::AngleSet, theta1, theta2),
            Convergence::Tangential { lo, hi } => (AsConvergenceClass::Tangential, lo, hi),
            Convergence::NonIntervalCluster { lo, hi } => (AsConvergenceClass::NonIntervalCluster, lo, hi),
        };
        *result = AsClassification {
            kind,
            theta1,
            theta2,
            sigma: c.sigma.into(),
            sigma_estimated: c.sigma_estimated,
        };
        Ok(())
    })
}

/// Closed-form harmonic measure of a boundary set given as JSON, e.g.
/// `{"type":"real_interval","a":-1,"b":1}`.
///
/// # Safety
/// `handle` live, `target_json` NUL-terminated, `result` valid.
#[no_mangle]
pub unsafe extern "C" fn as_harmonic_measure(
    handle: *const AsDomain,
    target_json: *const c_char,
    z: AsComplex,
    result: *mut f64,
) -> AsStatus {
    guard(|| {
        let d = domain(handle)?;
        let result = out(result, "result")?;
        let target: BoundarySet = parse(text(target_json, "target_json")?, "target")?;
        *result = exact_harmonic_measure(d, &target, z.into())?;
        Ok(())
    })
}

/// Walk-on-spheres estimate of a harmonic measure. Deterministic for a
/// given seed.
///
/// # Safety
/// `handle` live, `target_json` NUL-terminated, `result` valid.
#[no_mangle]
pub unsafe extern "C" fn as_harmonic_measure_mc(
    handle: *const AsDomain,
    target_json: *const c_char,
    z: AsComplex,
    walks: usize,
    seed: u64,
    result: *mut AsEstimate,
) -> AsStatus {
    guard(|| {
        let d = domain(handle)?;
        let result = out(result, "result")?;
        let target: BoundarySet = parse(text(target_json, "target_json")?, "target")?;
        let opts = McOptions { walks, seed, ..McOptions::default() };
        let est = hm_monte_carlo(d, &target, z.into(), &opts)?;
        *result = AsEstimate { mean: est.mean, std_err: est.std_err, unreliable: est.unreliable };
        Ok(())
    })
}

/// Builds a semigroup model from JSON, e.g. `{"model":"half_plane","c":1}`.
///
/// # Safety
/// `json` NUL-terminated, `handle` valid. Free with [`as_semigroup_free`].
#[no_mangle]
pub unsafe extern "C" fn as_semigroup_from_json(json: *const c_char, handle: *mut *mut AsSemigroup) -> AsStatus {
    guard(|| {
        let handle = out(handle, "handle")?;
        *handle = std::ptr::null_mut();
        let kind: SemigroupKind = parse(text(json, "json")?, "model")?;
        let inner = SemigroupModel::new(kind)?;
        *handle = Box::into_raw(Box::new(AsSemigroup { inner }));
        Ok(())
    })
}

/// # Safety
/// `handle` must be NULL or a handle from [`as_semigroup_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn as_semigroup_free(handle: *mut AsSemigroup) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Denjoy-Wolff point of the semigroup.
///
/// # Safety
/// `handle` live, `result` valid.
#[no_mangle]
pub unsafe extern "C" fn as_semigroup_denjoy_wolff(handle: *const AsSemigroup, result: *mut AsComplex) -> AsStatus {
    guard(|| {
        let s = handle.as_ref().ok_or_else(|| null("handle"))?;
        *out(result, "result")? = s.inner.denjoy_wolff().into();
        Ok(())
    })
}

/// Evaluates `phi_t(z)`.
///
/// # Safety
/// `handle` live, `result` valid.
#[no_mangle]
pub unsafe extern "C" fn as_semigroup_trajectory(
    handle: *const AsSemigroup,
    z: AsComplex,
    t: f64,
    result: *mut AsComplex,
) -> AsStatus {
    guard(|| {
        let s = handle.as_ref().ok_or_else(|| null("handle"))?;
        *out(result, "result")? = trajectory(&s.inner, z.into(), t)?.into();
        Ok(())
    })
}

/// Runs a scenario given as JSON. On success `report` receives the JSON report
/// (free with [`as_string_free`]) and `exit_code` the CLI exit status (0 pass,
/// 1 fail). A verdict-level error (wrong end, failed precondition) is
/// returned as its status with `exit_code` set to 1.
///
/// # Safety
/// `json` NUL-terminated; `report` and `exit_code` valid.
#[no_mangle]
pub unsafe extern "C" fn as_run_scenario_json(
    json: *const c_char,
    report: *mut *mut c_char,
    exit_code: *mut i32,
) -> AsStatus {
    guard(|| {
        let report = out(report, "report")?;
        let exit_code = out(exit_code, "exit_code")?;
        *report = std::ptr::null_mut();
        *exit_code = 2;
        let scenario = Scenario::from_json(text(json, "json")?)?;
        let output = run_scenario(&scenario, &Overrides::default()).inspect_err(|e| *exit_code = exit_code_for(e))?;
        let body = serde_json::to_string(&output.report).map_err(|e| Error::Io(e.to_string()))?;
        *report = CString::new(body).map_err(|e| Error::Io(e.to_string()))?.into_raw();
        *exit_code = output.exit_code();
        Ok(())
    })
}
