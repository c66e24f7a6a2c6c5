//! C ABI over `scribe-core`.
//!
//! Objects are opaque handles created by `*_from_json` or `*_named` functions
//! and released with the matching `*_free`. Every call returns a
//! [`ScribeStatus`]; on failure [`scribe_last_error`] describes the problem.
//! Strings returned through `char **` outputs are owned by the caller and must
//! be released with [`scribe_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use scribe_core::budgets::Budgets;
use scribe_core::caps::{self, CapSystem};
use scribe_core::certificate::Answer;
use scribe_core::geometry::check_ij_scribed;
use scribe_core::hrs::{self, Quadric};
use scribe_core::hull::facet_enumeration;
use scribe_core::io::{self, NumberMode};
use scribe_core::points::PointConfiguration;
use scribe_core::report::analyze;
use scribe_core::{corpus, CombinatorialMap, Error};

/// Result code of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScribeStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The input could not be parsed or failed validation.
    InvalidInput = 3,
    /// An argument was out of range.
    InvalidArgument = 4,
    /// A search exceeded its budget.
    BudgetExceeded = 5,
    /// A geometric precondition failed (degenerate input, point inside ball, ...).
    Geometry = 6,
    /// An internal error; the call had no effect.
    Internal = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScribeAnswer {
    Yes = 0,
    No = 1,
    Unknown = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScribeProperty {
    Inscribable = 0,
    Circumscribable = 1,
    Hyperboloid = 2,
    Cylinder = 3,
}

/// Opaque combinatorial map.
pub struct ScribeMap(CombinatorialMap);

/// Opaque point configuration.
pub struct ScribePoints(PointConfiguration);

/// Opaque spherical cap system.
pub struct ScribeCaps(CapSystem);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ScribeStatus {
    match e {
        Error::BudgetExceeded { .. } => ScribeStatus::BudgetExceeded,
        Error::InvalidArgument(_) | Error::MonteCarloOnly(_) | Error::Unsupported(_) => ScribeStatus::InvalidArgument,
        Error::DegenerateSpan { .. }
        | Error::InfeasibleSupport(_)
        | Error::PointInsideBall(_)
        | Error::DegenerateConfiguration(_) => ScribeStatus::Geometry,
        _ => ScribeStatus::InvalidInput,
    }
}

struct Failure(ScribeStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn guard(f: impl FnOnce() -> Outcome) -> ScribeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            ScribeStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error".into());
            ScribeStatus::Internal
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> std::result::Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(ScribeStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure(ScribeStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn object<'a, T>(p: *const T) -> std::result::Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(ScribeStatus::NullPointer, "null handle".into()))
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Outcome {
    if out.is_null() {
        return Err(Failure(ScribeStatus::NullPointer, "null output pointer".into()));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn store_string(out: *mut *mut c_char, s: String) -> Outcome {
    if out.is_null() {
        return Err(Failure(ScribeStatus::NullPointer, "null output pointer".into()));
    }
    *out = CString::new(s).map_err(|_| Failure(ScribeStatus::Internal, "interior NUL".into()))?.into_raw();
    Ok(())
}

unsafe fn store_value<T>(out: *mut T, value: T) -> Outcome {
    if out.is_null() {
        return Err(Failure(ScribeStatus::NullPointer, "null output pointer".into()));
    }
    *out = value;
    Ok(())
}

fn json(serialized: serde_json::Result<String>) -> std::result::Result<String, Failure> {
    serialized.map_err(|e| Failure(ScribeStatus::Internal, e.to_string()))
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn scribe_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn scribe_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a map file (JSON text).
///
/// # Safety
/// `json_text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scribe_map_from_json(json_text: *const c_char, out: *mut *mut ScribeMap) -> ScribeStatus {
    guard(|| {
        let m = io::parse_map(text(json_text)?)?;
        store(out, ScribeMap(m))
    })
}

/// A corpus map by name, e.g. "cube" or "triakis-tetrahedron".
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scribe_map_named(name: *const c_char, out: *mut *mut ScribeMap) -> ScribeStatus {
    guard(|| {
        let m = corpus::named_map(text(name)?)?;
        store(out, ScribeMap(m))
    })
}

/// # Safety
/// `map` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn scribe_map_free(map: *mut ScribeMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `map` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn scribe_map_vertex_count(map: *const ScribeMap) -> usize {
    map.as_ref().map_or(0, |m| m.0.n_vertices())
}

/// Decides one property with default budgets. When `certificate_json` is not
/// null it receives the full verdict, certificates included, as JSON.
///
/// # Safety
/// `map` must be a live handle; `answer` must be writable; `certificate_json`
/// may be null.
#[no_mangle]
pub unsafe extern "C" fn scribe_decide(
    map: *const ScribeMap,
    property: ScribeProperty,
    answer: *mut ScribeAnswer,
    certificate_json: *mut *mut c_char,
) -> ScribeStatus {
    guard(|| {
        let m = &object(map)?.0;
        let b = Budgets::default();
        let verdict = match property {
            ScribeProperty::Inscribable => hrs::decide_inscribable(m, &b),
            ScribeProperty::Circumscribable => hrs::decide_circumscribable(m, &b),
            ScribeProperty::Hyperboloid => hrs::decide_quadric_inscribable(m, Quadric::Hyperboloid, &b),
            ScribeProperty::Cylinder => hrs::decide_quadric_inscribable(m, Quadric::Cylinder, &b),
        };
        let a = match verdict.answer {
            Answer::Yes => ScribeAnswer::Yes,
            Answer::No => ScribeAnswer::No,
            Answer::Unknown => ScribeAnswer::Unknown,
        };
        store_value(answer, a)?;
        if !certificate_json.is_null() {
            store_string(certificate_json, json(serde_json::to_string(&verdict))?)?;
        }
        Ok(())
    })
}

/// Full analysis report as JSON.
///
/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scribe_analyze_json(map: *const ScribeMap, out: *mut *mut c_char) -> ScribeStatus {
    guard(|| {
        let m = &object(map)?.0;
        let report = analyze(m, io::serialize_map(m).as_bytes(), &Budgets::default());
        store_string(out, json(serde_json::to_string(&report))?)
    })
}

/// Parses a point file (JSON text) in exact mode.
///
/// # Safety
/// `json_text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scribe_points_from_json(json_text: *const c_char, out: *mut *mut ScribePoints) -> ScribeStatus {
    guard(|| {
        let pc = io::parse_points(text(json_text)?, NumberMode::Exact)?;
        store(out, ScribePoints(pc))
    })
}

/// # Safety
/// `points` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn scribe_points_free(points: *mut ScribePoints) {
    if !points.is_null() {
        drop(Box::from_raw(points));
    }
}

/// Whether all i-faces avoid and all j-faces cut the ball given in the file.
///
/// # Safety
/// `points` must be a live handle; `holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scribe_points_ij_scribed(points: *const ScribePoints, i: usize, j: usize, holds: *mut bool) -> ScribeStatus {
    guard(|| {
        let pc = &object(points)?.0;
        let sphere = pc.sphere().ok_or_else(|| Failure(ScribeStatus::InvalidInput, "point file has no sphere".into()))?;
        let b = Budgets::default();
        let lattice = facet_enumeration(pc, b.hull)?;
        let report = check_ij_scribed(pc, &lattice, sphere, i, j, &b, false)?;
        store_value(holds, report.holds)
    })
}

/// Parses a cap file (JSON text).
///
/// # Safety
/// `json_text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scribe_caps_from_json(json_text: *const c_char, out: *mut *mut ScribeCaps) -> ScribeStatus {
    guard(|| {
        let cs = caps::parse_caps(text(json_text)?)?;
        store(out, ScribeCaps(cs))
    })
}

/// Visibility caps of every point with respect to the configuration's sphere.
///
/// # Safety
/// `points` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scribe_caps_from_points(points: *const ScribePoints, out: *mut *mut ScribeCaps) -> ScribeStatus {
    guard(|| {
        let cs = caps::visibility_caps(&object(points)?.0)?;
        store(out, ScribeCaps(cs))
    })
}

/// # Safety
/// `caps` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn scribe_caps_free(caps: *mut ScribeCaps) {
    if !caps.is_null() {
        drop(Box::from_raw(caps));
    }
}

/// Exact ply depth (dimension 3 only).
///
/// # Safety
/// `caps` must be a live handle; `depth` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scribe_caps_ply_depth(caps: *const ScribeCaps, depth: *mut usize) -> ScribeStatus {
    guard(|| {
        let ply = caps::ply_depth(&object(caps)?.0)?;
        store_value(depth, ply.depth)
    })
}

/// Random-hyperplane separator experiment report as JSON.
///
/// # Safety
/// `caps` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn scribe_separator_json(caps: *const ScribeCaps, trials: usize, seed: u64, out: *mut *mut c_char) -> ScribeStatus {
    guard(|| {
        let report = caps::random_hyperplane_separator(&object(caps)?.0, trials, seed, false)?;
        store_string(out, json(serde_json::to_string(&report))?)
    })
}
