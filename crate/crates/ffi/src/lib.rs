//! C ABI over `cube-core`.
//!
//! Handles are opaque and owned by the caller once returned; free them with
//! the matching `*_free`. Every call returns a [`CubeStatus`]; on failure the
//! message is available from [`cube_last_error`] until the next failing call
//! on the same thread. Strings returned through `char **` are freed with
//! [`cube_string_free`].

use std::cell::RefCell;
use std::collections::HashMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cube_core::error::CubeError;
use cube_core::lattice::{Region, Vertex};
use cube_core::laurent::{LaurentPoly, Rational, VarId};
use cube_core::networks::{char_poly_plethysm, recurrence_poly};
use cube_core::recurrence::RecurrenceState;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    NotDivisible = 4,
    DivisionByZero = 5,
    OutOfRegion = 6,
    BadParity = 7,
    InvalidRegion = 8,
    NotMonic = 9,
    MissingAssignment = 10,
    ZeroSubstitution = 11,
    OracleMismatch = 12,
    Other = 13,
    Panic = 14,
}

impl From<&CubeError> for CubeStatus {
    fn from(e: &CubeError) -> Self {
        match e {
            CubeError::Parse(_) | CubeError::Usage(_) => CubeStatus::Parse,
            CubeError::NotDivisible => CubeStatus::NotDivisible,
            CubeError::DivisionByZero => CubeStatus::DivisionByZero,
            CubeError::OutOfRegion(_) => CubeStatus::OutOfRegion,
            CubeError::BadParity { .. } => CubeStatus::BadParity,
            CubeError::InvalidRegion(_) => CubeStatus::InvalidRegion,
            CubeError::NotMonic => CubeStatus::NotMonic,
            CubeError::MissingAssignment(_) => CubeStatus::MissingAssignment,
            CubeError::ZeroSubstitution(_) => CubeStatus::ZeroSubstitution,
            CubeError::OracleMismatch(_) => CubeStatus::OracleMismatch,
            _ => CubeStatus::Other,
        }
    }
}

/// A Laurent polynomial with rational coefficients.
pub struct CubePoly {
    inner: LaurentPoly,
}

/// A recurrence on a fixed region with its initial-value assignment.
pub struct CubeState {
    region: Region,
    assign: HashMap<VarId, Rational>,
    state: Option<RecurrenceState>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: CubeStatus, msg: String) -> CubeStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), (CubeStatus, String)>) -> CubeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CubeStatus::Ok,
        Ok(Err((s, m))) => fail(s, m),
        Err(_) => fail(CubeStatus::Panic, "panic inside cube-ffi".into()),
    }
}

fn lift(e: CubeError) -> (CubeStatus, String) {
    ((&e).into(), e.to_string())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, (CubeStatus, String)> {
    if s.is_null() {
        return Err((CubeStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (CubeStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn write_out<T>(out: *mut *mut T, v: T) -> Result<(), (CubeStatus, String)> {
    if out.is_null() {
        return Err((CubeStatus::NullPointer, "null output pointer".into()));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (CubeStatus, String)> {
    if out.is_null() {
        return Err((CubeStatus::NullPointer, "null output pointer".into()));
    }
    *out = CString::new(s).expect("no interior nul").into_raw();
    Ok(())
}

unsafe fn poly_ref<'a>(p: *const CubePoly) -> Result<&'a LaurentPoly, (CubeStatus, String)> {
    p.as_ref()
        .map(|p| &p.inner)
        .ok_or((CubeStatus::NullPointer, "null polynomial".into()))
}

/// The message of the last failing call on this thread, or NULL. Owned by the
/// library; valid until the next failing call.
#[no_mangle]
pub extern "C" fn cube_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn cube_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses the JSON interchange form of a polynomial.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cube_poly_from_json(json: *const c_char, out: *mut *mut CubePoly) -> CubeStatus {
    guard(|| {
        let s = read_str(json)?;
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| (CubeStatus::Parse, e.to_string()))?;
        let p = LaurentPoly::from_json(&v).map_err(lift)?;
        write_out(out, CubePoly { inner: p })
    })
}

/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cube_poly_to_json(p: *const CubePoly, out: *mut *mut c_char) -> CubeStatus {
    guard(|| write_string(out, poly_ref(p)?.to_json().to_string()))
}

/// Human-readable form, e.g. `x[1,1,-2]/x[1,0,-1] + 2`.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cube_poly_to_string(p: *const CubePoly, out: *mut *mut c_char) -> CubeStatus {
    guard(|| write_string(out, poly_ref(p)?.to_string()))
}

/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cube_poly_add(a: *const CubePoly, b: *const CubePoly, out: *mut *mut CubePoly) -> CubeStatus {
    guard(|| write_out(out, CubePoly { inner: poly_ref(a)?.add(poly_ref(b)?) }))
}

/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cube_poly_mul(a: *const CubePoly, b: *const CubePoly, out: *mut *mut CubePoly) -> CubeStatus {
    guard(|| write_out(out, CubePoly { inner: poly_ref(a)?.mul(poly_ref(b)?) }))
}

/// Exact division; fails with `NotDivisible` when `b` does not divide `a`.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cube_poly_div(a: *const CubePoly, b: *const CubePoly, out: *mut *mut CubePoly) -> CubeStatus {
    guard(|| {
        let q = poly_ref(a)?.div_exact(poly_ref(b)?).map_err(lift)?;
        write_out(out, CubePoly { inner: q })
    })
}

/// # Safety
/// `a`, `b` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn cube_poly_equal(a: *const CubePoly, b: *const CubePoly) -> bool {
    matches!((a.as_ref(), b.as_ref()), (Some(a), Some(b)) if a.inner == b.inner)
}

/// # Safety
/// `p` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn cube_poly_free(p: *mut CubePoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Creates a recurrence. `kind` is `"plane"`, `"triangle"` (uses `m`) or
/// `"cylinder"` (uses `n` and `m`).
///
/// # Safety
/// `kind` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cube_state_new(kind: *const c_char, n: i64, m: i64, out: *mut *mut CubeState) -> CubeStatus {
    guard(|| {
        let region = match read_str(kind)? {
            "plane" => Region::Plane,
            "triangle" => Region::triangle(m).map_err(lift)?,
            "cylinder" => Region::cylinder(n, m).map_err(lift)?,
            other => return Err((CubeStatus::InvalidRegion, format!("unknown region kind {other:?}"))),
        };
        write_out(out, CubeState { region, assign: HashMap::new(), state: None })
    })
}

/// Creates a torus recurrence with periods `a` and `b`.
///
/// # Safety
/// `a` and `b` must point to three integers each; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cube_state_new_torus(a: *const i64, b: *const i64, out: *mut *mut CubeState) -> CubeStatus {
    guard(|| {
        if a.is_null() || b.is_null() {
            return Err((CubeStatus::NullPointer, "null period".into()));
        }
        let (a, b) = (std::slice::from_raw_parts(a, 3), std::slice::from_raw_parts(b, 3));
        let region =
            Region::torus(Vertex::new(a[0], a[1], a[2]), Vertex::new(b[0], b[1], b[2])).map_err(lift)?;
        write_out(out, CubeState { region, assign: HashMap::new(), state: None })
    })
}

/// Sets the initial value at `(i,j,k)` to the rational `value` (`"p/q"` or an
/// integer). Clears cached values.
///
/// # Safety
/// `s` must be a live handle; `value` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cube_state_assign(s: *mut CubeState, i: i64, j: i64, k: i64, value: *const c_char) -> CubeStatus {
    guard(|| {
        let s = s.as_mut().ok_or((CubeStatus::NullPointer, "null state".into()))?;
        let x = cube_core::laurent::parse_rational(read_str(value)?).map_err(lift)?;
        let v = s.region.canonicalize(Vertex::new(i, j, k)).map_err(lift)?;
        s.assign.insert(VarId(v), x);
        s.state = None;
        Ok(())
    })
}

/// `f_{(i,j,k)}(t)`, symbolic in every unassigned initial value.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cube_state_value(
    s: *mut CubeState,
    i: i64,
    j: i64,
    k: i64,
    t: i64,
    out: *mut *mut CubePoly,
) -> CubeStatus {
    guard(|| {
        let s = s.as_mut().ok_or((CubeStatus::NullPointer, "null state".into()))?;
        if s.state.is_none() {
            s.state = Some(RecurrenceState::with_assignment(s.region, &s.assign).map_err(lift)?);
        }
        let p = s.state.as_mut().expect("just built").value(Vertex::new(i, j, k), t).map_err(lift)?;
        write_out(out, CubePoly { inner: p })
    })
}

/// # Safety
/// `s` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn cube_state_free(s: *mut CubeState) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// The characteristic polynomial of the `(n,m)` cylinder, or its `r`-th
/// plethysm when `r > 1`, as `{"coeffs":[...]}`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cube_qpoly_json(n: i64, m: i64, r: u32, out: *mut *mut c_char) -> CubeStatus {
    guard(|| {
        let q = recurrence_poly(n, m).map_err(lift)?;
        let p = if r <= 1 { q } else { char_poly_plethysm(&q, r as usize).map_err(lift)? };
        write_string(out, p.to_json().to_string())
    })
}
