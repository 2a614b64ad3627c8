//! C interface to the precat kernel.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `_free` function. Every function returns a [`PrecatStatus`];
//! on failure [`precat_last_error`] describes what went wrong. Strings
//! returned through out-parameters are released with [`precat_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use precat::compose::{compose, identity};
use precat::expr::{cell_to_expr, eval, parse};
use precat::io::{
    cell_envelope, lifting_to_json, measure_to_json, plexes_to_json, polygraph_from_json,
    polygraph_to_json, support_to_json,
};
use precat::model::{boundary, Element, Polygraph, Sign};
use precat::polyplex::{polyplex_lift, polyplex_measure};
use precat::presheaf::{enumerate_plexes, makkai_check};
use precat::{Cell, Error};

/// A polygraph.
pub struct PrecatPolygraph {
    pol: Arc<Polygraph>,
}

/// A cell of the free precategory on a polygraph. Keeps its polygraph alive.
pub struct PrecatCell {
    pol: Arc<Polygraph>,
    cell: Cell,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecatStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not UTF-8.
    InvalidUtf8 = 2,
    /// Malformed JSON, expression text or polygraph.
    InputError = 3,
    /// A well-formed request the theory rejects, such as an illegal composition.
    DomainError = 4,
    /// Two cells from different polygraphs were combined.
    Mismatch = 5,
    /// A bug inside the library; the message has details.
    Panic = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Message for the last failure on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn precat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string obtained from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn precat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

struct Failure(PrecatStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if e.is_input_error() {
            PrecatStatus::InputError
        } else {
            PrecatStatus::DomainError
        };
        Failure(status, e.to_string())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Runs `body`, turning errors and panics into a status.
fn guard(body: impl FnOnce() -> Outcome<()>) -> PrecatStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PrecatStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {msg}"));
            PrecatStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Outcome<&'a str> {
    if s.is_null() {
        return Err(Failure(PrecatStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(PrecatStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Outcome<&'a T> {
    p.as_ref()
        .ok_or_else(|| Failure(PrecatStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Outcome<()> {
    if out.is_null() {
        return Err(Failure(PrecatStatus::NullPointer, "output pointer is null".into()));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_str(out: *mut *mut c_char, s: String) -> Outcome<()> {
    if out.is_null() {
        return Err(Failure(PrecatStatus::NullPointer, "output pointer is null".into()));
    }
    *out = CString::new(s).expect("JSON has no nul").into_raw();
    Ok(())
}

unsafe fn put_json(out: *mut *mut c_char, v: serde_json::Value) -> Outcome<()> {
    put_str(out, v.to_string())
}

fn same_polygraph(u: &PrecatCell, v: &PrecatCell) -> Outcome<()> {
    if Arc::ptr_eq(&u.pol, &v.pol) {
        Ok(())
    } else {
        Err(Failure(
            PrecatStatus::Mismatch,
            "cells belong to different polygraph handles".into(),
        ))
    }
}

fn cell_handle(pol: &Arc<Polygraph>, cell: Cell) -> PrecatCell {
    PrecatCell {
        pol: pol.clone(),
        cell,
    }
}

/// Parses and validates a polygraph.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn precat_polygraph_from_json(
    json: *const c_char,
    out: *mut *mut PrecatPolygraph,
) -> PrecatStatus {
    guard(|| {
        let p = polygraph_from_json(str_arg(json, "json")?)?;
        put(out, PrecatPolygraph { pol: Arc::new(p) })
    })
}

/// # Safety
/// `p` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn precat_polygraph_free(p: *mut PrecatPolygraph) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn precat_polygraph_to_json(
    p: *const PrecatPolygraph,
    out: *mut *mut c_char,
) -> PrecatStatus {
    guard(|| put_json(out, polygraph_to_json(&ref_arg(p, "polygraph")?.pol)))
}

/// Evaluates expression text to its normal form.
///
/// # Safety
/// `p` must be a live handle, `expr` a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn precat_normalize(
    p: *const PrecatPolygraph,
    expr: *const c_char,
    out: *mut *mut PrecatCell,
) -> PrecatStatus {
    guard(|| {
        let p = ref_arg(p, "polygraph")?;
        let u = eval(&p.pol, &parse(str_arg(expr, "expr")?)?)?;
        put(out, cell_handle(&p.pol, u))
    })
}

/// # Safety
/// `u` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn precat_cell_free(u: *mut PrecatCell) {
    if !u.is_null() {
        drop(Box::from_raw(u));
    }
}

/// `u ∘_i v`.
///
/// # Safety
/// `u` and `v` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn precat_compose(
    u: *const PrecatCell,
    i: usize,
    v: *const PrecatCell,
    out: *mut *mut PrecatCell,
) -> PrecatStatus {
    guard(|| {
        let (u, v) = (ref_arg(u, "u")?, ref_arg(v, "v")?);
        same_polygraph(u, v)?;
        let w = compose(&u.cell, i, &v.cell)?;
        put(out, cell_handle(&u.pol, w))
    })
}

/// # Safety
/// `u` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn precat_identity(u: *const PrecatCell, out: *mut *mut PrecatCell) -> PrecatStatus {
    guard(|| {
        let u = ref_arg(u, "u")?;
        put(out, cell_handle(&u.pol, identity(&u.cell)))
    })
}

/// Iterated source (`sign < 0`) or target (`sign > 0`) of dimension `k`.
///
/// # Safety
/// `u` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn precat_boundary(
    u: *const PrecatCell,
    sign: i32,
    k: usize,
    out: *mut *mut PrecatCell,
) -> PrecatStatus {
    guard(|| {
        let u = ref_arg(u, "u")?;
        let s = match sign {
            s if s < 0 => Sign::Source,
            s if s > 0 => Sign::Target,
            _ => return Err(Failure(PrecatStatus::InputError, "sign must be nonzero".into())),
        };
        put(out, cell_handle(&u.pol, boundary(&u.cell, s, k)?))
    })
}

/// # Safety
/// `u` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn precat_cell_dim(u: *const PrecatCell, out: *mut usize) -> PrecatStatus {
    guard(|| {
        let u = ref_arg(u, "u")?;
        if out.is_null() {
            return Err(Failure(PrecatStatus::NullPointer, "output pointer is null".into()));
        }
        *out = u.cell.dim();
        Ok(())
    })
}

/// Writes 1 to `out` when the cells are equal, 0 otherwise.
///
/// # Safety
/// `u` and `v` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn precat_cell_equal(
    u: *const PrecatCell,
    v: *const PrecatCell,
    out: *mut i32,
) -> PrecatStatus {
    guard(|| {
        let (u, v) = (ref_arg(u, "u")?, ref_arg(v, "v")?);
        if out.is_null() {
            return Err(Failure(PrecatStatus::NullPointer, "output pointer is null".into()));
        }
        *out = i32::from(Arc::ptr_eq(&u.pol, &v.pol) && u.cell == v.cell);
        Ok(())
    })
}

/// `{"cell": …, "expr": …}`.
///
/// # Safety
/// `u` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn precat_cell_to_json(u: *const PrecatCell, out: *mut *mut c_char) -> PrecatStatus {
    guard(|| {
        let u = ref_arg(u, "u")?;
        put_json(out, cell_envelope(&u.pol, &u.cell))
    })
}

/// Expression text for the normal form.
///
/// # Safety
/// `u` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn precat_cell_to_expr(u: *const PrecatCell, out: *mut *mut c_char) -> PrecatStatus {
    guard(|| {
        let u = ref_arg(u, "u")?;
        put_str(out, cell_to_expr(&u.cell, Some(&u.pol)).to_string())
    })
}

/// # Safety
/// `u` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn precat_support_json(u: *const PrecatCell, out: *mut *mut c_char) -> PrecatStatus {
    guard(|| {
        let u = ref_arg(u, "u")?;
        put_json(out, support_to_json(&u.pol, &u.cell))
    })
}

/// `{"shape", "cell", "map"}` for the polyplex lifting of the cell.
///
/// # Safety
/// `u` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn precat_polyplex_json(u: *const PrecatCell, out: *mut *mut c_char) -> PrecatStatus {
    guard(|| {
        let u = ref_arg(u, "u")?;
        let l = polyplex_lift(&Element::new(u.pol.clone(), u.cell.clone())?)?;
        put_json(out, lifting_to_json(&l))
    })
}

/// # Safety
/// `u` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn precat_measure_json(u: *const PrecatCell, out: *mut *mut c_char) -> PrecatStatus {
    guard(|| {
        let u = ref_arg(u, "u")?;
        let m = polyplex_measure(&Element::new(u.pol.clone(), u.cell.clone())?)?;
        put_json(out, measure_to_json(&u.pol, &m))
    })
}

/// Plexes of dimension `dim` with at most `weight` generators.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn precat_plexes_json(dim: usize, weight: usize, out: *mut *mut c_char) -> PrecatStatus {
    guard(|| put_json(out, plexes_to_json(&enumerate_plexes(dim, weight)?, dim)))
}

/// Report of the generator/plex correspondence for `p`.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn precat_makkai_json(p: *const PrecatPolygraph, out: *mut *mut c_char) -> PrecatStatus {
    guard(|| {
        let p = ref_arg(p, "polygraph")?;
        let r = makkai_check(&p.pol, None)?;
        put_json(out, serde_json::to_value(r).expect("report serializes"))
    })
}
