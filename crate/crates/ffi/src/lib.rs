//! C ABI over `duflo-core`.
//!
//! Objects cross the boundary as opaque handles that the caller releases with
//! the matching `*_free` function. Every fallible call returns an `i32` status
//! (`DUFLO_OK` or a negative code) and writes results through out-pointers.
//! The message of the last error on the calling thread is available from
//! [`duflo_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use duflo_core::cohomology::{verify_theorem, VerificationReport, VerifyConfig};
use duflo_core::enveloping::DufloMap;
use duflo_core::kgraphs::{bernoulli_weight, weight_mc, KGraph};
use duflo_core::lie::{catalog, LieAlgebra};
use duflo_core::poly::Polynomial;
use duflo_core::{scalar, Error};

pub const DUFLO_OK: i32 = 0;
pub const DUFLO_ERR_NULL: i32 = -1;
pub const DUFLO_ERR_UTF8: i32 = -2;
pub const DUFLO_ERR_LOOKUP: i32 = -3;
pub const DUFLO_ERR_STRUCTURAL: i32 = -4;
pub const DUFLO_ERR_PARSE: i32 = -5;
pub const DUFLO_ERR_PARAMETER: i32 = -6;
pub const DUFLO_ERR_PRECONDITION: i32 = -7;
pub const DUFLO_ERR_BOUND: i32 = -8;
pub const DUFLO_ERR_IO: i32 = -9;
pub const DUFLO_ERR_JSON: i32 = -10;
pub const DUFLO_ERR_INVALID_ALGEBRA: i32 = -11;
pub const DUFLO_ERR_PANIC: i32 = -12;

/// A Lie algebra given by structure constants.
pub struct DufloAlgebra(LieAlgebra);

/// Result of a verification run.
pub struct DufloReport(VerificationReport);

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct DufloWeightEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn code_of(e: &Error) -> i32 {
    match e {
        Error::Structural(_) => DUFLO_ERR_STRUCTURAL,
        Error::Lookup(_) => DUFLO_ERR_LOOKUP,
        Error::BoundExceeded { .. } => DUFLO_ERR_BOUND,
        Error::Precondition(_) => DUFLO_ERR_PRECONDITION,
        Error::Parameter(_) => DUFLO_ERR_PARAMETER,
        Error::Parse(_) => DUFLO_ERR_PARSE,
        Error::Io(_) => DUFLO_ERR_IO,
        Error::Json(_) => DUFLO_ERR_JSON,
    }
}

struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(code_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            DUFLO_OK
        }
        Ok(Err(Failure(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            DUFLO_ERR_PANIC
        }
    }
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(DUFLO_ERR_NULL, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(DUFLO_ERR_UTF8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(DUFLO_ERR_NULL, format!("{what} is null")))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(DUFLO_ERR_NULL, "output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn duflo_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Loads a catalog algebra (`abelian2`, `aff1`, `heisenberg3`, `sl2`, `so3`).
///
/// # Safety
/// `name` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn duflo_algebra_catalog(name: *const c_char, out: *mut *mut DufloAlgebra) -> i32 {
    guard(|| {
        let alg = catalog(text(name, "name")?)?;
        write(out, Box::into_raw(Box::new(DufloAlgebra(alg))))
    })
}

/// Parses the JSON algebra format used by the command-line tool. The algebra
/// is not validated.
///
/// # Safety
/// `json` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn duflo_algebra_from_json(json: *const c_char, out: *mut *mut DufloAlgebra) -> i32 {
    guard(|| {
        let alg = LieAlgebra::from_json_str(text(json, "json")?)?;
        write(out, Box::into_raw(Box::new(DufloAlgebra(alg))))
    })
}

/// # Safety
/// `alg` must come from this library and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn duflo_algebra_dim(alg: *const DufloAlgebra, out: *mut usize) -> i32 {
    guard(|| write(out, handle(alg, "algebra")?.0.dim()))
}

/// Writes whether antisymmetry and the Jacobi identity hold.
///
/// # Safety
/// `alg` must come from this library and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn duflo_algebra_validate(alg: *const DufloAlgebra, out: *mut bool) -> i32 {
    guard(|| write(out, handle(alg, "algebra")?.0.validate().is_ok()))
}

/// # Safety
/// `alg` must come from this library (or be null) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn duflo_algebra_free(alg: *mut DufloAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Runs the verification. A zero bound selects its default (`p_max = dim`,
/// `d_max = 3`, `search_bound = d_max + 2`).
///
/// # Safety
/// `alg` must come from this library and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn duflo_verify(
    alg: *const DufloAlgebra,
    p_max: usize,
    d_max: usize,
    search_bound: usize,
    out: *mut *mut DufloReport,
) -> i32 {
    guard(|| {
        let alg = &handle(alg, "algebra")?.0;
        if !alg.validate().is_ok() {
            return Err(Failure(DUFLO_ERR_INVALID_ALGEBRA, format!("{} is not a Lie algebra", alg.name())));
        }
        let defaults = VerifyConfig::defaults(alg);
        let d_max = if d_max == 0 { defaults.d_max } else { d_max };
        let config = VerifyConfig {
            p_max: if p_max == 0 { defaults.p_max } else { p_max },
            d_max,
            search_bound: if search_bound == 0 { d_max + 2 } else { search_bound },
        };
        let report = verify_theorem(alg, config)?;
        write(out, Box::into_raw(Box::new(DufloReport(report))))
    })
}

/// Writes whether no gating check failed.
///
/// # Safety
/// `report` must come from this library and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn duflo_report_ok(report: *const DufloReport, out: *mut bool) -> i32 {
    guard(|| write(out, handle(report, "report")?.0.ok()))
}

/// The report as JSON; release with [`duflo_string_free`].
///
/// # Safety
/// `report` must come from this library and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn duflo_report_json(report: *const DufloReport, out: *mut *mut c_char) -> i32 {
    guard(|| write(out, owned_string(handle(report, "report")?.0.to_json())))
}

/// # Safety
/// `report` must come from this library (or be null) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn duflo_report_free(report: *mut DufloReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// `f * g` for polynomials written over the algebra's basis labels; release
/// the result with [`duflo_string_free`].
///
/// # Safety
/// `alg` must come from this library; `f`, `g` must be valid C strings and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn duflo_star(
    alg: *const DufloAlgebra,
    f: *const c_char,
    g: *const c_char,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let alg = &handle(alg, "algebra")?.0;
        let labels = alg.labels();
        let pf = Polynomial::parse(text(f, "f")?, labels)?;
        let pg = Polynomial::parse(text(g, "g")?, labels)?;
        let duflo = DufloMap::new(alg, pf.degree_or_zero() + pg.degree_or_zero());
        let prod = duflo.star(&pf, &pg)?;
        write(out, owned_string(prod.render(labels)))
    })
}

/// Monte-Carlo weight of a graph written as `1->2, 2->G1`.
///
/// # Safety
/// `graph` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn duflo_weight_mc(
    graph: *const c_char,
    samples: u64,
    seed: u64,
    out: *mut DufloWeightEstimate,
) -> i32 {
    guard(|| {
        let g = KGraph::parse(text(graph, "graph")?)?;
        let est = weight_mc(&g, samples, seed)?;
        write(
            out,
            DufloWeightEstimate {
                mean: est.mean,
                std_error: est.stderr,
                samples: est.samples,
                seed: est.seed,
            },
        )
    })
}

/// Difference of the two endpoint weights of the deployed Bernoulli graph, as
/// an exact rational string; release with [`duflo_string_free`].
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn duflo_bernoulli_difference(p: usize, out: *mut *mut c_char) -> i32 {
    guard(|| write(out, owned_string(scalar::render(&bernoulli_weight(p).difference))))
}

/// # Safety
/// `s` must come from this library (or be null) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn duflo_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
