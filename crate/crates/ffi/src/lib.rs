//! C ABI over the solver portfolio.
//!
//! Every function returns a [`PddStatus`]. On failure the message is kept in
//! a thread-local slot readable through [`pdd_last_error`]. Handles are
//! opaque and must be released with their matching `_free` function.

use pdd::cli::{parse_document, portfolio_solve, verify, Algorithm, Policy, RunRecord};
use pdd::colorcoding::CcConfig;
use pdd::{Instance, PddError};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Result codes shared by all entry points.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PddStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Precondition = 5,
    Refusal = 6,
    Overflow = 7,
    Panic = 8,
}

/// A parsed instance.
pub struct PddInstance {
    inner: Instance,
}

/// Outcome of a solver run.
pub struct PddResult {
    record: RunRecord,
    json: CString,
    witness: Vec<CString>,
}

/// Solver selection. Obtain defaults from [`pdd_options_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct PddOptions {
    /// Solver id such as `"tw"`; null selects automatically.
    pub algorithm: *const c_char,
    /// Use the randomized color-coding families.
    pub monte_carlo: bool,
    pub seed: u64,
    pub epsilon: f64,
    /// Also compute the maximum diversity.
    pub optimize: bool,
    /// Largest estimated cost a specialized solver may have.
    pub budget: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn status_of(e: &PddError) -> PddStatus {
    match e {
        PddError::Domain(_) => PddStatus::Domain,
        PddError::Precondition(_) => PddStatus::Precondition,
        PddError::Refusal(_) => PddStatus::Refusal,
        PddError::Parse { .. } => PddStatus::Parse,
        PddError::Overflow(_) => PddStatus::Overflow,
    }
}

struct Fail(PddStatus, String);

impl From<PddError> for Fail {
    fn from(e: PddError) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PddStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PddStatus::Ok
        }
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            PddStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(PddStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(PddStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(PddStatus::NullArgument, format!("{what} is null")))
}

fn null(what: &str) -> Fail {
    Fail(PddStatus::NullArgument, format!("{what} is null"))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn pdd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Exact mode, automatic selection, no optimization.
#[no_mangle]
pub extern "C" fn pdd_options_default() -> PddOptions {
    let p = Policy::default();
    PddOptions {
        algorithm: ptr::null(),
        monte_carlo: false,
        seed: 0,
        epsilon: p.cc.epsilon,
        optimize: false,
        budget: p.budget,
    }
}

/// Parses an instance document (`#tree`, `#web`, `#params` sections).
///
/// # Safety
/// `document` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pdd_instance_parse(document: *const c_char, out: *mut *mut PddInstance) -> PddStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let inner = parse_document(text(document, "document")?)?;
        *out = Box::into_raw(Box::new(PddInstance { inner }));
        Ok(())
    })
}

/// # Safety
/// `inst` must come from [`pdd_instance_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pdd_instance_free(inst: *mut PddInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of taxa, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pdd_instance_num_taxa(inst: *const PddInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.inner.n())
}

/// Runs the portfolio. `options` may be null for defaults.
///
/// # Safety
/// `inst` must be a live handle, `options` null or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pdd_solve(
    inst: *const PddInstance,
    options: *const PddOptions,
    out: *mut *mut PddResult,
) -> PddStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let inst = deref(inst, "instance")?;
        let opts = options.as_ref().copied().unwrap_or_else(|| pdd_options_default());
        let algorithm = if opts.algorithm.is_null() {
            Algorithm::Auto
        } else {
            text(opts.algorithm, "algorithm")?
                .parse::<Algorithm>()
                .map_err(|e| Fail(PddStatus::Domain, e))?
        };
        let cc = if opts.monte_carlo {
            CcConfig::monte_carlo(opts.seed, opts.epsilon)
        } else {
            CcConfig { seed: opts.seed, ..CcConfig::exact() }
        };
        let policy = Policy { algorithm, cc, budget: opts.budget, ..Policy::default() };
        let record = portfolio_solve(&inst.inner, &policy, opts.optimize)?;
        let json = serde_json::to_string(&record).expect("records serialize");
        let witness = record
            .witness
            .iter()
            .flatten()
            .map(|n| CString::new(n.as_str()).expect("taxon names have no nul bytes"))
            .collect();
        let json = CString::new(json).expect("json has no nul bytes");
        *out = Box::into_raw(Box::new(PddResult { record, json, witness }));
        Ok(())
    })
}

/// # Safety
/// `res` must come from [`pdd_solve`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pdd_result_free(res: *mut PddResult) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// True when the instance is a yes-instance.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pdd_result_is_yes(res: *const PddResult) -> bool {
    res.as_ref().is_some_and(|r| r.record.decision == "yes")
}

/// Diversity of the witness; 0 when there is none.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pdd_result_pd(res: *const PddResult) -> u64 {
    res.as_ref().and_then(|r| r.record.pd_value).unwrap_or(0)
}

/// Writes the maximum diversity to `out` when it was computed.
///
/// # Safety
/// `res` must be null or a live handle, `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn pdd_result_optimum(res: *const PddResult, out: *mut u64) -> bool {
    match (res.as_ref().and_then(|r| r.record.optimum), out.is_null()) {
        (Some(v), false) => {
            *out = v;
            true
        }
        _ => false,
    }
}

/// Number of taxa in the witness.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pdd_result_witness_len(res: *const PddResult) -> usize {
    res.as_ref().map_or(0, |r| r.witness.len())
}

/// Name of witness taxon `i`, or null when out of range. Owned by `res`.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pdd_result_witness_name(res: *const PddResult, i: usize) -> *const c_char {
    res.as_ref().and_then(|r| r.witness.get(i)).map_or(ptr::null(), |s| s.as_ptr())
}

/// The full run record as JSON. Owned by `res`.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pdd_result_json(res: *const PddResult) -> *const c_char {
    res.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// Checks a claimed solution given as `len` taxon names. `passed` is set to
/// whether size, viability and diversity all hold.
///
/// # Safety
/// `names` must point to `len` nul-terminated strings (or be null when `len`
/// is 0) and `passed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pdd_verify(
    inst: *const PddInstance,
    names: *const *const c_char,
    len: usize,
    passed: *mut bool,
) -> PddStatus {
    guard(|| {
        if passed.is_null() {
            return Err(null("passed"));
        }
        let inst = deref(inst, "instance")?;
        if names.is_null() && len > 0 {
            return Err(null("names"));
        }
        let mut list = Vec::with_capacity(len);
        for i in 0..len {
            list.push(text(*names.add(i), "taxon name")?);
        }
        let set = inst.inner.taxa_from_names(&list)?;
        *passed = verify(&inst.inner, &set).passed();
        Ok(())
    })
}
