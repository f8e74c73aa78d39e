//! C ABI for the enricat kernel.
//!
//! Instances are opaque handles parsed from JSON text. Every command writes a canonical JSON
//! document to `*out`, which the caller releases with `enricat_string_free`. Status codes agree
//! with the CLI exit codes; the message of the last error on the calling thread is available
//! from `enricat_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use enricat::base::Mode;
use enricat::commands::{self, Outcome, Output, Refs};
use enricat::io::{parse_instance, to_canonical_string, Instance};

/// Result of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnricatStatus {
    /// The command ran and its verdict is pass.
    Pass = 0,
    /// The command ran and its verdict is fail.
    Fail = 1,
    /// The command ran but was truncated or skipped.
    Skipped = 2,
    /// Malformed JSON, unknown names or an ill-posed command.
    InputError = 3,
    /// A required pointer argument was null.
    NullArgument = 4,
    /// A string argument was not UTF-8.
    InvalidUtf8 = 5,
    /// The kernel panicked. This is a bug.
    Internal = 6,
}

/// A parsed instance file.
pub struct EnricatInstance(Instance);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

enum Failure {
    Status(EnricatStatus, String),
    Kernel(enricat::Error),
}

impl From<enricat::Error> for Failure {
    fn from(e: enricat::Error) -> Failure {
        Failure::Kernel(e)
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Status(
            EnricatStatus::NullArgument,
            format!("{what} is null"),
        ));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure::Status(EnricatStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn opt_text<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        text(p, what).map(Some)
    }
}

unsafe fn instance<'a>(p: *const EnricatInstance) -> Result<&'a Instance, Failure> {
    p.as_ref()
        .map(|i| &i.0)
        .ok_or_else(|| Failure::Status(EnricatStatus::NullArgument, "instance is null".into()))
}

fn refs(json: Option<&str>) -> Result<Refs, Failure> {
    match json {
        None => Ok(Refs::default()),
        Some(s) => serde_json::from_str(s)
            .map_err(|e| Failure::Status(EnricatStatus::InputError, format!("names: {e}"))),
    }
}

fn status(o: Outcome) -> EnricatStatus {
    match o {
        Outcome::Pass => EnricatStatus::Pass,
        Outcome::Fail => EnricatStatus::Fail,
        Outcome::Skipped => EnricatStatus::Skipped,
    }
}

/// Runs `f`, writes its JSON to `out` and maps every failure to a status.
unsafe fn guarded<F>(out: *mut *mut c_char, f: F) -> EnricatStatus
where
    F: FnOnce() -> Result<(serde_json::Value, Outcome), Failure>,
{
    if out.is_null() {
        set_error("out is null".into());
        return EnricatStatus::NullArgument;
    }
    *out = ptr::null_mut();
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok((json, outcome))) => {
            let s = CString::new(to_canonical_string(&json)).expect("JSON has no nul bytes");
            *out = s.into_raw();
            status(outcome)
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Failure::Kernel(e))) => {
            set_error(e.to_string());
            EnricatStatus::InputError
        }
        Err(_) => {
            set_error("internal panic".into());
            EnricatStatus::Internal
        }
    }
}

fn output(o: Output) -> (serde_json::Value, Outcome) {
    (o.json, o.outcome)
}

/// Parses an instance from JSON text. On success `*out` owns a handle for
/// `enricat_instance_free`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn enricat_instance_parse(
    json: *const c_char,
    out: *mut *mut EnricatInstance,
) -> EnricatStatus {
    if out.is_null() {
        set_error("out is null".into());
        return EnricatStatus::NullArgument;
    }
    *out = ptr::null_mut();
    clear_error();
    let r = catch_unwind(AssertUnwindSafe(|| -> Result<Instance, Failure> {
        Ok(parse_instance(text(json, "json")?)?)
    }));
    match r {
        Ok(Ok(inst)) => {
            *out = Box::into_raw(Box::new(EnricatInstance(inst)));
            EnricatStatus::Pass
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Failure::Kernel(e))) => {
            set_error(e.to_string());
            EnricatStatus::InputError
        }
        Err(_) => {
            set_error("internal panic".into());
            EnricatStatus::Internal
        }
    }
}

/// Releases an instance handle. Null is ignored.
///
/// # Safety
/// `inst` must come from `enricat_instance_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn enricat_instance_free(inst: *mut EnricatInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn enricat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn enricat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn enricat_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Validates every category and functor of the instance.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn enricat_validate(
    inst: *const EnricatInstance,
    out: *mut *mut c_char,
) -> EnricatStatus {
    guarded(out, || Ok(output(commands::validate(instance(inst)?))))
}

/// π₀ of a category, or of every value when the instance has no categories.
/// `names` is null or a JSON object of entry names, e.g. `{"category": "H"}`.
///
/// # Safety
/// `inst` must be a live handle, `names` null or a nul-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn enricat_pi0(
    inst: *const EnricatInstance,
    names: *const c_char,
    out: *mut *mut c_char,
) -> EnricatStatus {
    guarded(out, || {
        let r = refs(opt_text(names, "names")?)?;
        Ok(output(commands::pi0(instance(inst)?, &r)?))
    })
}

/// The free category on a graph, with paths up to `word_bound` arrows.
///
/// # Safety
/// As for `enricat_pi0`.
#[no_mangle]
pub unsafe extern "C" fn enricat_free(
    inst: *const EnricatInstance,
    names: *const c_char,
    word_bound: usize,
    truncate: bool,
    out: *mut *mut c_char,
) -> EnricatStatus {
    guarded(out, || {
        let r = refs(opt_text(names, "names")?)?;
        let mode = if truncate {
            Mode::Truncate
        } else {
            Mode::Strict
        };
        Ok(output(commands::free(
            instance(inst)?,
            &r,
            word_bound,
            mode,
        )?))
    })
}

/// Push-out along a free functor. `names` selects the category and the attachment
/// (`a`, `b`, `f`, `gbar`).
///
/// # Safety
/// As for `enricat_pi0`.
#[no_mangle]
pub unsafe extern "C" fn enricat_pushout(
    inst: *const EnricatInstance,
    names: *const c_char,
    stage_bound: usize,
    out: *mut *mut c_char,
) -> EnricatStatus {
    guarded(out, || {
        let r = refs(opt_text(names, "names")?)?;
        Ok(output(commands::pushout(instance(inst)?, &r, stage_bound)?))
    })
}

/// The stage-by-stage trace of a push-out along a free functor.
///
/// # Safety
/// As for `enricat_pi0`.
#[no_mangle]
pub unsafe extern "C" fn enricat_trace_export(
    inst: *const EnricatInstance,
    names: *const c_char,
    stage_bound: usize,
    out: *mut *mut c_char,
) -> EnricatStatus {
    guarded(out, || {
        let r = refs(opt_text(names, "names")?)?;
        Ok(output(commands::trace_export(
            instance(inst)?,
            &r,
            stage_bound,
        )?))
    })
}

/// Decides a predicate, e.g. `"dk"` or `"decomposition"`, on the instance.
///
/// # Safety
/// `predicate` must be a nul-terminated string; otherwise as for `enricat_pi0`.
#[no_mangle]
pub unsafe extern "C" fn enricat_check(
    predicate: *const c_char,
    inst: *const EnricatInstance,
    names: *const c_char,
    stage_bound: usize,
    out: *mut *mut c_char,
) -> EnricatStatus {
    guarded(out, || {
        let p = text(predicate, "predicate")?;
        let r = refs(opt_text(names, "names")?)?;
        Ok(output(commands::check(
            p,
            instance(inst)?,
            &r,
            stage_bound,
        )?))
    })
}

/// Runs `count` seeded instances of a property suite.
///
/// # Safety
/// `suite` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn enricat_proptest(
    suite: *const c_char,
    count: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> EnricatStatus {
    guarded(out, || {
        let (run, outcome) = commands::proptest(text(suite, "suite")?, count, seed)?;
        Ok((
            serde_json::to_value(&run).expect("reports serialize"),
            outcome,
        ))
    })
}
