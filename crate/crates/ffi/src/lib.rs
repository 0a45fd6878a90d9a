//! C ABI over `cinf-core`.
//!
//! Inputs are parsed from the same JSON documents the `cinf` binary reads and
//! held behind opaque handles. Every command returns a report handle whose
//! JSON is byte-identical to `cinf ... --json`. Functions return a status
//! code: the non-negative codes mirror the binary's exit codes and come with
//! a report; negative codes mean the call itself was malformed.
//!
//! Handles are not thread-safe to share for mutation, but none of the
//! functions here mutate a handle after creation. Every handle must be
//! released with its matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cinf_core::cli::{self, AlgebraFile, CliError, ErrorCode, MorphismFile, Outcome, StructureFile};
use cinf_core::harrison::Flavor;
use cinf_core::obstruction::StructureFlavor;

pub const CINF_OK: i32 = 0;
pub const CINF_FINDING: i32 = 1;
pub const CINF_INPUT_ERROR: i32 = 2;
pub const CINF_INTERNAL_ERROR: i32 = 3;
pub const CINF_NULL_ARGUMENT: i32 = -1;
pub const CINF_INVALID_UTF8: i32 = -2;
pub const CINF_INVALID_ARGUMENT: i32 = -3;
pub const CINF_PANIC: i32 = -4;

pub const CINF_COCHAIN_HARRISON: i32 = 0;
pub const CINF_COCHAIN_DUAL: i32 = 1;
pub const CINF_COCHAIN_CYCLIC: i32 = 2;

pub const CINF_OBS_PLAIN: i32 = 0;
pub const CINF_OBS_SYMPLECTIC: i32 = 1;
pub const CINF_OBS_UNITAL: i32 = 2;

/// A parsed algebra document.
pub struct CinfAlgebra {
    file: AlgebraFile,
}

/// A parsed structure document.
pub struct CinfStructure {
    file: StructureFile,
}

/// A parsed morphism document.
pub struct CinfMorphism {
    file: MorphismFile,
}

/// The outcome of one command.
pub struct CinfReport {
    exit_code: i32,
    json: CString,
    text: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn error_json(e: &CliError) -> String {
    serde_json::to_string(e).unwrap_or_else(|_| e.message.clone())
}

fn guard(f: impl FnOnce() -> i32) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("panic: {msg}"));
            CINF_PANIC
        }
    }
}

unsafe fn text_arg<'a>(s: *const c_char) -> Result<&'a str, i32> {
    if s.is_null() {
        set_last_error("null argument".into());
        return Err(CINF_NULL_ARGUMENT);
    }
    CStr::from_ptr(s).to_str().map_err(|e| {
        set_last_error(format!("argument is not UTF-8: {e}"));
        CINF_INVALID_UTF8
    })
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, i32> {
    p.as_ref().ok_or_else(|| {
        set_last_error("null handle".into());
        CINF_NULL_ARGUMENT
    })
}

fn to_cstring(s: String) -> CString {
    CString::new(s.replace('\0', " ")).unwrap_or_default()
}

unsafe fn deliver(out: *mut *mut CinfReport, o: Outcome) -> i32 {
    if o.exit_code != 0 {
        if let Some(e) = o.report.get("error") {
            set_last_error(e.to_string());
        }
    }
    let r = CinfReport {
        exit_code: o.exit_code,
        json: to_cstring(o.json()),
        text: to_cstring(o.text),
    };
    *out = Box::into_raw(Box::new(r));
    o.exit_code
}

unsafe fn parse_into<T>(json: *const c_char, out: *mut *mut T, source: &str, make: impl FnOnce(&str, &str) -> Result<T, CliError>) -> i32 {
    if out.is_null() {
        set_last_error("null output pointer".into());
        return CINF_NULL_ARGUMENT;
    }
    *out = ptr::null_mut();
    let text = match text_arg(json) {
        Ok(t) => t,
        Err(c) => return c,
    };
    match make(text, source) {
        Ok(v) => {
            *out = Box::into_raw(Box::new(v));
            CINF_OK
        }
        Err(e) => {
            set_last_error(error_json(&e));
            e.code.exit_code()
        }
    }
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Parse an algebra document. Basis, product table and (when present)
/// pairing are validated up front, so later commands only fail on the
/// structure or on the requested computation.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cinf_algebra_parse(json: *const c_char, out: *mut *mut CinfAlgebra) -> i32 {
    guard(|| {
        parse_into(json, out, "algebra", |t, s| {
            let file = AlgebraFile::parse(t, s)?;
            let needs_pairing = file.pairing.is_some();
            file.build(needs_pairing)?;
            Ok(CinfAlgebra { file })
        })
    })
}

/// Number of basis elements, or 0 for a null handle.
///
/// # Safety
/// `alg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cinf_algebra_rank(alg: *const CinfAlgebra) -> usize {
    alg.as_ref().map_or(0, |a| a.file.basis.len())
}

/// # Safety
/// `alg` must be null or a handle from [`cinf_algebra_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cinf_algebra_free(alg: *mut CinfAlgebra) {
    free(alg)
}

/// Parse a structure document. Its terms are checked against an algebra only
/// when a command uses it.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cinf_structure_parse(json: *const c_char, out: *mut *mut CinfStructure) -> i32 {
    guard(|| parse_into(json, out, "structure", |t, s| Ok(CinfStructure { file: StructureFile::parse(t, s)? })))
}

/// # Safety
/// `s` must be null or a handle from [`cinf_structure_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cinf_structure_free(s: *mut CinfStructure) {
    free(s)
}

/// Parse a morphism document.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cinf_morphism_parse(json: *const c_char, out: *mut *mut CinfMorphism) -> i32 {
    guard(|| parse_into(json, out, "morphism", |t, s| Ok(CinfMorphism { file: MorphismFile::parse(t, s)? })))
}

/// # Safety
/// `m` must be null or a handle from [`cinf_morphism_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cinf_morphism_free(m: *mut CinfMorphism) {
    free(m)
}

fn cochain_flavor(f: i32) -> Option<Flavor> {
    match f {
        CINF_COCHAIN_HARRISON => Some(Flavor::Harrison),
        CINF_COCHAIN_DUAL => Some(Flavor::Dual),
        CINF_COCHAIN_CYCLIC => Some(Flavor::Cyclic),
        _ => None,
    }
}

fn obs_flavor(f: i32) -> Option<StructureFlavor> {
    match f {
        CINF_OBS_PLAIN => Some(StructureFlavor::Plain),
        CINF_OBS_SYMPLECTIC => Some(StructureFlavor::Symplectic),
        CINF_OBS_UNITAL => Some(StructureFlavor::Unital),
        _ => None,
    }
}

unsafe fn command(out: *mut *mut CinfReport, body: impl FnOnce() -> Result<Outcome, i32>) -> i32 {
    guard(|| {
        if out.is_null() {
            set_last_error("null output pointer".into());
            return CINF_NULL_ARGUMENT;
        }
        *out = ptr::null_mut();
        match body() {
            Ok(o) => deliver(out, o),
            Err(code) => code,
        }
    })
}

/// Validate the algebra and, if `structure` is non-null, the structure.
///
/// # Safety
/// Handles must be live (`structure` may be null); `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cinf_check(
    alg: *const CinfAlgebra,
    structure: *const CinfStructure,
    max_arity: usize,
    out: *mut *mut CinfReport,
) -> i32 {
    command(out, || {
        let a = handle(alg)?;
        let s = structure.as_ref().map(|s| &s.file);
        Ok(cli::check_report(&a.file, s, max_arity))
    })
}

/// Cohomology table up to order `window`; `flavor` is a `CINF_COCHAIN_*` value.
///
/// # Safety
/// `alg` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn cinf_cohomology(
    alg: *const CinfAlgebra,
    flavor: i32,
    normalised: bool,
    window: usize,
    out: *mut *mut CinfReport,
) -> i32 {
    command(out, || {
        let a = handle(alg)?;
        let f = cochain_flavor(flavor).ok_or_else(|| {
            set_last_error(format!("unknown cochain flavor {flavor}"));
            CINF_INVALID_ARGUMENT
        })?;
        Ok(cli::cohomology_report(&a.file, f, normalised, window))
    })
}

/// Obstruction class of a structure, or with `extend` set an attempt to extend
/// it one level. `level` 0 keeps the level from the document; `flavor` is a
/// `CINF_OBS_*` value.
///
/// # Safety
/// Handles must be live (`structure` may be null); `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cinf_obstruction(
    alg: *const CinfAlgebra,
    structure: *const CinfStructure,
    level: usize,
    flavor: i32,
    extend: bool,
    out: *mut *mut CinfReport,
) -> i32 {
    command(out, || {
        let a = handle(alg)?;
        let f = obs_flavor(flavor).ok_or_else(|| {
            set_last_error(format!("unknown obstruction flavor {flavor}"));
            CINF_INVALID_ARGUMENT
        })?;
        let s = structure.as_ref().map(|s| &s.file);
        Ok(cli::obstruction_report(&a.file, s, (level > 0).then_some(level), f, extend))
    })
}

/// Lift a structure to a symplectic one up to `order`.
///
/// # Safety
/// Handles must be live (`structure` may be null); `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cinf_lift(
    alg: *const CinfAlgebra,
    structure: *const CinfStructure,
    order: usize,
    unital: bool,
    two_step_crosscheck: bool,
    out: *mut *mut CinfReport,
) -> i32 {
    command(out, || {
        let a = handle(alg)?;
        let s = structure.as_ref().map(|s| &s.file);
        Ok(cli::lift_report(&a.file, s, order, unital, two_step_crosscheck))
    })
}

/// Lift a morphism between two symplectic structures to a symplectic morphism.
///
/// # Safety
/// All handles must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn cinf_lift_morphism(
    alg: *const CinfAlgebra,
    source: *const CinfStructure,
    target: *const CinfStructure,
    morphism: *const CinfMorphism,
    order: usize,
    unital: bool,
    out: *mut *mut CinfReport,
) -> i32 {
    command(out, || {
        let a = handle(alg)?;
        let (s, t, m) = (handle(source)?, handle(target)?, handle(morphism)?);
        Ok(cli::lift_morphism_report(&a.file, &s.file, &t.file, &m.file, order, unital))
    })
}

/// Check the Cartan identities on `samples` seeded random instances.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cinf_verify_cartan(samples: usize, seed: u64, out: *mut *mut CinfReport) -> i32 {
    command(out, || Ok(cli::run(&cli::Command::VerifyCartan { samples, seed })))
}

/// Run a command line exactly as the `cinf` binary would, without the program
/// name. `--json` makes no difference here; both renderings are kept.
///
/// # Safety
/// `argv` must point to `argc` valid NUL-terminated strings; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cinf_run(argv: *const *const c_char, argc: usize, out: *mut *mut CinfReport) -> i32 {
    command(out, || {
        if argv.is_null() && argc > 0 {
            set_last_error("null argv".into());
            return Err(CINF_NULL_ARGUMENT);
        }
        let mut args = vec!["cinf".to_string()];
        for i in 0..argc {
            args.push(text_arg(*argv.add(i))?.to_string());
        }
        Ok(match cli::run_args(args) {
            Ok((o, _)) => o,
            Err(e) => cli::error_report("usage", CliError::new(ErrorCode::Usage, e.to_string().trim().to_string())),
        })
    })
}

/// The report's exit code, or -1 for a null handle.
///
/// # Safety
/// `r` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn cinf_report_exit_code(r: *const CinfReport) -> i32 {
    r.as_ref().map_or(CINF_NULL_ARGUMENT, |r| r.exit_code)
}

/// The report as JSON. The string is owned by the report.
///
/// # Safety
/// `r` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn cinf_report_json(r: *const CinfReport) -> *const c_char {
    r.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// The report as text. The string is owned by the report.
///
/// # Safety
/// `r` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn cinf_report_text(r: *const CinfReport) -> *const c_char {
    r.as_ref().map_or(ptr::null(), |r| r.text.as_ptr())
}

/// # Safety
/// `r` must be null or a report not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cinf_report_free(r: *mut CinfReport) {
    free(r)
}

/// Message for the most recent failure on this thread: a JSON error object
/// for input errors, plain text otherwise. Valid until the next call into the
/// library from the same thread.
#[no_mangle]
pub extern "C" fn cinf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cinf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
