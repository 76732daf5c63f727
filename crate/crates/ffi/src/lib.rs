//! C ABI over the `pathcat` library.
//!
//! Every function returns a [`PathcatStatus`] and writes results through out
//! pointers. Objects cross the boundary as opaque handles that the caller
//! releases with the matching `*_free` function. After a non-`OK` status,
//! [`pathcat_last_error`] returns a description of the failure on the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use pathcat::cli::{run_command, Run};
use pathcat::fincat::{coarse, interval, FinCategory};
use pathcat::pathcat::{build_path_category, Path2Category};
use pathcat::simplex::enumerate_hom;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathcatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    OutOfRange = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// A finite category.
pub struct PathcatCategory(FinCategory);

/// A truncated path 2-category.
pub struct PathcatPathCategory(Path2Category);

/// The outcome of one command-line invocation.
pub struct PathcatReport(Run);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

struct Fail(PathcatStatus, String);

impl Fail {
    fn null(what: &str) -> Self {
        Fail(PathcatStatus::NullPointer, format!("{what} is null"))
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> PathcatStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PathcatStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PathcatStatus::Panic
        }
    }
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail::null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(PathcatStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// Copies `s` plus a terminating NUL into `buf`. `needed` receives the full
/// size including the NUL; a null `buf` only queries that size.
unsafe fn copy_out(s: &str, buf: *mut c_char, cap: usize, needed: *mut usize) -> Result<(), Fail> {
    let size = s.len() + 1;
    if !needed.is_null() {
        needed.write(size);
    }
    if buf.is_null() {
        return if needed.is_null() { Err(Fail::null("buf")) } else { Ok(()) };
    }
    if cap < size {
        return Err(Fail(PathcatStatus::BufferTooSmall, format!("{size} bytes needed, {cap} given")));
    }
    std::ptr::copy_nonoverlapping(s.as_ptr(), buf.cast::<u8>(), s.len());
    buf.add(s.len()).write(0);
    Ok(())
}

/// Copies the last error message of this thread into `buf`.
///
/// # Safety
/// `buf` must be null or valid for `cap` bytes; `needed` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn pathcat_last_error(buf: *mut c_char, cap: usize, needed: *mut usize) -> PathcatStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    match copy_out(&msg, buf, cap, needed) {
        Ok(()) => PathcatStatus::Ok,
        Err(Fail(s, _)) => s,
    }
}

/// The interval category `0 -> 1 -> ... -> n`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pathcat_category_interval(n: usize, out: *mut *mut PathcatCategory) -> PathcatStatus {
    guard(|| put(out, Box::into_raw(Box::new(PathcatCategory(interval(n)))), "out"))
}

/// The coarse category on `len` distinct object names.
///
/// # Safety
/// `names` must point to `len` NUL-terminated strings; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pathcat_category_coarse(
    names: *const *const c_char,
    len: usize,
    out: *mut *mut PathcatCategory,
) -> PathcatStatus {
    guard(|| {
        if names.is_null() && len > 0 {
            return Err(Fail::null("names"));
        }
        let names = (0..len).map(|i| text(*names.add(i), "name")).collect::<Result<Vec<_>, _>>()?;
        let c = coarse(&names).map_err(|e| Fail(PathcatStatus::InvalidInput, e.to_string()))?;
        put(out, Box::into_raw(Box::new(PathcatCategory(c))), "out")
    })
}

/// # Safety
/// `cat` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pathcat_category_object_count(cat: *const PathcatCategory, out: *mut usize) -> PathcatStatus {
    guard(|| put(out, deref(cat, "cat")?.0.object_count(), "out"))
}

/// # Safety
/// `cat` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pathcat_category_arrow_count(cat: *const PathcatCategory, out: *mut usize) -> PathcatStatus {
    guard(|| put(out, deref(cat, "cat")?.0.arrow_count(), "out"))
}

/// # Safety
/// `cat` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pathcat_category_free(cat: *mut PathcatCategory) {
    if !cat.is_null() {
        drop(Box::from_raw(cat));
    }
}

/// Builds the path 2-category of `cat` truncated at chain length `truncation`.
///
/// # Safety
/// `cat` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pathcat_path_category_build(
    cat: *const PathcatCategory,
    truncation: usize,
    out: *mut *mut PathcatPathCategory,
) -> PathcatStatus {
    guard(|| {
        let p = build_path_category(&deref(cat, "cat")?.0, truncation)
            .map_err(|e| Fail(PathcatStatus::InvalidInput, e.to_string()))?;
        put(out, Box::into_raw(Box::new(PathcatPathCategory(p))), "out")
    })
}

/// Total number of chains over all hom-categories.
///
/// # Safety
/// `p` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pathcat_path_category_chain_count(p: *const PathcatPathCategory, out: *mut usize) -> PathcatStatus {
    guard(|| put(out, deref(p, "p")?.0.chain_count(), "out"))
}

/// Total number of related chain pairs over all hom-categories.
///
/// # Safety
/// `p` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pathcat_path_category_relation_count(p: *const PathcatPathCategory, out: *mut usize) -> PathcatStatus {
    guard(|| put(out, deref(p, "p")?.0.relation_count(), "out"))
}

/// Number of chains from object `a` to object `b`.
///
/// # Safety
/// `p` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pathcat_path_category_hom_size(
    p: *const PathcatPathCategory,
    a: usize,
    b: usize,
    out: *mut usize,
) -> PathcatStatus {
    guard(|| {
        let p = &deref(p, "p")?.0;
        let n = p.base.object_count();
        if a >= n || b >= n {
            return Err(Fail(PathcatStatus::OutOfRange, format!("object index out of range (have {n})")));
        }
        put(out, p.path_hom(a, b).chains.len(), "out")
    })
}

/// # Safety
/// `p` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pathcat_path_category_free(p: *mut PathcatPathCategory) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of nondecreasing maps from the ordinal `{0..m-1}` to `{0..n-1}`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pathcat_delta_hom_count(m: usize, n: usize, out: *mut usize) -> PathcatStatus {
    guard(|| put(out, enumerate_hom(m, n).len(), "out"))
}

/// Runs the command line `argv[0..argc]`, program name first.
///
/// A report is produced for verification failures and input errors alike;
/// inspect it with [`pathcat_report_exit_code`].
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pathcat_run(argc: c_int, argv: *const *const c_char, out: *mut *mut PathcatReport) -> PathcatStatus {
    guard(|| {
        let argc = usize::try_from(argc).map_err(|_| Fail(PathcatStatus::OutOfRange, "argc is negative".into()))?;
        if argv.is_null() && argc > 0 {
            return Err(Fail::null("argv"));
        }
        let args = (0..argc).map(|i| text(*argv.add(i), "argv entry")).collect::<Result<Vec<_>, _>>()?;
        put(out, Box::into_raw(Box::new(PathcatReport(run_command(args)))), "out")
    })
}

/// 0 pass, 1 verification failure, 2 input error.
///
/// # Safety
/// `r` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pathcat_report_exit_code(r: *const PathcatReport, out: *mut c_int) -> PathcatStatus {
    guard(|| put(out, deref(r, "report")?.0.exit_code(), "out"))
}

/// Copies the standard output text of a run.
///
/// # Safety
/// `r` must be valid; `buf` null or valid for `cap` bytes; `needed` null or valid.
#[no_mangle]
pub unsafe extern "C" fn pathcat_report_stdout(
    r: *const PathcatReport,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> PathcatStatus {
    guard(|| copy_out(&deref(r, "report")?.0.stdout(), buf, cap, needed))
}

/// Copies the standard error text of a run.
///
/// # Safety
/// `r` must be valid; `buf` null or valid for `cap` bytes; `needed` null or valid.
#[no_mangle]
pub unsafe extern "C" fn pathcat_report_stderr(
    r: *const PathcatReport,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> PathcatStatus {
    guard(|| copy_out(&deref(r, "report")?.0.stderr(), buf, cap, needed))
}

/// # Safety
/// `r` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pathcat_report_free(r: *mut PathcatReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
