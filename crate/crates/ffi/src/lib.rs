//! C ABI over `acyclic_rewriter`.
//!
//! Presentations are opaque handles. Every fallible call returns an
//! [`ArStatus`]; on failure a message is available from
//! [`ar_last_error`] until the next call on the same thread. Strings handed
//! out by the library are released with [`ar_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use acyclic_rewriter::oracle::{oracle_divides_left, oracle_divides_right, oracle_equal, Bounds};
use acyclic_rewriter::report::{RepresentationRecord, VerdictRecord};
use acyclic_rewriter::{
    decide, decide_in_mode, represent, AcyclicPresentation, Answer, DecideLimits, GuideLetter, Mode, Presentation,
    Query, QueryKind, Word,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    NotCycleFree = 4,
    InvalidWord = 5,
    InvalidArgument = 6,
    Panic = 7,
}

/// Numerically equal to the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArAnswer {
    Yes = 0,
    No = 1,
    Unknown = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArQueryKind {
    Equal = 0,
    DividesLeft = 1,
    DividesRight = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArMode {
    /// The query's natural mode: prefix, or suffix for right divisibility.
    Default = 0,
    Prefix = 1,
    Suffix = 2,
}

/// Opaque validated presentation.
pub struct ArPresentation {
    inner: AcyclicPresentation,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(ArStatus, String);

type Outcome<T> = Result<T, Failure>;

fn fail<T>(status: ArStatus, message: impl Into<String>) -> Outcome<T> {
    Err(Failure(status, message.into()))
}

fn set_error(message: Option<String>) {
    let message = message.map(|m| CString::new(m.replace('\0', " ")).expect("no interior NUL"));
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
}

/// Runs `body`, records its error, and turns panics into `Panic`.
fn guard(body: impl FnOnce() -> Outcome<()>) -> ArStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error(None);
            ArStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(Some(message));
            status
        }
        Err(_) => {
            set_error(Some("internal panic".into()));
            ArStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Outcome<&'a str> {
    if p.is_null() {
        return fail(ArStatus::NullPointer, format!("{what} is null"));
    }
    CStr::from_ptr(p)
        .to_str()
        .or_else(|_| fail(ArStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a>(p: *const ArPresentation) -> Outcome<&'a AcyclicPresentation> {
    p.as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| Failure(ArStatus::NullPointer, "presentation is null".into()))
}

fn out_ptr<T>(p: *mut T) -> Outcome<()> {
    if p.is_null() {
        fail(ArStatus::NullPointer, "output pointer is null")
    } else {
        Ok(())
    }
}

fn word(ap: &AcyclicPresentation, s: &str, what: &str) -> Outcome<Word> {
    ap.parse_word_lenient(s)
        .or_else(|e| fail(ArStatus::InvalidWord, format!("{what}: {e}")))
}

fn nonempty(ap: &AcyclicPresentation, s: &str, what: &str) -> Outcome<Word> {
    let w = word(ap, s, what)?;
    if w.is_empty() {
        return fail(ArStatus::InvalidWord, format!("{what}: empty word"));
    }
    Ok(w)
}

fn answer(a: Answer) -> ArAnswer {
    match a {
        Answer::Yes => ArAnswer::Yes,
        Answer::No => ArAnswer::No,
        Answer::Unknown => ArAnswer::Unknown,
    }
}

fn kind(k: ArQueryKind) -> QueryKind {
    match k {
        ArQueryKind::Equal => QueryKind::Equal,
        ArQueryKind::DividesLeft => QueryKind::DividesLeft,
        ArQueryKind::DividesRight => QueryKind::DividesRight,
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no interior NUL").into_raw()
}

/// Parses and validates a presentation.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ar_presentation_parse(text: *const c_char, out: *mut *mut ArPresentation) -> ArStatus {
    guard(|| {
        out_ptr(out)?;
        *out = ptr::null_mut();
        let src = self::text(text, "presentation text")?;
        let p = Presentation::parse(src).or_else(|e| fail(ArStatus::ParseError, e.to_string()))?;
        let inner = AcyclicPresentation::new(p.clone())
            .or_else(|w| fail(ArStatus::NotCycleFree, format!("not cycle-free: {}", w.describe(&p))))?;
        *out = Box::into_raw(Box::new(ArPresentation { inner }));
        Ok(())
    })
}

/// Releases a presentation. Null is ignored.
///
/// # Safety
/// `p` must come from [`ar_presentation_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ar_presentation_free(p: *mut ArPresentation) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of generators.
///
/// # Safety
/// `p` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn ar_presentation_generators(p: *const ArPresentation) -> usize {
    p.as_ref().map_or(0, |h| h.inner.alphabet().len())
}

/// Decides a query. `max_steps`/`max_word_length` of 0 select the
/// defaults. When `witness_json` is non-null it receives the verdict with
/// its full witness as JSON, to be freed with [`ar_string_free`].
///
/// # Safety
/// Pointers must be valid; `u` and `v` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ar_decide(
    p: *const ArPresentation,
    query: ArQueryKind,
    mode: ArMode,
    u: *const c_char,
    v: *const c_char,
    max_steps: usize,
    max_word_length: usize,
    out: *mut ArAnswer,
    witness_json: *mut *mut c_char,
) -> ArStatus {
    guard(|| {
        out_ptr(out)?;
        if !witness_json.is_null() {
            *witness_json = ptr::null_mut();
        }
        let ap = handle(p)?;
        let (u, v) = (nonempty(ap, text(u, "u")?, "u")?, nonempty(ap, text(v, "v")?, "v")?);
        let defaults = DecideLimits::default();
        let mut q = Query::new(kind(query), u, v);
        q.limits = DecideLimits {
            max_steps: if max_steps == 0 { defaults.max_steps } else { max_steps },
            max_word_length: if max_word_length == 0 {
                defaults.max_word_length
            } else {
                max_word_length
            },
            total_steps: defaults.total_steps.max(max_steps),
        };
        let verdict = match mode {
            ArMode::Default => decide(ap, &q),
            ArMode::Prefix => decide_in_mode(ap, &q, Mode::Prefix),
            ArMode::Suffix => decide_in_mode(ap, &q, Mode::Suffix),
        }
        .or_else(|e| fail(ArStatus::InvalidArgument, e.to_string()))?;
        *out = answer(verdict.answer);
        if !witness_json.is_null() {
            let json = serde_json::to_string(&VerdictRecord::new(ap, &verdict)).expect("serializable");
            *witness_json = into_c_string(json);
        }
        Ok(())
    })
}

/// Bounded brute-force answer for the same queries as [`ar_decide`].
/// Zero bounds select the defaults (length 12, 200 000 states).
///
/// # Safety
/// Pointers must be valid; `u` and `v` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ar_oracle(
    p: *const ArPresentation,
    query: ArQueryKind,
    u: *const c_char,
    v: *const c_char,
    max_length: usize,
    max_states: usize,
    out: *mut ArAnswer,
) -> ArStatus {
    guard(|| {
        out_ptr(out)?;
        let ap = handle(p)?;
        let (u, v) = (nonempty(ap, text(u, "u")?, "u")?, nonempty(ap, text(v, "v")?, "v")?);
        let d = Bounds::default();
        let b = Bounds {
            max_word_length: if max_length == 0 { d.max_word_length } else { max_length },
            max_states: if max_states == 0 { d.max_states } else { max_states },
        };
        *out = answer(match query {
            ArQueryKind::Equal => oracle_equal(ap, &u, &v, b),
            ArQueryKind::DividesLeft => oracle_divides_left(ap, &u, &v, b).0,
            ArQueryKind::DividesRight => oracle_divides_right(ap, &u, &v, b).0,
        });
        Ok(())
    })
}

/// Prefix (or suffix) representation of `word` towards `guide`, as JSON.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ar_represent_json(
    p: *const ArPresentation,
    word: *const c_char,
    guide: *const c_char,
    mode: ArMode,
    out: *mut *mut c_char,
) -> ArStatus {
    guard(|| {
        out_ptr(out)?;
        *out = ptr::null_mut();
        let ap = handle(p)?;
        let w = self::word(ap, text(word, "word")?, "word")?;
        let token = text(guide, "guide")?.trim();
        let letter = ap
            .alphabet()
            .get(token)
            .ok_or_else(|| Failure(ArStatus::InvalidArgument, format!("unknown guide letter {token:?}")))?;
        let g = match mode {
            ArMode::Suffix => GuideLetter::suffix(letter),
            _ => GuideLetter::prefix(letter),
        };
        let r = represent(ap, &w, g);
        *out = into_c_string(serde_json::to_string(&RepresentationRecord::new(ap, &r)).expect("serializable"));
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library from this thread.
#[no_mangle]
pub extern "C" fn ar_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ar_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ar_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
