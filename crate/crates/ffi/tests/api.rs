use std::ffi::{CStr, CString};
use std::ptr;

use acyclic_rewriter_ffi::*;

const P1: &str = "generators: a b c\nrelation: a b = b c\n";
const P2: &str = "generators: a b\nrelation: a b = b a a\n";

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn parse(text: &str) -> *mut ArPresentation {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { ar_presentation_parse(c(text).as_ptr(), &mut p) }, ArStatus::Ok);
    assert!(!p.is_null());
    p
}

fn last_error() -> String {
    let e = ar_last_error();
    assert!(!e.is_null());
    unsafe { CStr::from_ptr(e) }.to_str().unwrap().to_owned()
}

fn decide(p: *const ArPresentation, kind: ArQueryKind, u: &str, v: &str) -> (ArStatus, ArAnswer, Option<String>) {
    let mut a = ArAnswer::Unknown;
    let mut json = ptr::null_mut();
    let s = unsafe {
        ar_decide(
            p,
            kind,
            ArMode::Default,
            c(u).as_ptr(),
            c(v).as_ptr(),
            0,
            0,
            &mut a,
            &mut json,
        )
    };
    let witness = (!json.is_null()).then(|| {
        let w = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
        unsafe { ar_string_free(json) };
        w
    });
    (s, a, witness)
}

#[test]
fn worked_examples() {
    let p2 = parse(P2);
    let (s, a, w) = decide(p2, ArQueryKind::Equal, "a a b", "b a a a a");
    assert_eq!((s, a), (ArStatus::Ok, ArAnswer::Yes));
    let w: serde_json::Value = serde_json::from_str(&w.unwrap()).unwrap();
    assert_eq!(
        w["segments"][0]["terms"],
        serde_json::json!(["a a b", "a b a a", "b a a a a"])
    );

    let p1 = parse(P1);
    let (_, a, w) = decide(p1, ArQueryKind::DividesLeft, "abb", "bc");
    assert_eq!(a, ArAnswer::Yes);
    assert!(w.unwrap().contains(r#""residual":"b""#));
    assert_eq!(decide(p1, ArQueryKind::Equal, "ab", "ba").1, ArAnswer::No);
    unsafe {
        ar_presentation_free(p1);
        ar_presentation_free(p2);
    }
}

#[test]
fn oracle_and_represent() {
    let p = parse(P1);
    let mut a = ArAnswer::Unknown;
    let s = unsafe {
        ar_oracle(
            p,
            ArQueryKind::DividesLeft,
            c("a b b").as_ptr(),
            c("b c").as_ptr(),
            0,
            0,
            &mut a,
        )
    };
    assert_eq!((s, a), (ArStatus::Ok, ArAnswer::Yes));

    let mut json = ptr::null_mut();
    let s = unsafe { ar_represent_json(p, c("a b b").as_ptr(), c("b").as_ptr(), ArMode::Prefix, &mut json) };
    assert_eq!(s, ArStatus::Ok);
    let r: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(json) }.to_str().unwrap()).unwrap();
    unsafe { ar_string_free(json) };
    assert_eq!(r["status"], "head-found");
    assert_eq!(r["head"]["word"], "a b");
    assert_eq!(r["residual"], "b");

    let s = unsafe { ar_represent_json(p, c("a b").as_ptr(), c("z").as_ptr(), ArMode::Prefix, &mut json) };
    assert_eq!(s, ArStatus::InvalidArgument);
    assert!(json.is_null());
    unsafe { ar_presentation_free(p) };
}

#[test]
fn errors_are_reported() {
    let mut p = ptr::null_mut();
    let s = unsafe { ar_presentation_parse(c("generators: a b\nrelation: a b a = a b").as_ptr(), &mut p) };
    assert_eq!(s, ArStatus::NotCycleFree);
    assert!(p.is_null());
    assert!(last_error().contains("loop at a"));

    assert_eq!(
        unsafe { ar_presentation_parse(c("relation: a = b").as_ptr(), &mut p) },
        ArStatus::ParseError
    );
    assert_eq!(
        unsafe { ar_presentation_parse(ptr::null(), &mut p) },
        ArStatus::NullPointer
    );
    let bad = [0xffu8, 0];
    assert_eq!(
        unsafe { ar_presentation_parse(bad.as_ptr().cast(), &mut p) },
        ArStatus::InvalidUtf8
    );

    let p1 = parse(P1);
    assert!(ar_last_error().is_null());
    assert_eq!(decide(p1, ArQueryKind::Equal, "a q", "a").0, ArStatus::InvalidWord);
    assert_eq!(decide(p1, ArQueryKind::Equal, "", "a").0, ArStatus::InvalidWord);
    assert_eq!(
        decide(ptr::null(), ArQueryKind::Equal, "a", "a").0,
        ArStatus::NullPointer
    );
    let s = unsafe {
        ar_decide(
            p1,
            ArQueryKind::Equal,
            ArMode::Default,
            c("a").as_ptr(),
            c("a").as_ptr(),
            0,
            0,
            ptr::null_mut(),
            ptr::null_mut(),
        )
    };
    assert_eq!(s, ArStatus::NullPointer);
    unsafe {
        ar_presentation_free(p1);
        ar_presentation_free(ptr::null_mut());
        ar_string_free(ptr::null_mut());
    }
    assert_eq!(unsafe { ar_presentation_generators(ptr::null()) }, 0);
}

#[test]
fn budget_exhaustion_is_unknown() {
    let p = parse(P2);
    let mut a = ArAnswer::Yes;
    let s = unsafe {
        ar_decide(
            p,
            ArQueryKind::Equal,
            ArMode::Prefix,
            c("a a b").as_ptr(),
            c("b a a a a").as_ptr(),
            1,
            0,
            &mut a,
            ptr::null_mut(),
        )
    };
    assert_eq!((s, a), (ArStatus::Ok, ArAnswer::Unknown));
    unsafe { ar_presentation_free(p) };
}
