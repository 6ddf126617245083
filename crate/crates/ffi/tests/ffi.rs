use std::ffi::{c_char, CStr, CString};
use std::ptr;

use qracah_td_ffi::*;
use serde_json::{json, Value};

const D1: &str = r#"{"d":1,"thetas":["13/2","7/2"],"theta_stars":["9/2","3"],"zetas":["1","-225/8"]}"#;
const D2: &str = r#"{"d":2,"q":"2","thetas":["49/4","4","19/4"],"theta_stars":["33/4","3","9/2"],"zetas":["1","-1521/16","1265625/256"]}"#;
const SUM_ZERO: &str = r#"{"d":1,"thetas":["13/2","7/2"],"theta_stars":["9/2","3"],"zetas":["1","-9/2"]}"#;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

/// Takes ownership of a returned string.
unsafe fn take(p: *mut c_char) -> Value {
    let v = serde_json::from_str(CStr::from_ptr(p).to_str().unwrap()).unwrap();
    qrtd_string_free(p);
    v
}

fn last_reason() -> String {
    unsafe { CStr::from_ptr(qrtd_last_error_reason()).to_string_lossy().into_owned() }
}

#[test]
fn construct_and_query() {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(qrtd_construct(c(D2).as_ptr(), ptr::null(), &mut r), QrtdStatus::Ok);
        let (mut dim, mut d) = (0usize, 0usize);
        assert_eq!(qrtd_realization_dim(r, &mut dim), QrtdStatus::Ok);
        assert_eq!(qrtd_realization_diameter(r, &mut d), QrtdStatus::Ok);
        assert_eq!((dim, d), (4, 2));
        let mut shape = [0usize; 3];
        assert_eq!(qrtd_realization_shape(r, shape.as_mut_ptr(), 3), QrtdStatus::Ok);
        assert_eq!(shape, [1, 2, 1]);
        assert_eq!(qrtd_realization_shape(r, shape.as_mut_ptr(), 2), QrtdStatus::InvalidInput);
        assert_eq!(last_reason(), "dimension-mismatch");
        let mut ok = 0;
        assert_eq!(qrtd_realization_shape_ok(r, &mut ok), QrtdStatus::Ok);
        assert_eq!(ok, 1);

        let mut s = ptr::null_mut();
        assert_eq!(qrtd_realization_parameter_array(r, &mut s), QrtdStatus::Ok);
        let pa = take(s);
        assert_eq!(pa["zetas"], json!(["1", "-1521/16", "1265625/256"]));
        assert_eq!(qrtd_realization_json(r, &mut s), QrtdStatus::Ok);
        let v = take(s);
        assert_eq!(v["backend"], json!("exact"));
        assert_eq!(v["certificate"]["irreducibility"]["eigenspace_dim"], json!(1));
        qrtd_realization_free(r);
    }
}

#[test]
fn complex_mode() {
    let opts = QrtdOptions { mode: QrtdMode::Complex, precision_bits: 128, tolerance: 0.0, max_d: 0, jobs: 0 };
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(qrtd_construct(c(D1).as_ptr(), &opts, &mut r), QrtdStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(qrtd_realization_json(r, &mut s), QrtdStatus::Ok);
        assert_eq!(take(s)["backend"], json!("complex"));
        qrtd_realization_free(r);
    }
}

#[test]
fn refusal_and_errors() {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(qrtd_construct(c(SUM_ZERO).as_ptr(), ptr::null(), &mut r), QrtdStatus::Refused);
        assert!(r.is_null());
        assert_eq!(last_reason(), "condition-ii-sum-zero");
        let detail: Value = serde_json::from_str(CStr::from_ptr(qrtd_last_error()).to_str().unwrap()).unwrap();
        assert_eq!(detail["certificate"]["sum"], json!("0"));

        assert_eq!(qrtd_construct(c("{oops").as_ptr(), ptr::null(), &mut r), QrtdStatus::InvalidInput);
        assert_eq!(last_reason(), "parse-error");
        assert_eq!(qrtd_construct(ptr::null(), ptr::null(), &mut r), QrtdStatus::NullPointer);
        assert_eq!(qrtd_construct(c(D1).as_ptr(), ptr::null(), ptr::null_mut()), QrtdStatus::NullPointer);
        let mut dim = 0;
        assert_eq!(qrtd_realization_dim(ptr::null(), &mut dim), QrtdStatus::NullPointer);
        qrtd_realization_free(ptr::null_mut());
        qrtd_string_free(ptr::null_mut());
    }
}

#[test]
fn run_commands() {
    let module = r#"{"q":2,"alphas":[1],"params":{"a":0,"b":1,"c":3,"a*":0,"b*":1,"c*":2}}"#;
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(qrtd_run(c("drinfeld").as_ptr(), c(module).as_ptr(), ptr::null(), &mut s), QrtdStatus::Ok);
        assert_eq!(take(s)["P"], json!(["11/2", "1"]));
        assert_eq!(qrtd_run(c("roundtrip").as_ptr(), c(D2).as_ptr(), ptr::null(), &mut s), QrtdStatus::Ok);
        assert_eq!(take(s)["equal"], json!(true));
        assert_eq!(qrtd_run(c("relations").as_ptr(), c(module).as_ptr(), ptr::null(), &mut s), QrtdStatus::Ok);
        assert_eq!(take(s)["passed"], json!(true));
        assert_eq!(qrtd_run(c("nope").as_ptr(), c(module).as_ptr(), ptr::null(), &mut s), QrtdStatus::InvalidInput);
        assert_eq!(qrtd_run(c("construct").as_ptr(), c(SUM_ZERO).as_ptr(), ptr::null(), &mut s), QrtdStatus::Refused);
    }
}

#[test]
fn errors_are_per_thread() {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(qrtd_construct(c(SUM_ZERO).as_ptr(), ptr::null(), &mut r), QrtdStatus::Refused);
    }
    std::thread::spawn(|| assert!(qrtd_last_error().is_null())).join().unwrap();
    assert_eq!(last_reason(), "condition-ii-sum-zero");
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(qrtd_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_exports_and_compiles() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let header = std::fs::read_to_string(dir.join("qracah_td.h")).unwrap();
    for f in [
        "qrtd_run",
        "qrtd_construct",
        "qrtd_realization_dim",
        "qrtd_realization_diameter",
        "qrtd_realization_shape",
        "qrtd_realization_shape_ok",
        "qrtd_realization_json",
        "qrtd_realization_parameter_array",
        "qrtd_realization_free",
        "qrtd_string_free",
        "qrtd_last_error",
        "qrtd_last_error_reason",
        "qrtd_version",
    ] {
        let declared = header.contains(&format!(" {f}(")) || header.contains(&format!("*{f}("));
        assert!(declared, "{f} missing from header");
    }
    assert!(header.contains("typedef struct QrtdRealization QrtdRealization;"));
    let out = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", "-"])
        .arg(format!("-I{}", dir.display()))
        .stdin(std::process::Stdio::piped())
        .spawn()
        .and_then(|mut child| {
            use std::io::Write;
            child
                .stdin
                .take()
                .unwrap()
                .write_all(b"#include \"qracah_td.h\"\nint main(void) { return QRTD_STATUS_OK; }\n")?;
            child.wait()
        })
        .expect("a C compiler on PATH");
    assert!(out.success());
}
