use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use railcount_ffi::*;

fn last_error() -> String {
    let p = rc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn function_classification() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(rc_function_new([1u32, 0, 3, 2].as_ptr(), 4, &mut f), RcStatus::Ok);
        let mut class = RcClass::Neither;
        assert_eq!(rc_function_classify(f, &mut class), RcStatus::Ok);
        assert_eq!(class, RcClass::EvenBijection);
        rc_function_free(f);

        assert_eq!(rc_function_new([0u32, 2, 1].as_ptr(), 3, &mut f), RcStatus::Ok);
        rc_function_classify(f, &mut class);
        assert_eq!(class, RcClass::OddBijection);
        rc_function_free(f);

        assert_eq!(rc_function_new([0u32, 0, 2].as_ptr(), 3, &mut f), RcStatus::Ok);
        let (mut r, mut image) = (0, 0);
        assert_eq!(rc_function_ramification(f, &mut r, &mut image), RcStatus::Ok);
        assert_eq!((r, image), (1, 2));
        rc_function_classify(f, &mut class);
        assert_eq!(class, RcClass::QuasiBijection);
        rc_function_free(f);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(rc_function_new([5u32].as_ptr(), 1, &mut f), RcStatus::InvalidArgument);
        assert!(f.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(rc_function_new(ptr::null(), 0, &mut f), RcStatus::NullPointer);

        let mut c = ptr::null_mut();
        let bad = CString::new("{\"n\": 1}").unwrap();
        assert_eq!(rc_circuit_from_json(bad.as_ptr(), &mut c), RcStatus::Parse);
        assert_eq!(rc_circuit_from_json(ptr::null(), &mut c), RcStatus::NullPointer);
        rc_circuit_free(ptr::null_mut());
        rc_string_free(ptr::null_mut());
    }
}

#[test]
fn circuit_round_trip_and_eval() {
    let json = CString::new(r#"{"n":2,"gates":[{"s":0,"i":0,"j":0,"table":[1,0]}]}"#).unwrap();
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(rc_circuit_from_json(json.as_ptr(), &mut c), RcStatus::Ok);
        assert_eq!(rc_circuit_wires(c), 2);
        let mut y = 0;
        assert_eq!(rc_circuit_eval(c, 0b00, &mut y), RcStatus::Ok);
        assert_eq!(y, 0b10);
        assert_eq!(rc_circuit_eval(c, 9, &mut y), RcStatus::InvalidArgument);
        let (mut k, mut w) = (0, 0);
        assert_eq!(rc_circuit_counter_value(c, &mut k, &mut w), RcStatus::Ok);
        assert_eq!(k, 2);
        let mut text = ptr::null_mut();
        assert_eq!(rc_circuit_to_json(c, &mut text), RcStatus::Ok);
        let emitted = CStr::from_ptr(text).to_str().unwrap().to_owned();
        rc_string_free(text);
        rc_circuit_free(c);

        let again = CString::new(emitted.clone()).unwrap();
        assert_eq!(rc_circuit_from_json(again.as_ptr(), &mut c), RcStatus::Ok);
        rc_circuit_to_json(c, &mut text);
        assert_eq!(CStr::from_ptr(text).to_str().unwrap(), emitted);
        rc_string_free(text);
        rc_circuit_free(c);
    }
}

#[test]
fn zigzag_systems() {
    unsafe {
        let mut sys = ptr::null_mut();
        assert_eq!(rc_exemplar_zigzag(4, false, &mut sys), RcStatus::Ok);
        let mut c = ptr::null_mut();
        assert_eq!(rc_system_compile(sys, &mut c), RcStatus::Ok);
        let (mut k, mut w) = (0, 0);
        rc_circuit_counter_value(c, &mut k, &mut w);
        assert_eq!(k, 9);
        rc_circuit_free(c);

        let mut text = ptr::null_mut();
        assert_eq!(rc_system_to_json(sys, &mut text), RcStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(rc_system_from_json(text, &mut back), RcStatus::Ok);
        rc_string_free(text);
        rc_system_free(back);
        rc_system_free(sys);

        assert_eq!(rc_exemplar_zigzag(4, true, &mut sys), RcStatus::Ok);
        assert_eq!(rc_system_compile(sys, &mut c), RcStatus::CheckFailed);
        assert!(last_error().contains("z_0"));
        rc_system_free(sys);

        assert_eq!(rc_exemplar_zigzag(1, false, &mut sys), RcStatus::InvalidArgument);
    }
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(rc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/railcount.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["rc_last_error", "rc_system_compile", "rc_circuit_counter_value", "RC_STATUS_CHECK_FAILED"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let dir = std::env::temp_dir().join(format!("railcount-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use.c");
    std::fs::write(
        &src,
        "#include \"railcount.h\"\nint main(void) { RcCircuit *c = 0; size_t k; uint32_t w;\n\
         return rc_circuit_counter_value(c, &k, &w) == RC_STATUS_OK; }\n",
    )
    .unwrap();
    let Ok(out) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header.parent().unwrap())
        .arg(&src)
        .output()
    else {
        eprintln!("no C compiler available; skipped");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
