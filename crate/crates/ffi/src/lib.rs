//! C ABI over `railcount`.
//!
//! Objects are opaque heap handles created by `rc_*_new`/`rc_*_from_*` and
//! released with the matching `rc_*_free`. Every fallible call returns an
//! [`RcStatus`]; on failure [`rc_last_error`] describes the problem for the
//! calling thread. Strings returned through out-parameters are owned by the
//! caller and must be released with [`rc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use railcount::atam::{check_layer, compile_to_railway, LayerSystem};
use railcount::exemplars::{build_zigzag, Interpretation};
use railcount::{io, FiniteFunction, FunctionClass, Parity, RailwayCircuit};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    /// The input was well formed but a check on it failed.
    CheckFailed = 4,
    Panic = 5,
}

/// Classification of a finite function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcClass {
    EvenBijection = 0,
    OddBijection = 1,
    QuasiBijection = 2,
    Neither = 3,
}

pub struct RcFunction(FiniteFunction);
pub struct RcCircuit(RailwayCircuit);
pub struct RcSystem(LayerSystem);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl ToString) {
    let text = CString::new(msg.to_string().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn fail(status: RcStatus, msg: impl ToString) -> RcStatus {
    set_error(msg);
    status
}

/// Runs `body`, turning panics into [`RcStatus::Panic`].
fn guard(body: impl FnOnce() -> RcStatus) -> RcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(s) => s,
        Err(_) => fail(RcStatus::Panic, "internal panic"),
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, RcStatus> {
    if s.is_null() {
        return Err(fail(RcStatus::NullPointer, "string argument is null"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(RcStatus::InvalidArgument, "string is not UTF-8"))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> RcStatus {
    *out = Box::into_raw(Box::new(value));
    RcStatus::Ok
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

macro_rules! non_null {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            return fail(RcStatus::NullPointer, "pointer argument is null");
        }
    };
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn rc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn rc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the function `i -> table[i]` on `{0, ..., len - 1}`.
///
/// # Safety
/// `table` must point to `len` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rc_function_new(table: *const u32, len: usize, out: *mut *mut RcFunction) -> RcStatus {
    guard(|| {
        non_null!(table, out);
        let values = std::slice::from_raw_parts(table, len).to_vec();
        match FiniteFunction::new(values) {
            Ok(f) => put(out, RcFunction(f)),
            Err(e) => fail(RcStatus::InvalidArgument, e),
        }
    })
}

/// # Safety
/// `f` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rc_function_free(f: *mut RcFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rc_function_classify(f: *const RcFunction, out: *mut RcClass) -> RcStatus {
    guard(|| {
        non_null!(f, out);
        *out = match (*f).0.classify() {
            FunctionClass::Bijection(Parity::Even) => RcClass::EvenBijection,
            FunctionClass::Bijection(Parity::Odd) => RcClass::OddBijection,
            FunctionClass::QuasiBijection => RcClass::QuasiBijection,
            FunctionClass::Neither => RcClass::Neither,
        };
        RcStatus::Ok
    })
}

/// Ramification degree and image size.
///
/// # Safety
/// `f` must be a live handle; the out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn rc_function_ramification(
    f: *const RcFunction,
    degree: *mut usize,
    image: *mut usize,
) -> RcStatus {
    guard(|| {
        non_null!(f, degree, image);
        *degree = (*f).0.ramification_degree();
        *image = (*f).0.image_size();
        RcStatus::Ok
    })
}

/// Parses a circuit from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rc_circuit_from_json(json: *const c_char, out: *mut *mut RcCircuit) -> RcStatus {
    guard(|| {
        non_null!(out);
        let s = match text(json) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match io::parse_circuit(s) {
            Ok(c) => put(out, RcCircuit(c)),
            Err(e) => fail(RcStatus::Parse, e),
        }
    })
}

/// # Safety
/// `c` must be a live handle and `out` writable. Free the string with
/// [`rc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn rc_circuit_to_json(c: *const RcCircuit, out: *mut *mut c_char) -> RcStatus {
    guard(|| {
        non_null!(c, out);
        *out = owned_string(io::emit_circuit(&(*c).0));
        RcStatus::Ok
    })
}

/// # Safety
/// `c` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rc_circuit_free(c: *mut RcCircuit) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Number of wires.
///
/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rc_circuit_wires(c: *const RcCircuit) -> usize {
    if c.is_null() {
        return 0;
    }
    (*c).0.n()
}

/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rc_circuit_eval(c: *const RcCircuit, x: u32, out: *mut u32) -> RcStatus {
    guard(|| {
        non_null!(c, out);
        match (*c).0.eval(x) {
            Ok(y) => {
                *out = y;
                RcStatus::Ok
            }
            Err(e) => fail(RcStatus::InvalidArgument, e),
        }
    })
}

/// Largest number of distinct states on any trace, with an input reaching it.
///
/// # Safety
/// `c` must be a live handle; the out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn rc_circuit_counter_value(
    c: *const RcCircuit,
    value: *mut usize,
    witness: *mut u32,
) -> RcStatus {
    guard(|| {
        non_null!(c, value, witness);
        let r = (*c).0.counter_value();
        *value = r.counter_value;
        *witness = r.witness_input;
        RcStatus::Ok
    })
}

/// Parses a tile system file with its curve and vector.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rc_system_from_json(json: *const c_char, out: *mut *mut RcSystem) -> RcStatus {
    guard(|| {
        non_null!(out);
        let s = match text(json) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match io::parse_system(s) {
            Ok(sys) => put(out, RcSystem(sys)),
            Err(e) => fail(RcStatus::Parse, e),
        }
    })
}

/// The zig-zag counter system on `n` rows; `eps_top` selects the reading
/// where the carry-in glue carries no bit.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rc_exemplar_zigzag(n: usize, eps_top: bool, out: *mut *mut RcSystem) -> RcStatus {
    guard(|| {
        non_null!(out);
        let interp = if eps_top { Interpretation::EpsTop } else { Interpretation::AllBits };
        match build_zigzag(n, interp) {
            Ok(sys) => put(out, RcSystem(sys)),
            Err(e) => fail(RcStatus::InvalidArgument, e),
        }
    })
}

/// # Safety
/// `s` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rc_system_free(s: *mut RcSystem) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live handle and `out` writable. Free the string with
/// [`rc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn rc_system_to_json(s: *const RcSystem, out: *mut *mut c_char) -> RcStatus {
    guard(|| {
        non_null!(s, out);
        *out = owned_string(io::emit_system(&(*s).0));
        RcStatus::Ok
    })
}

/// Checks the layer and compiles it to a circuit. Returns
/// [`RcStatus::CheckFailed`] when the layer is not a clean gate layer.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rc_system_compile(s: *const RcSystem, out: *mut *mut RcCircuit) -> RcStatus {
    guard(|| {
        non_null!(s, out);
        let compiled = check_layer(&(*s).0).and_then(|r| compile_to_railway(&r));
        match compiled {
            Ok(c) => put(out, RcCircuit(c)),
            Err(e) => fail(RcStatus::CheckFailed, e),
        }
    })
}
