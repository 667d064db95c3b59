//! C interface to `modsm`.
//!
//! Modules and model sets are opaque handles owned by the caller and
//! released with the matching `_free` function. Every fallible call returns a
//! [`ModsmStatus`]; on failure [`modsm_last_error`] describes the error.
//! Strings returned through out-parameters are released with
//! [`modsm_string_free`], byte buffers with [`modsm_bytes_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use modsm::algebra::{compose, join};
use modsm::cli::model_lines;
use modsm::equivalence::{eva, modular_eq, Method};
use modsm::io::{decode_smodels, encode_smodels, parse_text, print_text};
use modsm::semantics::stable_models;
use modsm::{Error, Limits, Module, Strategy};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModsmStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    Format = 4,
    InvalidModule = 5,
    Composition = 6,
    CapExceeded = 7,
    Unsupported = 8,
    Mismatch = 9,
    Io = 10,
    Panic = 11,
    Other = 12,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModsmMethod {
    Direct = 0,
    Generator = 1,
}

/// An opaque module `⟨R, I, O, H⟩`.
pub struct ModsmModule(Module);

/// An opaque set of stable models, each rendered as `{a,b}`.
pub struct ModsmModelSet {
    lines: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ModsmStatus {
    match e {
        Error::Syntax { .. } | Error::Desugar(_) => ModsmStatus::Syntax,
        Error::Format { .. } => ModsmStatus::Format,
        Error::Stream { source, .. } => status_of(source),
        Error::InvalidModule(_) | Error::Signature(_) | Error::NameCollision(_) => ModsmStatus::InvalidModule,
        Error::Composition(_) => ModsmStatus::Composition,
        Error::CapExceeded { .. } => ModsmStatus::CapExceeded,
        Error::Unsupported(_) | Error::NonNormalRule(_) => ModsmStatus::Unsupported,
        Error::InputMismatch(_) | Error::InterfaceMismatch | Error::NonGroundInput => ModsmStatus::Mismatch,
        Error::Io(_) => ModsmStatus::Io,
        _ => ModsmStatus::Other,
    }
}

fn fail(status: ModsmStatus, msg: impl Into<String>) -> ModsmStatus {
    set_error(msg.into());
    status
}

fn guard(f: impl FnOnce() -> Result<(), ModsmStatus>) -> ModsmStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ModsmStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(ModsmStatus::Panic, msg)
        }
    }
}

fn lift<T>(r: modsm::Result<T>) -> Result<T, ModsmStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn module<'a>(p: *const ModsmModule) -> Result<&'a Module, ModsmStatus> {
    p.as_ref()
        .map(|m| &m.0)
        .ok_or_else(|| fail(ModsmStatus::NullArgument, "null module"))
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), ModsmStatus> {
    if out.is_null() {
        return Err(fail(ModsmStatus::NullArgument, "null output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn check_out<T>(out: *mut T) -> Result<(), ModsmStatus> {
    if out.is_null() {
        Err(fail(ModsmStatus::NullArgument, "null output pointer"))
    } else {
        Ok(())
    }
}

fn limits(max_atoms: usize) -> Limits {
    if max_atoms == 0 {
        Limits::default()
    } else {
        Limits::new(max_atoms)
    }
}

/// The message of the last failed call on this thread, or null. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn modsm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn modsm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a module in the text format.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn modsm_module_parse_text(src: *const c_char, out: *mut *mut ModsmModule) -> ModsmStatus {
    guard(|| {
        if src.is_null() {
            return Err(fail(ModsmStatus::NullArgument, "null source"));
        }
        let text = CStr::from_ptr(src)
            .to_str()
            .map_err(|e| fail(ModsmStatus::InvalidUtf8, e.to_string()))?;
        let m = lift(parse_text(text))?;
        store(out, ModsmModule(m))
    })
}

/// Decodes a module in the numeric format.
///
/// # Safety
/// `data` must point to `len` readable bytes and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn modsm_module_decode_smodels(
    data: *const u8,
    len: usize,
    out: *mut *mut ModsmModule,
) -> ModsmStatus {
    guard(|| {
        if data.is_null() && len > 0 {
            return Err(fail(ModsmStatus::NullArgument, "null data"));
        }
        let bytes = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(data, len)
        };
        let m = lift(decode_smodels(bytes))?;
        store(out, ModsmModule(m))
    })
}

/// # Safety
/// `m` must be a live module; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn modsm_module_print_text(m: *const ModsmModule, out: *mut *mut c_char) -> ModsmStatus {
    guard(|| {
        let m = module(m)?;
        check_out(out)?;
        let c = CString::new(print_text(m)).map_err(|e| fail(ModsmStatus::Other, e.to_string()))?;
        *out = c.into_raw();
        Ok(())
    })
}

/// # Safety
/// `m` must be a live module; `out` and `len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn modsm_module_encode_smodels(
    m: *const ModsmModule,
    out: *mut *mut u8,
    len: *mut usize,
) -> ModsmStatus {
    guard(|| {
        let m = module(m)?;
        check_out(out)?;
        check_out(len)?;
        let bytes = encode_smodels(m).into_boxed_slice();
        *len = bytes.len();
        *out = Box::into_raw(bytes).cast();
        Ok(())
    })
}

/// Number of rules, or 0 for null.
///
/// # Safety
/// `m` must be null or a live module.
#[no_mangle]
pub unsafe extern "C" fn modsm_module_rule_count(m: *const ModsmModule) -> usize {
    m.as_ref().map_or(0, |m| m.0.rules().len())
}

/// Sizes of the input, output and hidden signatures.
///
/// # Safety
/// `m` must be a live module; the out-pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn modsm_module_signature_sizes(
    m: *const ModsmModule,
    input: *mut usize,
    output: *mut usize,
    hidden: *mut usize,
) -> ModsmStatus {
    guard(|| {
        let m = module(m)?;
        for (p, n) in [
            (input, m.input().len()),
            (output, m.output().len()),
            (hidden, m.hidden().len()),
        ] {
            if let Some(p) = p.as_mut() {
                *p = n;
            }
        }
        Ok(())
    })
}

/// `a ⊕ b`.
///
/// # Safety
/// `a`, `b` must be live modules; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn modsm_compose(
    a: *const ModsmModule,
    b: *const ModsmModule,
    out: *mut *mut ModsmModule,
) -> ModsmStatus {
    guard(|| {
        let m = lift(compose(module(a)?, module(b)?))?;
        store(out, ModsmModule(m))
    })
}

/// `a ⊔ b`.
///
/// # Safety
/// `a`, `b` must be live modules; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn modsm_join(
    a: *const ModsmModule,
    b: *const ModsmModule,
    out: *mut *mut ModsmModule,
) -> ModsmStatus {
    guard(|| {
        let m = lift(join(module(a)?, module(b)?))?;
        store(out, ModsmModule(m))
    })
}

/// Stable models of `m`. `max_atoms` caps enumeration; 0 selects the
/// default cap.
///
/// # Safety
/// `m` must be a live module; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn modsm_stable_models(
    m: *const ModsmModule,
    max_atoms: usize,
    out: *mut *mut ModsmModelSet,
) -> ModsmStatus {
    guard(|| {
        let m = module(m)?;
        let models = lift(stable_models(m, Strategy::BruteForce, &limits(max_atoms)))?;
        let lines = model_lines(m, &models)
            .into_iter()
            .map(|l| CString::new(l).unwrap_or_default())
            .collect();
        store(out, ModsmModelSet { lines })
    })
}

/// # Safety
/// `s` must be null or a live model set.
#[no_mangle]
pub unsafe extern "C" fn modsm_model_set_len(s: *const ModsmModelSet) -> usize {
    s.as_ref().map_or(0, |s| s.lines.len())
}

/// The `index`-th model as `{a,b}`, or null when out of range. The string
/// is owned by the set.
///
/// # Safety
/// `s` must be null or a live model set.
#[no_mangle]
pub unsafe extern "C" fn modsm_model_set_get(s: *const ModsmModelSet, index: usize) -> *const c_char {
    s.as_ref()
        .and_then(|s| s.lines.get(index))
        .map_or(ptr::null(), |c| c.as_ptr())
}

/// Modular equivalence of `p` and `q`. `method` is a [`ModsmMethod`] value.
///
/// # Safety
/// `p`, `q` must be live modules; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn modsm_modular_eq(
    p: *const ModsmModule,
    q: *const ModsmModule,
    method: u32,
    max_atoms: usize,
    out: *mut bool,
) -> ModsmStatus {
    guard(|| {
        check_out(out)?;
        let method = match method {
            m if m == ModsmMethod::Direct as u32 => Method::Direct,
            m if m == ModsmMethod::Generator as u32 => Method::Generator,
            m => return Err(fail(ModsmStatus::Unsupported, format!("unknown method {m}"))),
        };
        *out = lift(modular_eq(module(p)?, module(q)?, method, &limits(max_atoms)))?;
        Ok(())
    })
}

/// Whether `m` has the EVA property.
///
/// # Safety
/// `m` must be a live module; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn modsm_eva(m: *const ModsmModule, max_atoms: usize, out: *mut bool) -> ModsmStatus {
    guard(|| {
        check_out(out)?;
        *out = lift(eva(module(m)?, &limits(max_atoms)))?;
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a module not yet freed.
#[no_mangle]
pub unsafe extern "C" fn modsm_module_free(m: *mut ModsmModule) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `s` must be null or a model set not yet freed.
#[no_mangle]
pub unsafe extern "C" fn modsm_model_set_free(s: *mut ModsmModelSet) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn modsm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `data`, `len` must come from [`modsm_module_encode_smodels`].
#[no_mangle]
pub unsafe extern "C" fn modsm_bytes_free(data: *mut u8, len: usize) {
    if !data.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(data, len)));
    }
}
