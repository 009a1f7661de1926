//! C interface to the ssmi model compiler.
//!
//! Models live behind an opaque `SsmiModel` handle. Every fallible call
//! returns an `SsmiStatus`; on failure `ssmi_last_error` describes it.
//! Strings returned to the caller must be released with `ssmi_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ssmi_core::diagram::emit_dot;
use ssmi_core::eval::{eval_model, random_overrides, verify_equivalence, Overrides, Value};
use ssmi_core::layout::plan_workbook;
use ssmi_core::model::{golden_rule_lint, parse_model, parse_model_unchecked, validate, Model};
use ssmi_core::pipeline::{build_workbook, BuildError};
use ssmi_core::xlsx::EmitOptions;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsmiStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidModel = 3,
    UnknownVariable = 4,
    ErrorValue = 5,
    VerifyFailed = 6,
    Io = 7,
    Panic = 8,
}

/// A parsed, validated model plus the overrides set on it.
pub struct SsmiModel {
    model: Model,
    overrides: Overrides,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

type Failure = (SsmiStatus, String);

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SsmiStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SsmiStatus::Ok,
        Ok(Err((status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            SsmiStatus::Panic
        }
    }
}

unsafe fn text<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err((SsmiStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| (SsmiStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a>(model: *const SsmiModel) -> Result<&'a SsmiModel, Failure> {
    model
        .as_ref()
        .ok_or_else(|| (SsmiStatus::NullArgument, "model is null".to_string()))
}

unsafe fn handle_mut<'a>(model: *mut SsmiModel) -> Result<&'a mut SsmiModel, Failure> {
    model
        .as_mut()
        .ok_or_else(|| (SsmiStatus::NullArgument, "model is null".to_string()))
}

fn out_ptr<T>(ptr: *mut T, what: &str) -> Result<(), Failure> {
    if ptr.is_null() {
        Err((SsmiStatus::NullArgument, format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// Parses and validates `source`. On success `*out` receives a handle to
/// release with `ssmi_model_free`.
///
/// # Safety
/// `source` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ssmi_model_parse(source: *const c_char, out: *mut *mut SsmiModel) -> SsmiStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = std::ptr::null_mut();
        let source = text(source, "source")?;
        let parsed = parse_model(source).map_err(|diagnostics| {
            let errors: Vec<String> = diagnostics.iter().filter(|d| d.is_error()).map(ToString::to_string).collect();
            (SsmiStatus::InvalidModel, errors.join("\n"))
        })?;
        *out = Box::into_raw(Box::new(SsmiModel {
            model: parsed.model,
            overrides: Overrides::new(),
        }));
        Ok(())
    })
}

/// Releases a model handle. Null is ignored.
///
/// # Safety
/// `model` must come from `ssmi_model_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ssmi_model_free(model: *mut SsmiModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Counts the errors and warnings `check` would report for `source`,
/// including golden-rule warnings. Returns `INVALID_MODEL` when there are
/// errors, or warnings under `strict`.
///
/// # Safety
/// `source` must be a NUL-terminated string; `errors` and `warnings` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn ssmi_check(
    source: *const c_char,
    strict: bool,
    errors: *mut usize,
    warnings: *mut usize,
) -> SsmiStatus {
    guard(|| {
        out_ptr(errors, "errors")?;
        out_ptr(warnings, "warnings")?;
        let source = text(source, "source")?;
        let (model, mut diagnostics) = parse_model_unchecked(source);
        diagnostics.extend(validate(&model));
        diagnostics.extend(golden_rule_lint(&model));
        let error_count = diagnostics.iter().filter(|d| d.is_error()).count();
        *errors = error_count;
        *warnings = diagnostics.len() - error_count;
        if error_count > 0 || (strict && !diagnostics.is_empty()) {
            let lines: Vec<String> = diagnostics.iter().map(ToString::to_string).collect();
            return Err((SsmiStatus::InvalidModel, lines.join("\n")));
        }
        Ok(())
    })
}

/// Number of declared variables; 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ssmi_model_variable_count(model: *const SsmiModel) -> usize {
    model.as_ref().map_or(0, |m| m.model.declarations.len())
}

/// Overrides a parameter or input for later `ssmi_model_eval` calls.
///
/// # Safety
/// `model` must be a live handle; `name` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ssmi_model_set(model: *mut SsmiModel, name: *const c_char, value: f64) -> SsmiStatus {
    guard(|| {
        let handle = handle_mut(model)?;
        let name = text(name, "name")?;
        let decl = handle
            .model
            .get(name)
            .ok_or_else(|| (SsmiStatus::UnknownVariable, format!("no variable named {name}")))?;
        if decl.kind.is_formula_bearing() {
            return Err((
                SsmiStatus::UnknownVariable,
                format!("{} is defined by a formula and cannot be overridden", decl.name),
            ));
        }
        if !value.is_finite() {
            return Err((SsmiStatus::ErrorValue, format!("override for {name} is not finite")));
        }
        let canonical = decl.name.clone();
        handle.overrides.insert(canonical, value);
        Ok(())
    })
}

/// Drops every override set with `ssmi_model_set`.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ssmi_model_clear_overrides(model: *mut SsmiModel) {
    if let Some(handle) = model.as_mut() {
        handle.overrides = Overrides::new();
    }
}

/// Evaluates the model and stores the value of `name` in `*out`. Booleans
/// read as 1 or 0; an error value returns `ERROR_VALUE` with the
/// spreadsheet error text as the last error.
///
/// # Safety
/// `model` must be a live handle; `name` a NUL-terminated string; `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ssmi_model_eval(model: *const SsmiModel, name: *const c_char, out: *mut f64) -> SsmiStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let handle = handle(model)?;
        let name = text(name, "name")?;
        let values =
            eval_model(&handle.model, &handle.overrides).map_err(|e| (SsmiStatus::InvalidModel, e.to_string()))?;
        match values.get(name) {
            None => Err((SsmiStatus::UnknownVariable, format!("no variable named {name}"))),
            Some(Value::Number(v)) => {
                *out = v;
                Ok(())
            }
            Some(Value::Boolean(b)) => {
                *out = f64::from(u8::from(b));
                Ok(())
            }
            Some(Value::Error(code)) => Err((SsmiStatus::ErrorValue, code.spreadsheet_text().to_string())),
        }
    })
}

/// Builds, verifies and writes the workbook to `path`. `currency_symbol`
/// may be null for the default `$`.
///
/// # Safety
/// `model` must be a live handle; `path` and a non-null `currency_symbol`
/// NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn ssmi_model_build_xlsx(
    model: *const SsmiModel,
    path: *const c_char,
    currency_symbol: *const c_char,
) -> SsmiStatus {
    guard(|| {
        let handle = handle(model)?;
        let path = text(path, "path")?;
        let mut options = EmitOptions::default();
        if !currency_symbol.is_null() {
            options.currency_symbol = text(currency_symbol, "currency_symbol")?.to_string();
        }
        let build = build_workbook(&handle.model, &options).map_err(|e| match e {
            BuildError::Verify { .. } | BuildError::Grid(_) => (SsmiStatus::VerifyFailed, e.to_string()),
            BuildError::Plan(_) => (SsmiStatus::InvalidModel, e.to_string()),
            BuildError::Emit(_) => (SsmiStatus::Io, e.to_string()),
        })?;
        std::fs::write(Path::new(path), build.bytes).map_err(|e| (SsmiStatus::Io, format!("{path}: {e}")))
    })
}

/// Renders the formula diagram as DOT into a new string at `*out`.
///
/// # Safety
/// `model` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ssmi_model_emit_dot(
    model: *const SsmiModel,
    split_submodels: bool,
    out: *mut *mut c_char,
) -> SsmiStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = std::ptr::null_mut();
        let handle = handle(model)?;
        let dot = emit_dot(&handle.model, split_submodels);
        *out = CString::new(dot).expect("DOT has no NUL").into_raw();
        Ok(())
    })
}

/// Compares model and workbook evaluation over `trials` seeded random
/// input vectors; `*passed` receives the number that agreed.
///
/// # Safety
/// `model` must be a live handle; `passed` writable.
#[no_mangle]
pub unsafe extern "C" fn ssmi_model_verify(
    model: *const SsmiModel,
    trials: usize,
    seed: u64,
    passed: *mut usize,
) -> SsmiStatus {
    guard(|| {
        out_ptr(passed, "passed")?;
        let handle = handle(model)?;
        let plan = plan_workbook(&handle.model).map_err(|e| (SsmiStatus::InvalidModel, e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ok = 0;
        let mut first_failure = None;
        for _ in 0..trials {
            let report = verify_equivalence(&handle.model, &plan, &random_overrides(&handle.model, &mut rng));
            if report.passed() {
                ok += 1;
            } else if first_failure.is_none() {
                first_failure = Some(report.to_string());
            }
        }
        *passed = ok;
        match first_failure {
            None => Ok(()),
            Some(report) => Err((SsmiStatus::VerifyFailed, report)),
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `text` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ssmi_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn ssmi_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}
