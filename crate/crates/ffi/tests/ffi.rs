use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use ssmi_core::fixtures::{CAR_RENTAL, EXTREME};
use ssmi_ffi::*;

fn c(text: &str) -> CString {
    CString::new(text).unwrap()
}

fn last_error() -> String {
    let ptr = ssmi_last_error();
    assert!(!ptr.is_null(), "expected an error message");
    unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string()
}

fn parse(source: &str) -> *mut SsmiModel {
    let mut model = ptr::null_mut();
    let status = unsafe { ssmi_model_parse(c(source).as_ptr(), &mut model) };
    assert_eq!(status, SsmiStatus::Ok);
    assert!(!model.is_null());
    model
}

fn eval(model: *const SsmiModel, name: &str) -> Result<f64, (SsmiStatus, String)> {
    let mut out = f64::NAN;
    match unsafe { ssmi_model_eval(model, c(name).as_ptr(), &mut out) } {
        SsmiStatus::Ok => Ok(out),
        status => Err((status, last_error())),
    }
}

#[test]
fn parse_eval_and_free() {
    let model = parse(CAR_RENTAL);
    unsafe {
        assert_eq!(ssmi_model_variable_count(model), 10);
        assert!((eval(model, "Rental_Cost").unwrap() - 786.72).abs() < 1e-9);
        assert_eq!(eval(model, "rental_cost").unwrap(), eval(model, "Rental_Cost").unwrap());
        assert_eq!(ssmi_model_set(model, c("Nb_Days").as_ptr(), 10.0), SsmiStatus::Ok);
        assert_eq!(ssmi_model_set(model, c("Total_Distance").as_ptr(), 900.0), SsmiStatus::Ok);
        assert_eq!(eval(model, "Rental_Cost").unwrap(), 580.0);
        ssmi_model_clear_overrides(model);
        assert!((eval(model, "Rental_Cost").unwrap() - 786.72).abs() < 1e-9);
        assert!(ssmi_last_error().is_null());
        ssmi_model_free(model);
        ssmi_model_free(ptr::null_mut());
    }
}

#[test]
fn error_codes() {
    let model = parse(CAR_RENTAL);
    unsafe {
        assert_eq!(eval(model, "Nope").unwrap_err().0, SsmiStatus::UnknownVariable);
        assert_eq!(
            ssmi_model_set(model, c("Rental_Cost").as_ptr(), 1.0),
            SsmiStatus::UnknownVariable
        );
        assert!(last_error().contains("cannot be overridden"));
        assert_eq!(ssmi_model_set(model, c("Nb_Days").as_ptr(), f64::INFINITY), SsmiStatus::ErrorValue);
        let mut out = 0.0;
        assert_eq!(ssmi_model_eval(model, ptr::null(), &mut out), SsmiStatus::NullArgument);
        assert_eq!(ssmi_model_eval(ptr::null(), c("A").as_ptr(), &mut out), SsmiStatus::NullArgument);
        let bad = [0xffu8, 0];
        assert_eq!(
            ssmi_model_eval(model, bad.as_ptr() as *const c_char, &mut out),
            SsmiStatus::InvalidUtf8
        );
        ssmi_model_free(model);
    }

    let division = parse("input Days = 0\noutput Rate = 1 / Days\n");
    assert_eq!(eval(division, "Rate"), Err((SsmiStatus::ErrorValue, "#DIV/0!".to_string())));
    unsafe { ssmi_model_free(division) };
}

#[test]
fn invalid_models_are_rejected() {
    let mut model = ptr::null_mut();
    let source = c("input Start = 1\nvar Left = Right + Start\nvar Right = Left * 2\noutput Total = Right\n");
    let status = unsafe { ssmi_model_parse(source.as_ptr(), &mut model) };
    assert_eq!(status, SsmiStatus::InvalidModel);
    assert!(model.is_null());
    assert!(last_error().contains("cycle [Left → Right → Left]"));
    assert_eq!(unsafe { ssmi_model_parse(ptr::null(), &mut model) }, SsmiStatus::NullArgument);
}

#[test]
fn check_counts() {
    let (mut errors, mut warnings) = (usize::MAX, usize::MAX);
    unsafe {
        assert_eq!(ssmi_check(c(EXTREME).as_ptr(), false, &mut errors, &mut warnings), SsmiStatus::Ok);
        assert_eq!((errors, warnings), (0, 3));
        assert_eq!(
            ssmi_check(c(EXTREME).as_ptr(), true, &mut errors, &mut warnings),
            SsmiStatus::InvalidModel
        );
        assert!(last_error().contains("golden-rule"));
        let q1 = c("input Days = 1 label \"Q1\"\noutput Total = Days\n");
        assert_eq!(ssmi_check(q1.as_ptr(), false, &mut errors, &mut warnings), SsmiStatus::InvalidModel);
        assert_eq!(errors, 1);
        assert!(last_error().contains("cell-reference-name"));
    }
}

#[test]
fn dot_and_verify() {
    let model = parse(CAR_RENTAL);
    unsafe {
        let mut dot: *mut c_char = ptr::null_mut();
        assert_eq!(ssmi_model_emit_dot(model, false, &mut dot), SsmiStatus::Ok);
        let text = CStr::from_ptr(dot).to_str().unwrap().to_string();
        ssmi_string_free(dot);
        assert!(text.starts_with("digraph FormulaDiagram {"));
        assert_eq!(text.matches(" -> ").count(), 10);

        let mut passed = 0;
        assert_eq!(ssmi_model_verify(model, 30, 4, &mut passed), SsmiStatus::Ok);
        assert_eq!(passed, 30);
        ssmi_model_free(model);
    }
}

#[test]
fn builds_workbooks() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("car.xlsx");
    let model = parse(CAR_RENTAL);
    let path_c = c(path.to_str().unwrap());
    unsafe {
        assert_eq!(ssmi_model_build_xlsx(model, path_c.as_ptr(), ptr::null()), SsmiStatus::Ok);
        let first = std::fs::read(&path).unwrap();
        assert_eq!(&first[..2], b"PK");
        assert_eq!(ssmi_model_build_xlsx(model, path_c.as_ptr(), c("€").as_ptr()), SsmiStatus::Ok);
        assert_ne!(std::fs::read(&path).unwrap(), first);
        let missing = c(dir.path().join("no/such/dir.xlsx").to_str().unwrap());
        assert_eq!(ssmi_model_build_xlsx(model, missing.as_ptr(), ptr::null()), SsmiStatus::Io);
        ssmi_model_free(model);
    }
}

#[test]
fn header_declares_the_interface() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/ssmi.h")).unwrap();
    for symbol in [
        "typedef struct SsmiModel SsmiModel;",
        "SSMI_STATUS_OK = 0",
        "SSMI_STATUS_PANIC = 8",
        "ssmi_model_parse(const char *source, struct SsmiModel **out)",
        "void ssmi_model_free(struct SsmiModel *model)",
        "ssmi_model_eval(const struct SsmiModel *model, const char *name, double *out)",
        "void ssmi_string_free(char *text)",
        "const char *ssmi_last_error(void)",
    ] {
        assert!(header.contains(symbol), "header lacks {symbol}");
    }
}

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "ssmi.h"

int main(int argc, char **argv) {
    SsmiModel *model = NULL;
    if (ssmi_model_parse(argv[1], &model) != SSMI_STATUS_OK) return 10;
    double cost = 0;
    if (ssmi_model_eval(model, "Rental_Cost", &cost) != SSMI_STATUS_OK) return 11;
    char *dot = NULL;
    if (ssmi_model_emit_dot(model, false, &dot) != SSMI_STATUS_OK) return 12;
    int dot_ok = strncmp(dot, "digraph", 7) == 0;
    ssmi_string_free(dot);
    if (ssmi_model_eval(model, "Missing", &cost) != SSMI_STATUS_UNKNOWN_VARIABLE) return 13;
    if (ssmi_last_error() == NULL) return 14;
    ssmi_model_eval(model, "Rental_Cost", &cost);
    ssmi_model_free(model);
    printf("%.2f %d\n", cost, dot_ok);
    return 0;
}
"#;

#[test]
fn c_program_links_against_the_static_library() {
    let lib = target_dir().join("libssmi_ffi.a");
    let compiler = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&compiler).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let source = dir.path().join("smoke.c");
    std::fs::write(&source, C_PROGRAM).unwrap();
    let exe = dir.path().join("smoke");
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new(&compiler)
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&source)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).arg(CAR_RENTAL).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "786.72 1\n");
}
