use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ErrorCode {
    DivZero,
    /// An operand or function argument outside the domain, or a result that
    /// is not a finite number.
    BadArg,
    Unresolved,
}

impl ErrorCode {
    /// The spreadsheet error literal shown for this code.
    pub fn spreadsheet_text(self) -> &'static str {
        match self {
            ErrorCode::DivZero => "#DIV/0!",
            ErrorCode::BadArg => "#NUM!",
            ErrorCode::Unresolved => "#NAME?",
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.spreadsheet_text())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Number(f64),
    Boolean(bool),
    Error(ErrorCode),
}

impl Value {
    pub fn as_number(self) -> Option<f64> {
        match self {
            Value::Number(v) => Some(v),
            _ => None,
        }
    }

    /// Numeric view used by arithmetic: booleans count as 1 and 0.
    pub(crate) fn coerce(self) -> Result<f64, ErrorCode> {
        match self {
            Value::Number(v) => Ok(v),
            Value::Boolean(b) => Ok(if b { 1.0 } else { 0.0 }),
            Value::Error(code) => Err(code),
        }
    }

    /// Equal for booleans and errors, numbers within `relative` tolerance.
    pub fn approx_eq(self, other: Value, relative: f64) -> bool {
        match (self, other) {
            (Value::Number(a), Value::Number(b)) => {
                a == b || (a - b).abs() <= relative * a.abs().max(b.abs())
            }
            (a, b) => a == b,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(v) => f.write_str(&format_number(*v)),
            Value::Boolean(true) => f.write_str("TRUE"),
            Value::Boolean(false) => f.write_str("FALSE"),
            Value::Error(code) => write!(f, "{code}"),
        }
    }
}

/// Prints a number with at most ten decimals, dropping trailing zeros, so
/// binary noise such as `786.7200000000001` reads as `786.72`.
pub fn format_number(value: f64) -> String {
    let text = format!("{value:.10}");
    let text = text.trim_end_matches('0').trim_end_matches('.');
    if text == "-0" {
        "0".to_string()
    } else {
        text.to_string()
    }
}
