use std::cmp::Ordering;

use super::{ErrorCode, Value};
use crate::formula::{BinaryOperator, Expression, Function};
use crate::names::NameMap;

/// Variable bindings visible to a formula.
#[derive(Debug, Clone, Default)]
pub struct Environment {
    bindings: NameMap<Value>,
}

impl Environment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, name: impl Into<String>, value: Value) {
        self.bindings.insert(name, value);
    }

    pub fn get(&self, name: &str) -> Option<Value> {
        self.bindings.get(name).copied()
    }
}

impl<K: Into<String>> FromIterator<(K, Value)> for Environment {
    fn from_iter<I: IntoIterator<Item = (K, Value)>>(iter: I) -> Self {
        Self {
            bindings: iter.into_iter().collect(),
        }
    }
}

/// Evaluates `expr` against `env`. Never fails: problems become error values.
pub fn eval_expression(expr: &Expression, env: &Environment) -> Value {
    eval_with(expr, &|name| env.get(name).unwrap_or(Value::Error(ErrorCode::Unresolved)))
}

/// Evaluates with an arbitrary resolver for variable names. Both the model
/// evaluator and the cell-grid evaluator go through here, so they share
/// one definition of every operator.
pub(crate) fn eval_with(expr: &Expression, resolve: &dyn Fn(&str) -> Value) -> Value {
    match expr {
        Expression::Number(v) => finite(*v),
        Expression::Variable(name) => resolve(name),
        Expression::Negate(inner) => match eval_with(inner, resolve).coerce() {
            Ok(v) => finite(-v),
            Err(code) => Value::Error(code),
        },
        Expression::Binary { op, left, right } => {
            let l = eval_with(left, resolve);
            let r = eval_with(right, resolve);
            binary(*op, l, r)
        }
        Expression::Call {
            function: Function::If,
            args,
        } => {
            let condition = match eval_with(&args[0], resolve) {
                Value::Boolean(b) => b,
                Value::Number(n) => n != 0.0,
                err @ Value::Error(_) => return err,
            };
            let branch = if condition { &args[1] } else { &args[2] };
            eval_with(branch, resolve)
        }
        Expression::Call {
            function: Function::Round,
            args,
        } => {
            let value = eval_with(&args[0], resolve).coerce();
            let digits = eval_with(&args[1], resolve).coerce();
            match (value, digits) {
                (Err(code), _) | (_, Err(code)) => Value::Error(code),
                (Ok(x), Ok(d)) => round(x, d),
            }
        }
        Expression::Call { function, args } => aggregate(*function, args, resolve),
    }
}

fn finite(v: f64) -> Value {
    if v.is_finite() {
        Value::Number(v)
    } else {
        Value::Error(ErrorCode::BadArg)
    }
}

fn binary(op: BinaryOperator, l: Value, r: Value) -> Value {
    if let Value::Error(code) = l {
        return Value::Error(code);
    }
    if let Value::Error(code) = r {
        return Value::Error(code);
    }
    if op.is_comparison() {
        let ordering = compare(l, r);
        let result = match op {
            BinaryOperator::Gt => ordering == Ordering::Greater,
            BinaryOperator::Lt => ordering == Ordering::Less,
            BinaryOperator::Ge => ordering != Ordering::Less,
            BinaryOperator::Le => ordering != Ordering::Greater,
            BinaryOperator::Eq => ordering == Ordering::Equal,
            _ => ordering != Ordering::Equal,
        };
        return Value::Boolean(result);
    }
    let (Ok(a), Ok(b)) = (l.coerce(), r.coerce()) else {
        unreachable!("errors handled above");
    };
    match op {
        BinaryOperator::Add => finite(a + b),
        BinaryOperator::Sub => finite(a - b),
        BinaryOperator::Mul => finite(a * b),
        BinaryOperator::Div if b == 0.0 => Value::Error(ErrorCode::DivZero),
        BinaryOperator::Div => finite(a / b),
        BinaryOperator::Pow if a == 0.0 && b == 0.0 => Value::Error(ErrorCode::BadArg),
        BinaryOperator::Pow if a == 0.0 && b < 0.0 => Value::Error(ErrorCode::DivZero),
        BinaryOperator::Pow => finite(a.powf(b)),
        _ => unreachable!("comparisons handled above"),
    }
}

/// Spreadsheet ordering: every number sorts below every boolean, and
/// FALSE below TRUE.
fn compare(l: Value, r: Value) -> Ordering {
    match (l, r) {
        (Value::Number(a), Value::Number(b)) => a.partial_cmp(&b).unwrap_or(Ordering::Equal),
        (Value::Boolean(a), Value::Boolean(b)) => a.cmp(&b),
        (Value::Number(_), Value::Boolean(_)) => Ordering::Less,
        (Value::Boolean(_), Value::Number(_)) => Ordering::Greater,
        _ => Ordering::Equal,
    }
}

/// MIN, MAX and SUM. As in spreadsheets, a boolean passed directly counts
/// as 1 or 0, while a boolean reached through a reference is skipped. An
/// aggregate over nothing is 0.
fn aggregate(function: Function, args: &[Expression], resolve: &dyn Fn(&str) -> Value) -> Value {
    let mut numbers = Vec::with_capacity(args.len());
    for arg in args {
        let value = eval_with(arg, resolve);
        match (arg, value) {
            (_, Value::Error(code)) => return Value::Error(code),
            (Expression::Variable(_), Value::Boolean(_)) => {}
            (_, v) => numbers.push(v.coerce().expect("not an error")),
        }
    }
    if numbers.is_empty() {
        return Value::Number(0.0);
    }
    let result = match function {
        Function::Sum => numbers.iter().sum(),
        Function::Min => numbers.iter().copied().fold(f64::INFINITY, f64::min),
        Function::Max => numbers.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        _ => unreachable!("not an aggregate"),
    };
    finite(result)
}

/// Half away from zero; `digits` is truncated toward zero and may be
/// negative to round to tens, hundreds and so on.
fn round(x: f64, digits: f64) -> Value {
    let digits = digits.trunc();
    if digits.abs() > 15.0 {
        return if digits > 0.0 { finite(x) } else { Value::Number(0.0) };
    }
    let factor = 10f64.powi(digits.abs() as i32);
    if digits >= 0.0 {
        finite((x * factor).round() / factor)
    } else {
        finite((x / factor).round() * factor)
    }
}
