use thiserror::Error;

use super::{BinaryOperator, Expression};
use crate::names::NameMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("variable {0} has no bound cell")]
    Unbound(String),
}

/// Separator conventions for human-readable formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DisplayLocale {
    /// `,` between arguments, `.` as decimal point.
    #[default]
    En,
    /// `;` between arguments, `,` as decimal point.
    Fr,
}

struct Style {
    spaced: bool,
    arg_separator: &'static str,
    decimal_comma: bool,
}

// Binding strength of each node shape; higher binds tighter.
const CMP: u8 = 1;
const ADD: u8 = 2;
const MUL: u8 = 3;
const POW: u8 = 4;
const UNARY: u8 = 5;
const ATOM: u8 = 6;

fn level(expr: &Expression) -> u8 {
    match expr {
        Expression::Number(v) if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) => UNARY,
        Expression::Number(_) | Expression::Variable(_) | Expression::Call { .. } => ATOM,
        Expression::Negate(_) => UNARY,
        Expression::Binary { op, .. } => match op {
            BinaryOperator::Add | BinaryOperator::Sub => ADD,
            BinaryOperator::Mul | BinaryOperator::Div => MUL,
            BinaryOperator::Pow => POW,
            _ => CMP,
        },
    }
}

/// Minimum operand levels (left, right) that need no parentheses.
///
/// The exponent of `^` is parenthesized when it is itself a power: the
/// grammar reads `a^b^c` as `a^(b^c)` while spreadsheet engines evaluate
/// it left to right, so nested powers are always written explicitly.
fn operand_levels(op: BinaryOperator) -> (u8, u8) {
    match op {
        BinaryOperator::Add | BinaryOperator::Sub => (ADD, MUL),
        BinaryOperator::Mul | BinaryOperator::Div => (MUL, POW),
        BinaryOperator::Pow => (UNARY, UNARY),
        _ => (ADD, ADD),
    }
}

fn format_number(value: f64, decimal_comma: bool) -> String {
    let text = value.to_string();
    if decimal_comma {
        text.replace('.', ",")
    } else {
        text
    }
}

fn write_expr<F>(
    expr: &Expression,
    min_level: u8,
    style: &Style,
    name: &mut F,
    out: &mut String,
) -> Result<(), RenderError>
where
    F: FnMut(&str) -> Result<String, RenderError>,
{
    let wrap = level(expr) < min_level;
    if wrap {
        out.push('(');
    }
    match expr {
        Expression::Number(v) => out.push_str(&format_number(*v, style.decimal_comma)),
        Expression::Variable(n) => out.push_str(&name(n)?),
        Expression::Negate(inner) => {
            out.push('-');
            write_expr(inner, UNARY, style, name, out)?;
        }
        Expression::Binary { op, left, right } => {
            let (l, r) = operand_levels(*op);
            write_expr(left, l, style, name, out)?;
            if style.spaced {
                out.push(' ');
                out.push_str(op.symbol());
                out.push(' ');
            } else {
                out.push_str(op.symbol());
            }
            write_expr(right, r, style, name, out)?;
        }
        Expression::Call { function, args } => {
            out.push_str(function.name());
            out.push('(');
            for (i, arg) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(style.arg_separator);
                }
                write_expr(arg, CMP, style, name, out)?;
            }
            out.push(')');
        }
    }
    if wrap {
        out.push(')');
    }
    Ok(())
}

/// Renders stored cell formula text: `=` prefix, each variable replaced by
/// its bound address, `,` between arguments, no spaces.
pub fn render_cell_formula(expr: &Expression, binding: &NameMap<String>) -> Result<String, RenderError> {
    let style = Style {
        spaced: false,
        arg_separator: ",",
        decimal_comma: false,
    };
    let mut out = String::from("=");
    write_expr(
        expr,
        CMP,
        &style,
        &mut |n: &str| binding.get(n).cloned().ok_or_else(|| RenderError::Unbound(n.to_string())),
        &mut out,
    )?;
    Ok(out)
}

/// Renders with variable names as written, the form the model DSL uses.
pub fn render_canonical(expr: &Expression) -> String {
    let style = Style {
        spaced: true,
        arg_separator: ", ",
        decimal_comma: false,
    };
    let mut out = String::new();
    write_expr(expr, CMP, &style, &mut |n: &str| Ok(n.to_string()), &mut out)
        .expect("names always render");
    out
}

/// Human-readable formula using display labels, e.g. `= Nb Days * Daily Rate`.
pub fn render_display(expr: &Expression) -> String {
    render_display_with(expr, DisplayLocale::En)
}

pub fn render_display_with(expr: &Expression, locale: DisplayLocale) -> String {
    let style = match locale {
        DisplayLocale::En => Style {
            spaced: true,
            arg_separator: ", ",
            decimal_comma: false,
        },
        DisplayLocale::Fr => Style {
            spaced: true,
            arg_separator: "; ",
            decimal_comma: true,
        },
    };
    let mut out = String::from("= ");
    write_expr(
        expr,
        CMP,
        &style,
        &mut |n: &str| Ok(crate::names::default_label(n)),
        &mut out,
    )
    .expect("labels always render");
    out
}
