//! Formula expressions: the syntax tree, its parser, renderers, and the
//! structural queries the rest of the compiler relies on.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr  := cmp
//! cmp   := add (("<" | ">" | "<=" | ">=" | "=" | "<>") add)?
//! add   := mul (("+" | "-") mul)*
//! mul   := pow (("*" | "/") pow)*
//! pow   := unary ("^" pow)?
//! unary := "-" unary | atom
//! atom  := number | identifier | NAME "(" expr ("," expr)* ")" | "(" expr ")"
//! ```

mod analysis;
mod lexer;
mod parser;
mod render;

use std::fmt;

pub use analysis::{collect_refs, operator_kinds, operator_kinds_by_slot, IfArgument, Slot, SlotPath, SlotStep};
pub use parser::{parse_cell_formula, parse_expression, parse_expression_prefix, FormulaError};
pub use render::{render_canonical, render_cell_formula, render_display, render_display_with, DisplayLocale, RenderError};

#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Number(f64),
    Variable(String),
    Binary {
        op: BinaryOperator,
        left: Box<Expression>,
        right: Box<Expression>,
    },
    Negate(Box<Expression>),
    Call {
        function: Function,
        args: Vec<Expression>,
    },
}

impl Expression {
    pub fn number(value: f64) -> Self {
        Expression::Number(value)
    }

    pub fn var(name: impl Into<String>) -> Self {
        Expression::Variable(name.into())
    }

    pub fn binary(op: BinaryOperator, left: Expression, right: Expression) -> Self {
        Expression::Binary {
            op,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn negate(operand: Expression) -> Self {
        Expression::Negate(Box::new(operand))
    }

    pub fn call(function: Function, args: Vec<Expression>) -> Self {
        Expression::Call { function, args }
    }

    /// Literal value of a bare number or a negated bare number.
    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Expression::Number(v) => Some(*v),
            Expression::Negate(inner) => match inner.as_ref() {
                Expression::Number(v) => Some(-v),
                _ => None,
            },
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinaryOperator {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Gt,
    Lt,
    Ge,
    Le,
    Eq,
    Ne,
}

impl BinaryOperator {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOperator::Add => "+",
            BinaryOperator::Sub => "-",
            BinaryOperator::Mul => "*",
            BinaryOperator::Div => "/",
            BinaryOperator::Pow => "^",
            BinaryOperator::Gt => ">",
            BinaryOperator::Lt => "<",
            BinaryOperator::Ge => ">=",
            BinaryOperator::Le => "<=",
            BinaryOperator::Eq => "=",
            BinaryOperator::Ne => "<>",
        }
    }

    pub fn is_comparison(self) -> bool {
        matches!(
            self,
            BinaryOperator::Gt
                | BinaryOperator::Lt
                | BinaryOperator::Ge
                | BinaryOperator::Le
                | BinaryOperator::Eq
                | BinaryOperator::Ne
        )
    }

    pub fn kind(self) -> OperatorKind {
        match self {
            BinaryOperator::Add => OperatorKind::Plus,
            BinaryOperator::Sub => OperatorKind::Minus,
            BinaryOperator::Mul => OperatorKind::Times,
            BinaryOperator::Div => OperatorKind::Divide,
            BinaryOperator::Pow => OperatorKind::Power,
            BinaryOperator::Gt => OperatorKind::Gt,
            BinaryOperator::Lt => OperatorKind::Lt,
            BinaryOperator::Ge => OperatorKind::Ge,
            BinaryOperator::Le => OperatorKind::Le,
            BinaryOperator::Eq => OperatorKind::Eq,
            BinaryOperator::Ne => OperatorKind::Ne,
        }
    }

    pub const ALL: [BinaryOperator; 11] = [
        BinaryOperator::Add,
        BinaryOperator::Sub,
        BinaryOperator::Mul,
        BinaryOperator::Div,
        BinaryOperator::Pow,
        BinaryOperator::Gt,
        BinaryOperator::Lt,
        BinaryOperator::Ge,
        BinaryOperator::Le,
        BinaryOperator::Eq,
        BinaryOperator::Ne,
    ];
}

/// The closed set of functions formulas may call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Function {
    If,
    Min,
    Max,
    Sum,
    Round,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    Exactly(usize),
    AtLeast(usize),
}

impl Arity {
    pub fn accepts(self, count: usize) -> bool {
        match self {
            Arity::Exactly(n) => count == n,
            Arity::AtLeast(n) => count >= n,
        }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arity::Exactly(n) => write!(f, "exactly {n}"),
            Arity::AtLeast(n) => write!(f, "at least {n}"),
        }
    }
}

impl Function {
    pub const ALL: [Function; 5] = [
        Function::If,
        Function::Min,
        Function::Max,
        Function::Sum,
        Function::Round,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Function::If => "IF",
            Function::Min => "MIN",
            Function::Max => "MAX",
            Function::Sum => "SUM",
            Function::Round => "ROUND",
        }
    }

    /// Registry lookup, case-insensitive like spreadsheet function names.
    pub fn lookup(name: &str) -> Option<Function> {
        Function::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(name))
    }

    pub fn arity(self) -> Arity {
        match self {
            Function::If => Arity::Exactly(3),
            Function::Round => Arity::Exactly(2),
            Function::Min | Function::Max | Function::Sum => Arity::AtLeast(1),
        }
    }
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Unit of counting for the one-kind-per-formula rule. Unary negation counts
/// as [`OperatorKind::Minus`]; each function is its own kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperatorKind {
    Plus,
    Minus,
    Times,
    Divide,
    Power,
    Gt,
    Lt,
    Ge,
    Le,
    Eq,
    Ne,
    Function(Function),
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OperatorKind::Plus => "+",
            OperatorKind::Minus => "-",
            OperatorKind::Times => "*",
            OperatorKind::Divide => "/",
            OperatorKind::Power => "^",
            OperatorKind::Gt => ">",
            OperatorKind::Lt => "<",
            OperatorKind::Ge => ">=",
            OperatorKind::Le => "<=",
            OperatorKind::Eq => "=",
            OperatorKind::Ne => "<>",
            OperatorKind::Function(func) => func.name(),
        };
        f.write_str(s)
    }
}
