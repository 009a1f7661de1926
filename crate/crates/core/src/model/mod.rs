//! The formula list: variable declarations, the DSL that serializes them,
//! and the structural checks run before anything is laid out.

mod dsl;
mod lint;
mod order;
mod validate;

use std::fmt;

use serde::Serialize;

use crate::formula::Expression;
use crate::names::{default_label, NameMap};

pub use dsl::{parse_model, parse_model_unchecked, serialize_model, ParsedModel};
pub use lint::golden_rule_lint;
pub use order::{reference_graph, topological_order, OrderError};
pub use validate::validate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum VariableKind {
    /// Rarely changed constant; lives on the Parameters sheet.
    Parameter,
    /// Constant the user edits; lives on the Interface sheet.
    InterfaceInput,
    /// Formula-defined value; lives in a Model sheet block.
    Intermediate,
    /// Intermediate that is also mirrored on the Interface sheet.
    InterfaceOutput,
}

impl VariableKind {
    pub fn keyword(self) -> &'static str {
        match self {
            VariableKind::Parameter => "param",
            VariableKind::InterfaceInput => "input",
            VariableKind::Intermediate => "var",
            VariableKind::InterfaceOutput => "output",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        match word {
            "param" => Some(VariableKind::Parameter),
            "input" => Some(VariableKind::InterfaceInput),
            "var" => Some(VariableKind::Intermediate),
            "output" => Some(VariableKind::InterfaceOutput),
            _ => None,
        }
    }

    pub fn is_formula_bearing(self) -> bool {
        matches!(self, VariableKind::Intermediate | VariableKind::InterfaceOutput)
    }

    /// Type column wording of a formula list.
    pub fn description(self) -> &'static str {
        match self {
            VariableKind::Parameter => "Input",
            VariableKind::InterfaceInput => "Input, Interface",
            VariableKind::Intermediate => "Intermediate",
            VariableKind::InterfaceOutput => "Intermediate, Interface",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub enum NumberFormat {
    #[default]
    General,
    Integer,
    /// Currency with the given number of decimals (0 to 4).
    Currency(u8),
    /// Percentage with the given number of decimals (0 to 4).
    Percent(u8),
}

impl NumberFormat {
    pub const MAX_DECIMALS: u8 = 4;

    pub fn is_valid(self) -> bool {
        match self {
            NumberFormat::Currency(d) | NumberFormat::Percent(d) => d <= Self::MAX_DECIMALS,
            _ => true,
        }
    }
}

impl fmt::Display for NumberFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumberFormat::General => f.write_str("general"),
            NumberFormat::Integer => f.write_str("integer"),
            NumberFormat::Currency(d) => write!(f, "currency({d})"),
            NumberFormat::Percent(d) => write!(f, "percent({d})"),
        }
    }
}

/// 1-based position in the model source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariableDecl {
    pub name: String,
    pub label: String,
    pub kind: VariableKind,
    pub formula: Option<Expression>,
    pub initial_value: Option<f64>,
    pub format: NumberFormat,
    pub submodel: Option<String>,
    pub location: Option<Location>,
}

impl VariableDecl {
    fn new(name: &str, kind: VariableKind) -> Self {
        Self {
            name: name.to_string(),
            label: default_label(name),
            kind,
            formula: None,
            initial_value: None,
            format: NumberFormat::General,
            submodel: None,
            location: None,
        }
    }

    pub fn parameter(name: &str, value: f64) -> Self {
        Self {
            initial_value: Some(value),
            ..Self::new(name, VariableKind::Parameter)
        }
    }

    pub fn input(name: &str, value: f64) -> Self {
        Self {
            initial_value: Some(value),
            ..Self::new(name, VariableKind::InterfaceInput)
        }
    }

    pub fn intermediate(name: &str, formula: Expression) -> Self {
        Self {
            formula: Some(formula),
            ..Self::new(name, VariableKind::Intermediate)
        }
    }

    pub fn output(name: &str, formula: Expression) -> Self {
        Self {
            formula: Some(formula),
            ..Self::new(name, VariableKind::InterfaceOutput)
        }
    }

    pub fn with_format(mut self, format: NumberFormat) -> Self {
        self.format = format;
        self
    }

    pub fn in_submodel(mut self, submodel: &str) -> Self {
        self.submodel = Some(submodel.to_string());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Model {
    pub declarations: Vec<VariableDecl>,
    pub submodels: Vec<String>,
}

impl Model {
    pub fn new(declarations: Vec<VariableDecl>) -> Self {
        let mut submodels: Vec<String> = Vec::new();
        for decl in &declarations {
            if let Some(sub) = &decl.submodel {
                if !submodels.contains(sub) {
                    submodels.push(sub.clone());
                }
            }
        }
        Self {
            declarations,
            submodels,
        }
    }

    pub fn get(&self, name: &str) -> Option<&VariableDecl> {
        self.declarations
            .iter()
            .find(|d| d.name.eq_ignore_ascii_case(name))
    }

    pub fn of_kind(&self, kind: VariableKind) -> impl Iterator<Item = &VariableDecl> {
        self.declarations.iter().filter(move |d| d.kind == kind)
    }

    pub fn formula_bearing(&self) -> impl Iterator<Item = &VariableDecl> {
        self.declarations.iter().filter(|d| d.kind.is_formula_bearing())
    }

    /// Declarations indexed by name; on duplicates the first one wins.
    pub fn index(&self) -> NameMap<&VariableDecl> {
        let mut map = NameMap::new();
        for decl in &self.declarations {
            if !map.contains(&decl.name) {
                map.insert(decl.name.clone(), decl);
            }
        }
        map
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => f.write_str("error"),
            Severity::Warning => f.write_str("warning"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variable: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<Location>,
}

impl Diagnostic {
    pub fn error(code: &'static str, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            code,
            message: message.into(),
            variable: None,
            location: None,
        }
    }

    pub fn warning(code: &'static str, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Warning,
            ..Self::error(code, message)
        }
    }

    pub fn for_decl(mut self, decl: &VariableDecl) -> Self {
        self.variable = Some(decl.name.clone());
        self.location = decl.location;
        self
    }

    pub fn at(mut self, location: Location) -> Self {
        self.location = Some(location);
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(loc) = self.location {
            write!(f, "{loc}: ")?;
        }
        write!(f, "{}[{}]: {}", self.severity, self.code, self.message)
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}
