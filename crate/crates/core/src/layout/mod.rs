//! Physical layout: turns a validated model into a [`WorkbookPlan`] with an
//! Interface sheet, one Model sheet per sub-model, and a Parameters sheet.
//!
//! Every formula-bearing variable becomes a block on its Model sheet: one
//! reference row per variable it uses (`=Name`), then a bold, top-bordered
//! definition row whose formula only touches the reference cells above it.
//! The definition cell carries the variable's defined name.

mod address;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::eval::Value;
use crate::formula::{collect_refs, render_cell_formula, RenderError};
use crate::model::{has_errors, topological_order, validate, Diagnostic, Model, NumberFormat, OrderError, VariableDecl, VariableKind};
use crate::names::NameMap;

pub use address::{column_letters, parse_a1, quote_sheet_name, CellAddress};
pub use crate::names::derive_defined_name;

pub const INTERFACE_SHEET: &str = "Interface";
pub const MODEL_SHEET: &str = "Model";
pub const PARAMETERS_SHEET: &str = "Parameters";

pub const LABEL_COLUMN: u32 = 1;
pub const VALUE_COLUMN: u32 = 2;
const LABEL_WIDTH: f64 = 24.0;
const VALUE_WIDTH: f64 = 14.0;
const FIRST_BLOCK_ROW: u32 = 2;

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("model has validation errors: {}", .0.iter().filter(|d| d.is_error()).map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidModel(Vec<Diagnostic>),
    #[error("defined name {0} is used twice")]
    NameCollision(String),
    #[error("{variable} references {name}, which has no defined name")]
    UnresolvedReference { variable: String, name: String },
    #[error("{0} has no formula")]
    NotFormulaBearing(String),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("plan invariant violated: {0}")]
    Invariant(String),
}

impl From<RenderError> for PlanError {
    fn from(err: RenderError) -> Self {
        match err {
            RenderError::Unbound(name) => PlanError::UnresolvedReference {
                variable: String::new(),
                name,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CellStyle {
    pub bold: bool,
    pub top_border: bool,
    pub format: NumberFormat,
}

impl CellStyle {
    const PLAIN: CellStyle = CellStyle {
        bold: false,
        top_border: false,
        format: NumberFormat::General,
    };

    fn bold(format: NumberFormat) -> Self {
        Self {
            bold: true,
            top_border: false,
            format,
        }
    }

    fn definition(format: NumberFormat) -> Self {
        Self {
            bold: true,
            top_border: true,
            format,
        }
    }

    fn formatted(format: NumberFormat) -> Self {
        Self {
            format,
            ..Self::PLAIN
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellContent {
    Text(String),
    Number(f64),
    /// Formula text starting with `=`, plus the value last computed for it.
    Formula { text: String, cached: Option<Value> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub content: CellContent,
    pub style: CellStyle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sheet {
    pub name: String,
    /// Keyed by (row, column) so iteration is row-major.
    pub cells: BTreeMap<(u32, u32), Cell>,
    /// (1-based column, width in characters).
    pub column_widths: Vec<(u32, f64)>,
}

impl Sheet {
    fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            cells: BTreeMap::new(),
            column_widths: vec![(LABEL_COLUMN, LABEL_WIDTH), (VALUE_COLUMN, VALUE_WIDTH)],
        }
    }

    fn put(&mut self, row: u32, column: u32, content: CellContent, style: CellStyle) {
        self.cells.insert((row, column), Cell { content, style });
    }

    pub fn cell(&self, row: u32, column: u32) -> Option<&Cell> {
        self.cells.get(&(row, column))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinedName {
    pub name: String,
    pub target: CellAddress,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceRow {
    pub label: String,
    /// Defined name the row's `=Name` formula points at.
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub variable: String,
    pub sheet: String,
    pub start_row: u32,
    pub reference_rows: Vec<ReferenceRow>,
    pub definition_label: String,
    pub definition_formula: String,
}

impl Block {
    pub fn definition_row(&self) -> u32 {
        self.start_row + self.reference_rows.len() as u32
    }

    /// Rows holding reference formulas.
    pub fn reference_range(&self) -> std::ops::Range<u32> {
        self.start_row..self.definition_row()
    }
}

/// What the planner knows about a name before the blocks are rendered.
#[derive(Debug, Clone, PartialEq)]
pub struct PlannedName {
    pub defined: DefinedName,
    pub label: String,
    pub format: NumberFormat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkbookPlan {
    pub sheets: Vec<Sheet>,
    pub defined_names: Vec<DefinedName>,
    /// Model sheet blocks in layout order.
    pub blocks: Vec<Block>,
}

impl WorkbookPlan {
    pub fn sheet(&self, name: &str) -> Option<&Sheet> {
        self.sheets.iter().find(|s| s.name == name)
    }

    pub fn cell(&self, address: &CellAddress) -> Option<&Cell> {
        self.sheet(&address.sheet)?.cell(address.row, address.column)
    }

    pub fn cell_mut(&mut self, address: &CellAddress) -> Option<&mut Cell> {
        self.sheets
            .iter_mut()
            .find(|s| s.name == address.sheet)?
            .cells
            .get_mut(&(address.row, address.column))
    }

    pub fn defined_name(&self, name: &str) -> Option<&CellAddress> {
        self.defined_names
            .iter()
            .find(|d| d.name.eq_ignore_ascii_case(name))
            .map(|d| &d.target)
    }

    /// Every formula cell with its address, sheet by sheet, row-major.
    pub fn formula_cells(&self) -> impl Iterator<Item = (CellAddress, &str)> {
        self.sheets.iter().flat_map(|sheet| {
            sheet.cells.iter().filter_map(move |(&(row, column), cell)| match &cell.content {
                CellContent::Formula { text, .. } => {
                    Some((CellAddress::new(sheet.name.clone(), column, row), text.as_str()))
                }
                _ => None,
            })
        })
    }

    /// Checks the structural guarantees the emitters rely on.
    pub fn check_invariants(&self) -> Result<(), PlanError> {
        let fail = |msg: String| Err(PlanError::Invariant(msg));
        if self.sheets.len() < 3 {
            return fail(format!("expected at least 3 sheets, found {}", self.sheets.len()));
        }
        if self.sheets[0].name != INTERFACE_SHEET {
            return fail("first sheet must be Interface".into());
        }
        if self.sheets.last().map(|s| s.name.as_str()) != Some(PARAMETERS_SHEET) {
            return fail("last sheet must be Parameters".into());
        }
        let mut sheet_names = NameMap::new();
        for sheet in &self.sheets {
            if sheet_names.insert(sheet.name.clone(), ()).is_some() {
                return fail(format!("duplicate sheet {}", sheet.name));
            }
        }
        let mut names = NameMap::new();
        for dn in &self.defined_names {
            if names.insert(dn.name.clone(), ()).is_some() {
                return Err(PlanError::NameCollision(dn.name.clone()));
            }
            if self.cell(&dn.target).is_none() {
                return fail(format!("{} points at empty cell {}", dn.name, dn.target));
            }
        }
        for (address, text) in self.formula_cells() {
            if !text.starts_with('=') {
                return fail(format!("formula at {address} does not start with '='"));
            }
        }
        Ok(())
    }
}

fn model_sheet_name(submodel: Option<&str>) -> String {
    match submodel {
        Some(sub) => format!("{MODEL_SHEET} {sub}"),
        None => MODEL_SHEET.to_string(),
    }
}

/// Lays out a model. The model must validate without errors.
pub fn plan_workbook(model: &Model) -> Result<WorkbookPlan, PlanError> {
    let diagnostics = validate(model);
    if has_errors(&diagnostics) {
        return Err(PlanError::InvalidModel(diagnostics));
    }
    let order = topological_order(model)?;

    let mut interface = Sheet::new(INTERFACE_SHEET);
    let mut parameters = Sheet::new(PARAMETERS_SHEET);
    let mut table: NameMap<PlannedName> = NameMap::new();
    let mut register = |decl: &VariableDecl, target: CellAddress| -> Result<(), PlanError> {
        let planned = PlannedName {
            defined: DefinedName {
                name: decl.name.clone(),
                target,
            },
            label: decl.label.clone(),
            format: decl.format,
        };
        match table.insert(decl.name.clone(), planned) {
            Some(_) => Err(PlanError::NameCollision(decl.name.clone())),
            None => Ok(()),
        }
    };

    for (row, decl) in (1u32..).zip(model.of_kind(VariableKind::Parameter)) {
        let value = decl.initial_value.unwrap_or_default();
        parameters.put(row, LABEL_COLUMN, CellContent::Text(decl.label.clone()), CellStyle::bold(NumberFormat::General));
        parameters.put(row, VALUE_COLUMN, CellContent::Number(value), CellStyle::bold(decl.format));
        register(decl, CellAddress::new(PARAMETERS_SHEET, VALUE_COLUMN, row))?;
    }

    interface.put(1, LABEL_COLUMN, CellContent::Text("Input".into()), CellStyle::bold(NumberFormat::General));
    let mut row = 2;
    for decl in model.of_kind(VariableKind::InterfaceInput) {
        let value = decl.initial_value.unwrap_or_default();
        interface.put(row, LABEL_COLUMN, CellContent::Text(decl.label.clone()), CellStyle::PLAIN);
        interface.put(row, VALUE_COLUMN, CellContent::Number(value), CellStyle::bold(decl.format));
        register(decl, CellAddress::new(INTERFACE_SHEET, VALUE_COLUMN, row))?;
        row += 1;
    }
    row += 1;
    interface.put(row, LABEL_COLUMN, CellContent::Text("Output".into()), CellStyle::bold(NumberFormat::General));
    row += 1;
    for decl in model.of_kind(VariableKind::InterfaceOutput) {
        interface.put(row, LABEL_COLUMN, CellContent::Text(decl.label.clone()), CellStyle::PLAIN);
        interface.put(
            row,
            VALUE_COLUMN,
            CellContent::Formula {
                text: format!("={}", decl.name),
                cached: None,
            },
            CellStyle::formatted(decl.format),
        );
        row += 1;
    }

    // Model sheets: the ungrouped one first (always present without
    // sub-models), then one per sub-model in declaration order.
    let mut model_sheets: Vec<Sheet> = Vec::new();
    let ungrouped = model.formula_bearing().any(|d| d.submodel.is_none());
    if model.submodels.is_empty() || ungrouped {
        model_sheets.push(Sheet::new(MODEL_SHEET));
    }
    for sub in &model.submodels {
        model_sheets.push(Sheet::new(model_sheet_name(Some(sub))));
    }

    // Reserve rows so every definition cell is known before rendering.
    let mut next_row: BTreeMap<String, u32> = model_sheets
        .iter()
        .map(|s| (s.name.clone(), FIRST_BLOCK_ROW))
        .collect();
    let mut starts = Vec::with_capacity(order.len());
    for decl in &order {
        let sheet = model_sheet_name(decl.submodel.as_deref());
        let refs = decl.formula.as_ref().map(collect_refs).unwrap_or_default();
        let slot = next_row.get_mut(&sheet).expect("sheet reserved for every sub-model");
        let start = *slot;
        let definition = start + refs.len() as u32;
        *slot = definition + 2;
        register(decl, CellAddress::new(sheet.clone(), VALUE_COLUMN, definition))?;
        starts.push((sheet, start));
    }

    let mut blocks = Vec::with_capacity(order.len());
    for (decl, (sheet_name, start)) in order.iter().zip(starts) {
        let block = plan_block(decl, start, &table)?;
        let sheet = model_sheets
            .iter_mut()
            .find(|s| s.name == sheet_name)
            .expect("reserved sheet");
        for (row, reference) in (block.start_row..).zip(&block.reference_rows) {
            let format = table.get(&reference.source).map(|p| p.format).unwrap_or_default();
            sheet.put(row, LABEL_COLUMN, CellContent::Text(reference.label.clone()), CellStyle::PLAIN);
            sheet.put(
                row,
                VALUE_COLUMN,
                CellContent::Formula {
                    text: format!("={}", reference.source),
                    cached: None,
                },
                CellStyle::formatted(format),
            );
        }
        let row = block.definition_row();
        sheet.put(
            row,
            LABEL_COLUMN,
            CellContent::Text(block.definition_label.clone()),
            CellStyle::definition(NumberFormat::General),
        );
        sheet.put(
            row,
            VALUE_COLUMN,
            CellContent::Formula {
                text: block.definition_formula.clone(),
                cached: None,
            },
            CellStyle::definition(decl.format),
        );
        blocks.push(block);
    }

    let defined_names = model
        .declarations
        .iter()
        .filter_map(|d| table.get(&d.name).map(|p| p.defined.clone()))
        .collect();

    let mut sheets = vec![interface];
    sheets.extend(model_sheets);
    sheets.push(parameters);
    let plan = WorkbookPlan {
        sheets,
        defined_names,
        blocks,
    };
    plan.check_invariants()?;
    Ok(plan)
}

/// Lays out one block starting at `start_row`: reference rows in
/// first-use order, then the definition row with the formula rewritten to
/// point at the reference cells.
pub fn plan_block(
    variable: &VariableDecl,
    start_row: u32,
    name_table: &NameMap<PlannedName>,
) -> Result<Block, PlanError> {
    let formula = variable
        .formula
        .as_ref()
        .filter(|_| variable.kind.is_formula_bearing())
        .ok_or_else(|| PlanError::NotFormulaBearing(variable.name.clone()))?;
    let refs = collect_refs(formula);
    let mut binding = NameMap::new();
    let mut reference_rows = Vec::with_capacity(refs.len());
    for (row, name) in (start_row..).zip(&refs) {
        let planned = name_table.get(name).ok_or_else(|| PlanError::UnresolvedReference {
            variable: variable.name.clone(),
            name: name.clone(),
        })?;
        binding.insert(name.clone(), format!("{}{row}", column_letters(VALUE_COLUMN)));
        reference_rows.push(ReferenceRow {
            label: planned.label.clone(),
            source: planned.defined.name.clone(),
        });
    }
    let definition_formula = render_cell_formula(formula, &binding)?;
    Ok(Block {
        variable: variable.name.clone(),
        sheet: model_sheet_name(variable.submodel.as_deref()),
        start_row,
        reference_rows,
        definition_label: variable.label.clone(),
        definition_formula,
    })
}

#[cfg(test)]
mod tests;
