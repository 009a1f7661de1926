use std::collections::BTreeMap;

use thiserror::Error;

use super::expr::eval_with;
use super::model::Overrides;
use super::{ErrorCode, Value};
use crate::formula::{collect_refs, parse_cell_formula, Expression, FormulaError};
use crate::layout::{parse_a1, CellAddress, CellContent, WorkbookPlan};
use crate::names::looks_like_cell_reference;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridEvalError {
    #[error("cannot parse formula at {cell}: {source}")]
    Formula { cell: CellAddress, source: FormulaError },
    #[error("{cell} refers to unknown name {name}")]
    UnresolvedName { cell: CellAddress, name: String },
    #[error("no defined name {0}")]
    UnknownOverride(String),
    #[error("{0} does not name a value cell")]
    NotOverridable(String),
    #[error("override for {0} is not a finite number")]
    NonFinite(String),
    #[error("circular cell references: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join(" → "))]
    Cycle(Vec<CellAddress>),
}

/// Results of a grid evaluation.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GridValues {
    /// Every formula cell.
    pub computed: BTreeMap<CellAddress, Value>,
    /// Every numeric value cell, after overrides.
    pub inputs: BTreeMap<CellAddress, f64>,
}

impl GridValues {
    /// Value a formula reading `address` would see.
    pub fn value_at(&self, address: &CellAddress) -> Option<Value> {
        self.computed
            .get(address)
            .copied()
            .or_else(|| self.inputs.get(address).map(|v| Value::Number(*v)))
    }
}

struct FormulaCell {
    expr: Expression,
    /// Each referenced name with the cell it resolves to.
    refs: Vec<(String, CellAddress)>,
}

/// Evaluates the workbook the way a spreadsheet engine would: each formula
/// is parsed from its stored text, names resolve through the defined names,
/// A1 references resolve within the cell's own sheet, and cells are
/// computed in dependency order.
pub fn eval_plan(plan: &WorkbookPlan, overrides: &Overrides) -> Result<GridValues, GridEvalError> {
    let mut values = GridValues::default();
    let mut text_cells = std::collections::BTreeSet::new();
    for sheet in &plan.sheets {
        for (&(row, column), cell) in &sheet.cells {
            let address = CellAddress::new(sheet.name.clone(), column, row);
            match cell.content {
                CellContent::Number(v) => {
                    values.inputs.insert(address, v);
                }
                CellContent::Text(_) => {
                    text_cells.insert(address);
                }
                CellContent::Formula { .. } => {}
            }
        }
    }

    for (name, value) in overrides.iter() {
        let target = plan
            .defined_name(name)
            .ok_or_else(|| GridEvalError::UnknownOverride(name.to_string()))?;
        let slot = values
            .inputs
            .get_mut(target)
            .ok_or_else(|| GridEvalError::NotOverridable(name.to_string()))?;
        if !value.is_finite() {
            return Err(GridEvalError::NonFinite(name.to_string()));
        }
        *slot = *value;
    }

    let mut formulas: BTreeMap<CellAddress, FormulaCell> = BTreeMap::new();
    for (cell, text) in plan.formula_cells() {
        let expr = parse_cell_formula(text).map_err(|source| GridEvalError::Formula {
            cell: cell.clone(),
            source,
        })?;
        let refs = collect_refs(&expr)
            .into_iter()
            .map(|name| resolve(plan, &cell, &name).map(|target| (name, target)))
            .collect::<Result<Vec<_>, _>>()?;
        formulas.insert(cell, FormulaCell { expr, refs });
    }

    for cell in dependency_order(&formulas)? {
        let formula = &formulas[&cell];
        let lookup = |name: &str| -> Value {
            let target = formula
                .refs
                .iter()
                .find(|(n, _)| n.eq_ignore_ascii_case(name))
                .map(|(_, t)| t);
            match target {
                None => Value::Error(ErrorCode::Unresolved),
                Some(t) if text_cells.contains(t) => Value::Error(ErrorCode::BadArg),
                // blank cells read as zero
                Some(t) => values.value_at(t).unwrap_or(Value::Number(0.0)),
            }
        };
        let value = eval_with(&formula.expr, &lookup);
        values.computed.insert(cell, value);
    }
    Ok(values)
}

fn resolve(plan: &WorkbookPlan, cell: &CellAddress, name: &str) -> Result<CellAddress, GridEvalError> {
    if looks_like_cell_reference(name) {
        if let Some((column, row)) = parse_a1(name) {
            return Ok(CellAddress::new(cell.sheet.clone(), column, row));
        }
    }
    plan.defined_name(name)
        .cloned()
        .ok_or_else(|| GridEvalError::UnresolvedName {
            cell: cell.clone(),
            name: name.to_string(),
        })
}

/// Formula cells ordered so every cell follows the formula cells it reads.
fn dependency_order(formulas: &BTreeMap<CellAddress, FormulaCell>) -> Result<Vec<CellAddress>, GridEvalError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    let mut marks: BTreeMap<&CellAddress, Mark> = BTreeMap::new();
    let mut order = Vec::with_capacity(formulas.len());

    for root in formulas.keys() {
        if marks.contains_key(root) {
            continue;
        }
        // (cell, index of the next dependency to visit)
        let mut stack: Vec<(&CellAddress, usize)> = vec![(root, 0)];
        marks.insert(root, Mark::Active);
        while let Some((cell, next)) = stack.pop() {
            let refs = &formulas[cell].refs;
            if next == refs.len() {
                marks.insert(cell, Mark::Done);
                order.push(cell.clone());
                continue;
            }
            stack.push((cell, next + 1));
            let Some((dep, _)) = formulas.get_key_value(&refs[next].1) else {
                continue;
            };
            match marks.get(dep) {
                None => {
                    marks.insert(dep, Mark::Active);
                    stack.push((dep, 0));
                }
                Some(Mark::Active) => {
                    let start = stack.iter().position(|(c, _)| *c == dep).expect("active cell is on the stack");
                    let mut path: Vec<CellAddress> = stack[start..].iter().map(|(c, _)| (*c).clone()).collect();
                    path.push(dep.clone());
                    return Err(GridEvalError::Cycle(path));
                }
                Some(Mark::Done) => {}
            }
        }
    }
    Ok(order)
}
