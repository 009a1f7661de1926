use std::fmt;

use rand::Rng;
use serde::Serialize;

use super::grid::{eval_plan, GridValues};
use super::model::{eval_model, Overrides};
use crate::layout::{CellAddress, CellContent, WorkbookPlan, INTERFACE_SHEET};
use crate::model::Model;

/// Relative tolerance for numeric agreement.
pub const TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mismatch {
    pub variable: String,
    /// Cell that disagreed, e.g. `Model!B20`, or `None` when the variable
    /// has no cell at all.
    pub address: Option<String>,
    pub model_value: String,
    pub plan_value: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at {}: model {} vs workbook {}",
            self.variable,
            self.address.as_deref().unwrap_or("(no cell)"),
            self.model_value,
            self.plan_value
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    /// Variables compared.
    pub checked: usize,
    /// Variables whose every cell agreed.
    pub matched: usize,
    pub mismatches: Vec<Mismatch>,
    /// Set when either evaluator refused to run.
    pub error: Option<String>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.mismatches.is_empty()
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict}, {}/{} variables matched", self.matched, self.checked)?;
        if let Some(err) = &self.error {
            write!(f, " ({err})")?;
        }
        Ok(())
    }
}

/// Evaluates the model directly and through the planned grid, and compares
/// every variable's value at its defined-name cell and, for outputs, at the
/// Interface cell that mirrors it.
pub fn verify_equivalence(model: &Model, plan: &WorkbookPlan, overrides: &Overrides) -> EquivalenceReport {
    let checked = model.declarations.len();
    let failed = |error: String| EquivalenceReport {
        checked,
        matched: 0,
        mismatches: Vec::new(),
        error: Some(error),
    };
    let expected = match eval_model(model, overrides) {
        Ok(values) => values,
        Err(err) => return failed(err.to_string()),
    };
    let grid = match eval_plan(plan, overrides) {
        Ok(values) => values,
        Err(err) => return failed(err.to_string()),
    };

    let mut mismatches = Vec::new();
    let mut matched = 0;
    for decl in &model.declarations {
        let want = expected.get(&decl.name).expect("every declaration is evaluated");
        let mut cells: Vec<CellAddress> = plan.defined_name(&decl.name).cloned().into_iter().collect();
        if decl.kind == crate::model::VariableKind::InterfaceOutput {
            cells.extend(interface_mirror(plan, &decl.name));
        }
        if cells.is_empty() {
            mismatches.push(Mismatch {
                variable: decl.name.clone(),
                address: None,
                model_value: want.to_string(),
                plan_value: "missing".into(),
            });
            continue;
        }
        let before = mismatches.len();
        for cell in cells {
            let got = grid.value_at(&cell);
            if !got.is_some_and(|g| g.approx_eq(want, TOLERANCE)) {
                mismatches.push(Mismatch {
                    variable: decl.name.clone(),
                    address: Some(cell.to_string()),
                    model_value: want.to_string(),
                    plan_value: got.map_or_else(|| "blank".to_string(), |g| g.to_string()),
                });
            }
        }
        if mismatches.len() == before {
            matched += 1;
        }
    }
    EquivalenceReport {
        checked,
        matched,
        mismatches,
        error: None,
    }
}

/// The Interface cell holding `=name`, if any.
fn interface_mirror(plan: &WorkbookPlan, name: &str) -> Option<CellAddress> {
    let sheet = plan.sheet(INTERFACE_SHEET)?;
    sheet.cells.iter().find_map(|(&(row, column), cell)| match &cell.content {
        CellContent::Formula { text, .. } if text[1..].eq_ignore_ascii_case(name) => {
            Some(CellAddress::new(INTERFACE_SHEET, column, row))
        }
        _ => None,
    })
}

/// Draws a value for every parameter and input. Whole-number defaults get
/// whole numbers in `[0, 2|v| + 10]`; others get a uniform draw of the same
/// magnitude.
pub fn random_overrides<R: Rng + ?Sized>(model: &Model, rng: &mut R) -> Overrides {
    model
        .declarations
        .iter()
        .filter(|d| !d.kind.is_formula_bearing())
        .map(|d| {
            let v = d.initial_value.unwrap_or(0.0);
            let high = 2.0 * v.abs() + 10.0;
            let value = if v.fract() == 0.0 {
                rng.gen_range(0..=high as i64) as f64
            } else {
                rng.gen_range(0.0..high)
            };
            (d.name.clone(), value)
        })
        .collect()
}

/// Copies computed values into the plan's formula cells as cached results.
pub fn attach_cached_values(plan: &mut WorkbookPlan, values: &GridValues) {
    for sheet in &mut plan.sheets {
        for (&(row, column), cell) in sheet.cells.iter_mut() {
            if let CellContent::Formula { cached, .. } = &mut cell.content {
                *cached = values
                    .computed
                    .get(&CellAddress::new(sheet.name.clone(), column, row))
                    .copied();
            }
        }
    }
}
