use thiserror::Error;

use super::expr::eval_with;
use super::{ErrorCode, Value};
use crate::model::{topological_order, Model, OrderError};
use crate::names::NameMap;

/// New values for parameters and interface inputs, by variable name.
pub type Overrides = NameMap<f64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelEvalError {
    #[error("{0} is defined by a formula and cannot be overridden")]
    NotOverridable(String),
    #[error("no variable named {0}")]
    UnknownVariable(String),
    #[error("override for {0} is not a finite number")]
    NonFinite(String),
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// Values of every declared variable, in declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelValues {
    entries: Vec<(String, Value)>,
}

impl ModelValues {
    pub fn get(&self, name: &str) -> Option<Value> {
        self.entries
            .iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(name))
            .map(|(_, v)| *v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Value)> {
        self.entries.iter().map(|(n, v)| (n.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Evaluates the formula list directly: constants from their initial values
/// (or overrides), then each formula in dependency order.
pub fn eval_model(model: &Model, overrides: &Overrides) -> Result<ModelValues, ModelEvalError> {
    for (name, value) in overrides.iter() {
        let decl = model
            .get(name)
            .ok_or_else(|| ModelEvalError::UnknownVariable(name.to_string()))?;
        if decl.kind.is_formula_bearing() {
            return Err(ModelEvalError::NotOverridable(decl.name.clone()));
        }
        if !value.is_finite() {
            return Err(ModelEvalError::NonFinite(decl.name.clone()));
        }
    }

    let mut env: NameMap<Value> = NameMap::new();
    for decl in model.declarations.iter().filter(|d| !d.kind.is_formula_bearing()) {
        let value = overrides
            .get(&decl.name)
            .copied()
            .or(decl.initial_value)
            .map_or(Value::Error(ErrorCode::BadArg), Value::Number);
        env.insert(decl.name.clone(), value);
    }
    for decl in topological_order(model)? {
        let value = match &decl.formula {
            Some(formula) => eval_with(formula, &|name| {
                env.get(name).copied().unwrap_or(Value::Error(ErrorCode::Unresolved))
            }),
            None => Value::Error(ErrorCode::BadArg),
        };
        env.insert(decl.name.clone(), value);
    }

    let entries = model
        .declarations
        .iter()
        .map(|d| {
            let value = env.get(&d.name).copied().unwrap_or(Value::Error(ErrorCode::Unresolved));
            (d.name.clone(), value)
        })
        .collect();
    Ok(ModelValues { entries })
}
