//! Two independent evaluators, one over the formula list and one over the
//! planned cell grid, and the check that they agree.

mod expr;
mod grid;
mod model;
mod value;
mod verify;

pub use expr::{eval_expression, Environment};
pub use grid::{eval_plan, GridEvalError, GridValues};
pub use model::{eval_model, ModelEvalError, ModelValues, Overrides};
pub use value::{format_number, ErrorCode, Value};
pub use verify::{attach_cached_values, random_overrides, verify_equivalence, EquivalenceReport, Mismatch, TOLERANCE};
