//! Model to verified workbook bytes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::eval::{attach_cached_values, eval_plan, random_overrides, verify_equivalence, EquivalenceReport, GridEvalError, Overrides};
use crate::layout::{plan_workbook, PlanError, WorkbookPlan};
use crate::model::Model;
use crate::xlsx::{xlsx_bytes, EmitError, EmitOptions};

/// Random vectors checked on top of the declared values.
pub const BUILD_TRIALS: usize = 20;
pub const BUILD_SEED: u64 = 0;

#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("verification failed: {report}")]
    Verify {
        report: Box<EquivalenceReport>,
        overrides: Overrides,
    },
    #[error(transparent)]
    Grid(#[from] GridEvalError),
    #[error(transparent)]
    Emit(#[from] EmitError),
}

#[derive(Debug, Clone)]
pub struct Build {
    pub plan: WorkbookPlan,
    pub bytes: Vec<u8>,
    /// Input vectors the workbook was verified against.
    pub verified_vectors: usize,
}

/// Plans the workbook, checks it against the model on the declared values
/// and [`BUILD_TRIALS`] seeded random vectors, caches computed values and
/// serializes it. Nothing is returned unless every check passed.
pub fn build_workbook(model: &Model, options: &EmitOptions) -> Result<Build, BuildError> {
    let mut plan = plan_workbook(model)?;
    let mut rng = ChaCha8Rng::seed_from_u64(BUILD_SEED);
    let vectors: Vec<Overrides> = std::iter::once(Overrides::new())
        .chain((0..BUILD_TRIALS).map(|_| random_overrides(model, &mut rng)))
        .collect();
    for overrides in &vectors {
        let report = verify_equivalence(model, &plan, overrides);
        if !report.passed() {
            return Err(BuildError::Verify {
                report: Box::new(report),
                overrides: overrides.clone(),
            });
        }
    }
    let values = eval_plan(&plan, &Overrides::new())?;
    attach_cached_values(&mut plan, &values);
    let bytes = xlsx_bytes(&plan, options)?;
    Ok(Build {
        plan,
        bytes,
        verified_vectors: vectors.len(),
    })
}
