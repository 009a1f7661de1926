use super::{Diagnostic, Model};
use crate::formula::operator_kinds_by_slot;

/// Flags every formula slot that mixes more than one kind of operator or
/// function. Slots are split at IF arguments, so
/// `IF(A > B, A - B, 0)` is clean while `A * B + C` is not.
pub fn golden_rule_lint(model: &Model) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for decl in &model.declarations {
        let Some(formula) = &decl.formula else { continue };
        for slot in operator_kinds_by_slot(formula) {
            if slot.kinds.len() > 1 {
                let kinds: Vec<String> = slot.kinds.iter().map(ToString::to_string).collect();
                out.push(
                    Diagnostic::warning(
                        "golden-rule",
                        format!(
                            "{}: slot {} mixes {} kinds of operator {{{}}}",
                            decl.name,
                            slot.path,
                            slot.kinds.len(),
                            kinds.join(", ")
                        ),
                    )
                    .for_decl(decl),
                );
            }
        }
    }
    out
}
