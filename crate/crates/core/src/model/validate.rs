use std::collections::BTreeSet;

use super::{reference_graph, Diagnostic, Model, VariableKind};
use crate::formula::collect_refs;
use crate::names::{check_name, default_label, derive_defined_name, name_key, NameError, NameMap};

/// Longest sheet name a workbook accepts.
const MAX_SHEET_NAME: usize = 31;

/// Structural rules every model must satisfy before it is laid out.
pub fn validate(model: &Model) -> Vec<Diagnostic> {
    if model.declarations.is_empty() {
        return vec![Diagnostic::warning("empty-model", "empty model")];
    }
    let mut out = Vec::new();
    let mut seen: NameMap<()> = NameMap::new();

    for decl in &model.declarations {
        match check_name(&decl.name) {
            Ok(()) => {}
            Err(NameError::CellReference(_)) => out.push(
                Diagnostic::error(
                    "cell-reference-name",
                    format!("name collides with cell reference: {}", decl.name),
                )
                .for_decl(decl),
            ),
            Err(err) => out.push(Diagnostic::error("illegal-name", err.to_string()).for_decl(decl)),
        }

        if decl.label != default_label(&decl.name) {
            match derive_defined_name(&decl.label) {
                Ok(derived) if derived == decl.name => {}
                Ok(derived) => out.push(
                    Diagnostic::error(
                        "label-mismatch",
                        format!(
                            "label {:?} names the cell {derived}, not {}",
                            decl.label, decl.name
                        ),
                    )
                    .for_decl(decl),
                ),
                Err(NameError::CellReference(derived)) => out.push(
                    Diagnostic::error(
                        "cell-reference-name",
                        format!("name collides with cell reference: label {:?} becomes {derived}", decl.label),
                    )
                    .for_decl(decl),
                ),
                Err(err) => out.push(
                    Diagnostic::error("illegal-name", format!("label {:?}: {err}", decl.label)).for_decl(decl),
                ),
            }
        }

        if seen.insert(decl.name.clone(), ()).is_some() {
            out.push(
                Diagnostic::error(
                    "duplicate-name",
                    format!("duplicate name {} (names are case-insensitive)", decl.name),
                )
                .for_decl(decl),
            );
        }

        if !decl.format.is_valid() {
            out.push(
                Diagnostic::error("invalid-format", format!("format {} has too many decimals", decl.format))
                    .for_decl(decl),
            );
        }

        if decl.kind.is_formula_bearing() {
            if decl.formula.is_none() {
                out.push(
                    Diagnostic::error("missing-formula", format!("{} needs a formula", decl.name)).for_decl(decl),
                );
            }
            if decl.initial_value.is_some() {
                out.push(
                    Diagnostic::error(
                        "unexpected-value",
                        format!("{} is defined by a formula and cannot carry an initial value", decl.name),
                    )
                    .for_decl(decl),
                );
            }
        } else {
            if decl.formula.is_some() {
                out.push(
                    Diagnostic::error(
                        "unexpected-formula",
                        format!(
                            "{} is a {} and takes a number, not a formula",
                            decl.name,
                            decl.kind.keyword()
                        ),
                    )
                    .for_decl(decl),
                );
            }
            if decl.initial_value.is_none() && decl.formula.is_none() {
                out.push(
                    Diagnostic::error("missing-value", format!("{} needs an initial value", decl.name))
                        .for_decl(decl),
                );
            }
        }

        if let Some(sub) = &decl.submodel {
            if !model.submodels.contains(sub) {
                out.push(Diagnostic::error("unknown-submodel", format!("unknown sub-model {sub}")).for_decl(decl));
            }
        }
    }

    for sub in &model.submodels {
        if sub.len() + "Model ".len() > MAX_SHEET_NAME {
            out.push(Diagnostic::error(
                "sheet-name",
                format!("sub-model name {sub} is too long for a sheet name"),
            ));
        }
    }

    let declared = model.index();
    let mut referenced: BTreeSet<String> = BTreeSet::new();
    for decl in &model.declarations {
        let Some(formula) = &decl.formula else { continue };
        let refs = collect_refs(formula);
        for name in &refs {
            referenced.insert(name_key(name));
            if !declared.contains(name) {
                out.push(
                    Diagnostic::error("unresolved-reference", format!("unresolved reference {name}")).for_decl(decl),
                );
            }
        }
        if refs.is_empty() && decl.kind.is_formula_bearing() {
            out.push(
                Diagnostic::warning(
                    "constant-formula",
                    format!("{} has a constant formula; consider a parameter", decl.name),
                )
                .for_decl(decl),
            );
        }
    }

    for cycle in find_cycles(model) {
        let path: Vec<&str> = cycle.iter().map(|&i| model.declarations[i].name.as_str()).collect();
        let first = &model.declarations[cycle[0]];
        out.push(Diagnostic::error("cycle", format!("cycle [{}]", path.join(" → "))).for_decl(first));
    }

    if model.of_kind(VariableKind::InterfaceOutput).next().is_none() {
        out.push(Diagnostic::warning("no-output", "model declares no output variable"));
    }

    for decl in &model.declarations {
        if !decl.kind.is_formula_bearing() && !referenced.contains(&name_key(&decl.name)) {
            out.push(
                Diagnostic::warning("unused-input", format!("{} is never used by a formula", decl.name))
                    .for_decl(decl),
            );
        }
    }
    out
}

/// Closed walks found by depth-first search from each declaration in order.
/// Each cycle is listed from its first-visited node and repeats that node at
/// the end; cycles over the same set of variables are reported once.
fn find_cycles(model: &Model) -> Vec<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }

    fn visit(
        node: usize,
        graph: &[Vec<usize>],
        marks: &mut [Mark],
        path: &mut Vec<usize>,
        found: &mut Vec<Vec<usize>>,
        seen: &mut BTreeSet<Vec<usize>>,
    ) {
        marks[node] = Mark::Active;
        path.push(node);
        for &next in &graph[node] {
            match marks[next] {
                Mark::New => visit(next, graph, marks, path, found, seen),
                Mark::Active => {
                    let start = path.iter().position(|&n| n == next).expect("active node is on the path");
                    let mut cycle = path[start..].to_vec();
                    let mut key = cycle.clone();
                    key.sort_unstable();
                    if seen.insert(key) {
                        cycle.push(next);
                        found.push(cycle);
                    }
                }
                Mark::Done => {}
            }
        }
        path.pop();
        marks[node] = Mark::Done;
    }

    let graph = reference_graph(model);
    let mut marks = vec![Mark::New; graph.len()];
    let mut found = Vec::new();
    let mut seen = BTreeSet::new();
    for node in 0..graph.len() {
        if marks[node] == Mark::New {
            visit(node, &graph, &mut marks, &mut Vec::new(), &mut found, &mut seen);
        }
    }
    found
}
