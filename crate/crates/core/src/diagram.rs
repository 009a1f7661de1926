//! Formula diagram as Graphviz DOT: one node per variable, shaped by kind,
//! and an arrow from every variable a formula uses to the variable it
//! defines.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::formula::collect_refs;
use crate::model::{Model, VariableDecl, VariableKind};

pub fn shape(kind: VariableKind) -> &'static str {
    match kind {
        VariableKind::Parameter => "triangle",
        VariableKind::InterfaceInput => "box",
        VariableKind::Intermediate => "circle",
        VariableKind::InterfaceOutput => "ellipse",
    }
}

pub const CONNECTOR_SHAPE: &str = "doublecircle";

/// Every (referenced, defined) pair, deduplicated, by defining variable in
/// declaration order. Names use their declared spelling.
pub fn edges(model: &Model) -> Vec<(&VariableDecl, &VariableDecl)> {
    let index = model.index();
    let mut out = Vec::new();
    for decl in model.formula_bearing() {
        let Some(formula) = &decl.formula else { continue };
        for name in collect_refs(formula) {
            if let Some(source) = index.get(&name) {
                out.push((*source, decl));
            }
        }
    }
    out
}

/// Renders the diagram. With `split_submodels`, each sub-model becomes a
/// cluster and a reference crossing clusters goes through a connector node
/// in each of the two clusters, joined by a dashed edge.
pub fn emit_dot(model: &Model, split_submodels: bool) -> String {
    let mut dot = String::from("digraph FormulaDiagram {\n  rankdir=LR;\n");
    let edges = edges(model);
    if !split_submodels {
        for decl in &model.declarations {
            dot.push_str(&node(&decl.name, &decl.label, shape(decl.kind), "  "));
        }
        for (from, to) in &edges {
            writeln!(dot, "  {} -> {};", quote(&from.name), quote(&to.name)).unwrap();
        }
        dot.push_str("}\n");
        return dot;
    }

    // (group, variable) pairs that need a connector, and the connections.
    let mut connectors: BTreeSet<(Option<&str>, &str)> = BTreeSet::new();
    let mut direct = Vec::new();
    let mut crossing = Vec::new();
    for &(from, to) in &edges {
        if from.submodel == to.submodel {
            direct.push((from, to));
        } else {
            connectors.insert((from.submodel.as_deref(), from.name.as_str()));
            connectors.insert((to.submodel.as_deref(), from.name.as_str()));
            crossing.push((from, to));
        }
    }
    let label_of = |name: &str| model.get(name).map_or(name.to_string(), |d| d.label.clone());

    let mut groups: Vec<Option<&str>> = vec![None];
    groups.extend(model.submodels.iter().map(|s| Some(s.as_str())));
    for group in groups {
        let indent = match group {
            None => "  ",
            Some(sub) => {
                writeln!(dot, "  subgraph {} {{", quote(&format!("cluster_{sub}"))).unwrap();
                writeln!(dot, "    label={};", quote(sub)).unwrap();
                "    "
            }
        };
        for decl in model.declarations.iter().filter(|d| d.submodel.as_deref() == group) {
            dot.push_str(&node(&decl.name, &decl.label, shape(decl.kind), indent));
        }
        for &(_, name) in connectors.iter().filter(|(g, _)| *g == group) {
            dot.push_str(&node(&connector_id(group, name), &label_of(name), CONNECTOR_SHAPE, indent));
        }
        if group.is_some() {
            dot.push_str("  }\n");
        }
    }

    for (from, to) in direct {
        writeln!(dot, "  {} -> {};", quote(&from.name), quote(&to.name)).unwrap();
    }
    let mut bridges = BTreeSet::new();
    for (from, to) in crossing {
        let out = connector_id(from.submodel.as_deref(), &from.name);
        let inbound = connector_id(to.submodel.as_deref(), &from.name);
        if bridges.insert((out.clone(), inbound.clone())) {
            writeln!(dot, "  {} -> {};", quote(&from.name), quote(&out)).unwrap();
            writeln!(dot, "  {} -> {} [style=dashed];", quote(&out), quote(&inbound)).unwrap();
        }
        writeln!(dot, "  {} -> {};", quote(&inbound), quote(&to.name)).unwrap();
    }
    dot.push_str("}\n");
    dot
}

fn connector_id(group: Option<&str>, name: &str) -> String {
    format!("connector:{}:{name}", group.unwrap_or(""))
}

fn node(id: &str, label: &str, shape: &str, indent: &str) -> String {
    format!("{indent}{} [label={}, shape={shape}];\n", quote(id), quote(label))
}

fn quote(text: &str) -> String {
    format!("\"{}\"", text.replace('\\', "\\\\").replace('"', "\\\""))
}
