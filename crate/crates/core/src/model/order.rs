use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use super::{Model, VariableDecl};
use crate::formula::collect_refs;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("dependency cycle among {}", .0.join(", "))]
    Cycle(Vec<String>),
}

/// For every declaration, the indices of the formula-bearing declarations its
/// formula references, in reference order. Unresolved names and formulas on
/// non-formula kinds are ignored; the validator reports those.
pub fn reference_graph(model: &Model) -> Vec<Vec<usize>> {
    let index: crate::names::NameMap<usize> = {
        let mut map = crate::names::NameMap::new();
        for (i, decl) in model.declarations.iter().enumerate() {
            if !map.contains(&decl.name) {
                map.insert(decl.name.clone(), i);
            }
        }
        map
    };
    model
        .declarations
        .iter()
        .map(|decl| match (&decl.formula, decl.kind.is_formula_bearing()) {
            (Some(formula), true) => collect_refs(formula)
                .iter()
                .filter_map(|name| index.get(name).copied())
                .filter(|&i| model.declarations[i].kind.is_formula_bearing())
                .collect(),
            _ => Vec::new(),
        })
        .collect()
}

/// Formula-bearing variables ordered so each follows everything it
/// references. Kahn's algorithm; among ready variables the earliest
/// declared goes first.
pub fn topological_order(model: &Model) -> Result<Vec<&VariableDecl>, OrderError> {
    let graph = reference_graph(model);
    let decls = &model.declarations;
    let mut indegree = vec![0usize; decls.len()];
    let mut users: Vec<Vec<usize>> = vec![Vec::new(); decls.len()];
    for (user, refs) in graph.iter().enumerate() {
        for &dep in refs {
            indegree[user] += 1;
            users[dep].push(user);
        }
    }

    let mut ready: BinaryHeap<Reverse<usize>> = decls
        .iter()
        .enumerate()
        .filter(|(i, d)| d.kind.is_formula_bearing() && indegree[*i] == 0)
        .map(|(i, _)| Reverse(i))
        .collect();
    let mut order = Vec::new();
    while let Some(Reverse(i)) = ready.pop() {
        order.push(&decls[i]);
        for &user in &users[i] {
            indegree[user] -= 1;
            if indegree[user] == 0 {
                ready.push(Reverse(user));
            }
        }
    }

    let total = decls.iter().filter(|d| d.kind.is_formula_bearing()).count();
    if order.len() < total {
        let remaining = decls
            .iter()
            .enumerate()
            .filter(|(i, d)| d.kind.is_formula_bearing() && indegree[*i] > 0)
            .map(|(_, d)| d.name.clone())
            .collect();
        return Err(OrderError::Cycle(remaining));
    }
    Ok(order)
}
