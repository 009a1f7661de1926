use std::collections::BTreeSet;
use std::fmt;

use super::{Expression, Function, OperatorKind};
use crate::names::name_key;

/// Variable names in order of first occurrence (left to right, depth first),
/// without duplicates. Names compare case-insensitively; the first spelling
/// wins.
pub fn collect_refs(expr: &Expression) -> Vec<String> {
    fn walk(expr: &Expression, seen: &mut BTreeSet<String>, out: &mut Vec<String>) {
        match expr {
            Expression::Number(_) => {}
            Expression::Variable(name) => {
                if seen.insert(name_key(name)) {
                    out.push(name.clone());
                }
            }
            Expression::Negate(inner) => walk(inner, seen, out),
            Expression::Binary { left, right, .. } => {
                walk(left, seen, out);
                walk(right, seen, out);
            }
            Expression::Call { args, .. } => {
                for arg in args {
                    walk(arg, seen, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    walk(expr, &mut BTreeSet::new(), &mut out);
    out
}

/// Every operator kind occurring anywhere in the tree.
pub fn operator_kinds(expr: &Expression) -> BTreeSet<OperatorKind> {
    operator_kinds_by_slot(expr)
        .into_iter()
        .flat_map(|slot| slot.kinds)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IfArgument {
    Condition,
    Then,
    Else,
}

impl IfArgument {
    fn from_index(index: usize) -> Self {
        match index {
            0 => IfArgument::Condition,
            1 => IfArgument::Then,
            _ => IfArgument::Else,
        }
    }
}

/// One hop into an IF argument: the `ordinal`-th IF (1-based, in traversal
/// order) of the enclosing slot, and which of its arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlotStep {
    pub ordinal: usize,
    pub argument: IfArgument,
}

/// Location of a slot; the empty path is the top level of the formula.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlotPath(pub Vec<SlotStep>);

impl SlotPath {
    pub fn is_top(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for SlotPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("top")?;
        for step in &self.0 {
            let arg = match step.argument {
                IfArgument::Condition => "condition",
                IfArgument::Then => "then",
                IfArgument::Else => "else",
            };
            write!(f, ".IF{}.{}", step.ordinal, arg)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub path: SlotPath,
    pub kinds: BTreeSet<OperatorKind>,
}

/// Partitions the formula into slots and reports the operator kinds of each.
///
/// The top level is one slot. Every argument of an IF call opens a fresh
/// slot, while the IF itself counts as `IF` in the slot that contains it.
/// Arguments of other functions stay in the enclosing slot. Slots are
/// returned top first, then in the order they are opened.
pub fn operator_kinds_by_slot(expr: &Expression) -> Vec<Slot> {
    struct Open {
        slot: Slot,
        ifs_seen: usize,
    }

    fn walk(expr: &Expression, current: usize, slots: &mut Vec<Open>) {
        match expr {
            Expression::Number(_) | Expression::Variable(_) => {}
            Expression::Negate(inner) => {
                slots[current].slot.kinds.insert(OperatorKind::Minus);
                walk(inner, current, slots);
            }
            Expression::Binary { op, left, right } => {
                slots[current].slot.kinds.insert(op.kind());
                walk(left, current, slots);
                walk(right, current, slots);
            }
            Expression::Call {
                function: Function::If,
                args,
            } => {
                let open = &mut slots[current];
                open.slot.kinds.insert(OperatorKind::Function(Function::If));
                open.ifs_seen += 1;
                let ordinal = open.ifs_seen;
                let parent = open.slot.path.clone();
                for (index, arg) in args.iter().enumerate() {
                    let mut path = parent.clone();
                    path.0.push(SlotStep {
                        ordinal,
                        argument: IfArgument::from_index(index),
                    });
                    slots.push(Open {
                        slot: Slot {
                            path,
                            kinds: BTreeSet::new(),
                        },
                        ifs_seen: 0,
                    });
                    let child = slots.len() - 1;
                    walk(arg, child, slots);
                }
            }
            Expression::Call { function, args } => {
                slots[current].slot.kinds.insert(OperatorKind::Function(*function));
                for arg in args {
                    walk(arg, current, slots);
                }
            }
        }
    }

    let mut slots = vec![Open {
        slot: Slot {
            path: SlotPath::default(),
            kinds: BTreeSet::new(),
        },
        ifs_seen: 0,
    }];
    walk(expr, 0, &mut slots);
    slots.into_iter().map(|open| open.slot).collect()
}
