//! Seeded random models: a random DAG of variables with random formulas
//! drawn from the whole formula grammar.

use rand::seq::SliceRandom;
use rand::Rng;
use ssmi_core::formula::{BinaryOperator, Expression, Function};
use ssmi_core::model::{Model, NumberFormat, VariableDecl};

const SUBMODELS: [&str; 3] = ["Costs", "Usage", "Totals"];

pub fn random_model<R: Rng>(rng: &mut R) -> Model {
    let mut decls = Vec::new();
    let mut available: Vec<String> = Vec::new();

    for i in 1..=rng.gen_range(1..=4) {
        let name = format!("Rate_{i}");
        decls.push(VariableDecl::parameter(&name, random_value(rng)).with_format(random_format(rng)));
        available.push(name);
    }
    for i in 1..=rng.gen_range(1..=3) {
        let name = format!("Qty_{i}");
        decls.push(VariableDecl::input(&name, random_value(rng)).with_format(random_format(rng)));
        available.push(name);
    }
    let intermediates = rng.gen_range(1..=6);
    let outputs = rng.gen_range(1..=2);
    for i in 1..=intermediates + outputs {
        let formula = random_formula(rng, &available);
        let decl = if i <= intermediates {
            VariableDecl::intermediate(&format!("Step_{i}"), formula)
        } else {
            VariableDecl::output(&format!("Result_{}", i - intermediates), formula)
        };
        available.push(decl.name.clone());
        decls.push(decl.with_format(random_format(rng)));
    }

    if rng.gen_bool(0.3) {
        let count = rng.gen_range(1..=SUBMODELS.len());
        for decl in decls.iter_mut() {
            if decl.kind.is_formula_bearing() || rng.gen_bool(0.2) {
                let sub = SUBMODELS[..count].choose(rng).expect("non-empty");
                if rng.gen_bool(0.85) {
                    decl.submodel = Some(sub.to_string());
                }
            }
        }
    }
    if rng.gen_bool(0.5) {
        decls.shuffle(rng);
    }
    Model::new(decls)
}

fn random_value<R: Rng>(rng: &mut R) -> f64 {
    match rng.gen_range(0..3) {
        0 => rng.gen_range(-20..=100) as f64,
        1 => (rng.gen_range(-5000..=20000) as f64) / 100.0,
        _ => rng.gen_range(0.0..1.0),
    }
}

fn random_format<R: Rng>(rng: &mut R) -> NumberFormat {
    match rng.gen_range(0..6) {
        0 => NumberFormat::Currency(rng.gen_range(0..=2)),
        1 => NumberFormat::Percent(rng.gen_range(0..=2)),
        2 => NumberFormat::Integer,
        _ => NumberFormat::General,
    }
}

/// A formula over `available`; almost always references at least one name.
pub fn random_formula<R: Rng>(rng: &mut R, available: &[String]) -> Expression {
    let depth = rng.gen_range(0..=3);
    let expr = random_expr(rng, available, depth);
    if ssmi_core::formula::collect_refs(&expr).is_empty() && rng.gen_bool(0.9) {
        let name = available.choose(rng).expect("at least one name");
        Expression::binary(BinaryOperator::Add, expr, Expression::var(name))
    } else {
        expr
    }
}

fn literal<R: Rng>(rng: &mut R) -> Expression {
    match rng.gen_range(0..3) {
        0 => Expression::number(rng.gen_range(0..=10) as f64),
        1 => Expression::number((rng.gen_range(0..=1000) as f64) / 100.0),
        _ => Expression::number(rng.gen_range(0.0..100.0)),
    }
}

fn leaf<R: Rng>(rng: &mut R, available: &[String]) -> Expression {
    if rng.gen_bool(0.75) {
        Expression::var(available.choose(rng).expect("at least one name"))
    } else {
        literal(rng)
    }
}

const ARITHMETIC: [BinaryOperator; 4] = [
    BinaryOperator::Add,
    BinaryOperator::Sub,
    BinaryOperator::Mul,
    BinaryOperator::Div,
];
const COMPARISONS: [BinaryOperator; 6] = [
    BinaryOperator::Lt,
    BinaryOperator::Gt,
    BinaryOperator::Le,
    BinaryOperator::Ge,
    BinaryOperator::Eq,
    BinaryOperator::Ne,
];

pub fn random_expr<R: Rng>(rng: &mut R, available: &[String], depth: u32) -> Expression {
    if depth == 0 {
        return leaf(rng, available);
    }
    let sub = |rng: &mut R| random_expr(rng, available, depth - 1);
    match rng.gen_range(0..20) {
        0..=7 => {
            let op = *ARITHMETIC.choose(rng).unwrap();
            Expression::binary(op, sub(rng), sub(rng))
        }
        8 => {
            let exponent = if rng.gen_bool(0.5) {
                Expression::number(rng.gen_range(0..=3) as f64)
            } else {
                sub(rng)
            };
            Expression::binary(BinaryOperator::Pow, sub(rng), exponent)
        }
        9 | 10 => Expression::negate(sub(rng)),
        11 | 12 => {
            let op = *COMPARISONS.choose(rng).unwrap();
            let condition = Expression::binary(op, sub(rng), sub(rng));
            Expression::call(Function::If, vec![condition, sub(rng), sub(rng)])
        }
        13 => Expression::call(Function::If, vec![sub(rng), sub(rng), sub(rng)]),
        14 | 15 => {
            let function = *[Function::Min, Function::Max, Function::Sum].choose(rng).unwrap();
            let args = (0..rng.gen_range(1..=3)).map(|_| sub(rng)).collect();
            Expression::call(function, args)
        }
        16 => Expression::call(
            Function::Round,
            vec![sub(rng), Expression::number(rng.gen_range(0..=3) as f64)],
        ),
        17 => {
            let op = *COMPARISONS.choose(rng).unwrap();
            Expression::binary(op, sub(rng), sub(rng))
        }
        _ => leaf(rng, available),
    }
}
