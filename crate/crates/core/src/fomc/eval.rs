use std::collections::HashMap;

use super::formula::{Formula, Matrix};
use super::structure::{Relation, RelationalStructure};
use super::FomcError;

/// Default cap on `|U|^(existentials + universals)`.
pub const DEFAULT_ASSIGNMENT_BUDGET: u128 = 200_000_000;

enum Compiled<'s> {
    Atom { relation: &'s Relation, slots: Vec<usize> },
    Not(Box<Compiled<'s>>),
    And(Vec<Compiled<'s>>),
    Or(Vec<Compiled<'s>>),
    Implies(Box<Compiled<'s>>, Box<Compiled<'s>>),
}

fn compile<'s>(
    m: &Matrix,
    structure: &'s RelationalStructure,
    slots: &HashMap<&str, usize>,
) -> Result<Compiled<'s>, FomcError> {
    Ok(match m {
        Matrix::Atom { relation, args } => {
            let rel = structure
                .relation(relation)
                .ok_or_else(|| FomcError::UnknownRelation(relation.clone()))?;
            if rel.arity != args.len() {
                return Err(FomcError::Arity {
                    relation: relation.clone(),
                    expected: rel.arity,
                    found: args.len(),
                });
            }
            let slots = args
                .iter()
                .map(|a| slots.get(a.as_str()).copied().ok_or_else(|| FomcError::Unbound(a.clone())))
                .collect::<Result<_, _>>()?;
            Compiled::Atom { relation: rel, slots }
        }
        Matrix::Not(inner) => Compiled::Not(Box::new(compile(inner, structure, slots)?)),
        Matrix::And(ms) => Compiled::And(ms.iter().map(|x| compile(x, structure, slots)).collect::<Result<_, _>>()?),
        Matrix::Or(ms) => Compiled::Or(ms.iter().map(|x| compile(x, structure, slots)).collect::<Result<_, _>>()?),
        Matrix::Implies(a, b) => Compiled::Implies(
            Box::new(compile(a, structure, slots)?),
            Box::new(compile(b, structure, slots)?),
        ),
    })
}

impl Compiled<'_> {
    fn holds(&self, env: &[usize]) -> bool {
        match self {
            Compiled::Atom { relation, slots } => {
                let mut buf = [0usize; 4];
                if slots.len() <= buf.len() {
                    for (b, &s) in buf.iter_mut().zip(slots) {
                        *b = env[s];
                    }
                    relation.contains(&buf[..slots.len()])
                } else {
                    let tuple: Vec<usize> = slots.iter().map(|&s| env[s]).collect();
                    relation.contains(&tuple)
                }
            }
            Compiled::Not(inner) => !inner.holds(env),
            Compiled::And(ms) => ms.iter().all(|m| m.holds(env)),
            Compiled::Or(ms) => ms.iter().any(|m| m.holds(env)),
            Compiled::Implies(a, b) => !a.holds(env) || b.holds(env),
        }
    }
}

/// Advances `env[range]` through all tuples over `0..size` in lexicographic
/// order; false once it wraps around.
fn next_assignment(env: &mut [usize], size: usize) -> bool {
    for slot in env.iter_mut().rev() {
        *slot += 1;
        if *slot < size {
            return true;
        }
        *slot = 0;
    }
    false
}

pub fn evaluate(structure: &RelationalStructure, phi: &Formula) -> Result<bool, FomcError> {
    evaluate_with_budget(structure, phi, Some(DEFAULT_ASSIGNMENT_BUDGET))
}

/// Naive model checking: some assignment of universe elements to the
/// existential variables makes the matrix true under every assignment to the
/// universal ones. Assignments are enumerated lexicographically.
pub fn evaluate_with_budget(structure: &RelationalStructure, phi: &Formula, budget: Option<u128>) -> Result<bool, FomcError> {
    let names: Vec<&str> = phi.exists.iter().chain(&phi.forall).map(String::as_str).collect();
    let slots: HashMap<&str, usize> = names.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    if slots.len() != names.len() {
        return Err(FomcError::Unbound("duplicate quantified variable".into()));
    }
    let size = structure.universe().len();
    if let Some(limit) = budget {
        let total = u32::try_from(names.len())
            .ok()
            .and_then(|e| (size as u128).checked_pow(e));
        if total.is_none_or(|t| t > limit) {
            return Err(FomcError::Budget { limit });
        }
    }
    let matrix = compile(&phi.matrix, structure, &slots)?;
    if size == 0 {
        // Unreachable for planning structures, which always contain the
        // domain values; with an empty universe only an empty prefix holds.
        return Ok(names.is_empty() && matrix.holds(&[]));
    }

    let t = phi.exists.len();
    let mut env = vec![0usize; names.len()];
    loop {
        let (_, universal) = env.split_at_mut(t);
        universal.fill(0);
        let mut all = true;
        loop {
            if !matrix.holds(&env) {
                all = false;
                break;
            }
            if !next_assignment(&mut env[t..], size) {
                break;
            }
        }
        if all {
            return Ok(true);
        }
        if !next_assignment(&mut env[..t], size) {
            return Ok(false);
        }
    }
}
