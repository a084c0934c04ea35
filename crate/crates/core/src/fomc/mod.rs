//! Bounded planning as Σ₂,₂ first-order model checking.
//!
//! [`build_structure`] turns an instance into a finite relational structure,
//! [`build_phi`] writes the sentence for plan bound `k`, and [`evaluate`]
//! decides it by enumerating assignments. [`model_check_plan`] ties the three
//! together, handling `k = 0` by a direct goal test.

mod eval;
mod formula;
mod structure;

use thiserror::Error;

pub use eval::{evaluate, evaluate_with_budget, DEFAULT_ASSIGNMENT_BUDGET};
pub use formula::{build_fvalue, build_phi, Formula, Matrix};
pub use structure::{add_dummy, build_structure, Element, Relation, RelationalStructure, DUMMY_NAME};

use crate::sas::{is_goal_state, SasInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FomcError {
    #[error("the plan bound must be at least 1 to build the formula")]
    ZeroBound,
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("relation `{relation}` has arity {expected}, used with {found} arguments")]
    Arity {
        relation: String,
        expected: usize,
        found: usize,
    },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("evaluation would enumerate more than {limit} assignments")]
    Budget { limit: u128 },
}

/// Whether `inst` has a plan of length at most `k`, decided through the
/// structure and sentence.
pub fn model_check_plan(inst: &SasInstance, k: usize, budget: Option<u128>) -> Result<bool, FomcError> {
    if k == 0 {
        return Ok(is_goal_state(inst.init(), inst.goal()).expect("instance lengths agree"));
    }
    let structure = build_structure(&add_dummy(inst));
    evaluate_with_budget(&structure, &build_phi(k)?, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sas::{Action, DomainSpec, PartialState, State};

    fn tiny(init: u32, goal: Option<u32>, with_flip: bool) -> SasInstance {
        let actions = if with_flip {
            vec![Action::new("flip", PartialState::new(vec![Some(0)]), PartialState::new(vec![Some(1)])).unwrap()]
        } else {
            vec![]
        };
        SasInstance::new(
            DomainSpec::new(2).unwrap(),
            State::new(vec![init]),
            PartialState::new(vec![goal]),
            actions,
        )
        .unwrap()
    }

    #[test]
    fn structure_sizes() {
        let inst = tiny(0, None, true);
        let s = build_structure(&inst);
        assert_eq!(s.universe().len(), 5);
        let init = s.relation("init").unwrap();
        assert_eq!(init.len(), 1);
        assert!(init.contains(&[s.var_index(0), s.value_index(0)]));
        assert!(s.relation("goalv").unwrap().is_empty());
        assert_eq!(s.relation("dom").unwrap().len(), 3);
        assert!(s.relation("dom").unwrap().contains(&[s.undefined_index()]));
        assert!(s.relation("postv").unwrap().contains(&[s.action_index(0), 0, s.value_index(1)]));
        assert!(s.relation("post").unwrap().contains(&[s.action_index(0), 0]));
    }

    #[test]
    fn dummy_is_idempotent() {
        let inst = tiny(0, Some(1), true);
        let once = add_dummy(&inst);
        assert_eq!(once.actions().len(), 2);
        assert_eq!(add_dummy(&once), once);
        // With only the dummy, a plan of two no-ops works iff init is a goal.
        let solved = add_dummy(&tiny(1, Some(1), false));
        assert!(crate::sas::validate_plan(&solved, &crate::Plan::new(vec![0, 0])).unwrap());
        let unsolved = add_dummy(&tiny(0, Some(1), false));
        assert!(!crate::sas::validate_plan(&unsolved, &crate::Plan::new(vec![0, 0])).unwrap());
    }

    #[test]
    fn small_sentences() {
        let s = build_structure(&tiny(0, None, true));
        let exists_action = Formula {
            exists: vec!["a".into()],
            forall: vec![],
            matrix: Matrix::atom("act", &["a"]),
        };
        assert!(evaluate(&s, &exists_action).unwrap());

        // No variables: the guarded universal is vacuous.
        let empty = SasInstance::new(DomainSpec::new(2).unwrap(), State::new(vec![]), PartialState::new(vec![]), vec![])
            .unwrap();
        let s0 = build_structure(&add_dummy(&empty));
        let vacuous = Formula {
            exists: vec!["a".into()],
            forall: vec!["v".into()],
            matrix: Matrix::implies(Matrix::atom("var", &["v"]), Matrix::atom("act", &["a"])),
        };
        assert!(evaluate(&s0, &vacuous).unwrap());
    }

    #[test]
    fn end_to_end_tiny() {
        assert!(model_check_plan(&tiny(0, Some(1), true), 1, None).unwrap());
        assert!(!model_check_plan(&tiny(0, Some(1), true), 0, None).unwrap());
        assert!(!model_check_plan(&tiny(0, Some(1), false), 2, None).unwrap());
        assert!(model_check_plan(&tiny(1, Some(1), false), 1, None).unwrap());
    }

    #[test]
    fn structural_errors() {
        let s = build_structure(&tiny(0, None, true));
        let bad = Formula {
            exists: vec!["a".into()],
            forall: vec![],
            matrix: Matrix::atom("nope", &["a"]),
        };
        assert_eq!(evaluate(&s, &bad), Err(FomcError::UnknownRelation("nope".into())));
        let arity = Formula {
            exists: vec!["a".into()],
            forall: vec![],
            matrix: Matrix::atom("act", &["a", "a"]),
        };
        assert!(matches!(evaluate(&s, &arity), Err(FomcError::Arity { .. })));
        let unbound = Formula {
            exists: vec![],
            forall: vec![],
            matrix: Matrix::atom("act", &["a"]),
        };
        assert_eq!(evaluate(&s, &unbound), Err(FomcError::Unbound("a".into())));
        assert!(matches!(
            evaluate_with_budget(&s, &build_phi(3).unwrap(), Some(10)),
            Err(FomcError::Budget { limit: 10 })
        ));
    }
}
