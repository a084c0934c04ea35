//! The P/U/B/S restriction classes and the precondition/effect counters.

use std::collections::HashMap;
use std::fmt;

use crate::sas::{SasInstance, Value};

/// Which restrictions an instance satisfies, plus `m_p`/`m_e`, the maximum
/// number of defined preconditions and effects over all actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RestrictionProfile {
    /// Post-unique: each `(v, x)` is an effect of at most one action.
    pub p: bool,
    /// Unary: every action has exactly one defined effect.
    pub u: bool,
    /// Binary domain.
    pub b: bool,
    /// Single-valued prevail conditions.
    pub s: bool,
    pub m_p: usize,
    pub m_e: usize,
}

impl fmt::Display for RestrictionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "P={} U={} B={} S={} m_p={} m_e={}",
            self.p, self.u, self.b, self.s, self.m_p, self.m_e
        )
    }
}

/// Number of actions having each `(variable, value)` pair as an effect.
fn effect_multiplicity(inst: &SasInstance) -> HashMap<(usize, Value), usize> {
    let mut counts = HashMap::new();
    for action in inst.actions() {
        for &entry in action.effects() {
            *counts.entry(entry).or_insert(0) += 1;
        }
    }
    counts
}

pub fn check_restrictions(inst: &SasInstance) -> RestrictionProfile {
    let actions = inst.actions();
    let p = effect_multiplicity(inst).values().all(|&c| c <= 1);
    let u = actions.iter().all(|a| a.effects().len() == 1);
    let b = inst.domain().size() == 2;

    // For every variable, all prevail conditions (defined pre, undefined eff)
    // must agree on one value.
    let mut prevail: HashMap<usize, Value> = HashMap::new();
    let mut s = true;
    'outer: for action in actions {
        for &(var, x) in action.preconditions() {
            if action.eff().get(var).is_some() {
                continue;
            }
            if *prevail.entry(var).or_insert(x) != x {
                s = false;
                break 'outer;
            }
        }
    }

    RestrictionProfile {
        p,
        u,
        b,
        s,
        m_p: actions.iter().map(|a| a.preconditions().len()).max().unwrap_or(0),
        m_e: actions.iter().map(|a| a.effects().len()).max().unwrap_or(0),
    }
}

/// Relaxation of P: every action has at most `max_pre` defined preconditions
/// and each `(v, x)` is produced by at most `max_same_effect` actions.
/// With `max_same_effect = 1` and an unconstrained `max_pre` this is exactly P.
pub fn relaxed_p_gate(inst: &SasInstance, max_pre: usize, max_same_effect: usize) -> bool {
    inst.actions().iter().all(|a| a.preconditions().len() <= max_pre)
        && effect_multiplicity(inst).values().all(|&c| c <= max_same_effect)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sas::{Action, DomainSpec, PartialState, State};

    #[allow(clippy::type_complexity)]
    fn inst(d: u32, n: usize, actions: Vec<(Vec<(usize, Value)>, Vec<(usize, Value)>)>) -> SasInstance {
        let actions = actions
            .into_iter()
            .enumerate()
            .map(|(i, (pre, eff))| {
                Action::new(
                    format!("a{i}"),
                    PartialState::from_pairs(n, pre),
                    PartialState::from_pairs(n, eff),
                )
                .unwrap()
            })
            .collect();
        SasInstance::new(
            DomainSpec::new(d).unwrap(),
            State::new(vec![0; n]),
            PartialState::undefined(n),
            actions,
        )
        .unwrap()
    }

    #[test]
    fn same_effect_breaks_p() {
        let i = inst(2, 1, vec![(vec![], vec![(0, 1)]), (vec![], vec![(0, 1)])]);
        let prof = check_restrictions(&i);
        assert!(!prof.p);
        assert!(prof.u && prof.b && prof.s);
        assert!(relaxed_p_gate(&i, 0, 2));
        assert!(!relaxed_p_gate(&i, 0, 1));
    }

    #[test]
    fn empty_action_set() {
        let prof = check_restrictions(&inst(3, 2, vec![]));
        assert_eq!((prof.m_p, prof.m_e), (0, 0));
        assert!(prof.p && prof.u && prof.s);
        assert!(!prof.b);
    }

    #[test]
    fn unary_needs_exactly_one_effect() {
        let noop = inst(2, 2, vec![(vec![], vec![])]);
        assert!(!check_restrictions(&noop).u);
        let two = inst(2, 2, vec![(vec![], vec![(0, 1), (1, 1)])]);
        let prof = check_restrictions(&two);
        assert!(!prof.u);
        assert_eq!(prof.m_e, 2);
    }

    #[test]
    fn prevail_conditions() {
        // Conflicting prevail values on variable 0.
        let bad = inst(2, 2, vec![(vec![(0, 0)], vec![(1, 1)]), (vec![(0, 1)], vec![(1, 0)])]);
        assert!(!check_restrictions(&bad).s);
        // A precondition on a changed variable is not a prevail condition.
        let ok = inst(2, 2, vec![(vec![(0, 0)], vec![(0, 1)]), (vec![(0, 1)], vec![(1, 0)])]);
        assert!(check_restrictions(&ok).s);
    }

    #[test]
    fn precondition_cap() {
        let i = inst(2, 3, vec![(vec![(0, 0), (1, 0), (2, 0)], vec![(0, 1)])]);
        assert_eq!(check_restrictions(&i).m_p, 3);
        assert!(!relaxed_p_gate(&i, 2, 1));
        assert!(relaxed_p_gate(&i, 3, 1));
    }
}
