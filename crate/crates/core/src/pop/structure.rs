use std::collections::{BTreeSet, BinaryHeap};
use std::cmp::Reverse;

use rand::seq::SliceRandom;
use rand::Rng;

use super::PopError;
use crate::sas::{Plan, SasInstance, Value};

/// Occurrence identifier; position in [`PlanStructure::occurrences`].
pub type OccId = usize;

/// The initial-state occurrence `o_I`.
pub const INIT: OccId = 0;
/// The goal occurrence `o_G`.
pub const GOAL: OccId = 1;

/// What an occurrence is a copy of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OccKind {
    /// Empty precondition, effect equal to the initial state.
    Init,
    /// Precondition equal to the goal, empty effect.
    Goal,
    /// A copy of `actions[i]`.
    Action(usize),
}

/// `producer --(var = val)--> consumer`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CausalLink {
    pub producer: OccId,
    pub var: usize,
    pub val: Value,
    pub consumer: OccId,
}

/// A set of action occurrences, a binary ordering relation over them, and
/// causal links. Occurrences are never removed, so ids are stable.
#[derive(Debug, Clone)]
pub struct PlanStructure<'a> {
    inst: &'a SasInstance,
    occs: Vec<OccKind>,
    order: BTreeSet<(OccId, OccId)>,
    links: Vec<CausalLink>,
}

impl<'a> PlanStructure<'a> {
    /// `<{o_I, o_G}, {o_I < o_G}, {}>`.
    pub fn new(inst: &'a SasInstance) -> Self {
        Self {
            inst,
            occs: vec![OccKind::Init, OccKind::Goal],
            order: BTreeSet::from([(INIT, GOAL)]),
            links: Vec::new(),
        }
    }

    pub fn instance(&self) -> &'a SasInstance {
        self.inst
    }

    pub fn occurrences(&self) -> &[OccKind] {
        &self.occs
    }

    pub fn order(&self) -> &BTreeSet<(OccId, OccId)> {
        &self.order
    }

    pub fn links(&self) -> &[CausalLink] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.occs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occs.is_empty()
    }

    pub fn add_occurrence(&mut self, action: usize) -> OccId {
        self.occs.push(OccKind::Action(action));
        self.occs.len() - 1
    }

    /// Inserts `before < after`; re-adding an existing pair is a no-op.
    pub fn add_order(&mut self, before: OccId, after: OccId) {
        self.order.insert((before, after));
    }

    /// Appends `link` unless an identical link is already present.
    pub fn add_link(&mut self, link: CausalLink) {
        if !self.links.contains(&link) {
            self.links.push(link);
        }
    }

    pub fn precedes(&self, before: OccId, after: OccId) -> bool {
        self.order.contains(&(before, after))
    }

    pub fn pre_value(&self, occ: OccId, var: usize) -> Option<Value> {
        match self.occs[occ] {
            OccKind::Init => None,
            OccKind::Goal => self.inst.goal().get(var),
            OccKind::Action(a) => self.inst.action(a).pre().get(var),
        }
    }

    pub fn eff_value(&self, occ: OccId, var: usize) -> Option<Value> {
        match self.occs[occ] {
            OccKind::Init => Some(self.inst.init().get(var)),
            OccKind::Goal => None,
            OccKind::Action(a) => self.inst.action(a).eff().get(var),
        }
    }

    /// Defined precondition entries of an occurrence, ascending by variable.
    pub fn preconditions(&self, occ: OccId) -> &'a [(usize, Value)] {
        match self.occs[occ] {
            OccKind::Init => &[],
            OccKind::Goal => self.inst.goal_entries(),
            OccKind::Action(a) => self.inst.action(a).preconditions(),
        }
    }

    fn has_incoming(&self, consumer: OccId, var: usize, val: Value) -> bool {
        self.links
            .iter()
            .any(|l| l.consumer == consumer && l.var == var && l.val == val)
    }

    fn threats_to(&self, link: CausalLink) -> impl Iterator<Item = OccId> + '_ {
        (0..self.occs.len()).filter(move |&t| {
            t != link.producer
                && t != link.consumer
                && self.eff_value(t, link.var).is_some()
                && !self.precedes(t, link.producer)
                && !self.precedes(link.consumer, t)
        })
    }

    /// Unresolved threats: occurrences that may change a linked variable and
    /// are ordered neither before the producer nor after the consumer. Listed
    /// by link insertion order, then threat id.
    pub fn threats(&self) -> Vec<(OccId, CausalLink)> {
        self.links
            .iter()
            .flat_map(|&link| self.threats_to(link).map(move |t| (t, link)))
            .collect()
    }

    pub fn first_threat(&self) -> Option<(OccId, CausalLink)> {
        self.links
            .iter()
            .find_map(|&link| self.threats_to(link).next().map(|t| (t, link)))
    }

    /// Preconditions `(occ, var, val)` without a supporting causal link,
    /// ordered by occurrence id, then variable.
    pub fn open_goals(&self) -> Vec<(OccId, usize, Value)> {
        (0..self.occs.len())
            .flat_map(|o| {
                self.preconditions(o)
                    .iter()
                    .filter(move |&&(v, x)| !self.has_incoming(o, v, x))
                    .map(move |&(v, x)| (o, v, x))
            })
            .collect()
    }

    pub fn first_open_goal(&self) -> Option<(OccId, usize, Value)> {
        (0..self.occs.len()).find_map(|o| {
            self.preconditions(o)
                .iter()
                .find(|&&(v, x)| !self.has_incoming(o, v, x))
                .map(|&(v, x)| (o, v, x))
        })
    }

    /// Every precondition is linked and every threat is resolved.
    pub fn is_complete(&self) -> bool {
        self.first_open_goal().is_none() && self.first_threat().is_none()
    }

    pub fn is_acyclic(&self) -> bool {
        topological_order(self.occs.len(), &self.order, |ready| ready.pop().map(|Reverse(o)| o)).is_some()
    }

    fn action_order(&self) -> (Vec<OccId>, BTreeSet<(OccId, OccId)>) {
        let ids: Vec<OccId> = (0..self.occs.len()).filter(|&o| o != INIT && o != GOAL).collect();
        let edges = self
            .order
            .iter()
            .filter(|(a, b)| ![INIT, GOAL].contains(a) && ![INIT, GOAL].contains(b))
            .map(|&(a, b)| (a - 2, b - 2))
            .collect();
        (ids, edges)
    }

    fn to_plan(&self, positions: Vec<usize>) -> Plan {
        positions
            .into_iter()
            .map(|p| match self.occs[p + 2] {
                OccKind::Action(a) => a,
                _ => unreachable!("only action occurrences are linearized"),
            })
            .collect()
    }

    /// Topological order of the action occurrences under the ordering
    /// relation, taking the smallest available id first.
    pub fn linearize(&self) -> Result<Plan, PopError> {
        let (ids, edges) = self.action_order();
        let order = topological_order(ids.len(), &edges, |ready| ready.pop().map(|Reverse(o)| o))
            .ok_or(PopError::Cycle)?;
        Ok(self.to_plan(order))
    }

    /// A uniformly chosen available occurrence at every step.
    pub fn random_linearization<R: Rng>(&self, rng: &mut R) -> Result<Plan, PopError> {
        let (ids, edges) = self.action_order();
        let order = topological_order(ids.len(), &edges, |ready| {
            let mut items: Vec<Reverse<usize>> = std::mem::take(ready).into_vec();
            items.shuffle(rng);
            let pick = items.pop().map(|Reverse(o)| o);
            *ready = items.into();
            pick
        })
        .ok_or(PopError::Cycle)?;
        Ok(self.to_plan(order))
    }
}

/// Kahn's algorithm over nodes `0..count`; `pick` removes the next node from
/// the ready set. `None` on a cycle (including self-loops).
fn topological_order(
    count: usize,
    edges: &BTreeSet<(usize, usize)>,
    mut pick: impl FnMut(&mut BinaryHeap<Reverse<usize>>) -> Option<usize>,
) -> Option<Vec<usize>> {
    let mut indegree = vec![0usize; count];
    let mut succ = vec![Vec::new(); count];
    for &(a, b) in edges {
        indegree[b] += 1;
        succ[a].push(b);
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..count).filter(|&o| indegree[o] == 0).map(Reverse).collect();
    let mut out = Vec::with_capacity(count);
    while let Some(o) = pick(&mut ready) {
        out.push(o);
        for &b in &succ[o] {
            indegree[b] -= 1;
            if indegree[b] == 0 {
                ready.push(Reverse(b));
            }
        }
    }
    (out.len() == count).then_some(out)
}
