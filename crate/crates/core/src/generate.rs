//! Seeded random generators for tests and benchmarks.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::reductions::{HittingSetInstance, PartitionedGraph, Vertex};
use crate::sas::{Action, DomainSpec, PartialState, Plan, SasInstance, State, Value};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceShape {
    pub max_vars: usize,
    pub domain: u32,
    pub max_actions: usize,
    /// Chance that a precondition entry is defined.
    pub pre_density: f64,
    /// Chance that an effect entry is defined.
    pub eff_density: f64,
    /// Chance that a goal entry is defined.
    pub goal_density: f64,
}

impl InstanceShape {
    pub fn new(max_vars: usize, domain: u32, max_actions: usize) -> Self {
        Self {
            max_vars,
            domain,
            max_actions,
            pre_density: 0.3,
            eff_density: 0.4,
            goal_density: 0.5,
        }
    }
}

fn partial<R: Rng>(rng: &mut R, n: usize, d: u32, density: f64) -> PartialState {
    PartialState::new((0..n).map(|_| rng.gen_bool(density).then(|| rng.gen_range(0..d))).collect())
}

fn total<R: Rng>(rng: &mut R, n: usize, d: u32) -> State {
    State::new((0..n).map(|_| rng.gen_range(0..d)).collect())
}

/// Between 1 and `max_vars` variables and 0 to `max_actions` actions.
pub fn random_instance<R: Rng>(rng: &mut R, shape: &InstanceShape) -> SasInstance {
    let n = rng.gen_range(1..=shape.max_vars);
    let d = shape.domain;
    let count = rng.gen_range(0..=shape.max_actions);
    let actions = (0..count)
        .map(|i| {
            let pre = partial(rng, n, d, shape.pre_density);
            let eff = partial(rng, n, d, shape.eff_density);
            Action::new(format!("a{i}"), pre, eff).expect("lengths agree")
        })
        .collect();
    let init = total(rng, n, d);
    let goal = partial(rng, n, d, shape.goal_density);
    SasInstance::new(DomainSpec::new(d).expect("domain of at least 2"), init, goal, actions).expect("in range")
}

/// Like [`random_instance`], but no two actions share an effect entry.
pub fn random_p_instance<R: Rng>(rng: &mut R, shape: &InstanceShape) -> SasInstance {
    let n = rng.gen_range(1..=shape.max_vars);
    let d = shape.domain;
    let mut free: Vec<(usize, Value)> = (0..n).flat_map(|v| (0..d).map(move |x| (v, x))).collect();
    free.shuffle(rng);
    let count = rng.gen_range(0..=shape.max_actions);
    let mut actions = Vec::with_capacity(count);
    for i in 0..count {
        let want = rng.gen_range(1..=2usize);
        let mut eff = PartialState::undefined(n);
        let mut taken = 0;
        let mut j = 0;
        while taken < want && j < free.len() {
            let (v, x) = free[j];
            if eff.get(v).is_none() {
                eff.set(v, Some(x));
                free.swap_remove(j);
                taken += 1;
            } else {
                j += 1;
            }
        }
        if taken == 0 {
            break;
        }
        let pre = partial(rng, n, d, shape.pre_density);
        actions.push(Action::new(format!("a{i}"), pre, eff).expect("lengths agree"));
    }
    let init = total(rng, n, d);
    let goal = partial(rng, n, d, shape.goal_density);
    SasInstance::new(DomainSpec::new(d).expect("domain of at least 2"), init, goal, actions).expect("in range")
}

/// Uniform sequence of action indices; empty if there are no actions.
pub fn random_sequence<R: Rng>(rng: &mut R, inst: &SasInstance, max_len: usize) -> Plan {
    if inst.actions().is_empty() {
        return Plan::empty();
    }
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| rng.gen_range(0..inst.actions().len())).collect()
}

/// Non-empty sets over `0..|S|` with `|S| ≤ max_set`, `|C| ≤ max_sets` and
/// `k ≤ min(|C|, max_k)`.
pub fn random_hitting_set<R: Rng>(rng: &mut R, max_set: usize, max_sets: usize, max_k: usize) -> HittingSetInstance {
    let s = rng.gen_range(1..=max_set);
    let c = rng.gen_range(0..=max_sets);
    let collection = (0..c)
        .map(|_| {
            let mut set = BTreeSet::new();
            set.insert(rng.gen_range(0..s));
            for e in 0..s {
                if rng.gen_bool(0.3) {
                    set.insert(e);
                }
            }
            set
        })
        .collect();
    let k = rng.gen_range(0..=c.min(max_k));
    HittingSetInstance::new(s, collection, k).expect("generated within bounds")
}

/// Each inter-part edge is present with probability `density`.
pub fn random_partitioned_graph<R: Rng>(rng: &mut R, k: usize, n: usize, density: f64) -> PartitionedGraph {
    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            for a in 0..n {
                for b in 0..n {
                    if rng.gen_bool(density) {
                        edges.push((Vertex::new(i, a), Vertex::new(j, b)));
                    }
                }
            }
        }
    }
    PartitionedGraph::new(k, n, edges).expect("generated within bounds")
}
