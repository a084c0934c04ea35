//! Ground-truth decision procedures.
//!
//! [`bfs_bounded_plan`] searches breadth-first over total states, so the plan
//! it returns is a shortest one. States are bit-packed so that instances with
//! a thousand variables still fit comfortably in memory. The brute-force
//! solvers answer the source problems of the reductions.

use std::collections::BTreeSet;

use indexmap::IndexSet;
use itertools::Itertools;
use thiserror::Error;

use crate::reductions::{HittingSetInstance, PartitionedGraph, Vertex};
use crate::sas::{PartialState, Plan, SasInstance, State};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("state budget of {limit} states exceeded")]
    StateBudget { limit: usize },
    #[error("hitting set enumeration needs |S| <= {cap}, got {set_size}")]
    SetTooLarge { set_size: usize, cap: usize },
    #[error("clique enumeration needs n^k <= {cap}")]
    CliqueTooLarge { cap: u64 },
}

pub const HITTING_SET_CAP: usize = 24;
pub const CLIQUE_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsConfig {
    /// Maximum number of distinct states to store; `None` for no limit.
    pub max_states: Option<usize>,
}

impl BfsConfig {
    pub fn unbounded() -> Self {
        Self { max_states: None }
    }
}

impl Default for BfsConfig {
    fn default() -> Self {
        Self {
            max_states: Some(4_000_000),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// A shortest plan, if one of length at most `k` exists.
    pub plan: Option<Plan>,
    /// Distinct states stored by the search, including the initial state.
    pub explored: usize,
}

/// Fixed-width bit fields, never straddling a word boundary.
struct Layout {
    bits: usize,
    per_word: usize,
    words: usize,
}

/// `(word, mask, value)` triples of a partial state.
type Condition = Vec<(usize, u64, u64)>;

impl Layout {
    fn new(n: usize, domain_size: u32) -> Self {
        let bits = (u32::BITS - (domain_size - 1).leading_zeros()).max(1) as usize;
        let per_word = 64 / bits;
        Self {
            bits,
            per_word,
            words: n.div_ceil(per_word),
        }
    }

    fn pack(&self, state: &State) -> Box<[u64]> {
        let mut words = vec![0u64; self.words];
        for (var, &x) in state.values().iter().enumerate() {
            words[var / self.per_word] |= u64::from(x) << ((var % self.per_word) * self.bits);
        }
        words.into_boxed_slice()
    }

    fn condition(&self, partial: &PartialState) -> Condition {
        let field = (1u64 << self.bits) - 1;
        let mut out: Condition = Vec::new();
        for (var, x) in partial.defined() {
            let (word, shift) = (var / self.per_word, (var % self.per_word) * self.bits);
            match out.last_mut() {
                Some((w, mask, value)) if *w == word => {
                    *mask |= field << shift;
                    *value |= u64::from(x) << shift;
                }
                _ => out.push((word, field << shift, u64::from(x) << shift)),
            }
        }
        out
    }
}

fn satisfies(state: &[u64], cond: &Condition) -> bool {
    cond.iter().all(|&(w, mask, value)| state[w] & mask == value)
}

fn apply_packed(state: &[u64], eff: &Condition) -> Box<[u64]> {
    let mut next: Box<[u64]> = state.into();
    for &(w, mask, value) in eff {
        next[w] = (next[w] & !mask) | value;
    }
    next
}

pub fn bfs_bounded_plan(inst: &SasInstance, k: usize) -> Result<OracleResult, OracleError> {
    bfs_bounded_plan_with(inst, k, &BfsConfig::default())
}

/// Breadth-first search from the initial state, expanding actions in index
/// order. A state is stored the first time it is generated, at its minimal
/// depth; states at depth `k` are not expanded.
pub fn bfs_bounded_plan_with(inst: &SasInstance, k: usize, config: &BfsConfig) -> Result<OracleResult, OracleError> {
    let layout = Layout::new(inst.num_vars(), inst.domain().size());
    let goal = layout.condition(inst.goal());
    let actions: Vec<(Condition, Condition)> = inst
        .actions()
        .iter()
        .map(|a| (layout.condition(a.pre()), layout.condition(a.eff())))
        .collect();

    let mut visited: IndexSet<Box<[u64]>> = IndexSet::new();
    // (parent index, action index, depth) per stored state.
    let mut meta: Vec<(usize, usize, usize)> = Vec::new();
    let init = layout.pack(inst.init());
    let init_is_goal = satisfies(&init, &goal);
    visited.insert(init);
    meta.push((usize::MAX, usize::MAX, 0));
    if init_is_goal {
        return Ok(OracleResult {
            plan: Some(Plan::empty()),
            explored: 1,
        });
    }

    let mut cursor = 0;
    while cursor < visited.len() {
        let depth = meta[cursor].2;
        if depth >= k {
            break;
        }
        let state = visited[cursor].clone();
        for (index, (pre, eff)) in actions.iter().enumerate() {
            if !satisfies(&state, pre) {
                continue;
            }
            let next = apply_packed(&state, eff);
            let is_goal = satisfies(&next, &goal);
            if !visited.insert(next) {
                continue;
            }
            meta.push((cursor, index, depth + 1));
            if is_goal {
                return Ok(OracleResult {
                    plan: Some(trace_back(&meta, visited.len() - 1)),
                    explored: visited.len(),
                });
            }
            if let Some(limit) = config.max_states {
                if visited.len() > limit {
                    return Err(OracleError::StateBudget { limit });
                }
            }
        }
        cursor += 1;
    }
    Ok(OracleResult {
        plan: None,
        explored: visited.len(),
    })
}

fn trace_back(meta: &[(usize, usize, usize)], mut node: usize) -> Plan {
    let mut steps = Vec::new();
    while node != 0 {
        let (parent, action, _) = meta[node];
        steps.push(action);
        node = parent;
    }
    steps.reverse();
    Plan::new(steps)
}

/// Some hitting set of size at most `k`, trying subsets by increasing size
/// and lexicographically within a size.
pub fn brute_force_hitting_set(hs: &HittingSetInstance) -> Result<Option<BTreeSet<usize>>, OracleError> {
    if hs.set_size() > HITTING_SET_CAP {
        return Err(OracleError::SetTooLarge {
            set_size: hs.set_size(),
            cap: HITTING_SET_CAP,
        });
    }
    for size in 0..=hs.k().min(hs.set_size()) {
        for subset in (0..hs.set_size()).combinations(size) {
            let candidate: BTreeSet<usize> = subset.into_iter().collect();
            if hs.is_hitting_set(&candidate) {
                return Ok(Some(candidate));
            }
        }
    }
    Ok(None)
}

/// The lexicographically first `k`-clique with one vertex per part.
pub fn brute_force_partitioned_clique(g: &PartitionedGraph) -> Result<Option<Vec<Vertex>>, OracleError> {
    let feasible = u32::try_from(g.k())
        .ok()
        .and_then(|k| (g.n() as u64).checked_pow(k))
        .is_some_and(|total| total <= CLIQUE_CAP);
    if !feasible {
        return Err(OracleError::CliqueTooLarge { cap: CLIQUE_CAP });
    }
    let mut chosen = Vec::with_capacity(g.k());
    Ok(extend_clique(g, &mut chosen).then_some(chosen))
}

fn extend_clique(g: &PartitionedGraph, chosen: &mut Vec<Vertex>) -> bool {
    let part = chosen.len();
    if part == g.k() {
        return true;
    }
    for index in 0..g.n() {
        let v = Vertex::new(part, index);
        if chosen.iter().all(|&u| g.has_edge(u, v)) {
            chosen.push(v);
            if extend_clique(g, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}
