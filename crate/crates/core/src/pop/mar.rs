//! The McAllester–Rosenblitt planner with a plan-length bound, in its
//! original form and the link-batching variant that is FPT on post-unique
//! instances.
//!
//! Nondeterministic choices become depth-first backtracking:
//! * threat resolution tries demotion (`o_t < o_p`) before promotion
//!   (`o_c < o_t`), always on the first unresolved threat;
//! * the open goal to work on is the first one by `(occurrence, variable)`
//!   and is not backtracked over;
//! * producers are existing occurrences by ascending id, then fresh
//!   occurrences of every action with the needed effect by ascending index.

use super::structure::{CausalLink, OccId, PlanStructure};
use super::PopError;
use crate::sas::{SasInstance, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Link only the selected open goal.
    Original,
    /// Link every open goal of the consumer that the producer supplies.
    Modified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarConfig {
    pub variant: Variant,
    /// Run the modified variant on instances violating P.
    pub allow_non_p: bool,
    /// Abort after this many search nodes.
    pub node_limit: Option<u64>,
}

impl MarConfig {
    pub fn new(variant: Variant) -> Self {
        Self {
            variant,
            allow_non_p: false,
            node_limit: None,
        }
    }
}

/// Search-tree counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Calls of the recursive procedure.
    pub nodes: u64,
    /// Most threat resolutions on one root-to-leaf branch.
    pub max_line5_per_branch: usize,
    /// Most goal establishments on one root-to-leaf branch.
    pub max_establish_per_branch: usize,
}

impl SearchStats {
    pub fn within_bounds(&self, k: usize) -> bool {
        self.max_line5_per_branch <= (k + 2) * (k + 2) && self.max_establish_per_branch <= (k + 1) * (k + 1)
    }
}

/// Links added when `producer` is chosen for the open goal `(consumer, var, val)`.
///
/// The original variant adds the single link for that goal. The modified
/// variant adds a link for every currently open goal of `consumer` whose
/// value `producer` also sets.
pub fn establish_links(
    ps: &PlanStructure<'_>,
    producer: OccId,
    consumer: OccId,
    goal: (usize, Value),
    variant: Variant,
) -> Vec<CausalLink> {
    let (var, val) = goal;
    let link = |var, val| CausalLink {
        producer,
        var,
        val,
        consumer,
    };
    match variant {
        Variant::Original => vec![link(var, val)],
        Variant::Modified => ps
            .open_goals()
            .into_iter()
            .filter(|&(o, w, y)| o == consumer && ps.eff_value(producer, w) == Some(y))
            .map(|(_, w, y)| link(w, y))
            .collect(),
    }
}

pub fn mar_plan(inst: &SasInstance, k: usize, variant: Variant) -> Result<(Option<PlanStructure<'_>>, SearchStats), PopError> {
    mar_plan_with(inst, k, &MarConfig::new(variant))
}

pub fn mar_plan_with<'a>(
    inst: &'a SasInstance,
    k: usize,
    config: &MarConfig,
) -> Result<(Option<PlanStructure<'a>>, SearchStats), PopError> {
    let producers = ProducerIndex::new(inst);
    if config.variant == Variant::Modified && !config.allow_non_p && !producers.post_unique() {
        return Err(PopError::NotPostUnique);
    }
    let mut search = Search {
        k,
        variant: config.variant,
        node_limit: config.node_limit,
        producers,
        stats: SearchStats::default(),
    };
    let found = search.plan(PlanStructure::new(inst), 0, 0)?;
    Ok((found, search.stats))
}

/// Every `(var, val, action)` effect entry, sorted.
struct ProducerIndex(Vec<(usize, Value, usize)>);

impl ProducerIndex {
    fn new(inst: &SasInstance) -> Self {
        let mut entries: Vec<_> = inst
            .actions()
            .iter()
            .enumerate()
            .flat_map(|(a, action)| action.effects().iter().map(move |&(v, x)| (v, x, a)))
            .collect();
        entries.sort_unstable();
        Self(entries)
    }

    fn post_unique(&self) -> bool {
        self.0.windows(2).all(|w| (w[0].0, w[0].1) != (w[1].0, w[1].1))
    }

    /// Actions with effect `var = val`, ascending.
    fn get(&self, var: usize, val: Value) -> &[(usize, Value, usize)] {
        let lo = self.0.partition_point(|&(v, x, _)| (v, x) < (var, val));
        let hi = self.0.partition_point(|&(v, x, _)| (v, x) <= (var, val));
        &self.0[lo..hi]
    }
}

struct Search {
    k: usize,
    variant: Variant,
    node_limit: Option<u64>,
    producers: ProducerIndex,
    stats: SearchStats,
}

impl Search {
    fn plan<'a>(&mut self, ps: PlanStructure<'a>, line5: usize, establish: usize) -> Result<Option<PlanStructure<'a>>, PopError> {
        self.stats.nodes += 1;
        if let Some(limit) = self.node_limit {
            if self.stats.nodes > limit {
                return Err(PopError::NodeLimit { limit });
            }
        }
        self.stats.max_line5_per_branch = self.stats.max_line5_per_branch.max(line5);
        self.stats.max_establish_per_branch = self.stats.max_establish_per_branch.max(establish);

        if ps.len() > self.k + 2 || !ps.is_acyclic() {
            return Ok(None);
        }

        if let Some((threat, link)) = ps.first_threat() {
            for (before, after) in [(threat, link.producer), (link.consumer, threat)] {
                let mut child = ps.clone();
                child.add_order(before, after);
                if let Some(done) = self.plan(child, line5 + 1, establish)? {
                    return Ok(Some(done));
                }
            }
            return Ok(None);
        }

        let Some((consumer, var, val)) = ps.first_open_goal() else {
            return Ok(Some(ps));
        };

        let existing: Vec<OccId> = (0..ps.len()).filter(|&o| ps.eff_value(o, var) == Some(val)).collect();
        for producer in existing {
            let child = self.establish(&ps, producer, consumer, (var, val));
            if let Some(done) = self.plan(child, line5, establish + 1)? {
                return Ok(Some(done));
            }
        }
        let fresh: Vec<usize> = self.producers.get(var, val).iter().map(|&(_, _, a)| a).collect();
        for action in fresh {
            let mut base = ps.clone();
            let producer = base.add_occurrence(action);
            let child = self.establish(&base, producer, consumer, (var, val));
            if let Some(done) = self.plan(child, line5, establish + 1)? {
                return Ok(Some(done));
            }
        }
        Ok(None)
    }

    fn establish<'a>(&self, ps: &PlanStructure<'a>, producer: OccId, consumer: OccId, goal: (usize, Value)) -> PlanStructure<'a> {
        let links = establish_links(ps, producer, consumer, goal, self.variant);
        let mut child = ps.clone();
        child.add_order(producer, consumer);
        for link in links {
            child.add_link(link);
        }
        child
    }
}
