//! Partial-order causal-link planning.

mod mar;
mod structure;

use thiserror::Error;

pub use mar::{establish_links, mar_plan, mar_plan_with, MarConfig, SearchStats, Variant};
pub use structure::{CausalLink, OccId, OccKind, PlanStructure, GOAL, INIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PopError {
    #[error("the modified planner requires restriction P (post-uniqueness); the instance violates it")]
    NotPostUnique,
    #[error("search node limit of {limit} exceeded")]
    NodeLimit { limit: u64 },
    #[error("ordering relation is cyclic")]
    Cycle,
}
