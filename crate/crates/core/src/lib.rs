//! Bounded plan existence for SAS+ planning.
//!
//! * [`sas`]: data model and execution semantics.
//! * [`restrictions`]: the P/U/B/S classifier.
//! * [`format`]: text formats for instances, plans and reduction sources.
//! * [`oracle`]: breadth-first bounded search and brute-force source solvers.
//! * [`pop`]: partial-order causal-link planning, original and FPT variants.
//! * [`reductions`]: Hitting Set and Partitioned Clique instance generators.
//! * [`fomc`]: compilation to first-order model checking and a naive evaluator.
//! * [`engine`], [`bench`]: engine dispatch, run reports and the scaling harness.
//! * [`generate`]: seeded random instances.

pub mod bench;
pub mod engine;
pub mod fomc;
pub mod format;
pub mod generate;
pub mod oracle;
pub mod pop;
pub mod reductions;
pub mod restrictions;
pub mod sas;

pub use sas::{Action, DomainSpec, PartialState, Plan, SasInstance, State, Value};
