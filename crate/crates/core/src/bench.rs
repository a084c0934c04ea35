//! Scaling harness for the partial-order planners.
//!
//! The `pad-p` family keeps the parameter fixed while the instance grows: a
//! three-variable chain `a -> b -> c` that needs exactly three steps, plus
//! `N` padding variables, each with one precondition-free action setting it
//! to 1. No padding action is ever needed and every effect is unique, so the
//! family satisfies P for all `N`.

use serde::Serialize;

use crate::engine::{millis, solve, Engine, EngineError, EngineOptions};
use crate::sas::{Action, DomainSpec, PartialState, Plan, SasInstance, State};

pub const FAMILIES: [&str; 1] = ["pad-p"];

pub fn pad_p_instance(padding: usize) -> SasInstance {
    let n = 3 + padding;
    let step = |name: &str, pre: Option<usize>, var: usize| {
        Action::new(
            name,
            PartialState::from_pairs(n, pre.map(|v| (v, 1))),
            PartialState::from_pairs(n, [(var, 1)]),
        )
        .expect("matching lengths")
    };
    let mut actions = vec![step("set-a", None, 0), step("set-b", Some(0), 1), step("set-c", Some(1), 2)];
    actions.extend((0..padding).map(|i| step(&format!("pad-{i}"), None, 3 + i)));
    SasInstance::new(
        DomainSpec::new(2).expect("binary"),
        State::new(vec![0; n]),
        PartialState::from_pairs(n, [(2, 1)]),
        actions,
    )
    .expect("well-formed family member")
}

/// Row of the benchmark CSV. Column order is part of the interface.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub family: String,
    pub size: usize,
    pub k: usize,
    pub engine: String,
    pub outcome: String,
    pub plan_len: Option<usize>,
    pub nodes: Option<u64>,
    pub line5_max: Option<usize>,
    pub establish_max: Option<usize>,
    pub states: Option<usize>,
    pub wall_ms: f64,
}

pub const BENCH_HEADER: &str = "family,size,k,engine,outcome,plan_len,nodes,line5_max,establish_max,states,wall_ms";

/// Runs `mar-mod` then `bfs` on every size, in the order given.
pub fn run_bench(family: &str, k: usize, sizes: &[usize]) -> Result<Vec<BenchRow>, EngineError> {
    assert!(FAMILIES.contains(&family), "unknown family `{family}`");
    let options = EngineOptions {
        bfs: crate::oracle::BfsConfig::unbounded(),
        ..EngineOptions::default()
    };
    let mut rows = Vec::with_capacity(sizes.len() * 2);
    for &size in sizes {
        let inst = pad_p_instance(size);
        for engine in [Engine::MarMod, Engine::Bfs] {
            let report = solve(&inst, k, engine, &options)?;
            rows.push(BenchRow {
                family: family.to_string(),
                size,
                k,
                engine: engine.to_string(),
                outcome: if report.plan.is_some() { "found" } else { "none" }.to_string(),
                plan_len: report.plan.as_ref().map(Plan::len),
                nodes: report.stats.map(|s| s.nodes),
                line5_max: report.stats.map(|s| s.max_line5_per_branch),
                establish_max: report.stats.map(|s| s.max_establish_per_branch),
                states: report.states,
                wall_ms: millis(report.wall),
            });
        }
    }
    Ok(rows)
}
