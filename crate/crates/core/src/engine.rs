//! One entry point over the three bounded-planning engines, plus the CSV
//! row type shared by the command-line tools.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::oracle::{self, BfsConfig, OracleError};
use crate::pop::{self, MarConfig, PopError, SearchStats, Variant};
use crate::sas::{Plan, SasInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Breadth-first search over states.
    Bfs,
    /// Partial-order planner, original variant.
    Mar,
    /// Partial-order planner, link-batching variant.
    MarMod,
}

impl Engine {
    pub const ALL: [Engine; 3] = [Engine::Bfs, Engine::Mar, Engine::MarMod];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Bfs => "bfs",
            Engine::Mar => "mar",
            Engine::MarMod => "mar-mod",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Engine::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown engine `{s}` (expected bfs, mar or mar-mod)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Pop(#[from] PopError),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EngineOptions {
    pub bfs: BfsConfig,
    /// Let `mar-mod` run on instances violating P.
    pub unsafe_mod: bool,
    pub node_limit: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub engine: Engine,
    pub k: usize,
    pub plan: Option<Plan>,
    /// Planner counters; `None` for breadth-first search.
    pub stats: Option<SearchStats>,
    /// Distinct states stored; `None` for the planners.
    pub states: Option<usize>,
    pub wall: Duration,
}

pub fn solve(inst: &SasInstance, k: usize, engine: Engine, options: &EngineOptions) -> Result<SolveReport, EngineError> {
    let start = Instant::now();
    let (plan, stats, states) = match engine {
        Engine::Bfs => {
            let res = oracle::bfs_bounded_plan_with(inst, k, &options.bfs)?;
            (res.plan, None, Some(res.explored))
        }
        Engine::Mar | Engine::MarMod => {
            let config = MarConfig {
                variant: if engine == Engine::Mar { Variant::Original } else { Variant::Modified },
                allow_non_p: options.unsafe_mod,
                node_limit: options.node_limit,
            };
            let (found, stats) = pop::mar_plan_with(inst, k, &config)?;
            let plan = found.map(|ps| ps.linearize()).transpose()?;
            (plan, Some(stats), None)
        }
    };
    Ok(SolveReport {
        engine,
        k,
        plan,
        stats,
        states,
        wall: start.elapsed(),
    })
}

/// One CSV row per engine run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 of the input file, hex encoded.
    pub input: String,
    pub k: usize,
    pub engine: String,
    /// `found`, `none` or `error`.
    pub outcome: String,
    pub plan_len: Option<usize>,
    pub nodes: Option<u64>,
    pub line5_max: Option<usize>,
    pub establish_max: Option<usize>,
    pub states: Option<usize>,
    pub wall_ms: f64,
}

impl RunReport {
    pub fn from_solve(command: &str, input: &str, report: &SolveReport) -> Self {
        Self {
            command: command.to_string(),
            input: input.to_string(),
            k: report.k,
            engine: report.engine.to_string(),
            outcome: if report.plan.is_some() { "found" } else { "none" }.to_string(),
            plan_len: report.plan.as_ref().map(Plan::len),
            nodes: report.stats.map(|s| s.nodes),
            line5_max: report.stats.map(|s| s.max_line5_per_branch),
            establish_max: report.stats.map(|s| s.max_establish_per_branch),
            states: report.states,
            wall_ms: millis(report.wall),
        }
    }

    pub fn error(command: &str, input: &str, k: usize, engine: &str, wall: Duration) -> Self {
        Self {
            command: command.to_string(),
            input: input.to_string(),
            k,
            engine: engine.to_string(),
            outcome: "error".to_string(),
            plan_len: None,
            nodes: None,
            line5_max: None,
            establish_max: None,
            states: None,
            wall_ms: millis(wall),
        }
    }
}

pub(crate) fn millis(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}
