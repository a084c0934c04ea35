//! `sasplus`: validate, classify, solve, reduce, model-check and benchmark
//! SAS+ instances.
//!
//! Exit codes: 0 plan found (or input valid), 10 no plan within the bound,
//! 1 invalid plan, 2 any error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use sasplus::bench::{run_bench, BENCH_HEADER};
use sasplus::engine::{solve, Engine, EngineError, EngineOptions, RunReport};
use sasplus::fomc::{add_dummy, build_phi, build_structure, model_check_plan, DEFAULT_ASSIGNMENT_BUDGET};
use sasplus::format::{parse_hitting_set, parse_partitioned_graph, parse_plan, parse_sas, PlanDisplay};
use sasplus::reductions::{hitting_set_to_planning, partitioned_clique_to_planning};
use sasplus::pop::PopError;
use sasplus::restrictions::check_restrictions;
use sasplus::sas::{check_plan, PlanFailure};
use sasplus::SasInstance;

const FOUND: u8 = 0;
const INVALID: u8 = 1;
const ERROR: u8 = 2;
const NONE_WITHIN_BOUND: u8 = 10;

#[derive(Parser)]
#[command(name = "sasplus", version, about = "Bounded plan existence for SAS+ planning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that an instance is well formed, and optionally that a plan solves it.
    Validate { instance: PathBuf, plan: Option<PathBuf> },
    /// Print the P/U/B/S restrictions and the m_p/m_e counters.
    Classify { instance: PathBuf },
    /// Search for a plan of length at most k.
    Solve {
        instance: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "bfs")]
        engine: Engine,
        /// Run mar-mod even if the instance violates P.
        #[arg(long)]
        unsafe_mod: bool,
    },
    /// Turn a hitting set or partitioned clique instance into a planning instance.
    Reduce {
        source: SourceKind,
        input: PathBuf,
        output: PathBuf,
    },
    /// Decide plan existence by first-order model checking.
    Fomc {
        instance: PathBuf,
        #[arg(long)]
        k: usize,
        /// Print the relational structure and the sentence.
        #[arg(long)]
        dump: bool,
        /// Maximum number of variable assignments to enumerate.
        #[arg(long, default_value_t = DEFAULT_ASSIGNMENT_BUDGET)]
        budget: u128,
    },
    /// Run mar-mod and bfs over a generated family and print CSV.
    Bench {
        #[arg(long, default_value = "pad-p")]
        family: Family,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [10, 100, 1000])]
        sizes: Vec<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceKind {
    Hs,
    Pc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    PadP,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path) -> Result<(SasInstance, String)> {
    let text = read(path)?;
    let inst = parse_sas(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    Ok((inst, digest(text.as_bytes())))
}

fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn report_row(row: &RunReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(io::stderr());
    w.serialize(row)?;
    w.flush()?;
    Ok(())
}

fn validate(instance: &Path, plan: Option<&Path>) -> Result<u8> {
    let (inst, _) = load(instance)?;
    let Some(plan_path) = plan else {
        println!("ok: {} variables, {} actions", inst.num_vars(), inst.actions().len());
        return Ok(FOUND);
    };
    let plan = parse_plan(&inst, &read(plan_path)?).map_err(|e| anyhow!("{}: {e}", plan_path.display()))?;
    match check_plan(&inst, &plan)? {
        Ok(_) => {
            println!("ok: plan of length {} reaches the goal", plan.len());
            Ok(FOUND)
        }
        Err(PlanFailure::Inapplicable { step, action }) => {
            eprintln!(
                "invalid: step {} ({}) is not applicable",
                step + 1,
                inst.action(action).name()
            );
            Ok(INVALID)
        }
        Err(PlanFailure::GoalNotReached { final_state }) => {
            eprintln!("invalid: final state {} does not satisfy the goal", final_state.to_partial());
            Ok(INVALID)
        }
    }
}

fn classify(instance: &Path) -> Result<u8> {
    let (inst, _) = load(instance)?;
    println!("{}", check_restrictions(&inst));
    Ok(FOUND)
}

fn solve_cmd(instance: &Path, k: usize, engine: Engine, unsafe_mod: bool) -> Result<u8> {
    let (inst, digest) = load(instance)?;
    let options = EngineOptions {
        unsafe_mod,
        ..EngineOptions::default()
    };
    let start = Instant::now();
    match solve(&inst, k, engine, &options) {
        Ok(report) => {
            if let Some(plan) = &report.plan {
                print!("{}", PlanDisplay { inst: &inst, plan });
                io::stdout().flush()?;
            }
            report_row(&RunReport::from_solve("solve", &digest, &report))?;
            Ok(if report.plan.is_some() { FOUND } else { NONE_WITHIN_BOUND })
        }
        Err(e) => {
            report_row(&RunReport::error("solve", &digest, k, engine.name(), start.elapsed()))?;
            let hint = match e {
                EngineError::Pop(PopError::NotPostUnique) => "; use --engine mar, or --unsafe-mod to run anyway",
                _ => "",
            };
            Err(anyhow!("{e}{hint}"))
        }
    }
}

fn reduce(kind: SourceKind, input: &Path, output: &Path) -> Result<u8> {
    let text = read(input)?;
    let out = match kind {
        SourceKind::Hs => {
            let hs = parse_hitting_set(&text).map_err(|e| anyhow!("{}: {e}", input.display()))?;
            hitting_set_to_planning(&hs)
        }
        SourceKind::Pc => {
            let g = parse_partitioned_graph(&text).map_err(|e| anyhow!("{}: {e}", input.display()))?;
            partitioned_clique_to_planning(&g)?
        }
    };
    fs::write(output, out.to_sas_text()).with_context(|| format!("cannot write {}", output.display()))?;
    println!("k'={}", out.k_prime);
    Ok(FOUND)
}

fn fomc(instance: &Path, k: usize, dump: bool, budget: u128) -> Result<u8> {
    let (inst, _) = load(instance)?;
    if dump {
        print!("{}", build_structure(&add_dummy(&inst)).dump());
        match build_phi(k) {
            Ok(phi) => println!("{phi}"),
            Err(_) => println!("# k = 0: goal checked directly"),
        }
    }
    if model_check_plan(&inst, k, Some(budget))? {
        println!("SAT");
        Ok(FOUND)
    } else {
        println!("UNSAT");
        Ok(NONE_WITHIN_BOUND)
    }
}

fn bench(family: Family, k: usize, sizes: &[usize]) -> Result<u8> {
    let name = match family {
        Family::PadP => "pad-p",
    };
    let rows = run_bench(name, k, sizes)?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(io::stdout());
    println!("{BENCH_HEADER}");
    for row in &rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(FOUND)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Validate { instance, plan } => validate(&instance, plan.as_deref()),
        Command::Classify { instance } => classify(&instance),
        Command::Solve {
            instance,
            k,
            engine,
            unsafe_mod,
        } => solve_cmd(&instance, k, engine, unsafe_mod),
        Command::Reduce { source, input, output } => reduce(source, &input, &output),
        Command::Fomc {
            instance,
            k,
            dump,
            budget,
        } => fomc(&instance, k, dump, budget),
        Command::Bench { family, k, sizes } => bench(family, k, &sizes),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(ERROR)
        }
    }
}
