//! Command-line interface.
//!
//! Exit codes: 0 on success, 1 when an instance is infeasible or a
//! solution fails verification, 2 on usage, format, or limit errors.

use crate::bench::{bench_batch, to_csv, to_csv_without_time, Algorithm};
use crate::exact::{Limits, SolveError};
use crate::feasibility::verify_solution;
use crate::format::{
    parse_instance, parse_mapping, parse_picks, parse_queens, parse_setcover, parse_solution,
    serialize_instance, serialize_mapping, serialize_picks, serialize_queens, serialize_setcover,
    serialize_solution,
};
use crate::generate;
use crate::model::{Allocation, HcpInstance, QueensInstance};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::reductions::{
    lift_solution, queens_to_sa2, reduce_v2_to_v1, reduce_v3_to_v2, setcover_to_v3,
    v3_to_setcover, LiftedSolution, Problem, ReductionRecord, TargetSolution,
};
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};

const EXIT_OK: i32 = 0;
const EXIT_INFEASIBLE: i32 = 1;
const EXIT_USAGE: i32 = 2;

/// Failures carry the exit code they should map to.
struct CliError {
    code: i32,
    msg: String,
}

fn usage_err(msg: impl ToString) -> CliError {
    CliError {
        code: EXIT_USAGE,
        msg: msg.to_string(),
    }
}

type CliResult = Result<i32, CliError>;

#[derive(Parser)]
#[command(
    name = "hubcover",
    version,
    about = "Hub covering toolkit: exact and approximate solvers, feasibility checking, and problem reductions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and print the cost and a solution
    Solve {
        /// Instance file
        instance: PathBuf,
        /// Algorithm: exact, taskwise, bounded-enum, greedy-cover
        #[arg(long, default_value = "exact")]
        algo: String,
        /// Subset size bound for bounded-enum
        #[arg(long)]
        k: Option<usize>,
        /// Write the solution here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a solution file against its instance
    Verify {
        instance: PathBuf,
        solution: PathBuf,
    },
    /// Rewrite a problem into another formulation, with a mapping sidecar
    Reduce {
        /// Source problem file (instance, set cover, or queens board)
        input: PathBuf,
        /// Target formulation: v1, v2, setcover, v3, sa2
        #[arg(long)]
        to: String,
        /// Distinguished branch name for the v3-to-v2 rewrite
        #[arg(long)]
        b0: Option<String>,
        /// Allocation for the v3-to-v2 rewrite: single or multi
        #[arg(long, default_value = "single")]
        allocation: String,
        /// Target problem file; the sidecar goes to `<out>.map`
        #[arg(long)]
        out: PathBuf,
    },
    /// Translate a target solution back through a mapping sidecar
    Lift {
        /// Mapping sidecar written by `reduce`
        mapping: PathBuf,
        /// Solution of the target problem
        solution: PathBuf,
        /// Write the lifted solution here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a random instance from a seeded family
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        /// Write the instance here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an algorithm over a generated batch and print CSV
    Bench {
        #[command(flatten)]
        family: FamilyArgs,
        /// Number of instances (seeds seed, seed+1, ...)
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Algorithm: exact, taskwise, bounded-enum, greedy-cover
        #[arg(long, default_value = "exact")]
        algo: String,
        /// Subset size bound for bounded-enum
        #[arg(long)]
        k: Option<usize>,
        /// Worker threads
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Drop the wall-time column (output is then run-to-run identical)
        #[arg(long)]
        omit_time: bool,
    },
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// Family: grid-v1, random-v2, bipartite-v3, queens
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    branches: usize,
    #[arg(long, default_value_t = 3)]
    hubs: usize,
    /// Number of random delivery tasks
    #[arg(long, default_value_t = 4)]
    tasks: usize,
    /// Hub-hub discount factor
    #[arg(long, default_value = "1/2")]
    alpha: String,
    /// Threshold percentile for grid-v1 (100 = every task serviceable)
    #[arg(long, default_value_t = 80)]
    phi_percentile: u32,
    /// Edge probability in percent for the graph families
    #[arg(long, default_value_t = 50)]
    edge_percent: u32,
    /// single or multi
    #[arg(long, default_value = "multi")]
    allocation: String,
    /// Cap on the number of open hubs
    #[arg(long)]
    capacity: Option<usize>,
    /// Board size for the queens family
    #[arg(long, default_value_t = 4)]
    board: usize,
    /// Pre-placed queens for the queens family
    #[arg(long, default_value_t = 1)]
    fixed: usize,
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let limits = match limits_from_env() {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            return e.code;
        }
    };
    match dispatch(cli.command, &limits) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            e.code
        }
    }
}

fn limits_from_env() -> Result<Limits, CliError> {
    match std::env::var("HUBCOVER_LIMITS") {
        Ok(s) => Limits::parse_overrides(&s).map_err(usage_err),
        Err(_) => Ok(Limits::default()),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| usage_err(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| usage_err(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_algo(algo: &str, k: Option<usize>) -> Result<Algorithm, CliError> {
    match algo {
        "exact" => Ok(Algorithm::Exact),
        "taskwise" => Ok(Algorithm::Taskwise),
        "bounded-enum" => Ok(Algorithm::BoundedEnum(k.ok_or_else(|| {
            usage_err("bounded-enum requires --k")
        })?)),
        "greedy-cover" => Ok(Algorithm::GreedyCover),
        other => Err(usage_err(format!("unknown algorithm {other:?}"))),
    }
}

fn parse_allocation(s: &str) -> Result<Allocation, CliError> {
    match s {
        "single" => Ok(Allocation::Single),
        "multi" => Ok(Allocation::Multi),
        other => Err(usage_err(format!("unknown allocation {other:?}"))),
    }
}

fn parse_alpha(s: &str) -> Result<Rational, CliError> {
    parse_rational(s).ok_or_else(|| usage_err(format!("malformed alpha {s:?}")))
}

fn dispatch(command: Command, limits: &Limits) -> CliResult {
    match command {
        Command::Solve {
            instance,
            algo,
            k,
            out,
        } => {
            let inst = parse_instance(&read(&instance)?).map_err(usage_err)?;
            let algorithm = parse_algo(&algo, k)?;
            match crate::bench::run_algorithm(&inst, algorithm, limits) {
                Ok(Some(sol)) => {
                    println!("cost {}", format_rational(sol.cost()));
                    emit(out.as_deref(), &serialize_solution(&inst, &sol))?;
                    Ok(EXIT_OK)
                }
                Ok(None) => {
                    println!("infeasible");
                    Ok(EXIT_INFEASIBLE)
                }
                Err(e @ SolveError::Infeasible(_)) => {
                    println!("infeasible");
                    eprintln!("{e}");
                    Ok(EXIT_INFEASIBLE)
                }
                Err(e) => Err(usage_err(e)),
            }
        }
        Command::Verify { instance, solution } => {
            let inst = parse_instance(&read(&instance)?).map_err(usage_err)?;
            let sol = parse_solution(&inst, &read(&solution)?).map_err(usage_err)?;
            let report = verify_solution(&inst, &sol).map_err(usage_err)?;
            if report.ok() {
                println!("ok");
                Ok(EXIT_OK)
            } else {
                print!("{report}");
                Ok(EXIT_INFEASIBLE)
            }
        }
        Command::Reduce {
            input,
            to,
            b0,
            allocation,
            out,
        } => {
            let text = read(&input)?;
            let record = build_reduction(&text, &to, b0.as_deref(), &allocation)?;
            let target_text = match &record.target {
                Problem::Hcp(i) => serialize_instance(i),
                Problem::SetCover(sc) => serialize_setcover(sc),
                Problem::Queens(q) => serialize_queens(q),
            };
            write(&out, &target_text)?;
            let sidecar = out.with_extension(match out.extension() {
                Some(ext) => format!("{}.map", ext.to_string_lossy()),
                None => "map".to_string(),
            });
            write(&sidecar, &serialize_mapping(&record))?;
            println!("wrote {} and {}", out.display(), sidecar.display());
            Ok(EXIT_OK)
        }
        Command::Lift {
            mapping,
            solution,
            out,
        } => {
            let record = parse_mapping(&read(&mapping)?).map_err(usage_err)?;
            let target_solution = match &record.target {
                Problem::Hcp(target) => TargetSolution::Hcp(
                    parse_solution(target, &read(&solution)?).map_err(usage_err)?,
                ),
                Problem::SetCover(sc) => TargetSolution::Picks(
                    parse_picks(sc, &read(&solution)?).map_err(usage_err)?,
                ),
                Problem::Queens(_) => {
                    return Err(usage_err("queens targets have no liftable solution format"))
                }
            };
            let lifted =
                lift_solution(&record, &target_solution).map_err(usage_err)?;
            let text = match &lifted {
                LiftedSolution::Hcp(sol) => {
                    let source = record.source.as_hcp().expect("hcp source");
                    println!("cost {}", format_rational(sol.cost()));
                    serialize_solution(source, sol)
                }
                LiftedSolution::Picks { sets, weight } => {
                    let sc = record.source.as_set_cover().expect("set cover source");
                    println!("weight {}", format_rational(weight));
                    serialize_picks(sc, sets)
                }
                LiftedSolution::Placement(placed) => {
                    let n = record.source.as_queens().expect("queens source").n();
                    let full = QueensInstance::new(n, placed.clone()).map_err(usage_err)?;
                    serialize_queens(&full)
                }
            };
            emit(out.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Gen { family, out } => {
            let inst = generate_instance(&family)?;
            emit(out.as_deref(), &serialize_instance(&inst))?;
            Ok(EXIT_OK)
        }
        Command::Bench {
            family,
            count,
            algo,
            k,
            threads,
            omit_time,
        } => {
            let algorithm = parse_algo(&algo, k)?;
            let mut instances = Vec::with_capacity(count);
            for i in 0..count {
                let f = FamilyArgs {
                    seed: family.seed + i as u64,
                    ..family.clone()
                };
                instances.push(generate_instance(&f)?);
            }
            let rows =
                bench_batch(&instances, algorithm, limits, threads).map_err(usage_err)?;
            if omit_time {
                print!("{}", to_csv_without_time(&rows));
            } else {
                print!("{}", to_csv(&rows));
            }
            Ok(EXIT_OK)
        }
    }
}

fn generate_instance(f: &FamilyArgs) -> Result<HcpInstance, CliError> {
    let allocation = parse_allocation(&f.allocation)?;
    let alpha = parse_alpha(&f.alpha)?;
    let result = match f.family.as_str() {
        "grid-v1" => generate::euclidean_v1(
            f.branches,
            f.hubs,
            f.tasks,
            alpha,
            f.phi_percentile,
            allocation,
            f.seed,
        ),
        "random-v2" => generate::random_graph_v2(
            f.branches,
            f.hubs,
            f.tasks,
            f.edge_percent,
            alpha,
            allocation,
            f.seed,
        ),
        "bipartite-v3" => {
            generate::bipartite_v3(f.branches, f.hubs, f.edge_percent, f.capacity, f.seed)
        }
        "queens" => generate::queens_derived(f.board, f.fixed, f.seed),
        other => return Err(usage_err(format!("unknown family {other:?}"))),
    };
    result.map_err(usage_err)
}

/// Pick the reduction from the source file's header and the target name.
fn build_reduction(
    text: &str,
    to: &str,
    b0: Option<&str>,
    allocation: &str,
) -> Result<ReductionRecord, CliError> {
    let magic = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .and_then(|l| l.split_whitespace().next())
        .unwrap_or("")
        .to_string();
    match (magic.as_str(), to) {
        ("hcpi", "v1") => {
            let source = parse_instance(text).map_err(usage_err)?;
            reduce_v2_to_v1(&source).map_err(usage_err)
        }
        ("hcpi", "v2") => {
            let source = parse_instance(text).map_err(usage_err)?;
            let b0 = match b0 {
                Some(name) => Some(source.branch_index(name).ok_or_else(|| {
                    usage_err(format!("unknown branch {name:?} for --b0"))
                })?),
                None => None,
            };
            reduce_v3_to_v2(&source, b0, parse_allocation(allocation)?).map_err(usage_err)
        }
        ("hcpi", "setcover") => {
            let source = parse_instance(text).map_err(usage_err)?;
            v3_to_setcover(&source).map_err(usage_err)
        }
        ("hcpc", "v3") => {
            let source = parse_setcover(text).map_err(usage_err)?;
            setcover_to_v3(&source).map_err(usage_err)
        }
        ("hcpq", "sa2") => {
            let source = parse_queens(text).map_err(usage_err)?;
            queens_to_sa2(&source).map_err(usage_err)
        }
        (m, t) => Err(usage_err(format!(
            "no reduction from a {m:?} file to {t:?}; supported: hcpi->v1 (from v2), hcpi->v2 (from v3), hcpi->setcover (from v3), hcpc->v3, hcpq->sa2"
        ))),
    }
}
