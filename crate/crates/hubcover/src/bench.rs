//! Small benchmark harness: run an algorithm over a batch of instances,
//! compare against the exact optimum, and report CSV rows.
//!
//! Rows are emitted in input order regardless of worker count, so runs
//! with different thread counts produce identical output except for the
//! wall-time column.

use crate::approx::{approx_bounded_enumeration, approx_taskwise, solve_variant3_greedy};
use crate::exact::{solve_exact, Limits, OptimalResult, SolveError};
use crate::format::{digest, serialize_instance};
use crate::model::{HcpInstance, Solution};
use crate::rational::{format_rational, Rational};
use num::Zero;
use rayon::prelude::*;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Exact,
    Taskwise,
    BoundedEnum(usize),
    GreedyCover,
}

impl Algorithm {
    pub fn as_str(&self) -> String {
        match self {
            Algorithm::Exact => "exact".into(),
            Algorithm::Taskwise => "taskwise".into(),
            Algorithm::BoundedEnum(k) => format!("bounded-enum-{k}"),
            Algorithm::GreedyCover => "greedy-cover".into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("thread pool: {0}")]
    Pool(String),
}

/// Run one algorithm on one instance; `Ok(None)` means proven infeasible.
pub fn run_algorithm(
    instance: &HcpInstance,
    algorithm: Algorithm,
    limits: &Limits,
) -> Result<Option<Solution>, SolveError> {
    let lower = |r: Result<Solution, SolveError>| match r {
        Ok(s) => Ok(Some(s)),
        Err(SolveError::Infeasible(_)) => Ok(None),
        Err(e) => Err(e),
    };
    match algorithm {
        Algorithm::Exact => Ok(match solve_exact(instance, limits)? {
            OptimalResult::Optimal(s) => Some(s),
            OptimalResult::Infeasible => None,
        }),
        Algorithm::Taskwise => lower(approx_taskwise(instance)),
        Algorithm::BoundedEnum(k) => lower(approx_bounded_enumeration(instance, k)),
        Algorithm::GreedyCover => lower(solve_variant3_greedy(instance)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub digest: String,
    pub branches: usize,
    pub hubs: usize,
    pub tasks: usize,
    pub variant: &'static str,
    pub allocation: &'static str,
    pub algorithm: String,
    /// Achieved cost, or "inf" when the algorithm reports infeasibility.
    pub cost: String,
    /// Exact optimum, or "inf" for infeasible instances.
    pub optimum: String,
    /// cost / optimum, empty when either side is unavailable or zero.
    pub ratio: String,
    pub wall_ms: u128,
}

pub const CSV_HEADER: &str =
    "digest,branches,hubs,tasks,variant,allocation,algorithm,cost,optimum,ratio,wall_ms";

impl BenchRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.digest,
            self.branches,
            self.hubs,
            self.tasks,
            self.variant,
            self.allocation,
            self.algorithm,
            self.cost,
            self.optimum,
            self.ratio,
            self.wall_ms
        )
    }

    fn to_csv_without_time(&self) -> String {
        let full = self.to_csv();
        full[..full.rfind(',').expect("csv has columns")].to_string()
    }
}

fn cost_field(s: &Option<Solution>) -> String {
    match s {
        Some(sol) => format_rational(sol.cost()),
        None => "inf".into(),
    }
}

fn ratio_field(cost: &Option<Rational>, optimum: &Option<Rational>) -> String {
    match (cost, optimum) {
        (Some(c), Some(o)) if !o.is_zero() => format_rational(&(c.clone() / o.clone())),
        _ => String::new(),
    }
}

/// Benchmark one instance: run the algorithm, then the exact solver for
/// the reference optimum.
pub fn bench_instance(
    instance: &HcpInstance,
    algorithm: Algorithm,
    limits: &Limits,
) -> Result<BenchRow, SolveError> {
    let start = Instant::now();
    let achieved = run_algorithm(instance, algorithm, limits)?;
    let wall_ms = start.elapsed().as_millis();
    let exact = run_algorithm(instance, Algorithm::Exact, limits)?;
    Ok(BenchRow {
        digest: digest(&serialize_instance(instance))[..12].to_string(),
        branches: instance.num_branches(),
        hubs: instance.num_hubs(),
        tasks: instance.tasks().len(),
        variant: instance.variant().as_str(),
        allocation: instance.allocation().as_str(),
        algorithm: algorithm.as_str(),
        cost: cost_field(&achieved),
        optimum: cost_field(&exact),
        ratio: ratio_field(
            &achieved.as_ref().map(|s| s.cost().clone()),
            &exact.as_ref().map(|s| s.cost().clone()),
        ),
        wall_ms,
    })
}

/// Benchmark a batch on a dedicated pool of `threads` workers; row order
/// follows input order.
pub fn bench_batch(
    instances: &[HcpInstance],
    algorithm: Algorithm,
    limits: &Limits,
    threads: usize,
) -> Result<Vec<BenchRow>, BenchError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| BenchError::Pool(e.to_string()))?;
    let rows: Result<Vec<BenchRow>, SolveError> = pool.install(|| {
        instances
            .par_iter()
            .map(|i| bench_instance(i, algorithm, limits))
            .collect()
    });
    Ok(rows?)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}

/// CSV with the wall-time column dropped; equal across thread counts.
pub fn to_csv_without_time(rows: &[BenchRow]) -> String {
    let header = CSV_HEADER;
    let mut out = header[..header.rfind(',').expect("csv has columns")].to_string();
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_without_time());
        out.push('\n');
    }
    out
}
