//! Constructive reductions of the variant hierarchy, solution lifting,
//! and the queens-completion backtracking oracle.
//!
//! Every reduction preserves hub opening costs, so a feasible target
//! solution lifts back to a feasible source solution of identical cost.

use crate::feasibility::verify_solution;
use crate::model::{
    AdjacencyGraph, Allocation, Geometry, HcpInstance, MetricMatrix, ModelError, QueensInstance,
    RawInstance, SetCoverInstance, Solution, Tour, Variant, Witness,
};
use crate::rational::{frac, rat, Rational};
use num::Zero;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("reduction requires variant {expected}, instance is {found}")]
    WrongVariant {
        expected: &'static str,
        found: &'static str,
    },
    #[error("invalid board: {0}")]
    InvalidBoard(String),
    #[error("branch index {0} is not a valid b0 choice")]
    BadBranch(usize),
    #[error("target solution has no source preimage: {0}")]
    UnliftableWitness(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A problem on either side of a reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Problem {
    Hcp(HcpInstance),
    SetCover(SetCoverInstance),
    Queens(QueensInstance),
}

impl Problem {
    pub fn as_hcp(&self) -> Option<&HcpInstance> {
        match self {
            Problem::Hcp(i) => Some(i),
            _ => None,
        }
    }

    pub fn as_set_cover(&self) -> Option<&SetCoverInstance> {
        match self {
            Problem::SetCover(i) => Some(i),
            _ => None,
        }
    }

    pub fn as_queens(&self) -> Option<&QueensInstance> {
        match self {
            Problem::Queens(i) => Some(i),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionKind {
    V2ToV1,
    V3ToV2 { b0: usize, allocation: Allocation },
    SetCoverToV3,
    V3ToSetCover,
    QueensToSa2,
}

impl ReductionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReductionKind::V2ToV1 => "v2-to-v1",
            ReductionKind::V3ToV2 { .. } => "v3-to-v2",
            ReductionKind::SetCoverToV3 => "setcover-to-v3",
            ReductionKind::V3ToSetCover => "v3-to-setcover",
            ReductionKind::QueensToSa2 => "queens-sa2",
        }
    }
}

/// A constructed target instance together with everything needed to lift
/// its solutions back to the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionRecord {
    pub kind: ReductionKind,
    pub source: Problem,
    pub target: Problem,
    /// Target set index -> source hub index (`v3-to-setcover` only; hubs
    /// adjacent to no branch have no counterpart set).
    pub set_hub: Option<Vec<usize>>,
    /// Hub index -> 1-based board square `(row, col)` (`queens-sa2` only).
    pub hub_square: Option<Vec<(usize, usize)>>,
}

/// Solutions accepted by `lift_solution`, one shape per target kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetSolution {
    Hcp(Solution),
    /// Chosen set indices of a set-cover target.
    Picks(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftedSolution {
    Hcp(Solution),
    Picks { sets: Vec<usize>, weight: Rational },
    Placement(Vec<(usize, usize)>),
}

/// Embeds a variant-2 instance into variant 1: weight 1 on existing edges,
/// weight 2 on every other vertex pair, discount 1/2, threshold 11/4.
///
/// With those constants every tour built from existing edges has length at
/// most 5/2 and every tour touching a non-edge has length at least 3, so
/// feasibility carries over exactly.
pub fn reduce_v2_to_v1(instance: &HcpInstance) -> Result<ReductionRecord, ReduceError> {
    if instance.variant() != Variant::V2 {
        return Err(ReduceError::WrongVariant {
            expected: "v2",
            found: instance.variant().as_str(),
        });
    }
    let g = instance.graph().expect("v2 uses a graph");
    let nb = instance.num_branches();
    let n = nb + instance.num_hubs();

    let mut rows = vec![vec![rat(2); n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = rat(0);
    }
    let mut set_edge = |i: usize, j: usize| {
        rows[i][j] = rat(1);
        rows[j][i] = rat(1);
    };
    for (b, h) in g.branch_hub_edges() {
        set_edge(b, nb + h);
    }
    for (h, h2) in g.hub_hub_edges() {
        set_edge(nb + h, nb + h2);
    }

    let target = RawInstance {
        branches: instance.branches().to_vec(),
        hubs: instance.hubs().to_vec(),
        opening_cost: instance.opening_costs().to_vec(),
        geometry: Geometry::Metric(MetricMatrix::from_rows(rows)?),
        tasks: instance.tasks().to_vec(),
        alpha: frac(1, 2),
        phi: frac(11, 4),
        variant: Variant::V1,
        allocation: instance.allocation(),
        capacity: instance.capacity(),
    }
    .build()?;

    Ok(ReductionRecord {
        kind: ReductionKind::V2ToV1,
        source: Problem::Hcp(instance.clone()),
        target: Problem::Hcp(target),
        set_hub: None,
        hub_square: None,
    })
}

/// Embeds a variant-3 instance into variant 2: hubs become fully
/// connected, the discount drops to zero, and every branch gets one task
/// to an arbitrary anchor branch `b0`.
pub fn reduce_v3_to_v2(
    instance: &HcpInstance,
    b0: Option<usize>,
    allocation: Allocation,
) -> Result<ReductionRecord, ReduceError> {
    if instance.variant() != Variant::V3 {
        return Err(ReduceError::WrongVariant {
            expected: "v3",
            found: instance.variant().as_str(),
        });
    }
    let nb = instance.num_branches();
    let b0 = b0.unwrap_or(0);
    if b0 >= nb {
        return Err(ReduceError::BadBranch(b0));
    }
    let g = instance.graph().expect("v3 uses a graph");
    let nh = instance.num_hubs();

    let hub_hub: Vec<(usize, usize)> = (0..nh)
        .flat_map(|a| (a + 1..nh).map(move |b| (a, b)))
        .collect();
    let tasks: Vec<(usize, usize)> = (0..nb).map(|b| (b, b0)).collect();

    let target = RawInstance {
        branches: instance.branches().to_vec(),
        hubs: instance.hubs().to_vec(),
        opening_cost: instance.opening_costs().to_vec(),
        geometry: Geometry::Graph(AdjacencyGraph::new(g.branch_hub_edges(), hub_hub)),
        tasks,
        alpha: rat(0),
        phi: rat(0),
        variant: Variant::V2,
        allocation,
        capacity: instance.capacity(),
    }
    .build()?;

    Ok(ReductionRecord {
        kind: ReductionKind::V3ToV2 { b0, allocation },
        source: Problem::Hcp(instance.clone()),
        target: Problem::Hcp(target),
        set_hub: None,
        hub_square: None,
    })
}

/// Elements become branches, sets become hubs, weights become opening
/// costs, membership becomes adjacency.
pub fn setcover_to_v3(sc: &SetCoverInstance) -> Result<ReductionRecord, ReduceError> {
    let edges: Vec<(usize, usize)> = sc
        .sets()
        .iter()
        .enumerate()
        .flat_map(|(h, (_, _, members))| members.iter().map(move |&e| (e, h)))
        .collect();

    let target = RawInstance {
        branches: sc.elements().to_vec(),
        hubs: sc.sets().iter().map(|(n, _, _)| n.clone()).collect(),
        opening_cost: sc.sets().iter().map(|(_, w, _)| w.clone()).collect(),
        geometry: Geometry::Graph(AdjacencyGraph::new(edges, [])),
        tasks: vec![],
        alpha: rat(0),
        phi: rat(0),
        variant: Variant::V3,
        allocation: Allocation::Single,
        capacity: None,
    }
    .build()?;

    Ok(ReductionRecord {
        kind: ReductionKind::SetCoverToV3,
        source: Problem::SetCover(sc.clone()),
        target: Problem::Hcp(target),
        set_hub: None,
        hub_square: None,
    })
}

/// Inverse of `setcover_to_v3`. Hubs adjacent to no branch would yield
/// empty sets and are dropped; the record's `set_hub` table maps each
/// target set back to its source hub.
pub fn v3_to_setcover(instance: &HcpInstance) -> Result<ReductionRecord, ReduceError> {
    if instance.variant() != Variant::V3 {
        return Err(ReduceError::WrongVariant {
            expected: "v3",
            found: instance.variant().as_str(),
        });
    }
    let g = instance.graph().expect("v3 uses a graph");
    let mut members_of_hub: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); instance.num_hubs()];
    for (b, h) in g.branch_hub_edges() {
        members_of_hub[h].insert(b);
    }

    let mut sets = Vec::new();
    let mut set_hub = Vec::new();
    for (h, members) in members_of_hub.into_iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        sets.push((
            instance.hubs()[h].clone(),
            instance.opening_cost(h).clone(),
            members,
        ));
        set_hub.push(h);
    }

    let target = SetCoverInstance::new(instance.branches().to_vec(), sets)?;

    Ok(ReductionRecord {
        kind: ReductionKind::V3ToSetCover,
        source: Problem::Hcp(instance.clone()),
        target: Problem::SetCover(target),
        set_hub: Some(set_hub),
        hub_square: None,
    })
}

/// Spreadsheet-style column letters: 1 -> a, 26 -> z, 27 -> aa.
fn column_letters(mut col: usize) -> String {
    let mut out = Vec::new();
    while col > 0 {
        let rem = (col - 1) % 26;
        out.push((b'a' + rem as u8) as char);
        col = (col - 1) / 26;
    }
    out.iter().rev().collect()
}

/// Chess-style square name, e.g. row 3 column 3 -> `c3`.
pub fn square_name(row: usize, col: usize) -> String {
    format!("{}{}", column_letters(col), row)
}

/// Builds the single-allocation variant-2 instance whose feasible
/// solutions are exactly the completions of the partial queen placement.
///
/// One branch per row, one unit-cost hub per square, a task per distinct
/// row pair, and hub-hub edges exactly between mutually non-attacking
/// squares. Rows with a fixed queen connect only to that square's hub.
pub fn queens_to_sa2(q: &QueensInstance) -> Result<ReductionRecord, ReduceError> {
    let n = q.n();
    let branches: Vec<String> = (1..=n).map(|r| format!("B{r}")).collect();

    let mut hubs = Vec::with_capacity(n * n);
    let mut hub_square = Vec::with_capacity(n * n);
    for row in 1..=n {
        for col in 1..=n {
            hubs.push(square_name(row, col));
            hub_square.push((row, col));
        }
    }
    let hub_at = |row: usize, col: usize| (row - 1) * n + (col - 1);

    let mut branch_hub = Vec::new();
    for row in 1..=n {
        match q.fixed_column(row) {
            Some(col) => branch_hub.push((row - 1, hub_at(row, col))),
            None => {
                for col in 1..=n {
                    branch_hub.push((row - 1, hub_at(row, col)));
                }
            }
        }
    }

    let mut hub_hub = Vec::new();
    for a in 0..n * n {
        for b in a + 1..n * n {
            if !crate::model::queens_attack(hub_square[a], hub_square[b]) {
                hub_hub.push((a, b));
            }
        }
    }

    // A board with a single row yields no row pairs; a self-task keeps the
    // lone branch subject to the allocation constraint.
    let tasks: Vec<(usize, usize)> = if n == 1 {
        vec![(0, 0)]
    } else {
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
    };

    let target = RawInstance {
        branches,
        hubs,
        opening_cost: vec![rat(1); n * n],
        geometry: Geometry::Graph(AdjacencyGraph::new(branch_hub, hub_hub)),
        tasks,
        alpha: rat(1),
        phi: rat(0),
        variant: Variant::V2,
        allocation: Allocation::Single,
        capacity: None,
    }
    .build()?;

    Ok(ReductionRecord {
        kind: ReductionKind::QueensToSa2,
        source: Problem::Queens(q.clone()),
        target: Problem::Hcp(target),
        set_hub: None,
        hub_square: Some(hub_square),
    })
}

/// Completes a partial placement to `n` mutually non-attacking queens by
/// backtracking over the free rows, or reports that none exists. The
/// returned placement is sorted by row.
pub fn solve_queens_completion(q: &QueensInstance) -> Option<Vec<(usize, usize)>> {
    let n = q.n();
    let mut cols = vec![false; n + 1];
    // diagonal ids: r + c in 2..=2n, r - c + n in 0..2n
    let mut diag_sum = vec![false; 2 * n + 1];
    let mut diag_diff = vec![false; 2 * n + 1];
    let mut placement: Vec<(usize, usize)> = q.placed().to_vec();

    for &(r, c) in q.placed() {
        cols[c] = true;
        diag_sum[r + c] = true;
        diag_diff[r + n - c] = true;
    }
    let free_rows: Vec<usize> = (1..=n).filter(|&r| q.fixed_column(r).is_none()).collect();

    fn recurse(
        n: usize,
        free_rows: &[usize],
        depth: usize,
        cols: &mut [bool],
        diag_sum: &mut [bool],
        diag_diff: &mut [bool],
        placement: &mut Vec<(usize, usize)>,
    ) -> bool {
        if depth == free_rows.len() {
            return true;
        }
        let r = free_rows[depth];
        for c in 1..=n {
            if cols[c] || diag_sum[r + c] || diag_diff[r + n - c] {
                continue;
            }
            cols[c] = true;
            diag_sum[r + c] = true;
            diag_diff[r + n - c] = true;
            placement.push((r, c));
            if recurse(n, free_rows, depth + 1, cols, diag_sum, diag_diff, placement) {
                return true;
            }
            placement.pop();
            cols[c] = false;
            diag_sum[r + c] = false;
            diag_diff[r + n - c] = false;
        }
        false
    }

    if recurse(
        n,
        &free_rows,
        0,
        &mut cols,
        &mut diag_sum,
        &mut diag_diff,
        &mut placement,
    ) {
        placement.sort_unstable();
        Some(placement)
    } else {
        None
    }
}

/// Maps a feasible target solution back through the reduction's tables.
/// The target solution is verified first; an infeasible or structurally
/// alien solution is an `UnliftableWitness` error.
pub fn lift_solution(
    record: &ReductionRecord,
    target_solution: &TargetSolution,
) -> Result<LiftedSolution, ReduceError> {
    match (&record.kind, target_solution) {
        (ReductionKind::V2ToV1, TargetSolution::Hcp(sol)) => {
            let target = record.target.as_hcp().expect("hcp target");
            let source = record.source.as_hcp().expect("hcp source");
            check_target_feasible(target, sol)?;
            Ok(LiftedSolution::Hcp(Solution::new(
                source,
                sol.open_hubs().clone(),
                sol.witness().clone(),
            )))
        }
        (ReductionKind::V3ToV2 { b0, .. }, TargetSolution::Hcp(sol)) => {
            let target = record.target.as_hcp().expect("hcp target");
            let source = record.source.as_hcp().expect("hcp source");
            check_target_feasible(target, sol)?;
            let mut cover = BTreeMap::new();
            match sol.witness() {
                Witness::Single(assign) => {
                    for (&b, &h) in assign {
                        cover.insert(b, h);
                    }
                }
                Witness::Multi(tours) => {
                    // Each branch is covered by the first hub of its own
                    // task (b, b0); b0's self-task covers b0 itself.
                    for (&(b, _), tour) in tours {
                        cover.insert(b, tour.h);
                    }
                }
                Witness::Cover(_) => {
                    return Err(ReduceError::UnliftableWitness(
                        "cover witness on a variant-2 target".into(),
                    ))
                }
            }
            let g = source.graph().expect("v3 uses a graph");
            for (&b, &h) in &cover {
                if !g.has_branch_hub(b, h) {
                    return Err(ReduceError::UnliftableWitness(format!(
                        "branch {} lifted to non-adjacent hub {} (b0 = {})",
                        source.branches()[b],
                        source.hubs()[h],
                        source.branches()[*b0],
                    )));
                }
            }
            Ok(LiftedSolution::Hcp(Solution::new(
                source,
                sol.open_hubs().clone(),
                Witness::Cover(cover),
            )))
        }
        (ReductionKind::SetCoverToV3, TargetSolution::Hcp(sol)) => {
            let target = record.target.as_hcp().expect("hcp target");
            let sc = record.source.as_set_cover().expect("set cover source");
            check_target_feasible(target, sol)?;
            let sets: Vec<usize> = sol.open_hubs().iter().copied().collect();
            let weight = sets
                .iter()
                .fold(Rational::zero(), |acc, &s| acc + &sc.sets()[s].1);
            Ok(LiftedSolution::Picks { sets, weight })
        }
        (ReductionKind::V3ToSetCover, TargetSolution::Picks(picks)) => {
            let sc = record.target.as_set_cover().expect("set cover target");
            let source = record.source.as_hcp().expect("hcp source");
            let set_hub = record.set_hub.as_ref().expect("v3-to-setcover mapping");
            let mut covered = vec![false; sc.elements().len()];
            for &s in picks {
                if s >= sc.sets().len() {
                    return Err(ReduceError::UnliftableWitness(format!(
                        "picked set index {s} out of range"
                    )));
                }
                for &e in &sc.sets()[s].2 {
                    covered[e] = true;
                }
            }
            if let Some(e) = covered.iter().position(|&c| !c) {
                return Err(ReduceError::UnliftableWitness(format!(
                    "picked sets leave element {} uncovered",
                    sc.elements()[e]
                )));
            }
            let open: BTreeSet<usize> = picks.iter().map(|&s| set_hub[s]).collect();
            let g = source.graph().expect("v3 uses a graph");
            let mut cover = BTreeMap::new();
            for b in 0..source.num_branches() {
                let h = g
                    .hubs_of_branch(b)
                    .find(|h| open.contains(h))
                    .expect("every element was covered");
                cover.insert(b, h);
            }
            Ok(LiftedSolution::Hcp(Solution::new(
                source,
                open,
                Witness::Cover(cover),
            )))
        }
        (ReductionKind::QueensToSa2, TargetSolution::Hcp(sol)) => {
            let target = record.target.as_hcp().expect("hcp target");
            let q = record.source.as_queens().expect("queens source");
            let hub_square = record.hub_square.as_ref().expect("queens mapping");
            check_target_feasible(target, sol)?;
            let assign = match sol.witness() {
                Witness::Single(assign) => assign,
                other => {
                    return Err(ReduceError::UnliftableWitness(format!(
                        "{} witness on the queens target",
                        other.kind()
                    )))
                }
            };
            let mut placement = Vec::with_capacity(q.n());
            for row in 1..=q.n() {
                let &h = assign.get(&(row - 1)).ok_or_else(|| {
                    ReduceError::UnliftableWitness(format!("row {row} has no hub"))
                })?;
                let (r, c) = hub_square[h];
                if r != row {
                    return Err(ReduceError::UnliftableWitness(format!(
                        "row {row} allocated to a hub of row {r}"
                    )));
                }
                placement.push((r, c));
            }
            Ok(LiftedSolution::Placement(placement))
        }
        (kind, _) => Err(ReduceError::UnliftableWitness(format!(
            "solution shape does not match a {} target",
            kind.as_str()
        ))),
    }
}

fn check_target_feasible(target: &HcpInstance, sol: &Solution) -> Result<(), ReduceError> {
    let report = verify_solution(target, sol)
        .map_err(|e| ReduceError::UnliftableWitness(e.to_string()))?;
    if !report.ok() {
        return Err(ReduceError::UnliftableWitness(format!(
            "target solution is infeasible: {}",
            report.first().expect("not ok").detail
        )));
    }
    Ok(())
}

/// Convenience for tests and the variant-3 greedy: induced tours of a
/// cover witness seen through `reduce_v3_to_v2`, one per branch.
pub fn cover_to_tours(b0: usize, cover: &BTreeMap<usize, usize>) -> BTreeMap<(usize, usize), Tour> {
    let h0 = cover[&b0];
    cover
        .iter()
        .map(|(&b, &h)| ((b, b0), Tour::new(b, h, h0, b0)))
        .collect()
}
