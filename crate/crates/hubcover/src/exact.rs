//! Brute-force exact solvers, used as correctness oracles and for the
//! capacitated variants at desk scale.
//!
//! Hub subsets are enumerated in nondecreasing (total cost, size, lex)
//! order, so the first feasible subset is the optimum under a fixed,
//! reproducible tie-break.

use crate::feasibility::tour_feasible;
use crate::model::{Allocation, HcpInstance, Solution, Tour, Variant, Witness};
use crate::rational::Rational;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Desk-scale limits for exhaustive solving. Exceeding them is an explicit
/// error, never silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_hubs: usize,
    pub max_sa_branches: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_hubs: 20,
            max_sa_branches: 12,
        }
    }
}

impl Limits {
    /// Parses overrides of the form `hubs=N,branches=M`; either key may be
    /// omitted.
    pub fn parse_overrides(s: &str) -> Result<Self, SolveError> {
        let mut limits = Limits::default();
        for part in s.split(',').filter(|p| !p.trim().is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| SolveError::BadLimits(s.to_string()))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| SolveError::BadLimits(s.to_string()))?;
            match key.trim() {
                "hubs" => limits.max_hubs = value,
                "branches" => limits.max_sa_branches = value,
                _ => return Err(SolveError::BadLimits(s.to_string())),
            }
        }
        Ok(limits)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("instance exceeds desk-scale limits: {0}")]
    LimitExceeded(String),
    #[error("malformed limits override {0:?}, expected hubs=N,branches=M")]
    BadLimits(String),
    #[error("no feasible solution exists: {0}")]
    Infeasible(String),
    #[error("algorithm does not apply: {0}")]
    WrongSetting(String),
    #[error("element {0} is not covered by any set")]
    UncoverableElement(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OptimalResult {
    Optimal(Solution),
    Infeasible,
}

impl OptimalResult {
    pub fn solution(&self) -> Option<&Solution> {
        match self {
            OptimalResult::Optimal(s) => Some(s),
            OptimalResult::Infeasible => None,
        }
    }

    pub fn optimum(&self) -> Option<&Rational> {
        self.solution().map(|s| s.cost())
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, OptimalResult::Infeasible)
    }
}

/// Decides whether the instance is solvable with exactly the given hubs
/// open, returning a complete witness when it is.
///
/// Multi allocation scans all hub pairs per task independently. Single
/// allocation backtracks over branch-to-hub assignments, branches ordered
/// by decreasing task degree. Variant 3 picks any adjacent open hub per
/// branch.
pub fn feasible_with_hubs(instance: &HcpInstance, hubset: &BTreeSet<usize>) -> Option<Witness> {
    match (instance.variant(), instance.allocation()) {
        (Variant::V3, _) => {
            let g = instance.graph().expect("v3 uses a graph");
            let mut assign = BTreeMap::new();
            for b in 0..instance.num_branches() {
                let h = g.hubs_of_branch(b).find(|h| hubset.contains(h))?;
                assign.insert(b, h);
            }
            Some(Witness::Cover(assign))
        }
        (_, Allocation::Multi) => {
            let mut tours = BTreeMap::new();
            for &(b, b2) in instance.tasks() {
                let tour = first_feasible_tour(instance, (b, b2), hubset)?;
                tours.insert((b, b2), tour);
            }
            Some(Witness::Multi(tours))
        }
        (_, Allocation::Single) => sa_backtrack(instance, hubset).map(Witness::Single),
    }
}

/// Lexicographically first feasible `(h, h2)` tour for one task over the
/// open hub set.
fn first_feasible_tour(
    instance: &HcpInstance,
    task: (usize, usize),
    hubset: &BTreeSet<usize>,
) -> Option<Tour> {
    for &h in hubset {
        for &h2 in hubset {
            let tour = Tour::new(task.0, h, h2, task.1);
            if tour_feasible(instance, &tour).expect("variant checked by caller") {
                return Some(tour);
            }
        }
    }
    None
}

fn sa_backtrack(instance: &HcpInstance, hubset: &BTreeSet<usize>) -> Option<BTreeMap<usize, usize>> {
    // Only branches that occur in tasks constrain anything.
    let mut degree = vec![0usize; instance.num_branches()];
    for &(b, b2) in instance.tasks() {
        degree[b] += 1;
        if b2 != b {
            degree[b2] += 1;
        }
    }
    let mut order: Vec<usize> = (0..instance.num_branches())
        .filter(|&b| degree[b] > 0)
        .collect();
    order.sort_by_key(|&b| (std::cmp::Reverse(degree[b]), b));

    // Tasks incident to each branch, for incremental checking.
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); instance.num_branches()];
    for &(b, b2) in instance.tasks() {
        incident[b].push((b, b2));
        if b2 != b {
            incident[b2].push((b, b2));
        }
    }

    let hubs: Vec<usize> = hubset.iter().copied().collect();
    let mut assign: BTreeMap<usize, usize> = BTreeMap::new();

    fn consistent(
        instance: &HcpInstance,
        assign: &BTreeMap<usize, usize>,
        branch: usize,
        incident: &[Vec<(usize, usize)>],
    ) -> bool {
        let h = assign[&branch];
        if instance.variant() == Variant::V2
            && !instance.graph().unwrap().has_branch_hub(branch, h)
        {
            return false;
        }
        for &(b, b2) in &incident[branch] {
            if let (Some(&ha), Some(&hb)) = (assign.get(&b), assign.get(&b2)) {
                let tour = Tour::new(b, ha, hb, b2);
                if !tour_feasible(instance, &tour).expect("variant checked") {
                    return false;
                }
            }
        }
        true
    }

    fn recurse(
        instance: &HcpInstance,
        order: &[usize],
        depth: usize,
        hubs: &[usize],
        assign: &mut BTreeMap<usize, usize>,
        incident: &[Vec<(usize, usize)>],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let branch = order[depth];
        for &h in hubs {
            assign.insert(branch, h);
            if consistent(instance, assign, branch, incident)
                && recurse(instance, order, depth + 1, hubs, assign, incident)
            {
                return true;
            }
            assign.remove(&branch);
        }
        false
    }

    if recurse(instance, &order, 0, &hubs, &mut assign, &incident) {
        Some(assign)
    } else {
        None
    }
}

fn check_limits(instance: &HcpInstance, limits: &Limits) -> Result<(), SolveError> {
    if instance.num_hubs() > limits.max_hubs {
        return Err(SolveError::LimitExceeded(format!(
            "{} hubs, limit {}",
            instance.num_hubs(),
            limits.max_hubs
        )));
    }
    if instance.allocation() == Allocation::Single
        && instance.variant() != Variant::V3
        && instance.num_branches() > limits.max_sa_branches
    {
        return Err(SolveError::LimitExceeded(format!(
            "{} branches under single allocation, limit {}",
            instance.num_branches(),
            limits.max_sa_branches
        )));
    }
    Ok(())
}

/// Exhaustive optimum over all hub subsets (bounded by the capacity when
/// present). Infeasibility is decided against the full admissible range of
/// subsets.
pub fn solve_exact(instance: &HcpInstance, limits: &Limits) -> Result<OptimalResult, SolveError> {
    check_limits(instance, limits)?;
    let nh = instance.num_hubs();
    let cap = instance.capacity().unwrap_or(nh);

    let mut subsets: Vec<(Rational, Vec<usize>)> = Vec::new();
    for mask in 0u64..(1u64 << nh) {
        let subset: Vec<usize> = (0..nh).filter(|h| mask >> h & 1 == 1).collect();
        if subset.len() > cap {
            continue;
        }
        let cost = instance.hubset_cost(subset.iter());
        subsets.push((cost, subset));
    }
    subsets.sort_by(|a, b| (&a.0, a.1.len(), &a.1).cmp(&(&b.0, b.1.len(), &b.1)));

    for (_, subset) in subsets {
        let hubset: BTreeSet<usize> = subset.into_iter().collect();
        if let Some(witness) = feasible_with_hubs(instance, &hubset) {
            return Ok(OptimalResult::Optimal(Solution::new(
                instance, hubset, witness,
            )));
        }
    }
    Ok(OptimalResult::Infeasible)
}

/// Cheapest feasible hub pair for one multi-allocation task, counting a
/// hub once when first and second coincide. Ties break lexicographically
/// on `(h, h2)`.
pub fn per_task_best_pair(
    instance: &HcpInstance,
    task: (usize, usize),
) -> Option<(usize, usize, Rational)> {
    debug_assert_eq!(instance.allocation(), Allocation::Multi);
    let nh = instance.num_hubs();
    let mut best: Option<(Rational, usize, usize)> = None;
    for h in 0..nh {
        for h2 in 0..nh {
            let tour = Tour::new(task.0, h, h2, task.1);
            if !tour_feasible(instance, &tour).expect("variant 1 or 2 required") {
                continue;
            }
            let mut cost = instance.opening_cost(h).clone();
            if h2 != h {
                cost += instance.opening_cost(h2);
            }
            let candidate = (cost, h, h2);
            if best.as_ref().map_or(true, |b| candidate < *b) {
                best = Some(candidate);
            }
        }
    }
    best.map(|(cost, h, h2)| (h, h2, cost))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AdjacencyGraph, Geometry, MetricMatrix, RawInstance};
    use crate::rational::rat;

    fn unit_metric(n: usize) -> MetricMatrix {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { rat(0) } else { rat(1) }).collect())
            .collect();
        MetricMatrix::from_rows(rows).unwrap()
    }

    fn small_v1(costs: Vec<Rational>, phi: Rational) -> HcpInstance {
        let nh = costs.len();
        RawInstance {
            branches: vec!["a".into(), "b".into()],
            hubs: (0..nh).map(|h| format!("h{h}")).collect(),
            opening_cost: costs,
            geometry: Geometry::Metric(unit_metric(2 + nh)),
            tasks: vec![(0, 1)],
            alpha: rat(1),
            phi,
            variant: Variant::V1,
            allocation: Allocation::Multi,
            capacity: None,
        }
        .build()
        .unwrap()
    }

    #[test]
    fn cheapest_feasible_singleton_wins() {
        let inst = small_v1(vec![rat(3), rat(5)], rat(2));
        let result = solve_exact(&inst, &Limits::default()).unwrap();
        let sol = result.solution().unwrap();
        assert_eq!(sol.cost(), &rat(3));
        assert_eq!(sol.open_hubs(), &BTreeSet::from([0]));
    }

    #[test]
    fn empty_hubset_with_tasks_is_infeasible() {
        let inst = small_v1(vec![rat(1)], rat(2));
        assert!(feasible_with_hubs(&inst, &BTreeSet::new()).is_none());
    }

    #[test]
    fn infeasible_when_phi_too_small() {
        let inst = small_v1(vec![rat(1), rat(1)], rat(1));
        // every tour has length >= 2 on the unit metric
        assert!(solve_exact(&inst, &Limits::default()).unwrap().is_infeasible());
    }

    #[test]
    fn single_hub_beats_distinct_pair_under_unit_costs() {
        let inst = small_v1(vec![rat(1), rat(1)], rat(2));
        let (h, h2, cost) = per_task_best_pair(&inst, (0, 1)).unwrap();
        assert_eq!((h, h2), (0, 0));
        assert_eq!(cost, rat(1));
    }

    #[test]
    fn best_pair_matches_exhaustive_scan() {
        // independent full scan without the tie-breaking shortcut
        let inst = small_v1(vec![rat(4), rat(2), rat(3), rat(9), rat(5), rat(7)], rat(2));
        let mut best: Option<Rational> = None;
        for h in 0..6 {
            for h2 in 0..6 {
                let tour = Tour::new(0, h, h2, 1);
                if tour_feasible(&inst, &tour).unwrap() {
                    let mut c = inst.opening_cost(h).clone();
                    if h != h2 {
                        c += inst.opening_cost(h2);
                    }
                    if best.as_ref().map_or(true, |b| &c < b) {
                        best = Some(c);
                    }
                }
            }
        }
        let (_, _, cost) = per_task_best_pair(&inst, (0, 1)).unwrap();
        assert_eq!(cost, best.unwrap());
    }

    #[test]
    fn limit_exceeded_is_an_error() {
        let inst = small_v1(vec![rat(1), rat(1)], rat(2));
        let limits = Limits {
            max_hubs: 1,
            max_sa_branches: 12,
        };
        assert!(matches!(
            solve_exact(&inst, &limits),
            Err(SolveError::LimitExceeded(_))
        ));
    }

    #[test]
    fn limits_override_parsing() {
        let l = Limits::parse_overrides("hubs=8,branches=4").unwrap();
        assert_eq!(l.max_hubs, 8);
        assert_eq!(l.max_sa_branches, 4);
        assert!(Limits::parse_overrides("hubs=x").is_err());
        assert!(Limits::parse_overrides("cores=2").is_err());
    }

    #[test]
    fn v3_feasibility_picks_lowest_adjacent_hub() {
        let inst = RawInstance {
            branches: vec!["b1".into(), "b2".into()],
            hubs: vec!["h1".into(), "h2".into()],
            opening_cost: vec![rat(1), rat(1)],
            geometry: Geometry::Graph(AdjacencyGraph::new([(0, 0), (0, 1), (1, 1)], [])),
            tasks: vec![],
            alpha: rat(0),
            phi: rat(0),
            variant: Variant::V3,
            allocation: Allocation::Single,
            capacity: None,
        }
        .build()
        .unwrap();
        let witness = feasible_with_hubs(&inst, &BTreeSet::from([0, 1])).unwrap();
        match witness {
            Witness::Cover(assign) => {
                assert_eq!(assign[&0], 0);
                assert_eq!(assign[&1], 1);
            }
            _ => panic!("expected cover witness"),
        }
        assert!(feasible_with_hubs(&inst, &BTreeSet::from([0])).is_none());
    }

    #[test]
    fn capacitated_below_optimum_is_infeasible() {
        // two tasks forcing two distinct hubs would need a richer metric;
        // here capacity 0 is invalid, so test with a v3 pair instead
        let inst = RawInstance {
            branches: vec!["b1".into(), "b2".into()],
            hubs: vec!["h1".into(), "h2".into()],
            opening_cost: vec![rat(1), rat(1)],
            geometry: Geometry::Graph(AdjacencyGraph::new([(0, 0), (1, 1)], [])),
            tasks: vec![],
            alpha: rat(0),
            phi: rat(0),
            variant: Variant::V3,
            allocation: Allocation::Single,
            capacity: Some(1),
        }
        .build()
        .unwrap();
        assert!(solve_exact(&inst, &Limits::default()).unwrap().is_infeasible());
    }
}
