//! Approximation algorithms: the task-wise bound for multi-allocation
//! variants 1 and 2, bounded subset enumeration for the unweighted case,
//! and the greedy weighted set cover that solves variant 3.
//!
//! Single-allocation variants 1 and 2 and all capacitated variants are
//! refused: no approximation guarantee exists for them, so callers get an
//! explicit error instead of an unbounded heuristic.

use crate::exact::{feasible_with_hubs, SolveError};
use crate::model::{Allocation, HcpInstance, SetCoverInstance, Solution, Tour, Variant, Witness};
use crate::rational::{rat, Rational};
use crate::reductions::v3_to_setcover;
use num::Zero;
use std::collections::{BTreeMap, BTreeSet};

fn require_ma_uncapacitated(instance: &HcpInstance) -> Result<(), SolveError> {
    if instance.variant() == Variant::V3 {
        return Err(SolveError::WrongSetting(
            "variant 3 is solved via greedy set cover, not the task-wise bound".into(),
        ));
    }
    if instance.allocation() != Allocation::Multi {
        return Err(SolveError::WrongSetting(
            "single-allocation variants 1 and 2 admit no approximation bound; \
             use the exact solver"
                .into(),
        ));
    }
    if instance.capacity().is_some() {
        return Err(SolveError::WrongSetting(
            "capacitated instances admit no approximation bound; use the exact solver".into(),
        ));
    }
    Ok(())
}

/// Opens the cheapest feasible hub pair for every task independently and
/// unions the openings. The total cost is at most the sum of per-task
/// optima, hence at most `|tasks| * OPT <= |B|^2 * OPT`.
pub fn approx_taskwise(instance: &HcpInstance) -> Result<Solution, SolveError> {
    require_ma_uncapacitated(instance)?;

    let mut open: BTreeSet<usize> = BTreeSet::new();
    let mut tours: BTreeMap<(usize, usize), Tour> = BTreeMap::new();
    for &(b, b2) in instance.tasks() {
        let (h, h2, _) = crate::exact::per_task_best_pair(instance, (b, b2)).ok_or_else(|| {
            SolveError::Infeasible(format!(
                "task ({},{}) has no feasible hub pair even with all hubs open",
                instance.branches()[b],
                instance.branches()[b2]
            ))
        })?;
        open.insert(h);
        open.insert(h2);
        tours.insert((b, b2), Tour::new(b, h, h2, b2));
    }
    Ok(Solution::new(instance, open, Witness::Multi(tours)))
}

/// Lexicographic subsets of `0..n` of exactly size `k`, ascending.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn recurse(n: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            recurse(n, k, i + 1, current, out);
            current.pop();
        }
    }
    recurse(n, k, 0, &mut current, &mut out);
    out
}

/// Tries every hub subset of size at most `k` (unit opening costs only).
/// If the optimum uses at most `k` hubs this finds it; otherwise it falls
/// back to opening every hub, provided that is feasible at all.
pub fn approx_bounded_enumeration(instance: &HcpInstance, k: usize) -> Result<Solution, SolveError> {
    require_ma_uncapacitated(instance)?;
    if k < 1 {
        return Err(SolveError::WrongSetting("k must be at least 1".into()));
    }
    if instance.opening_costs().iter().any(|c| c != &rat(1)) {
        return Err(SolveError::WrongSetting(
            "bounded enumeration applies to the unweighted case only (all costs 1)".into(),
        ));
    }

    let nh = instance.num_hubs();
    for size in 1..=k.min(nh) {
        for subset in combinations(nh, size) {
            let hubset: BTreeSet<usize> = subset.into_iter().collect();
            if let Some(witness) = feasible_with_hubs(instance, &hubset) {
                return Ok(Solution::new(instance, hubset, witness));
            }
        }
    }

    let all: BTreeSet<usize> = (0..nh).collect();
    match feasible_with_hubs(instance, &all) {
        Some(witness) => Ok(Solution::new(instance, all, witness)),
        None => Err(SolveError::Infeasible(
            "no solution exists even with every hub open".into(),
        )),
    }
}

/// Chvatal-style greedy for weighted set cover: repeatedly pick the set
/// minimizing weight per newly covered element, ties broken by lower
/// weight then lower index. Returns chosen indices in pick order and
/// their total weight.
pub fn greedy_set_cover(sc: &SetCoverInstance) -> Result<(Vec<usize>, Rational), SolveError> {
    if let Some(&e) = sc.uncoverable().first() {
        return Err(SolveError::UncoverableElement(sc.elements()[e].clone()));
    }

    let mut uncovered: BTreeSet<usize> = (0..sc.elements().len()).collect();
    let mut chosen = Vec::new();
    let mut total = Rational::zero();

    while !uncovered.is_empty() {
        let mut best: Option<(usize, usize)> = None; // (set, newly covered)
        for (i, (_, weight, members)) in sc.sets().iter().enumerate() {
            let fresh = members.intersection(&uncovered).count();
            if fresh == 0 {
                continue;
            }
            let better = match best {
                None => true,
                Some((j, fresh_j)) => {
                    let weight_j = &sc.sets()[j].1;
                    // weight/fresh < weight_j/fresh_j by cross multiplication
                    let lhs = weight * rat(fresh_j as i64);
                    let rhs = weight_j * rat(fresh as i64);
                    lhs < rhs || (lhs == rhs && (weight, i) < (weight_j, j))
                }
            };
            if better {
                best = Some((i, fresh));
            }
        }
        let (pick, _) = best.expect("uncovered elements are coverable");
        for &e in &sc.sets()[pick].2 {
            uncovered.remove(&e);
        }
        total += &sc.sets()[pick].1;
        chosen.push(pick);
    }
    Ok((chosen, total))
}

/// Solves a variant-3 instance within the greedy set cover bound: reduce
/// to set cover, run the greedy, and map chosen sets back to open hubs.
pub fn solve_variant3_greedy(instance: &HcpInstance) -> Result<Solution, SolveError> {
    if instance.variant() != Variant::V3 {
        return Err(SolveError::WrongSetting(format!(
            "greedy cover applies to variant 3, instance is {}",
            instance.variant().as_str()
        )));
    }
    if instance.capacity().is_some() {
        return Err(SolveError::WrongSetting(
            "capacitated instances admit no approximation bound; use the exact solver".into(),
        ));
    }

    let record = v3_to_setcover(instance).expect("variant checked");
    let sc = record.target.as_set_cover().expect("set cover target");
    let set_hub = record.set_hub.as_ref().expect("mapping present");

    let (picks, _) = greedy_set_cover(sc).map_err(|e| match e {
        SolveError::UncoverableElement(b) => {
            SolveError::Infeasible(format!("branch {b} has no adjacent hub"))
        }
        other => other,
    })?;

    let open: BTreeSet<usize> = picks.iter().map(|&s| set_hub[s]).collect();
    let g = instance.graph().expect("v3 uses a graph");
    let mut cover = BTreeMap::new();
    for b in 0..instance.num_branches() {
        let h = g
            .hubs_of_branch(b)
            .find(|h| open.contains(h))
            .expect("greedy covered every element");
        cover.insert(b, h);
    }
    Ok(Solution::new(instance, open, Witness::Cover(cover)))
}

/// Harmonic number H(d) as an exact rational; the greedy cover ratio bound
/// for largest set size d.
pub fn harmonic(d: usize) -> Rational {
    let mut sum = Rational::zero();
    for i in 1..=d {
        sum += Rational::new(1.into(), (i as i64).into());
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{solve_exact, Limits};
    use crate::feasibility::verify_solution;
    use crate::model::{AdjacencyGraph, Geometry, MetricMatrix, RawInstance};
    use crate::rational::frac;

    fn unit_metric(n: usize) -> MetricMatrix {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { rat(0) } else { rat(1) }).collect())
            .collect();
        MetricMatrix::from_rows(rows).unwrap()
    }

    fn v1_ma(nb: usize, nh: usize, tasks: Vec<(usize, usize)>, phi: Rational) -> HcpInstance {
        RawInstance {
            branches: (0..nb).map(|b| format!("b{b}")).collect(),
            hubs: (0..nh).map(|h| format!("h{h}")).collect(),
            opening_cost: vec![rat(1); nh],
            geometry: Geometry::Metric(unit_metric(nb + nh)),
            tasks,
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
    fn single_task_taskwise_is_optimal() {
        let inst = v1_ma(2, 3, vec![(0, 1)], rat(2));
        let sol = approx_taskwise(&inst).unwrap();
        let opt = solve_exact(&inst, &Limits::default()).unwrap();
        assert_eq!(sol.cost(), opt.optimum().unwrap());
        assert!(verify_solution(&inst, &sol).unwrap().ok());
    }

    #[test]
    fn shared_cheapest_pair_is_deduplicated() {
        let inst = v1_ma(3, 3, vec![(0, 1), (1, 2)], rat(2));
        let sol = approx_taskwise(&inst).unwrap();
        // both tasks pick hub 0 as their single-hub tour
        assert_eq!(sol.cost(), &rat(1));
    }

    #[test]
    fn taskwise_refuses_sa_and_capacitated() {
        let mut raw = RawInstance {
            branches: vec!["a".into(), "b".into()],
            hubs: vec!["h".into()],
            opening_cost: vec![rat(1)],
            geometry: Geometry::Metric(unit_metric(3)),
            tasks: vec![(0, 1)],
            alpha: rat(1),
            phi: rat(2),
            variant: Variant::V1,
            allocation: Allocation::Single,
            capacity: None,
        };
        let sa = raw.clone().build().unwrap();
        assert!(matches!(
            approx_taskwise(&sa),
            Err(SolveError::WrongSetting(_))
        ));
        raw.allocation = Allocation::Multi;
        raw.capacity = Some(1);
        let capped = raw.build().unwrap();
        assert!(matches!(
            approx_taskwise(&capped),
            Err(SolveError::WrongSetting(_))
        ));
    }

    #[test]
    fn taskwise_infeasible_task_is_an_error() {
        let inst = v1_ma(2, 2, vec![(0, 1)], rat(1));
        assert!(matches!(
            approx_taskwise(&inst),
            Err(SolveError::Infeasible(_))
        ));
    }

    #[test]
    fn bounded_enumeration_finds_small_optimum() {
        let inst = v1_ma(2, 4, vec![(0, 1)], rat(2));
        let sol = approx_bounded_enumeration(&inst, 2).unwrap();
        assert_eq!(sol.cost(), &rat(1));
    }

    #[test]
    fn bounded_enumeration_rejects_weighted_instances() {
        let inst = RawInstance {
            branches: vec!["a".into(), "b".into()],
            hubs: vec!["h".into()],
            opening_cost: vec![frac(3, 2)],
            geometry: Geometry::Metric(unit_metric(3)),
            tasks: vec![(0, 1)],
            alpha: rat(1),
            phi: rat(2),
            variant: Variant::V1,
            allocation: Allocation::Multi,
            capacity: None,
        }
        .build()
        .unwrap();
        assert!(matches!(
            approx_bounded_enumeration(&inst, 1),
            Err(SolveError::WrongSetting(_))
        ));
    }

    #[test]
    fn bounded_enumeration_infeasible_instance() {
        let inst = v1_ma(2, 2, vec![(0, 1)], rat(1));
        assert!(matches!(
            approx_bounded_enumeration(&inst, 1),
            Err(SolveError::Infeasible(_))
        ));
    }

    fn cover_instance(sets: Vec<(Rational, Vec<usize>)>, n_elems: usize) -> SetCoverInstance {
        SetCoverInstance::new(
            (0..n_elems).map(|e| format!("e{e}")).collect(),
            sets.into_iter()
                .enumerate()
                .map(|(i, (w, m))| (format!("s{i}"), w, m.into_iter().collect()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn greedy_forced_singletons() {
        let sc = cover_instance(
            vec![(rat(1), vec![0]), (rat(1), vec![1]), (rat(1), vec![2])],
            3,
        );
        let (picks, weight) = greedy_set_cover(&sc).unwrap();
        assert_eq!(picks, vec![0, 1, 2]);
        assert_eq!(weight, rat(3));
    }

    #[test]
    fn greedy_prefers_the_one_covering_set() {
        let sc = cover_instance(
            vec![
                (rat(5), vec![0, 1, 2]),
                (rat(3), vec![0]),
                (rat(3), vec![1]),
                (rat(3), vec![2]),
            ],
            3,
        );
        let (picks, weight) = greedy_set_cover(&sc).unwrap();
        assert_eq!(picks, vec![0]);
        assert_eq!(weight, rat(5));
    }

    #[test]
    fn greedy_uncoverable_element() {
        let sc = cover_instance(vec![(rat(1), vec![0])], 2);
        assert!(matches!(
            greedy_set_cover(&sc),
            Err(SolveError::UncoverableElement(_))
        ));
    }

    #[test]
    fn variant3_greedy_on_the_chain_example() {
        let inst = crate::fixtures::sample_v3();
        let sol = solve_variant3_greedy(&inst).unwrap();
        assert!(verify_solution(&inst, &sol).unwrap().ok());
        assert_eq!(sol.cost(), &rat(2));
        let opt = solve_exact(&inst, &Limits::default()).unwrap();
        assert_eq!(opt.optimum().unwrap(), &rat(2));
    }

    #[test]
    fn variant3_greedy_single_shared_hub() {
        let inst = RawInstance {
            branches: vec!["a".into(), "b".into(), "c".into()],
            hubs: vec!["h".into(), "g".into()],
            opening_cost: vec![rat(1), rat(1)],
            geometry: Geometry::Graph(AdjacencyGraph::new([(0, 0), (1, 0), (2, 0), (0, 1)], [])),
            tasks: vec![],
            alpha: rat(0),
            phi: rat(0),
            variant: Variant::V3,
            allocation: Allocation::Single,
            capacity: None,
        }
        .build()
        .unwrap();
        let sol = solve_variant3_greedy(&inst).unwrap();
        assert_eq!(sol.open_hubs(), &BTreeSet::from([0]));
    }

    #[test]
    fn variant3_greedy_isolated_branch_is_infeasible() {
        let inst = RawInstance {
            branches: vec!["a".into(), "b".into()],
            hubs: vec!["h".into()],
            opening_cost: vec![rat(1)],
            geometry: Geometry::Graph(AdjacencyGraph::new([(0, 0)], [])),
            tasks: vec![],
            alpha: rat(0),
            phi: rat(0),
            variant: Variant::V3,
            allocation: Allocation::Single,
            capacity: None,
        }
        .build()
        .unwrap();
        assert!(matches!(
            solve_variant3_greedy(&inst),
            Err(SolveError::Infeasible(_))
        ));
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic(1), rat(1));
        assert_eq!(harmonic(2), frac(3, 2));
        assert_eq!(harmonic(3), frac(11, 6));
    }
}
