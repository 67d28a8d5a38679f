//! Variant-specific feasibility rules and the solution verifier.
//!
//! All checks are pure functions over immutable instances; threshold
//! comparisons are non-strict and exact.

use crate::model::{Allocation, HcpInstance, Solution, Tour, Variant, Witness};
use crate::rational::Rational;
use num::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeasibilityError {
    #[error("operation requires variant {expected}, instance is {found}")]
    WrongVariant {
        expected: &'static str,
        found: &'static str,
    },
    #[error("witness kind {witness} does not fit a {variant}/{allocation} instance")]
    WitnessMismatch {
        witness: &'static str,
        variant: &'static str,
        allocation: &'static str,
    },
}

/// Constraint families a verification can flag, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConstraintFamily {
    TaskCoverage,
    ClosedHubUsed,
    TourTooLong,
    MissingEdge,
    SingleAllocationBroken,
    CapacityExceeded,
    BranchUncovered,
}

impl ConstraintFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintFamily::TaskCoverage => "TaskCoverage",
            ConstraintFamily::ClosedHubUsed => "ClosedHubUsed",
            ConstraintFamily::TourTooLong => "TourTooLong",
            ConstraintFamily::MissingEdge => "MissingEdge",
            ConstraintFamily::SingleAllocationBroken => "SingleAllocationBroken",
            ConstraintFamily::CapacityExceeded => "CapacityExceeded",
            ConstraintFamily::BranchUncovered => "BranchUncovered",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub family: ConstraintFamily,
    pub detail: String,
}

/// All violations of a solution, sorted by constraint family then detail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

impl std::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.ok() {
            writeln!(f, "ok")
        } else {
            for v in &self.violations {
                writeln!(f, "{}: {}", v.family.as_str(), v.detail)?;
            }
            Ok(())
        }
    }
}

/// Length of a variant-1 tour: `d(b,h) + alpha*d(h,h2) + d(h2,b2)`.
/// The middle term vanishes for single-hub tours since `d(h,h) = 0`.
pub fn tour_length(instance: &HcpInstance, tour: &Tour) -> Result<Rational, FeasibilityError> {
    if instance.variant() != Variant::V1 {
        return Err(FeasibilityError::WrongVariant {
            expected: "v1",
            found: instance.variant().as_str(),
        });
    }
    let b = instance.branch_vertex(tour.b);
    let h = instance.hub_vertex(tour.h);
    let h2 = instance.hub_vertex(tour.h2);
    let b2 = instance.branch_vertex(tour.b2);
    Ok(instance.dist(b, h).clone()
        + instance.alpha() * instance.dist(h, h2)
        + instance.dist(h2, b2))
}

/// Whether one tour satisfies the variant threshold, ignoring hub openness.
///
/// Variant 1 compares the tour length against phi. Variant 2 requires the
/// branch-hub legs to be edges, and the hub-hub leg to be an edge unless
/// both hubs coincide or alpha is zero (the discounted leg constraint is
/// then vacuous).
pub fn tour_feasible(instance: &HcpInstance, tour: &Tour) -> Result<bool, FeasibilityError> {
    match instance.variant() {
        Variant::V1 => Ok(tour_length(instance, tour)? <= *instance.phi()),
        Variant::V2 => {
            let g = instance.graph().expect("v2 uses a graph");
            let hub_leg_ok =
                tour.h == tour.h2 || instance.alpha().is_zero() || g.has_hub_hub(tour.h, tour.h2);
            Ok(g.has_branch_hub(tour.b, tour.h) && g.has_branch_hub(tour.b2, tour.h2) && hub_leg_ok)
        }
        Variant::V3 => Err(FeasibilityError::WrongVariant {
            expected: "v1 or v2",
            found: "v3",
        }),
    }
}

fn witness_fits(instance: &HcpInstance, witness: &Witness) -> bool {
    match (instance.variant(), instance.allocation(), witness) {
        (Variant::V3, _, Witness::Cover(_)) => true,
        (Variant::V1 | Variant::V2, Allocation::Multi, Witness::Multi(_)) => true,
        (Variant::V1 | Variant::V2, Allocation::Single, Witness::Single(_)) => true,
        _ => false,
    }
}

/// Checks a complete solution against every model and variant constraint.
/// Failures become report entries; the report collects all of them.
pub fn verify_solution(
    instance: &HcpInstance,
    solution: &Solution,
) -> Result<VerificationReport, FeasibilityError> {
    if !witness_fits(instance, solution.witness()) {
        return Err(FeasibilityError::WitnessMismatch {
            witness: solution.witness().kind(),
            variant: instance.variant().as_str(),
            allocation: instance.allocation().as_str(),
        });
    }

    let mut violations = Vec::new();
    let open = solution.open_hubs();
    let hub_name = |h: usize| instance.hubs()[h].clone();
    let branch_name = |b: usize| instance.branches()[b].clone();

    for h in solution.witness().used_hubs() {
        if !open.contains(&h) {
            violations.push(Violation {
                family: ConstraintFamily::ClosedHubUsed,
                detail: format!("hub {} is used but not open", hub_name(h)),
            });
        }
    }

    match solution.witness() {
        Witness::Multi(tours) => {
            for &task in instance.tasks() {
                match tours.get(&task) {
                    None => violations.push(Violation {
                        family: ConstraintFamily::TaskCoverage,
                        detail: format!(
                            "task ({},{}) has no tour",
                            branch_name(task.0),
                            branch_name(task.1)
                        ),
                    }),
                    Some(tour) => {
                        if (tour.b, tour.b2) != task {
                            violations.push(Violation {
                                family: ConstraintFamily::TaskCoverage,
                                detail: format!(
                                    "tour for task ({},{}) connects other branches",
                                    branch_name(task.0),
                                    branch_name(task.1)
                                ),
                            });
                        } else {
                            check_tour(instance, tour, &mut violations);
                        }
                    }
                }
            }
        }
        Witness::Single(assign) => {
            for (&b, &h) in assign {
                if instance.variant() == Variant::V2
                    && !instance.graph().unwrap().has_branch_hub(b, h)
                {
                    violations.push(Violation {
                        family: ConstraintFamily::MissingEdge,
                        detail: format!(
                            "branch {} is allocated to non-adjacent hub {}",
                            branch_name(b),
                            hub_name(h)
                        ),
                    });
                }
            }
            for &(b, b2) in instance.tasks() {
                match (assign.get(&b), assign.get(&b2)) {
                    (Some(&h), Some(&h2)) => {
                        let tour = Tour::new(b, h, h2, b2);
                        match instance.variant() {
                            Variant::V1 => check_tour(instance, &tour, &mut violations),
                            Variant::V2 => {
                                // Branch-hub legs were checked per allocation
                                // entry; only the induced hub-hub leg is left.
                                if !(h == h2
                                    || instance.alpha().is_zero()
                                    || instance.graph().unwrap().has_hub_hub(h, h2))
                                {
                                    violations.push(Violation {
                                        family: ConstraintFamily::MissingEdge,
                                        detail: format!(
                                            "task ({},{}) induces missing hub-hub edge {}-{}",
                                            branch_name(b),
                                            branch_name(b2),
                                            hub_name(h),
                                            hub_name(h2)
                                        ),
                                    });
                                }
                            }
                            Variant::V3 => unreachable!(),
                        }
                    }
                    _ => {
                        let missing = if assign.contains_key(&b) { b2 } else { b };
                        violations.push(Violation {
                            family: ConstraintFamily::SingleAllocationBroken,
                            detail: format!(
                                "task ({},{}): branch {} has no allocated hub",
                                branch_name(b),
                                branch_name(b2),
                                branch_name(missing)
                            ),
                        });
                    }
                }
            }
        }
        Witness::Cover(assign) => {
            let g = instance.graph().expect("v3 uses a graph");
            for b in 0..instance.num_branches() {
                match assign.get(&b) {
                    None => violations.push(Violation {
                        family: ConstraintFamily::BranchUncovered,
                        detail: format!("branch {} is not covered", branch_name(b)),
                    }),
                    Some(&h) => {
                        if !g.has_branch_hub(b, h) {
                            violations.push(Violation {
                                family: ConstraintFamily::MissingEdge,
                                detail: format!(
                                    "branch {} is assigned non-adjacent hub {}",
                                    branch_name(b),
                                    hub_name(h)
                                ),
                            });
                        }
                    }
                }
            }
        }
    }

    if let Some(p) = instance.capacity() {
        if open.len() > p {
            violations.push(Violation {
                family: ConstraintFamily::CapacityExceeded,
                detail: format!("{} hubs open, capacity is {}", open.len(), p),
            });
        }
    }

    violations.sort_by(|a, b| (a.family, &a.detail).cmp(&(b.family, &b.detail)));
    Ok(VerificationReport { violations })
}

fn check_tour(instance: &HcpInstance, tour: &Tour, violations: &mut Vec<Violation>) {
    let branch_name = |b: usize| instance.branches()[b].clone();
    let hub_name = |h: usize| instance.hubs()[h].clone();
    match instance.variant() {
        Variant::V1 => {
            let len = tour_length(instance, tour).expect("variant checked");
            if len > *instance.phi() {
                violations.push(Violation {
                    family: ConstraintFamily::TourTooLong,
                    detail: format!(
                        "tour {} {} {} {} has length {} > phi {}",
                        branch_name(tour.b),
                        hub_name(tour.h),
                        hub_name(tour.h2),
                        branch_name(tour.b2),
                        crate::rational::format_rational(&len),
                        crate::rational::format_rational(instance.phi()),
                    ),
                });
            }
        }
        Variant::V2 => {
            let g = instance.graph().expect("v2 uses a graph");
            let mut missing = Vec::new();
            if !g.has_branch_hub(tour.b, tour.h) {
                missing.push(format!("{}-{}", branch_name(tour.b), hub_name(tour.h)));
            }
            if !g.has_branch_hub(tour.b2, tour.h2) {
                missing.push(format!("{}-{}", branch_name(tour.b2), hub_name(tour.h2)));
            }
            if !(tour.h == tour.h2
                || instance.alpha().is_zero()
                || g.has_hub_hub(tour.h, tour.h2))
            {
                missing.push(format!("{}-{}", hub_name(tour.h), hub_name(tour.h2)));
            }
            for edge in missing {
                violations.push(Violation {
                    family: ConstraintFamily::MissingEdge,
                    detail: format!(
                        "tour for task ({},{}) uses missing edge {edge}",
                        branch_name(tour.b),
                        branch_name(tour.b2)
                    ),
                });
            }
        }
        Variant::V3 => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AdjacencyGraph, Geometry, MetricMatrix, RawInstance};
    use crate::rational::{frac, rat};
    use std::collections::{BTreeMap, BTreeSet};

    /// Variant-1 instance over one branch pair and two hubs with chosen
    /// distances; vertex order is b, b2, h, h2.
    fn v1_instance(alpha: Rational, phi: Rational, d: [[i64; 4]; 4]) -> HcpInstance {
        let rows = d
            .iter()
            .map(|row| row.iter().map(|&x| rat(x)).collect())
            .collect();
        RawInstance {
            branches: vec!["b".into(), "b2".into()],
            hubs: vec!["h".into(), "h2".into()],
            opening_cost: vec![rat(1), rat(1)],
            geometry: Geometry::Metric(MetricMatrix::from_rows(rows).unwrap()),
            tasks: vec![(0, 1)],
            alpha,
            phi,
            variant: Variant::V1,
            allocation: Allocation::Multi,
            capacity: None,
        }
        .build()
        .unwrap()
    }

    #[test]
    fn two_hub_tour_length_with_half_discount() {
        // d(b,h)=1, d(h,h2)=1, d(h2,b2)=1 -> 1 + 0.5*1 + 1 = 5/2
        let inst = v1_instance(
            frac(1, 2),
            frac(11, 4),
            [[0, 2, 1, 2], [2, 0, 2, 1], [1, 2, 0, 1], [2, 1, 1, 0]],
        );
        let tour = Tour::new(0, 0, 1, 1);
        assert_eq!(tour_length(&inst, &tour).unwrap(), frac(5, 2));
        assert!(tour_feasible(&inst, &tour).unwrap());
    }

    #[test]
    fn single_hub_tour_length() {
        // d(b,h)=1, d(h,b2)=1 -> 2; the hub-hub term is 0
        let inst = v1_instance(
            frac(1, 2),
            frac(11, 4),
            [[0, 2, 1, 2], [2, 0, 1, 1], [1, 1, 0, 1], [2, 1, 1, 0]],
        );
        assert_eq!(tour_length(&inst, &Tour::new(0, 0, 0, 1)).unwrap(), rat(2));
    }

    #[test]
    fn zero_metric_tour_has_zero_length() {
        let inst = v1_instance(rat(0), rat(0), [[0; 4]; 4]);
        assert_eq!(tour_length(&inst, &Tour::new(0, 0, 1, 1)).unwrap(), rat(0));
    }

    #[test]
    fn length_three_tour_is_infeasible_at_phi_11_4() {
        let inst = v1_instance(
            frac(1, 2),
            frac(11, 4),
            [[0, 2, 1, 2], [2, 0, 2, 2], [1, 2, 0, 2], [2, 2, 2, 0]],
        );
        // b -> h -> b2 over a weight-2 leg: 1 + 2 = 3 > 11/4
        let tour = Tour::new(0, 0, 0, 1);
        assert_eq!(tour_length(&inst, &tour).unwrap(), rat(3));
        assert!(!tour_feasible(&inst, &tour).unwrap());
    }

    use crate::fixtures::v2_example;

    #[test]
    fn v2_tour_feasibility_follows_edges() {
        let inst = v2_example(Allocation::Multi);
        // B1-H1-B2: both branch legs exist
        assert!(tour_feasible(&inst, &Tour::new(0, 0, 0, 1)).unwrap());
        // B1-H3-B2: edge H3-B2 missing
        assert!(!tour_feasible(&inst, &Tour::new(0, 2, 2, 1)).unwrap());
        // B1-H3-H2-B2: all legs exist
        assert!(tour_feasible(&inst, &Tour::new(0, 2, 1, 1)).unwrap());
        // B1-H1-H2-B2: hub-hub edge H1-H2 missing
        assert!(!tour_feasible(&inst, &Tour::new(0, 0, 1, 1)).unwrap());
    }

    #[test]
    fn v2_hub_leg_exempt_when_alpha_zero() {
        let base = v2_example(Allocation::Multi);
        let inst = RawInstance {
            branches: base.branches().to_vec(),
            hubs: base.hubs().to_vec(),
            opening_cost: base.opening_costs().to_vec(),
            geometry: base.geometry().clone(),
            tasks: base.tasks().to_vec(),
            alpha: rat(0),
            phi: rat(0),
            variant: Variant::V2,
            allocation: Allocation::Multi,
            capacity: None,
        }
        .build()
        .unwrap();
        // B1-H1-H2-B2 lacks the hub-hub edge, but the discounted leg
        // constraint is vacuous at alpha = 0
        assert!(tour_feasible(&inst, &Tour::new(0, 0, 1, 1)).unwrap());
    }

    #[test]
    fn verify_ma_solution_and_closed_hub() {
        let inst = v2_example(Allocation::Multi);
        let tour = Tour::new(0, 0, 0, 1);
        let sol = Solution::new(
            &inst,
            BTreeSet::from([0]),
            Witness::Multi(BTreeMap::from([((0, 1), tour)])),
        );
        assert!(verify_solution(&inst, &sol).unwrap().ok());

        let closed = Solution::new(
            &inst,
            BTreeSet::new(),
            Witness::Multi(BTreeMap::from([((0, 1), tour)])),
        );
        let report = verify_solution(&inst, &closed).unwrap();
        assert!(!report.ok());
        assert_eq!(report.first().unwrap().family, ConstraintFamily::ClosedHubUsed);
    }

    #[test]
    fn verify_sa_missing_hub_edge() {
        let inst = v2_example(Allocation::Single);
        // B1 -> H1, B2 -> H2: induced tour needs missing edge H1-H2
        let sol = Solution::new(
            &inst,
            BTreeSet::from([0, 1]),
            Witness::Single(BTreeMap::from([(0, 0), (1, 1)])),
        );
        let report = verify_solution(&inst, &sol).unwrap();
        assert_eq!(report.first().unwrap().family, ConstraintFamily::MissingEdge);
        // B1 -> H1, B2 -> H1: single shared hub is fine
        let sol = Solution::new(
            &inst,
            BTreeSet::from([0]),
            Witness::Single(BTreeMap::from([(0, 0), (1, 0)])),
        );
        assert!(verify_solution(&inst, &sol).unwrap().ok());
    }

    #[test]
    fn verify_empty_instance_is_vacuously_ok() {
        let inst = RawInstance {
            branches: vec!["a".into()],
            hubs: vec!["h".into()],
            opening_cost: vec![rat(1)],
            geometry: Geometry::Graph(AdjacencyGraph::new([(0, 0)], [])),
            tasks: vec![],
            alpha: rat(1),
            phi: rat(0),
            variant: Variant::V2,
            allocation: Allocation::Multi,
            capacity: None,
        }
        .build()
        .unwrap();
        let sol = Solution::new(&inst, BTreeSet::new(), Witness::Multi(BTreeMap::new()));
        assert!(verify_solution(&inst, &sol).unwrap().ok());
    }

    #[test]
    fn verify_capacity_and_witness_mismatch() {
        let inst = RawInstance {
            branches: vec!["a".into()],
            hubs: vec!["h1".into(), "h2".into()],
            opening_cost: vec![rat(1), rat(1)],
            geometry: Geometry::Graph(AdjacencyGraph::new([(0, 0), (0, 1)], [])),
            tasks: vec![],
            alpha: rat(0),
            phi: rat(0),
            variant: Variant::V3,
            allocation: Allocation::Single,
            capacity: Some(1),
        }
        .build()
        .unwrap();
        let sol = Solution::new(
            &inst,
            BTreeSet::from([0, 1]),
            Witness::Cover(BTreeMap::from([(0, 0)])),
        );
        let report = verify_solution(&inst, &sol).unwrap();
        assert_eq!(
            report.first().unwrap().family,
            ConstraintFamily::CapacityExceeded
        );

        let bad = Solution::new(&inst, BTreeSet::new(), Witness::Multi(BTreeMap::new()));
        assert!(matches!(
            verify_solution(&inst, &bad),
            Err(FeasibilityError::WitnessMismatch { .. })
        ));
    }
}
