//! Seeded random instance families for testing and benchmarking.
//!
//! Every family is a pure function of its parameters and seed, so a
//! (family, params, seed) triple always reproduces the same instance.

use crate::model::{
    AdjacencyGraph, Allocation, Geometry, HcpInstance, ModelError, QueensInstance, RawInstance,
    Variant,
};
use crate::rational::{rat, Rational};
use crate::reductions::{queens_to_sa2, ReduceError};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("bad generator parameters: {0}")]
    BadSpec(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
}

fn branch_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("B{i}")).collect()
}

fn hub_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("H{i}")).collect()
}

fn random_costs(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| rat(rng.gen_range(1..=9))).collect()
}

/// Ordered task pairs over distinct branches; for single allocation,
/// branches left out of every task get a self-task so the instance is
/// well formed.
fn random_tasks(
    rng: &mut ChaCha8Rng,
    num_branches: usize,
    num_tasks: usize,
    allocation: Allocation,
) -> Vec<(usize, usize)> {
    let mut tasks: Vec<(usize, usize)> = Vec::new();
    if num_branches >= 2 {
        for _ in 0..num_tasks {
            let b = rng.gen_range(0..num_branches);
            let mut b2 = rng.gen_range(0..num_branches - 1);
            if b2 >= b {
                b2 += 1;
            }
            tasks.push((b, b2));
        }
    }
    if allocation == Allocation::Single {
        let mut covered = vec![false; num_branches];
        for &(b, b2) in &tasks {
            covered[b] = true;
            covered[b2] = true;
        }
        for (b, seen) in covered.into_iter().enumerate() {
            if !seen {
                tasks.push((b, b));
            }
        }
    }
    tasks.sort_unstable();
    tasks.dedup();
    tasks
}

/// Points on an integer grid with L1 distances. The threshold is set to
/// the given percentile of per-task best single-hub tour lengths, so 100
/// makes every task serviceable and 0 makes only the easiest one so.
pub fn euclidean_v1(
    num_branches: usize,
    num_hubs: usize,
    num_tasks: usize,
    alpha: Rational,
    phi_percentile: u32,
    allocation: Allocation,
    seed: u64,
) -> Result<HcpInstance, GenError> {
    if num_branches == 0 || num_hubs == 0 {
        return Err(GenError::BadSpec("need at least one branch and one hub".into()));
    }
    if phi_percentile > 100 {
        return Err(GenError::BadSpec(format!(
            "percentile {phi_percentile} out of range 0..=100"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = num_branches + num_hubs;
    let points: Vec<(i64, i64)> = (0..n)
        .map(|_| (rng.gen_range(0..=50), rng.gen_range(0..=50)))
        .collect();
    let rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    rat((points[i].0 - points[j].0).abs() + (points[i].1 - points[j].1).abs())
                })
                .collect()
        })
        .collect();
    let tasks = random_tasks(&mut rng, num_branches, num_tasks, allocation);

    let metric = crate::model::MetricMatrix::from_rows(rows)?;
    let mut best_lengths: Vec<Rational> = tasks
        .iter()
        .map(|&(b, b2)| {
            (0..num_hubs)
                .map(|h| {
                    metric.get(b, num_branches + h).clone()
                        + metric.get(num_branches + h, b2).clone()
                })
                .min()
                .expect("at least one hub")
        })
        .collect();
    best_lengths.sort();
    let phi = if best_lengths.is_empty() {
        rat(0)
    } else {
        let idx = (phi_percentile as usize * (best_lengths.len() - 1) + 50) / 100;
        best_lengths[idx].clone()
    };

    RawInstance {
        branches: branch_names(num_branches),
        hubs: hub_names(num_hubs),
        opening_cost: random_costs(&mut rng, num_hubs),
        geometry: Geometry::Metric(metric),
        tasks,
        alpha,
        phi,
        variant: Variant::V1,
        allocation,
        capacity: None,
    }
    .build()
    .map_err(GenError::Model)
}

/// Branch-hub and hub-hub edges each kept with the given percent
/// probability; every branch gets at least one hub edge.
pub fn random_graph_v2(
    num_branches: usize,
    num_hubs: usize,
    num_tasks: usize,
    edge_percent: u32,
    alpha: Rational,
    allocation: Allocation,
    seed: u64,
) -> Result<HcpInstance, GenError> {
    if num_branches == 0 || num_hubs == 0 {
        return Err(GenError::BadSpec("need at least one branch and one hub".into()));
    }
    if edge_percent > 100 {
        return Err(GenError::BadSpec(format!(
            "edge percentage {edge_percent} out of range 0..=100"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut branch_hub = Vec::new();
    for b in 0..num_branches {
        let mut any = false;
        for h in 0..num_hubs {
            if rng.gen_range(0..100) < edge_percent {
                branch_hub.push((b, h));
                any = true;
            }
        }
        if !any {
            branch_hub.push((b, rng.gen_range(0..num_hubs)));
        }
    }
    let mut hub_hub = Vec::new();
    for h in 0..num_hubs {
        for h2 in h + 1..num_hubs {
            if rng.gen_range(0..100) < edge_percent {
                hub_hub.push((h, h2));
            }
        }
    }
    let tasks = random_tasks(&mut rng, num_branches, num_tasks, allocation);

    RawInstance {
        branches: branch_names(num_branches),
        hubs: hub_names(num_hubs),
        opening_cost: random_costs(&mut rng, num_hubs),
        geometry: Geometry::Graph(AdjacencyGraph::new(branch_hub, hub_hub)),
        tasks,
        alpha,
        phi: rat(0),
        variant: Variant::V2,
        allocation,
        capacity: None,
    }
    .build()
    .map_err(GenError::Model)
}

/// Random bipartite coverage instance; every branch gets at least one
/// adjacent hub, so the instance is always coverable.
pub fn bipartite_v3(
    num_branches: usize,
    num_hubs: usize,
    edge_percent: u32,
    capacity: Option<usize>,
    seed: u64,
) -> Result<HcpInstance, GenError> {
    if num_branches == 0 || num_hubs == 0 {
        return Err(GenError::BadSpec("need at least one branch and one hub".into()));
    }
    if edge_percent > 100 {
        return Err(GenError::BadSpec(format!(
            "edge percentage {edge_percent} out of range 0..=100"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut branch_hub = Vec::new();
    for b in 0..num_branches {
        let mut any = false;
        for h in 0..num_hubs {
            if rng.gen_range(0..100) < edge_percent {
                branch_hub.push((b, h));
                any = true;
            }
        }
        if !any {
            branch_hub.push((b, rng.gen_range(0..num_hubs)));
        }
    }

    RawInstance {
        branches: branch_names(num_branches),
        hubs: hub_names(num_hubs),
        opening_cost: random_costs(&mut rng, num_hubs),
        geometry: Geometry::Graph(AdjacencyGraph::new(branch_hub, [])),
        tasks: vec![],
        alpha: rat(0),
        phi: rat(0),
        variant: Variant::V3,
        allocation: Allocation::Single,
        capacity,
    }
    .build()
    .map_err(GenError::Model)
}

/// A random partially filled non-attacking placement on an n-by-n board.
pub fn random_queens(n: usize, num_fixed: usize, seed: u64) -> Result<QueensInstance, GenError> {
    if n == 0 {
        return Err(GenError::BadSpec("board size must be positive".into()));
    }
    if num_fixed > n {
        return Err(GenError::BadSpec(format!(
            "cannot fix {num_fixed} queens on {n} rows"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..1000 {
        let mut rows: Vec<usize> = (1..=n).collect();
        for i in (1..rows.len()).rev() {
            rows.swap(i, rng.gen_range(0..=i));
        }
        rows.truncate(num_fixed);
        rows.sort_unstable();
        let mut placed: Vec<(usize, usize)> = Vec::with_capacity(num_fixed);
        for &r in &rows {
            let free: Vec<usize> = (1..=n)
                .filter(|&c| placed.iter().all(|&q| !crate::model::queens_attack(q, (r, c))))
                .collect();
            if free.is_empty() {
                continue 'attempt;
            }
            placed.push((r, free[rng.gen_range(0..free.len())]));
        }
        return QueensInstance::new(n, placed).map_err(GenError::Model);
    }
    Err(GenError::BadSpec(format!(
        "no non-attacking placement of {num_fixed} queens found on a {n}-board"
    )))
}

/// Hub-location encoding of a random partially filled queens board.
pub fn queens_derived(n: usize, num_fixed: usize, seed: u64) -> Result<HcpInstance, GenError> {
    let q = random_queens(n, num_fixed, seed)?;
    let record = queens_to_sa2(&q)?;
    Ok(record.target.as_hcp().expect("hub instance target").clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn families_are_deterministic() {
        let a = euclidean_v1(4, 3, 5, frac(1, 2), 80, Allocation::Multi, 7).unwrap();
        let b = euclidean_v1(4, 3, 5, frac(1, 2), 80, Allocation::Multi, 7).unwrap();
        assert_eq!(a, b);
        let c = random_graph_v2(4, 4, 4, 50, rat(1), Allocation::Single, 7).unwrap();
        let d = random_graph_v2(4, 4, 4, 50, rat(1), Allocation::Single, 7).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn seeds_vary_the_output() {
        let a = bipartite_v3(5, 4, 40, None, 1).unwrap();
        let b = bipartite_v3(5, 4, 40, None, 2).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn single_allocation_instances_cover_every_branch() {
        for seed in 0..20 {
            let inst = random_graph_v2(5, 3, 2, 30, rat(1), Allocation::Single, seed).unwrap();
            let mut seen = vec![false; inst.num_branches()];
            for &(b, b2) in inst.tasks() {
                seen[b] = true;
                seen[b2] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn full_percentile_makes_every_task_serviceable() {
        for seed in 0..20 {
            let inst = euclidean_v1(5, 4, 6, frac(1, 2), 100, Allocation::Multi, seed).unwrap();
            for &(b, b2) in inst.tasks() {
                let ok = (0..inst.num_hubs()).any(|h| {
                    let v = inst.hub_vertex(h);
                    inst.dist(b, v).clone() + inst.dist(v, b2).clone() <= *inst.phi()
                });
                assert!(ok, "seed {seed} task ({b},{b2}) unserviceable");
            }
        }
    }

    #[test]
    fn queens_boards_are_valid_and_convert() {
        for seed in 0..10 {
            let q = random_queens(5, 2, seed).unwrap();
            assert_eq!(q.placed().len(), 2);
            let inst = queens_derived(5, 2, seed).unwrap();
            assert_eq!(inst.num_branches(), 5);
            assert_eq!(inst.num_hubs(), 25);
        }
    }

    #[test]
    fn bad_parameters_are_rejected() {
        assert!(matches!(
            euclidean_v1(0, 1, 0, rat(0), 50, Allocation::Multi, 0),
            Err(GenError::BadSpec(_))
        ));
        assert!(matches!(
            random_graph_v2(2, 2, 1, 101, rat(1), Allocation::Multi, 0),
            Err(GenError::BadSpec(_))
        ));
        assert!(matches!(random_queens(4, 5, 0), Err(GenError::BadSpec(_))));
    }
}
