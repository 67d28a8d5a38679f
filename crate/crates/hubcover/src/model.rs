//! Problem and solution data types shared by every other module.
//!
//! Instances are validated on construction and immutable afterwards, so
//! they can be shared freely between parallel workers.

use crate::rational::{format_rational, Rational};
use num::Zero;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Which threshold family an instance uses.
///
/// * `V1` bounds the length of a whole tour on a metric.
/// * `V2` bounds each connection, modeled as edge existence on an
///   unweighted graph with hub-hub edges.
/// * `V3` bounds branch-to-hub links only, on an unweighted bipartite
///   graph, with no delivery tasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    V1,
    V2,
    V3,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::V1 => "v1",
            Variant::V2 => "v2",
            Variant::V3 => "v3",
        }
    }
}

/// Single allocation fixes one hub per branch; multi allocation lets every
/// tour choose its hubs independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Allocation {
    Single,
    Multi,
}

impl Allocation {
    pub fn as_str(self) -> &'static str {
        match self {
            Allocation::Single => "single",
            Allocation::Multi => "multi",
        }
    }
}

/// Symmetric rational distance matrix over all vertices (branches first,
/// then hubs), with zero diagonal and exact triangle inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricMatrix {
    n: usize,
    d: Vec<Rational>,
}

impl MetricMatrix {
    /// Builds a matrix from rows without validating metric properties;
    /// validation happens in `RawInstance::build`.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, ModelError> {
        let n = rows.len();
        for row in &rows {
            if row.len() != n {
                return Err(ModelError::NonMetric(format!(
                    "matrix is not square: {} rows, row of length {}",
                    n,
                    row.len()
                )));
            }
        }
        Ok(MetricMatrix {
            n,
            d: rows.into_iter().flatten().collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.d[i * self.n + j]
    }

    fn check_metric(&self) -> Result<(), ModelError> {
        for i in 0..self.n {
            if !self.get(i, i).is_zero() {
                return Err(ModelError::NonMetric(format!("d({i},{i}) is not zero")));
            }
            for j in 0..self.n {
                if self.get(i, j) < &Rational::zero() {
                    return Err(ModelError::NonMetric(format!("d({i},{j}) is negative")));
                }
                if self.get(i, j) != self.get(j, i) {
                    return Err(ModelError::NonMetric(format!(
                        "d({i},{j}) differs from d({j},{i})"
                    )));
                }
            }
        }
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..self.n {
                    let via = self.get(i, k).clone() + self.get(k, j);
                    if self.get(i, j) > &via {
                        return Err(ModelError::NonMetric(format!(
                            "triangle inequality fails: d({i},{j}) > d({i},{k}) + d({k},{j})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Unweighted edges for variants 2 and 3. Branch-hub pairs are stored as
/// `(branch, hub)`, hub-hub pairs as `(min, max)` hub indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AdjacencyGraph {
    branch_hub: BTreeSet<(usize, usize)>,
    hub_hub: BTreeSet<(usize, usize)>,
}

impl AdjacencyGraph {
    pub fn new(
        branch_hub: impl IntoIterator<Item = (usize, usize)>,
        hub_hub: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        AdjacencyGraph {
            branch_hub: branch_hub.into_iter().collect(),
            hub_hub: hub_hub
                .into_iter()
                .map(|(a, b)| (a.min(b), a.max(b)))
                .collect(),
        }
    }

    pub fn has_branch_hub(&self, b: usize, h: usize) -> bool {
        self.branch_hub.contains(&(b, h))
    }

    pub fn has_hub_hub(&self, h: usize, h2: usize) -> bool {
        h == h2 || self.hub_hub.contains(&(h.min(h2), h.max(h2)))
    }

    pub fn branch_hub_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.branch_hub.iter().copied()
    }

    pub fn hub_hub_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.hub_hub.iter().copied()
    }

    /// Hubs adjacent to branch `b`, in index order.
    pub fn hubs_of_branch<'a>(&'a self, b: usize) -> impl Iterator<Item = usize> + 'a {
        self.branch_hub
            .range((b, 0)..(b + 1, 0))
            .map(|&(_, h)| h)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Geometry {
    Metric(MetricMatrix),
    Graph(AdjacencyGraph),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("not a metric: {0}")]
    NonMetric(String),
    #[error("opening cost of hub {0} is not positive")]
    NonPositiveCost(String),
    #[error("geometry does not match variant: {0}")]
    GeometryVariantMismatch(String),
    #[error("single allocation requires every branch in a task; branch {0} is in none")]
    UncoveredBranchSa(String),
    #[error("capacity {0} is outside 1..={1}")]
    BadCapacity(usize, usize),
    #[error("duplicate vertex name {0}")]
    DuplicateName(String),
    #[error("invalid vertex name {0:?}")]
    BadName(String),
    #[error("index out of range: {0}")]
    BadIndex(String),
    #[error("alpha must lie in [0,1]")]
    BadAlpha,
    #[error("phi must be nonnegative")]
    BadPhi,
    #[error("set {0} covers no element")]
    EmptySet(String),
    #[error("invalid board: {0}")]
    InvalidBoard(String),
}

/// Unvalidated instance fields; `build` checks every structural invariant
/// and produces an immutable `HcpInstance`.
#[derive(Debug, Clone)]
pub struct RawInstance {
    pub branches: Vec<String>,
    pub hubs: Vec<String>,
    pub opening_cost: Vec<Rational>,
    pub geometry: Geometry,
    pub tasks: Vec<(usize, usize)>,
    pub alpha: Rational,
    pub phi: Rational,
    pub variant: Variant,
    pub allocation: Allocation,
    pub capacity: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HcpInstance {
    branches: Vec<String>,
    hubs: Vec<String>,
    opening_cost: Vec<Rational>,
    geometry: Geometry,
    tasks: Vec<(usize, usize)>,
    alpha: Rational,
    phi: Rational,
    variant: Variant,
    allocation: Allocation,
    capacity: Option<usize>,
}

fn check_name(name: &str) -> Result<(), ModelError> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace()) || name.contains('#') {
        return Err(ModelError::BadName(name.to_string()));
    }
    Ok(())
}

impl RawInstance {
    pub fn build(self) -> Result<HcpInstance, ModelError> {
        let nb = self.branches.len();
        let nh = self.hubs.len();

        let mut seen = BTreeSet::new();
        for name in self.branches.iter().chain(self.hubs.iter()) {
            check_name(name)?;
            if !seen.insert(name.as_str()) {
                return Err(ModelError::DuplicateName(name.clone()));
            }
        }

        if self.opening_cost.len() != nh {
            return Err(ModelError::BadIndex(format!(
                "{} opening costs for {} hubs",
                self.opening_cost.len(),
                nh
            )));
        }
        for (h, c) in self.opening_cost.iter().enumerate() {
            if c <= &Rational::zero() {
                return Err(ModelError::NonPositiveCost(self.hubs[h].clone()));
            }
        }

        if self.alpha < Rational::zero() || self.alpha > crate::rational::rat(1) {
            return Err(ModelError::BadAlpha);
        }
        if self.phi < Rational::zero() {
            return Err(ModelError::BadPhi);
        }

        match (&self.variant, &self.geometry) {
            (Variant::V1, Geometry::Metric(m)) => {
                if m.size() != nb + nh {
                    return Err(ModelError::NonMetric(format!(
                        "matrix covers {} vertices, instance has {}",
                        m.size(),
                        nb + nh
                    )));
                }
                m.check_metric()?;
            }
            (Variant::V1, Geometry::Graph(_)) => {
                return Err(ModelError::GeometryVariantMismatch(
                    "variant 1 requires a metric matrix".into(),
                ))
            }
            (Variant::V2 | Variant::V3, Geometry::Metric(_)) => {
                return Err(ModelError::GeometryVariantMismatch(
                    "variants 2 and 3 require an adjacency graph".into(),
                ))
            }
            (Variant::V2, Geometry::Graph(g)) => check_graph_indices(g, nb, nh)?,
            (Variant::V3, Geometry::Graph(g)) => {
                check_graph_indices(g, nb, nh)?;
                if let Some((a, b)) = g.hub_hub_edges().next() {
                    return Err(ModelError::GeometryVariantMismatch(format!(
                        "variant 3 graph is bipartite but has hub-hub edge {}-{}",
                        self.hubs[a], self.hubs[b]
                    )));
                }
            }
        }

        for &(b, b2) in &self.tasks {
            if b >= nb || b2 >= nb {
                return Err(ModelError::BadIndex(format!("task ({b},{b2})")));
            }
        }
        if self.variant == Variant::V3 && !self.tasks.is_empty() {
            return Err(ModelError::GeometryVariantMismatch(
                "variant 3 instances carry no tasks".into(),
            ));
        }

        let mut tasks = self.tasks;
        tasks.sort_unstable();
        tasks.dedup();

        if self.allocation == Allocation::Single && self.variant != Variant::V3 {
            let mut in_task = vec![false; nb];
            for &(b, b2) in &tasks {
                in_task[b] = true;
                in_task[b2] = true;
            }
            if let Some(b) = in_task.iter().position(|&x| !x) {
                return Err(ModelError::UncoveredBranchSa(self.branches[b].clone()));
            }
        }

        if let Some(p) = self.capacity {
            if p < 1 || p > nh {
                return Err(ModelError::BadCapacity(p, nh));
            }
        }

        Ok(HcpInstance {
            branches: self.branches,
            hubs: self.hubs,
            opening_cost: self.opening_cost,
            geometry: self.geometry,
            tasks,
            alpha: self.alpha,
            phi: self.phi,
            variant: self.variant,
            allocation: self.allocation,
            capacity: self.capacity,
        })
    }
}

fn check_graph_indices(g: &AdjacencyGraph, nb: usize, nh: usize) -> Result<(), ModelError> {
    for (b, h) in g.branch_hub_edges() {
        if b >= nb || h >= nh {
            return Err(ModelError::BadIndex(format!("branch-hub edge ({b},{h})")));
        }
    }
    for (a, b) in g.hub_hub_edges() {
        if a >= nh || b >= nh || a == b {
            return Err(ModelError::BadIndex(format!("hub-hub edge ({a},{b})")));
        }
    }
    Ok(())
}

impl HcpInstance {
    pub fn branches(&self) -> &[String] {
        &self.branches
    }

    pub fn hubs(&self) -> &[String] {
        &self.hubs
    }

    pub fn num_branches(&self) -> usize {
        self.branches.len()
    }

    pub fn num_hubs(&self) -> usize {
        self.hubs.len()
    }

    pub fn opening_cost(&self, h: usize) -> &Rational {
        &self.opening_cost[h]
    }

    pub fn opening_costs(&self) -> &[Rational] {
        &self.opening_cost
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn metric(&self) -> Option<&MetricMatrix> {
        match &self.geometry {
            Geometry::Metric(m) => Some(m),
            Geometry::Graph(_) => None,
        }
    }

    pub fn graph(&self) -> Option<&AdjacencyGraph> {
        match &self.geometry {
            Geometry::Graph(g) => Some(g),
            Geometry::Metric(_) => None,
        }
    }

    pub fn tasks(&self) -> &[(usize, usize)] {
        &self.tasks
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn phi(&self) -> &Rational {
        &self.phi
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn allocation(&self) -> Allocation {
        self.allocation
    }

    pub fn capacity(&self) -> Option<usize> {
        self.capacity
    }

    /// Vertex index of branch `b` in the metric matrix.
    pub fn branch_vertex(&self, b: usize) -> usize {
        b
    }

    /// Vertex index of hub `h` in the metric matrix.
    pub fn hub_vertex(&self, h: usize) -> usize {
        self.branches.len() + h
    }

    /// Distance between two metric vertices; only valid for variant 1.
    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        match &self.geometry {
            Geometry::Metric(m) => m.get(i, j),
            Geometry::Graph(_) => panic!("dist() on a graph instance"),
        }
    }

    /// True when alpha is outside the two values the base model declares.
    /// Informational only; such instances are valid.
    pub fn nonstandard_alpha(&self) -> bool {
        !self.alpha.is_zero() && self.alpha != crate::rational::rat(1)
    }

    /// Sum of opening costs over a hub set.
    pub fn hubset_cost<'a>(&self, hubs: impl IntoIterator<Item = &'a usize>) -> Rational {
        let mut total = Rational::zero();
        for &h in hubs {
            total += &self.opening_cost[h];
        }
        total
    }

    pub fn branch_index(&self, name: &str) -> Option<usize> {
        self.branches.iter().position(|n| n == name)
    }

    pub fn hub_index(&self, name: &str) -> Option<usize> {
        self.hubs.iter().position(|n| n == name)
    }
}

/// One tour `b -> h -> h2 -> b2`; `h == h2` encodes a single-hub tour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Tour {
    pub b: usize,
    pub h: usize,
    pub h2: usize,
    pub b2: usize,
}

impl Tour {
    pub fn new(b: usize, h: usize, h2: usize, b2: usize) -> Self {
        Tour { b, h, h2, b2 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// One tour per task (multi allocation).
    Multi(BTreeMap<(usize, usize), Tour>),
    /// One hub per branch (single allocation, variants 1 and 2).
    Single(BTreeMap<usize, usize>),
    /// One adjacent hub per branch (variant 3).
    Cover(BTreeMap<usize, usize>),
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::Multi(_) => "multi",
            Witness::Single(_) => "single",
            Witness::Cover(_) => "cover",
        }
    }

    /// Every hub index the witness references.
    pub fn used_hubs(&self) -> BTreeSet<usize> {
        match self {
            Witness::Multi(m) => m.values().flat_map(|t| [t.h, t.h2]).collect(),
            Witness::Single(m) | Witness::Cover(m) => m.values().copied().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    open_hubs: BTreeSet<usize>,
    witness: Witness,
    cost: Rational,
}

impl Solution {
    /// Cost is always recomputed from the open hub set; it is never taken
    /// from external input.
    pub fn new(instance: &HcpInstance, open_hubs: BTreeSet<usize>, witness: Witness) -> Self {
        let cost = instance.hubset_cost(open_hubs.iter());
        Solution {
            open_hubs,
            witness,
            cost,
        }
    }

    pub fn open_hubs(&self) -> &BTreeSet<usize> {
        &self.open_hubs
    }

    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    pub fn cost(&self) -> &Rational {
        &self.cost
    }
}

/// Weighted set cover instance: the Lemma-level counterpart of variant 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverInstance {
    elements: Vec<String>,
    sets: Vec<(String, Rational, BTreeSet<usize>)>,
    uncoverable: Vec<usize>,
}

impl SetCoverInstance {
    pub fn new(
        elements: Vec<String>,
        sets: Vec<(String, Rational, BTreeSet<usize>)>,
    ) -> Result<Self, ModelError> {
        let mut seen = BTreeSet::new();
        for name in elements.iter().chain(sets.iter().map(|(n, _, _)| n)) {
            check_name(name)?;
            if !seen.insert(name.as_str()) {
                return Err(ModelError::DuplicateName(name.clone()));
            }
        }
        for (name, w, members) in &sets {
            if w <= &Rational::zero() {
                return Err(ModelError::NonPositiveCost(name.clone()));
            }
            if members.is_empty() {
                return Err(ModelError::EmptySet(name.clone()));
            }
            if let Some(&e) = members.iter().find(|&&e| e >= elements.len()) {
                return Err(ModelError::BadIndex(format!("set {name} member {e}")));
            }
        }
        let mut covered = vec![false; elements.len()];
        for (_, _, members) in &sets {
            for &e in members {
                covered[e] = true;
            }
        }
        let uncoverable = covered
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(e, _)| e)
            .collect();
        Ok(SetCoverInstance {
            elements,
            sets,
            uncoverable,
        })
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn sets(&self) -> &[(String, Rational, BTreeSet<usize>)] {
        &self.sets
    }

    /// Elements no set covers; nonempty marks the instance infeasible by
    /// construction.
    pub fn uncoverable(&self) -> &[usize] {
        &self.uncoverable
    }

    pub fn set_index(&self, name: &str) -> Option<usize> {
        self.sets.iter().position(|(n, _, _)| n == name)
    }
}

/// A partially filled n-queens board: the source problem of the variant-2
/// hardness construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueensInstance {
    n: usize,
    placed: Vec<(usize, usize)>,
}

impl QueensInstance {
    /// `placed` holds 1-based `(row, column)` pairs. Rejects out-of-range
    /// coordinates, two queens in one row, and attacking pairs.
    pub fn new(n: usize, mut placed: Vec<(usize, usize)>) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::InvalidBoard("board size must be positive".into()));
        }
        placed.sort_unstable();
        for &(r, c) in &placed {
            if r < 1 || r > n || c < 1 || c > n {
                return Err(ModelError::InvalidBoard(format!(
                    "queen at ({r},{c}) is off the {n}x{n} board"
                )));
            }
        }
        for i in 0..placed.len() {
            for j in i + 1..placed.len() {
                let (r1, c1) = placed[i];
                let (r2, c2) = placed[j];
                if r1 == r2 {
                    return Err(ModelError::InvalidBoard(format!("two queens in row {r1}")));
                }
                if queens_attack((r1, c1), (r2, c2)) {
                    return Err(ModelError::InvalidBoard(format!(
                        "queens at ({r1},{c1}) and ({r2},{c2}) attack each other"
                    )));
                }
            }
        }
        Ok(QueensInstance { n, placed })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn placed(&self) -> &[(usize, usize)] {
        &self.placed
    }

    /// The fixed column of a row, if a queen is already placed there.
    pub fn fixed_column(&self, row: usize) -> Option<usize> {
        self.placed
            .iter()
            .find(|&&(r, _)| r == row)
            .map(|&(_, c)| c)
    }
}

/// Standard non-attack test: same row, same column, or same diagonal.
pub fn queens_attack(a: (usize, usize), b: (usize, usize)) -> bool {
    let dr = a.0.abs_diff(b.0);
    let dc = a.1.abs_diff(b.1);
    dr == 0 || dc == 0 || dr == dc
}

impl std::fmt::Display for Solution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "cost {} with {} open hubs",
            format_rational(&self.cost),
            self.open_hubs.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, rat};

    fn zero_metric(n: usize) -> MetricMatrix {
        MetricMatrix::from_rows(vec![vec![rat(0); n]; n]).unwrap()
    }

    #[test]
    fn degenerate_zero_metric_instance_is_valid() {
        let inst = RawInstance {
            branches: vec!["a".into(), "b".into()],
            hubs: vec!["h".into()],
            opening_cost: vec![rat(1)],
            geometry: Geometry::Metric(zero_metric(3)),
            tasks: vec![(0, 1)],
            alpha: rat(0),
            phi: rat(0),
            variant: Variant::V1,
            allocation: Allocation::Multi,
            capacity: None,
        }
        .build()
        .unwrap();
        assert_eq!(inst.num_branches(), 2);
        assert_eq!(inst.num_hubs(), 1);
    }

    #[test]
    fn triangle_violation_is_rejected() {
        // d(a,b)=1, d(b,c)=1, d(a,c)=3
        let rows = vec![
            vec![rat(0), rat(1), rat(3)],
            vec![rat(1), rat(0), rat(1)],
            vec![rat(3), rat(1), rat(0)],
        ];
        let err = RawInstance {
            branches: vec!["a".into(), "b".into()],
            hubs: vec!["c".into()],
            opening_cost: vec![rat(1)],
            geometry: Geometry::Metric(MetricMatrix::from_rows(rows).unwrap()),
            tasks: vec![(0, 1)],
            alpha: rat(0),
            phi: rat(5),
            variant: Variant::V1,
            allocation: Allocation::Multi,
            capacity: None,
        }
        .build()
        .unwrap_err();
        assert!(matches!(err, ModelError::NonMetric(_)));
    }

    #[test]
    fn v3_hub_hub_edge_is_rejected() {
        let err = RawInstance {
            branches: vec!["b1".into()],
            hubs: vec!["h1".into(), "h2".into()],
            opening_cost: vec![rat(1), rat(1)],
            geometry: Geometry::Graph(AdjacencyGraph::new([(0, 0)], [(0, 1)])),
            tasks: vec![],
            alpha: rat(0),
            phi: rat(0),
            variant: Variant::V3,
            allocation: Allocation::Single,
            capacity: None,
        }
        .build()
        .unwrap_err();
        assert!(matches!(err, ModelError::GeometryVariantMismatch(_)));
    }

    #[test]
    fn single_allocation_requires_task_coverage() {
        let err = RawInstance {
            branches: vec!["a".into(), "b".into()],
            hubs: vec!["h".into()],
            opening_cost: vec![rat(1)],
            geometry: Geometry::Graph(AdjacencyGraph::new([(0, 0), (1, 0)], [])),
            tasks: vec![(0, 0)],
            alpha: rat(1),
            phi: rat(0),
            variant: Variant::V2,
            allocation: Allocation::Single,
            capacity: None,
        }
        .build()
        .unwrap_err();
        assert!(matches!(err, ModelError::UncoveredBranchSa(b) if b == "b"));
    }

    #[test]
    fn nonpositive_cost_and_bad_capacity() {
        let base = RawInstance {
            branches: vec!["a".into()],
            hubs: vec!["h".into()],
            opening_cost: vec![rat(0)],
            geometry: Geometry::Graph(AdjacencyGraph::new([(0, 0)], [])),
            tasks: vec![],
            alpha: rat(0),
            phi: rat(0),
            variant: Variant::V3,
            allocation: Allocation::Single,
            capacity: None,
        };
        assert!(matches!(
            base.clone().build().unwrap_err(),
            ModelError::NonPositiveCost(_)
        ));
        let mut capped = base;
        capped.opening_cost = vec![frac(1, 2)];
        capped.capacity = Some(2);
        assert!(matches!(
            capped.build().unwrap_err(),
            ModelError::BadCapacity(2, 1)
        ));
    }

    #[test]
    fn queens_instance_validation() {
        assert!(QueensInstance::new(3, vec![(3, 3)]).is_ok());
        assert!(QueensInstance::new(3, vec![(1, 1), (2, 2)]).is_err()); // diagonal
        assert!(QueensInstance::new(3, vec![(1, 1), (1, 3)]).is_err()); // same row
        assert!(QueensInstance::new(3, vec![(1, 4)]).is_err()); // off board
        assert!(QueensInstance::new(0, vec![]).is_err());
    }

    #[test]
    fn set_cover_flags_uncoverable_elements() {
        let sc = SetCoverInstance::new(
            vec!["e1".into(), "e2".into()],
            vec![("s1".into(), rat(1), BTreeSet::from([0]))],
        )
        .unwrap();
        assert_eq!(sc.uncoverable(), &[1]);
        assert!(SetCoverInstance::new(
            vec!["e1".into()],
            vec![("s1".into(), rat(1), BTreeSet::new())]
        )
        .is_err());
    }

    #[test]
    fn solution_cost_recomputes_from_open_hubs() {
        let inst = RawInstance {
            branches: vec!["a".into()],
            hubs: vec!["h1".into(), "h2".into()],
            opening_cost: vec![frac(3, 2), rat(2)],
            geometry: Geometry::Graph(AdjacencyGraph::new([(0, 0), (0, 1)], [])),
            tasks: vec![],
            alpha: rat(0),
            phi: rat(0),
            variant: Variant::V3,
            allocation: Allocation::Single,
            capacity: None,
        }
        .build()
        .unwrap();
        let sol = Solution::new(
            &inst,
            BTreeSet::from([0, 1]),
            Witness::Cover(BTreeMap::from([(0, 0)])),
        );
        assert_eq!(sol.cost(), &frac(7, 2));
    }
}
