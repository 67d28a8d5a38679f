//! Shared golden instances for unit tests.

use crate::model::{AdjacencyGraph, Allocation, Geometry, HcpInstance, RawInstance, Variant};
use crate::rational::rat;

/// The two-branch, three-hub variant-2 example graph: edges B1-H1, B1-H2,
/// B1-H3, B2-H1, B2-H2, H2-H3, one task (B1, B2).
pub(crate) fn v2_example(allocation: Allocation) -> HcpInstance {
    RawInstance {
        branches: vec!["B1".into(), "B2".into()],
        hubs: vec!["H1".into(), "H2".into(), "H3".into()],
        opening_cost: vec![rat(1), rat(1), rat(1)],
        geometry: Geometry::Graph(AdjacencyGraph::new(
            [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1)],
            [(1, 2)],
        )),
        tasks: vec![(0, 1)],
        alpha: rat(1),
        phi: rat(0),
        variant: Variant::V2,
        allocation,
        capacity: None,
    }
    .build()
    .unwrap()
}

/// The four-branch, three-hub bipartite variant-3 chain: H1-{B1,B2},
/// H2-{B2,B3}, H3-{B3,B4}. Minimum cover size is 2.
pub(crate) fn sample_v3() -> HcpInstance {
    RawInstance {
        branches: vec!["B1".into(), "B2".into(), "B3".into(), "B4".into()],
        hubs: vec!["H1".into(), "H2".into(), "H3".into()],
        opening_cost: vec![rat(1), rat(1), rat(1)],
        geometry: Geometry::Graph(AdjacencyGraph::new(
            [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (3, 2)],
            [],
        )),
        tasks: vec![],
        alpha: rat(0),
        phi: rat(0),
        variant: Variant::V3,
        allocation: Allocation::Single,
        capacity: None,
    }
    .build()
    .unwrap()
}
