//! Property tests: serialization is a bijection on canonical forms.

use hubcover::exact::{solve_exact, Limits};
use hubcover::format::{
    parse_instance, parse_solution, serialize_instance, serialize_solution,
};
use hubcover::generate::{bipartite_v3, euclidean_v1, queens_derived, random_graph_v2};
use hubcover::model::{Allocation, HcpInstance};
use hubcover::rational::{format_rational, frac, parse_rational};
use proptest::prelude::*;

fn arb_instance() -> impl Strategy<Value = HcpInstance> {
    (0u8..4, any::<u64>(), 1usize..5, 1usize..5, 0usize..5, 0u32..=100).prop_map(
        |(family, seed, nb, nh, tasks, pct)| match family {
            0 => euclidean_v1(nb, nh, tasks, frac(1, 2), pct, Allocation::Multi, seed).unwrap(),
            1 => random_graph_v2(nb, nh, tasks, pct, frac(1, 1), Allocation::Single, seed)
                .unwrap(),
            2 => bipartite_v3(nb, nh, pct, Some(1 + seed as usize % nh), seed).unwrap(),
            _ => queens_derived(1 + nb % 4, seed as usize % (1 + nb % 4), seed).unwrap(),
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn instance_parse_inverts_serialize(instance in arb_instance()) {
        let text = serialize_instance(&instance);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &instance);
        // canonical form is a fixed point
        prop_assert_eq!(serialize_instance(&back), text);
    }

    #[test]
    fn solution_parse_inverts_serialize(instance in arb_instance()) {
        if let Some(sol) = solve_exact(&instance, &Limits::default()).unwrap().solution() {
            let text = serialize_solution(&instance, sol);
            let back = parse_solution(&instance, &text).unwrap();
            prop_assert_eq!(&back, sol);
            prop_assert_eq!(serialize_solution(&instance, &back), text);
        }
    }

    #[test]
    fn rational_format_round_trips(n in -1000i64..1000, d in 1i64..1000) {
        let r = frac(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&r)), Some(r));
    }
}
