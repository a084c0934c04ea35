use itertools::Itertools;
use proptest::prelude::*;

use sasplus::generate::{random_instance, rng, InstanceShape};
use sasplus::oracle::{bfs_bounded_plan, bfs_bounded_plan_with, BfsConfig, OracleError};
use sasplus::sas::validate_plan;
use sasplus::{Plan, SasInstance};

/// Length of the shortest plan among all sequences up to `k`, by enumeration.
fn shortest_by_enumeration(inst: &SasInstance, k: usize) -> Option<usize> {
    let count = inst.actions().len();
    (0..=k).find(|&len| {
        (0..len)
            .map(|_| 0..count)
            .multi_cartesian_product()
            .chain(std::iter::once(Vec::new()).filter(|_| len == 0))
            .any(|seq| validate_plan(inst, &Plan::new(seq)).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bfs_matches_enumeration(seed in any::<u64>(), k in 0usize..4) {
        let mut r = rng(seed);
        let inst = random_instance(&mut r, &InstanceShape::new(3, 2, 4));
        let res = bfs_bounded_plan(&inst, k).unwrap();
        prop_assert_eq!(res.plan.as_ref().map(Plan::len), shortest_by_enumeration(&inst, k));
        if let Some(plan) = &res.plan {
            prop_assert!(validate_plan(&inst, plan).unwrap());
        }
    }

    #[test]
    fn bfs_is_monotone_in_k(seed in any::<u64>()) {
        let mut r = rng(seed);
        let inst = random_instance(&mut r, &InstanceShape::new(4, 2, 5));
        let found: Vec<bool> = (0..6).map(|k| bfs_bounded_plan(&inst, k).unwrap().plan.is_some()).collect();
        prop_assert!(found.windows(2).all(|w| !w[0] || w[1]));
    }
}

#[test]
fn budget_never_gives_an_answer() {
    let mut r = rng(4);
    let inst = random_instance(&mut r, &InstanceShape::new(4, 3, 6));
    let tight = BfsConfig { max_states: Some(1) };
    match bfs_bounded_plan_with(&inst, 4, &tight) {
        Ok(res) => assert!(res.explored <= 1),
        Err(e) => assert_eq!(e, OracleError::StateBudget { limit: 1 }),
    }
}
