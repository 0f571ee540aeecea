use proptest::prelude::*;

use repzeta::groupcore::{
    character_table, group_from_permutations, normal_subgroups, verify_clifford_sum, zeta_of_group, GroupSpec,
};
use repzeta::rational::qi;

fn permutation(n: usize) -> impl Strategy<Value = Vec<u32>> {
    Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle()
}

fn perm_group() -> impl Strategy<Value = Vec<Vec<u32>>> {
    (2usize..=5).prop_flat_map(|n| proptest::collection::vec(permutation(n), 1..=2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn squared_degrees_sum_to_order(gens in perm_group()) {
        let g = group_from_permutations(&gens, 1000).unwrap();
        let zeta = zeta_of_group(&g).unwrap();
        prop_assert_eq!(zeta.eval_exact(-2), qi(g.order() as i64));
        let table = character_table(&g).unwrap();
        prop_assert_eq!(table.len(), zeta.eval_exact(0).to_integer().try_into().unwrap_or(0usize));
        table.verify().unwrap();
    }

    #[test]
    fn clifford_sum_over_every_normal_subgroup(gens in perm_group()) {
        let g = group_from_permutations(&gens, 1000).unwrap();
        for k in normal_subgroups(&g) {
            let check = verify_clifford_sum(&g, &k).unwrap();
            prop_assert!(check.holds, "|K| = {}", k.order());
        }
    }
}

#[test]
fn spec_forms_agree() {
    let named = GroupSpec::from_json(r#"{"named": "S3"}"#).unwrap().build(100).unwrap();
    let perms = GroupSpec::from_json(r#"{"permutations": [[1, 0, 2], [1, 2, 0]]}"#).unwrap().build(100).unwrap();
    assert_eq!(zeta_of_group(&named).unwrap(), zeta_of_group(&perms).unwrap());
}
