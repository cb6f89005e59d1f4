use proptest::prelude::*;
use schubert_core::audit::{check_invariants, run_audit};
use schubert_core::chains::{
    greedy_chain, interpolating_chain, leaping_chain, minimal_markings, nested_chain, runs, staircase_chain,
};
use schubert_core::statistics::{orr_index, rajchgot_index};
use schubert_core::{ClimbingChain, Permutation};

fn permutation(max_n: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_n)
        .prop_flat_map(|n| Just((1..=n).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|word| Permutation::new(word).unwrap())
}

proptest! {
    #[test]
    fn constructed_chains_validate(w in permutation(9)) {
        for c in [greedy_chain(&w), nested_chain(&w), leaping_chain(&w), staircase_chain(&w)] {
            prop_assert!(ClimbingChain::new(w.clone(), c.links().to_vec()).is_ok());
        }
    }

    #[test]
    fn constructed_chains_pass_the_audit(w in permutation(8)) {
        for c in [greedy_chain(&w), nested_chain(&w), leaping_chain(&w), staircase_chain(&w)] {
            let violations = check_invariants(&run_audit(&c));
            prop_assert!(violations.is_empty(), "{}: {:?}", c, violations);
        }
    }

    #[test]
    fn interpolating_chains_run_from_greedy_to_nested(w in permutation(8)) {
        let m = interpolating_chain(&w, 0).unwrap().len();
        prop_assert_eq!(interpolating_chain(&w, 0).unwrap(), greedy_chain(&w));
        prop_assert_eq!(interpolating_chain(&w, m).unwrap(), nested_chain(&w));
    }

    #[test]
    fn runs_partition_the_chain(w in permutation(8)) {
        let c = staircase_chain(&w);
        let rs = runs(&c);
        let starts: Vec<usize> = rs.iter().map(|r| r.start).collect();
        prop_assert_eq!(starts, minimal_markings(&c));
        let covered: usize = rs.iter().map(|r| r.len()).sum();
        prop_assert_eq!(covered, c.len());
    }

    #[test]
    fn degree_bounds(w in permutation(9)) {
        prop_assert!(rajchgot_index(&w) >= w.length() as u64);
        prop_assert_eq!(minimal_markings(&nested_chain(&w)).len() as u64, orr_index(&w));
    }
}
