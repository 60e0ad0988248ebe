//! Property tests: library answers on random small inputs agree with the
//! reference implementations in `oracles`.

mod oracles;

use proptest::prelude::*;

use cspforge::harness::case_rng;
use cspforge::harness::corpus::{random_digraph, random_graph, random_label_cover};
use cspforge::labelcover::{arc_consistent_families, k_consistency_test};
use cspforge::structures::catalog::clique;
use cspforge::structures::{find_homomorphism, find_isomorphism, power};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homomorphism_search_matches_brute_force(seed in any::<u64>(), n in 1usize..6, m in 1usize..4) {
        let mut rng = case_rng(seed, 0);
        let x = random_digraph(&mut rng, n, 0.35, 0.1);
        let a = random_digraph(&mut rng, m, 0.5, 0.2);
        match find_homomorphism(&x, &a).unwrap() {
            Some(h) => prop_assert!(oracles::is_valid_hom(&h.maps, &x, &a)),
            None => prop_assert!(!oracles::hom_exists(&x, &a)),
        }
    }

    #[test]
    fn isomorphism_certificates_are_valid(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = case_rng(seed, 1);
        let a = random_digraph(&mut rng, n, 0.4, 0.1);
        let b = random_digraph(&mut rng, n, 0.4, 0.1);
        if let Some(h) = find_isomorphism(&a, &b).unwrap() {
            prop_assert!(oracles::is_valid_iso(&h.maps, &a, &b));
        }
        let self_iso = find_isomorphism(&a, &a).unwrap();
        prop_assert!(self_iso.is_some_and(|h| oracles::is_valid_iso(&h.maps, &a, &a)));
    }

    #[test]
    fn two_colourability_is_the_absence_of_odd_cycles(seed in any::<u64>(), n in 1usize..8) {
        let g = random_graph(&mut case_rng(seed, 2), n, 0.35);
        prop_assert_eq!(find_homomorphism(&g, &clique(2)).unwrap().is_some(), !oracles::has_odd_cycle(&g));
    }

    #[test]
    fn consistency_test_matches_naive_fixpoint(seed in any::<u64>(), n in 1usize..6, k in 1usize..3) {
        let x = random_graph(&mut case_rng(seed, 3), n, 0.45);
        let a = clique(2);
        prop_assert_eq!(k_consistency_test(&a, k, &x).unwrap(), oracles::k_consistency(&a, &x, k));
    }

    #[test]
    fn arc_consistency_matches_naive_pruning(seed in any::<u64>()) {
        let s = random_label_cover(&mut case_rng(seed, 4), 4, 3);
        prop_assert_eq!(arc_consistent_families(&s), oracles::arc_consistent_labels(&s));
    }

    #[test]
    fn projections_of_a_square_are_homomorphisms(seed in any::<u64>(), n in 1usize..4) {
        let a = random_digraph(&mut case_rng(seed, 5), n, 0.5, 0.2);
        let sq = power(&a, 2);
        let h = find_homomorphism(&sq, &a).unwrap();
        prop_assert!(h.is_some_and(|h| oracles::is_valid_hom(&h.maps, &sq, &a)));
    }
}
