use memcompute::dcram::dcram_ssp;
use memcompute::oracles::{brute_force_count, brute_force_spectrum, dp_decision, ReachableSums};
use memcompute::overhead::{compose_states, encode_element, overhead_census, series_readout, SeriesChain};
use memcompute::spectral::{eval_g, full_spectrum, goertzel_counts, recover_subset, GridSpec};
use memcompute::tm::{simulate_tm_direct, Shift, TmSpec};
use memcompute::umm::encode_utm;
use memcompute::IntegerSet;
use proptest::prelude::*;
use proptest::sample::subsequence;

fn sized_set(min_n: usize, max_n: usize, max_abs: i64) -> impl Strategy<Value = IntegerSet> {
    prop::collection::btree_set((-max_abs..=max_abs).prop_filter("nonzero", |a| *a != 0), min_n..=max_n)
        .prop_map(|s| s.into_iter().collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| IntegerSet::new(v).unwrap())
}

fn small_set(max_n: usize, max_abs: i64) -> impl Strategy<Value = IntegerSet> {
    sized_set(1, max_n, max_abs)
}

fn set_and_permutation(max_n: usize, max_abs: i64) -> impl Strategy<Value = (IntegerSet, Vec<i64>)> {
    small_set(max_n, max_abs).prop_flat_map(|g| {
        let elements = g.elements().to_vec();
        (Just(g), Just(elements).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fft_spectrum_matches_enumeration(g in small_set(10, 30)) {
        let spectrum = full_spectrum(&g).unwrap();
        let oracle = brute_force_spectrum(&g).unwrap();
        prop_assert!(spectrum.iter().eq(oracle.iter()));
        prop_assert_eq!(spectrum.total(), (1u128 << g.len()) - 1);
    }

    #[test]
    fn streaming_counts_match_enumeration(g in small_set(9, 40), targets in prop::collection::vec(-200i64..=200, 1..12)) {
        let counts = goertzel_counts(&g, &targets).unwrap();
        for (&s, &c) in targets.iter().zip(&counts) {
            prop_assert_eq!(c, brute_force_count(&g, s).unwrap());
            prop_assert_eq!(c > 0, dp_decision(&g, s).unwrap());
        }
    }

    #[test]
    fn samples_are_hermitian(g in small_set(8, 25)) {
        let n = GridSpec::for_set(&g).samples;
        for k in 1..n {
            let a = eval_g(&g, k, n).unwrap();
            let b = eval_g(&g, n - k, n).unwrap();
            prop_assert!((a - b.conj()).norm() < 1e-9);
        }
    }

    #[test]
    fn dp_ignores_element_order((g, v) in set_and_permutation(12, 60)) {
        let a = ReachableSums::build(&g).unwrap();
        let b = ReachableSums::build(&IntegerSet::new(v).unwrap()).unwrap();
        prop_assert_eq!(a.reachable_count(), b.reachable_count());
        for s in -400..=400 {
            prop_assert_eq!(a.contains(s), b.contains(s));
        }
    }

    #[test]
    fn recovered_subset_sums_to_target(g in small_set(8, 20), s in -60i64..=60) {
        match recover_subset(&g, s).unwrap() {
            Some(r) => {
                prop_assert_eq!(r.subset.iter().sum::<i64>(), s);
                prop_assert!(r.evaluations <= g.len());
                prop_assert!(r.subset.iter().all(|a| g.elements().contains(a)));
            }
            None => prop_assert!(!dp_decision(&g, s).unwrap()),
        }
    }

    #[test]
    fn dcram_agrees_with_dp(g in sized_set(2, 9, 30), s in -120i64..=120) {
        let out = dcram_ssp(&g, s).unwrap();
        prop_assert_eq!(out.found, dp_decision(&g, s).unwrap());
        for subset in &out.subsets {
            prop_assert_eq!(subset.iter().sum::<i64>(), s);
        }
    }

    #[test]
    fn composite_state_is_order_free((g, order) in set_and_permutation(10, 30)) {
        let (report, composite) = overhead_census(&g).unwrap();
        prop_assert_eq!(report.mass, (g.len() as f64).exp2());
        let encoded: Vec<_> = order.iter().map(|&a| encode_element(a).unwrap()).collect();
        prop_assert_eq!(compose_states(&encoded), composite);
    }

    #[test]
    fn series_readouts_are_contiguous_sums(values in prop::collection::vec(-50i64..=50, 1..10)) {
        let report = series_readout(&SeriesChain::new(values.clone()).unwrap());
        let k = values.len();
        prop_assert_eq!(report.readout_count, (k + 1) * k / 2);
        for r in &report.readouts {
            prop_assert_eq!(r.sum, values[r.from_tap..r.to_tap].iter().sum::<i64>());
        }
    }

    #[test]
    fn set_text_round_trip(g in small_set(20, 1000)) {
        let text: String = g.elements().iter().map(|a| format!("{a}\n")).collect();
        prop_assert_eq!(IntegerSet::parse(&text, false).unwrap(), g.clone());
        let json = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(IntegerSet::parse(&json, false).unwrap(), g);
    }

    #[test]
    fn embedded_machine_follows_random_tables(
        moves in prop::collection::vec((0usize..3, 0usize..2, 0usize..3), 6),
        input in subsequence(vec!["1", "1", "1", "1"], 0..4),
    ) {
        let states = ["a", "b", "c", "h"];
        let symbols = ["_", "1"];
        let shifts = [Shift::L, Shift::N, Shift::R];
        let mut table = Vec::new();
        for (i, &(next, write, shift)) in moves.iter().enumerate() {
            // the last entry enters the halting state
            let target = if i == 5 { "h" } else { states[next] };
            table.push((states[i / 2], symbols[i % 2], target, symbols[write], shifts[shift]));
        }
        let tm = TmSpec::new(&states, &symbols, "_", &["1"], &table, "a", &["h"]).unwrap();
        let tape: Vec<String> = input.iter().map(|s| s.to_string()).collect();
        let direct = simulate_tm_direct(&tm, &tape, 300).unwrap();
        let (embedded, _) = encode_utm(&tm, &tape).unwrap().trace(300).unwrap();
        prop_assert_eq!(direct, embedded);
    }
}
