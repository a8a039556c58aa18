use proptest::prelude::*;

use hamdev::corpus::{random_cnf, random_digraph, random_nft, rng};
use hamdev::deviation::{analyze_deviation, Verdict, DEFAULT_MAX_CONFIGS};
use hamdev::format::{parse_nft, serialize_nft};
use hamdev::gadgets::{gen_3sat, gen_reach_bounded};
use hamdev::nft::{run_words, Nft};
use hamdev::normalize::{add_eps_self_loops, atomize, is_trim, trim};
use hamdev::oracle::{brute_force_deviation, default_limits, enumerate_relation, sat_brute_force};
use hamdev::reductions::{comparison_to_deviation, deviation_to_comparison};
use hamdev::word::{hamming_distance, ExtNat};

fn nft_from(seed: u64) -> Nft {
    random_nft(&mut rng(seed), &format!("p{seed}"))
}

fn dev(t: &Nft) -> ExtNat {
    analyze_deviation(t, DEFAULT_MAX_CONFIGS).unwrap().deviation()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn serialization_round_trips(seed in any::<u64>()) {
        let t = nft_from(seed);
        let text = serialize_nft(&t);
        let back = parse_nft(&text).unwrap();
        prop_assert_eq!(serialize_nft(&back), text);
    }

    #[test]
    fn normalizations_preserve_the_relation(seed in any::<u64>()) {
        let t = nft_from(seed);
        let rel = enumerate_relation(&t, 4);
        prop_assert!(is_trim(&trim(&t)));
        prop_assert_eq!(&enumerate_relation(&trim(&t), 4), &rel);
        prop_assert_eq!(&enumerate_relation(&atomize(&t), 4), &rel);
        prop_assert_eq!(&enumerate_relation(&add_eps_self_loops(&t), 4), &rel);
    }

    #[test]
    fn normalizations_preserve_the_deviation(seed in any::<u64>()) {
        let t = nft_from(seed);
        let d = dev(&t);
        prop_assert_eq!(dev(&atomize(&t)), d);
        prop_assert_eq!(dev(&add_eps_self_loops(&t)), d);
    }

    #[test]
    fn engine_agrees_with_the_oracle(seed in any::<u64>()) {
        let t = nft_from(seed);
        let r = analyze_deviation(&t, DEFAULT_MAX_CONFIGS).unwrap();
        let (run_len, pair_len) = default_limits(&t);
        let o = brute_force_deviation(&t, run_len, pair_len);
        match r.verdict {
            Verdict::Bounded { value, ref witness } => {
                prop_assert!(!o.saturated);
                prop_assert_eq!(o.max_seen, ExtNat::Finite(value));
                let (u, v) = run_words(&t, witness).unwrap();
                prop_assert_eq!(hamming_distance(&u, &v), ExtNat::Finite(value));
                prop_assert!(value <= r.bounds.deviation);
            }
            _ => prop_assert!(o.max_seen > ExtNat::Finite(r.bounds.deviation)),
        }
    }

    #[test]
    fn round_trip_through_comparison(seed in any::<u64>()) {
        let t = nft_from(seed);
        let (t1, t2) = deviation_to_comparison(&t);
        prop_assert_eq!(dev(&comparison_to_deviation(&t1, &t2)), dev(&t));
    }

    #[test]
    fn reachability_gadget_matches_bfs(seed in any::<u64>()) {
        let g = random_digraph(&mut rng(seed));
        let t = gen_reach_bounded(&g).unwrap().nft;
        prop_assert_eq!(dev(&t).is_finite(), !g.reaches());
    }

    #[test]
    fn three_sat_gadget_matches_brute_force(seed in any::<u64>()) {
        let f = random_cnf(&mut rng(seed), 4, 4);
        let t = gen_3sat(&f).unwrap().nft;
        let n = f.num_vars() as u64;
        let m = f.clauses().len() as u64;
        let sat = sat_brute_force(&f).unwrap().is_some();
        let d = dev(&t);
        prop_assert_eq!(d > ExtNat::Finite(n * (m + 1) - 1), sat);
    }
}
