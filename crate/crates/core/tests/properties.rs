//! Cross-module invariants on generated instances.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use substream::harness::generate::{small_coverage_instance, small_cut_instance};
use substream::harness::instance::Instance;
use substream::harness::order::StreamOrder;
use substream::local_search::{greedy_base, local_search_pass};
use substream::multilinear::{coverage_f, coverage_partial, enumerate_f};
use substream::rng::CounterRng;
use substream::rounding::{swap_round, ConvexCombination, RoundingConfig};
use substream::single_pass::{Mode, SinglePass, SinglePassConfig};
use substream::{EstimatorConfig, FractionalPoint, Matroid, Multilinear};

fn coverage(seed: u64) -> Instance {
    Instance::from_file(small_coverage_instance(seed, 4, 12)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn single_pass_state_stays_within_its_invariants(seed in any::<u64>(), eps in 0.1f64..1.0) {
        let inst = coverage(seed);
        let cfg = SinglePassConfig::new(eps, Mode::Monotone).unwrap();
        let stream = StreamOrder::Random(seed).resolve(inst.f()).unwrap();
        let oracle = Multilinear::Coverage(inst.objective.coverage().unwrap());
        let mut state = SinglePass::new(cfg, &inst.matroid, oracle).unwrap();
        for &u in &stream {
            state.process(u).unwrap();
            prop_assert!(state.stored() <= cfg.memory_bound(inst.matroid.rank_total()));
            prop_assert_eq!(state.check_nested_spanning(), None);
            prop_assert!(state.accumulated().max_coordinate() <= 1.0 + 1e-9);
        }
        let out = state.finalize(&RoundingConfig { trials: 4, seed }).unwrap();
        for s in &out.candidates {
            prop_assert!(inst.matroid.independent(s));
        }
        prop_assert!(inst.matroid.independent(&out.solution));
        prop_assert!((inst.f().eval(&out.solution) - out.value).abs() < 1e-9);
    }

    #[test]
    fn non_monotone_mass_respects_the_cap(seed in any::<u64>()) {
        let inst = Instance::from_file(small_cut_instance(seed, 4, 8)).unwrap();
        let cfg = SinglePassConfig::new(0.5, Mode::NonMonotone).unwrap();
        let p = cfg.p.unwrap();
        let est = EstimatorConfig::new(256, seed).unwrap();
        let mut state = SinglePass::new(cfg, &inst.matroid, Multilinear::Sampled(inst.f(), est)).unwrap();
        for u in StreamOrder::Random(seed).resolve(inst.f()).unwrap() {
            state.process(u).unwrap();
        }
        // Mass stops being added once it exceeds p, and each step is at most 1/m.
        let step = 1.0 / cfg.m as f64;
        for (u, x) in state.accumulated().support() {
            prop_assert!(x <= p + step + 1e-12, "element {} has mass {}", u, x);
        }
    }

    #[test]
    fn swap_rounding_returns_independent_sets(seed in any::<u64>(), k in 1usize..5) {
        let inst = coverage(seed);
        let mut rng = CounterRng::new(seed);
        let n = inst.ground_size();
        let entries: Vec<(Vec<usize>, f64)> = (0..k)
            .map(|_| {
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(&mut rng);
                let mut set = greedy_base(&inst.matroid, &order);
                set.truncate(rng.random_range(0..=set.len()));
                (set, 1.0 / k as f64)
            })
            .collect();
        let comb = ConvexCombination::new(n, entries).unwrap();
        for t in 0..8 {
            let r = swap_round(&inst.matroid, &comb, t).unwrap();
            prop_assert!(inst.matroid.independent(&r));
        }
    }

    #[test]
    fn local_search_pass_never_loses_value(seed in any::<u64>(), c in 1.01f64..3.0) {
        let inst = coverage(seed);
        let mut rng = CounterRng::new(seed);
        let mut order: Vec<usize> = (0..inst.ground_size()).collect();
        order.shuffle(&mut rng);
        let s0 = greedy_base(&inst.matroid, &order);
        order.shuffle(&mut rng);
        let pass = local_search_pass(&inst.matroid, inst.f(), &s0, &order, c).unwrap();
        prop_assert!(pass.end_value >= pass.start_value - 1e-12);
        prop_assert!(inst.matroid.is_base(&pass.end).unwrap());
    }

    #[test]
    fn closed_form_coverage_extension_matches_enumeration(seed in any::<u64>()) {
        let inst = coverage(seed);
        let cov = inst.objective.coverage().unwrap();
        let mut rng = CounterRng::new(seed ^ 1);
        let n = inst.ground_size();
        let pairs: Vec<(usize, f64)> = (0..n).map(|e| (e, rng.random_range(0.0..=1.0))).collect();
        let x = FractionalPoint::from_pairs(n, pairs).unwrap();
        let exact = coverage_f(cov, &x).unwrap();
        prop_assert!((exact - enumerate_f(cov, &x).unwrap()).abs() < 1e-9);
        let u = rng.random_range(0..n);
        let mut hi = x.clone();
        hi.set(u, 1.0).unwrap();
        let mut lo = x.clone();
        lo.set(u, 0.0).unwrap();
        let diff = enumerate_f(cov, &hi).unwrap() - enumerate_f(cov, &lo).unwrap();
        prop_assert!((coverage_partial(cov, &x, u).unwrap() - diff).abs() < 1e-9);
    }

    #[test]
    fn instance_files_round_trip(seed in any::<u64>()) {
        for file in [small_coverage_instance(seed, 4, 12), small_cut_instance(seed, 4, 12)] {
            let text = serde_json::to_string_pretty(&file).unwrap();
            let back = Instance::from_json(&text).unwrap();
            prop_assert_eq!(back.file, file);
        }
    }
}
