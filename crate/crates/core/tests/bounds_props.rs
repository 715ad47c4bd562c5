use proptest::prelude::*;
use uur_core::bounds::{self, AmplitudePair, PermutationPair, SearchStrategy};
use uur_core::oracle::{self, Seed};
use uur_core::quantum;

fn moduli(max_n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(prop_oneof![Just(0.0), 0.0..1.0f64], n),
            prop::collection::vec(prop_oneof![Just(0.0), 0.0..1.0f64], n),
        )
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn chain_descends_between_endpoints((x, y) in moduli(9)) {
        let p = AmplitudePair::from_moduli(&x, &y).unwrap();
        let c = bounds::chain(&p);
        let nx: f64 = x.iter().map(|v| v * v).sum();
        let ny: f64 = y.iter().map(|v| v * v).sum();
        let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        prop_assert!(c.is_nonincreasing(1e-12));
        prop_assert!((c.values[0] - nx * ny).abs() < 1e-12);
        prop_assert!((c.values[x.len() - 1] - dot * dot).abs() < 1e-12);
        prop_assert!(c.values.iter().all(|&v| v >= -1e-15));
    }

    #[test]
    fn difference_identity((x, y) in moduli(9)) {
        let p = AmplitudePair::from_moduli(&x, &y).unwrap();
        for k in 1..x.len() {
            let step = bounds::i_k(&p, k + 1).unwrap() - bounds::i_k(&p, k).unwrap();
            let expected: f64 = -(0..k).map(|i| (x[i] * y[k] - x[k] * y[i]).powi(2)).sum::<f64>();
            prop_assert!((step - expected).abs() < 1e-12, "k = {}", k);
        }
    }

    #[test]
    fn square_form_matches_definition((x, y) in moduli(9)) {
        let p = AmplitudePair::from_moduli(&x, &y).unwrap();
        for k in 1..=x.len() {
            let a = bounds::i_k(&p, k).unwrap();
            prop_assert!((a - bounds::i_k_square_form(&p, k).unwrap()).abs() < 1e-12);
            prop_assert!((a - oracle::i_k_reference(&x, &y, k).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn equality_when_step_is_proportional((x, _y) in moduli(6), scale in 0.1..3.0f64) {
        // y ∝ x makes every step vanish: the chain is constant.
        let y2: Vec<f64> = x.iter().map(|v| scale * v).collect();
        let p = AmplitudePair::from_moduli(&x, &y2).unwrap();
        let c = bounds::chain(&p);
        for v in &c.values {
            prop_assert!((v - c.values[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn permutation_invariance_of_endpoint((x, y) in moduli(7), seed in any::<u64>()) {
        let n = x.len();
        let mut rng = Seed(seed).rng();
        use rand::seq::SliceRandom;
        let mut f: Vec<usize> = (0..n).collect();
        let mut s: Vec<usize> = (0..n).collect();
        f.shuffle(&mut rng);
        s.shuffle(&mut rng);
        let p = AmplitudePair::from_moduli(&x, &y).unwrap();
        let perm = PermutationPair::new(f, s).unwrap();
        let i1 = bounds::i_k(&p, 1).unwrap();
        prop_assert!((bounds::permuted_i_k(&p, &perm, 1).unwrap() - i1).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exhaustive_dominates_every_pair(
        (x, y, f, s) in (2usize..=5).prop_flat_map(|n| (
            prop::collection::vec(0.0..1.0f64, n),
            prop::collection::vec(0.0..1.0f64, n),
            permutation(n),
            permutation(n),
        )),
    ) {
        let p = AmplitudePair::from_moduli(&x, &y).unwrap();
        let perm = PermutationPair::new(f, s).unwrap();
        for k in 1..=x.len() {
            let best = bounds::max_permuted_i_k(&p, k, SearchStrategy::Exhaustive).unwrap();
            prop_assert!(bounds::permuted_i_k(&p, &perm, k).unwrap() <= best.value + 1e-12);
            prop_assert!(best.value >= bounds::i_k(&p, k).unwrap() - 1e-12);
            prop_assert!((bounds::permuted_i_k(&p, &best.perm, k).unwrap() - best.value).abs() < 1e-15);
        }
    }

    #[test]
    fn heuristic_bracketed((x, y) in moduli(5), seed in any::<u64>()) {
        let p = AmplitudePair::from_moduli(&x, &y).unwrap();
        for k in 1..=x.len() {
            let h = bounds::max_permuted_i_k(&p, k, SearchStrategy::Heuristic { seed, restarts: 50 }).unwrap();
            let e = bounds::max_permuted_i_k(&p, k, SearchStrategy::Exhaustive).unwrap();
            prop_assert!(h.value >= bounds::i_k(&p, k).unwrap() - 1e-12);
            prop_assert!(h.value <= e.value + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pairset_leading_block_is_i_k((x, y) in moduli(8)) {
        let p = AmplitudePair::from_moduli(&x, &y).unwrap();
        for k in 1..=x.len() {
            let v = bounds::pairset_bound(&p, &bounds::leading_block(k)).unwrap();
            prop_assert!((v - bounds::i_k(&p, k).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn chain_bounds_variance_product(seed in any::<u64>(), dim in 2usize..=3, mixed in any::<bool>()) {
        let (s, a, b) = oracle::random_instance(Seed(seed), dim, mixed).unwrap();
        let p = bounds::amplitude_pair(&a, &b, &s).unwrap();
        let c = bounds::chain(&p);
        let product = quantum::variance(&a, &s).unwrap() * quantum::variance(&b, &s).unwrap();
        prop_assert!((c.values[0] - product).abs() < 1e-10);
        prop_assert!(c.is_nonincreasing(1e-10));
        prop_assert!(*c.values.last().unwrap() >= bounds::lb2(&a, &b, &s).unwrap() - 1e-10);
        prop_assert!((c.lb_gram2 - bounds::lb2(&a, &b, &s).unwrap()).abs() < 1e-10);
        for k in 1..=p.n_eff().min(4) {
            let m = bounds::max_permuted_i_k(&p, k, SearchStrategy::Auto { seed }).unwrap();
            prop_assert!(m.value <= product + 1e-10);
        }
    }
}

#[test]
fn engine_and_oracle_pick_same_permutation() {
    for i in 0..100 {
        let n = 2 + (i % 4) as usize;
        let (x, y) = oracle::random_moduli(Seed(77).derive(i), n);
        let p = AmplitudePair::from_moduli(&x, &y).unwrap();
        for k in 1..=n {
            let e = bounds::max_permuted_i_k(&p, k, SearchStrategy::Exhaustive).unwrap();
            let (v, perm) = oracle::exhaustive_perm_max(&x, &y, k).unwrap();
            assert_eq!(e.perm, perm, "instance {i}, k = {k}");
            assert!((e.value - v).abs() < 1e-12);
        }
    }
}

#[test]
fn heuristic_is_deterministic() {
    let (x, y) = oracle::random_moduli(Seed(3), 9);
    let p = AmplitudePair::from_moduli(&x, &y).unwrap();
    let run = || bounds::max_permuted_i_k(&p, 4, SearchStrategy::Auto { seed: 11 }).unwrap();
    assert_eq!(run(), run());
}

#[test]
fn pairset_single_pair_is_relabelled_i2() {
    // {(0, 2)} on (x0, x1, x2) equals I_2 on the relabelled (x0, x2, x1).
    for i in 0..50 {
        let (x, y) = oracle::random_moduli(Seed(12).derive(i), 3);
        let p = AmplitudePair::from_moduli(&x, &y).unwrap();
        let v = bounds::pairset_bound(&p, &[(0, 2)]).unwrap();
        let xs = [x[0], x[2], x[1]];
        let ys = [y[0], y[2], y[1]];
        assert!((v - oracle::i_k_reference(&xs, &ys, 2).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn pairset_rejects_bad_sets() {
    let p = AmplitudePair::from_moduli(&[0.1, 0.2, 0.3], &[0.3, 0.2, 0.1]).unwrap();
    assert!(bounds::pairset_bound(&p, &[(1, 1)]).is_err());
    assert!(bounds::pairset_bound(&p, &[(2, 1)]).is_err());
    assert!(bounds::pairset_bound(&p, &[(0, 3)]).is_err());
    assert!(bounds::pairset_bound(&p, &[(0, 1), (0, 1)]).is_err());
    assert!((bounds::pairset_bound(&p, &[]).unwrap() - bounds::i_k(&p, 1).unwrap()).abs() < 1e-15);
}
