use std::f64::consts::PI;

use proptest::prelude::*;
use uur_core::bounds::{self, BoundMode, SearchStrategy};
use uur_core::oracle::{self, Seed};
use uur_core::quantum::{self, UnitaryOperator};
use uur_core::repro::{self, builtin, BoundId, ThetaGrid};

fn ops(seed: u64, dim: usize, count: usize, mixed: bool) -> (quantum::State, Vec<UnitaryOperator>) {
    let mut rng = Seed(seed).rng();
    let s = oracle::random_state(&mut rng, dim, mixed);
    (
        s,
        (0..count)
            .map(|_| oracle::random_unitary(&mut rng, dim))
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn two_operator_gram_identity(seed in any::<u64>(), dim in 2usize..=4, mixed in any::<bool>()) {
        let (s, u) = ops(seed, dim, 2, mixed);
        let g = bounds::gram(&[&u[0], &u[1]], &s).unwrap();
        let product = bounds::variance_product(&[&u[0], &u[1]], &s).unwrap();
        prop_assert!((g.determinant - (product - g.lower_bound.unwrap())).abs() < 1e-10);
        prop_assert!(g.gram.is_hermitian(1e-12));
    }

    #[test]
    fn three_operator_gram_identity(seed in any::<u64>(), dim in 2usize..=4, mixed in any::<bool>()) {
        let (s, u) = ops(seed, dim, 3, mixed);
        let refs = [&u[0], &u[1], &u[2]];
        let g = bounds::gram(&refs, &s).unwrap();
        let product = bounds::variance_product(&refs, &s).unwrap();
        prop_assert!((g.determinant - (product - bounds::lb3(refs[0], refs[1], refs[2], &s).unwrap())).abs() < 1e-9);
        prop_assert!(g.determinant >= -1e-9);
        if !mixed && dim <= 3 {
            prop_assert!(g.determinant.abs() < 1e-9);
        }
    }

    #[test]
    fn strengthened_products_dominate(seed in any::<u64>(), dim in 2usize..=3, mixed in any::<bool>()) {
        let (s, u) = ops(seed, dim, 4, mixed);
        let product3 = bounds::variance_product(&[&u[0], &u[1], &u[2]], &s).unwrap();
        let n = s.effective_dim();
        for k in 2..=n.min(4) {
            let plain = bounds::product3_bound([&u[0], &u[1], &u[2]], &s, k, BoundMode::Plain).unwrap();
            let strong = bounds::product3_bound(
                [&u[0], &u[1], &u[2]],
                &s,
                k,
                BoundMode::Strengthened(SearchStrategy::Auto { seed }),
            )
            .unwrap();
            prop_assert!(strong >= plain - 1e-12);
            prop_assert!(strong <= product3 + 1e-9);

            let default = bounds::product4_bound([[&u[0], &u[1]], [&u[2], &u[3]]], &s, k).unwrap();
            let best = bounds::product4_best_matching([&u[0], &u[1], &u[2], &u[3]], &s, k).unwrap();
            let product4 = bounds::variance_product(&u.iter().collect::<Vec<_>>(), &s).unwrap();
            prop_assert!(best >= default - 1e-15);
            prop_assert!(best <= product4 + 1e-9);
        }
    }
}

#[test]
fn pure_qutrit_three_operators_saturate_gram() {
    for i in 0..30 {
        let (s, u) = ops(Seed(8).derive(i).0, 3, 3, false);
        let g = bounds::gram(&[&u[0], &u[1], &u[2]], &s).unwrap();
        assert!(g.determinant.abs() < 1e-9);
    }
}

fn coarse(name: &str) -> repro::Scenario {
    let mut s = builtin(name).unwrap();
    s.grid = ThetaGrid {
        start: 0.0,
        stop: 2.0 * PI,
        count: 37,
    };
    s
}

#[test]
fn every_emitted_bound_is_below_the_product() {
    for name in repro::BUILTIN_NAMES {
        for p in repro::run_scenario(&coarse(name)).unwrap() {
            for (id, v) in &p.bounds {
                assert!(
                    *v <= p.variance_product + 1e-9,
                    "{name} theta {} {id} = {v} > {}",
                    p.theta,
                    p.variance_product
                );
            }
        }
    }
}

#[test]
fn reruns_are_bit_identical() {
    let s = coarse("example5");
    let render = || {
        let mut buf = Vec::new();
        repro::write_csv(&repro::run_scenario(&s).unwrap(), &s.bounds, &mut buf).unwrap();
        buf
    };
    assert_eq!(render(), render());
}

#[test]
fn clock_shift_qubit_saturates_i2() {
    for p in repro::run_scenario(&coarse("example1-d2")).unwrap() {
        assert!((p.variance_product - p.get(BoundId::Chain(2)).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn clock_shift_d5_equalities() {
    use BoundId::*;
    for p in repro::run_scenario(&coarse("example1-d5")).unwrap() {
        let v = |id| p.get(id).unwrap();
        assert!((v(Chain(2)) - v(Chain(3))).abs() < 1e-9);
        assert!((v(Chain(3)) - v(Chain(4))).abs() < 1e-9);
        assert!((v(Chain(5)) - v(Lb2)).abs() < 1e-9);
    }
}

#[test]
fn qubit_mixed_ordering_at_zero() {
    use BoundId::*;
    let mut s = builtin("example2").unwrap();
    s.grid = ThetaGrid {
        start: 0.0,
        stop: 0.1,
        count: 2,
    };
    let p = &repro::run_scenario(&s).unwrap()[0];
    let seq = [
        p.variance_product,
        p.get(Chain(2)).unwrap(),
        p.get(Chain(3)).unwrap(),
        p.get(Chain(4)).unwrap(),
        p.get(Lb2).unwrap(),
    ];
    for w in seq.windows(2) {
        assert!(w[0] >= w[1] - 1e-10, "{seq:?}");
    }
    assert!(seq[0] > seq[1] && seq[1] > seq[2] && seq[2] > seq[3]);
}

#[test]
fn five_level_saturation_and_gram_zeros() {
    let s = builtin("example6").unwrap();
    let ops = s.build_operators().unwrap();
    for theta in [0.0, 0.3, 1.1, PI, 4.0, 2.0 * PI] {
        let state = s.state.at(theta).unwrap();
        let p = repro::evaluate(theta, &state, &ops, &s.bounds, s.seed).unwrap();
        for k in 2..=5 {
            assert!((p.variance_product - p.get(BoundId::Prod4(k)).unwrap()).abs() < 1e-9);
        }
        let det = p.get(BoundId::DetG).unwrap();
        assert!(det >= -1e-9);
        if theta == 0.0 || theta == PI || theta == 2.0 * PI {
            assert!(det.abs() < 1e-9);
        }
    }
}
