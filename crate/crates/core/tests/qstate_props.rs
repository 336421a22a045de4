use std::f64::consts::FRAC_1_SQRT_2;

use gqt_core::qstate::{apply_circuit, apply_gate, circuit_to_dense, measure_all, Circuit, Gate, Unitary2};
use gqt_core::{Complex64, Limits, QState};
use proptest::prelude::*;

fn gate_strategy(n: usize) -> impl Strategy<Value = Gate> {
    let q = 0..n;
    prop_oneof![
        (q.clone(), -3.0f64..3.0).prop_map(|(t, a)| Gate::single(t, Unitary2::rotation(a))),
        q.clone().prop_map(Gate::h),
        (q.clone(), q.clone(), -3.0f64..3.0)
            .prop_filter("distinct", |(c, t, _)| c != t)
            .prop_map(|(c, t, a)| Gate::controlled(c, t, Unitary2::phase(a))),
        (q.clone(), q).prop_filter("distinct", |(a, b)| a != b).prop_map(|(a, b)| Gate::Swap(a, b)),
    ]
}

fn circuit_strategy() -> impl Strategy<Value = Circuit> {
    (2usize..=5).prop_flat_map(|n| {
        prop::collection::vec(gate_strategy(n), 0..24)
            .prop_map(move |gs| Circuit::from_gates(n, gs).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circuits_preserve_norm_and_match_dense(c in circuit_strategy(), k in any::<usize>()) {
        let n = c.n();
        let input = QState::basis(n, k % (1 << n)).unwrap();
        let out = apply_circuit(&input, &c).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-9);
        let d = circuit_to_dense(&c, &Limits::default()).unwrap();
        prop_assert!(d.unitarity_error() < 1e-9);
        for y in 0..1usize << n {
            prop_assert!((out.amplitude(y) - d[(y, k % (1 << n))]).norm() < 1e-9);
        }
    }

    #[test]
    fn same_seed_same_histogram(seed in any::<u64>()) {
        let s = apply_gate(&QState::zero(2).unwrap(), &Gate::h(0)).unwrap();
        prop_assert_eq!(measure_all(&s, seed, 500).unwrap(), measure_all(&s, seed, 500).unwrap());
    }
}

#[test]
fn frequencies_within_four_sigma() {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let states = [
        QState::from_amplitudes(1, vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)]).unwrap(),
        QState::from_amplitudes(2, vec![c(0.6, 0.0), c(0.0, 0.0), c(0.0, 0.48), c(0.64, 0.0)]).unwrap(),
        QState::from_amplitudes(2, vec![c(0.5, 0.0), c(-0.5, 0.0), c(0.0, 0.5), c(0.0, -0.5)]).unwrap(),
    ];
    let shots = 20_000u64;
    for s in &states {
        let probs = s.probabilities();
        for seed in 0..5 {
            let h = measure_all(s, seed, shots).unwrap();
            for (k, p) in probs.iter().enumerate() {
                let got = h.get(&k).copied().unwrap_or(0) as f64 / shots as f64;
                let sigma = (p * (1.0 - p) / shots as f64).sqrt();
                assert!((got - p).abs() <= 4.0 * sigma + 1e-12, "k {k} p {p} got {got}");
            }
        }
    }
}
