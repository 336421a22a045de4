use gqt_core::dhsp::{
    analyze, coset_state, coset_state_sum, lambda_inner, lambda_vector, outcome_distribution,
    phi0_probability, recover_d, run_procedure, run_procedure_with, search_perfect_samples,
    success_probability, DhspInstance,
};
use gqt_core::phasemat::PhaseMatrix;
use gqt_core::Limits;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_instance(n: usize, seed: u64) -> DhspInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modulus = 1u64 << n;
    let s = (0..n).map(|_| rng.gen_range(0..modulus)).collect();
    DhspInstance::new(n, rng.gen_range(0..modulus), s).unwrap()
}

#[test]
fn lambda_forms_agree_exhaustively_in_d() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=5 {
        let modulus = 1u64 << n;
        for _ in 0..100 {
            let s: Vec<u64> = (0..n).map(|_| rng.gen_range(0..modulus)).collect();
            for d in 0..modulus {
                let x = DhspInstance::new(n, d, s.clone()).unwrap();
                assert_eq!(lambda_vector(&x), lambda_inner(&x));
            }
        }
    }
}

#[test]
fn perfect_samples_recover_every_d() {
    let l = Limits::default();
    for n in 1..=5 {
        let s = search_perfect_samples(n).unwrap();
        for d in 0..1u64 << n {
            let x = DhspInstance::new(n, d, s.clone()).unwrap();
            let a = analyze(&x);
            assert!(a.lambda.iter().all(|&v| v == 0));
            assert!((a.p_success - 1.0).abs() < 1e-12);
            let r = recover_d(&x, 64, d, &l).unwrap();
            assert_eq!((r.d_hat, r.empirical_rate), (d, 1.0));
        }
    }
}

#[test]
fn empirical_rate_within_binomial_bound() {
    let l = Limits::default();
    let x = DhspInstance::new(2, 1, vec![0, 0]).unwrap();
    let trials = 4000;
    let r = recover_d(&x, trials, 11, &l).unwrap();
    let p = r.analytic_p;
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();
    assert!((r.empirical_rate - p).abs() <= 4.0 * sigma + 1e-12, "{r:?}");
}

#[test]
fn phi0_formula_with_transposed_triangular_phi() {
    let l = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 1..=4 {
        for _ in 0..10 {
            let big_n = (1u64 << n) as f64;
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| match i.cmp(&j) {
                            std::cmp::Ordering::Equal => big_n / 2.0,
                            std::cmp::Ordering::Less => rng.gen_range(-big_n..big_n),
                            std::cmp::Ordering::Greater => 0.0,
                        })
                        .collect()
                })
                .collect();
            let phi = PhaseMatrix::new(rows).unwrap();
            let x = random_instance(n, rng.gen());
            let out = run_procedure_with(&x, &phi, &l).unwrap();
            let p = phi0_probability(&x, &phi).unwrap();
            assert!((p - out.amplitude(x.d() as usize).norm_sqr()).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn formula_matches_simulation(n in 1usize..=5, seed in any::<u64>()) {
        let l = Limits::default();
        let x = random_instance(n, seed);
        prop_assert!(coset_state(&x).unwrap().max_abs_diff(&coset_state_sum(&x).unwrap()) < 1e-10);
        let out = run_procedure(&x, &l).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-9);
        let dist = outcome_distribution(&x).unwrap();
        prop_assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        for (y, p) in dist.iter().enumerate() {
            prop_assert!((p - out.amplitude(y).norm_sqr()).abs() < 1e-9);
            prop_assert!((success_probability(&x, y).unwrap() - p).abs() < 1e-15);
        }
    }
}
