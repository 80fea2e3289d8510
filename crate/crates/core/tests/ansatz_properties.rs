mod common;

use common::{pauli_matrix, random_state, to_vector};
use num_complex::Complex;
use proptest::prelude::*;
use vqevo_core::ansatz::{lower_to_circuit, AnsatzKind, Generator};
use vqevo_core::hamiltonian::build_heisenberg;
use vqevo_core::lattice::{build_lattice, Boundary};
use vqevo_core::objective::energy;
use vqevo_core::pauli::Pauli;
use vqevo_core::{Ansatz, PauliOperator, PauliString};

fn kinds() -> Vec<AnsatzKind> {
    ["xy", "xy-half", "xy-band:2", "xy-band:2:wrap", "xy-chain", "xy-chain:wrap", "meanfield"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

#[test]
fn zero_parameters_lower_to_the_identity() {
    for n in [2, 3, 5, 8, 12] {
        for kind in kinds() {
            let Ok(a) = kind.build::<f64>(n) else { continue };
            let c = lower_to_circuit(&a, &vec![0.0; a.n_params()]).unwrap();
            let states = if n == 12 { 10 } else { 100 };
            for seed in 0..states {
                let s = random_state(n, seed);
                let mut t = s.clone();
                c.apply(&mut t).unwrap();
                assert!(t.distance(&s) < 1e-12, "{kind} N={n}");
            }
        }
    }
}

#[test]
fn parameter_count_formulas() {
    for n in 2..=14 {
        assert_eq!(AnsatzKind::Xy.build::<f64>(n).unwrap().n_params(), n * (n - 1));
        assert_eq!("xy-half".parse::<AnsatzKind>().unwrap().build::<f64>(n).unwrap().n_params(), n * (n - 1) / 2);
        assert_eq!(AnsatzKind::MeanField.build::<f64>(n).unwrap().n_params(), n / 2);
    }
}

fn single_generator() -> impl Strategy<Value = (usize, Vec<(usize, Pauli)>)> {
    (2usize..=6).prop_flat_map(|n| {
        let axis = prop_oneof![Just(Pauli::X), Just(Pauli::Y), Just(Pauli::Z)];
        (Just(n), prop::collection::btree_map(0..n, axis, 1..=n.min(4)))
            .prop_map(|(n, m)| (n, m.into_iter().collect()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lowered_generator_matches_matrix_exponential((n, factors) in single_generator(),
                                                    theta in -7.0..7.0f64, seed in any::<u64>()) {
        let p = PauliString::new(1.0, factors.iter().copied()).unwrap();
        let a = Ansatz::new(n, vec![Generator::new(p, 0)]).unwrap();
        let s = random_state(n, seed);
        let mut lowered = s.clone();
        lower_to_circuit(&a, &[theta]).unwrap().apply(&mut lowered).unwrap();
        let generator = pauli_matrix(n, &factors) * Complex::new(0.0, -theta / 2.0);
        let expected = generator.exp() * to_vector(&s);
        let got = to_vector(&lowered);
        prop_assert!((got - &expected).camax() < 1e-10);
        let fast = a.prepare(&[theta], &s).unwrap();
        prop_assert!((to_vector(&fast) - expected).camax() < 1e-10);
    }

    #[test]
    fn fast_path_matches_lowered_circuit(n in 2usize..=6, k in 0usize..7, seed in any::<u64>(),
                                          scale in 0.1..6.0f64) {
        let kind = &kinds()[k];
        let Ok(a) = kind.build::<f64>(n) else { return Ok(()) };
        let params: Vec<f64> = (0..a.n_params()).map(|i| scale * ((i as f64 * 1.37 + seed as f64 * 1e-3).sin())).collect();
        let s = random_state(n, seed);
        let fast = a.prepare(&params, &s).unwrap();
        let mut lowered = s.clone();
        lower_to_circuit(&a, &params).unwrap().apply(&mut lowered).unwrap();
        prop_assert!(fast.max_abs_diff(&lowered) < 1e-10);
    }

    #[test]
    fn energies_are_two_pi_periodic(n in 3usize..=6, k in 0usize..7, seed in any::<u64>(), which in any::<prop::sample::Index>()) {
        let kind = &kinds()[k];
        let Ok(a) = kind.build::<f64>(n) else { return Ok(()) };
        let h = build_heisenberg(&build_lattice(&[n], Boundary::Periodic).unwrap(), 1.0);
        let op = PauliOperator::new(&h);
        let base = random_state(n, seed);
        let params: Vec<f64> = (0..a.n_params()).map(|i| (i as f64 + seed as f64).cos() * 3.0).collect();
        let mut shifted = params.clone();
        shifted[which.index(a.n_params())] += std::f64::consts::TAU;
        let e1 = energy(&op, &a, &params, &base).unwrap();
        let e2 = energy(&op, &a, &shifted, &base).unwrap();
        prop_assert!((e1 - e2).abs() < 1e-10);
    }
}
