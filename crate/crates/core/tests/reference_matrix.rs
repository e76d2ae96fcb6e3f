use num_rational::Rational64;
use qnd_interface::phase_space::{phase_flip_gate, reference_matrix_u, Mode};
use qnd_interface::protocols::{
    probabilistic_output, sequential_chain, Kappa3Sign, ProbabilisticConfig, SequentialConfig,
};
use qnd_interface::Wigner64;

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

#[test]
fn reference_matrix_is_flipped_pullback() {
    for (k1, k2) in [(r(1, 2), r(1, 2)), (r(1, 3), r(5, 7)), (r(-2, 3), r(9, 4))] {
        let forward = sequential_chain(&SequentialConfig::new(k1, k2).unwrap()).unwrap();
        let expected = forward.inverse().then(&phase_flip_gate(Mode::L));
        assert_eq!(reference_matrix_u(k1, k2).unwrap(), expected);
    }
}

#[test]
fn negative_branch_does_not_match() {
    let (k1, k2) = (r(1, 2), r(1, 2));
    let cfg = SequentialConfig::with_sign(k1, k2, Kappa3Sign::Negative).unwrap();
    let forward = sequential_chain(&cfg).unwrap();
    let candidate = forward.inverse().then(&phase_flip_gate(Mode::L));
    assert_ne!(reference_matrix_u(k1, k2).unwrap(), candidate);
}

#[test]
fn flip_is_invisible_for_even_inputs() {
    // Post-selecting on the reference matrix instead of the engine's pullback
    // gives the same output for the (even) single-photon input.
    let input = Wigner64::single_photon();
    let cfg = ProbabilisticConfig::new(0.5, 0.5, 5.0, 0.3).unwrap();
    let out = probabilistic_output(&input, &cfg).unwrap();
    let flipped = phase_flip_gate::<f64>(Mode::L);
    let reflected = input
        .substitute_linear(&flipped.matrix().select(&[0, 1], &[0, 1]))
        .unwrap();
    let mirrored = probabilistic_output(&reflected, &cfg).unwrap();
    for &(x, p) in &[(0.0, 0.0), (0.4, -0.7), (1.2, 0.3)] {
        assert!((out.evaluate(x, p) - mirrored.evaluate(x, p)).abs() < 1e-12);
    }
}
