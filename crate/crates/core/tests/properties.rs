mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use num_rational::Rational64;
use proptest::prelude::*;
use qnd_interface::metrics::{fidelity, invert_ps, negativity, InvertOptions, NegativitySearch};
use qnd_interface::phase_space::{
    balanced_bs_gate, compose, joint_qnd_gate, qnd_gate, squeeze_gate, Mode, SymplecticMatrix,
};
use qnd_interface::protocols::{
    deterministic_joint_map, deterministic_sequential_map, probabilistic_output, sequential_chain,
    success_probability, JointConfig, ProbabilisticConfig, SequentialConfig,
};
use qnd_interface::wigner::{brute_force_axes, window_reduce, OracleAxis};
use qnd_interface::{SymplecticExact, Wigner64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::random_instance;

fn mode() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::L), Just(Mode::M), Just(Mode::A)]
}

fn gain() -> impl Strategy<Value = f64> {
    (-2.0f64..2.0).prop_filter("nonzero", |g| g.abs() > 1e-3)
}

fn ratio() -> impl Strategy<Value = Rational64> {
    (-9i64..=9, 1i64..=9)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| Rational64::new(n, d))
}

fn exact_gate() -> impl Strategy<Value = SymplecticExact> {
    (mode(), mode(), ratio(), 0u8..3).prop_filter_map("distinct modes", |(a, b, k, kind)| match kind {
        0 => qnd_gate(a, b, k).ok(),
        1 => squeeze_gate(a, k).ok(),
        _ => joint_qnd_gate(k).ok(),
    })
}

fn photon() -> Wigner64 {
    Wigner64::single_photon()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gates_are_symplectic(ctl in mode(), tgt in mode(), k in gain(), g in gain()) {
        prop_assume!(ctl != tgt);
        let gates = [
            qnd_gate(ctl, tgt, k).unwrap(),
            squeeze_gate(ctl, g).unwrap(),
            joint_qnd_gate(k).unwrap(),
            balanced_bs_gate::<f64>(ctl, tgt).unwrap(),
        ];
        for s in &gates {
            prop_assert!(s.symplectic_residual() < 1e-12);
        }
        let chain = compose(&gates);
        prop_assert!(chain.symplectic_residual() < 1e-12 * (1.0 + k * k) * (1.0 + g * g).powi(2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn composition_is_associative_exactly(a in exact_gate(), b in exact_gate(), c in exact_gate()) {
        let left = a.then(&b).then(&c);
        let right = a.then(&b.then(&c));
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left.symplectic_residual(), Rational64::from_integer(0));
        prop_assert_eq!(left.then(&left.inverse()), SymplecticMatrix::identity());
    }

    #[test]
    fn sequential_identity_is_exact(k1 in ratio(), k2 in ratio()) {
        let m = deterministic_sequential_map(&SequentialConfig::new(k1, k2).unwrap()).unwrap();
        prop_assert_eq!(m.transfer_residual(Mode::L), Rational64::from_integer(0));
        prop_assert_eq!(m.matter_residual(), Rational64::from_integer(0));
    }

    #[test]
    fn deterministic_identities_hold_in_floating_point(k1 in 0.05f64..=1.0, k2 in 0.05f64..=1.0) {
        let seq = deterministic_sequential_map(&SequentialConfig::new(k1, k2).unwrap()).unwrap();
        prop_assert!(seq.transfer_residual(Mode::L) < 1e-12);
        prop_assert!(seq.commutator_residual() < 1e-12);
        let joint = deterministic_joint_map(&JointConfig::new(k1).unwrap()).unwrap();
        prop_assert!(joint.transfer_residual(Mode::L) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn substitution_preserves_normalization(seed in any::<u64>(), k1 in 0.1f64..1.0, k2 in 0.1f64..1.0) {
        let w = random_instance(&mut ChaCha8Rng::seed_from_u64(seed), 6);
        let s = sequential_chain(&SequentialConfig::new(k1, k2).unwrap()).unwrap();
        let moved = w.substitute_linear(s.inverse().matrix()).unwrap();
        assert_relative_eq!(
            moved.total_integral().unwrap(),
            w.total_integral().unwrap(),
            max_relative = 1e-9
        );
    }

    #[test]
    fn window_order_converges(seed in any::<u64>(), q in 0.1f64..1.5) {
        let w = random_instance(&mut ChaCha8Rng::seed_from_u64(seed), 3);
        let lo = window_reduce(&w, &[0, 2], q, 16).unwrap().total_integral().unwrap();
        let hi = window_reduce(&w, &[0, 2], q, 32).unwrap().total_integral().unwrap();
        assert_relative_eq!(lo, hi, max_relative = 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn marginals_match_oracle(seed in any::<u64>(), keep in 0usize..3, u in -1.5f64..1.5) {
        let w = random_instance(&mut ChaCha8Rng::seed_from_u64(seed), 3);
        let traced: Vec<usize> = (0..3).filter(|&i| i != keep).collect();
        let m = w.marginalize_full(&traced).unwrap();
        let line = OracleAxis::Line { points: 41, sigmas: 9.0 };
        let mut axes = [line; 3];
        axes[keep] = OracleAxis::Fixed(u);
        let want = brute_force_axes(&w, &axes);
        prop_assert!((m.evaluate(&[u]) - want).abs() <= 1e-6 * (1.0 + want.abs()));
        let total = brute_force_axes(&w, &[line; 3]);
        assert_relative_eq!(w.total_integral().unwrap(), total, max_relative = 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ps_is_monotone_and_saturates(kappa in 0.1f64..1.0, v_a in 0.5f64..10.0, q in 1e-3f64..2.0) {
        let input = photon();
        let cfg = ProbabilisticConfig::new(kappa, 0.5, v_a, q).unwrap();
        let a = success_probability(&input, &cfg).unwrap();
        let b = success_probability(&input, &cfg.with_q(q * 1.1)).unwrap();
        prop_assert!(b > a && a > 0.0);
        let full = success_probability(&input, &cfg.with_q(20.0)).unwrap();
        prop_assert!((full - 1.0).abs() < 1e-4);
    }

    #[test]
    fn merits_stay_in_physical_bounds(kappa in 0.1f64..1.0, v_a in 0.5f64..10.0, q in 0.01f64..2.0) {
        let input = photon();
        let cfg = ProbabilisticConfig::new(kappa, 0.5, v_a, q).unwrap();
        let out = probabilistic_output(&input, &cfg).unwrap();
        let f = fidelity(&out, &input).unwrap();
        prop_assert!((0.0..=1.0 + 1e-6).contains(&f), "F = {}", f);
        let n = negativity(&out, &NegativitySearch::default());
        prop_assert!(n >= -1.0 / PI - 1e-6, "N = {}", n);
        prop_assert!((out.normalized_integral().unwrap() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn small_window_recovers_input() {
    let inputs = [photon(), Wigner64::thermal(1.0).unwrap()];
    for input in &inputs {
        for kappa in [0.3, 0.5] {
            for v_a in [0.5, 5.0] {
                let cfg = ProbabilisticConfig::new(kappa, 0.5, v_a, 1e-3).unwrap();
                let out = probabilistic_output(input, &cfg).unwrap();
                let f = fidelity(&out, input).unwrap();
                let f_in = fidelity_reference(input);
                assert!(f >= 0.999 * f_in, "κ={kappa} V_A={v_a}: F={f}, self-overlap {f_in}");
            }
        }
    }
}

// 2π ∫ W², which is 1 for pure states.
fn fidelity_reference(w: &Wigner64) -> f64 {
    2.0 * PI * w.overlap(w).unwrap()
}

#[test]
fn vacuum_input_has_no_negativity() {
    let cfg = ProbabilisticConfig::new(0.5, 0.5, 5.0, 0.2).unwrap();
    let out = probabilistic_output(&Wigner64::vacuum(), &cfg).unwrap();
    assert!(negativity(&out, &NegativitySearch::default()) >= 0.0);
}

#[test]
fn invert_round_trip_and_ordering() {
    let input = photon();
    let opts = InvertOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        use rand::Rng;
        let cfg = ProbabilisticConfig::new(rng.gen_range(0.1..1.0), 0.5, rng.gen_range(0.5..10.0), 1.0).unwrap();
        let target = 10f64.powf(rng.gen_range(-4.0..-0.5));
        let q = invert_ps(target, &input, &cfg, &opts).unwrap();
        let ps = success_probability(&input, &cfg.with_q(q)).unwrap();
        assert!((ps - target).abs() <= 1e-4 * target, "target {target}, got {ps}");
    }
    let cfg = ProbabilisticConfig::new(0.5, 0.5, 5.0, 1.0).unwrap();
    let qs: Vec<f64> = [1e-4, 1e-3, 1e-2]
        .iter()
        .map(|&t| invert_ps(t, &input, &cfg, &opts).unwrap())
        .collect();
    assert!(qs[0] < qs[1] && qs[1] < qs[2], "{qs:?}");
}

fn fidelity_at(ps: f64, kappa: f64, v_a: f64) -> f64 {
    let input = photon();
    let cfg = ProbabilisticConfig::new(kappa, 0.5, v_a, 1.0).unwrap();
    let q = invert_ps(ps, &input, &cfg, &InvertOptions::default()).unwrap();
    fidelity(&probabilistic_output(&input, &cfg.with_q(q)).unwrap(), &input).unwrap()
}

#[test]
fn fidelity_degrades_with_noise_and_weak_coupling() {
    for ps in [1e-2, 1e-3, 1e-4] {
        let by_noise: Vec<f64> = [1.0, 2.0, 5.0, 10.0].iter().map(|&v| fidelity_at(ps, 0.5, v)).collect();
        assert!(by_noise.windows(2).all(|w| w[1] <= w[0] + 1e-3), "PS={ps}: {by_noise:?}");
        let by_kappa: Vec<f64> = (1..=10).map(|i| fidelity_at(ps, i as f64 / 10.0, 5.0)).collect();
        assert!(by_kappa.windows(2).all(|w| w[1] >= w[0] - 1e-3), "PS={ps}: {by_kappa:?}");
    }
    assert!(fidelity_at(1e-2, 0.5, 0.5) >= fidelity_at(1e-2, 0.5, 5.0));
}
