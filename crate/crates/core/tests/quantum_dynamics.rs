// Copyright 2026 The kicked-rotor Authors
// SPDX-License-Identifier: Apache-2.0

mod common;

use common::max_abs_diff;
use kicked_rotor::params::DimensionlessParams;
use kicked_rotor::quantum::{JumpClock, KickPropagator, PropagatorOptions, QuantumState};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn options(grid_size: usize, substeps: Option<usize>) -> PropagatorOptions {
    PropagatorOptions {
        grid_size,
        substeps,
        ..Default::default()
    }
}

/// `I_0(x)` from its power series.
fn bessel_i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..40 {
        term *= q / (k * k) as f64;
        sum += term;
    }
    sum
}

#[test]
fn unitary_without_decoherence() {
    let params = DimensionlessParams::new(9.0, 2.0, 0.005, 0.0, 4.0).unwrap();
    let mut prop = KickPropagator::new(&params, options(1024, None)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut clock = JumpClock::new(&mut rng);
    let mut state = QuantumState::momentum_eigenstate(0.7, 2.0, 1024).unwrap();
    for k in 0..100 {
        let events = prop.kick(&mut state, &mut clock, &mut rng, k).unwrap();
        assert!(events.is_empty());
    }
    let direct: f64 = state.amplitudes().iter().map(|c| c.norm_sqr()).sum();
    assert!((direct - 1.0).abs() < 1e-10, "norm drift {}", direct - 1.0);
}

#[test]
fn unkicked_pulse_is_free_evolution() {
    let params = DimensionlessParams::new(0.0, 2.3, 0.005, 0.0, 4.0).unwrap();
    let mut prop = KickPropagator::new(&params, options(64, Some(50))).unwrap();
    let comps = [
        (-3, Complex64::new(0.5, 0.1)),
        (0, Complex64::new(0.3, -0.4)),
        (7, Complex64::new(0.0, 0.7)),
    ];
    let mut state = QuantumState::from_components(&comps, 0.41, 64).unwrap();
    let mut expected = state.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut clock = JumpClock::new(&mut rng);
    prop.pulse_step(&mut state, &mut clock, &mut rng, 0).unwrap();
    expected.free_evolve(0.005, 2.3);
    assert!(max_abs_diff(state.amplitudes(), expected.amplitudes()) < 1e-13);
}

#[test]
fn unkicked_jump_probability() {
    // Uniform position density decays to exp(-eta) I_0(eta) over one pulse.
    let eta = 0.5;
    let params = DimensionlessParams::new(0.0, 2.0, 0.005, eta, 4.0).unwrap();
    let mut prop = KickPropagator::new(&params, options(64, Some(50))).unwrap();
    let n = 20_000;
    let mut jumped = 0usize;
    for i in 0..n {
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        let mut clock = JumpClock::new(&mut rng);
        let mut state = QuantumState::momentum_eigenstate(0.0, 2.0, 64).unwrap();
        if !prop.pulse_step(&mut state, &mut clock, &mut rng, 0).unwrap().is_empty() {
            jumped += 1;
        }
    }
    let expected = 1.0 - (-eta).exp() * bessel_i0(eta);
    let observed = jumped as f64 / n as f64;
    let se = (expected * (1.0 - expected) / n as f64).sqrt();
    assert!((observed - expected).abs() < 4.0 * se, "{observed} vs {expected}");
}

#[test]
fn one_kick_substep_convergence() {
    let params = DimensionlessParams::new(9.0, 2.0, 0.005, 0.0, 4.0).unwrap();
    let rho_sq_after = |substeps| {
        let mut prop = KickPropagator::new(&params, options(1024, Some(substeps))).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut clock = JumpClock::new(&mut rng);
        let mut state = QuantumState::momentum_eigenstate(3.1, 2.0, 1024).unwrap();
        prop.kick(&mut state, &mut clock, &mut rng, 0).unwrap();
        state.rho_sq(2.0)
    };
    let (a, b) = (rho_sq_after(50), rho_sq_after(100));
    assert!(((a - b) / b).abs() < 1e-6, "{a} vs {b}");
}

#[test]
fn grid_overflow_is_reported() {
    let params = DimensionlessParams::new(12.0, 0.5, 0.005, 0.0, 4.0).unwrap();
    let mut prop = KickPropagator::new(&params, options(32, None)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut clock = JumpClock::new(&mut rng);
    let mut state = QuantumState::momentum_eigenstate(0.0, 0.5, 32).unwrap();
    let err = (0..20)
        .find_map(|k| prop.kick(&mut state, &mut clock, &mut rng, k).err())
        .expect("a 32-state grid cannot hold kappa=12 at kbar=0.5");
    assert_eq!(err.exit_code(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decohering_kicks_keep_unit_norm(seed in any::<u64>(), eta in 0.01f64..1.0, kbar in 1.0f64..6.0) {
        let params = DimensionlessParams::new(5.0, kbar, 0.005, eta, 4.0).unwrap();
        let mut prop = KickPropagator::new(&params, options(256, Some(50))).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut clock = JumpClock::new(&mut rng);
        let mut state = QuantumState::momentum_eigenstate(kbar * 1.3, kbar, 256).unwrap();
        for k in 0..5 {
            prop.kick(&mut state, &mut clock, &mut rng, k).unwrap();
            let direct: f64 = state.amplitudes().iter().map(|c| c.norm_sqr()).sum();
            prop_assert!((direct - 1.0).abs() < 1e-12);
            prop_assert!((0.0..1.0).contains(&state.beta()));
            prop_assert!(clock.threshold() > 0.0 && clock.threshold() < 1.0);
        }
    }
}
