// Copyright 2026 The kicked-rotor Authors
// SPDX-License-Identifier: Apache-2.0

//! Classical finite-pulse kicked rotor, the comparator for quantum rates.
//!
//! Equations of motion during a pulse are `phi' = rho`, `rho' = -k sin(phi)`,
//! integrated with velocity Verlet; between pulses the rotor drifts freely.
//! Optional recoil noise mirrors the quantum jump kinematics: with probability
//! `eta` per kick, `rho` receives `s kbar/2 + u kbar/2` at a random time inside
//! the pulse, with `s = +/-1` and `u ~ N(u)`.

use std::f64::consts::TAU;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::KickSeries;
use crate::ensemble::{sample_initial_momentum, trajectory_rng};
use crate::params::DimensionlessParams;
use crate::quantum::RecoilDistribution;
use crate::{Error, Result};

pub const DEFAULT_CLASSICAL_SUBSTEPS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalState {
    /// Angle, kept in `[0, 2 pi)`.
    pub phi: f64,
    pub rho: f64,
}

impl ClassicalState {
    pub fn new(phi: f64, rho: f64) -> Self {
        Self { phi: wrap(phi), rho }
    }
}

fn wrap(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Velocity-Verlet integration of the pulse with constant strength `k`.
/// Calls `between(j, state)` after each completed substep `j`.
fn verlet(
    state: &mut ClassicalState,
    kick_strength: f64,
    duration: f64,
    substeps: usize,
    mut between: impl FnMut(usize, &mut ClassicalState),
) {
    let dt = duration / substeps as f64;
    let half_impulse = 0.5 * kick_strength * dt;
    let mut phi = state.phi;
    let mut rho = state.rho;
    for j in 0..substeps {
        rho -= half_impulse * phi.sin();
        phi += rho * dt;
        rho -= half_impulse * phi.sin();
        state.phi = phi;
        state.rho = rho;
        between(j, state);
        phi = state.phi;
        rho = state.rho;
    }
    state.phi = wrap(phi);
}

/// Integrates one pulse of length `duration` without noise.
pub fn leapfrog_pulse(state: &mut ClassicalState, kick_strength: f64, duration: f64, substeps: usize) {
    verlet(state, kick_strength, duration, substeps, |_, _| {});
}

/// One kick period: pulse, optional recoil, free drift over `1 - alpha`.
///
/// Random numbers are only drawn when `noise` is `Some` and `eta > 0`.
pub fn classical_kick<R: Rng + ?Sized>(
    state: &mut ClassicalState,
    p: &DimensionlessParams,
    rng: &mut R,
    substeps: usize,
    noise: Option<RecoilDistribution>,
) {
    let substeps = substeps.max(1);
    let recoil = match noise {
        Some(dist) if p.eta > 0.0 && rng.random::<f64>() < p.eta => {
            let at = ((rng.random::<f64>() * substeps as f64) as usize).min(substeps - 1);
            let absorbed = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let emitted = dist.sample(rng);
            Some((at, 0.5 * p.kbar * (absorbed + emitted)))
        }
        _ => None,
    };
    verlet(state, p.kick_strength(), p.alpha, substeps, |j, s| {
        if let Some((at, kick)) = recoil {
            if j == at {
                s.rho += kick;
            }
        }
    });
    state.phi = wrap(state.phi + state.rho * (1.0 - p.alpha));
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalConfig {
    pub params: DimensionlessParams,
    pub n_kicks: usize,
    pub n_particles: usize,
    pub n_groups: usize,
    pub seed: u64,
    pub noise_enabled: bool,
    pub substeps: usize,
    pub recoil: RecoilDistribution,
}

impl ClassicalConfig {
    pub fn new(
        params: DimensionlessParams,
        n_kicks: usize,
        n_particles: usize,
        seed: u64,
        noise_enabled: bool,
    ) -> Self {
        Self {
            params,
            n_kicks,
            n_particles,
            n_groups: 10,
            seed,
            noise_enabled,
            substeps: DEFAULT_CLASSICAL_SUBSTEPS,
            recoil: RecoilDistribution::default(),
        }
    }
}

/// Runs `n_particles` independent rotors (uniform `phi`, Gaussian `rho`) and
/// records `<rho^2>` before every kick. Particle `i` draws from stream `i` of
/// `seed`, so results do not depend on the thread count.
pub fn classical_ensemble(cfg: &ClassicalConfig) -> Result<KickSeries> {
    cfg.params.validate()?;
    if cfg.n_particles < 10 {
        return Err(Error::invalid(
            "classical_particles",
            "at least 10 particles are required",
        ));
    }
    if cfg.n_groups < 2 || !cfg.n_particles.is_multiple_of(cfg.n_groups) {
        return Err(Error::invalid(
            "classical_particles",
            format!(
                "{} particles cannot be split into {} equal groups",
                cfg.n_particles, cfg.n_groups
            ),
        ));
    }
    if cfg.substeps == 0 {
        return Err(Error::invalid("classical_substeps", "must be at least 1"));
    }
    let per_group = cfg.n_particles / cfg.n_groups;
    let noise = cfg.noise_enabled.then_some(cfg.recoil);
    let history = |i: usize| -> Vec<f64> {
        let mut rng = trajectory_rng(cfg.seed, i as u64);
        let rho0 = sample_initial_momentum(&cfg.params, &mut rng);
        let phi0 = rng.random::<f64>() * TAU;
        let mut state = ClassicalState::new(phi0, rho0);
        let mut out = Vec::with_capacity(cfg.n_kicks + 1);
        out.push(state.rho * state.rho);
        for _ in 0..cfg.n_kicks {
            classical_kick(&mut state, &cfg.params, &mut rng, cfg.substeps, noise);
            out.push(state.rho * state.rho);
        }
        out
    };
    let group_means = (0..cfg.n_groups)
        .map(|g| {
            let block: Vec<Vec<f64>> = (g * per_group..(g + 1) * per_group)
                .into_par_iter()
                .map(history)
                .collect();
            let mut acc = vec![0.0; cfg.n_kicks + 1];
            for h in &block {
                for (a, v) in acc.iter_mut().zip(h) {
                    *a += v;
                }
            }
            acc.iter_mut().for_each(|a| *a /= per_group as f64);
            acc
        })
        .collect();
    KickSeries::from_group_means(group_means, cfg.n_particles, cfg.params, Vec::new())
}
