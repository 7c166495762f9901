// Copyright 2026 The kicked-rotor Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::recoil::RecoilDistribution;
use super::state::{check_grid_size, ladder_index, QuantumState, DEFAULT_LEAK_TOLERANCE};
use crate::params::DimensionlessParams;
use crate::{Error, Result};

/// Default number of symmetric split steps per pulse: `max(50, ceil(16 kappa))`.
///
/// Keeps the one-kick amplitude error of the splitting below `5e-7` for
/// `kappa <= 12` and `kbar >= 1`.
pub fn default_substeps(kappa: f64) -> usize {
    ((16.0 * kappa).ceil() as usize).max(50)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagatorOptions {
    pub grid_size: usize,
    /// `None` selects [`default_substeps`].
    pub substeps: Option<usize>,
    pub leak_tolerance: f64,
    pub recoil: RecoilDistribution,
}

impl Default for PropagatorOptions {
    fn default() -> Self {
        Self {
            grid_size: 4096,
            substeps: None,
            leak_tolerance: DEFAULT_LEAK_TOLERANCE,
            recoil: RecoilDistribution::default(),
        }
    }
}

/// One spontaneous-emission event.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpEvent {
    pub kick_index: usize,
    /// Scaled time since the pulse started, in `(0, alpha]`.
    pub time_in_pulse: f64,
    pub recoil_u: f64,
    /// Quasimomentum shift applied, `frac(beta + (u+1)/2) - beta` mod 1.
    pub absorption_branch_shift: f64,
}

/// Norm threshold of the waiting-time jump algorithm.
///
/// The threshold survives pulse boundaries: when a pulse ends without a jump
/// the state is renormalized and the threshold rescaled by the same factor,
/// which keeps it uniform on `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpClock {
    threshold: f64,
}

impl JumpClock {
    pub fn new<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut clock = Self { threshold: 0.0 };
        clock.redraw(rng);
        clock
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    fn redraw<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        // open interval (0, 1)
        self.threshold = loop {
            let r: f64 = rng.random();
            if r > 0.0 {
                break r;
            }
        };
    }
}

struct KineticTables {
    beta: f64,
    half: Vec<Complex64>,
    full: Vec<Complex64>,
    free: Vec<Complex64>,
}

/// Split-step propagator for one kick period of the decohering kicked rotor.
///
/// During a pulse of length `alpha` the wavefunction alternates between
/// kinetic phases on the momentum ladder and potential-plus-decay factors
/// `exp(i k cos(phi) dt / kbar) exp(-(eta/alpha) cos^2(phi/2) dt)` on the
/// position grid. The non-Hermitian decay shrinks the norm; a jump fires when
/// the squared norm drops below the [`JumpClock`] threshold.
pub struct KickPropagator {
    params: DimensionlessParams,
    options: PropagatorOptions,
    substeps: usize,
    dt: f64,
    to_position: Arc<dyn Fft<f64>>,
    to_momentum: Arc<dyn Fft<f64>>,
    fft_scratch: Vec<Complex64>,
    potential: Vec<Complex64>,
    kinetic: Option<KineticTables>,
}

impl std::fmt::Debug for KickPropagator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KickPropagator")
            .field("params", &self.params)
            .field("options", &self.options)
            .field("substeps", &self.substeps)
            .finish_non_exhaustive()
    }
}

impl KickPropagator {
    pub fn new(params: &DimensionlessParams, options: PropagatorOptions) -> Result<Self> {
        params.validate()?;
        check_grid_size(options.grid_size)?;
        let substeps = options.substeps.unwrap_or_else(|| default_substeps(params.kappa));
        if substeps == 0 {
            return Err(Error::invalid("substeps", "at least one substep per pulse is required"));
        }
        if !(options.leak_tolerance > 0.0) {
            return Err(Error::invalid("leak_tol", "leak tolerance must be positive"));
        }
        let n = options.grid_size;
        let mut planner = FftPlanner::new();
        let to_position = planner.plan_fft_inverse(n);
        let to_momentum = planner.plan_fft_forward(n);
        let scratch_len = to_position
            .get_inplace_scratch_len()
            .max(to_momentum.get_inplace_scratch_len());

        let dt = params.alpha / substeps as f64;
        let kick_phase = params.kick_strength() * dt / params.kbar;
        let decay_rate = params.eta / params.alpha;
        let inv_n = 1.0 / n as f64;
        let potential = (0..n)
            .map(|j| {
                let phi = 2.0 * PI * j as f64 / n as f64;
                let cos_half_sq = 0.5 * (1.0 + phi.cos());
                let amplitude = (-decay_rate * cos_half_sq * dt).exp() * inv_n;
                Complex64::from_polar(amplitude, kick_phase * phi.cos())
            })
            .collect();

        Ok(Self {
            params: *params,
            options,
            substeps,
            dt,
            to_position,
            to_momentum,
            fft_scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
            potential,
            kinetic: None,
        })
    }

    pub fn params(&self) -> &DimensionlessParams {
        &self.params
    }

    pub fn substeps(&self) -> usize {
        self.substeps
    }

    pub fn options(&self) -> &PropagatorOptions {
        &self.options
    }

    fn apply_kinetic(&mut self, state: &mut QuantumState, which: Kinetic) {
        let grid = KineticGrid {
            grid_size: self.options.grid_size,
            kbar: self.params.kbar,
            dt: self.dt,
            dark: 1.0 - self.params.alpha,
        };
        let tables = grid.tables(&mut self.kinetic, state.beta());
        let table = match which {
            Kinetic::Half => &tables.half,
            Kinetic::Full => &tables.full,
            Kinetic::Free => &tables.free,
        };
        for (c, f) in state.amplitudes_mut().iter_mut().zip(table) {
            *c *= f;
        }
    }

    fn apply_potential(&mut self, state: &mut QuantumState) {
        let buf = state.amplitudes_mut();
        self.to_position.process_with_scratch(buf, &mut self.fft_scratch);
        for (c, v) in buf.iter_mut().zip(&self.potential) {
            *c *= v;
        }
        self.to_momentum.process_with_scratch(buf, &mut self.fft_scratch);
    }

    /// Evolves `state` through one pulse of duration `alpha`.
    ///
    /// With `eta > 0` the returned state is normalized and the clock threshold
    /// rescaled accordingly. With `eta = 0` the evolution is unitary and the
    /// norm is only refreshed, never forced back to one.
    pub fn pulse_step<R: Rng + ?Sized>(
        &mut self,
        state: &mut QuantumState,
        clock: &mut JumpClock,
        rng: &mut R,
        kick_index: usize,
    ) -> Result<Vec<JumpEvent>> {
        if state.grid_size() != self.options.grid_size {
            return Err(Error::invalid("grid", "state and propagator grid sizes differ"));
        }
        let decohering = self.params.eta > 0.0;
        let mut events = Vec::new();
        self.apply_kinetic(state, Kinetic::Half);
        for s in 0..self.substeps {
            let last = s + 1 == self.substeps;
            self.apply_potential(state);
            if decohering && state.refresh_norm() < clock.threshold {
                self.apply_kinetic(state, Kinetic::Half);
                let u = self.options.recoil.sample(rng);
                let shift = state.apply_jump(u)?;
                events.push(JumpEvent {
                    kick_index,
                    time_in_pulse: (s + 1) as f64 * self.dt,
                    recoil_u: u,
                    absorption_branch_shift: shift,
                });
                clock.redraw(rng);
                if !last {
                    self.apply_kinetic(state, Kinetic::Half);
                }
                continue;
            }
            self.apply_kinetic(state, if last { Kinetic::Half } else { Kinetic::Full });
        }
        let norm = state.refresh_norm();
        if decohering {
            clock.threshold /= norm;
            state.renormalize()?;
        }
        Ok(events)
    }

    /// Kinetic evolution over the dark part of the period, `1 - alpha`.
    pub fn free_flight(&mut self, state: &mut QuantumState) {
        self.apply_kinetic(state, Kinetic::Free);
    }

    /// One full period: pulse, free flight, then the grid-leak check.
    pub fn kick<R: Rng + ?Sized>(
        &mut self,
        state: &mut QuantumState,
        clock: &mut JumpClock,
        rng: &mut R,
        kick_index: usize,
    ) -> Result<Vec<JumpEvent>> {
        let events = self.pulse_step(state, clock, rng, kick_index)?;
        self.free_flight(state);
        state.check_leak(self.options.leak_tolerance).map_err(|e| match e {
            Error::GridOverflow {
                edge_weight, tolerance, ..
            } => Error::GridOverflow {
                edge_weight,
                tolerance,
                trajectory: None,
                kick: Some(kick_index),
            },
            other => other,
        })?;
        Ok(events)
    }
}

struct KineticGrid {
    grid_size: usize,
    kbar: f64,
    dt: f64,
    dark: f64,
}

impl KineticGrid {
    /// Phase tables for quasimomentum `beta`, rebuilt only when `beta` changes.
    fn tables<'a>(&self, cache: &'a mut Option<KineticTables>, beta: f64) -> &'a KineticTables {
        if cache.as_ref().is_none_or(|t| t.beta != beta) {
            let n = self.grid_size;
            let mut half = Vec::with_capacity(n);
            let mut full = Vec::with_capacity(n);
            let mut free = Vec::with_capacity(n);
            for i in 0..n {
                let q = ladder_index(i, n) as f64 + beta;
                let rate = -0.5 * self.kbar * q * q;
                half.push(Complex64::from_polar(1.0, rate * 0.5 * self.dt));
                full.push(Complex64::from_polar(1.0, rate * self.dt));
                free.push(Complex64::from_polar(1.0, rate * self.dark));
            }
            *cache = Some(KineticTables { beta, half, full, free });
        }
        cache.as_ref().expect("populated above")
    }
}

#[derive(Clone, Copy)]
enum Kinetic {
    Half,
    Full,
    Free,
}
