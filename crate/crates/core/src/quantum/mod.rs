// Copyright 2026 The kicked-rotor Authors
// SPDX-License-Identifier: Apache-2.0

//! Quantum trajectories of the kicked rotor with spontaneous emission.
//!
//! A trajectory is a pure state on a quasimomentum ladder. Between emissions it
//! follows the non-Hermitian kicked-rotor evolution; emissions apply
//! `cos(phi/2) exp(i u phi/2)`, which moves the state onto a new ladder.

mod propagator;
mod recoil;
mod state;

pub use propagator::{default_substeps, JumpClock, JumpEvent, KickPropagator, PropagatorOptions};
pub use recoil::RecoilDistribution;
pub use state::{QuantumState, DEFAULT_LEAK_TOLERANCE};
