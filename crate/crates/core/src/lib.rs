// Copyright 2026 The kicked-rotor Authors
// SPDX-License-Identifier: Apache-2.0

//! Momentum diffusion in the atom-optics kicked rotor with spontaneous-emission
//! decoherence.
//!
//! The crate evolves quantum trajectories of a pulse-kicked rotor on a
//! quasimomentum ladder, runs reproducible parallel ensembles of them, and turns
//! the resulting kinetic-energy series into diffusion rates. Closed-form
//! diffusion estimates and a classical comparator are provided alongside.
//!
//! Module map:
//!
//! * [`params`]: physical and dimensionless parameter sets.
//! * [`quantum`]: ladder wavefunctions, the split-step pulse propagator and
//!   spontaneous-emission jumps.
//! * [`classical`]: the finite-pulse classical rotor.
//! * [`analytics`]: diffusion-rate estimators and closed-form rates.
//! * [`ensemble`]: seeded trajectory ensembles and `kbar` sweeps.
//! * [`cli_io`]: configuration parsing, serialization and figure recipes.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod classical;
pub mod cli_io;
pub mod ensemble;
mod error;
pub mod params;
pub mod quantum;

pub use error::{Error, Result};
