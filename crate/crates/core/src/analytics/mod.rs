// Copyright 2026 The kicked-rotor Authors
// SPDX-License-Identifier: Apache-2.0

//! Diffusion-rate estimators and closed-form rates.
//!
//! Every rate is reported as `D`, where `2 D(n) = <rho^2_{n+1}> - <rho^2_n>`.
//! Negative estimates are kept as they are.

mod bessel;
mod closed_form;
mod curve;
mod series;

pub use bessel::bessel_j;
pub use closed_form::{
    break_time, d1_analytic, dinf_exponential_model, dinf_weighted, dinf_weights, dq_shepelyansky, k_2q, k_q,
    quasilinear,
};
pub use curve::{ClassicalReference, CurveMetadata, CurvePoint, CurveRate, DiffusionCurve, RateKind};
pub use series::{
    averaged_rate, diffusion_rate, dinf_from_series, per_kick_rates, standard_error, DiffusionEstimate, KickSeries,
};
