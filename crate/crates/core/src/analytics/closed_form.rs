// Copyright 2026 The kicked-rotor Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form diffusion rates. All functions return `D`, never `2D`.

use super::bessel::bessel_j;
use crate::{Error, Result};

/// Quantum-corrected kick strength `K_q = 2 kappa sin(kbar/2) / kbar`.
pub fn k_q(kappa: f64, kbar: f64) -> f64 {
    2.0 * kappa * (0.5 * kbar).sin() / kbar
}

/// `K_2q = 2 kappa sin(kbar) / kbar`.
pub fn k_2q(kappa: f64, kbar: f64) -> f64 {
    2.0 * kappa * kbar.sin() / kbar
}

/// Quasilinear rate `kappa^2 / 4` for a uniform initial position distribution.
pub fn quasilinear(kappa: f64) -> f64 {
    0.25 * kappa * kappa
}

/// Second-kick rate `D(1)` for a Gaussian initial momentum distribution of
/// standard deviation `sigma_rho` (scaled units) and uniform positions.
pub fn d1_analytic(kappa: f64, kbar: f64, sigma_rho: f64) -> f64 {
    let kq = k_q(kappa, kbar);
    let k2q = k_2q(kappa, kbar);
    let s2 = sigma_rho * sigma_rho;
    let damp = (-0.5 * s2).exp();
    let two_d = 0.5 * kappa * kappa * (1.0 - bessel_j(2, k2q) * (-2.0 * s2).exp())
        - 2.0 * kappa * bessel_j(1, kq) * s2 * damp
        + kappa * kappa * (bessel_j(0, kq) - bessel_j(2, kq)) * (0.5 * kbar).cos() * damp;
    0.5 * two_d
}

/// Initial quantum diffusion rate
/// `D_q = (kappa^2/2)(1/2 - J2 - J1^2 + J2^2 + J3^2)` evaluated at `K_q`.
pub fn dq_shepelyansky(kappa: f64, kbar: f64) -> f64 {
    let kq = k_q(kappa, kbar);
    let (j1, j2, j3) = (bessel_j(1, kq), bessel_j(2, kq), bessel_j(3, kq));
    0.5 * kappa * kappa * (0.5 - j2 - j1 * j1 + j2 * j2 + j3 * j3)
}

/// Late-time rate from no-decoherence rates `D_0(n)`, `n = 0..N-1`:
/// `sum_n eta (1-eta)^n D_0(n)` plus the tail `(1-eta)^N D_0(N-1)`.
pub fn dinf_weighted(eta: f64, d0: &[f64]) -> Result<f64> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::invalid("eta", format!("must lie in (0, 1], got {eta}")));
    }
    let last = *d0
        .last()
        .ok_or_else(|| Error::invalid("d0", "no-decoherence rate series is empty"))?;
    let (sum, survival) = geometric_sum(eta, d0);
    Ok(sum + survival * last)
}

/// Weights used by [`dinf_weighted`] for a series of length `len`, tail last.
pub fn dinf_weights(eta: f64, len: usize) -> Vec<f64> {
    let mut weights = Vec::with_capacity(len + 1);
    let mut survival = 1.0;
    for _ in 0..len {
        weights.push(eta * survival);
        survival *= 1.0 - eta;
    }
    weights.push(survival);
    weights
}

fn geometric_sum(eta: f64, d0: &[f64]) -> (f64, f64) {
    let mut survival = 1.0;
    let mut sum = 0.0;
    for d in d0 {
        sum += eta * survival * d;
        survival *= 1.0 - eta;
    }
    (sum, survival)
}

/// Break time `n_b = 2 D_q / kbar^2` assumed by [`dinf_exponential_model`].
pub fn break_time(kappa: f64, kbar: f64) -> f64 {
    2.0 * dq_shepelyansky(kappa, kbar) / (kbar * kbar)
}

/// Closed-form late-time rate for an assumed no-decoherence history:
/// `D_0(0) = D_0(1) = kappa^2/4` and `D_0(n) = D_q exp(-(n-2)/n_b)` for
/// `n >= 2`, with `n_b` from [`break_time`]. This is a model, not a fit.
pub fn dinf_exponential_model(kappa: f64, kbar: f64, eta: f64) -> Result<f64> {
    if !(kbar > 0.0) {
        return Err(Error::invalid("kbar", "must be positive"));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::invalid("eta", format!("must lie in (0, 1], got {eta}")));
    }
    Ok(exponential_history_sum(
        kappa,
        eta,
        dq_shepelyansky(kappa, kbar),
        break_time(kappa, kbar),
    ))
}

fn exponential_history_sum(kappa: f64, eta: f64, dq: f64, nb: f64) -> f64 {
    let decay = if nb > 0.0 { (-1.0 / nb).exp() } else { 0.0 };
    let early = eta * (2.0 - eta) * quasilinear(kappa);
    let late = eta * (1.0 - eta).powi(2) * dq / (1.0 - (1.0 - eta) * decay);
    early + late
}
