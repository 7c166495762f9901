// Copyright 2026 The kicked-rotor Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;

use crate::{Error, Result};

/// Default tolerance on the probability found in the outer band of the ladder.
pub const DEFAULT_LEAK_TOLERANCE: f64 = 1e-8;

/// A wavefunction on the momentum ladder `rho_m = (m + beta) kbar`.
///
/// Amplitudes are stored in discrete-Fourier order: slot `i` holds ladder index
/// `m = i` for `i < N/2` and `m = i - N` otherwise, so `m` ranges over
/// `[-N/2, N/2)`. A forward FFT of the slots samples the periodic part of the
/// wavefunction on `phi_j = 2 pi j / N`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: Vec<Complex64>,
    beta: f64,
    norm_sq: f64,
}

pub(crate) fn check_grid_size(grid_size: usize) -> Result<()> {
    if grid_size < 32 || !grid_size.is_power_of_two() {
        return Err(Error::invalid(
            "grid",
            format!("grid size must be a power of two >= 32, got {grid_size}"),
        ));
    }
    Ok(())
}

impl QuantumState {
    /// Plane wave with momentum `rho0`, split into ladder index and quasimomentum.
    pub fn momentum_eigenstate(rho0: f64, kbar: f64, grid_size: usize) -> Result<Self> {
        check_grid_size(grid_size)?;
        if !(kbar > 0.0) {
            return Err(Error::invalid("kbar", "must be positive"));
        }
        let scaled = rho0 / kbar;
        if !scaled.is_finite() {
            return Err(Error::invalid("rho0", "momentum must be finite"));
        }
        let mut index = scaled.floor();
        let mut beta = scaled - index;
        if beta >= 1.0 {
            beta -= 1.0;
            index += 1.0;
        }
        let half = (grid_size / 2) as f64;
        if index < -half || index >= half {
            return Err(Error::invalid(
                "rho0",
                format!("momentum {rho0} lies outside the {grid_size}-state ladder"),
            ));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); grid_size];
        amplitudes[slot(index as i64, grid_size)] = Complex64::new(1.0, 0.0);
        Ok(Self {
            amplitudes,
            beta,
            norm_sq: 1.0,
        })
    }

    /// Builds a state from `(m, amplitude)` pairs; the result is normalized.
    pub fn from_components(components: &[(i64, Complex64)], beta: f64, grid_size: usize) -> Result<Self> {
        check_grid_size(grid_size)?;
        if !(0.0..1.0).contains(&beta) {
            return Err(Error::invalid("beta", format!("must lie in [0, 1), got {beta}")));
        }
        let half = (grid_size / 2) as i64;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); grid_size];
        for &(m, c) in components {
            if m < -half || m >= half {
                return Err(Error::invalid("m", format!("ladder index {m} outside the grid")));
            }
            amplitudes[slot(m, grid_size)] += c;
        }
        let mut state = Self {
            amplitudes,
            beta,
            norm_sq: 0.0,
        };
        state.refresh_norm();
        state.renormalize()?;
        Ok(state)
    }

    pub fn grid_size(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Cached squared norm; refreshed by every operation that changes it.
    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    pub fn amplitude(&self, m: i64) -> Complex64 {
        let half = (self.grid_size() / 2) as i64;
        if m < -half || m >= half {
            return Complex64::new(0.0, 0.0);
        }
        self.amplitudes[slot(m, self.grid_size())]
    }

    /// Iterator over `(m, amplitude)` in storage order.
    pub fn components(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n = self.grid_size();
        self.amplitudes
            .iter()
            .enumerate()
            .map(move |(i, c)| (ladder_index(i, n), *c))
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub(crate) fn refresh_norm(&mut self) -> f64 {
        self.norm_sq = self.amplitudes.iter().map(|c| c.norm_sqr()).sum();
        self.norm_sq
    }

    pub fn renormalize(&mut self) -> Result<()> {
        let n = self.refresh_norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Degenerate(format!(
                "cannot normalize a state with squared norm {n}"
            )));
        }
        let scale = 1.0 / n.sqrt();
        for c in &mut self.amplitudes {
            *c *= scale;
        }
        self.norm_sq = 1.0;
        Ok(())
    }

    /// Multiplies component `m` by `exp(-i rho_m^2 duration / (2 kbar))`.
    pub fn free_evolve(&mut self, duration: f64, kbar: f64) {
        if duration == 0.0 {
            return;
        }
        let n = self.grid_size();
        let beta = self.beta;
        for (i, c) in self.amplitudes.iter_mut().enumerate() {
            let q = ladder_index(i, n) as f64 + beta;
            *c *= Complex64::from_polar(1.0, -0.5 * kbar * q * q * duration);
        }
    }

    /// `sum_m |c_m|^2 ((m + beta) kbar)^2` for a normalized state.
    pub fn rho_sq(&self, kbar: f64) -> f64 {
        let n = self.grid_size();
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let rho = (ladder_index(i, n) as f64 + self.beta) * kbar;
                c.norm_sqr() * rho * rho
            })
            .sum()
    }

    pub fn mean_rho(&self, kbar: f64) -> f64 {
        let n = self.grid_size();
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, c)| c.norm_sqr() * (ladder_index(i, n) as f64 + self.beta) * kbar)
            .sum()
    }

    /// Applies the emission operator `cos(phi/2) exp(i u phi/2)` and renormalizes.
    ///
    /// The two absorption branches shift the ladder by `(u+1)/2` and `(u-1)/2`,
    /// which differ by one rung, so the result sits on the single ladder
    /// `beta' = frac(beta + (u+1)/2)` with `c'_n = (c_{n-d} + c_{n-d+1}) / 2`,
    /// where `d = floor(beta + (u+1)/2)`. Returns the quasimomentum shift.
    pub fn apply_jump(&mut self, u: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&u) {
            return Err(Error::invalid(
                "u",
                format!("recoil projection must lie in [-1, 1], got {u}"),
            ));
        }
        let shifted = self.beta + 0.5 * (u + 1.0);
        let carry = shifted.floor();
        let mut new_beta = shifted - carry;
        let mut carry = carry as usize;
        if new_beta >= 1.0 {
            new_beta -= 1.0;
            carry += 1;
        }
        let n = self.grid_size();
        let old = self.amplitudes.clone();
        // slot(n - d) and slot(n - d + 1) in wrapped storage order
        for (i, c) in self.amplitudes.iter_mut().enumerate() {
            let lower = (i + n - carry % n) % n;
            let upper = (lower + 1) % n;
            *c = 0.5 * (old[lower] + old[upper]);
        }
        let shift = (new_beta - self.beta).rem_euclid(1.0);
        self.beta = new_beta;
        self.renormalize()?;
        Ok(shift)
    }

    /// Probability in the outermost 2% of ladder indices (1% at each end).
    pub fn edge_occupation(&self) -> f64 {
        let n = self.grid_size();
        let band = (n / 100).max(1);
        let half = n / 2;
        // positive end: m in [N/2 - band, N/2); negative end: m in [-N/2, -N/2 + band)
        let upper = &self.amplitudes[half - band..half];
        let lower = &self.amplitudes[half..half + band];
        let edge: f64 = upper.iter().chain(lower).map(|c| c.norm_sqr()).sum();
        edge / self.norm_sq.max(f64::MIN_POSITIVE)
    }

    pub fn check_leak(&self, tolerance: f64) -> Result<()> {
        let edge_weight = self.edge_occupation();
        if edge_weight > tolerance {
            return Err(Error::GridOverflow {
                edge_weight,
                tolerance,
                trajectory: None,
                kick: None,
            });
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn slot(m: i64, grid_size: usize) -> usize {
    m.rem_euclid(grid_size as i64) as usize
}

#[inline]
pub(crate) fn ladder_index(slot: usize, grid_size: usize) -> i64 {
    if slot < grid_size / 2 {
        slot as i64
    } else {
        slot as i64 - grid_size as i64
    }
}
