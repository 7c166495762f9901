// Copyright 2026 The kicked-rotor Authors
// SPDX-License-Identifier: Apache-2.0

//! Physical and dimensionless parameter sets.
//!
//! The dynamics are written in scaled units where the kicked-rotor Hamiltonian
//! reads `H' = rho^2/2 - k cos(phi) sum_n f(t' - n)` with `[phi, rho] = i kbar`.
//! [`PhysicalParams`] is a front end that maps laboratory quantities onto
//! [`DimensionlessParams`].

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative populations entering the effective potential strength for the
/// `F=4 -> F'=5,4,3` transitions with all Zeeman sublevels equally populated.
pub const SUBLEVEL_WEIGHTS: (f64, f64, f64) = (11.0 / 27.0, 7.0 / 36.0, 7.0 / 108.0);

/// Default initial momentum width in units of `kbar`.
pub const DEFAULT_SIGMA_RHO_OVER_KBAR: f64 = 4.0;

/// Default pulse fraction `tau_p / T`.
pub const DEFAULT_ALPHA: f64 = 0.005;

pub fn sublevel_weights() -> (f64, f64, f64) {
    SUBLEVEL_WEIGHTS
}

/// Laboratory parameters, all angular frequencies in rad/s and times in s.
///
/// Detunings are signed. The kick sign used throughout the crate needs a
/// positive stochasticity parameter, so red/blue conventions that produce a
/// negative effective potential are rejected by [`to_dimensionless`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// `Omega`, where `Omega/2` is the single-beam resonant Rabi frequency.
    pub rabi_frequency: f64,
    pub detuning_45: f64,
    pub detuning_44: f64,
    pub detuning_43: f64,
    pub pulse_period: f64,
    pub pulse_length: f64,
    /// `omega_R = hbar k_l^2 / 2m`.
    pub recoil_frequency: f64,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        for (name, d) in [
            ("detuning_45", self.detuning_45),
            ("detuning_44", self.detuning_44),
            ("detuning_43", self.detuning_43),
        ] {
            if d == 0.0 || !d.is_finite() {
                return Err(Error::invalid(name, format!("must be finite and nonzero, got {d}")));
            }
        }
        if !self.rabi_frequency.is_finite() {
            return Err(Error::invalid("rabi_frequency", "must be finite"));
        }
        if !(self.pulse_length > 0.0 && self.pulse_length.is_finite()) {
            return Err(Error::invalid("pulse_length", "must be positive"));
        }
        if !(self.pulse_period > self.pulse_length && self.pulse_period.is_finite()) {
            return Err(Error::invalid("pulse_period", "must exceed the pulse length"));
        }
        if !(self.recoil_frequency > 0.0 && self.recoil_frequency.is_finite()) {
            return Err(Error::invalid("recoil_frequency", "must be positive"));
        }
        Ok(())
    }
}

/// `Omega_eff = Omega^2 (s45/d45 + s44/d44 + s43/d43)`.
pub fn effective_potential_strength(p: &PhysicalParams) -> Result<f64> {
    for (name, d) in [
        ("detuning_45", p.detuning_45),
        ("detuning_44", p.detuning_44),
        ("detuning_43", p.detuning_43),
    ] {
        if d == 0.0 {
            return Err(Error::invalid(name, "detuning must be nonzero"));
        }
    }
    let (s45, s44, s43) = SUBLEVEL_WEIGHTS;
    let omega_sq = p.rabi_frequency * p.rabi_frequency;
    Ok(omega_sq * (s45 / p.detuning_45 + s44 / p.detuning_44 + s43 / p.detuning_43))
}

/// Maps laboratory parameters to scaled units:
/// `kappa = Omega_eff omega_R T tau_p`, `kbar = 8 omega_R T`, `alpha = tau_p / T`.
///
/// The initial momentum width is set to the default of `4 kbar`.
pub fn to_dimensionless(p: &PhysicalParams, eta: f64) -> Result<DimensionlessParams> {
    p.validate()?;
    let omega_eff = effective_potential_strength(p)?;
    let kappa = omega_eff * p.recoil_frequency * p.pulse_period * p.pulse_length;
    if kappa < 0.0 {
        return Err(Error::invalid(
            "kappa",
            format!("effective potential is negative ({kappa}); check the detuning sign convention"),
        ));
    }
    DimensionlessParams::new(
        kappa,
        8.0 * p.recoil_frequency * p.pulse_period,
        p.pulse_length / p.pulse_period,
        eta,
        DEFAULT_SIGMA_RHO_OVER_KBAR,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseShape {
    Square,
}

/// Pulse envelope `f(t')` within one unit kick period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseProfile {
    pub shape: PulseShape,
    pub alpha: f64,
}

impl PulseProfile {
    pub fn square(alpha: f64) -> Self {
        Self {
            shape: PulseShape::Square,
            alpha,
        }
    }

    /// Envelope at scaled time `t`, periodic with unit period.
    pub fn value(&self, t: f64) -> f64 {
        let phase = t.rem_euclid(1.0);
        match self.shape {
            PulseShape::Square => {
                if phase > 0.0 && phase < self.alpha {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// Scaled kicked-rotor parameters driving every simulation in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessParams {
    /// Stochasticity parameter `kappa`.
    pub kappa: f64,
    /// Effective Planck constant.
    pub kbar: f64,
    /// Pulse fraction `tau_p / T`.
    pub alpha: f64,
    /// Spontaneous-emission probability per kick.
    pub eta: f64,
    pub sigma_rho_over_kbar: f64,
}

impl DimensionlessParams {
    pub fn new(kappa: f64, kbar: f64, alpha: f64, eta: f64, sigma_rho_over_kbar: f64) -> Result<Self> {
        let p = Self {
            kappa,
            kbar,
            alpha,
            eta,
            sigma_rho_over_kbar,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            return Err(Error::invalid(
                "kappa",
                format!("must be finite and >= 0, got {}", self.kappa),
            ));
        }
        if !(self.kbar > 0.0 && self.kbar.is_finite()) {
            return Err(Error::invalid(
                "kbar",
                format!("must be finite and > 0, got {}", self.kbar),
            ));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::invalid(
                "alpha",
                format!("must lie in (0, 1), got {}", self.alpha),
            ));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::invalid("eta", format!("must lie in [0, 1], got {}", self.eta)));
        }
        if !(self.sigma_rho_over_kbar >= 0.0 && self.sigma_rho_over_kbar.is_finite()) {
            return Err(Error::invalid(
                "sigma_rho",
                format!("must be finite and >= 0, got {}", self.sigma_rho_over_kbar),
            ));
        }
        if !self.kick_strength().is_finite() {
            return Err(Error::invalid("alpha", "kick strength kappa/alpha is not finite"));
        }
        Ok(())
    }

    /// Potential strength during a pulse, `k = kappa / alpha`.
    pub fn kick_strength(&self) -> f64 {
        self.kappa / self.alpha
    }

    /// Initial momentum standard deviation in scaled units.
    pub fn sigma_rho(&self) -> f64 {
        self.sigma_rho_over_kbar * self.kbar
    }

    pub fn pulse(&self) -> PulseProfile {
        PulseProfile::square(self.alpha)
    }

    pub fn with_kbar(mut self, kbar: f64) -> Result<Self> {
        self.kbar = kbar;
        self.validate()?;
        Ok(self)
    }

    pub fn with_kappa(mut self, kappa: f64) -> Result<Self> {
        self.kappa = kappa;
        self.validate()?;
        Ok(self)
    }

    pub fn with_eta(mut self, eta: f64) -> Result<Self> {
        self.eta = eta;
        self.validate()?;
        Ok(self)
    }
}
