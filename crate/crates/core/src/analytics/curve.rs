// Copyright 2026 The kicked-rotor Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::{Deserialize, Serialize};

use super::series::DiffusionEstimate;
use crate::quantum::RecoilDistribution;
use crate::{Error, Result};

/// Which diffusion estimate a curve row carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateKind {
    /// Quasilinear window, `D(0..=1)` by default.
    Early,
    /// Initial quantum diffusion window, `D(2..=5)` by default.
    Initial,
    /// Late-time window, `D(30..=60)` by default.
    Late,
    /// A single kick, `D(n)`.
    PerKick,
}

impl RateKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Early => "early",
            Self::Initial => "initial",
            Self::Late => "late",
            Self::PerKick => "per_kick",
        }
    }
}

impl fmt::Display for RateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Classical comparison value for the same window, with and without the
/// spontaneous-emission recoil noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalReference {
    pub with_noise: DiffusionEstimate,
    pub without_noise: DiffusionEstimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRate {
    pub kind: RateKind,
    pub estimate: DiffusionEstimate,
    pub classical: Option<ClassicalReference>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub kbar: f64,
    pub rates: Vec<CurveRate>,
}

impl CurvePoint {
    pub fn rate(&self, kind: RateKind) -> Option<&CurveRate> {
        self.rates.iter().find(|r| r.kind == kind)
    }
}

/// Everything needed to regenerate a curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveMetadata {
    pub kappa: f64,
    pub eta: f64,
    pub alpha: f64,
    pub sigma_rho_over_kbar: f64,
    pub mode: String,
    pub n_kicks: usize,
    pub n_trajectories: usize,
    pub n_groups: usize,
    pub grid_size: usize,
    pub substeps: Option<usize>,
    pub leak_tolerance: f64,
    pub recoil: RecoilDistribution,
    pub seed: u64,
    pub classical_particles: usize,
    pub classical_substeps: usize,
    /// Whether `classical_D` in tabular output includes recoil noise.
    pub classical_noise: bool,
    pub code_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffusionCurve {
    pub metadata: CurveMetadata,
    pub points: Vec<CurvePoint>,
}

impl DiffusionCurve {
    pub fn validate(&self) -> Result<()> {
        for pair in self.points.windows(2) {
            if !(pair[1].kbar > pair[0].kbar) {
                return Err(Error::invalid(
                    "kbar",
                    format!(
                        "curve kbar values must increase strictly ({} then {})",
                        pair[0].kbar, pair[1].kbar
                    ),
                ));
            }
        }
        Ok(())
    }

    /// `(kbar, estimate)` pairs for one rate kind (first match per point).
    pub fn series(&self, kind: RateKind) -> Vec<(f64, DiffusionEstimate)> {
        self.points
            .iter()
            .filter_map(|p| p.rate(kind).map(|r| (p.kbar, r.estimate)))
            .collect()
    }
}
