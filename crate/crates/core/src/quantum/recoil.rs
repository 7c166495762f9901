// Copyright 2026 The kicked-rotor Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

/// Distribution `N(u)` of the emitted photon's recoil projected on the
/// standing-wave axis, in units of the single-photon recoil.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoilDistribution {
    /// `3/8 (1 + u^2)`: dipole transverse to the standing-wave axis.
    #[default]
    DipolePerpendicular,
    /// `3/4 (1 - u^2)`: dipole along the standing-wave axis.
    DipoleParallel,
    /// `1/2`.
    Uniform,
}

impl RecoilDistribution {
    pub fn density(&self, u: f64) -> f64 {
        if !(-1.0..=1.0).contains(&u) {
            return 0.0;
        }
        match self {
            Self::DipolePerpendicular => 0.375 * (1.0 + u * u),
            Self::DipoleParallel => 0.75 * (1.0 - u * u),
            Self::Uniform => 0.5,
        }
    }

    /// Second moment `<u^2>` (the mean is zero).
    pub fn variance(&self) -> f64 {
        match self {
            Self::DipolePerpendicular => 0.4,
            Self::DipoleParallel => 0.2,
            Self::Uniform => 1.0 / 3.0,
        }
    }

    /// Inverse CDF at `r` in `[0, 1]`.
    pub fn quantile(&self, r: f64) -> f64 {
        let u = match self {
            // CDF (u^3 + 3u + 4)/8: single real root of u^3 + 3u + (4 - 8r) = 0
            Self::DipolePerpendicular => {
                let half_q = 2.0 - 4.0 * r;
                let disc = (half_q * half_q + 1.0).sqrt();
                (-half_q + disc).cbrt() + (-half_q - disc).cbrt()
            }
            // CDF (3u - u^3 + 2)/4: root of u^3 - 3u = 2 - 4r lying in [-1, 1]
            Self::DipoleParallel => {
                let c = (1.0 - 2.0 * r).clamp(-1.0, 1.0);
                2.0 * ((c.acos() + 4.0 * PI) / 3.0).cos()
            }
            Self::Uniform => 2.0 * r - 1.0,
        };
        u.clamp(-1.0, 1.0)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random::<f64>())
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::DipolePerpendicular => "dipole_perpendicular",
            Self::DipoleParallel => "dipole_parallel",
            Self::Uniform => "uniform",
        }
    }
}

impl fmt::Display for RecoilDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RecoilDistribution {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dipole_perpendicular" => Ok(Self::DipolePerpendicular),
            "dipole_parallel" => Ok(Self::DipoleParallel),
            "uniform" => Ok(Self::Uniform),
            other => Err(format!(
                "unknown recoil distribution `{other}` (expected dipole_perpendicular, dipole_parallel or uniform)"
            )),
        }
    }
}
