// Copyright 2026 The kicked-rotor Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::closed_form::dinf_weighted;
use crate::params::DimensionlessParams;
use crate::{Error, Result};

/// Ensemble means of `rho^2` at the stroboscopic times `t' = 0, 1, ..., N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KickSeries {
    pub mean_rho_sq: Vec<f64>,
    /// `group_means[g][n]`: mean over the `g`-th equal block of trajectories.
    pub group_means: Vec<Vec<f64>>,
    pub n_trajectories: usize,
    pub params: DimensionlessParams,
    /// Emission count per trajectory (empty for classical ensembles).
    #[serde(default)]
    pub jump_counts: Vec<u64>,
}

/// A diffusion rate with its group-based standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffusionEstimate {
    pub value: f64,
    pub stderr: f64,
    pub first_kick: usize,
    pub last_kick: usize,
}

impl KickSeries {
    /// Aggregates per-trajectory `rho^2` histories in trajectory order.
    ///
    /// Block means are reduced sequentially in trajectory order, so the result
    /// depends only on the inputs, not on how they were computed.
    pub fn from_samples(
        samples: &[Vec<f64>],
        n_groups: usize,
        params: DimensionlessParams,
        jump_counts: Vec<u64>,
    ) -> Result<Self> {
        let n_traj = samples.len();
        if n_groups < 2 {
            return Err(Error::invalid(
                "groups",
                "at least two groups are needed for error bars",
            ));
        }
        if n_traj == 0 || !n_traj.is_multiple_of(n_groups) {
            return Err(Error::invalid(
                "trajectories",
                format!("{n_traj} trajectories cannot be split into {n_groups} equal groups"),
            ));
        }
        let len = samples[0].len();
        if samples.iter().any(|s| s.len() != len) {
            return Err(Error::invalid("samples", "trajectory histories have unequal lengths"));
        }
        let per_group = n_traj / n_groups;
        let block_mean = |block: &[Vec<f64>]| -> Vec<f64> {
            let mut acc = vec![0.0; len];
            for s in block {
                for (a, v) in acc.iter_mut().zip(s) {
                    *a += v;
                }
            }
            acc.iter_mut().for_each(|a| *a /= block.len() as f64);
            acc
        };
        let group_means: Vec<Vec<f64>> = samples.chunks(per_group).map(block_mean).collect();
        Self::from_group_means(group_means, n_traj, params, jump_counts)
    }

    /// Builds a series from equal-size block means; the grand mean is their average.
    pub fn from_group_means(
        group_means: Vec<Vec<f64>>,
        n_trajectories: usize,
        params: DimensionlessParams,
        jump_counts: Vec<u64>,
    ) -> Result<Self> {
        if group_means.len() < 2 {
            return Err(Error::invalid(
                "groups",
                "at least two groups are needed for error bars",
            ));
        }
        let len = group_means[0].len();
        if group_means.iter().any(|g| g.len() != len) {
            return Err(Error::invalid("samples", "group histories have unequal lengths"));
        }
        let mut mean_rho_sq = vec![0.0; len];
        for g in &group_means {
            for (a, v) in mean_rho_sq.iter_mut().zip(g) {
                *a += v;
            }
        }
        let count = group_means.len() as f64;
        mean_rho_sq.iter_mut().for_each(|a| *a /= count);
        Ok(Self {
            mean_rho_sq,
            group_means,
            n_trajectories,
            params,
            jump_counts,
        })
    }

    /// Index of the last recorded time, `N`.
    pub fn last_time(&self) -> usize {
        self.mean_rho_sq.len().saturating_sub(1)
    }

    pub fn n_groups(&self) -> usize {
        self.group_means.len()
    }

    /// Applies a linear functional to the grand mean and to every group.
    fn estimate(&self, first: usize, last: usize, f: impl Fn(&[f64]) -> f64) -> DiffusionEstimate {
        let value = f(&self.mean_rho_sq);
        let per_group: Vec<f64> = self.group_means.iter().map(|g| f(g)).collect();
        DiffusionEstimate {
            value,
            stderr: standard_error(&per_group),
            first_kick: first,
            last_kick: last,
        }
    }

    /// Mean jumps per kick and its standard error across trajectories.
    pub fn jumps_per_kick(&self) -> Option<(f64, f64)> {
        if self.jump_counts.is_empty() || self.last_time() == 0 {
            return None;
        }
        let kicks = self.last_time() as f64;
        let rates: Vec<f64> = self.jump_counts.iter().map(|&c| c as f64 / kicks).collect();
        let mean = rates.iter().sum::<f64>() / rates.len() as f64;
        Some((mean, standard_error(&rates)))
    }
}

/// Standard error of the mean of `values` (sample standard deviation / sqrt n).
pub fn standard_error(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (var / n as f64).sqrt()
}

/// `D(n) = (<rho^2_{n+1}> - <rho^2_n>) / 2`.
pub fn diffusion_rate(series: &KickSeries, n: usize) -> Result<DiffusionEstimate> {
    averaged_rate(series, n, n)
}

/// Average of `D(first..=last)`, which telescopes to
/// `(<rho^2_{last+1}> - <rho^2_first>) / (2 (last - first + 1))`.
pub fn averaged_rate(series: &KickSeries, first: usize, last: usize) -> Result<DiffusionEstimate> {
    if first > last {
        return Err(Error::OutOfRange(format!("empty kick window {first}..={last}")));
    }
    if last + 1 > series.last_time() {
        return Err(Error::OutOfRange(format!(
            "kick window {first}..={last} needs rho^2 at t'={} but the series ends at t'={}",
            last + 1,
            series.last_time()
        )));
    }
    let width = 2.0 * (last - first + 1) as f64;
    Ok(series.estimate(first, last, |m| (m[last + 1] - m[first]) / width))
}

/// Every per-kick rate `D(0), ..., D(N-1)`.
pub fn per_kick_rates(series: &KickSeries) -> Vec<DiffusionEstimate> {
    (0..series.last_time())
        .map(|n| diffusion_rate(series, n).expect("n < last_time"))
        .collect()
}

/// Late-time rate predicted from a decoherence-free series via
/// [`dinf_weighted`], with group errors propagated through the same weights.
pub fn dinf_from_series(eta: f64, d0_series: &KickSeries) -> Result<DiffusionEstimate> {
    let n = d0_series.last_time();
    if n == 0 {
        return Err(Error::invalid("d0", "no-decoherence rate series is empty"));
    }
    let rates = |m: &[f64]| -> Vec<f64> { (0..n).map(|k| 0.5 * (m[k + 1] - m[k])).collect() };
    let value = dinf_weighted(eta, &rates(&d0_series.mean_rho_sq))?;
    let per_group = d0_series
        .group_means
        .iter()
        .map(|g| dinf_weighted(eta, &rates(g)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiffusionEstimate {
        value,
        stderr: standard_error(&per_group),
        first_kick: 0,
        last_kick: n - 1,
    })
}
