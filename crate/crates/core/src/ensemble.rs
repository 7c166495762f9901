// Copyright 2026 The kicked-rotor Authors
// SPDX-License-Identifier: Apache-2.0

//! Seeded trajectory ensembles and `kbar` sweeps.
//!
//! Trajectory `i` of a run draws every random number from stream `i` of a
//! ChaCha generator keyed by the master seed. Histories are collected in
//! trajectory order and reduced sequentially, so a run is bit-for-bit
//! reproducible for any number of worker threads.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{
    averaged_rate, diffusion_rate, ClassicalReference, CurveMetadata, CurvePoint, CurveRate, DiffusionCurve,
    DiffusionEstimate, KickSeries, RateKind,
};
use crate::classical::{classical_ensemble, ClassicalConfig, DEFAULT_CLASSICAL_SUBSTEPS};
use crate::params::DimensionlessParams;
use crate::quantum::{JumpClock, KickPropagator, PropagatorOptions, QuantumState};
use crate::{Error, Result};

/// Smallest `kbar` accepted by [`sweep_kbar`].
pub const KBAR_SWEEP_MIN: f64 = 0.5;
/// Largest `kbar` accepted by [`sweep_kbar`].
pub const KBAR_SWEEP_MAX: f64 = 4.0 * PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Quantum,
    Classical,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Quantum => "quantum",
            Mode::Classical => "classical",
        }
    }
}

/// Inclusive kick window `first..=last`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KickWindow {
    pub first: usize,
    pub last: usize,
}

impl KickWindow {
    pub const fn new(first: usize, last: usize) -> Self {
        Self { first, last }
    }

    /// Kicks needed before `D(last)` is available.
    pub fn kicks_needed(&self) -> usize {
        self.last + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RateWindows {
    pub early: KickWindow,
    pub initial: KickWindow,
    pub late: KickWindow,
}

impl Default for RateWindows {
    fn default() -> Self {
        Self {
            early: KickWindow::new(0, 1),
            initial: KickWindow::new(2, 5),
            late: KickWindow::new(30, 60),
        }
    }
}

impl RateWindows {
    pub fn window(&self, kind: RateKind) -> Option<KickWindow> {
        match kind {
            RateKind::Early => Some(self.early),
            RateKind::Initial => Some(self.initial),
            RateKind::Late => Some(self.late),
            RateKind::PerKick => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub params: DimensionlessParams,
    pub n_kicks: usize,
    pub n_trajectories: usize,
    pub n_groups: usize,
    pub propagator: PropagatorOptions,
    pub master_seed: u64,
    pub mode: Mode,
    /// Particles per classical reference run; zero disables references.
    pub classical_particles: usize,
    pub classical_substeps: usize,
    /// Whether the reported classical value includes recoil noise.
    pub classical_noise: bool,
    pub windows: RateWindows,
}

impl EnsembleConfig {
    /// Defaults: 61 kicks, 1000 trajectories in 10 groups, 4096-state grid.
    pub fn new(params: DimensionlessParams, master_seed: u64) -> Self {
        Self {
            params,
            n_kicks: 61,
            n_trajectories: 1000,
            n_groups: 10,
            propagator: PropagatorOptions::default(),
            master_seed,
            mode: Mode::Quantum,
            classical_particles: 10_000,
            classical_substeps: DEFAULT_CLASSICAL_SUBSTEPS,
            classical_noise: true,
            windows: RateWindows::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.n_kicks < 2 {
            return Err(Error::invalid(
                "kicks",
                format!("at least 2 kicks are required, got {}", self.n_kicks),
            ));
        }
        if self.n_groups < 2 {
            return Err(Error::invalid("groups", "at least two groups are required"));
        }
        if self.n_trajectories == 0 || !self.n_trajectories.is_multiple_of(self.n_groups) {
            return Err(Error::invalid(
                "trajectories",
                format!(
                    "{} trajectories are not divisible into {} groups",
                    self.n_trajectories, self.n_groups
                ),
            ));
        }
        if self.classical_particles != 0
            && (self.classical_particles < 10 || !self.classical_particles.is_multiple_of(self.n_groups))
        {
            return Err(Error::invalid(
                "classical_particles",
                format!(
                    "must be 0 or a multiple of the group count that is >= 10, got {}",
                    self.classical_particles
                ),
            ));
        }
        if self.classical_substeps == 0 {
            return Err(Error::invalid("classical_substeps", "must be at least 1"));
        }
        for (name, w) in [
            ("early_window", self.windows.early),
            ("initial_window", self.windows.initial),
            ("late_window", self.windows.late),
        ] {
            if w.first > w.last {
                return Err(Error::invalid(name, format!("window {}-{} is empty", w.first, w.last)));
            }
        }
        if self.mode == Mode::Quantum {
            KickPropagator::new(&self.params, self.propagator)?;
        }
        Ok(())
    }

    pub fn with_kbar(&self, kbar: f64) -> Result<Self> {
        let mut cfg = self.clone();
        cfg.params = cfg.params.with_kbar(kbar)?;
        Ok(cfg)
    }

    fn classical_config(&self, noise_enabled: bool) -> ClassicalConfig {
        ClassicalConfig {
            params: self.params,
            n_kicks: self.n_kicks,
            n_particles: if self.mode == Mode::Classical {
                self.n_trajectories
            } else {
                self.classical_particles
            },
            n_groups: self.n_groups,
            seed: self.master_seed,
            noise_enabled,
            substeps: self.classical_substeps,
            recoil: self.propagator.recoil,
        }
    }

    pub fn metadata(&self) -> CurveMetadata {
        CurveMetadata {
            kappa: self.params.kappa,
            eta: self.params.eta,
            alpha: self.params.alpha,
            sigma_rho_over_kbar: self.params.sigma_rho_over_kbar,
            mode: self.mode.name().to_string(),
            n_kicks: self.n_kicks,
            n_trajectories: self.n_trajectories,
            n_groups: self.n_groups,
            grid_size: self.propagator.grid_size,
            substeps: self.propagator.substeps,
            leak_tolerance: self.propagator.leak_tolerance,
            recoil: self.propagator.recoil,
            seed: self.master_seed,
            classical_particles: self.classical_particles,
            classical_substeps: self.classical_substeps,
            classical_noise: self.classical_noise,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// Random stream for trajectory `index`: stream `index` of the ChaCha8
/// generator keyed by `master_seed`.
pub fn trajectory_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Draws `rho_0 ~ N(0, sigma_rho)`; the ladder decomposition of the draw fixes
/// the trajectory's quasimomentum.
pub fn sample_initial_momentum<R: Rng + ?Sized>(params: &DimensionlessParams, rng: &mut R) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    z * params.sigma_rho()
}

/// Runs `f` on a dedicated pool of `workers` threads (`None` uses the global pool).
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::invalid("workers", "worker count must be positive")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::invalid("workers", e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// One quantum trajectory: `rho^2` at `t' = 0..=n_kicks` and its jump count.
pub fn run_quantum_trajectory(
    cfg: &EnsembleConfig,
    propagator: &mut KickPropagator,
    index: usize,
) -> Result<(Vec<f64>, u64)> {
    let kbar = cfg.params.kbar;
    let mut rng = trajectory_rng(cfg.master_seed, index as u64);
    let rho0 = sample_initial_momentum(&cfg.params, &mut rng);
    let mut state = QuantumState::momentum_eigenstate(rho0, kbar, cfg.propagator.grid_size)?;
    let mut clock = JumpClock::new(&mut rng);
    let mut history = Vec::with_capacity(cfg.n_kicks + 1);
    history.push(state.rho_sq(kbar));
    let mut jumps = 0u64;
    for kick in 0..cfg.n_kicks {
        let events = propagator
            .kick(&mut state, &mut clock, &mut rng, kick)
            .map_err(|e| tag_trajectory(e, index))?;
        jumps += events.len() as u64;
        history.push(state.rho_sq(kbar) / state.norm_sq());
    }
    Ok((history, jumps))
}

fn tag_trajectory(err: Error, index: usize) -> Error {
    match err {
        Error::GridOverflow {
            edge_weight,
            tolerance,
            kick,
            ..
        } => Error::GridOverflow {
            edge_weight,
            tolerance,
            trajectory: Some(index),
            kick,
        },
        other => other,
    }
}

/// Runs the configured ensemble on the current rayon pool.
pub fn run_ensemble(cfg: &EnsembleConfig) -> Result<KickSeries> {
    cfg.validate()?;
    match cfg.mode {
        Mode::Classical => classical_ensemble(&cfg.classical_config(cfg.classical_noise)),
        Mode::Quantum => {
            let results: Vec<Result<(Vec<f64>, u64)>> = (0..cfg.n_trajectories)
                .into_par_iter()
                .map_init(
                    || KickPropagator::new(&cfg.params, cfg.propagator).expect("validated"),
                    |prop, i| run_quantum_trajectory(cfg, prop, i),
                )
                .collect();
            let mut histories = Vec::with_capacity(results.len());
            let mut jumps = Vec::with_capacity(results.len());
            for r in results {
                let (h, j) = r?;
                histories.push(h);
                jumps.push(j);
            }
            KickSeries::from_samples(&histories, cfg.n_groups, cfg.params, jumps)
        }
    }
}

/// Which estimates a sweep reports at each `kbar`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RateRequest {
    pub early: bool,
    pub initial: bool,
    pub late: bool,
    pub per_kick: bool,
}

impl RateRequest {
    pub fn only(kind: RateKind) -> Self {
        let mut r = Self::default();
        match kind {
            RateKind::Early => r.early = true,
            RateKind::Initial => r.initial = true,
            RateKind::Late => r.late = true,
            RateKind::PerKick => r.per_kick = true,
        }
        r
    }

    /// Every window that fits in `n_kicks`, plus per-kick rates.
    pub fn fitting(windows: &RateWindows, n_kicks: usize) -> Self {
        Self {
            early: windows.early.kicks_needed() <= n_kicks,
            initial: windows.initial.kicks_needed() <= n_kicks,
            late: windows.late.kicks_needed() <= n_kicks,
            per_kick: true,
        }
    }

    fn windows(&self, w: &RateWindows) -> Vec<(RateKind, KickWindow)> {
        let mut out = Vec::new();
        if self.early {
            out.push((RateKind::Early, w.early));
        }
        if self.initial {
            out.push((RateKind::Initial, w.initial));
        }
        if self.late {
            out.push((RateKind::Late, w.late));
        }
        out
    }
}

/// Estimates of the requested rates from one series, in a stable order.
pub fn rate_estimates(
    series: &KickSeries,
    windows: &RateWindows,
    request: RateRequest,
) -> Result<Vec<(RateKind, DiffusionEstimate)>> {
    let mut out = Vec::new();
    for (kind, w) in request.windows(windows) {
        out.push((kind, averaged_rate(series, w.first, w.last)?));
    }
    if request.per_kick {
        for n in 0..series.last_time() {
            out.push((RateKind::PerKick, diffusion_rate(series, n)?));
        }
    }
    Ok(out)
}

/// One ensemble per `kbar`, with `kappa`, `eta` and `alpha` held fixed.
pub fn sweep_kbar(base: &EnsembleConfig, kbar_values: &[f64], request: RateRequest) -> Result<DiffusionCurve> {
    for pair in kbar_values.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(Error::invalid("kbar", "sweep values must be strictly increasing"));
        }
    }
    if let Some(bad) = kbar_values
        .iter()
        .find(|k| !(KBAR_SWEEP_MIN..=KBAR_SWEEP_MAX + 1e-9).contains(*k))
    {
        return Err(Error::invalid(
            "kbar",
            format!("sweep value {bad} outside [{KBAR_SWEEP_MIN}, 4 pi]"),
        ));
    }
    let mut points = Vec::with_capacity(kbar_values.len());
    for &kbar in kbar_values {
        let cfg = base.with_kbar(kbar)?;
        let series = run_ensemble(&cfg)?;
        let quantum = rate_estimates(&series, &cfg.windows, request)?;
        let classical = if cfg.classical_particles > 0 && cfg.mode == Mode::Quantum {
            let noisy = classical_ensemble(&cfg.classical_config(true))?;
            let clean = classical_ensemble(&cfg.classical_config(false))?;
            let noisy = rate_estimates(&noisy, &cfg.windows, request)?;
            let clean = rate_estimates(&clean, &cfg.windows, request)?;
            noisy
                .into_iter()
                .zip(clean)
                .map(|((_, with_noise), (_, without_noise))| {
                    Some(ClassicalReference {
                        with_noise,
                        without_noise,
                    })
                })
                .collect()
        } else {
            vec![None; quantum.len()]
        };
        let rates = quantum
            .into_iter()
            .zip(classical)
            .map(|((kind, estimate), classical)| CurveRate {
                kind,
                estimate,
                classical,
            })
            .collect();
        points.push(CurvePoint { kbar, rates });
    }
    let curve = DiffusionCurve {
        metadata: base.metadata(),
        points,
    };
    curve.validate()?;
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(kbar: f64, sigma: f64) -> DimensionlessParams {
        DimensionlessParams::new(9.0, kbar, 0.005, 0.1, sigma).unwrap()
    }

    #[test]
    fn initial_momentum_width() {
        let p = params(1.7, 4.0);
        let mut rng = trajectory_rng(5, 0);
        let n = 100_000;
        let draws: Vec<f64> = (0..n).map(|_| sample_initial_momentum(&p, &mut rng)).collect();
        let var = draws.iter().map(|x| x * x).sum::<f64>() / n as f64;
        let target = (4.0f64 * 1.7).powi(2);
        // Var of the sample variance for a Gaussian is 2 sigma^4 / n
        let se = (2.0 * target * target / n as f64).sqrt();
        assert!((var - target).abs() < 3.0 * se, "{var} vs {target}");

        let zero = params(1.7, 0.0);
        assert!((0..100).all(|_| sample_initial_momentum(&zero, &mut rng) == 0.0));
    }

    #[test]
    fn quasimomentum_is_nearly_uniform() {
        let p = params(2.0, 4.0);
        let mut rng = trajectory_rng(9, 3);
        let n = 100_000;
        let mut fracs: Vec<f64> = (0..n)
            .map(|_| (sample_initial_momentum(&p, &mut rng) / p.kbar).rem_euclid(1.0))
            .collect();
        fracs.sort_by(f64::total_cmp);
        let ks = fracs
            .iter()
            .enumerate()
            .map(|(i, &f)| {
                ((i + 1) as f64 / n as f64 - f)
                    .abs()
                    .max((f - i as f64 / n as f64).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.01, "Kolmogorov distance {ks}");
    }

    #[test]
    fn streams_are_distinct_and_repeatable() {
        let a: Vec<u64> = (0..4).map(|_| trajectory_rng(1, 0).random()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let x: u64 = trajectory_rng(1, 0).random();
        let y: u64 = trajectory_rng(1, 1).random();
        let z: u64 = trajectory_rng(2, 0).random();
        assert!(x != y && x != z);
    }

    #[test]
    fn config_validation() {
        let mut cfg = EnsembleConfig::new(params(2.0, 4.0), 1);
        assert!(cfg.validate().is_ok());
        cfg.n_trajectories = 105;
        assert!(cfg.validate().is_err());
        cfg.n_trajectories = 100;
        cfg.n_kicks = 1;
        assert!(cfg.validate().is_err());
        cfg.n_kicks = 10;
        cfg.propagator.grid_size = 1000;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn empty_sweep_is_empty_curve() {
        let cfg = EnsembleConfig::new(params(2.0, 4.0), 1);
        let curve = sweep_kbar(&cfg, &[], RateRequest::only(RateKind::Initial)).unwrap();
        assert!(curve.points.is_empty());
        assert!(sweep_kbar(&cfg, &[2.0, 1.0], RateRequest::default()).is_err());
        assert!(sweep_kbar(&cfg, &[0.1], RateRequest::default()).is_err());
    }
}
