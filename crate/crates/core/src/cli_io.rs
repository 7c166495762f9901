// Copyright 2026 The kicked-rotor Authors
// SPDX-License-Identifier: Apache-2.0

//! Configuration text, curve serialization and experiment recipes.
//!
//! A configuration is a list of `key=value` tokens separated by whitespace or
//! newlines; `#` starts a comment that runs to the end of the line. A repeated
//! key takes its last value, which is how command-line overrides apply.
//!
//! | key | default |
//! |-----|---------|
//! | `kappa` | required |
//! | `kbar` | required unless sweeping |
//! | `seed` | required |
//! | `eta` | `0` |
//! | `alpha` | `0.005` |
//! | `sigma_rho_over_kbar` | `4` |
//! | `kicks` | `61` |
//! | `trajectories` | `1000` |
//! | `groups` | `10` |
//! | `grid` | `4096` |
//! | `substeps` | `max(50, ceil(16 kappa))` |
//! | `leak_tol` | `1e-8` |
//! | `recoil` | `dipole_perpendicular` |
//! | `mode` | `quantum` |
//! | `classical_particles` | `10000` |
//! | `classical_substeps` | `64` |
//! | `classical_noise` | `true` |
//! | `early_window` | `0-1` |
//! | `initial_window` | `2-5` |
//! | `late_window` | `30-60` |

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytics::{
    averaged_rate, dinf_exponential_model, dinf_from_series, CurveMetadata, DiffusionCurve, DiffusionEstimate,
};
use crate::ensemble::{run_ensemble, sweep_kbar, EnsembleConfig, KickWindow, Mode, RateRequest};
use crate::params::{DimensionlessParams, DEFAULT_ALPHA, DEFAULT_SIGMA_RHO_OVER_KBAR};
use crate::quantum::RecoilDistribution;
use crate::{Error, Result};

const KEYS: &[&str] = &[
    "kappa",
    "kbar",
    "seed",
    "eta",
    "alpha",
    "sigma_rho_over_kbar",
    "kicks",
    "trajectories",
    "groups",
    "grid",
    "substeps",
    "leak_tol",
    "recoil",
    "mode",
    "classical_particles",
    "classical_substeps",
    "classical_noise",
    "early_window",
    "initial_window",
    "late_window",
];

/// Placeholder `kbar` for sweep configurations; every sweep point replaces it.
const SWEEP_PLACEHOLDER_KBAR: f64 = 1.0;

/// Splits configuration text into `(key, value)` pairs in order of appearance.
pub fn tokenize_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        for token in line.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::config(token, "expected key=value"))?;
            if key.is_empty() {
                return Err(Error::config(token, "empty key"));
            }
            if !KEYS.contains(&key) {
                return Err(Error::config(key, "unknown configuration key"));
            }
            pairs.push((key.to_string(), value.to_string()));
        }
    }
    Ok(pairs)
}

struct Entries(Vec<(String, String)>);

impl Entries {
    fn raw(&self, key: &str) -> Option<&str> {
        self.0.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| Error::config(key, format!("cannot parse `{v}`: {e}")))
            })
            .transpose()
    }

    fn required<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.parse(key)?
            .ok_or_else(|| Error::config(key, "required key is missing"))
    }

    fn window(&self, key: &str, default: KickWindow) -> Result<KickWindow> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => {
                let bad = || Error::config(key, format!("expected FIRST-LAST, got `{v}`"));
                let (a, b) = v.split_once('-').ok_or_else(bad)?;
                let first = a.parse().map_err(|_| bad())?;
                let last = b.parse().map_err(|_| bad())?;
                Ok(KickWindow::new(first, last))
            }
        }
    }
}

/// Parses and validates a configuration. With `sweeping` set, `kbar` may be
/// omitted because each sweep point supplies its own value.
pub fn parse_config(text: &str, sweeping: bool) -> Result<EnsembleConfig> {
    let e = Entries(tokenize_config(text)?);
    let kappa: f64 = e.required("kappa")?;
    let kbar: f64 = if sweeping {
        e.parse("kbar")?.unwrap_or(SWEEP_PLACEHOLDER_KBAR)
    } else {
        e.required("kbar")?
    };
    let seed: u64 = e.required("seed")?;
    let params = DimensionlessParams::new(
        kappa,
        kbar,
        e.parse("alpha")?.unwrap_or(DEFAULT_ALPHA),
        e.parse("eta")?.unwrap_or(0.0),
        e.parse("sigma_rho_over_kbar")?.unwrap_or(DEFAULT_SIGMA_RHO_OVER_KBAR),
    )?;
    let mut cfg = EnsembleConfig::new(params, seed);
    if let Some(v) = e.parse("kicks")? {
        cfg.n_kicks = v;
    }
    if let Some(v) = e.parse("trajectories")? {
        cfg.n_trajectories = v;
    }
    if let Some(v) = e.parse("groups")? {
        cfg.n_groups = v;
    }
    if let Some(v) = e.parse("grid")? {
        cfg.propagator.grid_size = v;
    }
    if let Some(v) = e.parse("substeps")? {
        cfg.propagator.substeps = Some(v);
    }
    if let Some(v) = e.parse("leak_tol")? {
        cfg.propagator.leak_tolerance = v;
    }
    if let Some(v) = e.parse::<RecoilDistribution>("recoil")? {
        cfg.propagator.recoil = v;
    }
    if let Some(v) = e.raw("mode") {
        cfg.mode = match v {
            "quantum" => Mode::Quantum,
            "classical" => Mode::Classical,
            other => {
                return Err(Error::config(
                    "mode",
                    format!("expected quantum or classical, got `{other}`"),
                ))
            }
        };
    }
    if let Some(v) = e.parse("classical_particles")? {
        cfg.classical_particles = v;
    }
    if let Some(v) = e.parse("classical_substeps")? {
        cfg.classical_substeps = v;
    }
    if let Some(v) = e.parse("classical_noise")? {
        cfg.classical_noise = v;
    }
    cfg.windows.early = e.window("early_window", cfg.windows.early)?;
    cfg.windows.initial = e.window("initial_window", cfg.windows.initial)?;
    cfg.windows.late = e.window("late_window", cfg.windows.late)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Configuration text that [`parse_config`] maps back to `cfg`.
pub fn config_to_text(cfg: &EnsembleConfig) -> String {
    let p = &cfg.params;
    let w = &cfg.windows;
    let mut s = String::new();
    let _ = writeln!(s, "kappa={} kbar={} eta={} alpha={}", p.kappa, p.kbar, p.eta, p.alpha);
    let _ = writeln!(s, "sigma_rho_over_kbar={}", p.sigma_rho_over_kbar);
    let _ = writeln!(
        s,
        "seed={} kicks={} trajectories={} groups={}",
        cfg.master_seed, cfg.n_kicks, cfg.n_trajectories, cfg.n_groups
    );
    let _ = write!(
        s,
        "grid={} leak_tol={} recoil={}",
        cfg.propagator.grid_size, cfg.propagator.leak_tolerance, cfg.propagator.recoil
    );
    if let Some(n) = cfg.propagator.substeps {
        let _ = write!(s, " substeps={n}");
    }
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "mode={} classical_particles={} classical_substeps={} classical_noise={}",
        cfg.mode.name(),
        cfg.classical_particles,
        cfg.classical_substeps,
        cfg.classical_noise
    );
    let _ = writeln!(
        s,
        "early_window={}-{} initial_window={}-{} late_window={}-{}",
        w.early.first, w.early.last, w.initial.first, w.initial.last, w.late.first, w.late.last
    );
    s
}

/// Expands `LO:HI:STEP` into `LO, LO+STEP, ...` up to and including `HI`.
pub fn parse_kbar_range(text: &str) -> Result<Vec<f64>> {
    let bad = |reason: &str| Error::config("kbar-range", format!("`{text}`: {reason}"));
    let parts: Vec<&str> = text.trim().split(':').collect();
    let [lo, hi, step] = parts[..] else {
        return Err(bad("expected LO:HI:STEP"));
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
    if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
        return Err(bad("values must be finite"));
    }
    if !(step > 0.0) {
        return Err(bad("STEP must be positive"));
    }
    if hi < lo {
        return Err(bad("HI is below LO"));
    }
    let count = ((hi - lo) / step + 1e-9).floor() + 1.0;
    if count > 10_000.0 {
        return Err(bad("more than 10000 points"));
    }
    Ok((0..count as usize).map(|i| lo + i as f64 * step).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::config("format", format!("expected csv or json, got `{other}`"))),
        }
    }
}

pub const CURVE_CSV_HEADER: &str =
    "kbar,kappa,eta,alpha,rate_kind,first_kick,last_kick,D,D_stderr,classical_D,n_trajectories,seed";

fn push_curve_rows(out: &mut String, curve: &DiffusionCurve) {
    let m = &curve.metadata;
    for point in &curve.points {
        for rate in &point.rates {
            let classical = rate
                .classical
                .map(|c| {
                    let e = if m.classical_noise {
                        c.with_noise
                    } else {
                        c.without_noise
                    };
                    e.value.to_string()
                })
                .unwrap_or_default();
            let e = &rate.estimate;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                point.kbar,
                m.kappa,
                m.eta,
                m.alpha,
                rate.kind,
                e.first_kick,
                e.last_kick,
                e.value,
                e.stderr,
                classical,
                m.n_trajectories,
                m.seed
            );
        }
    }
}

/// Serializes one curve. CSV numbers use Rust's shortest round-trip
/// formatting, which never depends on the locale.
pub fn emit_curve(curve: &DiffusionCurve, format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Csv => emit_curves(std::slice::from_ref(curve), format),
        OutputFormat::Json => serde_json::to_vec_pretty(curve).map_err(|e| Error::Format(e.to_string())),
    }
}

/// Serializes several curves: CSV rows under one header, or a JSON array.
pub fn emit_curves(curves: &[DiffusionCurve], format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Csv => {
            let mut out = String::new();
            out.push_str(CURVE_CSV_HEADER);
            out.push('\n');
            for c in curves {
                push_curve_rows(&mut out, c);
            }
            Ok(out.into_bytes())
        }
        OutputFormat::Json => serde_json::to_vec_pretty(curves).map_err(|e| Error::Format(e.to_string())),
    }
}

/// Parses a JSON curve document produced by [`emit_curve`].
pub fn parse_curve_json(bytes: &[u8]) -> Result<DiffusionCurve> {
    let curve: DiffusionCurve = serde_json::from_slice(bytes).map_err(|e| Error::Format(e.to_string()))?;
    curve.validate().map_err(|e| Error::Format(e.to_string()))?;
    Ok(curve)
}

/// Writes `bytes` to `path`, or to standard output when `path` is `None`.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    use std::io::Write;
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => std::io::stdout().write_all(bytes).map_err(|source| Error::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

pub fn read_input(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Simulated versus predicted late-time rate at one `kbar`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DinfComparison {
    pub kbar: f64,
    /// Late-window rate of the decohering ensemble.
    pub simulated: DiffusionEstimate,
    /// Geometric-weighted sum over the decoherence-free rates.
    pub weighted: DiffusionEstimate,
    pub combined_stderr: f64,
    /// `(simulated - weighted) / combined_stderr`.
    pub discrepancy_sigma: f64,
    /// Closed-form value from the assumed exponential history; model-based,
    /// not derived from either simulation.
    pub exponential_model: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DinfReport {
    pub metadata: CurveMetadata,
    /// Seed of the decoherence-free leg.
    pub reference_seed: u64,
    pub rows: Vec<DinfComparison>,
}

/// Seed of the decoherence-free leg, distinct from the decohering leg so the
/// two estimates are statistically independent.
pub fn reference_seed(seed: u64) -> u64 {
    seed ^ 0x9E37_79B9_7F4A_7C15
}

/// Runs the decohering ensemble and a decoherence-free ensemble at each `kbar`
/// and compares the late-window rate with the weighted prediction.
pub fn compare_dinf(cfg: &EnsembleConfig, kbar_values: &[f64]) -> Result<DinfReport> {
    let eta = cfg.params.eta;
    if !(eta > 0.0) {
        return Err(Error::invalid("eta", "compare-dinf needs eta > 0"));
    }
    if cfg.mode != Mode::Quantum {
        return Err(Error::invalid("mode", "compare-dinf runs quantum ensembles"));
    }
    let late = cfg.windows.late;
    if late.kicks_needed() > cfg.n_kicks {
        return Err(Error::invalid(
            "kicks",
            format!(
                "late window {}-{} needs {} kicks",
                late.first,
                late.last,
                late.kicks_needed()
            ),
        ));
    }
    let mut rows = Vec::with_capacity(kbar_values.len());
    for &kbar in kbar_values {
        let decohering = cfg.with_kbar(kbar)?;
        let series = run_ensemble(&decohering)?;
        let simulated = averaged_rate(&series, late.first, late.last)?;

        let mut clean = decohering.clone();
        clean.params = clean.params.with_eta(0.0)?;
        clean.master_seed = reference_seed(cfg.master_seed);
        let d0 = run_ensemble(&clean)?;
        let weighted = dinf_from_series(eta, &d0)?;

        let combined_stderr = simulated.stderr.hypot(weighted.stderr);
        let diff = simulated.value - weighted.value;
        let discrepancy_sigma = if combined_stderr > 0.0 {
            diff / combined_stderr
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY.copysign(diff)
        };
        rows.push(DinfComparison {
            kbar,
            simulated,
            weighted,
            combined_stderr,
            discrepancy_sigma,
            exponential_model: dinf_exponential_model(cfg.params.kappa, kbar, eta)?,
        });
    }
    Ok(DinfReport {
        metadata: cfg.metadata(),
        reference_seed: reference_seed(cfg.master_seed),
        rows,
    })
}

pub const DINF_CSV_HEADER: &str = "kbar,kappa,eta,D_sim,D_sim_stderr,D_weighted,D_weighted_stderr,combined_stderr,discrepancy_sigma,D_model,n_trajectories,seed";

pub fn emit_dinf_reports(reports: &[DinfReport], format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Csv => {
            let mut out = String::new();
            out.push_str(DINF_CSV_HEADER);
            out.push('\n');
            for r in reports {
                let m = &r.metadata;
                for row in &r.rows {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{},{},{},{},{},{}",
                        row.kbar,
                        m.kappa,
                        m.eta,
                        row.simulated.value,
                        row.simulated.stderr,
                        row.weighted.value,
                        row.weighted.stderr,
                        row.combined_stderr,
                        row.discrepancy_sigma,
                        row.exponential_model,
                        m.n_trajectories,
                        m.seed
                    );
                }
            }
            Ok(out.into_bytes())
        }
        OutputFormat::Json => serde_json::to_vec_pretty(reports).map_err(|e| Error::Format(e.to_string())),
    }
}

/// Output of a figure recipe.
#[derive(Debug, Clone, PartialEq)]
pub enum FigureData {
    Curves(Vec<DiffusionCurve>),
    Dinf(Vec<DinfReport>),
}

impl FigureData {
    pub fn emit(&self, format: OutputFormat) -> Result<Vec<u8>> {
        match self {
            FigureData::Curves(c) => emit_curves(c, format),
            FigureData::Dinf(r) => emit_dinf_reports(r, format),
        }
    }
}

/// Seed shared by all figure recipes.
pub const FIGURE_SEED: u64 = 1;

/// `kbar` grid for the figure sweeps: 1 to 7 in steps of 0.25 plus `2 pi`.
pub fn figure_kbar_grid() -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=24).map(|i| 1.0 + 0.25 * i as f64).collect();
    grid.push(2.0 * PI);
    grid.sort_by(f64::total_cmp);
    grid
}

/// One configuration of a figure recipe and the `kbar` values it visits.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureLeg {
    pub config: EnsembleConfig,
    pub kbar_values: Vec<f64>,
    pub request: RateRequest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureRecipe {
    pub figure: u32,
    pub compare_dinf: bool,
    pub legs: Vec<FigureLeg>,
}

fn recipe_config(kappa: f64, eta: f64, trajectories: usize) -> Result<EnsembleConfig> {
    let params = DimensionlessParams::new(
        kappa,
        SWEEP_PLACEHOLDER_KBAR,
        DEFAULT_ALPHA,
        eta,
        DEFAULT_SIGMA_RHO_OVER_KBAR,
    )?;
    let mut cfg = EnsembleConfig::new(params, FIGURE_SEED);
    cfg.n_trajectories = trajectories;
    Ok(cfg)
}

/// Baked-in parameters for figures 1 to 4; only the ensemble size is free.
///
/// 1. `kappa = 9`, `eta = 0.1`: early and initial rates against `kbar`.
/// 2. `kappa` in {6, 9, 12}, `eta = 0.1`: initial rates against `kbar`.
/// 3. `kappa = 10`, `eta` in {0.02, 0.05, 0.1}: late-time comparison.
/// 4. `kappa = 9`, `eta = 0`, `kbar` in {2, 6, 6.28, 6.4}: per-kick rates.
#[allow(clippy::approx_constant)]
pub fn figure_recipe(figure: u32, trajectories: usize) -> Result<FigureRecipe> {
    let grid = figure_kbar_grid();
    let legs = match figure {
        1 => vec![FigureLeg {
            config: recipe_config(9.0, 0.1, trajectories)?,
            kbar_values: grid,
            request: RateRequest {
                early: true,
                initial: true,
                ..RateRequest::default()
            },
        }],
        2 => [6.0, 9.0, 12.0]
            .iter()
            .map(|&kappa| {
                Ok(FigureLeg {
                    config: recipe_config(kappa, 0.1, trajectories)?,
                    kbar_values: grid.clone(),
                    request: RateRequest {
                        initial: true,
                        ..RateRequest::default()
                    },
                })
            })
            .collect::<Result<_>>()?,
        3 => [0.02, 0.05, 0.1]
            .iter()
            .map(|&eta| {
                Ok(FigureLeg {
                    config: recipe_config(10.0, eta, trajectories)?,
                    kbar_values: (1..=7).map(f64::from).collect(),
                    request: RateRequest {
                        late: true,
                        ..RateRequest::default()
                    },
                })
            })
            .collect::<Result<_>>()?,
        4 => vec![FigureLeg {
            config: recipe_config(9.0, 0.0, trajectories)?,
            kbar_values: vec![2.0, 6.0, 6.28, 6.4],
            request: RateRequest {
                per_kick: true,
                ..RateRequest::default()
            },
        }],
        other => return Err(Error::config("figure", format!("expected 1, 2, 3 or 4, got {other}"))),
    };
    for leg in &legs {
        leg.config.validate()?;
    }
    Ok(FigureRecipe {
        figure,
        compare_dinf: figure == 3,
        legs,
    })
}

pub fn run_figure(recipe: &FigureRecipe) -> Result<FigureData> {
    if recipe.compare_dinf {
        let reports = recipe
            .legs
            .iter()
            .map(|leg| compare_dinf(&leg.config, &leg.kbar_values))
            .collect::<Result<_>>()?;
        Ok(FigureData::Dinf(reports))
    } else {
        let curves = recipe
            .legs
            .iter()
            .map(|leg| sweep_kbar(&leg.config, &leg.kbar_values, leg.request))
            .collect::<Result<_>>()?;
        Ok(FigureData::Curves(curves))
    }
}
