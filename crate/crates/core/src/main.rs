// Copyright 2026 The kicked-rotor Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kicked_rotor::cli_io::{
    compare_dinf, emit_curve, emit_dinf_reports, figure_recipe, parse_config, parse_kbar_range, read_input, run_figure,
    write_output, OutputFormat,
};
use kicked_rotor::ensemble::{sweep_kbar, with_workers, RateRequest};
use kicked_rotor::{Error, Result};

#[derive(Parser)]
#[command(
    name = "kicked-rotor",
    version,
    about = "Quantum-trajectory simulator for the decohering kicked rotor"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one ensemble and report its diffusion rates.
    Run(Common),
    /// Run one ensemble per kbar value.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// kbar values as LO:HI:STEP.
        #[arg(long, value_name = "LO:HI:STEP")]
        kbar_range: String,
    },
    /// Compare simulated late-time rates with the weighted no-decoherence prediction.
    CompareDinf {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "LO:HI:STEP")]
        kbar_range: String,
    },
    /// Regenerate the data behind one of the reference figures.
    ReproduceFig {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=4))]
        figure: u32,
        #[arg(long, default_value_t = 1000)]
        trajectories: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    /// KEY=VALUE override, applied after the config file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[command(flatten)]
    output: Output,
}

impl Common {
    fn config_text(&self) -> Result<String> {
        let mut text = match &self.config {
            Some(path) => read_input(path)?,
            None => String::new(),
        };
        for item in &self.set {
            if item.contains(char::is_whitespace) || item.contains('#') {
                return Err(Error::Config {
                    key: item.clone(),
                    reason: "override must be a single KEY=VALUE token".into(),
                });
            }
            text.push('\n');
            text.push_str(item);
        }
        Ok(text)
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run(common) => {
            let cfg = parse_config(&common.config_text()?, false)?;
            let format: OutputFormat = common.output.format.parse()?;
            let request = RateRequest::fitting(&cfg.windows, cfg.n_kicks);
            let curve = with_workers(common.output.workers, || sweep_kbar(&cfg, &[cfg.params.kbar], request))??;
            write_output(common.output.out.as_deref(), &emit_curve(&curve, format)?)
        }
        Command::Sweep { common, kbar_range } => {
            let cfg = parse_config(&common.config_text()?, true)?;
            let format: OutputFormat = common.output.format.parse()?;
            let kbars = parse_kbar_range(&kbar_range)?;
            let request = RateRequest::fitting(&cfg.windows, cfg.n_kicks);
            let curve = with_workers(common.output.workers, || sweep_kbar(&cfg, &kbars, request))??;
            write_output(common.output.out.as_deref(), &emit_curve(&curve, format)?)
        }
        Command::CompareDinf { common, kbar_range } => {
            let cfg = parse_config(&common.config_text()?, true)?;
            let format: OutputFormat = common.output.format.parse()?;
            let kbars = parse_kbar_range(&kbar_range)?;
            let report = with_workers(common.output.workers, || compare_dinf(&cfg, &kbars))??;
            write_output(common.output.out.as_deref(), &emit_dinf_reports(&[report], format)?)
        }
        Command::ReproduceFig {
            figure,
            trajectories,
            output,
        } => {
            let format: OutputFormat = output.format.parse()?;
            let recipe = figure_recipe(figure, trajectories)?;
            let data = with_workers(output.workers, || run_figure(&recipe))??;
            write_output(output.out.as_deref(), &data.emit(format)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
