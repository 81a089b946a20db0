use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use phonon_discord::sweep::{run, Experiment, SweepConfig};
use phonon_discord::Error;

/// Phonon-induced decoherence and geometric discord of two quantum-dot qubits.
#[derive(Parser)]
#[command(name = "phonon-discord", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discord bounds over the (t, T) grid for the equal-superposition state.
    Fig1(Common),
    /// Normalized coherences and discord traces, one file per temperature.
    Traces(Common),
    /// Steady-state discord versus single-dot occupation.
    Steady(Common),
    /// Discord reports for a state loaded from JSON.
    State {
        #[command(flatten)]
        common: Common,
        /// 4x4 density matrix as [[[re, im], ...], ...].
        #[arg(long)]
        state: PathBuf,
    },
    /// Dephasing functions on the configured time grid.
    Kernel(Common),
}

#[derive(Args)]
struct Common {
    /// JSON sweep configuration; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output_dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    distance_nm: Option<f64>,
    /// Replaces the temperature list with this single value.
    #[arg(long)]
    temperature_k: Option<f64>,
    /// Replaces the occupation list with this single value.
    #[arg(long)]
    alpha2: Option<f64>,
}

impl Common {
    fn config(&self) -> Result<SweepConfig, Error> {
        let mut config = match &self.config {
            Some(path) => SweepConfig::load(path)?,
            None => SweepConfig::default(),
        };
        if let Some(out) = &self.out {
            config.output_dir = out.clone();
        }
        if let Some(d) = self.distance_nm {
            config.distance_nm = d;
        }
        if let Some(t) = self.temperature_k {
            config.temperatures_k = vec![t];
        }
        if let Some(a) = self.alpha2 {
            config.alpha2_values = vec![a];
        }
        config.validate()?;
        Ok(config)
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io { .. } => 4,
        Error::Resolution { .. }
        | Error::Domain(_)
        | Error::TimeGridMismatch(_)
        | Error::Sandwich(_) => 3,
        Error::InvalidParameter(_)
        | Error::NotNormalized(_)
        | Error::XStatePositivity(_)
        | Error::InvalidState(_)
        | Error::Config(_)
        | Error::Json(_) => 2,
    }
}

fn execute(cli: Cli) -> Result<(), Error> {
    let (common, experiment, state) = match &cli.command {
        Command::Fig1(c) => (c, Experiment::Fig1Grid, None),
        Command::Traces(c) => (c, Experiment::CoherenceTraces, None),
        Command::Steady(c) => (c, Experiment::SteadyStateVsAlpha2, None),
        Command::State { common, state } => {
            (common, Experiment::SingleState, Some(state.as_path()))
        }
        Command::Kernel(c) => (c, Experiment::KernelExport, None),
    };
    let config = common.config()?;
    let manifest = run(&config, experiment, state)?;
    for out in &manifest.outputs {
        println!(
            "{} ({} rows)",
            config.output_dir.join(&out.file).display(),
            out.rows
        );
    }
    println!(
        "grid convergence: max relative change {:.3e} under refinement",
        manifest.grid_convergence.max_relative_change
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
