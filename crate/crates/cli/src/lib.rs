//! Command-line front end for the MOPO squeezing model: reference figures,
//! configurable sweeps and invariant self-checks.

pub mod config;
pub mod error;
pub mod figures;
pub mod plot;
pub mod selfcheck;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_list, ConfigLayer, DelaySpec, PhaseSpec, SignalSpec};
use crate::error::{exit, CliError, CliResult};
use crate::figures::{FigureName, FigureOptions};
use crate::selfcheck::Fault;

#[derive(Debug, Parser)]
#[command(
    name = "mopo-squeeze",
    version,
    about = "Squeezing spectra of the mirrorless OPO below threshold"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Regenerate one of the reference figures (data table plus SVG plot).
    Figure {
        name: FigureName,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Comma-separated gains (fig2, fig3, fig4a).
        #[arg(long = "g", value_name = "LIST")]
        gains: Option<String>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        span: Option<f64>,
    },
    /// Compute spectra for an arbitrary configuration.
    Sweep(Box<SweepArgs>),
    /// Run the invariant suites; exit status 0 iff all pass.
    Selfcheck {
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<Fault>,
    },
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// TOML configuration file; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub material: Option<String>,
    #[arg(long)]
    pub pump_nm: Option<f64>,
    /// "degenerate" or a signal wavelength in nm.
    #[arg(long)]
    pub signal: Option<String>,
    #[arg(long)]
    pub crystal_length_mm: Option<f64>,
    #[arg(long)]
    pub qpm_order: Option<u32>,
    #[arg(long)]
    pub pump_phase: Option<f64>,
    /// Comma-separated gains.
    #[arg(long = "g", value_name = "LIST")]
    pub gains: Option<String>,
    /// Comma-separated distances from threshold, g = pi/2 - epsilon.
    #[arg(long = "epsilon", value_name = "LIST")]
    pub epsilons: Option<String>,
    /// Comma-separated models: exact, linearized.
    #[arg(long = "model", value_name = "LIST")]
    pub models: Option<String>,
    /// fixed, optimal, optimal-linear, optimal-linear-gvm or a phase in rad.
    #[arg(long, allow_hyphen_values = true)]
    pub phase: Option<String>,
    #[arg(long)]
    pub branch: Option<String>,
    /// Homodyne delay in seconds, or "tau_gvm".
    #[arg(long, allow_hyphen_values = true)]
    pub delta_t: Option<String>,
    #[arg(long)]
    pub span: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl SweepArgs {
    pub fn layer(&self) -> CliResult<ConfigLayer> {
        let list = |s: &Option<String>| s.as_deref().map(parse_list).transpose();
        Ok(ConfigLayer {
            material: self.material.clone(),
            pump_nm: self.pump_nm,
            signal: self.signal.as_deref().map(|s| match s.parse::<f64>() {
                Ok(nm) => SignalSpec::Nanometres(nm),
                Err(_) => SignalSpec::Named(s.to_string()),
            }),
            crystal_length_mm: self.crystal_length_mm,
            qpm_order: self.qpm_order,
            pump_phase: self.pump_phase,
            gains: list(&self.gains)?,
            epsilons: list(&self.epsilons)?,
            models: self
                .models
                .as_deref()
                .map(|s| s.split(',').map(|m| m.trim().to_string()).collect()),
            phase: self.phase.as_deref().map(|s| match s.parse::<f64>() {
                Ok(p) => PhaseSpec::Radians(p),
                Err(_) => PhaseSpec::Named(s.to_string()),
            }),
            branch: self.branch.clone(),
            delta_t: self.delta_t.as_deref().map(|s| match s.parse::<f64>() {
                Ok(t) => DelaySpec::Seconds(t),
                Err(_) => DelaySpec::Named(s.to_string()),
            }),
            span: self.span,
            points: self.points,
            out: self.out.clone(),
        })
    }
}

/// Executes a parsed command, writing human-readable output to stdout.
pub fn execute(cli: Cli) -> CliResult<()> {
    let db = config::material_database()?;
    match cli.command {
        Command::Figure {
            name,
            out,
            gains,
            points,
            span,
        } => {
            let options = FigureOptions {
                gains: gains.as_deref().map(parse_list).transpose()?,
                points,
                span,
            };
            emit_paths(&figures::run(name, &options, &db, &out)?)?;
        }
        Command::Sweep(args) => {
            let flags = args.layer()?;
            let file = match &args.config {
                Some(path) => ConfigLayer::from_file(path)?,
                None => ConfigLayer::default(),
            };
            let settings = flags.over(file).resolve()?;
            emit_paths(&sweep::run(&settings, &db)?)?;
        }
        Command::Selfcheck { json, inject_fault } => {
            let report = selfcheck::run(&db, inject_fault)?;
            if json {
                let text = serde_json::to_string_pretty(&report)
                    .map_err(|e| CliError::SelfCheck(e.to_string()))?;
                emit(&format!("{text}\n"))?;
            } else {
                emit(&report.render_text())?;
            }
            if !report.passed {
                let failed: Vec<&str> = report
                    .families
                    .iter()
                    .filter(|f| !f.passed)
                    .map(|f| f.name)
                    .collect();
                return Err(CliError::SelfCheck(failed.join(", ")));
            }
        }
    }
    Ok(())
}

/// Writes to stdout; a closed pipe downstream is not an error.
fn emit(text: &str) -> CliResult<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::io("<stdout>", e)),
        _ => Ok(()),
    }
}

fn emit_paths(paths: &[PathBuf]) -> CliResult<()> {
    let text: String = paths.iter().map(|p| format!("{}\n", p.display())).collect();
    emit(&text)
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                exit::CONFIG
            } else {
                exit::SUCCESS
            };
        }
    };
    match execute(cli) {
        Ok(()) => exit::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
