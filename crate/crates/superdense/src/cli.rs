//! The `superdense` command-line front end.
//!
//! Four subcommands: `basis` prints the interpolating two-qubit basis,
//! `analyze` evaluates the bounds and synthesized rates for one setup,
//! `simulate` adds a seeded Monte Carlo run, and `sweep` streams CSV over a
//! parameter axis. Data goes to `--output` or standard output; diagnostics
//! go to standard error. Exit codes: 0 on success, 2 for usage problems,
//! 1 for computational failures.

pub mod parse;
mod report;

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::protocol::{analyze, simulate, AnalysisReport, ProtocolConfig, SimulationStats};
use crate::qmath::Scalar;
use crate::states::{nme_basis, schmidt_decompose, SchmidtState};
use parse::{ParseError, SweepRange};

#[derive(Debug, Parser)]
#[command(
    name = "superdense",
    version,
    about = "Probabilistic superdense coding: bounds, measurements, and Monte Carlo verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format (default: text; sweep always streams csv)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write data to this path instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Axis {
    /// Qubit channel knob: spectrum (1, ℓ²)/(1+ℓ²) at d = D = 2
    Ell,
    /// Resource dimension with a uniform spectrum (requires --me)
    #[value(name = "D")]
    ResourceDim,
}

#[derive(Debug, Clone)]
struct SpectrumArg(Vec<f64>);

fn spectrum_arg(s: &str) -> Result<SpectrumArg, ParseError> {
    parse::parse_spectrum(s).map(SpectrumArg)
}

#[derive(Debug, Clone)]
struct DimListArg(Vec<usize>);

fn dim_list_arg(s: &str) -> Result<DimListArg, ParseError> {
    parse::parse_dim_list(s).map(DimListArg)
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the interpolating two-qubit basis for knobs ell and p
    Basis {
        /// Complex knob for the diagonal pair, e.g. 0.5 or 0.3+0.1i
        #[arg(long, value_parser = parse::parse_complex)]
        ell: Scalar,

        /// Complex knob for the off-diagonal pair
        #[arg(long, value_parser = parse::parse_complex)]
        p: Scalar,
    },

    /// Closed-form bounds and synthesized rates for one configuration
    Analyze {
        /// Message alphabet dimension (d² messages)
        #[arg(long)]
        d: usize,

        /// Resource local dimension (default: spectrum length, or d with --me)
        #[arg(long = "D", value_name = "D")]
        resource_dim: Option<usize>,

        /// Comma-separated Schmidt spectrum of the resource
        #[arg(long, value_parser = spectrum_arg)]
        spectrum: Option<SpectrumArg>,

        /// Use the maximally entangled (uniform) spectrum
        #[arg(long)]
        me: bool,
    },

    /// Monte Carlo run plus the analytic comparison
    Simulate {
        #[arg(long)]
        d: usize,

        #[arg(long = "D", value_name = "D")]
        resource_dim: Option<usize>,

        #[arg(long, value_parser = spectrum_arg)]
        spectrum: Option<SpectrumArg>,

        #[arg(long)]
        me: bool,

        /// Number of protocol trials
        #[arg(long)]
        trials: u64,

        /// Base seed for the reproducible trial streams
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Stream one CSV row per grid point along an axis
    Sweep {
        /// Sweep axis
        #[arg(long, value_enum)]
        axis: Axis,

        /// Grid as start:stop:steps (axis ell)
        #[arg(long, value_parser = parse::parse_range)]
        range: Option<SweepRange>,

        /// Comma-separated resource dimensions (axis D)
        #[arg(long, value_parser = dim_list_arg)]
        list: Option<DimListArg>,

        /// Message alphabet dimension
        #[arg(long, default_value_t = 2)]
        d: usize,

        /// Use the maximally entangled spectrum at each point
        #[arg(long)]
        me: bool,

        /// Monte Carlo trials per point (0 = analytics only)
        #[arg(long, default_value_t = 0)]
        trials: u64,

        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Compute(String),
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Compute(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Compute(format!("output error: {e}"))
    }
}

/// Parses arguments from the environment, executes, and returns the exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(f),
            Err(e) => {
                eprintln!("error: cannot open {}: {e}", path.display());
                return 1;
            }
        },
        None => Box::new(std::io::stdout()),
    };
    match execute(cli, &mut out) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn execute(cli: Cli, out: &mut Box<dyn Write>) -> Result<(), CliError> {
    let format = cli.format;
    match cli.command {
        Command::Basis { ell, p } => cmd_basis(ell, p, format, out),
        Command::Analyze {
            d,
            resource_dim,
            spectrum,
            me,
        } => {
            let config = resolve_config(d, resource_dim, spectrum, me, 0, 0)?;
            cmd_analyze(&config, format, out)
        }
        Command::Simulate {
            d,
            resource_dim,
            spectrum,
            me,
            trials,
            seed,
        } => {
            if trials == 0 {
                return Err(CliError::Usage("--trials must be at least 1".into()));
            }
            let config = resolve_config(d, resource_dim, spectrum, me, trials, seed)?;
            cmd_simulate(&config, format, out)
        }
        Command::Sweep {
            axis,
            range,
            list,
            d,
            me,
            trials,
            seed,
        } => cmd_sweep(axis, range, list, d, me, trials, seed, format, out),
    }
}

/// Combines the spectrum flags into a validated configuration.
fn resolve_config(
    d: usize,
    resource_dim: Option<usize>,
    spectrum: Option<SpectrumArg>,
    me: bool,
    trials: u64,
    seed: u64,
) -> Result<ProtocolConfig, CliError> {
    let (dim, spectrum) = match (spectrum, me) {
        (Some(_), true) => {
            return Err(CliError::Usage(
                "--spectrum and --me are mutually exclusive".into(),
            ));
        }
        (Some(SpectrumArg(sp)), false) => {
            let dim = resource_dim.unwrap_or(sp.len());
            if dim != sp.len() {
                return Err(CliError::Usage(format!(
                    "--D is {dim} but the spectrum has {} entries",
                    sp.len()
                )));
            }
            (dim, sp)
        }
        (None, true) => {
            let dim = resource_dim.unwrap_or(d);
            (dim, vec![1.0 / dim as f64; dim])
        }
        (None, false) => {
            return Err(CliError::Usage("provide --spectrum or --me".into()));
        }
    };
    ProtocolConfig::new(d, dim, spectrum, trials, seed).map_err(|e| CliError::Usage(e.to_string()))
}

fn cmd_basis(
    ell: Scalar,
    p: Scalar,
    format: Option<Format>,
    out: &mut Box<dyn Write>,
) -> Result<(), CliError> {
    let basis = nme_basis(ell, p);
    let mut entropies = [0.0f64; 4];
    for (slot, v) in entropies.iter_mut().zip(basis.vectors()) {
        let dec = schmidt_decompose(v, 2, 2)?;
        *slot = SchmidtState::new(dec.spectrum)?.entanglement_entropy();
    }
    match format.unwrap_or(Format::Text) {
        Format::Text => report::write_basis_text(out.as_mut(), &basis, &entropies)?,
        Format::Json => report::write_basis_json(out.as_mut(), &basis, &entropies)?,
        Format::Csv => {
            return Err(CliError::Usage(
                "basis supports --format text or json".into(),
            ));
        }
    }
    Ok(())
}

fn cmd_analyze(
    config: &ProtocolConfig,
    format: Option<Format>,
    out: &mut Box<dyn Write>,
) -> Result<(), CliError> {
    let report = analyze(config)?;
    emit_report(config, &report, None, format, out)
}

fn cmd_simulate(
    config: &ProtocolConfig,
    format: Option<Format>,
    out: &mut Box<dyn Write>,
) -> Result<(), CliError> {
    let report = analyze(config)?;
    let stats = simulate(config)?;
    emit_report(config, &report, Some(&stats), format, out)
}

fn emit_report(
    config: &ProtocolConfig,
    report: &AnalysisReport,
    sim: Option<&SimulationStats>,
    format: Option<Format>,
    out: &mut Box<dyn Write>,
) -> Result<(), CliError> {
    match format.unwrap_or(Format::Text) {
        Format::Text => report::write_report_text(out.as_mut(), config, report, sim)?,
        Format::Json => report::write_report_json(out.as_mut(), config, report, sim)?,
        Format::Csv => report::write_report_csv(out.as_mut(), config, report, sim)?,
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    axis: Axis,
    range: Option<SweepRange>,
    list: Option<DimListArg>,
    d: usize,
    me: bool,
    trials: u64,
    seed: u64,
    format: Option<Format>,
    out: &mut Box<dyn Write>,
) -> Result<(), CliError> {
    if !matches!(format, None | Some(Format::Csv)) {
        return Err(CliError::Usage("sweep emits csv only".into()));
    }
    // (axis value, configuration) pairs for the grid.
    let points: Vec<(f64, ProtocolConfig)> = match axis {
        Axis::Ell => {
            let range = range.ok_or_else(|| CliError::Usage("axis ell needs --range".into()))?;
            if list.is_some() {
                return Err(CliError::Usage("--list applies to axis D only".into()));
            }
            if d != 2 {
                return Err(CliError::Usage(
                    "axis ell is a qubit sweep; --d must stay 2".into(),
                ));
            }
            if me {
                return Err(CliError::Usage(
                    "--me conflicts with axis ell (the knob fixes the spectrum)".into(),
                ));
            }
            range
                .values()
                .into_iter()
                .map(|ell| {
                    if !ell.is_finite() {
                        return Err(CliError::Usage(format!("non-finite ell {ell}")));
                    }
                    let norm = 1.0 + ell * ell;
                    let config = ProtocolConfig::new(
                        2,
                        2,
                        vec![1.0 / norm, ell * ell / norm],
                        trials,
                        seed,
                    )?;
                    Ok((ell, config))
                })
                .collect::<Result<_, CliError>>()?
        }
        Axis::ResourceDim => {
            let DimListArg(dims) =
                list.ok_or_else(|| CliError::Usage("axis D needs --list".into()))?;
            if range.is_some() {
                return Err(CliError::Usage("--range applies to axis ell only".into()));
            }
            if !me {
                return Err(CliError::Usage(
                    "axis D needs --me (per-D spectra have no common flag form)".into(),
                ));
            }
            dims.into_iter()
                .map(|dim| {
                    if dim < d {
                        return Err(CliError::Usage(format!(
                            "listed dimension {dim} is smaller than --d {d}"
                        )));
                    }
                    let config =
                        ProtocolConfig::new(d, dim, vec![1.0 / dim as f64; dim], trials, seed)?;
                    Ok((dim as f64, config))
                })
                .collect::<Result<_, CliError>>()?
        }
    };

    writeln!(out, "{}", report::SWEEP_HEADER)?;
    for (axis_value, config) in points {
        let analysis = analyze(&config)?;
        let stats = if trials > 0 {
            Some(simulate(&config)?)
        } else {
            None
        };
        report::write_sweep_row(out.as_mut(), axis_value, &analysis, stats.as_ref(), seed)?;
    }
    Ok(())
}
