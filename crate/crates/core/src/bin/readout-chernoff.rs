use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use readout_chernoff::config::{FrequencyUnits, MicrosOrInf, Overrides, RunConfig};
use readout_chernoff::output::{write_curve, write_optimum, write_sweep, write_validation};
use readout_chernoff::sweeps::{export_curves, run_sweep};
use readout_chernoff::throughput::{OptimumReport, ReadoutCurve};
use readout_chernoff::{validate, Error};

/// Chernoff-information throughput analysis of dispersive qubit readout.
#[derive(Parser, Debug)]
#[command(name = "readout-chernoff", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Per-τ table of separation, SNR², fidelity, Chernoff information, s*, η_info and T_cert.
    Curve,
    /// Fidelity- and throughput-optimal integration times and the resulting speedup.
    Optimize,
    /// Speedup heatmap over two parameters (--axis1, --axis2).
    Sweep,
    /// Gaussian-limit and internal consistency checks.
    Validate,
}

#[derive(Args, Debug)]
struct Flags {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// How --chi-mhz/--kappa-mhz are read: rad_per_us or cyclic_mhz.
    #[arg(long, global = true)]
    frequency_units: Option<FrequencyUnits>,
    #[arg(long, global = true)]
    chi_mhz: Option<f64>,
    #[arg(long, global = true)]
    kappa_mhz: Option<f64>,
    #[arg(long, global = true)]
    n_bar: Option<f64>,
    #[arg(long, global = true)]
    eta: Option<f64>,
    /// Relaxation time in µs, or `inf`.
    #[arg(long, global = true)]
    t1_us: Option<MicrosOrInf>,
    #[arg(long, global = true)]
    tau_oh_us: Option<f64>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    #[arg(long, global = true)]
    tau_min_us: Option<f64>,
    #[arg(long, global = true)]
    tau_max_us: Option<f64>,
    #[arg(long, global = true)]
    scan_points: Option<usize>,
    #[arg(long, global = true)]
    x_grid_margin: Option<f64>,
    #[arg(long, global = true)]
    x_grid_max_spacing: Option<f64>,
    #[arg(long, global = true)]
    jump_nodes: Option<usize>,
    /// csv or json.
    #[arg(long, global = true)]
    format: Option<readout_chernoff::config::Format>,
    /// Output file (standard output when omitted).
    #[arg(long, global = true)]
    out: Option<String>,
    /// Sweep axis: name:lo:hi:n[:log] or name=v1,v2,... (times in µs).
    #[arg(long, global = true)]
    axis1: Option<String>,
    #[arg(long, global = true)]
    axis2: Option<String>,
}

impl Flags {
    fn overrides(&self) -> Overrides {
        Overrides {
            frequency_units: self.frequency_units,
            chi_mhz: self.chi_mhz,
            kappa_mhz: self.kappa_mhz,
            n_bar: self.n_bar,
            eta: self.eta,
            t1_us: self.t1_us,
            tau_oh_us: self.tau_oh_us,
            epsilon: self.epsilon,
            tau_min_us: self.tau_min_us,
            tau_max_us: self.tau_max_us,
            scan_points: self.scan_points,
            x_grid_margin: self.x_grid_margin,
            x_grid_max_spacing: self.x_grid_max_spacing,
            jump_nodes: self.jump_nodes,
            format: self.format,
            out: self.out.clone(),
            axis1: self.axis1.clone(),
            axis2: self.axis2.clone(),
        }
    }
}

enum Failure {
    Config(anyhow::Error),
    Compute(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config { .. } => Failure::Config(e.into()),
            other => Failure::Compute(other.into()),
        }
    }
}

fn resolve(flags: &Flags) -> Result<RunConfig, Failure> {
    let mut config = match &flags.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    config.apply(&flags.overrides());
    config.validate()?;
    Ok(config)
}

fn sink(config: &RunConfig) -> Result<Box<dyn Write>, Failure> {
    Ok(match &config.output.path {
        Some(path) => Box::new(BufWriter::new(
            File::create(path)
                .with_context(|| format!("cannot create output file {path}"))
                .map_err(Failure::Config)?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn io_failure(e: io::Error) -> Failure {
    Failure::Compute(anyhow::Error::new(e).context("writing output"))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let config = resolve(&cli.flags)?;
    let params = config.physical_params()?;
    let spec = config.certification_spec()?;
    let numerics = config.numerics()?;
    match cli.command {
        Command::Curve => {
            let rows = export_curves(&params, &spec, &numerics, &spec.scan_grid());
            let mut out = sink(&config)?;
            write_curve(&mut out, &config, &rows).map_err(io_failure)?;
            out.flush().map_err(io_failure)?;
            if let Some(bad) = rows.iter().find(|r| r.error.is_some()) {
                return Err(Failure::Compute(anyhow::anyhow!(
                    "row at tau = {} us failed: {}",
                    bad.tau * 1e6,
                    bad.error.as_deref().unwrap_or_default()
                )));
            }
        }
        Command::Optimize => {
            let curve = ReadoutCurve::build(&params, &spec, &numerics)?;
            let report = OptimumReport::from_curve(&curve)?;
            let mut out = sink(&config)?;
            write_optimum(&mut out, &config, &report).map_err(io_failure)?;
            out.flush().map_err(io_failure)?;
        }
        Command::Sweep => {
            let (axis1, axis2) = config.sweep_axes()?;
            let result = run_sweep(&params, &spec, &numerics, &axis1, &axis2)?;
            let mut out = sink(&config)?;
            write_sweep(&mut out, &config, &result).map_err(io_failure)?;
            out.flush().map_err(io_failure)?;
        }
        Command::Validate => {
            let report = validate::run_checks(&params, &numerics)?;
            let mut out = sink(&config)?;
            write_validation(&mut out, &config, &report).map_err(io_failure)?;
            out.flush().map_err(io_failure)?;
            if !report.all_passed() {
                let failed: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| c.name)
                    .collect();
                return Err(Failure::Compute(anyhow::anyhow!(
                    "validation failed: {}",
                    failed.join(", ")
                )));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("configuration error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
