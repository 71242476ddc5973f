//! Command-line interface: spectra, bound-pair branches, spectral regions,
//! eigenstate dumps, and quench evolution of the two-species chain.
//!
//! Exit codes: 0 on success, 2 on configuration errors (bad flags or a
//! malformed config file; the message names the offending key), 3 when a
//! solver fails to converge or a numerical backend errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cbhm::error::Error;
use cbhm::output::{
    self, CommandKind, InitialState, MethodKind, OutputFormat, RunConfig,
};

#[derive(Parser)]
#[command(
    name = "cbhm",
    version,
    about = "Two-excitation spectra, bound pairs, and quench dynamics of a \
             Rabi-coupled two-species Bose-Hubbard chain"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the analytic eigenstates of momentum sectors with
    /// localization and entanglement diagnostics.
    Spectrum(SectorCmd),
    /// Bound-pair (doublon) dispersion branches on a momentum grid.
    Doublon(DoublonCmd),
    /// Classify hard-core coupled-sector eigenstates into the five
    /// spectral regions.
    Regions(SectorCmd),
    /// Dump one eigenstate's amplitudes and diagnostics.
    Eigenstate(EigenstateCmd),
    /// Evolve an on-site pair in time and record diagnostics.
    Evolve(EvolveCmd),
}

/// Flags shared by every command.
#[derive(Args)]
struct CommonArgs {
    /// Number of lattice sites (default 10).
    #[arg(long)]
    n: Option<usize>,
    /// Hopping amplitude of species a (default 1).
    #[arg(long)]
    j1: Option<f64>,
    /// Hopping amplitude of species b (default 1).
    #[arg(long)]
    j2: Option<f64>,
    /// On-site interaction of species a (default 0).
    #[arg(long)]
    u1: Option<f64>,
    /// On-site interaction of species b (default 0).
    #[arg(long)]
    u2: Option<f64>,
    /// On-site inter-species interaction (default 0).
    #[arg(long)]
    u3: Option<f64>,
    /// On-site Rabi drive coupling the species (default 0).
    #[arg(long)]
    omega: Option<f64>,
    /// Detuning of species a relative to species b (default 0).
    #[arg(long)]
    delta: Option<f64>,
    /// Hard-core limit for both same-species interactions.
    #[arg(long)]
    hardcore: bool,
    /// Output directory (default `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Data-file format.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// JSON config file; explicit flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SectorArgs {
    /// Momentum-sector index r (P = 2πr/N).
    #[arg(long)]
    p: Option<usize>,
    /// Run every momentum sector.
    #[arg(long = "all-p")]
    all_p: bool,
}

#[derive(Args)]
struct SectorCmd {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    sector: SectorArgs,
}

#[derive(Args)]
struct DoublonCmd {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of momentum grid points over [0, 2π).
    #[arg(long = "p-grid")]
    p_grid: Option<usize>,
}

#[derive(Args)]
struct EigenstateCmd {
    #[command(flatten)]
    common: CommonArgs,
    /// Momentum-sector index r (P = 2πr/N).
    #[arg(long)]
    p: Option<usize>,
    /// Position of the state in the sector, ascending in energy.
    #[arg(long)]
    index: Option<usize>,
}

#[derive(Args)]
struct EvolveCmd {
    #[command(flatten)]
    common: CommonArgs,
    /// Initial on-site pair.
    #[arg(long, value_enum)]
    initial: Option<InitialArg>,
    /// Final time, in units of 1/J (default 40).
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Output-time spacing, in units of 1/J (default 0.1).
    #[arg(long = "dt-out")]
    dt_out: Option<f64>,
    /// Evolution route.
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Also write per-time state snapshots as JSON.
    #[arg(long)]
    snapshots: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitialArg {
    Ab00,
    Aa00,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Spectral,
    Integrator,
}

/// Starts from the config file (or defaults) and lets explicit flags
/// override it.
fn base_config(kind: CommandKind, common: &CommonArgs) -> Result<RunConfig, Error> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::from_json_file(path)?,
        None => RunConfig::new(kind),
    };
    // The subcommand on the command line always decides what runs.
    cfg.command = kind;

    if let Some(n) = common.n {
        cfg.params.n = n;
    }
    if let Some(j1) = common.j1 {
        cfg.params.j1 = j1;
    }
    if let Some(j2) = common.j2 {
        cfg.params.j2 = j2;
    }
    if let Some(u1) = common.u1 {
        cfg.params.u1 = u1;
    }
    if let Some(u2) = common.u2 {
        cfg.params.u2 = u2;
    }
    if let Some(u3) = common.u3 {
        cfg.params.u3 = u3;
    }
    if let Some(omega) = common.omega {
        cfg.params.omega = omega;
    }
    if let Some(delta) = common.delta {
        cfg.params.delta = delta;
    }
    if common.hardcore {
        cfg.params.u1_infinite = true;
        cfg.params.u2_infinite = true;
    }
    if let Some(out) = &common.out {
        cfg.output_dir = out.clone();
    }
    if let Some(format) = common.format {
        cfg.format = match format {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        };
    }
    Ok(cfg)
}

fn apply_sector(cfg: &mut RunConfig, sector: &SectorArgs) {
    if sector.all_p {
        cfg.all_p = true;
        cfg.p = None;
    }
    if let Some(p) = sector.p {
        cfg.p = Some(p);
        // Keep an explicit --p exclusive unless --all-p was also given,
        // in which case validation reports the conflict.
        if !sector.all_p {
            cfg.all_p = false;
        }
    }
}

fn build_config(command: &Command) -> Result<RunConfig, Error> {
    match command {
        Command::Spectrum(cmd) => {
            let mut cfg = base_config(CommandKind::Spectrum, &cmd.common)?;
            apply_sector(&mut cfg, &cmd.sector);
            Ok(cfg)
        }
        Command::Regions(cmd) => {
            let mut cfg = base_config(CommandKind::Regions, &cmd.common)?;
            apply_sector(&mut cfg, &cmd.sector);
            Ok(cfg)
        }
        Command::Doublon(cmd) => {
            let mut cfg = base_config(CommandKind::Doublon, &cmd.common)?;
            if let Some(p_grid) = cmd.p_grid {
                cfg.p_grid = p_grid;
            }
            Ok(cfg)
        }
        Command::Eigenstate(cmd) => {
            let mut cfg = base_config(CommandKind::Eigenstate, &cmd.common)?;
            if let Some(p) = cmd.p {
                cfg.p = Some(p);
                cfg.all_p = false;
            }
            if let Some(index) = cmd.index {
                cfg.index = index;
            }
            Ok(cfg)
        }
        Command::Evolve(cmd) => {
            let mut cfg = base_config(CommandKind::Evolve, &cmd.common)?;
            if let Some(initial) = cmd.initial {
                cfg.initial = match initial {
                    InitialArg::Ab00 => InitialState::Ab00,
                    InitialArg::Aa00 => InitialState::Aa00,
                };
            }
            if let Some(t_max) = cmd.t_max {
                cfg.t_max = t_max;
            }
            if let Some(dt_out) = cmd.dt_out {
                cfg.dt_out = dt_out;
            }
            if let Some(method) = cmd.method {
                cfg.method = match method {
                    MethodArg::Spectral => MethodKind::Spectral,
                    MethodArg::Integrator => MethodKind::Integrator,
                };
            }
            if cmd.snapshots {
                cfg.snapshots = true;
            }
            Ok(cfg)
        }
    }
}

/// Exit code for a failed run: configuration and usage problems are 2,
/// solver and backend failures are 3.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_)
        | Error::WrongMode(_)
        | Error::BadSize(_)
        | Error::NonFiniteParameter { .. }
        | Error::NotNormalized(_)
        | Error::StepTooLarge { .. }
        | Error::DiagonalizationMissing
        | Error::EmptyWindow { .. } => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = build_config(&cli.command).and_then(|cfg| output::run(&cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
