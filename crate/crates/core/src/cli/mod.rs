//! Command-line front end: configuration, subcommands and CSV output.

mod commands;
mod config;
mod sweep;
mod table;

pub use commands::{run_critical, run_equivalence, run_evolve, run_packet, run_stationary, run_sweep_command, Output};
pub use config::{RunConfig, KEYS};
pub use sweep::{run_sweep, SweepMode, SweepResult, SweepRow, SweepSettings};
pub use table::{format_f64, Table};

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Result;

#[derive(Debug, Parser)]
#[command(
    name = "bohmian-sn",
    version,
    about = "Gaussian-packet Bohmian dynamics and Schrödinger–Newton solvers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form packet width, quantum potential and trajectories over time.
    Packet(PacketArgs),
    /// Critical width ħ²/Gm³ and the energy balance at it, per mass.
    Critical(CriticalArgs),
    /// Stationary self-gravitating profile.
    Stationary(StationaryArgs),
    /// Time-dependent propagation with optional Bohmian trajectories.
    Evolve(EvolveArgs),
    /// Half-width against mass with a power-law fit.
    Sweep(SweepArgs),
    /// Uniform-field evolution mapped to the free-fall frame.
    Equivalence(EquivalenceArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// `key = value` config file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory; CSV goes to stdout when absent and only one file is produced.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub unit_system: Option<String>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long = "G")]
    pub big_g: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PacketArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub sigma0: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub seeds: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated masses.
    #[arg(long)]
    pub mass_list: Option<String>,
}

#[derive(Debug, Args)]
pub struct StationaryArgs {
    #[command(flatten)]
    pub common: Common,
    /// physical or literal.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub rho0: Option<f64>,
    #[arg(long = "rmax")]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub common: Common,
    /// free or sn.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub sigma0: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub store_every: Option<usize>,
    #[arg(long)]
    pub seeds: Option<usize>,
    #[arg(long)]
    pub rng_seed: Option<u64>,
    /// Grid extent in units of sigma0.
    #[arg(long = "rmax")]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub nodes: Option<usize>,
    /// spectral or fd.
    #[arg(long)]
    pub kinetic: Option<String>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub mass_list: Option<String>,
    /// literal_fig2 or physical.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub rho0: Option<f64>,
    #[arg(long = "rmax")]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub nodes: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EquivalenceArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub sigma0: Option<f64>,
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long = "rmax")]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub nodes: Option<usize>,
}

struct Overrides(Vec<(&'static str, String)>);

impl Overrides {
    fn put<T: ToString>(&mut self, key: &'static str, value: &Option<T>) -> &mut Self {
        if let Some(v) = value {
            self.0.push((key, v.to_string()));
        }
        self
    }

    fn common(c: &Common) -> Self {
        let mut o = Overrides(Vec::new());
        o.put("unit_system", &c.unit_system)
            .put("hbar", &c.hbar)
            .put("G", &c.big_g)
            .put("tol", &c.tol)
            .put("out", &c.out.as_ref().map(|p| p.display().to_string()));
        o
    }
}

fn build(name: &str, common: &Common, fill: impl FnOnce(&mut Overrides)) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::from_file(name, path)?,
        None => RunConfig::new(name),
    };
    let mut o = Overrides::common(common);
    fill(&mut o);
    for (k, v) in o.0 {
        cfg.set(k, v)?;
    }
    Ok(cfg)
}

impl Command {
    /// Merges the config file (if any) with the flags.
    pub fn config(&self) -> Result<RunConfig> {
        match self {
            Command::Packet(a) => build("packet", &a.common, |o| {
                o.put("mass", &a.mass)
                    .put("sigma0", &a.sigma0)
                    .put("t_max", &a.t_max)
                    .put("steps", &a.steps)
                    .put("seeds", &a.seeds)
                    .put("dim", &a.dim);
            }),
            Command::Critical(a) => build("critical", &a.common, |o| {
                o.put("mass_list", &a.mass_list);
            }),
            Command::Stationary(a) => build("stationary", &a.common, |o| {
                o.put("mode", &a.mode)
                    .put("mass", &a.mass)
                    .put("rho0", &a.rho0)
                    .put("r_max", &a.r_max)
                    .put("nodes", &a.nodes)
                    .put("max_iterations", &a.max_iterations);
            }),
            Command::Evolve(a) => build("evolve", &a.common, |o| {
                o.put("mode", &a.mode)
                    .put("sigma0", &a.sigma0)
                    .put("mass", &a.mass)
                    .put("g", &a.g)
                    .put("dt", &a.dt)
                    .put("steps", &a.steps)
                    .put("store_every", &a.store_every)
                    .put("seeds", &a.seeds)
                    .put("rng_seed", &a.rng_seed)
                    .put("r_max", &a.r_max)
                    .put("nodes", &a.nodes)
                    .put("kinetic", &a.kinetic);
            }),
            Command::Sweep(a) => build("sweep", &a.common, |o| {
                o.put("mass_list", &a.mass_list)
                    .put("mode", &a.mode)
                    .put("rho0", &a.rho0)
                    .put("r_max", &a.r_max)
                    .put("nodes", &a.nodes);
            }),
            Command::Equivalence(a) => build("equivalence", &a.common, |o| {
                o.put("mass", &a.mass)
                    .put("sigma0", &a.sigma0)
                    .put("g", &a.g)
                    .put("dt", &a.dt)
                    .put("steps", &a.steps)
                    .put("r_max", &a.r_max)
                    .put("nodes", &a.nodes);
            }),
        }
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<()> {
    let cfg = cli.command.config()?;
    let out = Output::new(&cfg);
    match cli.command {
        Command::Packet(_) => run_packet(&cfg, &out),
        Command::Critical(_) => run_critical(&cfg, &out),
        Command::Stationary(_) => run_stationary(&cfg, &out),
        Command::Evolve(_) => run_evolve(&cfg, &out),
        Command::Sweep(_) => run_sweep_command(&cfg, &out),
        Command::Equivalence(_) => run_equivalence(&cfg, &out),
    }
}

/// Parses `args`, runs, reports errors on stderr and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
