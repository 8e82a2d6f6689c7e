//! Command-line driver: spectra, dynamics, steady states, sweeps,
//! invariant validation, and published-panel regeneration as CSV.

mod config;
mod figures;
mod output;
mod run;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{parse_solver_list, ConfigError, Mode, RunConfig};
use run::AppError;

#[derive(Parser)]
#[command(
    name = "giantatom",
    version,
    about = "Giant atoms coupled to a resonator waveguide: spectra, exact dynamics, steady states",
    after_help = "Configuration keys (config file or --set): mode, preset, n_atoms, delta, \
                  hopping, g0, d, z, lattice_length, excited_atom, sweep, sweep_start, \
                  sweep_stop, sweep_step, solvers, dt, t_max, quad_nodes, out, jobs."
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// flat `key = value` configuration file; flags override it
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// output file, or directory for sweep and figure modes (default: stdout / `.`)
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// worker threads for sweep points (default: available parallelism)
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// integration time step
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// final evolution time
    #[arg(long, global = true)]
    t_max: Option<f64>,
    /// comma-separated subset of volterra,lattice,ww,markov
    #[arg(long, global = true, value_name = "LIST")]
    solvers: Option<String>,
    /// Gauss-Chebyshev node count for band integrals
    #[arg(long, global = true, value_name = "N")]
    quad_nodes: Option<usize>,
    /// set any configuration key, as key=value (repeatable)
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Bound-state catalogue, optionally along a parameter sweep
    Spectrum,
    /// Time evolution of the atomic amplitudes by the selected solvers
    Dynamics,
    /// Residue-built long-time state, optionally along a parameter sweep
    Steady,
    /// Spectrum plus steady state along a required parameter sweep
    Sweep,
    /// Machine-readable report of the invariant suites
    Validate,
    /// Regenerate the data behind one published panel (fig2a ... fig5d)
    Figure {
        /// preset name, e.g. fig2a, fig3, fig5d
        preset: String,
    },
}

fn build_config(cli: &Cli) -> Result<RunConfig, AppError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    for item in &cli.set {
        let Some((key, value)) = item.split_once('=') else {
            return Err(AppError::Config(format!("--set expects key=value, got `{item}`")));
        };
        cfg.set(key.trim(), value.trim()).map_err(AppError::from)?;
    }
    if let Some(out) = &cli.out {
        cfg.out = Some(out.clone());
    }
    if let Some(jobs) = cli.jobs {
        cfg.jobs = Some(jobs);
    }
    if let Some(dt) = cli.dt {
        cfg.dt = dt;
    }
    if let Some(t_max) = cli.t_max {
        cfg.t_max = t_max;
    }
    if let Some(solvers) = &cli.solvers {
        cfg.solvers = parse_solver_list(solvers)?;
    }
    if let Some(quad_nodes) = cli.quad_nodes {
        cfg.quad_nodes = quad_nodes;
    }
    match &cli.command {
        Some(Command::Spectrum) => cfg.mode = Some(Mode::Spectrum),
        Some(Command::Dynamics) => cfg.mode = Some(Mode::Dynamics),
        Some(Command::Steady) => cfg.mode = Some(Mode::Steady),
        Some(Command::Sweep) => cfg.mode = Some(Mode::Sweep),
        Some(Command::Validate) => cfg.mode = Some(Mode::Validate),
        Some(Command::Figure { preset }) => {
            cfg.mode = Some(Mode::Figure);
            cfg.preset = Some(preset.clone());
        }
        None => {}
    }
    Ok(cfg)
}

fn dispatch(cfg: &RunConfig) -> Result<(), AppError> {
    match cfg.mode.ok_or(ConfigError::MissingMode)? {
        Mode::Spectrum => run::run_spectrum(cfg),
        Mode::Dynamics => run::run_dynamics(cfg),
        Mode::Steady => run::run_steady(cfg),
        Mode::Sweep => run::run_sweep(cfg),
        Mode::Validate => run::run_validate(cfg),
        Mode::Figure => {
            let preset = cfg.preset.clone().ok_or(ConfigError::MissingPreset)?;
            run::run_figure(cfg, &preset)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = build_config(&cli).and_then(|cfg| match cfg.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| AppError::Config(e.to_string()))?
            .install(|| dispatch(&cfg)),
        None => dispatch(&cfg),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
