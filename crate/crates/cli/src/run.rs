//! Mode runners: each one turns a configuration into CSV artifacts.

use std::path::{Path, PathBuf};

use giantatom::dynamics::{
    solve_markov, solve_volterra, solve_wigner_weisskopf, steady_state, DynamicsError, Trajectory,
};
use giantatom::dynamics::lattice::Lattice;
use giantatom::observables::{amplitude_concurrence, ObservablesError};
use giantatom::spectrum::{full_spectrum, SpectrumError};
use giantatom::{ModelError, SpectrumOptions, SpectrumResult, SystemParams};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use thiserror::Error;

use crate::config::{ConfigError, Mode, RunConfig, Solver};
use crate::output::{fmt_f, Sink};

/// Failures split by exit code: configuration problems exit 2, broken
/// physical invariants exit 1.
#[derive(Debug, Error)]
pub enum AppError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Invariant(String),
}

impl AppError {
    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Config(_) => 2,
            AppError::Invariant(_) => 1,
        }
    }
}

impl From<ConfigError> for AppError {
    fn from(e: ConfigError) -> Self {
        AppError::Config(e.to_string())
    }
}

impl From<ModelError> for AppError {
    fn from(e: ModelError) -> Self {
        AppError::Config(e.to_string())
    }
}

impl From<SpectrumError> for AppError {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::Model(m) => AppError::Config(m.to_string()),
            other => AppError::Invariant(other.to_string()),
        }
    }
}

impl From<DynamicsError> for AppError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::InvalidInitialState(_)
            | DynamicsError::InvalidGrid { .. }
            | DynamicsError::DetuningOutsideBand { .. } => AppError::Config(e.to_string()),
            DynamicsError::Model(m) => AppError::Config(m.to_string()),
            DynamicsError::Unstable { .. } => AppError::Invariant(e.to_string()),
            DynamicsError::Spectrum(s) => s.into(),
        }
    }
}

impl From<ObservablesError> for AppError {
    fn from(e: ObservablesError) -> Self {
        AppError::Invariant(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Config(format!("i/o error: {e}"))
    }
}

fn sink_for(cfg: &RunConfig, default_name: &str) -> Result<Sink, AppError> {
    match &cfg.out {
        Some(path) if path.is_dir() => Ok(Sink::file(&path.join(default_name))?),
        Some(path) => Ok(Sink::file(path)?),
        None => Ok(Sink::stdout()),
    }
}

fn spectrum_options(cfg: &RunConfig) -> SpectrumOptions {
    SpectrumOptions { quad_nodes: cfg.quad_nodes, ..SpectrumOptions::default() }
}

pub const SPECTRUM_COLUMNS: [&str; 7] =
    ["sweep_value", "energy", "class", "boc_type", "channel", "residue_re", "residue_im"];

fn spectrum_rows(sweep_value: f64, spec: &SpectrumResult) -> Vec<Vec<String>> {
    spec.states
        .iter()
        .map(|s| {
            vec![
                fmt_f(sweep_value),
                fmt_f(s.energy),
                s.class.to_string(),
                s.boc_type.map_or_else(|| "-".to_string(), |t| t.to_string()),
                s.channel.to_string(),
                fmt_f(s.residue),
                fmt_f(0.0),
            ]
        })
        .collect()
}

fn solve_points(
    cfg: &RunConfig,
    points: &[(f64, SystemParams)],
) -> Result<Vec<(f64, SpectrumResult)>, AppError> {
    let opts = spectrum_options(cfg);
    points
        .par_iter()
        .map(|(v, p)| Ok((*v, full_spectrum(p, &opts)?)))
        .collect()
}

pub fn run_spectrum(cfg: &RunConfig) -> Result<(), AppError> {
    let points = cfg.sweep_points()?;
    let spectra = solve_points(cfg, &points)?;
    let mut sink = sink_for(cfg, "spectrum.csv")?;
    write_spectrum(&mut sink, cfg, &spectra)?;
    sink.finish()?;
    Ok(())
}

fn write_spectrum(
    sink: &mut Sink,
    cfg: &RunConfig,
    spectra: &[(f64, SpectrumResult)],
) -> Result<(), AppError> {
    sink.header("spectrum-v1", &cfg.echo_lines(), &SPECTRUM_COLUMNS)?;
    for (v, spec) in spectra {
        for row in spectrum_rows(*v, spec) {
            sink.row(&row)?;
        }
    }
    Ok(())
}

pub fn steady_columns(n_atoms: usize) -> Vec<String> {
    let mut cols = vec!["sweep_value".to_string()];
    for atom in 1..=n_atoms {
        cols.push(format!("atom{atom}_pop_min"));
        cols.push(format!("atom{atom}_pop_mean"));
        cols.push(format!("atom{atom}_pop_max"));
    }
    cols.push("frequencies".to_string());
    cols
}

/// Beat frequencies `|E_i - E_j|` of the long-time populations, pooled
/// over atoms, sorted, deduplicated.
fn beat_frequencies(steady: &giantatom::dynamics::SteadyState, n_atoms: usize) -> Vec<f64> {
    let mut beats = Vec::new();
    for atom in 0..n_atoms {
        let e = steady.frequencies(atom);
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                beats.push((e[i] - e[j]).abs());
            }
        }
    }
    beats.sort_by(|a, b| a.partial_cmp(b).unwrap());
    beats.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    beats
}

pub fn run_steady(cfg: &RunConfig) -> Result<(), AppError> {
    let points = cfg.sweep_points()?;
    let spectra = solve_points(cfg, &points)?;
    let mut sink = sink_for(cfg, "steady.csv")?;
    write_steady(&mut sink, cfg, &spectra)?;
    sink.finish()?;
    Ok(())
}

fn write_steady(
    sink: &mut Sink,
    cfg: &RunConfig,
    spectra: &[(f64, SpectrumResult)],
) -> Result<(), AppError> {
    let c0 = cfg.initial_state()?;
    let columns = steady_columns(cfg.n_atoms);
    let column_refs: Vec<&str> = columns.iter().map(String::as_str).collect();
    sink.header("steady-v1", &cfg.echo_lines(), &column_refs)?;
    for (v, spec) in spectra {
        let steady = steady_state(spec, &c0)?;
        let mut row = vec![fmt_f(*v)];
        for atom in 0..cfg.n_atoms {
            let (min, mean, max) = steady.population_envelope(atom);
            row.push(fmt_f(min));
            row.push(fmt_f(mean));
            row.push(fmt_f(max));
        }
        let beats: Vec<String> = beat_frequencies(&steady, cfg.n_atoms).iter().map(|&b| fmt_f(b)).collect();
        row.push(beats.join(";"));
        sink.row(&row)?;
    }
    Ok(())
}

pub fn run_sweep(cfg: &RunConfig) -> Result<(), AppError> {
    if cfg.sweep_param.is_none() {
        return Err(ConfigError::MissingSweep.into());
    }
    let points = cfg.sweep_points()?;
    let spectra = solve_points(cfg, &points)?;
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let mut sink = Sink::file(&dir.join("spectrum.csv"))?;
    write_spectrum(&mut sink, cfg, &spectra)?;
    sink.finish()?;
    let mut sink = Sink::file(&dir.join("steady.csv"))?;
    write_steady(&mut sink, cfg, &spectra)?;
    sink.finish()?;
    Ok(())
}

pub fn dynamics_columns(solvers: &[Solver], n_atoms: usize) -> Vec<String> {
    let mut cols = vec!["t".to_string()];
    for s in solvers {
        for atom in 1..=n_atoms {
            cols.push(format!("{s}_atom{atom}_re"));
            cols.push(format!("{s}_atom{atom}_im"));
            cols.push(format!("{s}_atom{atom}_pop"));
        }
        if n_atoms == 2 {
            cols.push(format!("{s}_concurrence"));
        }
    }
    cols
}

fn solve_one(
    solver: Solver,
    p: &SystemParams,
    c0: &[C64],
    cfg: &RunConfig,
) -> Result<Trajectory, AppError> {
    match solver {
        Solver::Volterra => Ok(solve_volterra(p, c0, cfg.dt, cfg.t_max)?),
        Solver::Ww => Ok(solve_wigner_weisskopf(p, c0, cfg.dt, cfg.t_max)?),
        Solver::Markov => Ok(solve_markov(p, c0, cfg.dt, cfg.t_max, cfg.quad_nodes)?),
        Solver::Lattice => {
            let lattice = Lattice::new(p);
            let n = (cfg.t_max / cfg.dt).round() as usize;
            let times: Vec<f64> = (0..=n).map(|i| i as f64 * cfg.dt).collect();
            if cfg.t_max > lattice.reflection_time() {
                eprintln!(
                    "warning: t_max = {} exceeds the lattice reflection time {:.1}; \
                     increase lattice_length for clean late times",
                    cfg.t_max,
                    lattice.reflection_time()
                );
            }
            let amplitudes = lattice.evolve(c0, &times);
            Ok(Trajectory { times, amplitudes })
        }
    }
}

pub fn run_dynamics(cfg: &RunConfig) -> Result<(), AppError> {
    let p = cfg.params()?;
    let c0 = cfg.initial_state()?;
    let trajectories: Vec<(Solver, Trajectory)> = cfg
        .solvers
        .par_iter()
        .map(|&s| Ok((s, solve_one(s, &p, &c0, cfg)?)))
        .collect::<Result<_, AppError>>()?;
    let mut sink = sink_for(cfg, "dynamics.csv")?;
    write_dynamics(&mut sink, cfg, &trajectories)?;
    sink.finish()?;
    Ok(())
}

fn write_dynamics(
    sink: &mut Sink,
    cfg: &RunConfig,
    trajectories: &[(Solver, Trajectory)],
) -> Result<(), AppError> {
    let columns = dynamics_columns(&cfg.solvers, cfg.n_atoms);
    let column_refs: Vec<&str> = columns.iter().map(String::as_str).collect();
    sink.header("dynamics-v1", &cfg.echo_lines(), &column_refs)?;
    let times = &trajectories[0].1.times;
    for (_, traj) in trajectories {
        debug_assert_eq!(traj.times.len(), times.len());
    }
    for (i, &t) in times.iter().enumerate() {
        let mut row = vec![fmt_f(t)];
        for (_, traj) in trajectories {
            for atom in 0..cfg.n_atoms {
                let c = traj.amplitudes[atom][i];
                row.push(fmt_f(c.re));
                row.push(fmt_f(c.im));
                row.push(fmt_f(c.norm_sqr()));
            }
            if cfg.n_atoms == 2 {
                let c = amplitude_concurrence(traj.amplitudes[0][i], traj.amplitudes[1][i])?;
                row.push(fmt_f(c));
            }
        }
        sink.row(&row)?;
    }
    Ok(())
}

pub fn run_validate(cfg: &RunConfig) -> Result<(), AppError> {
    let suites = crate::validate::run_suites();
    let mut sink = sink_for(cfg, "validate.csv")?;
    let echo = vec![format!("mode = {}", Mode::Validate)];
    sink.header("validate-v1", &echo, &["suite", "status", "measured", "tolerance"])?;
    let mut failed = Vec::new();
    for suite in &suites {
        let status = if suite.pass { "pass" } else { "fail" };
        sink.row(&[
            suite.name.to_string(),
            status.to_string(),
            fmt_f(suite.measured),
            fmt_f(suite.tolerance),
        ])?;
        if !suite.pass {
            failed.push(suite.name);
        }
    }
    sink.finish()?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(AppError::Invariant(format!("invariant suites failed: {}", failed.join(", "))))
    }
}

pub fn run_figure(cfg: &RunConfig, preset: &str) -> Result<(), AppError> {
    let jobs = crate::figures::preset_jobs(preset).map_err(|e| {
        AppError::Config(format!("{e}; available: {}", crate::figures::PRESET_LIST))
    })?;
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;
    jobs.par_iter().try_for_each(|job| run_figure_job(cfg, preset, job, &dir))?;
    for job in &jobs {
        eprintln!("wrote {}", dir.join(&job.name).display());
    }
    Ok(())
}

fn run_figure_job(
    cfg: &RunConfig,
    preset: &str,
    job: &crate::figures::FigureJob,
    dir: &Path,
) -> Result<(), AppError> {
    let mut job_cfg = job.config(cfg);
    job_cfg.preset = Some(preset.to_string());
    let path = dir.join(&job.name);
    match job_cfg.mode {
        Some(Mode::Spectrum) => {
            let points = job.points(&job_cfg)?;
            let spectra = solve_points(&job_cfg, &points)?;
            let mut sink = Sink::file(&path)?;
            write_spectrum(&mut sink, &job_cfg, &spectra)?;
            sink.finish()?;
        }
        Some(Mode::Steady) => {
            let points = job.points(&job_cfg)?;
            let spectra = solve_points(&job_cfg, &points)?;
            let mut sink = Sink::file(&path)?;
            write_steady(&mut sink, &job_cfg, &spectra)?;
            sink.finish()?;
        }
        Some(Mode::Dynamics) => {
            let p = job_cfg.params()?;
            let c0 = job_cfg.initial_state()?;
            let trajectories: Vec<(Solver, Trajectory)> = job_cfg
                .solvers
                .iter()
                .map(|&s| Ok((s, solve_one(s, &p, &c0, &job_cfg)?)))
                .collect::<Result<_, AppError>>()?;
            let mut sink = Sink::file(&path)?;
            write_dynamics(&mut sink, &job_cfg, &trajectories)?;
            sink.finish()?;
        }
        _ => unreachable!("figure jobs are spectrum, steady, or dynamics"),
    }
    Ok(())
}
