//! Run configuration assembled from defaults, a `key = value` file, and
//! command-line overrides, in that order of precedence.

use std::fmt;
use std::path::{Path, PathBuf};

use giantatom::SystemParams;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: expected `key = value`, got `{text}`")]
    NotKeyValue {
        path: PathBuf,
        line: usize,
        text: String,
    },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{key}`: cannot parse `{value}` as {wanted}")]
    BadValue {
        key: String,
        value: String,
        wanted: &'static str,
    },
    #[error("{path}:{line}: {source}")]
    InFile {
        path: PathBuf,
        line: usize,
        source: Box<ConfigError>,
    },
    #[error("no mode given: pass a subcommand or set `mode` in the config file")]
    MissingMode,
    #[error("mode `sweep` needs `sweep`, `sweep_start`, `sweep_stop` (and `sweep_step`)")]
    MissingSweep,
    #[error("mode `figure` needs a preset name")]
    MissingPreset,
    #[error("unknown figure preset `{0}`")]
    UnknownPreset(String),
    #[error("sweep step must be positive, got {0}")]
    BadSweepStep(f64),
    #[error("sweep range [{start}, {stop}] is empty")]
    EmptySweep { start: f64, stop: f64 },
    #[error("excited_atom must be 1 or {n_atoms}, got {given}")]
    BadExcitedAtom { n_atoms: usize, given: usize },
    #[error(transparent)]
    Model(#[from] giantatom::ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Spectrum,
    Dynamics,
    Steady,
    Sweep,
    Validate,
    Figure,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Mode::Spectrum => "spectrum",
            Mode::Dynamics => "dynamics",
            Mode::Steady => "steady",
            Mode::Sweep => "sweep",
            Mode::Validate => "validate",
            Mode::Figure => "figure",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    G0,
    Delta,
    D,
    Z,
}

impl SweepParam {
    pub fn is_integer(self) -> bool {
        matches!(self, SweepParam::D | SweepParam::Z)
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SweepParam::G0 => "g0",
            SweepParam::Delta => "delta",
            SweepParam::D => "d",
            SweepParam::Z => "z",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Solver {
    Volterra,
    Lattice,
    Ww,
    Markov,
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Solver::Volterra => "volterra",
            Solver::Lattice => "lattice",
            Solver::Ww => "ww",
            Solver::Markov => "markov",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Option<Mode>,
    pub preset: Option<String>,
    pub n_atoms: usize,
    pub delta: f64,
    pub hopping: f64,
    pub g0: f64,
    pub d: u32,
    pub z: u32,
    pub lattice_length: usize,
    pub excited_atom: usize,
    pub sweep_param: Option<SweepParam>,
    pub sweep_start: Option<f64>,
    pub sweep_stop: Option<f64>,
    pub sweep_step: Option<f64>,
    pub solvers: Vec<Solver>,
    pub dt: f64,
    pub t_max: f64,
    pub quad_nodes: usize,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: None,
            preset: None,
            n_atoms: 1,
            delta: 0.0,
            hopping: 1.0,
            g0: 0.5,
            d: 1,
            z: 1,
            lattice_length: giantatom::model::DEFAULT_LATTICE_LENGTH,
            excited_atom: 1,
            sweep_param: None,
            sweep_start: None,
            sweep_stop: None,
            sweep_step: None,
            solvers: vec![Solver::Volterra],
            dt: 0.005,
            t_max: 200.0,
            quad_nodes: giantatom::quad::DEFAULT_NODES,
            out: None,
            jobs: None,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str, wanted: &'static str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
        wanted,
    })
}

pub fn parse_mode(value: &str) -> Result<Mode, ConfigError> {
    match value {
        "spectrum" => Ok(Mode::Spectrum),
        "dynamics" => Ok(Mode::Dynamics),
        "steady" => Ok(Mode::Steady),
        "sweep" => Ok(Mode::Sweep),
        "validate" => Ok(Mode::Validate),
        "figure" => Ok(Mode::Figure),
        other => Err(ConfigError::BadValue {
            key: "mode".to_string(),
            value: other.to_string(),
            wanted: "spectrum|dynamics|steady|sweep|validate|figure",
        }),
    }
}

fn parse_sweep_param(value: &str) -> Result<SweepParam, ConfigError> {
    match value {
        "g0" => Ok(SweepParam::G0),
        "delta" => Ok(SweepParam::Delta),
        "d" => Ok(SweepParam::D),
        "z" => Ok(SweepParam::Z),
        other => Err(ConfigError::BadValue {
            key: "sweep".to_string(),
            value: other.to_string(),
            wanted: "g0|delta|d|z",
        }),
    }
}

pub fn parse_solver(value: &str) -> Result<Solver, ConfigError> {
    match value {
        "volterra" => Ok(Solver::Volterra),
        "lattice" => Ok(Solver::Lattice),
        "ww" => Ok(Solver::Ww),
        "markov" => Ok(Solver::Markov),
        other => Err(ConfigError::BadValue {
            key: "solvers".to_string(),
            value: other.to_string(),
            wanted: "volterra|lattice|ww|markov",
        }),
    }
}

pub fn parse_solver_list(value: &str) -> Result<Vec<Solver>, ConfigError> {
    let mut out = Vec::new();
    for item in value.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let s = parse_solver(item)?;
        if !out.contains(&s) {
            out.push(s);
        }
    }
    if out.is_empty() {
        return Err(ConfigError::BadValue {
            key: "solvers".to_string(),
            value: value.to_string(),
            wanted: "non-empty list of volterra|lattice|ww|markov",
        });
    }
    out.sort();
    Ok(out)
}

impl RunConfig {
    /// Applies one `key = value` pair.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "mode" => self.mode = Some(parse_mode(value)?),
            "preset" => self.preset = Some(value.to_string()),
            "n_atoms" => self.n_atoms = parse(key, value, "1 or 2")?,
            "delta" => self.delta = parse(key, value, "a real number")?,
            "hopping" => self.hopping = parse(key, value, "a real number")?,
            "g0" => self.g0 = parse(key, value, "a real number")?,
            "d" => self.d = parse(key, value, "a positive integer")?,
            "z" => self.z = parse(key, value, "a positive integer")?,
            "lattice_length" => self.lattice_length = parse(key, value, "a positive integer")?,
            "excited_atom" => self.excited_atom = parse(key, value, "1 or 2")?,
            "sweep" => self.sweep_param = Some(parse_sweep_param(value)?),
            "sweep_start" => self.sweep_start = Some(parse(key, value, "a real number")?),
            "sweep_stop" => self.sweep_stop = Some(parse(key, value, "a real number")?),
            "sweep_step" => self.sweep_step = Some(parse(key, value, "a real number")?),
            "solvers" => self.solvers = parse_solver_list(value)?,
            "dt" => self.dt = parse(key, value, "a positive real number")?,
            "t_max" => self.t_max = parse(key, value, "a positive real number")?,
            "quad_nodes" => self.quad_nodes = parse(key, value, "a positive integer")?,
            "out" => self.out = Some(PathBuf::from(value)),
            "jobs" => self.jobs = Some(parse(key, value, "a positive integer")?),
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Reads a flat `key = value` file; `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::NotKeyValue {
                    path: path.to_path_buf(),
                    line: i + 1,
                    text: line.to_string(),
                });
            };
            self.set(key.trim(), value.trim()).map_err(|source| ConfigError::InFile {
                path: path.to_path_buf(),
                line: i + 1,
                source: Box::new(source),
            })?;
        }
        Ok(())
    }

    /// Builds the validated physical parameter set.
    pub fn params(&self) -> Result<SystemParams, ConfigError> {
        let base = match self.n_atoms {
            1 => SystemParams::single(self.delta, self.g0, self.d)?,
            _ => SystemParams::pair(self.delta, self.g0, self.d, self.z)?,
        };
        let p = SystemParams { hopping: self.hopping, ..base }
            .with_lattice_length(self.lattice_length)?;
        p.validate()?;
        Ok(p)
    }

    /// Initial atomic amplitudes: the configured atom starts excited.
    pub fn initial_state(&self) -> Result<Vec<num_complex::Complex64>, ConfigError> {
        if self.excited_atom == 0 || self.excited_atom > self.n_atoms {
            return Err(ConfigError::BadExcitedAtom {
                n_atoms: self.n_atoms,
                given: self.excited_atom,
            });
        }
        let mut c0 = vec![num_complex::Complex64::new(0.0, 0.0); self.n_atoms];
        c0[self.excited_atom - 1] = num_complex::Complex64::new(1.0, 0.0);
        Ok(c0)
    }

    /// Materializes the sweep as `(value, params)` points; a missing sweep
    /// collapses to the single configured point. Integer parameters step
    /// by one regardless of `sweep_step`.
    pub fn sweep_points(&self) -> Result<Vec<(f64, SystemParams)>, ConfigError> {
        let Some(param) = self.sweep_param else {
            if self.sweep_start.is_some() || self.sweep_stop.is_some() {
                return Err(ConfigError::MissingSweep);
            }
            return Ok(vec![(0.0, self.params()?)]);
        };
        let (Some(start), Some(stop)) = (self.sweep_start, self.sweep_stop) else {
            return Err(ConfigError::MissingSweep);
        };
        let step = if param.is_integer() {
            1.0
        } else {
            let s = self.sweep_step.ok_or(ConfigError::MissingSweep)?;
            if s <= 0.0 {
                return Err(ConfigError::BadSweepStep(s));
            }
            s
        };
        if stop < start {
            return Err(ConfigError::EmptySweep { start, stop });
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        let mut points = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let value = start + i as f64 * step;
            let mut cfg = self.clone();
            match param {
                SweepParam::G0 => cfg.g0 = value,
                SweepParam::Delta => cfg.delta = value,
                SweepParam::D => cfg.d = value.round() as u32,
                SweepParam::Z => cfg.z = value.round() as u32,
            }
            points.push((value, cfg.params()?));
        }
        Ok(points)
    }

    /// Deterministic `key = value` echo for output headers; scheduling
    /// and path options are omitted so identical physics gives identical
    /// bytes.
    pub fn echo_lines(&self) -> Vec<String> {
        let mut lines = Vec::new();
        if let Some(mode) = self.mode {
            lines.push(format!("mode = {mode}"));
        }
        if let Some(preset) = &self.preset {
            lines.push(format!("preset = {preset}"));
        }
        lines.push(format!("n_atoms = {}", self.n_atoms));
        let swept = |p: SweepParam| self.sweep_param == Some(p);
        if !swept(SweepParam::Delta) {
            lines.push(format!("delta = {}", self.delta));
        }
        lines.push(format!("hopping = {}", self.hopping));
        if !swept(SweepParam::G0) {
            lines.push(format!("g0 = {}", self.g0));
        }
        if !swept(SweepParam::D) {
            lines.push(format!("d = {}", self.d));
        }
        if self.n_atoms == 2 {
            if !swept(SweepParam::Z) {
                lines.push(format!("z = {}", self.z));
            }
            lines.push(format!("excited_atom = {}", self.excited_atom));
        }
        if self.solvers.contains(&Solver::Lattice) {
            lines.push(format!("lattice_length = {}", self.lattice_length));
        }
        if let Some(param) = self.sweep_param {
            lines.push(format!("sweep = {param}"));
            if let Some(v) = self.sweep_start {
                lines.push(format!("sweep_start = {v}"));
            }
            if let Some(v) = self.sweep_stop {
                lines.push(format!("sweep_stop = {v}"));
            }
            if !param.is_integer() {
                if let Some(v) = self.sweep_step {
                    lines.push(format!("sweep_step = {v}"));
                }
            }
        }
        if matches!(self.mode, Some(Mode::Dynamics)) {
            let names: Vec<String> = self.solvers.iter().map(|s| s.to_string()).collect();
            lines.push(format!("solvers = {}", names.join(",")));
            lines.push(format!("dt = {}", self.dt));
            lines.push(format!("t_max = {}", self.t_max));
        }
        lines.push(format!("quad_nodes = {}", self.quad_nodes));
        lines
    }
}
