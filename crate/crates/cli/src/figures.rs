//! Named figure presets: each one expands to the spectrum sweeps and
//! dynamics runs behind one published panel.

use giantatom::SystemParams;

use crate::config::{ConfigError, Mode, RunConfig, Solver, SweepParam};

/// One output file of a preset.
#[derive(Debug, Clone)]
pub struct FigureJob {
    pub name: String,
    pub mode: Mode,
    pub n_atoms: usize,
    pub delta: f64,
    pub g0: f64,
    pub d: u32,
    pub z: u32,
    pub sweep: Option<(SweepParam, Vec<f64>)>,
    pub solvers: Vec<Solver>,
}

impl FigureJob {
    /// Job configuration: the preset fixes the physics, the caller keeps
    /// the numerics (`dt`, `t_max`, `quad_nodes`).
    pub fn config(&self, user: &RunConfig) -> RunConfig {
        let mut c = user.clone();
        c.mode = Some(self.mode);
        c.n_atoms = self.n_atoms;
        c.delta = self.delta;
        c.hopping = 1.0;
        c.g0 = self.g0;
        c.d = self.d;
        c.z = self.z;
        c.excited_atom = 1;
        c.solvers = self.solvers.clone();
        c.sweep_param = self.sweep.as_ref().map(|(p, _)| *p);
        c.sweep_start = self.sweep.as_ref().and_then(|(_, v)| v.first().copied());
        c.sweep_stop = self.sweep.as_ref().and_then(|(_, v)| v.last().copied());
        c.sweep_step = None;
        c.out = None;
        c
    }

    /// Sweep points of this job; dynamics jobs have exactly one.
    pub fn points(&self, cfg: &RunConfig) -> Result<Vec<(f64, SystemParams)>, ConfigError> {
        let Some((param, values)) = &self.sweep else {
            return Ok(vec![(0.0, cfg.params()?)]);
        };
        let mut points = Vec::with_capacity(values.len());
        for &v in values {
            let mut c = cfg.clone();
            match param {
                SweepParam::G0 => c.g0 = v,
                SweepParam::Delta => c.delta = v,
                SweepParam::D => c.d = v.round() as u32,
                SweepParam::Z => c.z = v.round() as u32,
            }
            points.push((v, c.params()?));
        }
        Ok(points)
    }
}

fn frange(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}

struct Base {
    n_atoms: usize,
    delta: f64,
    g0: f64,
    d: u32,
    z: u32,
}

const fn single(delta: f64, g0: f64, d: u32) -> Base {
    Base { n_atoms: 1, delta, g0, d, z: 1 }
}

const fn pair(delta: f64, g0: f64, d: u32, z: u32) -> Base {
    Base { n_atoms: 2, delta, g0, d, z }
}

fn sweep_job(name: &str, mode: Mode, base: Base, param: SweepParam, values: Vec<f64>) -> FigureJob {
    FigureJob {
        name: name.to_string(),
        mode,
        n_atoms: base.n_atoms,
        delta: base.delta,
        g0: base.g0,
        d: base.d,
        z: base.z,
        sweep: Some((param, values)),
        solvers: vec![Solver::Volterra],
    }
}

fn dynamics_job(name: String, base: Base, solvers: &[Solver]) -> FigureJob {
    FigureJob {
        name,
        mode: Mode::Dynamics,
        n_atoms: base.n_atoms,
        delta: base.delta,
        g0: base.g0,
        d: base.d,
        z: base.z,
        sweep: None,
        solvers: solvers.to_vec(),
    }
}

const VOLTERRA: &[Solver] = &[Solver::Volterra];
const VOLTERRA_WW: &[Solver] = &[Solver::Volterra, Solver::Ww];

fn panel(name: &str) -> Option<Vec<FigureJob>> {
    let jobs = match name {
        // one atom, detuning -0.6, neighboring coupling sites
        "fig2a" => [0.4, 1.2, 2.7]
            .iter()
            .map(|&g0| dynamics_job(format!("fig2a_g0_{g0}.csv"), single(-0.6, g0, 1), VOLTERRA))
            .collect(),
        "fig2b" => vec![sweep_job(
            "fig2b_spectrum_vs_g0.csv",
            Mode::Spectrum,
            single(-0.6, 0.5, 1),
            SweepParam::G0,
            frange(0.0, 3.0, 0.01),
        )],
        "fig2c" => vec![sweep_job(
            "fig2c_steady_vs_g0.csv",
            Mode::Steady,
            single(-0.6, 0.5, 1),
            SweepParam::G0,
            frange(0.0, 3.0, 0.01),
        )],
        // one atom, coupling 0.8, site separation 3
        "fig2d" => vec![sweep_job(
            "fig2d_spectrum_vs_delta.csv",
            Mode::Spectrum,
            single(0.0, 0.8, 3),
            SweepParam::Delta,
            frange(-2.0, 2.0, 0.01),
        )],
        "fig2e" => vec![sweep_job(
            "fig2e_steady_vs_delta.csv",
            Mode::Steady,
            single(0.0, 0.8, 3),
            SweepParam::Delta,
            frange(-2.0, 2.0, 0.01),
        )],
        "fig2f" => [-1.0, 0.0, 0.5]
            .iter()
            .map(|&delta| {
                dynamics_job(format!("fig2f_delta_{delta}.csv"), single(delta, 0.8, 3), VOLTERRA_WW)
            })
            .collect(),
        // one atom, coupling 0.8, site separation 2
        "fig2g" => vec![sweep_job(
            "fig2g_spectrum_vs_delta.csv",
            Mode::Spectrum,
            single(0.0, 0.8, 2),
            SweepParam::Delta,
            frange(-2.0, 2.0, 0.01),
        )],
        "fig2h" => vec![sweep_job(
            "fig2h_steady_vs_delta.csv",
            Mode::Steady,
            single(0.0, 0.8, 2),
            SweepParam::Delta,
            frange(-2.0, 2.0, 0.01),
        )],
        "fig2i" => [0.0, 1.0]
            .iter()
            .map(|&delta| {
                dynamics_job(format!("fig2i_delta_{delta}.csv"), single(delta, 0.8, 2), VOLTERRA_WW)
            })
            .collect(),
        // one atom at zero detuning, even or odd site separations
        "fig3a" => {
            let mut jobs = vec![sweep_job(
                "fig3a_spectrum_vs_d.csv",
                Mode::Spectrum,
                single(0.0, 0.8, 2),
                SweepParam::D,
                vec![2.0, 4.0, 6.0, 8.0, 10.0],
            )];
            jobs.extend([2, 6, 10].iter().map(|&d| {
                dynamics_job(format!("fig3a_d_{d}.csv"), single(0.0, 0.8, d), VOLTERRA)
            }));
            jobs
        }
        "fig3b" => {
            let mut jobs = vec![sweep_job(
                "fig3b_spectrum_vs_d.csv",
                Mode::Spectrum,
                single(0.0, 0.8, 1),
                SweepParam::D,
                vec![1.0, 3.0, 5.0, 7.0, 9.0],
            )];
            jobs.extend([1, 3, 5].iter().map(|&d| {
                dynamics_job(format!("fig3b_d_{d}.csv"), single(0.0, 0.8, d), VOLTERRA)
            }));
            jobs
        }
        // two atoms, detuning 0.16, separations d=3 z=1
        "fig4a" => {
            let mut jobs = vec![sweep_job(
                "fig4a_spectrum_vs_g0.csv",
                Mode::Spectrum,
                pair(0.16, 0.5, 3, 1),
                SweepParam::G0,
                frange(0.0, 1.2, 0.01),
            )];
            jobs.extend([0.4, 0.7, 1.0].iter().map(|&g0| {
                dynamics_job(format!("fig4a_g0_{g0}.csv"), pair(0.16, g0, 3, 1), VOLTERRA)
            }));
            jobs
        }
        // two atoms, detuning 1.04, separations d=2 z=1
        "fig4b" => {
            let mut jobs = vec![sweep_job(
                "fig4b_spectrum_vs_g0.csv",
                Mode::Spectrum,
                pair(1.04, 0.5, 2, 1),
                SweepParam::G0,
                frange(0.0, 1.2, 0.01),
            )];
            jobs.extend([0.2, 0.6, 1.0].iter().map(|&g0| {
                dynamics_job(format!("fig4b_g0_{g0}.csv"), pair(1.04, g0, 2, 1), VOLTERRA)
            }));
            jobs
        }
        // two atoms, detuning 0.36, coupling 0.6, d=3, swept gap
        "fig4c" => {
            let mut jobs = vec![sweep_job(
                "fig4c_spectrum_vs_z.csv",
                Mode::Spectrum,
                pair(0.36, 0.6, 3, 1),
                SweepParam::Z,
                (1..=8).map(f64::from).collect(),
            )];
            jobs.extend([1, 3, 5].iter().map(|&z| {
                dynamics_job(format!("fig4c_z_{z}.csv"), pair(0.36, 0.6, 3, z), VOLTERRA)
            }));
            jobs
        }
        // two atoms, coupling 0.6, d=z=3, swept detuning
        "fig5a" => vec![sweep_job(
            "fig5a_spectrum_vs_delta.csv",
            Mode::Spectrum,
            pair(0.0, 0.6, 3, 3),
            SweepParam::Delta,
            frange(-2.0, 2.0, 0.01),
        )],
        // panels b, c, d plot the same three runs: populations of both
        // atoms and the concurrence are columns of one dynamics file
        "fig5b" | "fig5c" | "fig5d" => [0.36, 1.0, -1.0]
            .iter()
            .map(|&delta| {
                dynamics_job(format!("fig5_dynamics_delta_{delta}.csv"), pair(delta, 0.6, 3, 3), VOLTERRA)
            })
            .collect(),
        _ => return None,
    };
    Some(jobs)
}

fn aggregate(panels: &[&str]) -> Vec<FigureJob> {
    let mut jobs: Vec<FigureJob> = Vec::new();
    for p in panels {
        for job in panel(p).expect("aggregate lists known panels") {
            if !jobs.iter().any(|j| j.name == job.name) {
                jobs.push(job);
            }
        }
    }
    jobs
}

/// Expands a preset name into its jobs.
pub fn preset_jobs(preset: &str) -> Result<Vec<FigureJob>, ConfigError> {
    if let Some(jobs) = panel(preset) {
        return Ok(jobs);
    }
    let jobs = match preset {
        "fig2" => aggregate(&[
            "fig2a", "fig2b", "fig2c", "fig2d", "fig2e", "fig2f", "fig2g", "fig2h", "fig2i",
        ]),
        "fig3" => aggregate(&["fig3a", "fig3b"]),
        "fig4" => aggregate(&["fig4a", "fig4b", "fig4c"]),
        "fig5" => aggregate(&["fig5a", "fig5b"]),
        other => return Err(ConfigError::UnknownPreset(other.to_string())),
    };
    Ok(jobs)
}

/// Every preset name, one line for help and error messages.
pub const PRESET_LIST: &str = "fig2 fig2a-fig2i, fig3 fig3a-fig3b, fig4 fig4a-fig4c, fig5 fig5a-fig5d";
