//! Atomic excitation dynamics: exact integration of the memory-kernel
//! equation, Wigner-Weisskopf and Markov approximations, and steady states
//! assembled from bound-state residues.
//!
//! The amplitude of each parity channel obeys
//!
//! ```text
//!   u'(t) = -i delta u(t) - integral_0^t G_ch(t - tau) u(tau) dtau
//! ```
//!
//! with the channel memory kernel `G_ch`. Two-atom dynamics decouples into
//! the even and odd channels with `u_e(0) = c1(0) + c2(0)`,
//! `u_o(0) = c1(0) - c2(0)`, and `c1 = (u_e + u_o)/2`,
//! `c2 = (u_e - u_o)/2`.

pub mod lattice;

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::model::{channel_density, memory_kernel_channel, Channel, ModelError, SystemParams};
use crate::quad::BandRule;
use crate::spectrum::{lamb_shift, SpectralChannel, SpectrumError, SpectrumResult};

/// Default integration step, in units of `1/hopping`.
pub const DEFAULT_DT: f64 = 0.005;
/// Default evolution horizon, in units of `1/hopping`.
pub const DEFAULT_T_MAX: f64 = 200.0;

/// Errors from the dynamics solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("invalid initial state: {0}")]
    InvalidInitialState(String),
    #[error("invalid time grid: dt = {dt}, t_max = {t_max}")]
    InvalidGrid { dt: f64, t_max: f64 },
    #[error("channel norm grew to {norm} at t = {t}; integration unstable, reduce dt")]
    Unstable { t: f64, norm: f64 },
    #[error("flat-band decay needs a detuning strictly inside the band, got {delta}")]
    DetuningOutsideBand { delta: f64 },
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Atom amplitudes on a uniform time grid; `amplitudes[atom][i]` pairs
/// with `times[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub amplitudes: Vec<Vec<C64>>,
}

impl Trajectory {
    pub fn n_atoms(&self) -> usize {
        self.amplitudes.len()
    }

    /// Excited-state population `|c(t)|^2` of one atom.
    pub fn populations(&self, atom: usize) -> Vec<f64> {
        self.amplitudes[atom].iter().map(|c| c.norm_sqr()).collect()
    }
}

fn validate_run(p: &SystemParams, c0: &[C64], dt: f64, t_max: f64) -> Result<usize, DynamicsError> {
    p.validate()?;
    if c0.len() != p.n_atoms {
        return Err(DynamicsError::InvalidInitialState(format!(
            "expected {} amplitudes, got {}",
            p.n_atoms,
            c0.len()
        )));
    }
    let norm: f64 = c0.iter().map(|c| c.norm_sqr()).sum();
    if norm > 1.0 + 1e-9 {
        return Err(DynamicsError::InvalidInitialState(format!(
            "initial norm {norm} exceeds one"
        )));
    }
    if !(dt > 0.0) || !dt.is_finite() || !(t_max >= dt) || !t_max.is_finite() {
        return Err(DynamicsError::InvalidGrid { dt, t_max });
    }
    Ok((t_max / dt).round().max(1.0) as usize)
}

fn channel_states(p: &SystemParams, c0: &[C64]) -> Vec<(Channel, C64)> {
    match p.n_atoms {
        1 => vec![(Channel::Single, c0[0])],
        _ => vec![(Channel::Even, c0[0] + c0[1]), (Channel::Odd, c0[0] - c0[1])],
    }
}

fn atoms_from_channels(p: &SystemParams, per_channel: Vec<Vec<C64>>) -> Vec<Vec<C64>> {
    match p.n_atoms {
        1 => per_channel,
        _ => {
            let [even, odd] = <[Vec<C64>; 2]>::try_from(per_channel).unwrap();
            let c1: Vec<C64> = even.iter().zip(&odd).map(|(e, o)| 0.5 * (e + o)).collect();
            let c2: Vec<C64> = even.iter().zip(&odd).map(|(e, o)| 0.5 * (e - o)).collect();
            vec![c1, c2]
        }
    }
}

/// One channel of the memory-kernel equation by product-integration with
/// a trapezoidal kernel, implicit in the newest point. Second order in
/// `dt`. `g[k]` holds the kernel at `k dt`.
fn volterra_channel(u0: C64, delta: f64, g: &[C64], dt: f64) -> Result<Vec<C64>, DynamicsError> {
    let n = g.len() - 1;
    let gre: Vec<f64> = g.iter().map(|z| z.re).collect();
    let gim: Vec<f64> = g.iter().map(|z| z.im).collect();
    let mut cre = vec![0.0; n + 1];
    let mut cim = vec![0.0; n + 1];
    cre[0] = u0.re;
    cim[0] = u0.im;
    let g00 = C64::new(gre[0], gim[0]);
    let denom = C64::new(1.0, 0.5 * dt * delta) + 0.25 * dt * dt * g00;
    let half_dt = 0.5 * dt;
    let cap = u0.norm_sqr() + 1e-6;
    let mut conv = C64::new(0.0, 0.0);
    for i in 0..n {
        // conv_{i+1} = dt (g[i+1] c0 / 2 + sum_{j=1}^{i} g[i+1-j] c_j)
        let mut sre = 0.5 * (gre[i + 1] * cre[0] - gim[i + 1] * cim[0]);
        let mut sim = 0.5 * (gre[i + 1] * cim[0] + gim[i + 1] * cre[0]);
        for j in 1..=i {
            let k = i + 1 - j;
            sre += gre[k] * cre[j] - gim[k] * cim[j];
            sim += gre[k] * cim[j] + gim[k] * cre[j];
        }
        let conv_next = C64::new(dt * sre, dt * sim);
        let ci = C64::new(cre[i], cim[i]);
        // memory integral up to t_i; empty at the first step
        let s_i = if i == 0 { C64::new(0.0, 0.0) } else { conv + half_dt * g00 * ci };
        let phi_i = C64::new(0.0, -delta) * ci - s_i;
        let next = (ci + half_dt * phi_i - half_dt * conv_next) / denom;
        cre[i + 1] = next.re;
        cim[i + 1] = next.im;
        if next.norm_sqr() > cap {
            return Err(DynamicsError::Unstable {
                t: (i + 1) as f64 * dt,
                norm: next.norm_sqr(),
            });
        }
        conv = conv_next;
    }
    Ok(cre.into_iter().zip(cim).map(|(re, im)| C64::new(re, im)).collect())
}

/// Exact non-Markovian dynamics of the atomic amplitudes.
pub fn solve_volterra(
    p: &SystemParams,
    c0: &[C64],
    dt: f64,
    t_max: f64,
) -> Result<Trajectory, DynamicsError> {
    let n = validate_run(p, c0, dt, t_max)?;
    let times: Vec<f64> = (0..=n).map(|i| i as f64 * dt).collect();
    let mut per_channel = Vec::new();
    for (ch, u0) in channel_states(p, c0) {
        let g: Vec<C64> = times.iter().map(|&t| memory_kernel_channel(t, ch, p)).collect();
        per_channel.push(volterra_channel(u0, p.delta, &g, dt)?);
    }
    Ok(Trajectory { times, amplitudes: atoms_from_channels(p, per_channel) })
}

/// Wigner-Weisskopf approximation: each channel amplitude is
/// `u(t) = u(0) exp(-i delta t - K(t))` with `K` the double running
/// integral of the channel kernel, taken by trapezoids on the grid.
pub fn solve_wigner_weisskopf(
    p: &SystemParams,
    c0: &[C64],
    dt: f64,
    t_max: f64,
) -> Result<Trajectory, DynamicsError> {
    let n = validate_run(p, c0, dt, t_max)?;
    let times: Vec<f64> = (0..=n).map(|i| i as f64 * dt).collect();
    let mut per_channel = Vec::new();
    for (ch, u0) in channel_states(p, c0) {
        let g: Vec<C64> = times.iter().map(|&t| memory_kernel_channel(t, ch, p)).collect();
        let mut inner = C64::new(0.0, 0.0);
        let mut kk = C64::new(0.0, 0.0);
        let mut u = Vec::with_capacity(n + 1);
        u.push(u0);
        for i in 1..=n {
            let inner_next = inner + 0.5 * dt * (g[i - 1] + g[i]);
            kk += 0.5 * dt * (inner + inner_next);
            inner = inner_next;
            let phase = C64::new(0.0, -p.delta * times[i]);
            u.push(u0 * (phase - kk).exp());
        }
        per_channel.push(u);
    }
    Ok(Trajectory { times, amplitudes: atoms_from_channels(p, per_channel) })
}

/// Long-time population of the single-atom Wigner-Weisskopf solution.
///
/// The double integral of the kernel converges to `d g0^2 / (2 h^2)` when
/// `d = 2 (mod 4)`, giving a nonzero plateau; for every other `d` the
/// running decay keeps growing and the population vanishes.
pub fn ww_longtime_population(p: &SystemParams) -> Result<f64, DynamicsError> {
    if p.n_atoms != 1 {
        return Err(ModelError::WrongAtomCount { required: 1, actual: p.n_atoms }.into());
    }
    if p.d % 4 == 2 {
        let k = p.d as f64 * p.g0 * p.g0 / (p.hopping * p.hopping);
        Ok((-k).exp())
    } else {
        Ok(0.0)
    }
}

/// Markov (flat-band) rates of one channel at the atomic detuning:
/// returns `(population decay rate, oscillation frequency)`, that is
/// `2 pi J_ch(delta)` and `delta + S_ch(delta)`.
pub fn markov_rate(
    p: &SystemParams,
    ch: Channel,
    quad_nodes: usize,
) -> Result<(f64, f64), DynamicsError> {
    if p.band_edge() - p.delta.abs() < 1e-3 * p.hopping {
        return Err(DynamicsError::DetuningOutsideBand { delta: p.delta });
    }
    let rule = BandRule::new(p.hopping, quad_nodes);
    let j = channel_density(p.delta, ch, p)?;
    let s = lamb_shift(p.delta, ch, p, &rule)?;
    Ok((2.0 * PI * j, p.delta + s))
}

/// Markov approximation: pure exponential decay of each channel at the
/// flat-band rate, oscillating at the shifted frequency.
pub fn solve_markov(
    p: &SystemParams,
    c0: &[C64],
    dt: f64,
    t_max: f64,
    quad_nodes: usize,
) -> Result<Trajectory, DynamicsError> {
    let n = validate_run(p, c0, dt, t_max)?;
    let times: Vec<f64> = (0..=n).map(|i| i as f64 * dt).collect();
    let mut per_channel = Vec::new();
    for (ch, u0) in channel_states(p, c0) {
        let (gamma, freq) = markov_rate(p, ch, quad_nodes)?;
        let u: Vec<C64> = times
            .iter()
            .map(|&t| u0 * (C64::new(-0.5 * gamma * t, -freq * t)).exp())
            .collect();
        per_channel.push(u);
    }
    Ok(Trajectory { times, amplitudes: atoms_from_channels(p, per_channel) })
}

/// One oscillating component of a steady state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyTerm {
    pub energy: f64,
    pub amplitude: C64,
}

/// Long-time atomic state: each atom amplitude tends to
/// `sum_k amplitude_k exp(-i energy_k t)` built from the bound-state
/// residues; everything else decays into the band.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    /// per atom, distinct energies
    pub terms: Vec<Vec<SteadyTerm>>,
}

impl SteadyState {
    /// Energies contributing to one atom, sorted, zero-weight terms
    /// dropped.
    pub fn frequencies(&self, atom: usize) -> Vec<f64> {
        let mut f: Vec<f64> = self.terms[atom]
            .iter()
            .filter(|t| t.amplitude.norm() > 1e-12)
            .map(|t| t.energy)
            .collect();
        f.sort_by(|a, b| a.partial_cmp(b).unwrap());
        f
    }

    /// Population of one atom at time `t`.
    pub fn population_at(&self, atom: usize, t: f64) -> f64 {
        let mut c = C64::new(0.0, 0.0);
        for term in &self.terms[atom] {
            c += term.amplitude * C64::new(0.0, -term.energy * t).exp();
        }
        c.norm_sqr()
    }

    /// `(min, mean, max)` of the long-time population of one atom over the
    /// beating phases: the mean is the exact time average, the bounds are
    /// attained when the component phases align or oppose.
    pub fn population_envelope(&self, atom: usize) -> (f64, f64, f64) {
        let amps: Vec<f64> = self.terms[atom].iter().map(|t| t.amplitude.norm()).collect();
        let mean: f64 = amps.iter().map(|a| a * a).sum();
        let total: f64 = amps.iter().sum();
        let largest = amps.iter().cloned().fold(0.0, f64::max);
        let max = total * total;
        let min = if 2.0 * largest >= total { (2.0 * largest - total).powi(2) } else { 0.0 };
        (min, mean, max)
    }
}

fn add_term(terms: &mut Vec<SteadyTerm>, energy: f64, amplitude: C64) {
    for t in terms.iter_mut() {
        if (t.energy - energy).abs() < 1e-12 {
            t.amplitude += amplitude;
            return;
        }
    }
    terms.push(SteadyTerm { energy, amplitude });
}

/// Steady state from a bound-state catalogue and an initial atomic state:
/// each bound state contributes its residue times the overlap of the
/// initial state with its channel. A degenerate product pair passes the
/// residue to both atoms independently.
pub fn steady_state(spec: &SpectrumResult, c0: &[C64]) -> Result<SteadyState, DynamicsError> {
    let p = &spec.params;
    if c0.len() != p.n_atoms {
        return Err(DynamicsError::InvalidInitialState(format!(
            "expected {} amplitudes, got {}",
            p.n_atoms,
            c0.len()
        )));
    }
    let norm: f64 = c0.iter().map(|c| c.norm_sqr()).sum();
    if norm > 1.0 + 1e-9 {
        return Err(DynamicsError::InvalidInitialState(format!(
            "initial norm {norm} exceeds one"
        )));
    }
    let mut terms: Vec<Vec<SteadyTerm>> = vec![Vec::new(); p.n_atoms];
    for st in &spec.states {
        let z = st.residue;
        match st.channel {
            SpectralChannel::Single => add_term(&mut terms[0], st.energy, z * c0[0]),
            SpectralChannel::Even => {
                let u = 0.5 * z * (c0[0] + c0[1]);
                add_term(&mut terms[0], st.energy, u);
                add_term(&mut terms[1], st.energy, u);
            }
            SpectralChannel::Odd => {
                let u = 0.5 * z * (c0[0] - c0[1]);
                add_term(&mut terms[0], st.energy, u);
                add_term(&mut terms[1], st.energy, -u);
            }
            SpectralChannel::ProductDegenerate => {
                add_term(&mut terms[0], st.energy, z * c0[0]);
                add_term(&mut terms[1], st.energy, z * c0[1]);
            }
        }
    }
    Ok(SteadyState { terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{BoundState, StateClass};

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    #[test]
    fn decoupled_atom_keeps_its_population_and_phase() {
        let p = SystemParams::single(0.7, 0.0, 1).unwrap();
        let traj = solve_volterra(&p, &[one()], 0.005, 10.0).unwrap();
        let last = *traj.amplitudes[0].last().unwrap();
        assert!((last.norm_sqr() - 1.0).abs() < 1e-12);
        let expect = C64::new(0.0, -0.7 * 10.0).exp();
        assert!((last - expect).norm() < 1e-4);
    }

    #[test]
    fn volterra_is_second_order_in_dt() {
        let p = SystemParams::single(0.2, 0.8, 1).unwrap();
        let run = |dt: f64| solve_volterra(&p, &[one()], dt, 20.0).unwrap();
        let reference = run(0.0025);
        let stride_err = |traj: &Trajectory, stride: usize| {
            traj.amplitudes[0]
                .iter()
                .enumerate()
                .map(|(i, c)| (c - reference.amplitudes[0][i * stride]).norm())
                .fold(0.0, f64::max)
        };
        let e1 = stride_err(&run(0.02), 8);
        let e2 = stride_err(&run(0.01), 4);
        let ratio = e1 / e2;
        assert!((3.5..=4.5).contains(&ratio), "convergence ratio {ratio}");
    }

    #[test]
    fn two_atom_parity_is_preserved() {
        let p = SystemParams::pair(0.3, 0.7, 2, 3).unwrap();
        let a = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let sym = solve_volterra(&p, &[a, a], 0.01, 20.0).unwrap();
        for i in 0..sym.times.len() {
            assert!((sym.amplitudes[0][i] - sym.amplitudes[1][i]).norm() < 1e-12);
        }
        let anti = solve_volterra(&p, &[a, -a], 0.01, 20.0).unwrap();
        for i in 0..anti.times.len() {
            assert!((anti.amplitudes[0][i] + anti.amplitudes[1][i]).norm() < 1e-12);
        }
    }

    #[test]
    fn volterra_matches_lattice_oracle() {
        let p = SystemParams::single(0.0, 0.5, 1).unwrap().with_lattice_length(200).unwrap();
        let traj = solve_volterra(&p, &[one()], 0.005, 30.0).unwrap();
        let lat = lattice::Lattice::new(&p);
        let exact = lat.evolve(&[one()], &traj.times);
        let mut worst = 0.0f64;
        for i in 0..traj.times.len() {
            let diff = (traj.amplitudes[0][i].norm_sqr() - exact[0][i].norm_sqr()).abs();
            worst = worst.max(diff);
        }
        assert!(worst < 1e-3, "worst population deviation {worst}");
    }

    #[test]
    fn ww_matches_its_closed_form_for_d2() {
        let p = SystemParams::single(0.0, 0.8, 2).unwrap();
        let traj = solve_wigner_weisskopf(&p, &[one()], 0.002, 50.0).unwrap();
        let g2h2 = p.g0 * p.g0 / (p.hopping * p.hopping);
        for (i, &t) in traj.times.iter().enumerate() {
            let k = g2h2 * (1.0 - libm::j0(2.0 * p.hopping * t));
            let expect = (-2.0 * k).exp();
            let got = traj.amplitudes[0][i].norm_sqr();
            assert!((got - expect).abs() < 1e-5, "t = {t}: {got} vs {expect}");
        }
    }

    #[test]
    fn ww_longtime_plateau_values() {
        let p = SystemParams::single(0.0, 0.8, 2).unwrap();
        let plateau = ww_longtime_population(&p).unwrap();
        assert!((plateau - (-1.28f64).exp()).abs() < 1e-15);
        for d in [1, 3, 4, 5, 8] {
            let p = SystemParams::single(0.0, 0.8, d).unwrap();
            assert_eq!(ww_longtime_population(&p).unwrap(), 0.0);
        }
    }

    #[test]
    fn markov_rate_at_band_center() {
        let p = SystemParams::single(0.0, 0.6, 1).unwrap();
        let (gamma, freq) = markov_rate(&p, Channel::Single, 2000).unwrap();
        // d = 1 at band center: J(0) = g0^2/(pi h), shift g0^2/h
        assert!((gamma - 2.0 * p.g0 * p.g0).abs() < 1e-10);
        assert!((freq - p.g0 * p.g0).abs() < 1e-10);
        let traj = solve_markov(&p, &[one()], 0.01, 5.0, 2000).unwrap();
        let got = traj.amplitudes[0].last().unwrap().norm_sqr();
        assert!((got - (-gamma * 5.0).exp()).abs() < 1e-12);
    }

    #[test]
    fn markov_rejects_out_of_band_detuning() {
        let p = SystemParams::single(2.5, 0.6, 1).unwrap();
        assert!(matches!(
            markov_rate(&p, Channel::Single, 2000),
            Err(DynamicsError::DetuningOutsideBand { .. })
        ));
    }

    #[test]
    fn markov_tracks_volterra_at_weak_coupling() {
        let p = SystemParams::single(0.0, 0.1, 1).unwrap();
        let exact = solve_volterra(&p, &[one()], 0.01, 30.0).unwrap();
        let markov = solve_markov(&p, &[one()], 0.01, 30.0, 2000).unwrap();
        let mut worst = 0.0f64;
        for i in 0..exact.times.len() {
            let diff =
                (exact.amplitudes[0][i].norm_sqr() - markov.amplitudes[0][i].norm_sqr()).abs();
            worst = worst.max(diff);
        }
        assert!(worst < 1e-2, "worst deviation {worst}");
    }

    fn synthetic_spectrum(p: SystemParams, states: Vec<BoundState>) -> SpectrumResult {
        SpectrumResult { params: p, states }
    }

    #[test]
    fn steady_state_combines_channels() {
        use crate::spectrum::SpectralChannel::*;
        let p = SystemParams::pair(0.0, 0.5, 3, 3).unwrap();
        let mk = |energy, channel, residue| BoundState {
            energy,
            class: StateClass::Bic,
            boc_type: None,
            channel,
            residue,
            resolved: true,
        };
        let spec = synthetic_spectrum(p, vec![mk(-1.0, Even, 0.4), mk(1.0, Odd, 0.2)]);
        let ss = steady_state(&spec, &[one(), C64::new(0.0, 0.0)]).unwrap();
        // atom 1 carries both terms, atom 2 the odd one with flipped sign
        assert_eq!(ss.frequencies(0), vec![-1.0, 1.0]);
        let t0 = &ss.terms[0];
        assert!((t0[0].amplitude - C64::new(0.2, 0.0)).norm() < 1e-15);
        assert!((t0[1].amplitude - C64::new(0.1, 0.0)).norm() < 1e-15);
        let t1 = &ss.terms[1];
        assert!((t1[0].amplitude - C64::new(0.2, 0.0)).norm() < 1e-15);
        assert!((t1[1].amplitude + C64::new(0.1, 0.0)).norm() < 1e-15);
        // beating envelope of two components a and b
        let (lo, mean, hi) = ss.population_envelope(0);
        assert!((lo - 0.01).abs() < 1e-12);
        assert!((mean - 0.05).abs() < 1e-12);
        assert!((hi - 0.09).abs() < 1e-12);
    }

    #[test]
    fn steady_state_product_pair_acts_per_atom() {
        use crate::spectrum::SpectralChannel::ProductDegenerate;
        let p = SystemParams::pair(-1.0, 0.6, 3, 3).unwrap();
        let st = BoundState {
            energy: -1.0,
            class: StateClass::Bic,
            boc_type: None,
            channel: ProductDegenerate,
            residue: 0.7,
            resolved: true,
        };
        let spec = synthetic_spectrum(p, vec![st]);
        let c0 = [C64::new(0.6, 0.0), C64::new(0.0, 0.5)];
        let ss = steady_state(&spec, &c0).unwrap();
        assert!((ss.terms[0][0].amplitude - 0.7 * c0[0]).norm() < 1e-15);
        assert!((ss.terms[1][0].amplitude - 0.7 * c0[1]).norm() < 1e-15);
        let (_, mean, _) = ss.population_envelope(1);
        assert!((mean - (0.7f64 * 0.5).powi(2)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_initial_states() {
        let p = SystemParams::single(0.0, 0.5, 1).unwrap();
        assert!(matches!(
            solve_volterra(&p, &[one(), one()], 0.01, 1.0),
            Err(DynamicsError::InvalidInitialState(_))
        ));
        assert!(matches!(
            solve_volterra(&p, &[C64::new(1.2, 0.0)], 0.01, 1.0),
            Err(DynamicsError::InvalidInitialState(_))
        ));
        assert!(matches!(
            solve_volterra(&p, &[one()], -0.01, 1.0),
            Err(DynamicsError::InvalidGrid { .. })
        ));
    }
}
