//! Invariant suites behind the `validate` subcommand: each one measures a
//! deviation that must stay under its tolerance.

use giantatom::dynamics::lattice::Lattice;
use giantatom::dynamics::{solve_volterra, steady_state};
use giantatom::model::{
    memory_kernel_channel, memory_kernel_channel_quadrature, spectral_matrix,
};
use giantatom::observables::amplitude_concurrence;
use giantatom::quad::BandRule;
use giantatom::spectrum::full_spectrum;
use giantatom::{Channel, SpectralChannel, SpectrumOptions, SystemParams};
use num_complex::Complex64 as C64;

pub struct SuiteResult {
    pub name: &'static str,
    pub pass: bool,
    pub measured: f64,
    pub tolerance: f64,
}

fn suite(name: &'static str, measured: f64, tolerance: f64) -> SuiteResult {
    SuiteResult { name, pass: measured <= tolerance, measured, tolerance }
}

/// Kernel identity: the closed Bessel series against direct band
/// quadrature.
fn kernel_suite() -> SuiteResult {
    let rule = BandRule::new(1.0, 2000);
    let times: Vec<f64> = (0..=20).map(|i| 5.0 * i as f64).collect();
    let mut worst: f64 = 0.0;
    for d in 1..=6 {
        let p = SystemParams::single(0.2, 0.7, d).unwrap();
        for &t in &times {
            let a = memory_kernel_channel(t, Channel::Single, &p);
            let b = memory_kernel_channel_quadrature(t, Channel::Single, &p, &rule);
            worst = worst.max((a - b).norm());
        }
    }
    for &(d, z) in &[(2u32, 1u32), (3, 3), (3, 5)] {
        let p = SystemParams::pair(0.2, 0.7, d, z).unwrap();
        for ch in [Channel::Even, Channel::Odd] {
            for &t in &times {
                let a = memory_kernel_channel(t, ch, &p);
                let b = memory_kernel_channel_quadrature(t, ch, &p, &rule);
                worst = worst.max((a - b).norm());
            }
        }
    }
    suite("kernel_closed_vs_quadrature", worst, 1e-10)
}

/// The two-atom coupling matrix of every band mode must stay positive
/// semidefinite.
fn psd_suite() -> SuiteResult {
    let mut min_margin = f64::INFINITY;
    for d in 1..=5 {
        for z in 1..=5 {
            let p = SystemParams::pair(0.3, 0.9, d, z).unwrap();
            for i in 1..400 {
                let w = -2.0 + 4.0 * i as f64 / 400.0;
                let m = spectral_matrix(w, &p).unwrap();
                min_margin = min_margin.min(m[0][0] - m[0][1].abs());
            }
        }
    }
    suite("spectral_matrix_psd", (-min_margin).max(0.0), 1e-12)
}

/// Bound-state weights: positive, at most one in total per channel.
fn residue_suite() -> SuiteResult {
    let opts = SpectrumOptions::default();
    let mut excess: f64 = 0.0;
    for &(delta, g0, d) in &[(-0.6, 1.2, 1u32), (0.5, 0.8, 3), (0.0, 0.8, 2), (0.0, 0.8, 5)] {
        let p = SystemParams::single(delta, g0, d).unwrap();
        let spec = full_spectrum(&p, &opts).unwrap();
        let total: f64 = spec.states.iter().map(|s| s.residue).sum();
        excess = excess.max(total - 1.0);
        for s in &spec.states {
            excess = excess.max(s.residue - 1.0).max(-s.residue);
        }
    }
    for &(delta, g0, d, z) in &[
        (1.04, 1.0, 2u32, 1u32),
        (0.36, 0.6, 3, 3),
        (1.0, 0.6, 3, 3),
        (-1.0, 0.6, 3, 3),
    ] {
        let p = SystemParams::pair(delta, g0, d, z).unwrap();
        let spec = full_spectrum(&p, &opts).unwrap();
        for group in [SpectralChannel::Even, SpectralChannel::Odd] {
            let total: f64 = spec
                .states
                .iter()
                .filter(|s| s.channel == group || s.channel == SpectralChannel::ProductDegenerate)
                .map(|s| s.residue)
                .sum();
            excess = excess.max(total - 1.0);
        }
    }
    suite("residue_sum_bound", excess.max(0.0), 1e-9)
}

/// Concurrence of a single-excitation state equals `2 |c1| |c2|`.
fn concurrence_suite() -> SuiteResult {
    let mut state: u64 = 7;
    let mut unit = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let scale = if i % 3 == 0 { 1e-4 } else { 0.7 };
        let mut c1 = C64::new(2.0 * unit() - 1.0, 2.0 * unit() - 1.0) * scale;
        let mut c2 = C64::new(2.0 * unit() - 1.0, 2.0 * unit() - 1.0) * scale;
        let n = c1.norm_sqr() + c2.norm_sqr();
        if n > 1.0 {
            c1 /= n.sqrt();
            c2 /= n.sqrt();
        }
        let got = amplitude_concurrence(c1, c2).unwrap();
        worst = worst.max((got - 2.0 * c1.norm() * c2.norm()).abs());
    }
    suite("concurrence_closed_form", worst, 1e-10)
}

/// Grid halving must shrink the exact-solver error by about four.
fn convergence_suite() -> SuiteResult {
    let p = SystemParams::single(0.3, 0.9, 2).unwrap();
    let c0 = [C64::new(1.0, 0.0)];
    let runs: Vec<_> = [0.02, 0.01, 0.005]
        .iter()
        .map(|&dt| solve_volterra(&p, &c0, dt, 20.0).unwrap())
        .collect();
    let diff = |a: &giantatom::dynamics::Trajectory, b: &giantatom::dynamics::Trajectory, k: usize| {
        a.amplitudes[0]
            .iter()
            .enumerate()
            .map(|(i, c)| (c - b.amplitudes[0][i * k]).norm())
            .fold(0.0f64, f64::max)
    };
    let coarse = diff(&runs[0], &runs[1], 2);
    let fine = diff(&runs[1], &runs[2], 2);
    let ratio = coarse / fine;
    suite("volterra_convergence_order", (ratio - 4.0).abs(), 0.5)
}

/// The exact solver against an independent finite-lattice propagation.
fn lattice_suite() -> SuiteResult {
    let p = SystemParams::single(0.5, 0.8, 3).unwrap();
    let c0 = [C64::new(1.0, 0.0)];
    let traj = solve_volterra(&p, &c0, 0.01, 60.0).unwrap();
    let lattice = Lattice::new(&p);
    let sampled: Vec<f64> = traj.times.iter().copied().step_by(5).collect();
    let exact = lattice.evolve(&c0, &sampled);
    let mut worst: f64 = 0.0;
    for (j, c) in exact[0].iter().enumerate() {
        let pop = traj.amplitudes[0][j * 5].norm_sqr();
        worst = worst.max((pop - c.norm_sqr()).abs());
    }
    suite("volterra_vs_lattice", worst, 1e-3)
}

/// Late-time populations against the residue-built steady state.
fn steady_suite() -> SuiteResult {
    let p = SystemParams::single(-0.6, 1.2, 1).unwrap();
    let c0 = [C64::new(1.0, 0.0)];
    let spec = full_spectrum(&p, &SpectrumOptions::default()).unwrap();
    let steady = steady_state(&spec, &c0).unwrap();
    let traj = solve_volterra(&p, &c0, 0.005, 200.0).unwrap();
    let mut worst: f64 = 0.0;
    for (i, &t) in traj.times.iter().enumerate() {
        if t < 150.0 {
            continue;
        }
        worst = worst.max((traj.amplitudes[0][i].norm_sqr() - steady.population_at(0, t)).abs());
    }
    suite("steady_state_envelope", worst, 1e-3)
}

/// Total atomic population never exceeds one.
fn population_suite() -> SuiteResult {
    let p = SystemParams::pair(0.36, 0.6, 3, 3).unwrap();
    let c0 = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    let traj = solve_volterra(&p, &c0, 0.005, 50.0).unwrap();
    let mut excess: f64 = 0.0;
    for i in 0..traj.times.len() {
        let total: f64 = (0..2).map(|a| traj.amplitudes[a][i].norm_sqr()).sum();
        excess = excess.max(total - 1.0);
    }
    suite("population_bound", excess.max(0.0), 1e-9)
}

pub fn run_suites() -> Vec<SuiteResult> {
    vec![
        kernel_suite(),
        psd_suite(),
        residue_suite(),
        concurrence_suite(),
        convergence_suite(),
        lattice_suite(),
        steady_suite(),
        population_suite(),
    ]
}
