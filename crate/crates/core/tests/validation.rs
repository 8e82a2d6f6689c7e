//! Cross-validation of the spectrum machinery against two independent
//! routes: the closed-form Hilbert transforms of the channel densities,
//! and exact diagonalization of a finite lattice.

mod common;

use giantatom::dynamics::lattice::Lattice;
use giantatom::quad::BandRule;
use giantatom::spectrum::{bound_state_shift, full_spectrum, lamb_shift, SpectrumOptions};
use giantatom::{SpectralChannel, SystemParams};

fn sample_params() -> Vec<SystemParams> {
    vec![
        SystemParams::single(0.3, 0.9, 3).unwrap(),
        SystemParams::single(-0.1, 1.2, 1).unwrap(),
        SystemParams::pair(-0.2, 0.7, 2, 3).unwrap(),
        SystemParams::pair(0.1, 1.1, 3, 3).unwrap(),
        SystemParams::pair(0.4, 0.5, 4, 1).unwrap(),
    ]
}

#[test]
fn quadrature_shift_matches_closed_form_outside_band() {
    let mut worst: f64 = 0.0;
    for p in sample_params() {
        let rule = BandRule::new(p.hopping, 2000);
        for &ch in p.channels() {
            for xi in [1e-3, 1e-2, 0.1, 1.0, 10.0] {
                for e in [-(2.0 + xi), 2.0 + xi] {
                    let got = bound_state_shift(e, ch, &p, &rule);
                    let want = common::closed_shift(e, ch, &p);
                    let rel = (got - want).abs() / want.abs().max(1.0);
                    worst = worst.max(rel);
                }
            }
        }
    }
    common::report(
        "shift outside band",
        worst < 1e-8,
        &format!("worst relative deviation {worst:.3e} over 5 parameter sets"),
    );
}

#[test]
fn quadrature_shift_matches_closed_form_inside_band() {
    // the pole-subtracted integrand is a polynomial, so the quadrature
    // answer is exact to round-off
    let mut worst: f64 = 0.0;
    for p in sample_params() {
        let rule = BandRule::new(p.hopping, 2000);
        for &ch in p.channels() {
            for theta in [0.3, 0.9, 1.57, 2.2, 2.9] {
                let e = -2.0 * p.hopping * f64::cos(theta);
                let got = lamb_shift(e, ch, &p, &rule).unwrap();
                let want = common::closed_shift(e, ch, &p);
                worst = worst.max((got - want).abs());
            }
        }
    }
    common::report(
        "shift inside band",
        worst < 1e-10,
        &format!("worst absolute deviation {worst:.3e}"),
    );
}

#[test]
fn edge_limits_match_independent_form() {
    let mut checked = 0usize;
    for p in sample_params() {
        let rule = BandRule::new(p.hopping, 2000);
        for &ch in p.channels() {
            for upper in [false, true] {
                let Some(want) = common::closed_edge_limit(upper, ch, &p) else {
                    continue;
                };
                let e = if upper { 2.0 + 1e-9 } else { -2.0 - 1e-9 };
                let got = bound_state_shift(e, ch, &p, &rule);
                // the limit is approached like sqrt(distance)
                assert!(
                    (got - want).abs() < 1e-3,
                    "edge limit {want} vs {got} ({ch:?}, upper = {upper})"
                );
                checked += 1;
            }
        }
    }
    assert!(checked >= 5, "too few finite edges exercised: {checked}");
}

#[test]
fn boc_energies_and_weights_match_lattice_diagonalization() {
    let cases = [
        SystemParams::single(-0.6, 1.2, 1).unwrap(),
        SystemParams::single(0.5, 0.8, 3).unwrap(),
        SystemParams::pair(1.04, 1.0, 2, 1).unwrap(),
    ];
    let opts = SpectrumOptions::default();
    let mut worst_e: f64 = 0.0;
    let mut worst_w: f64 = 0.0;
    for p in cases {
        let spec = full_spectrum(&p, &opts).unwrap();
        let bocs: Vec<_> = spec.bocs().collect();
        assert!(!bocs.is_empty());
        let lat = Lattice::new(&p);
        let outside: Vec<(usize, f64)> = lat
            .eigenvalues()
            .iter()
            .cloned()
            .enumerate()
            .filter(|(_, e)| e.abs() > 2.0 * p.hopping + 1e-6)
            .collect();
        assert_eq!(
            outside.len(),
            bocs.len(),
            "lattice bound-state count mismatch for d = {}, z = {}",
            p.d,
            p.z
        );
        for b in &bocs {
            let (m, e) = outside
                .iter()
                .cloned()
                .min_by(|a, b2| {
                    (a.1 - b.energy).abs().partial_cmp(&(b2.1 - b.energy).abs()).unwrap()
                })
                .unwrap();
            worst_e = worst_e.max((e - b.energy).abs());
            let weight: f64 = (0..p.n_atoms).map(|a| lat.atom_weight(a, m)).sum();
            worst_w = worst_w.max((weight - b.residue).abs());
        }
    }
    common::report(
        "bocs vs lattice",
        worst_e < 1e-4 && worst_w < 1e-3,
        &format!("worst energy deviation {worst_e:.3e}, worst weight deviation {worst_w:.3e}"),
    );
}

#[test]
fn bic_appears_in_lattice_spectrum_with_matching_weight() {
    // dark point of a d = 2 atom: an in-band lattice eigenstate at the
    // atom frequency carrying exactly the residue weight
    let p = SystemParams::single(0.0, 0.8, 2).unwrap();
    let spec = full_spectrum(&p, &SpectrumOptions::default()).unwrap();
    let bic = spec
        .bics()
        .find(|s| s.channel == SpectralChannel::Single)
        .expect("dark state expected at zero detuning");
    assert!(bic.energy.abs() < 1e-12);
    let lat = Lattice::new(&p);
    let (m, e) = lat
        .eigenvalues()
        .iter()
        .cloned()
        .enumerate()
        .min_by(|a, b| {
            let wa = lat.atom_weight(0, a.0);
            let wb = lat.atom_weight(0, b.0);
            wb.partial_cmp(&wa).unwrap()
        })
        .unwrap();
    common::report(
        "bic vs lattice",
        e.abs() < 1e-10 && (lat.atom_weight(0, m) - bic.residue).abs() < 1e-3,
        &format!(
            "heaviest lattice state at energy {e:.3e} with weight {:.6} vs residue {:.6}",
            lat.atom_weight(0, m),
            bic.residue
        ),
    );
}
