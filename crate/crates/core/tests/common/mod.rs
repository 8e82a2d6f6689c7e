//! Shared closed-form oracles for the integration suites, derived
//! independently of the library internals.
//!
//! Every channel density is a cosine polynomial over the band weight:
//! `J_ch(w) = sum_n c_n T_n(-w/2h) / sqrt(4h^2 - w^2)`, so its Hilbert
//! transform has a closed form in the Joukowski variable
//! `rho = y - sqrt(y^2 - 1)`.

#![allow(dead_code)]

use std::f64::consts::PI;

use giantatom::{Channel, SystemParams};

/// Chebyshev coefficients `(n, c_n)` of one channel numerator.
pub fn chebyshev_coeffs(ch: Channel, p: &SystemParams) -> Vec<(u32, f64)> {
    let a = 2.0 * p.g0 * p.g0 / PI;
    let s = p.d + p.z;
    let raw = match ch {
        Channel::Single => vec![(0, a), (p.d, a)],
        Channel::Even => vec![(0, a), (p.d, a), (s, a), (s + p.d, 0.5 * a), (p.z, 0.5 * a)],
        Channel::Odd => vec![(0, a), (p.d, a), (s, -a), (s + p.d, -0.5 * a), (p.z, -0.5 * a)],
    };
    let mut out: Vec<(u32, f64)> = Vec::new();
    for (n, c) in raw {
        match out.iter_mut().find(|(m, _)| *m == n) {
            Some((_, acc)) => *acc += c,
            None => out.push((n, c)),
        }
    }
    out.sort_by_key(|&(n, _)| n);
    out
}

/// `integral J_ch(w)/(e - w) dw` in closed form; principal value inside
/// the band (Glauert), pole-free branches outside.
pub fn closed_shift(e: f64, ch: Channel, p: &SystemParams) -> f64 {
    let h = p.hopping;
    let pref = PI / (2.0 * h);
    let coeffs = chebyshev_coeffs(ch, p);
    if e > 2.0 * h {
        let y = e / (2.0 * h);
        let root = (y * y - 1.0).sqrt();
        let rho = y - root;
        pref / root * coeffs.iter().map(|&(n, c)| c * (-rho).powi(n as i32)).sum::<f64>()
    } else if e < -2.0 * h {
        let u = -e / (2.0 * h);
        let root = (u * u - 1.0).sqrt();
        let rho = u - root;
        -pref / root * coeffs.iter().map(|&(n, c)| c * rho.powi(n as i32)).sum::<f64>()
    } else {
        // PV integral of T_n against the pole: pi U_{n-1}(x) / 2h
        let x = -e / (2.0 * h);
        let theta = x.acos();
        let sin = theta.sin();
        coeffs
            .iter()
            .map(|&(n, c)| {
                if n == 0 {
                    0.0
                } else if sin.abs() < 1e-12 {
                    // U_{n-1}(+-1) = n (+-1)^{n-1}
                    pref * c * n as f64 * x.powi(n as i32 - 1)
                } else {
                    pref * c * (n as f64 * theta).sin() / sin
                }
            })
            .sum()
    }
}

/// Band-edge limit of the shift; `None` when it diverges there.
pub fn closed_edge_limit(upper: bool, ch: Channel, p: &SystemParams) -> Option<f64> {
    let coeffs = chebyshev_coeffs(ch, p);
    let sign = |n: u32| if upper && n % 2 == 1 { -1.0 } else { 1.0 };
    let at_edge: f64 = coeffs.iter().map(|&(n, c)| c * sign(n)).sum();
    if at_edge.abs() > 1e-12 * p.g0 * p.g0 {
        return None;
    }
    let slope: f64 = coeffs.iter().map(|&(n, c)| c * n as f64 * sign(n)).sum();
    let pref = PI / (2.0 * p.hopping);
    Some(if upper { -pref * slope } else { pref * slope })
}

/// Print one verdict line and panic on failure.
pub fn report(name: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("{name} {verdict}: {detail}");
    assert!(ok, "{name} FAIL: {detail}");
}
