//! Physical parameters, coupling geometry, dispersion, spectral densities,
//! and the time-domain memory kernel.
//!
//! Geometry is the non-braided layout: atom 1 couples at resonators
//! `{0, d}` and atom 2 at `{d+z, 2d+z}` (offsets; the finite-lattice oracle
//! centers the pattern). With `x = -w/2h = cos(theta)` the band spectral
//! densities are
//!
//! ```text
//!   J0(w)      = (2 g0^2/pi) (1 + T_d(x)) / sqrt(4h^2 - w^2)
//!   J1(w)      = (g0^2/pi) (T_z + 2 T_{z+d} + T_{z+2d})(x) / sqrt(4h^2 - w^2)
//!   J0 +/- J1  = (2 g0^2/pi) (1 + cos d.theta)(1 +/- cos (z+d).theta) / sqrt(...)
//! ```
//!
//! and the memory kernel is the Fourier transform of those densities,
//! expressible in integer-order Bessel functions:
//!
//! ```text
//!   G0(t) = 2 g0^2 [ B_0(2ht) + i^d B_d(2ht) ]
//!   G1(t) =   g0^2 [ i^z B_z + 2 i^{z+d} B_{z+d} + i^{z+2d} B_{z+2d} ](2ht)
//! ```
//!
//! Both the closed Bessel form and a direct quadrature of the spectral
//! density are provided; they must agree to better than 1e-10 and the test
//! suite enforces that.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::quad::BandRule;

/// Errors from parameter validation and band-restricted evaluations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("chebyshev argument {0} outside [-1, 1]")]
    ChebyshevDomain(f64),
    #[error("energy {0} outside the open band (-2h, 2h)")]
    OutsideBand(f64),
    #[error("operation requires n_atoms = {required}, have {actual}")]
    WrongAtomCount { required: usize, actual: usize },
}

/// Parity channel of the collective atom-field problem.
///
/// A single giant atom has one channel. Two identical giant atoms decouple
/// into symmetric (`Even`, density `J0 + J1`) and antisymmetric (`Odd`,
/// density `J0 - J1`) channels because the 2x2 spectral matrix has equal
/// diagonals and symmetric off-diagonals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Single,
    Even,
    Odd,
}

impl Channel {
    /// The channels present for a given atom count.
    pub fn for_atom_count(n_atoms: usize) -> &'static [Channel] {
        match n_atoms {
            1 => &[Channel::Single],
            _ => &[Channel::Even, Channel::Odd],
        }
    }
}

impl std::fmt::Display for Channel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Channel::Single => write!(f, "single"),
            Channel::Even => write!(f, "even"),
            Channel::Odd => write!(f, "odd"),
        }
    }
}

/// All physical parameters of the atom-waveguide system.
///
/// Energies are in units of `hopping` (kept explicit so nothing silently
/// assumes `h = 1`), times in `1/hopping`. Every atom couples at exactly
/// two sites (`sites_per_atom() == 2`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// atom-resonator detuning `delta = Omega - w_c`
    pub delta: f64,
    /// nearest-neighbor resonator coupling `h > 0`, the global energy unit
    pub hopping: f64,
    /// per-site atom-resonator coupling `g0 >= 0`
    pub g0: f64,
    /// separation between one atom's two coupling sites, `d >= 1`
    pub d: u32,
    /// gap between the inner coupling sites of atoms 1 and 2 (`0` when
    /// `n_atoms == 1`, `>= 1` otherwise)
    pub z: u32,
    /// number of atoms, 1 or 2
    pub n_atoms: usize,
    /// resonator count of the finite-lattice oracle
    pub lattice_length: usize,
}

/// Default lattice size for the finite-lattice oracle.
pub const DEFAULT_LATTICE_LENGTH: usize = 800;

impl SystemParams {
    /// One giant atom with detuning `delta`, coupling `g0`, and site
    /// separation `d`, in units `hopping = 1`.
    pub fn single(delta: f64, g0: f64, d: u32) -> Result<Self, ModelError> {
        let p = Self {
            delta,
            hopping: 1.0,
            g0,
            d,
            z: 0,
            n_atoms: 1,
            lattice_length: DEFAULT_LATTICE_LENGTH,
        };
        p.validate()?;
        Ok(p)
    }

    /// Two identical giant atoms separated by `z` sites between their inner
    /// coupling points, in units `hopping = 1`.
    pub fn pair(delta: f64, g0: f64, d: u32, z: u32) -> Result<Self, ModelError> {
        let p = Self {
            delta,
            hopping: 1.0,
            g0,
            d,
            z,
            n_atoms: 2,
            lattice_length: DEFAULT_LATTICE_LENGTH,
        };
        p.validate()?;
        Ok(p)
    }

    /// Replace the oracle lattice length, revalidating.
    pub fn with_lattice_length(mut self, lattice_length: usize) -> Result<Self, ModelError> {
        self.lattice_length = lattice_length;
        self.validate()?;
        Ok(self)
    }

    /// Check all structural invariants.
    pub fn validate(&self) -> Result<(), ModelError> {
        let fail = |msg: String| Err(ModelError::InvalidParams(msg));
        if !(self.hopping > 0.0) {
            return fail(format!("hopping must be positive, got {}", self.hopping));
        }
        if !(self.g0 >= 0.0) {
            return fail(format!("g0 must be non-negative, got {}", self.g0));
        }
        if !self.delta.is_finite() {
            return fail(format!("delta must be finite, got {}", self.delta));
        }
        if self.d < 1 {
            return fail("d must be at least 1".into());
        }
        match self.n_atoms {
            1 => {
                if self.z != 0 {
                    return fail("z must be 0 for a single atom".into());
                }
            }
            2 => {
                if self.z < 1 {
                    return fail("z must be at least 1 for two atoms".into());
                }
            }
            n => return fail(format!("n_atoms must be 1 or 2, got {n}")),
        }
        if self.lattice_length < 2 * (self.d + self.z) as usize + 4 {
            return fail(format!(
                "lattice_length {} too small for d = {}, z = {} (need at least {})",
                self.lattice_length,
                self.d,
                self.z,
                2 * (self.d + self.z) + 4
            ));
        }
        Ok(())
    }

    /// Coupling points per atom; fixed at two.
    pub const fn sites_per_atom(&self) -> usize {
        2
    }

    /// Upper band edge `2h`; the band is `[-2h, 2h]`.
    pub fn band_edge(&self) -> f64 {
        2.0 * self.hopping
    }

    /// Distance between the outermost coupling sites: `d` for one atom,
    /// `2d + z` for two.
    pub fn span(&self) -> u32 {
        match self.n_atoms {
            1 => self.d,
            _ => 2 * self.d + self.z,
        }
    }

    /// Coupling-site indices on the oracle lattice of `lattice_length`
    /// resonators, pattern centered.
    pub fn coupling_sites(&self) -> Vec<[usize; 2]> {
        let s0 = (self.lattice_length - self.span() as usize) / 2;
        let d = self.d as usize;
        let z = self.z as usize;
        match self.n_atoms {
            1 => vec![[s0, s0 + d]],
            _ => vec![[s0, s0 + d], [s0 + d + z, s0 + 2 * d + z]],
        }
    }

    /// The parity channels present for this system.
    pub fn channels(&self) -> &'static [Channel] {
        Channel::for_atom_count(self.n_atoms)
    }
}

/// Waveguide dispersion `w(k) = -2h cos k` for `k` in `[-pi, pi]`.
///
/// The band sweeps `[-2h, 2h]`, reaching the lower edge at `k = 0` and the
/// upper edge at `k = +/-pi`; the group velocity `|dw/dk| = 2h |sin k|`
/// vanishes at both edges (Van Hove singularities).
pub fn dispersion(k: f64, hopping: f64) -> f64 {
    -2.0 * hopping * k.cos()
}

/// Chebyshev polynomial of the first kind `T_n(x)` on `[-1, 1]`.
///
/// Evaluated by the three-term recurrence; arguments outside the closed
/// interval (beyond a 1e-12 rounding allowance) are a domain error.
pub fn chebyshev_t(n: u32, x: f64) -> Result<f64, ModelError> {
    if x.abs() > 1.0 + 1e-12 {
        return Err(ModelError::ChebyshevDomain(x));
    }
    let x = x.clamp(-1.0, 1.0);
    let mut prev = 1.0;
    let mut cur = x;
    match n {
        0 => Ok(prev),
        1 => Ok(cur),
        _ => {
            for _ in 2..=n {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            Ok(cur)
        }
    }
}

/// `i^n` for integer `n`.
pub(crate) fn i_pow(n: u32) -> C64 {
    match n % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// Numerator of the channel spectral density at node angle `theta`
/// (`w = -2h cos theta`): the channel density is
/// `J_ch(w) = numerator(theta) / sqrt(4h^2 - w^2)`.
///
/// The products of squared half-angle cosines keep the double zeros exact
/// near the polynomial roots, where the naive `1 + cos` form cancels
/// catastrophically.
pub(crate) fn channel_numerator(theta: f64, ch: Channel, p: &SystemParams) -> f64 {
    let g2 = p.g0 * p.g0;
    let d = p.d as f64;
    let base = {
        let c = (0.5 * d * theta).cos();
        4.0 * g2 / std::f64::consts::PI * c * c
    };
    match ch {
        Channel::Single => base,
        Channel::Even => {
            let c = (0.5 * (p.z + p.d) as f64 * theta).cos();
            2.0 * base * c * c
        }
        Channel::Odd => {
            let s = (0.5 * (p.z + p.d) as f64 * theta).sin();
            2.0 * base * s * s
        }
    }
}

/// Derivative of [`channel_numerator`] with respect to `w` at node angle
/// `theta` strictly inside the band.
pub(crate) fn channel_numerator_domega(theta: f64, ch: Channel, p: &SystemParams) -> f64 {
    let g2 = p.g0 * p.g0;
    let d = p.d as f64;
    let s = (p.z + p.d) as f64;
    let two_over_pi = 2.0 * g2 / std::f64::consts::PI;
    let ddtheta = match ch {
        Channel::Single => -two_over_pi * d * (d * theta).sin(),
        Channel::Even => {
            -two_over_pi
                * (d * (d * theta).sin() * (1.0 + (s * theta).cos())
                    + s * (1.0 + (d * theta).cos()) * (s * theta).sin())
        }
        Channel::Odd => {
            -two_over_pi
                * (d * (d * theta).sin() * (1.0 - (s * theta).cos())
                    - s * (1.0 + (d * theta).cos()) * (s * theta).sin())
        }
    };
    // w = -2h cos theta  =>  dw/dtheta = 2h sin theta, nonzero inside
    ddtheta / (2.0 * p.hopping * theta.sin())
}

/// Second derivative of [`channel_numerator`] with respect to `theta`.
pub(crate) fn channel_numerator_d2theta(theta: f64, ch: Channel, p: &SystemParams) -> f64 {
    let g2 = p.g0 * p.g0;
    let d = p.d as f64;
    let s = (p.z + p.d) as f64;
    let a = 2.0 * g2 / std::f64::consts::PI;
    match ch {
        Channel::Single => -a * d * d * (d * theta).cos(),
        Channel::Even => {
            a * (-d * d * (d * theta).cos() * (1.0 + (s * theta).cos())
                + 2.0 * d * s * (d * theta).sin() * (s * theta).sin()
                - s * s * (1.0 + (d * theta).cos()) * (s * theta).cos())
        }
        Channel::Odd => {
            a * (-d * d * (d * theta).cos() * (1.0 - (s * theta).cos())
                - 2.0 * d * s * (d * theta).sin() * (s * theta).sin()
                + s * s * (1.0 + (d * theta).cos()) * (s * theta).cos())
        }
    }
}

fn theta_of(omega: f64, p: &SystemParams) -> Result<f64, ModelError> {
    let edge = p.band_edge();
    if omega.abs() >= edge {
        return Err(ModelError::OutsideBand(omega));
    }
    Ok((-omega / edge).acos())
}

/// Self spectral density `J0(w)` of one giant atom, defined on the open
/// band; it inherits the Van Hove divergence at the edges except where the
/// interference numerator vanishes.
pub fn spectral_density_j0(omega: f64, p: &SystemParams) -> Result<f64, ModelError> {
    let theta = theta_of(omega, p)?;
    let edge = p.band_edge();
    Ok(channel_numerator(theta, Channel::Single, p) / (edge * edge - omega * omega).sqrt())
}

/// Cross spectral density `J1(w)` between the two giant atoms.
pub fn spectral_density_j1(omega: f64, p: &SystemParams) -> Result<f64, ModelError> {
    if p.n_atoms != 2 {
        return Err(ModelError::WrongAtomCount { required: 2, actual: p.n_atoms });
    }
    let theta = theta_of(omega, p)?;
    let edge = p.band_edge();
    let even = channel_numerator(theta, Channel::Even, p);
    let odd = channel_numerator(theta, Channel::Odd, p);
    Ok(0.5 * (even - odd) / (edge * edge - omega * omega).sqrt())
}

/// Channel spectral density: `J0` (single), `J0 + J1` (even) or `J0 - J1`
/// (odd). Non-negative everywhere on the band.
pub fn channel_density(omega: f64, ch: Channel, p: &SystemParams) -> Result<f64, ModelError> {
    let theta = theta_of(omega, p)?;
    let edge = p.band_edge();
    Ok(channel_numerator(theta, ch, p) / (edge * edge - omega * omega).sqrt())
}

/// Full spectral matrix at `w`: `[[J0]]` for one atom,
/// `[[J0, J1], [J1, J0]]` for two. Real-symmetric with equal diagonals by
/// mirror symmetry of the layout.
pub fn spectral_matrix(omega: f64, p: &SystemParams) -> Result<Vec<Vec<f64>>, ModelError> {
    match p.n_atoms {
        1 => Ok(vec![vec![spectral_density_j0(omega, p)?]]),
        _ => {
            let j0 = spectral_density_j0(omega, p)?;
            let j1 = spectral_density_j1(omega, p)?;
            Ok(vec![vec![j0, j1], vec![j1, j0]])
        }
    }
}

fn bessel_j(n: u32, x: f64) -> f64 {
    libm::jn(n as i32, x)
}

/// Self memory kernel `G0(t) = 2 g0^2 [B_0(2ht) + i^d B_d(2ht)]`.
pub fn memory_kernel_g0(t: f64, p: &SystemParams) -> C64 {
    let x = 2.0 * p.hopping * t;
    let g2 = 2.0 * p.g0 * p.g0;
    g2 * (C64::new(bessel_j(0, x), 0.0) + i_pow(p.d) * bessel_j(p.d, x))
}

/// Cross memory kernel
/// `G1(t) = g0^2 [i^z B_z + 2 i^{z+d} B_{z+d} + i^{z+2d} B_{z+2d}](2ht)`.
pub fn memory_kernel_g1(t: f64, p: &SystemParams) -> C64 {
    let x = 2.0 * p.hopping * t;
    let g2 = p.g0 * p.g0;
    let (z, d) = (p.z, p.d);
    g2 * (i_pow(z) * bessel_j(z, x)
        + 2.0 * i_pow(z + d) * bessel_j(z + d, x)
        + i_pow(z + 2 * d) * bessel_j(z + 2 * d, x))
}

/// Channel memory kernel: `G0` (single), `G0 +/- G1` (even/odd).
pub fn memory_kernel_channel(t: f64, ch: Channel, p: &SystemParams) -> C64 {
    match ch {
        Channel::Single => memory_kernel_g0(t, p),
        Channel::Even => memory_kernel_g0(t, p) + memory_kernel_g1(t, p),
        Channel::Odd => memory_kernel_g0(t, p) - memory_kernel_g1(t, p),
    }
}

/// Channel memory kernel by direct quadrature of the spectral density,
/// `G_ch(t) = integral of J_ch(w) e^{-iwt} dw`. Independent of the Bessel
/// closed form; used to validate it.
pub fn memory_kernel_channel_quadrature(
    t: f64,
    ch: Channel,
    p: &SystemParams,
    rule: &BandRule,
) -> C64 {
    rule.integrate_complex(|theta, w| {
        channel_numerator(theta, ch, p) * C64::new(0.0, -w * t).exp()
    })
}
