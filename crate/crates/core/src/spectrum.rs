//! Exact single-excitation bound-state spectrum.
//!
//! Bound states outside the continuum (BOCs) are roots of the pole
//! condition `E = delta + integral J_ch(w)/(E - w) dw` with `|E| > 2h`,
//! found by bisection; the integral is strictly decreasing in `|E|`, so the
//! residual is monotone and the root on each side of the band is unique.
//! Whether a root exists at all depends on the edge behavior of the
//! channel density: a Van Hove-divergent edge always binds a state
//! (type I), a finite edge binds one only for strong enough coupling
//! (type II).
//!
//! Bound states in the continuum (BICs) sit at in-band energies where the
//! channel density has a double zero, turning the pole of the resolvent
//! into a removable singularity; they additionally require the principal
//! value pole condition, which collapses to a closed form at those points.
//!
//! Every bound state carries its pole residue, the long-time weight of the
//! channel amplitude in the atomic steady state.

use std::f64::consts::PI;

use thiserror::Error;

use crate::model::{
    channel_numerator, channel_numerator_d2theta, channel_numerator_domega, Channel, ModelError,
    SystemParams,
};
use crate::quad::BandRule;

/// Errors from the bound-state search.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("candidate at energy {energy} is not dark: numerator {numerator}, slope {slope}")]
    MisidentifiedBic { energy: f64, numerator: f64, slope: f64 },
    #[error("no sign change for bound-state search in [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },
}

/// Numerical controls of the spectrum search. All tolerances are in units
/// of `hopping`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    /// Gauss-Chebyshev node count for band integrals
    pub quad_nodes: usize,
    /// the root search stays this far outside the band edges
    pub eps_edge: f64,
    /// bound states closer than this to a band edge are flagged unresolved
    pub eps_resolve: f64,
    /// tolerance on the in-band pole condition
    pub eps_bic: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            quad_nodes: crate::quad::DEFAULT_NODES,
            eps_edge: 1e-8,
            eps_resolve: 1e-6,
            eps_bic: 1e-6,
        }
    }
}

/// Bound outside the continuum, or bound in the continuum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateClass {
    Boc,
    Bic,
}

impl std::fmt::Display for StateClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StateClass::Boc => write!(f, "boc"),
            StateClass::Bic => write!(f, "bic"),
        }
    }
}

/// BOC classification by the adjacent band edge: type I hugs a divergent
/// edge and exists for any coupling, type II faces a finite edge and
/// exists only above a coupling threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BocType {
    I,
    II,
}

impl std::fmt::Display for BocType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BocType::I => write!(f, "I"),
            BocType::II => write!(f, "II"),
        }
    }
}

/// Channel a bound state lives in. `ProductDegenerate` marks the
/// degenerate pair of single-atom dark states that appears when both
/// parity channels go dark at the same energy; the pair is recorded as a
/// single entry whose residue applies to each atom amplitude separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectralChannel {
    Single,
    Even,
    Odd,
    ProductDegenerate,
}

impl std::fmt::Display for SpectralChannel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpectralChannel::Single => write!(f, "single"),
            SpectralChannel::Even => write!(f, "even"),
            SpectralChannel::Odd => write!(f, "odd"),
            SpectralChannel::ProductDegenerate => write!(f, "product"),
        }
    }
}

fn spectral_channel_of(ch: Channel) -> SpectralChannel {
    match ch {
        Channel::Single => SpectralChannel::Single,
        Channel::Even => SpectralChannel::Even,
        Channel::Odd => SpectralChannel::Odd,
    }
}

/// One bound state of the atom-field system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub energy: f64,
    pub class: StateClass,
    /// present for BOCs only
    pub boc_type: Option<BocType>,
    pub channel: SpectralChannel,
    /// pole residue, the state's weight in the long-time channel amplitude
    pub residue: f64,
    /// false when the energy sits within `eps_resolve` of a band edge
    pub resolved: bool,
}

/// The complete bound-state catalogue of one parameter set, sorted by
/// energy.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub params: SystemParams,
    pub states: Vec<BoundState>,
}

impl SpectrumResult {
    pub fn bocs(&self) -> impl Iterator<Item = &BoundState> {
        self.states.iter().filter(|s| s.class == StateClass::Boc)
    }

    pub fn bics(&self) -> impl Iterator<Item = &BoundState> {
        self.states.iter().filter(|s| s.class == StateClass::Bic)
    }

    pub fn in_channel(&self, ch: SpectralChannel) -> impl Iterator<Item = &BoundState> + '_ {
        self.states.iter().filter(move |s| s.channel == ch)
    }
}

/// Precomputed channel numerators on the quadrature nodes.
struct ChannelTable<'a> {
    p: &'a SystemParams,
    ch: Channel,
    rule: &'a BandRule,
    numer: Vec<f64>,
}

impl<'a> ChannelTable<'a> {
    fn new(p: &'a SystemParams, ch: Channel, rule: &'a BandRule) -> Self {
        let numer = rule.thetas.iter().map(|&t| channel_numerator(t, ch, p)).collect();
        Self { p, ch, rule, numer }
    }

    /// `integral J_ch(w)/(e - w) dw` for `e` strictly outside the band.
    fn shift(&self, e: f64) -> f64 {
        let mut s = 0.0;
        for (i, &w) in self.rule.omegas.iter().enumerate() {
            s += self.numer[i] / (e - w);
        }
        s * self.rule.weight
    }

    /// `e - delta - shift(e)`; strictly increasing in `e` on either side
    /// of the band because every quadrature weight is positive.
    fn residual(&self, e: f64) -> f64 {
        e - self.p.delta - self.shift(e)
    }

    /// `integral J_ch(w)/(e - w)^2 dw` for `e` outside the band.
    fn i2_plain(&self, e: f64) -> f64 {
        let mut s = 0.0;
        for (i, &w) in self.rule.omegas.iter().enumerate() {
            let d = e - w;
            s += self.numer[i] / (d * d);
        }
        s * self.rule.weight
    }

    /// `integral J_ch(w)/(e - w)^2 dw` at an in-band energy where the
    /// numerator has a double zero. The numerator's (vanishing) value and
    /// slope at `e` are subtracted node by node; both correction integrals
    /// are identically zero under the band weight, so no remainder is
    /// added back. Errors if the energy is not actually dark.
    fn i2_dark(&self, e: f64, theta_e: f64) -> Result<f64, SpectrumError> {
        let p = self.p;
        let h = p.hopping;
        let n_e = channel_numerator(theta_e, self.ch, p);
        let np_e = channel_numerator_domega(theta_e, self.ch, p);
        let nscale = p.g0 * p.g0;
        let order = (p.d + p.z + 1) as f64;
        if n_e.abs() > 1e-8 * nscale || np_e.abs() * h > 1e-8 * nscale * order {
            return Err(SpectrumError::MisidentifiedBic {
                energy: e,
                numerator: n_e,
                slope: np_e,
            });
        }
        let mut s = 0.0;
        for (i, &theta) in self.rule.thetas.iter().enumerate() {
            let half = 0.5 * (theta - theta_e);
            if half.abs() < 1e-8 {
                // node on top of the dark point: use the analytic limit
                let d2 = channel_numerator_d2theta(theta_e, self.ch, p);
                let wp = 2.0 * h * theta_e.sin();
                s += 0.5 * d2 / (wp * wp);
                continue;
            }
            // e - w_i in a product form that stays accurate for close nodes
            let den = -4.0 * h * (0.5 * (theta + theta_e)).sin() * half.sin();
            let num = self.numer[i] - n_e + np_e * den;
            s += num / (den * den);
        }
        Ok(s * self.rule.weight)
    }
}

/// Principal value `integral J_ch(w)/(e - w) dw` for `e` inside the band,
/// by subtracting the numerator value at `e`; the subtracted term
/// integrates to zero under the band weight.
pub fn lamb_shift(
    e: f64,
    ch: Channel,
    p: &SystemParams,
    rule: &BandRule,
) -> Result<f64, SpectrumError> {
    let edge = p.band_edge();
    if e.abs() >= edge {
        return Err(ModelError::OutsideBand(e).into());
    }
    let theta_e = (-e / edge).acos();
    let n_e = channel_numerator(theta_e, ch, p);
    let mut s = 0.0;
    for &theta in &rule.thetas {
        let half = 0.5 * (theta - theta_e);
        if half.abs() < 1e-9 {
            s -= channel_numerator_domega(theta_e, ch, p);
            continue;
        }
        let den = -4.0 * p.hopping * (0.5 * (theta + theta_e)).sin() * half.sin();
        s += (channel_numerator(theta, ch, p) - n_e) / den;
    }
    Ok(s * rule.weight)
}

/// `integral J_ch(w)/(e - w) dw` for `e` strictly outside the band.
pub fn bound_state_shift(e: f64, ch: Channel, p: &SystemParams, rule: &BandRule) -> f64 {
    ChannelTable::new(p, ch, rule).shift(e)
}

/// Whether the channel density diverges at the chosen band edge; fixed by
/// the parity of the coupling-point separations alone.
fn edge_divergent(ch: Channel, upper: bool, d: u32, z: u32) -> bool {
    if !upper {
        // lower edge: only the odd channel's numerator vanishes there
        return ch != Channel::Odd;
    }
    match ch {
        Channel::Single => d % 2 == 0,
        Channel::Even => d % 2 == 0 && z % 2 == 0,
        Channel::Odd => d % 2 == 0 && z % 2 == 1,
    }
}

fn bisect_root(table: &ChannelTable, mut lo: f64, mut hi: f64) -> Result<f64, SpectrumError> {
    let tol = 1e-10 * table.p.hopping;
    if !(table.residual(lo) < 0.0 && table.residual(hi) > 0.0) {
        return Err(SpectrumError::BracketFailure { lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if table.residual(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn make_boc(
    e: f64,
    ch: Channel,
    upper: bool,
    table: &ChannelTable,
    p: &SystemParams,
    opts: &SpectrumOptions,
) -> BoundState {
    let boc_type = if edge_divergent(ch, upper, p.d, p.z) { BocType::I } else { BocType::II };
    BoundState {
        energy: e,
        class: StateClass::Boc,
        boc_type: Some(boc_type),
        channel: spectral_channel_of(ch),
        residue: 1.0 / (1.0 + table.i2_plain(e)),
        resolved: e.abs() - p.band_edge() > opts.eps_resolve * p.hopping,
    }
}

/// Bound states outside the continuum in one channel: at most one below
/// and one above the band. States binding closer to an edge than
/// `eps_edge` are beyond the search resolution and carry vanishing weight;
/// they are not reported.
pub fn find_bocs(
    p: &SystemParams,
    ch: Channel,
    opts: &SpectrumOptions,
    rule: &BandRule,
) -> Result<Vec<BoundState>, SpectrumError> {
    debug_assert!(p.channels().contains(&ch));
    let table = ChannelTable::new(p, ch, rule);
    let h = p.hopping;
    let edge = p.band_edge();
    // outer bracket: |shift| <= 2 g0^2 / (|e| - 2h) makes the residual sign
    // definite this far out
    let e_hi = edge + p.delta.abs() + 2.0 * p.g0 * p.g0 / h + h;
    let mut out = Vec::new();
    let inner = -(edge + opts.eps_edge * h);
    if table.residual(inner) > 0.0 {
        let e = bisect_root(&table, -e_hi, inner)?;
        out.push(make_boc(e, ch, false, &table, p, opts));
    }
    let inner = edge + opts.eps_edge * h;
    if table.residual(inner) < 0.0 {
        let e = bisect_root(&table, inner, e_hi)?;
        out.push(make_boc(e, ch, true, &table, p, opts));
    }
    Ok(out)
}

/// Bound states in the continuum.
///
/// A single atom goes dark at `E = -2h cos((2m+1) pi / d)`, where its own
/// density has a double zero and the principal value shift vanishes, so a
/// BIC requires `delta = E` (within `eps_bic`).
///
/// For two atoms the parity factor of the even (odd) channel density has
/// double zeros at `theta = l pi / (d+z)` with `l` odd (even), where the
/// principal value shift collapses to
/// `g0^2 sin(d theta) / (h sin theta)`; a BIC requires the pole condition
/// to hold there. When such a point also makes the single-atom factor
/// vanish it is the degenerate product case below, not a channel BIC.
/// Single-atom dark energies make both channel densities and the cross
/// density vanish simultaneously, giving a degenerate pair of product
/// states (one per atom) when `delta = E`; the pair is one
/// `ProductDegenerate` entry.
pub fn find_bics(
    p: &SystemParams,
    opts: &SpectrumOptions,
    rule: &BandRule,
) -> Result<Vec<BoundState>, SpectrumError> {
    let h = p.hopping;
    let edge = p.band_edge();
    let tol = opts.eps_bic * h;
    let mut out = Vec::new();

    let single = ChannelTable::new(p, Channel::Single, rule);
    for q in (1..p.d).step_by(2) {
        let theta = q as f64 * PI / p.d as f64;
        let e = -edge * theta.cos();
        if (p.delta - e).abs() < tol {
            let residue = 1.0 / (1.0 + single.i2_dark(e, theta)?);
            let channel = match p.n_atoms {
                1 => SpectralChannel::Single,
                _ => SpectralChannel::ProductDegenerate,
            };
            out.push(BoundState {
                energy: e,
                class: StateClass::Bic,
                boc_type: None,
                channel,
                residue,
                resolved: true,
            });
        }
    }

    if p.n_atoms == 2 {
        let s = p.d + p.z;
        for l in 1..s {
            let ld = l * p.d;
            if ld % s == 0 && (ld / s) % 2 == 1 {
                continue; // single-atom factor dark too: product case above
            }
            let ch = if l % 2 == 1 { Channel::Even } else { Channel::Odd };
            let theta = l as f64 * PI / s as f64;
            let e = -edge * theta.cos();
            let shift = p.g0 * p.g0 * (p.d as f64 * theta).sin() / (h * theta.sin());
            if (e - p.delta - shift).abs() < tol {
                let table = ChannelTable::new(p, ch, rule);
                let residue = 1.0 / (1.0 + table.i2_dark(e, theta)?);
                out.push(BoundState {
                    energy: e,
                    class: StateClass::Bic,
                    boc_type: None,
                    channel: spectral_channel_of(ch),
                    residue,
                    resolved: true,
                });
            }
        }
    }

    Ok(out)
}

/// The complete bound-state catalogue: BOCs in every channel plus all
/// BICs, sorted by energy.
pub fn full_spectrum(
    p: &SystemParams,
    opts: &SpectrumOptions,
) -> Result<SpectrumResult, SpectrumError> {
    p.validate()?;
    let rule = BandRule::new(p.hopping, opts.quad_nodes);
    let mut states = Vec::new();
    for &ch in p.channels() {
        states.extend(find_bocs(p, ch, opts, &rule)?);
    }
    states.extend(find_bics(p, opts, &rule)?);
    states.sort_by(|a, b| a.energy.partial_cmp(&b.energy).unwrap());
    Ok(SpectrumResult { params: *p, states })
}
