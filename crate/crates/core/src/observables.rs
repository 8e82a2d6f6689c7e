//! Two-qubit observables of the atom pair: the reduced density matrix of
//! the atoms in the single-excitation sector and the Wootters concurrence.
//!
//! The concurrence comes from the eigenvalues of `rho rho~`, where `rho~`
//! is the spin-flipped complex conjugate; that product is not hermitian,
//! so a small dense complex eigensolver (Householder Hessenberg reduction
//! plus shifted QR) is included rather than any square-root construction.

use num_complex::Complex64 as C64;
use thiserror::Error;

/// Errors from state validation and the concurrence computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObservablesError {
    #[error("density matrix is not hermitian (deviation {0})")]
    NotHermitian(f64),
    #[error("density matrix trace is {0}, expected 1")]
    BadTrace(f64),
    #[error("density matrix has negative eigenvalue {0}")]
    NotPositive(f64),
    #[error("amplitudes overfill the single-excitation sector: norm {0}")]
    Overfilled(f64),
    #[error("spin-flip product has a genuinely complex eigenvalue {0}")]
    ComplexSpectrum(C64),
    #[error("eigenvalue iteration failed to converge")]
    NoConvergence,
}

type M4 = [[C64; 4]; 4];

const ZERO: C64 = C64::new(0.0, 0.0);

fn zeros() -> M4 {
    [[ZERO; 4]; 4]
}

fn matmul(a: &M4, b: &M4) -> M4 {
    let mut out = zeros();
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            for k in 0..4 {
                *v += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// Two-qubit density matrix in the basis `{ee, eg, ge, gg}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    rho: M4,
}

impl TwoQubitState {
    /// Validate and wrap an arbitrary density matrix: hermitian, unit
    /// trace, positive semidefinite (to a -1e-10 floor).
    pub fn new(rho: M4) -> Result<Self, ObservablesError> {
        let mut herm: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                herm = herm.max((rho[i][j] - rho[j][i].conj()).norm());
            }
        }
        if herm > 1e-9 {
            return Err(ObservablesError::NotHermitian(herm));
        }
        let tr = rho[0][0] + rho[1][1] + rho[2][2] + rho[3][3];
        if (tr - 1.0).norm() > 1e-9 {
            return Err(ObservablesError::BadTrace(tr.re));
        }
        for lam in eigenvalues4(&rho)? {
            if lam.re < -1e-10 {
                return Err(ObservablesError::NotPositive(lam.re));
            }
        }
        Ok(Self { rho })
    }

    /// Reduced state of the atom pair when the total state is one
    /// excitation shared between atoms and field: amplitudes `c1`, `c2`
    /// on the atoms, the rest of the weight in the field (which traces
    /// out into the ground-ground population).
    pub fn from_amplitudes(c1: C64, c2: C64) -> Result<Self, ObservablesError> {
        let n1 = c1.norm_sqr();
        let n2 = c2.norm_sqr();
        if n1 + n2 > 1.0 + 1e-9 {
            return Err(ObservablesError::Overfilled(n1 + n2));
        }
        let mut rho = zeros();
        rho[1][1] = n1.into();
        rho[2][2] = n2.into();
        rho[1][2] = c1 * c2.conj();
        rho[2][1] = c2 * c1.conj();
        rho[3][3] = (1.0 - n1 - n2).max(0.0).into();
        Ok(Self { rho })
    }

    pub fn matrix(&self) -> &M4 {
        &self.rho
    }

    /// Wootters concurrence: with `lam_i` the eigenvalues of
    /// `rho rho~` in decreasing order,
    /// `C = max(0, sqrt(lam_1) - sqrt(lam_2) - sqrt(lam_3) - sqrt(lam_4))`.
    pub fn concurrence(&self) -> Result<f64, ObservablesError> {
        // spin flip: antidiagonal signs (-1, 1, 1, -1), palindromic
        let f = [-1.0, 1.0, 1.0, -1.0];
        let mut tilde = zeros();
        for (i, row) in tilde.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = f[i] * f[j] * self.rho[3 - i][3 - j].conj();
            }
        }
        let m = matmul(&self.rho, &tilde);
        let lams = eigenvalues4(&m)?;
        // thresholds scale with the largest eigenvalue so nearly dark
        // states (tiny rho rho~) keep their genuine spectrum
        let scale = lams.iter().map(|l| l.norm()).fold(0.0, f64::max);
        let mut roots = [0.0f64; 4];
        for (k, lam) in lams.into_iter().enumerate() {
            let lam = if lam.norm() <= 1e-12 * scale { ZERO } else { lam };
            if lam.im.abs() > 1e-12 * scale {
                return Err(ObservablesError::ComplexSpectrum(lam));
            }
            if lam.re < -1e-10 * scale {
                return Err(ObservablesError::NotPositive(lam.re));
            }
            roots[k] = lam.re.max(0.0).sqrt();
        }
        roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
    }
}

/// Concurrence carried by a pair of single-excitation amplitudes.
pub fn amplitude_concurrence(c1: C64, c2: C64) -> Result<f64, ObservablesError> {
    TwoQubitState::from_amplitudes(c1, c2)?.concurrence()
}

/// Complex Givens rotation `(c, s, r)` with
/// `[c, s; -conj(s), c] [f; g] = [r; 0]` and real `c`.
fn givens(f: C64, g: C64) -> (f64, C64, C64) {
    let gn = g.norm();
    if gn == 0.0 {
        return (1.0, ZERO, f);
    }
    let fn_ = f.norm();
    if fn_ == 0.0 {
        return (0.0, g.conj() / gn, C64::from(gn));
    }
    let d = (fn_ * fn_ + gn * gn).sqrt();
    let sgn = f / fn_;
    (fn_ / d, sgn * g.conj() / d, sgn * d)
}

/// Eigenvalues of a general complex 4x4 matrix: Householder reduction to
/// Hessenberg form, then shifted QR with Givens rotations until the
/// matrix is triangular.
fn eigenvalues4(a: &M4) -> Result<[C64; 4], ObservablesError> {
    let mut h = *a;

    // Hessenberg reduction
    for k in 0..2 {
        let mut xnorm = 0.0f64;
        for i in k + 1..4 {
            xnorm += h[i][k].norm_sqr();
        }
        let xnorm = xnorm.sqrt();
        if norm_is_tiny(xnorm) {
            continue;
        }
        let x0 = h[k + 1][k];
        let alpha = if x0.norm() == 0.0 { C64::from(-xnorm) } else { -(x0 / x0.norm()) * xnorm };
        let mut v = [ZERO; 4];
        for i in k + 1..4 {
            v[i] = h[i][k];
        }
        v[k + 1] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if norm_is_tiny(vnorm2.sqrt()) {
            continue;
        }
        // rows: H <- (I - 2 v v*/v*v) H
        for j in 0..4 {
            let mut w = ZERO;
            for i in k + 1..4 {
                w += v[i].conj() * h[i][j];
            }
            let w = 2.0 * w / vnorm2;
            for i in k + 1..4 {
                h[i][j] -= v[i] * w;
            }
        }
        // columns: H <- H (I - 2 v v*/v*v)
        for r in 0..4 {
            let mut w = ZERO;
            for i in k + 1..4 {
                w += h[r][i] * v[i];
            }
            let w = 2.0 * w / vnorm2;
            for i in k + 1..4 {
                h[r][i] -= w * v[i].conj();
            }
        }
        for i in k + 2..4 {
            h[i][k] = ZERO;
        }
    }

    // shifted QR on the Hessenberg form
    let mut hi = 3usize;
    let mut iters = 0usize;
    let mut stall = 0usize;
    while hi > 0 {
        // deflate where the subdiagonal is negligible
        let mut lo = hi;
        while lo > 0 {
            let small = f64::EPSILON * (h[lo - 1][lo - 1].norm() + h[lo][lo].norm())
                + f64::MIN_POSITIVE;
            if h[lo][lo - 1].norm() <= small {
                h[lo][lo - 1] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            stall = 0;
            continue;
        }
        iters += 1;
        stall += 1;
        if iters > 500 {
            return Err(ObservablesError::NoConvergence);
        }
        // Wilkinson shift: trailing 2x2 eigenvalue nearest its corner
        let (a11, a12) = (h[hi - 1][hi - 1], h[hi - 1][hi]);
        let (a21, a22) = (h[hi][hi - 1], h[hi][hi]);
        let tr = a11 + a22;
        let det = a11 * a22 - a12 * a21;
        let disc = (tr * tr - 4.0 * det).sqrt();
        let m1 = 0.5 * (tr + disc);
        let m2 = 0.5 * (tr - disc);
        let mut mu = if (m1 - a22).norm() < (m2 - a22).norm() { m1 } else { m2 };
        if stall % 20 == 0 {
            // exceptional shift to break symmetric stalls
            mu = a22 + C64::from(0.75 * a21.norm());
        }
        for i in lo..=hi {
            h[i][i] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let (c, s, r) = givens(h[i][i], h[i + 1][i]);
            h[i][i] = r;
            h[i + 1][i] = ZERO;
            for j in i + 1..4 {
                let (x, y) = (h[i][j], h[i + 1][j]);
                h[i][j] = c * x + s * y;
                h[i + 1][j] = -s.conj() * x + c * y;
            }
            rots.push((i, c, s));
        }
        for &(i, c, s) in &rots {
            for r in lo..=(i + 1).min(hi) {
                let (x, y) = (h[r][i], h[r][i + 1]);
                h[r][i] = c * x + s.conj() * y;
                h[r][i + 1] = -s * x + c * y;
            }
        }
        for i in lo..=hi {
            h[i][i] += mu;
        }
    }
    Ok([h[0][0], h[1][1], h[2][2], h[3][3]])
}

fn norm_is_tiny(x: f64) -> bool {
    x < 1e-300
}
