//! Gauss-Chebyshev (first kind) quadrature over the waveguide band
//! `[-2h, 2h]`.
//!
//! Every band integral in this crate carries the Van Hove factor
//! `1/sqrt(4h^2 - w^2)`, which under `w = 2h cos(theta)` is exactly the
//! Chebyshev weight. The rule below therefore integrates
//!
//! ```text
//!   I[f] = integral over [-2h, 2h] of f(w) / sqrt(4h^2 - w^2) dw
//!        = (pi/n) * sum_i f(w_i),   w_i = 2h cos((2i-1) pi / (2n))
//! ```
//!
//! with spectral accuracy, and exactly (up to rounding) whenever `f` is a
//! polynomial of degree < 2n.

use num_complex::Complex64 as C64;

/// Default node count for all band integrals.
pub const DEFAULT_NODES: usize = 2000;

/// A Gauss-Chebyshev rule frozen for a given hopping and node count.
///
/// Callbacks receive `(theta, w)` per node, where `theta` is the node angle
/// in `(0, pi)` and `w = -2h cos(theta)` the band energy. The angle is the
/// numerically stable coordinate for the trigonometric numerators used by
/// the spectral densities, so it is handed through rather than recomputed.
#[derive(Debug, Clone)]
pub struct BandRule {
    /// node angles `theta_i = (2i-1) pi / (2n)`, increasing, inside `(0, pi)`
    pub thetas: Vec<f64>,
    /// band energies `w_i = -2h cos(theta_i)`, increasing from the lower edge
    pub omegas: Vec<f64>,
    /// common quadrature weight `pi/n`
    pub weight: f64,
}

impl BandRule {
    /// Build an `n`-node rule for the band `[-2h, 2h]`.
    ///
    /// The sign convention pairs `theta = 0` with the lower band edge `-2h`
    /// and `theta = pi` with the upper edge `+2h`, matching the argument
    /// `-w/2h = cos(theta)` of the Chebyshev polynomials in the spectral
    /// densities.
    pub fn new(hopping: f64, n: usize) -> Self {
        assert!(hopping > 0.0 && n > 0);
        let mut thetas = Vec::with_capacity(n);
        let mut omegas = Vec::with_capacity(n);
        for i in (1..=n).rev() {
            let theta = (2 * i - 1) as f64 * std::f64::consts::PI / (2 * n) as f64;
            // reversed loop: theta decreasing would give omega decreasing,
            // so iterate from the largest angle down to store increasing w
            thetas.push(theta);
            omegas.push(-2.0 * hopping * theta.cos());
        }
        thetas.reverse();
        omegas.reverse();
        // thetas now increase with omegas: theta_1 < ... < theta_n maps to
        // w_1 < ... < w_n
        let weight = std::f64::consts::PI / n as f64;
        Self { thetas, omegas, weight }
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    /// True when the rule has no nodes (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    /// Integrate `f(w)/sqrt(4h^2 - w^2)` over the band.
    pub fn integrate(&self, mut f: impl FnMut(f64, f64) -> f64) -> f64 {
        let mut acc = 0.0;
        for (&theta, &w) in self.thetas.iter().zip(&self.omegas) {
            acc += f(theta, w);
        }
        self.weight * acc
    }

    /// Complex-valued variant of [`BandRule::integrate`].
    pub fn integrate_complex(&self, mut f: impl FnMut(f64, f64) -> C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (&theta, &w) in self.thetas.iter().zip(&self.omegas) {
            acc += f(theta, w);
        }
        self.weight * acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn node_layout() {
        let rule = BandRule::new(1.0, 8);
        assert_eq!(rule.len(), 8);
        for pair in rule.omegas.windows(2) {
            assert!(pair[0] < pair[1]);
        }
        assert!(rule.omegas[0] > -2.0 && rule.omegas[7] < 2.0);
        for (&theta, &w) in rule.thetas.iter().zip(&rule.omegas) {
            assert_abs_diff_eq!(w, -2.0 * theta.cos(), epsilon = 1e-14);
        }
    }

    #[test]
    fn plain_weight_integral_is_pi() {
        for h in [0.5, 1.0, 2.0] {
            let rule = BandRule::new(h, 32);
            assert_abs_diff_eq!(rule.integrate(|_, _| 1.0), PI, epsilon = 1e-13);
        }
    }

    #[test]
    fn monomials_match_beta_values() {
        // integral of w^2 / sqrt(4h^2-w^2) = (2h)^2 pi/2, of w^4: (2h)^4 3pi/8
        let h = 1.3;
        let rule = BandRule::new(h, 16);
        let b = 2.0 * h;
        assert_abs_diff_eq!(rule.integrate(|_, w| w * w), b * b * PI / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            rule.integrate(|_, w| w.powi(4)),
            b.powi(4) * 3.0 * PI / 8.0,
            epsilon = 1e-11
        );
        assert_abs_diff_eq!(rule.integrate(|_, w| w.powi(3)), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn chebyshev_orthogonality() {
        // with x = -w/2h = cos(theta): integral of T_m T_n under the weight
        // is 0 for m != n and pi/2 for m = n >= 1
        let rule = BandRule::new(1.0, 64);
        for m in 1..6u32 {
            for n in 1..6u32 {
                let val = rule.integrate(|theta, _| {
                    (m as f64 * theta).cos() * (n as f64 * theta).cos()
                });
                let want = if m == n { PI / 2.0 } else { 0.0 };
                assert_abs_diff_eq!(val, want, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn exact_for_low_degree_polynomials() {
        // degree 2n-1 exactness: n = 4 integrates w^7 and below exactly
        let rule = BandRule::new(1.0, 4);
        let fine = BandRule::new(1.0, 512);
        for p in 0..8 {
            let coarse = rule.integrate(|_, w| w.powi(p));
            let refv = fine.integrate(|_, w| w.powi(p));
            assert_abs_diff_eq!(coarse, refv, epsilon = 1e-12);
        }
    }
}
