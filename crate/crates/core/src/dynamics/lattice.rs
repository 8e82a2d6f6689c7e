//! Finite-lattice oracle: exact diagonalization of the atoms coupled to an
//! open chain of resonators. Shares nothing with the continuum formulas,
//! so it cross-checks them at the Hamiltonian level.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::model::SystemParams;

/// Single-excitation Hamiltonian on the finite open chain. Basis: atom
/// states first, then one state per resonator site.
pub fn single_excitation_hamiltonian(p: &SystemParams) -> DMatrix<f64> {
    let n_atoms = p.n_atoms;
    let l = p.lattice_length;
    let dim = n_atoms + l;
    let mut ham = DMatrix::<f64>::zeros(dim, dim);
    for a in 0..n_atoms {
        ham[(a, a)] = p.delta;
    }
    for j in 0..l - 1 {
        let r = n_atoms + j;
        ham[(r, r + 1)] = -p.hopping;
        ham[(r + 1, r)] = -p.hopping;
    }
    for (a, sites) in p.coupling_sites().iter().enumerate() {
        for &sj in sites {
            let r = n_atoms + sj;
            ham[(a, r)] += p.g0;
            ham[(r, a)] += p.g0;
        }
    }
    ham
}

/// Eigendecomposition of the finite-chain single-excitation block, with
/// exact time evolution from it.
pub struct Lattice {
    pub params: SystemParams,
    eigenvalues: Vec<f64>,
    /// column m is eigenvector m over the full basis
    eigenvectors: DMatrix<f64>,
}

impl Lattice {
    pub fn new(p: &SystemParams) -> Self {
        let ham = single_excitation_hamiltonian(p);
        let eig = ham.symmetric_eigen();
        let dim = eig.eigenvalues.len();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
        let eigenvalues: Vec<f64> = order.iter().map(|&m| eig.eigenvalues[m]).collect();
        let mut eigenvectors = DMatrix::<f64>::zeros(dim, dim);
        for (new, &old) in order.iter().enumerate() {
            eigenvectors.set_column(new, &eig.eigenvectors.column(old));
        }
        Self { params: *p, eigenvalues, eigenvectors }
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Squared component of eigenvector `m` on the given atom: the weight
    /// of the atom in that stationary state.
    pub fn atom_weight(&self, atom: usize, m: usize) -> f64 {
        let v = self.eigenvectors[(atom, m)];
        v * v
    }

    /// Earliest time a front reflected off the open ends can reach the
    /// atoms again; beyond it the finite chain stops mimicking the
    /// infinite waveguide. Fronts move at most 2h sites per unit time.
    pub fn reflection_time(&self) -> f64 {
        let s0 = (self.params.lattice_length - self.params.span() as usize) / 2;
        s0 as f64 / self.params.hopping
    }

    /// Atom amplitudes under `e^{-iHt}` starting from an atom-only state;
    /// `out[atom][i]` corresponds to `times[i]`.
    pub fn evolve(&self, c0: &[C64], times: &[f64]) -> Vec<Vec<C64>> {
        let n_atoms = self.params.n_atoms;
        assert_eq!(c0.len(), n_atoms);
        if let Some(&t_last) = times.last() {
            if t_last > self.reflection_time() {
                log::warn!(
                    "evolution to t = {t_last} exceeds the reflection time {:.1}; \
                     boundary echoes will contaminate late times",
                    self.reflection_time()
                );
            }
        }
        let dim = self.eigenvalues.len();
        let q: Vec<C64> = (0..dim)
            .map(|m| {
                let mut s = C64::new(0.0, 0.0);
                for (a, &c) in c0.iter().enumerate() {
                    s += self.eigenvectors[(a, m)] * c;
                }
                s
            })
            .collect();
        let mut out = vec![vec![C64::new(0.0, 0.0); times.len()]; n_atoms];
        for (ti, &t) in times.iter().enumerate() {
            for m in 0..dim {
                let (s, c) = (-self.eigenvalues[m] * t).sin_cos();
                let qm = q[m] * C64::new(c, s);
                for (a, row) in out.iter_mut().enumerate() {
                    row[ti] += self.eigenvectors[(a, m)] * qm;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn small_params() -> SystemParams {
        SystemParams::single(0.3, 0.6, 1).unwrap().with_lattice_length(8).unwrap()
    }

    #[test]
    fn eigenvectors_are_orthonormal() {
        let lat = Lattice::new(&small_params());
        let v = &lat.eigenvectors;
        let dim = lat.eigenvalues.len();
        for i in 0..dim {
            for j in 0..dim {
                let dot = v.column(i).dot(&v.column(j));
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(dot, expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn eigenvalues_are_sorted() {
        let lat = Lattice::new(&small_params());
        for w in lat.eigenvalues().windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn evolution_starts_at_the_initial_state_and_stays_subnormalized() {
        let p = SystemParams::pair(0.2, 0.5, 2, 1).unwrap().with_lattice_length(40).unwrap();
        let lat = Lattice::new(&p);
        let c0 = [C64::new(0.8, 0.0), C64::new(0.0, 0.6)];
        let times: Vec<f64> = (0..80).map(|i| 0.1 * i as f64).collect();
        let amps = lat.evolve(&c0, &times);
        assert_abs_diff_eq!((amps[0][0] - c0[0]).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((amps[1][0] - c0[1]).norm(), 0.0, epsilon = 1e-12);
        for ti in 0..times.len() {
            let n = amps[0][ti].norm_sqr() + amps[1][ti].norm_sqr();
            assert!(n <= 1.0 + 1e-10);
        }
    }

    /// Same Hamiltonian, independent propagation route: fixed-step
    /// Runge-Kutta on the Schrodinger equation.
    #[test]
    fn eigen_evolution_matches_direct_integration() {
        let p = small_params();
        let ham = single_excitation_hamiltonian(&p);
        let dim = ham.nrows();
        let lat = Lattice::new(&p);
        let c0 = [C64::new(1.0, 0.0)];
        let t_end = 4.0;
        let dt = 5e-4;
        let steps = (t_end / dt) as usize;
        let mut psi = vec![C64::new(0.0, 0.0); dim];
        psi[0] = c0[0];
        let deriv = |v: &[C64]| -> Vec<C64> {
            (0..dim)
                .map(|r| {
                    let mut s = C64::new(0.0, 0.0);
                    for c in 0..dim {
                        if ham[(r, c)] != 0.0 {
                            s += ham[(r, c)] * v[c];
                        }
                    }
                    -C64::i() * s
                })
                .collect()
        };
        for _ in 0..steps {
            let k1 = deriv(&psi);
            let y2: Vec<C64> = psi.iter().zip(&k1).map(|(y, k)| y + 0.5 * dt * k).collect();
            let k2 = deriv(&y2);
            let y3: Vec<C64> = psi.iter().zip(&k2).map(|(y, k)| y + 0.5 * dt * k).collect();
            let k3 = deriv(&y3);
            let y4: Vec<C64> = psi.iter().zip(&k3).map(|(y, k)| y + dt * k).collect();
            let k4 = deriv(&y4);
            for i in 0..dim {
                psi[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        let amps = lat.evolve(&c0, &[t_end]);
        assert!(
            (amps[0][0] - psi[0]).norm() < 1e-8,
            "eigen route {} vs integration {}",
            amps[0][0],
            psi[0]
        );
    }

    #[test]
    fn reflection_time_scales_with_free_lattice_length() {
        let p = SystemParams::single(0.0, 0.8, 3).unwrap();
        let lat = Lattice::new(&p);
        // 800 sites, span 3: wavefront travels ~398 sites out and back at
        // speed 2h
        assert_abs_diff_eq!(lat.reflection_time(), 398.0, epsilon = 1e-12);
    }
}
