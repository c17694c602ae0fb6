// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

use super::{build_operators, NucleusSpec, SpinSystem};

pub type Tensor3 = [[f64; 3]; 3];

/// Bohr magneton over Planck's constant, MHz/T.
pub const BOHR_MAGNETON_MHZ_PER_T: f64 = 13_996.244_936_1;

const IDENTITY3: Tensor3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

/// Full tensor description of a 1e-Nn system, including non-secular
/// hyperfine terms, chemical shifts and nuclear dipolar couplings.
///
/// Hyperfine and dipolar tensors are in MHz, gyromagnetic ratios in MHz/T
/// (γ/2π), the field in tesla.
#[derive(Debug, Clone, PartialEq)]
pub struct FullSystemSpec {
    pub g_tensor: Tensor3,
    pub b_field_tesla: [f64; 3],
    pub gyromagnetic_mhz_per_t: Vec<f64>,
    pub hyperfine_mhz: Vec<Tensor3>,
    pub chem_shift: Vec<Tensor3>,
    /// `dipolar_mhz[k][l]` couples nuclei k and l.
    pub dipolar_mhz: Vec<Vec<Tensor3>>,
}

impl FullSystemSpec {
    pub fn n_nuclei(&self) -> usize {
        self.gyromagnetic_mhz_per_t.len()
    }

    /// Tensors sized for `n` nuclei with zero hyperfine, shift and dipolar terms.
    pub fn empty(g_tensor: Tensor3, b_field_tesla: [f64; 3], gyromagnetic_mhz_per_t: Vec<f64>) -> Self {
        let n = gyromagnetic_mhz_per_t.len();
        Self {
            g_tensor,
            b_field_tesla,
            gyromagnetic_mhz_per_t,
            hyperfine_mhz: vec![[[0.0; 3]; 3]; n],
            chem_shift: vec![[[0.0; 3]; 3]; n],
            dipolar_mhz: vec![vec![[[0.0; 3]; 3]; n]; n],
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.n_nuclei();
        if self.hyperfine_mhz.len() != n || self.chem_shift.len() != n || self.dipolar_mhz.len() != n {
            return Err(Error::InvalidSystem("tensor lists must have one entry per nucleus".into()));
        }
        if self.dipolar_mhz.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidSystem("dipolar tensors must form an N×N table".into()));
        }
        for k in 0..n {
            for l in 0..n {
                let (a, b) = (&self.dipolar_mhz[k][l], &self.dipolar_mhz[l][k]);
                let mirrored = (0..3).all(|m| (0..3).all(|v| a[m][v] == b[m][v]));
                let self_sym = k != l || (0..3).all(|m| (0..3).all(|v| a[m][v] == a[v][m]));
                if !mirrored || !self_sym {
                    return Err(Error::AsymmetricDipolar(k + 1, l + 1));
                }
            }
        }
        Ok(())
    }

    /// Secular reduction for a field along z: keeps `g_zz`, `δ_zz` and the
    /// `A_z·` hyperfine row.
    pub fn secular_system(&self) -> Result<SpinSystem> {
        let b0 = self.b_field_tesla[2];
        let nu_s = BOHR_MAGNETON_MHZ_PER_T * self.g_tensor[2][2] * b0;
        let nuclei = (0..self.n_nuclei())
            .map(|k| {
                let a = &self.hyperfine_mhz[k];
                NucleusSpec::new(
                    self.gyromagnetic_mhz_per_t[k] * (1.0 - self.chem_shift[k][2][2]) * b0,
                    a[2][0],
                    a[2][1],
                    a[2][2],
                )
            })
            .collect();
        SpinSystem::new(nu_s, nuclei)
    }
}

/// Full Hamiltonian in rad/μs with Zeeman, chemical shift, full hyperfine
/// (prefactor 2π) and dipolar (prefactor π) terms.
pub fn build_full_hamiltonian(spec: &FullSystemSpec) -> Result<CMatrix> {
    spec.validate()?;
    let ops = build_operators(spec.n_nuclei())?;
    let dim = ops.dim();
    let b = spec.b_field_tesla;
    let mut h = CMatrix::zeros(dim, dim);

    for mu in 0..3 {
        let field: f64 = (0..3).map(|nu| spec.g_tensor[mu][nu] * b[nu]).sum();
        h += ops.s[mu].scale(TAU * BOHR_MAGNETON_MHZ_PER_T * field);
    }
    for k in 0..spec.n_nuclei() {
        let gamma = spec.gyromagnetic_mhz_per_t[k];
        let delta = &spec.chem_shift[k];
        for mu in 0..3 {
            let field: f64 = (0..3).map(|nu| (IDENTITY3[mu][nu] - delta[mu][nu]) * b[nu]).sum();
            h -= ops.i[k][mu].scale(TAU * gamma * field);
        }
        let a = &spec.hyperfine_mhz[k];
        for mu in 0..3 {
            for nu in 0..3 {
                if a[mu][nu] != 0.0 {
                    h += (&ops.s[mu] * &ops.i[k][nu]).scale(TAU * a[mu][nu]);
                }
            }
        }
    }
    for k in 0..spec.n_nuclei() {
        for l in 0..spec.n_nuclei() {
            let d = &spec.dipolar_mhz[k][l];
            for mu in 0..3 {
                for nu in 0..3 {
                    if d[mu][nu] != 0.0 {
                        h += (&ops.i[k][mu] * &ops.i[l][nu]).scale(PI * d[mu][nu]);
                    }
                }
            }
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermiticity_error, max_abs, HermitianEigen};
    use crate::spin_model::build_secular_hamiltonian;

    fn diag_g(gzz: f64) -> Tensor3 {
        [[2.0023, 0.0, 0.0], [0.0, 2.0023, 0.0], [0.0, 0.0, gzz]]
    }

    #[test]
    fn secular_limit_matches_secular_builder() {
        let mut spec = FullSystemSpec::empty(diag_g(2.0036), [0.0, 0.0, 0.4237], vec![42.577]);
        spec.hyperfine_mhz[0] = [[0.0; 3], [0.0; 3], [14.2, 3.0, -42.7]];
        let sys = spec.secular_system().unwrap();
        let full = build_full_hamiltonian(&spec).unwrap();
        let sec = build_secular_hamiltonian(&sys);
        assert!(max_abs(&(full - sec)) < 1e-9);
    }

    #[test]
    fn zeeman_only_spectrum() {
        let spec = FullSystemSpec::empty(diag_g(2.0), [0.0, 0.0, 0.1], vec![42.577, 10.708]);
        let h = build_full_hamiltonian(&spec).unwrap();
        let nu_e = BOHR_MAGNETON_MHZ_PER_T * 2.0 * 0.1;
        let (n1, n2) = (4.2577, 1.0708);
        let mut expected: Vec<f64> = Vec::new();
        for se in [0.5, -0.5] {
            for s1 in [0.5, -0.5] {
                for s2 in [0.5, -0.5] {
                    expected.push(TAU * (nu_e * se - n1 * s1 - n2 * s2));
                }
            }
        }
        expected.sort_by(f64::total_cmp);
        let eig = HermitianEigen::new(&h);
        for (v, w) in eig.values.iter().zip(&expected) {
            assert!((v - w).abs() < 1e-8 * w.abs().max(1.0));
        }
    }

    #[test]
    fn dropped_terms_are_transverse_electron_hyperfine() {
        let a: Tensor3 = [[3.0, -1.5, 2.0], [0.5, 4.0, -2.5], [14.2, 1.0, -42.7]];
        let mut spec = FullSystemSpec::empty(diag_g(2.0), [0.0, 0.0, 0.42], vec![42.577]);
        spec.hyperfine_mhz[0] = a;
        let full = build_full_hamiltonian(&spec).unwrap();
        let sec = build_secular_hamiltonian(&spec.secular_system().unwrap());
        let ops = build_operators(1).unwrap();
        let mut transverse = CMatrix::zeros(4, 4);
        for mu in 0..2 {
            for nu in 0..3 {
                transverse += (&ops.s[mu] * &ops.i[0][nu]).scale(TAU * a[mu][nu]);
            }
        }
        assert!(max_abs(&(full - sec - transverse)) < 1e-9);
    }

    #[test]
    fn dipolar_term_is_hermitian_and_validated() {
        let mut spec = FullSystemSpec::empty(diag_g(2.0), [0.0, 0.1, 0.3], vec![42.577, 10.708]);
        let d: Tensor3 = [[0.02, 0.01, 0.0], [0.03, -0.01, 0.0], [0.0, 0.0, -0.01]];
        spec.dipolar_mhz[0][1] = d;
        spec.dipolar_mhz[1][0] = d;
        let h = build_full_hamiltonian(&spec).unwrap();
        assert!(hermiticity_error(&h) < 1e-12);

        spec.dipolar_mhz[1][0][0][1] = 0.5;
        assert_eq!(build_full_hamiltonian(&spec), Err(Error::AsymmetricDipolar(1, 2)));

        let mut spec = FullSystemSpec::empty(diag_g(2.0), [0.0, 0.0, 0.3], vec![42.577]);
        spec.dipolar_mhz[0][0] = [[0.0, 1.0, 0.0], [0.0; 3], [0.0; 3]];
        assert!(matches!(build_full_hamiltonian(&spec), Err(Error::AsymmetricDipolar(1, 1))));
    }
}
