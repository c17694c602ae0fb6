// SPDX-License-Identifier: Apache-2.0

//! Electron + N nuclear spin-1/2 systems: operators, Hamiltonians,
//! labeled eigenstructure and nuclear quantization geometry.
//!
//! Conventions: frequencies are stored as linear MHz, Hamiltonian matrices
//! are in angular units (rad/μs), and the electron occupies the first
//! Kronecker slot with basis order `|↑⟩, |↓⟩`.

mod eigen;
mod full;
mod geometry;
mod hamiltonian;
mod operators;
mod rotation;

pub use eigen::{eigensystem, transition_table, EigenStructure, Manifold, Transition, DEFAULT_DEGENERACY_TOL_MHZ};
pub use full::{build_full_hamiltonian, FullSystemSpec, Tensor3, BOHR_MAGNETON_MHZ_PER_T};
pub use geometry::{quantization_axes, QuantizationAxes};
pub use hamiltonian::build_secular_hamiltonian;
pub use operators::{build_operators, SpinOperators};
pub use rotation::{subspace_rotation, Axis};

use crate::error::{Error, Result};

/// Largest supported number of nuclei (dimension 2^13).
pub const MAX_NUCLEI: usize = 12;

/// One nuclear spin-1/2 in the secular (high-field) model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NucleusSpec {
    /// Nuclear Zeeman frequency ν_n in MHz; enters the Hamiltonian as `-ν_n I_z`.
    pub zeeman_freq_mhz: f64,
    pub a_zx_mhz: f64,
    pub a_zy_mhz: f64,
    pub a_zz_mhz: f64,
}

impl NucleusSpec {
    pub fn new(zeeman_freq_mhz: f64, a_zx_mhz: f64, a_zy_mhz: f64, a_zz_mhz: f64) -> Self {
        Self { zeeman_freq_mhz, a_zx_mhz, a_zy_mhz, a_zz_mhz }
    }

    /// True when the hyperfine row has a transverse component.
    pub fn is_anisotropic(&self) -> bool {
        self.a_zx_mhz != 0.0 || self.a_zy_mhz != 0.0
    }

    fn is_finite(&self) -> bool {
        [self.zeeman_freq_mhz, self.a_zx_mhz, self.a_zy_mhz, self.a_zz_mhz]
            .iter()
            .all(|v| v.is_finite())
    }
}

/// One electron spin coupled to `N` nuclear spins through the secular
/// hyperfine row `A_z·`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinSystem {
    electron_freq_mhz: f64,
    nuclei: Vec<NucleusSpec>,
}

impl SpinSystem {
    pub fn new(electron_freq_mhz: f64, nuclei: Vec<NucleusSpec>) -> Result<Self> {
        if !(electron_freq_mhz.is_finite() && electron_freq_mhz > 0.0) {
            return Err(Error::InvalidSystem(format!(
                "electron frequency must be positive, got {electron_freq_mhz} MHz"
            )));
        }
        if nuclei.len() > MAX_NUCLEI {
            return Err(Error::TooManyNuclei(nuclei.len()));
        }
        if let Some(k) = nuclei.iter().position(|n| !n.is_finite()) {
            return Err(Error::InvalidSystem(format!("nucleus {} has non-finite parameters", k + 1)));
        }
        Ok(Self { electron_freq_mhz, nuclei })
    }

    /// Single-crystal malonic acid radical at the orientation used for the
    /// Ramsey/Hahn experiments (one α-proton).
    pub fn malonic_acid() -> Self {
        Self::new(11_885.0, vec![NucleusSpec::new(18.1, 14.2, 0.0, -42.7)])
            .expect("canonical parameters are valid")
    }

    pub fn electron_freq_mhz(&self) -> f64 {
        self.electron_freq_mhz
    }

    pub fn nuclei(&self) -> &[NucleusSpec] {
        &self.nuclei
    }

    pub fn n_nuclei(&self) -> usize {
        self.nuclei.len()
    }

    pub fn dim(&self) -> usize {
        1 << (self.nuclei.len() + 1)
    }
}
