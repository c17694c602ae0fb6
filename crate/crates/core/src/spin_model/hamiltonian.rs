// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::TAU;

use crate::linalg::CMatrix;

use super::{build_operators, SpinSystem};

/// Secular (high-field) Hamiltonian in rad/μs:
///
/// `H = 2π [ν_s S_z − Σ ν_n I_z + Σ S_z (A_zx I_x + A_zy I_y + A_zz I_z)]`
pub fn build_secular_hamiltonian(sys: &SpinSystem) -> CMatrix {
    let ops = build_operators(sys.n_nuclei()).expect("SpinSystem enforces the nucleus limit");
    let sz = &ops.s[2];
    let mut h = sz.scale(sys.electron_freq_mhz());
    for (nuc, [ix, iy, iz]) in sys.nuclei().iter().zip(&ops.i) {
        h -= iz.scale(nuc.zeeman_freq_mhz);
        let row = ix.scale(nuc.a_zx_mhz) + iy.scale(nuc.a_zy_mhz) + iz.scale(nuc.a_zz_mhz);
        h += sz * row;
    }
    h.scale(TAU)
}
