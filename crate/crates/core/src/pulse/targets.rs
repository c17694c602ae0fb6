// SPDX-License-Identifier: Apache-2.0

//! Named gate targets. Gates are defined on the labeled eigenbasis and
//! returned in the rotating-frame lab basis that GRAPE works in.
//!
//! Logical encoding: level `ℓ` (1-based) carries the bits of `ℓ − 1`, with
//! the electron as the most significant bit (`0` = m_s = −1/2 manifold)
//! followed by the nuclear bits `j_1 … j_N`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};
use crate::spin_model::{subspace_rotation, Axis, EigenStructure};

pub const TARGET_NAMES: [&str; 7] = ["u12_pi2", "u24_pi", "u_r", "u_pc", "u_pc_inv", "swap_en", "cnot_hc"];

fn require_dim(name: &str, dim: usize, want: usize) -> Result<()> {
    if dim != want {
        return Err(Error::InvalidTarget(format!("target `{name}` needs a {want}-level system, got {dim}")));
    }
    Ok(())
}

fn permutation(dim: usize, swaps: &[(usize, usize)]) -> CMatrix {
    let mut image: Vec<usize> = (0..dim).collect();
    for &(a, b) in swaps {
        image.swap(a - 1, b - 1);
    }
    let mut m = CMatrix::zeros(dim, dim);
    for (col, &row) in image.iter().enumerate() {
        m[(row, col)] = c(1.0, 0.0);
    }
    m
}

/// Target in the labeled eigenbasis.
pub fn eigenbasis_target(name: &str, dim: usize) -> Result<CMatrix> {
    let rot = |j, k, theta| subspace_rotation(dim, j, k, theta, Axis::X);
    match name {
        "u12_pi2" => {
            require_dim(name, dim, 4)?;
            rot(1, 2, FRAC_PI_2)
        }
        "u24_pi" => {
            require_dim(name, dim, 4)?;
            rot(2, 4, PI)
        }
        // U_r = U_12(π) ⊕ U_34(π)
        "u_r" => {
            require_dim(name, dim, 4)?;
            Ok(rot(1, 2, PI)? * rot(3, 4, PI)?)
        }
        // U_pc = U_12(π/2) U_24(π): inversion of 2↔4 first, then the nuclear π/2
        "u_pc" => {
            require_dim(name, dim, 4)?;
            Ok(rot(1, 2, FRAC_PI_2)? * rot(2, 4, PI)?)
        }
        "u_pc_inv" => {
            require_dim(name, dim, 4)?;
            Ok(rot(2, 4, -PI)? * rot(1, 2, -FRAC_PI_2)?)
        }
        // electron ↔ nucleus: |01⟩ ↔ |10⟩
        "swap_en" => {
            require_dim(name, dim, 4)?;
            Ok(permutation(4, &[(2, 3)]))
        }
        // 1_e ⊗ CNOT with nucleus 1 as control and nucleus 2 as target
        "cnot_hc" => {
            require_dim(name, dim, 8)?;
            Ok(permutation(8, &[(3, 4), (7, 8)]))
        }
        other => Err(Error::InvalidTarget(format!(
            "unknown target `{other}`; known targets: {}",
            TARGET_NAMES.join(", ")
        ))),
    }
}

/// Target mapped to the lab (Zeeman product) basis, `V U V†`.
pub fn named_target(name: &str, eigs: &EigenStructure) -> Result<CMatrix> {
    Ok(eigs.from_eigenbasis(&eigenbasis_target(name, eigs.dim())?))
}
