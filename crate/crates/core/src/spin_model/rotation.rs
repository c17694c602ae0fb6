// SPDX-License-Identifier: Apache-2.0

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{c, identity, CMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(Error::InvalidConfig(format!("unknown rotation axis `{other}`"))),
        }
    }
}

/// Two-level generator on the `(j, k)` block:
/// `σ_x = |j⟩⟨k| + |k⟩⟨j|`, `σ_y = i|j⟩⟨k| − i|k⟩⟨j|`, `σ_z = |j⟩⟨j| − |k⟩⟨k|`.
fn block_generator(axis: Axis) -> [[C64; 2]; 2] {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    match axis {
        Axis::X => [[z, o], [o, z]],
        Axis::Y => [[z, c(0.0, 1.0)], [c(0.0, -1.0), z]],
        Axis::Z => [[o, z], [z, -o]],
    }
}

/// `U_jk(θ) = exp(−i θ/2 σ^{jk})` on 1-based levels `j < k` of a
/// `dim`-level space, identity on every other level.
pub fn subspace_rotation(dim: usize, j: usize, k: usize, theta: f64, axis: Axis) -> Result<CMatrix> {
    if j == 0 || j >= k || k > dim {
        return Err(Error::LevelOutOfRange { j, k, dim });
    }
    let g = block_generator(axis);
    let (cos, sin) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let mut u = identity(dim);
    let idx = [j - 1, k - 1];
    for (a, &ra) in idx.iter().enumerate() {
        for (b, &rb) in idx.iter().enumerate() {
            let id = if a == b { 1.0 } else { 0.0 };
            // σ² = 1 for every block generator.
            u[(ra, rb)] = C64::from(cos * id) - c(0.0, sin) * g[a][b];
        }
    }
    Ok(u)
}
