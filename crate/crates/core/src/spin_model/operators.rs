// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{c, identity, kron, CMatrix};

use super::MAX_NUCLEI;

/// Cartesian spin-1/2 operators embedded in the full `2^(N+1)` space.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    /// Electron `[S_x, S_y, S_z]`.
    pub s: [CMatrix; 3],
    /// Per-nucleus `[I_x, I_y, I_z]`, nucleus 1 first.
    pub i: Vec<[CMatrix; 3]>,
}

impl SpinOperators {
    pub fn dim(&self) -> usize {
        self.s[0].nrows()
    }

    pub fn n_nuclei(&self) -> usize {
        self.i.len()
    }

    /// Operators keyed as `S_x`, `S_y`, `S_z`, `I_x^1`, ...
    pub fn named(&self) -> BTreeMap<String, CMatrix> {
        let mut map = BTreeMap::new();
        for (axis, op) in ["x", "y", "z"].iter().zip(&self.s) {
            map.insert(format!("S_{axis}"), op.clone());
        }
        for (k, ops) in self.i.iter().enumerate() {
            for (axis, op) in ["x", "y", "z"].iter().zip(ops) {
                map.insert(format!("I_{axis}^{}", k + 1), op.clone());
            }
        }
        map
    }
}

/// The three spin-1/2 matrices σ/2.
pub(crate) fn half_paulis() -> [CMatrix; 3] {
    let z = c(0.0, 0.0);
    let h = c(0.5, 0.0);
    [
        CMatrix::from_row_slice(2, 2, &[z, h, h, z]),
        CMatrix::from_row_slice(2, 2, &[z, c(0.0, -0.5), c(0.0, 0.5), z]),
        CMatrix::from_row_slice(2, 2, &[h, z, z, -h]),
    ]
}

/// Embed a single-spin operator at `slot` of `n_spins` spin-1/2 factors.
pub(crate) fn embed(op: &CMatrix, slot: usize, n_spins: usize) -> CMatrix {
    let left = identity(1 << slot);
    let right = identity(1 << (n_spins - slot - 1));
    kron(&kron(&left, op), &right)
}

pub fn build_operators(n_nuclei: usize) -> Result<SpinOperators> {
    if n_nuclei > MAX_NUCLEI {
        return Err(Error::TooManyNuclei(n_nuclei));
    }
    let n_spins = n_nuclei + 1;
    let paulis = half_paulis();
    let s = paulis.clone().map(|p| embed(&p, 0, n_spins));
    let i = (1..n_spins)
        .map(|slot| paulis.clone().map(|p| embed(&p, slot, n_spins)))
        .collect();
    Ok(SpinOperators { s, i })
}
