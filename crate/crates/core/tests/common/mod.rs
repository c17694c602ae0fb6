// SPDX-License-Identifier: Apache-2.0
#![allow(dead_code)]

use std::f64::consts::TAU;
use std::path::PathBuf;

use hyperctl_core::io::{parse_config, SystemConfig};
use hyperctl_core::linalg::expm_hermitian;
use hyperctl_core::pulse::{PulseSequence, Slice};
use hyperctl_core::{CMatrix, NucleusSpec, SpinSystem, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn load_config(name: &str) -> SystemConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_config(&text).unwrap()
}

pub fn random_system(rng: &mut ChaCha8Rng, n_nuclei: usize) -> SpinSystem {
    let nuclei = (0..n_nuclei)
        .map(|_| {
            NucleusSpec::new(
                rng.random_range(1.0..30.0),
                rng.random_range(-30.0..30.0),
                rng.random_range(-30.0..30.0),
                rng.random_range(-60.0..60.0),
            )
        })
        .collect();
    SpinSystem::new(rng.random_range(9_000.0..12_000.0), nuclei).unwrap()
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    let a = CMatrix::from_fn(dim, dim, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    (&a + a.adjoint()).scale(0.5)
}

pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    let h = random_hermitian(rng, dim);
    expm_hermitian(&h, 3.0)
}

/// Random control sequence with amplitudes kept inside `±bound`.
pub fn random_controls(
    rng: &mut ChaCha8Rng,
    carrier: f64,
    n: usize,
    slice_us: f64,
    phase_enabled: bool,
    bound: f64,
) -> PulseSequence {
    let slices = (0..n)
        .map(|_| Slice {
            duration_us: slice_us,
            amplitude: rng.random_range(-bound..bound),
            phase_rad: if phase_enabled { rng.random_range(0.0..TAU) } else { 0.0 },
        })
        .collect();
    PulseSequence::new(carrier, rng.random_range(3.0..15.0), phase_enabled, slices).unwrap()
}

/// Brute-force `σ_a ⊗ … ⊗ σ_b` with 2×2 factors listed electron first.
pub fn kron_chain(factors: &[[[C64; 2]; 2]]) -> CMatrix {
    let dim = 1usize << factors.len();
    CMatrix::from_fn(dim, dim, |r, c| {
        let mut v = C64::new(1.0, 0.0);
        for (slot, f) in factors.iter().enumerate() {
            let shift = factors.len() - 1 - slot;
            v *= f[(r >> shift) & 1][(c >> shift) & 1];
        }
        v
    })
}
