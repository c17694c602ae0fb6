// SPDX-License-Identifier: Apache-2.0

//! Piecewise-constant microwave control in the frame rotating at the
//! carrier, with the rotating-wave approximation applied to the drive.

mod filter;
mod fidelity;
mod grape;
mod propagate;
mod sequence;
pub mod targets;

pub use filter::{q_filter, resonator_half_width_mhz, FilterOutput};
pub use fidelity::{evaluate, fidelity_gradient, gate_fidelity, Evaluation, SliceGradient};
pub use grape::{grape_multistart, grape_optimize, random_pulse, restart_seed, GrapeConfig, OptimizationReport};
pub use propagate::{propagate, rotating_frame_hamiltonian, slice_generator, DriveModel};
pub use sequence::{PulseSequence, Slice};
