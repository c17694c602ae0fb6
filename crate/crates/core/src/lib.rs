// SPDX-License-Identifier: Apache-2.0

//! Universal control of nuclear spins through an electron spin with
//! anisotropic hyperfine coupling.
//!
//! The crate is organized in four layers:
//!
//! * [`spin_model`]: operators, secular and full Hamiltonians, labeled
//!   eigenstructure, nuclear quantization axes, subspace rotations.
//! * [`controllability`]: strong regularity and control-graph connectivity.
//! * [`pulse`]: piecewise-constant microwave sequences, rotating-frame
//!   propagation, gate fidelity, GRAPE and the resonator filter model.
//! * [`experiment`]: Ramsey / Hahn-echo sequences on deviation density
//!   matrices, echo readout and Bloch projections.
//!
//! [`io`] holds the spin-system config and pulse file formats.

pub mod controllability;
pub mod error;
pub mod experiment;
pub mod io;
pub mod linalg;
pub mod pulse;
pub mod spin_model;

pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};
pub use spin_model::{NucleusSpec, SpinSystem};
