// SPDX-License-Identifier: Apache-2.0

//! Text formats: spin-system configs, pulse files and target matrices.

mod config;
mod matrix_file;
mod pulse_file;

pub use config::{parse_config, parse_frequency_mhz, render_config, ControlSettings, SystemConfig};
pub use matrix_file::parse_matrix;
pub use pulse_file::{parse_pulse, write_pulse};
