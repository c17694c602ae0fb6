// SPDX-License-Identifier: Apache-2.0

//! Pulse files: three `#` header lines followed by one
//! `duration_ns amplitude phase_rad` row per slice.

use crate::error::{Error, Result};
use crate::pulse::{PulseSequence, Slice};

const COLUMNS: &str = "# duration_ns amplitude phase_rad";

/// Canonical serialization; parsing and re-writing is byte-identical.
pub fn write_pulse(pulse: &PulseSequence) -> String {
    let mut out = String::with_capacity(64 + pulse.len() * 48);
    out.push_str(&format!("# carrier_mhz={}\n", pulse.carrier_freq_mhz()));
    out.push_str(&format!("# max_rabi_mhz={}\n", pulse.max_rabi_mhz()));
    out.push_str(&format!("# phase_enabled={}\n", u8::from(pulse.phase_enabled())));
    out.push_str(COLUMNS);
    out.push('\n');
    for s in pulse.slices() {
        out.push_str(&format!("{:.6} {:.12e} {:.12e}\n", s.duration_us * 1e3, s.amplitude, s.phase_rad));
    }
    out
}

fn err(line: usize, key: Option<&str>, msg: impl Into<String>) -> Error {
    Error::Parse { line, key: key.map(str::to_owned), msg: msg.into() }
}

pub fn parse_pulse(text: &str) -> Result<PulseSequence> {
    let mut carrier = None;
    let mut rabi = None;
    let mut phase_enabled = None;
    let mut slices = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let Some((key, value)) = comment.split_once('=') else { continue };
            let (key, value) = (key.trim(), value.trim());
            let number = || value.parse::<f64>().map_err(|_| err(line_no, Some(key), format!("`{value}` is not a number")));
            match key {
                "carrier_mhz" => carrier = Some(number()?),
                "max_rabi_mhz" => rabi = Some(number()?),
                "phase_enabled" => {
                    phase_enabled = Some(match value {
                        "0" => false,
                        "1" => true,
                        _ => return Err(err(line_no, Some(key), "expected 0 or 1")),
                    })
                }
                _ => {}
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err(line_no, None, format!("expected 3 columns, found {}", fields.len())));
        }
        let num = |i: usize, name: &str| {
            fields[i].parse::<f64>().map_err(|_| err(line_no, Some(name), format!("`{}` is not a number", fields[i])))
        };
        slices.push(Slice {
            duration_us: num(0, "duration_ns")? / 1e3,
            amplitude: num(1, "amplitude")?,
            phase_rad: num(2, "phase_rad")?,
        });
    }
    let carrier = carrier.ok_or_else(|| err(0, Some("carrier_mhz"), "missing header"))?;
    let rabi = rabi.ok_or_else(|| err(0, Some("max_rabi_mhz"), "missing header"))?;
    let phase_enabled = phase_enabled.ok_or_else(|| err(0, Some("phase_enabled"), "missing header"))?;
    PulseSequence::new(carrier, rabi, phase_enabled, slices).map_err(|e| err(0, None, e.to_string()))
}
