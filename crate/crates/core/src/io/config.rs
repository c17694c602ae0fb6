// SPDX-License-Identifier: Apache-2.0

//! Spin-system config files.
//!
//! ```text
//! # malonic acid radical, one α-proton
//! name = malonic_acid
//! electron_freq = 11.885 GHz
//!
//! [nucleus]
//! zeeman_freq = 18.1 MHz
//! a_zx = 14.2 MHz
//! a_zy = 0 MHz
//! a_zz = -42.7 MHz
//!
//! [control]
//! carrier_freq = 11.909 GHz
//! max_rabi = 7 MHz
//! ```
//!
//! Every frequency needs a unit suffix (`kHz`, `MHz` or `GHz`); bare
//! numbers are rejected. Each `[nucleus]` block adds one nucleus in order.

use crate::error::{Error, Result};
use crate::{NucleusSpec, SpinSystem};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControlSettings {
    pub carrier_freq_mhz: Option<f64>,
    pub max_rabi_mhz: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub name: Option<String>,
    pub system: SpinSystem,
    pub control: ControlSettings,
}

fn parse_err(line: usize, key: Option<&str>, msg: impl Into<String>) -> Error {
    Error::Parse { line, key: key.map(str::to_owned), msg: msg.into() }
}

/// Parse `"<number> <unit>"` into MHz.
pub fn parse_frequency_mhz(value: &str) -> std::result::Result<f64, String> {
    let value = value.trim();
    let split = value
        .find(|ch: char| ch.is_ascii_alphabetic() && ch != 'e' && ch != 'E')
        .ok_or_else(|| format!("`{value}` has no unit suffix (use kHz, MHz or GHz)"))?;
    let (num, unit) = value.split_at(split);
    let num: f64 = num.trim().parse().map_err(|_| format!("`{}` is not a number", num.trim()))?;
    if !num.is_finite() {
        return Err(format!("`{value}` is not finite"));
    }
    let scale = match unit.trim() {
        "kHz" => 1e-3,
        "MHz" => 1.0,
        "GHz" => 1e3,
        other => return Err(format!("unknown unit `{other}` (use kHz, MHz or GHz)")),
    };
    Ok(num * scale)
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Top,
    Nucleus,
    Control,
}

#[derive(Default)]
struct PartialNucleus {
    start_line: usize,
    zeeman: Option<f64>,
    a: [Option<f64>; 3],
}

pub fn parse_config(text: &str) -> Result<SystemConfig> {
    let mut name = None;
    let mut electron = None;
    let mut control = ControlSettings::default();
    let mut nuclei: Vec<PartialNucleus> = Vec::new();
    let mut section = Section::Top;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            section = match line {
                "[nucleus]" => {
                    nuclei.push(PartialNucleus { start_line: line_no, ..Default::default() });
                    Section::Nucleus
                }
                "[control]" => Section::Control,
                other => return Err(parse_err(line_no, None, format!("unknown section `{other}`"))),
            };
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(line_no, None, format!("expected `key = value`, found `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let freq = || parse_frequency_mhz(value).map_err(|m| parse_err(line_no, Some(key), m));
        let set = |slot: &mut Option<f64>, v: f64| -> Result<()> {
            if slot.replace(v).is_some() {
                return Err(parse_err(line_no, Some(key), "duplicate key"));
            }
            Ok(())
        };
        match (section, key) {
            (Section::Top, "name") => name = Some(value.to_owned()),
            (Section::Top, "electron_freq") => set(&mut electron, freq()?)?,
            (Section::Nucleus, _) => {
                let nuc = nuclei.last_mut().expect("nucleus section implies an entry");
                let slot = match key {
                    "zeeman_freq" => &mut nuc.zeeman,
                    "a_zx" => &mut nuc.a[0],
                    "a_zy" => &mut nuc.a[1],
                    "a_zz" => &mut nuc.a[2],
                    _ => return Err(parse_err(line_no, Some(key), "unknown nucleus key")),
                };
                set(slot, freq()?)?;
            }
            (Section::Control, "carrier_freq") => set(&mut control.carrier_freq_mhz, freq()?)?,
            (Section::Control, "max_rabi") => set(&mut control.max_rabi_mhz, freq()?)?,
            _ => return Err(parse_err(line_no, Some(key), "unknown key")),
        }
    }

    let electron = electron.ok_or_else(|| parse_err(0, Some("electron_freq"), "missing required key"))?;
    let specs = nuclei
        .iter()
        .map(|n| {
            let zeeman =
                n.zeeman.ok_or_else(|| parse_err(n.start_line, Some("zeeman_freq"), "missing in nucleus block"))?;
            // Absent hyperfine components default to zero.
            let [zx, zy, zz] = n.a.map(|a| a.unwrap_or(0.0));
            Ok(NucleusSpec::new(zeeman, zx, zy, zz))
        })
        .collect::<Result<Vec<_>>>()?;
    let system = SpinSystem::new(electron, specs).map_err(|e| parse_err(0, None, e.to_string()))?;
    Ok(SystemConfig { name, system, control })
}

/// Canonical text form; `parse_config(render_config(c)) == c`.
pub fn render_config(cfg: &SystemConfig) -> String {
    let mut out = String::new();
    if let Some(name) = &cfg.name {
        out.push_str(&format!("name = {name}\n"));
    }
    out.push_str(&format!("electron_freq = {} MHz\n", cfg.system.electron_freq_mhz()));
    for n in cfg.system.nuclei() {
        out.push_str(&format!(
            "\n[nucleus]\nzeeman_freq = {} MHz\na_zx = {} MHz\na_zy = {} MHz\na_zz = {} MHz\n",
            n.zeeman_freq_mhz, n.a_zx_mhz, n.a_zy_mhz, n.a_zz_mhz
        ));
    }
    if cfg.control != ControlSettings::default() {
        out.push_str("\n[control]\n");
        if let Some(c) = cfg.control.carrier_freq_mhz {
            out.push_str(&format!("carrier_freq = {c} MHz\n"));
        }
        if let Some(r) = cfg.control.max_rabi_mhz {
            out.push_str(&format!("max_rabi = {r} MHz\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MALONIC: &str = "\
# malonic acid
name = malonic_acid
electron_freq = 11.885 GHz

[nucleus]
zeeman_freq = 18.1 MHz
a_zx = 14.2 MHz   # anisotropic part
a_zy = 0 MHz
a_zz = -42.7 MHz

[control]
carrier_freq = 11.909 GHz
max_rabi = 7 MHz
";

    #[test]
    fn parses_malonic() {
        let cfg = parse_config(MALONIC).unwrap();
        assert_eq!(cfg.name.as_deref(), Some("malonic_acid"));
        assert!((cfg.system.electron_freq_mhz() - 11_885.0).abs() < 1e-9);
        assert_eq!(cfg.system.nuclei()[0], NucleusSpec::new(18.1, 14.2, 0.0, -42.7));
        assert!((cfg.control.carrier_freq_mhz.unwrap() - 11_909.0).abs() < 1e-9);
        assert_eq!(cfg.control.max_rabi_mhz, Some(7.0));
    }

    #[test]
    fn units() {
        assert_eq!(parse_frequency_mhz("250 kHz").unwrap(), 0.25);
        assert_eq!(parse_frequency_mhz("1.5e1 MHz").unwrap(), 15.0);
        assert!(parse_frequency_mhz("7").is_err());
        assert!(parse_frequency_mhz("7 Hz").is_err());
        assert!(parse_frequency_mhz("abc MHz").is_err());
    }

    #[test]
    fn bare_number_names_line_and_key() {
        let text = "electron_freq = 11.885 GHz\n[nucleus]\nzeeman_freq = 18.1\n";
        let err = parse_config(text).unwrap_err();
        match &err {
            Error::Parse { line, key, .. } => {
                assert_eq!(*line, 3);
                assert_eq!(key.as_deref(), Some("zeeman_freq"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.to_string().contains("line 3"));
        assert!(err.to_string().contains("zeeman_freq"));
    }

    #[test]
    fn structural_errors() {
        assert!(parse_config("[nucleus]\nzeeman_freq = 1 MHz\n").is_err()); // no electron
        assert!(parse_config("electron_freq = 1 GHz\n[nuclear]\n").is_err());
        assert!(parse_config("electron_freq = 1 GHz\nbogus\n").is_err());
        assert!(parse_config("electron_freq = 1 GHz\nelectron_freq = 2 GHz\n").is_err());
        assert!(parse_config("electron_freq = 1 GHz\n[nucleus]\na_zz = 1 MHz\n").is_err());
        assert!(parse_config("electron_freq = -1 GHz\n").is_err());
    }

    #[test]
    fn render_round_trip() {
        let cfg = parse_config(MALONIC).unwrap();
        assert_eq!(parse_config(&render_config(&cfg)).unwrap(), cfg);
    }
}
