// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};

/// One constant-control interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slice {
    pub duration_us: f64,
    /// Drive amplitude in units of the maximum Rabi frequency, in [−1, 1].
    pub amplitude: f64,
    pub phase_rad: f64,
}

/// Amplitude (and optionally phase) modulated drive at a fixed carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    carrier_freq_mhz: f64,
    max_rabi_mhz: f64,
    phase_enabled: bool,
    slices: Vec<Slice>,
}

const AMPLITUDE_SLACK: f64 = 1e-12;

impl PulseSequence {
    pub fn new(carrier_freq_mhz: f64, max_rabi_mhz: f64, phase_enabled: bool, slices: Vec<Slice>) -> Result<Self> {
        if !carrier_freq_mhz.is_finite() {
            return Err(Error::InvalidPulse("carrier frequency must be finite".into()));
        }
        if !(max_rabi_mhz.is_finite() && max_rabi_mhz >= 0.0) {
            return Err(Error::InvalidPulse(format!("max Rabi frequency must be non-negative, got {max_rabi_mhz}")));
        }
        for (m, s) in slices.iter().enumerate() {
            if !(s.duration_us.is_finite() && s.duration_us > 0.0) {
                return Err(Error::InvalidPulse(format!("slice {}: duration must be positive", m + 1)));
            }
            if !s.amplitude.is_finite() || !s.phase_rad.is_finite() {
                return Err(Error::InvalidPulse(format!("slice {}: non-finite control value", m + 1)));
            }
            if s.amplitude.abs() > 1.0 + AMPLITUDE_SLACK {
                return Err(Error::InvalidPulse(format!(
                    "slice {}: amplitude {} outside [-1, 1]",
                    m + 1,
                    s.amplitude
                )));
            }
        }
        Ok(Self { carrier_freq_mhz, max_rabi_mhz, phase_enabled, slices })
    }

    /// `n` slices of equal duration with the given amplitudes and zero phase.
    pub fn uniform(carrier_freq_mhz: f64, max_rabi_mhz: f64, slice_us: f64, amplitudes: &[f64]) -> Result<Self> {
        let slices = amplitudes
            .iter()
            .map(|&amplitude| Slice { duration_us: slice_us, amplitude, phase_rad: 0.0 })
            .collect();
        Self::new(carrier_freq_mhz, max_rabi_mhz, false, slices)
    }

    pub fn empty(carrier_freq_mhz: f64, max_rabi_mhz: f64) -> Self {
        Self { carrier_freq_mhz, max_rabi_mhz, phase_enabled: false, slices: Vec::new() }
    }

    pub fn carrier_freq_mhz(&self) -> f64 {
        self.carrier_freq_mhz
    }

    pub fn max_rabi_mhz(&self) -> f64 {
        self.max_rabi_mhz
    }

    pub fn phase_enabled(&self) -> bool {
        self.phase_enabled
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn total_duration_us(&self) -> f64 {
        self.slices.iter().map(|s| s.duration_us).sum()
    }

    pub fn amplitudes(&self) -> Vec<f64> {
        self.slices.iter().map(|s| s.amplitude).collect()
    }

    pub fn phases(&self) -> Vec<f64> {
        self.slices.iter().map(|s| s.phase_rad).collect()
    }

    /// Same timing and carrier with new controls; amplitudes are clipped to [−1, 1].
    pub fn with_controls(&self, amplitudes: &[f64], phases: &[f64]) -> Self {
        assert_eq!(amplitudes.len(), self.len());
        assert_eq!(phases.len(), self.len());
        let slices = self
            .slices
            .iter()
            .zip(amplitudes.iter().zip(phases))
            .map(|(s, (&a, &p))| Slice { duration_us: s.duration_us, amplitude: a.clamp(-1.0, 1.0), phase_rad: p })
            .collect();
        Self { slices, ..self.clone() }
    }

    pub fn set_phase_enabled(&mut self, enabled: bool) {
        self.phase_enabled = enabled;
    }

    /// `self` followed in time by `next`; both must share carrier and Rabi scale.
    pub fn concat(&self, next: &PulseSequence) -> Result<Self> {
        if self.carrier_freq_mhz != next.carrier_freq_mhz || self.max_rabi_mhz != next.max_rabi_mhz {
            return Err(Error::InvalidPulse("cannot concatenate pulses with different carrier or Rabi scale".into()));
        }
        let mut slices = self.slices.clone();
        slices.extend_from_slice(&next.slices);
        Ok(Self { slices, phase_enabled: self.phase_enabled || next.phase_enabled, ..self.clone() })
    }

    /// Common slice duration, if every slice has the same length.
    pub fn uniform_slice_us(&self) -> Option<f64> {
        let first = self.slices.first()?.duration_us;
        self.slices
            .iter()
            .all(|s| (s.duration_us - first).abs() <= 1e-12 * first)
            .then_some(first)
    }
}
