// SPDX-License-Identifier: Apache-2.0

//! Single-pole resonator model for the microwave cavity.
//!
//! The complex baseband envelope `a(t) e^{iφ(t)}` is treated as one period
//! of a periodic signal, multiplied in the frequency domain by
//! `1 / (1 + i f / f_hw)` with `f_hw = f_0 / 2Q`, and brought back to the
//! slice grid.

use rustfft::{num_complex::Complex64, FftPlanner};

use crate::error::{Error, Result};

use super::{PulseSequence, Slice};

pub fn resonator_half_width_mhz(center_freq_mhz: f64, resonator_q: f64) -> f64 {
    center_freq_mhz / (2.0 * resonator_q)
}

#[derive(Debug, Clone)]
pub struct FilterOutput {
    pub pulse: PulseSequence,
    /// Largest |envelope| before renormalization.
    pub peak_amplitude: f64,
    /// Set when the filtered envelope exceeded 1 and was scaled back.
    pub renormalized: bool,
    pub half_width_mhz: f64,
}

pub fn q_filter(pulse: &PulseSequence, resonator_q: f64, center_freq_mhz: f64) -> Result<FilterOutput> {
    if !(resonator_q.is_finite() && resonator_q > 0.0) {
        return Err(Error::InvalidPulse(format!("resonator Q must be positive, got {resonator_q}")));
    }
    if !(center_freq_mhz.is_finite() && center_freq_mhz > 0.0) {
        return Err(Error::InvalidPulse("resonator center frequency must be positive".into()));
    }
    let half_width_mhz = resonator_half_width_mhz(center_freq_mhz, resonator_q);
    if pulse.is_empty() {
        return Ok(FilterOutput { pulse: pulse.clone(), peak_amplitude: 0.0, renormalized: false, half_width_mhz });
    }
    let dt = pulse
        .uniform_slice_us()
        .ok_or_else(|| Error::InvalidPulse("filtering needs a uniform slice grid".into()))?;
    let n = pulse.len();
    let mut buf: Vec<Complex64> =
        pulse.slices().iter().map(|s| Complex64::from_polar(s.amplitude, s.phase_rad)).collect();

    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, z) in buf.iter_mut().enumerate() {
        let bin = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
        let f_mhz = bin / (n as f64 * dt);
        *z /= Complex64::new(1.0, f_mhz / half_width_mhz);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;

    let (amps, phases): (Vec<f64>, Vec<f64>) = if pulse.phase_enabled() {
        buf.iter().map(|z| { let z = z * scale; (z.norm(), z.arg()) }).unzip()
    } else {
        // Real input through a real impulse response stays real; the
        // Nyquist bin can leave a round-off imaginary part.
        buf.iter().map(|z| (z.re * scale, 0.0)).unzip()
    };
    let peak_amplitude = amps.iter().fold(0.0_f64, |m, a| m.max(a.abs()));
    let renormalized = peak_amplitude > 1.0;
    let norm = if renormalized { peak_amplitude } else { 1.0 };
    let slices = pulse
        .slices()
        .iter()
        .zip(amps.iter().zip(&phases))
        .map(|(s, (&a, &p))| Slice { duration_us: s.duration_us, amplitude: a / norm, phase_rad: p })
        .collect();
    let filtered = PulseSequence::new(pulse.carrier_freq_mhz(), pulse.max_rabi_mhz(), pulse.phase_enabled(), slices)?;
    Ok(FilterOutput { pulse: filtered, peak_amplitude, renormalized, half_width_mhz })
}
