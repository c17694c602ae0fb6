// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::linalg::{identity, CMatrix, HermitianEigen};
use crate::spin_model::{build_operators, build_secular_hamiltonian};
use crate::SpinSystem;

use super::PulseSequence;

/// `H_0 − 2πΩ S_z`: the secular drift in the frame rotating at the carrier.
/// Exact because the secular Hamiltonian commutes with `S_z`.
pub fn rotating_frame_hamiltonian(sys: &SpinSystem, carrier_freq_mhz: f64) -> CMatrix {
    let ops = build_operators(sys.n_nuclei()).expect("SpinSystem enforces the nucleus limit");
    build_secular_hamiltonian(sys) - ops.s[2].scale(TAU * carrier_freq_mhz)
}

/// Drift and control operators for one system and carrier.
#[derive(Debug, Clone)]
pub struct DriveModel {
    pub drift: CMatrix,
    pub sx: CMatrix,
    pub sy: CMatrix,
    pub carrier_freq_mhz: f64,
}

impl DriveModel {
    pub fn new(sys: &SpinSystem, carrier_freq_mhz: f64) -> Self {
        let ops = build_operators(sys.n_nuclei()).expect("SpinSystem enforces the nucleus limit");
        let [sx, sy, _] = ops.s;
        Self { drift: rotating_frame_hamiltonian(sys, carrier_freq_mhz), sx, sy, carrier_freq_mhz }
    }

    pub fn dim(&self) -> usize {
        self.drift.nrows()
    }

    /// `∂H/∂amplitude` for a slice at `phase`.
    pub fn amplitude_direction(&self, max_rabi_mhz: f64, phase: f64) -> CMatrix {
        (self.sx.scale(phase.cos()) + self.sy.scale(phase.sin())).scale(TAU * max_rabi_mhz)
    }

    /// `∂H/∂phase` for a slice at `(amplitude, phase)`.
    pub fn phase_direction(&self, max_rabi_mhz: f64, amplitude: f64, phase: f64) -> CMatrix {
        (self.sy.scale(phase.cos()) - self.sx.scale(phase.sin())).scale(TAU * max_rabi_mhz * amplitude)
    }

    pub fn slice_generator(&self, max_rabi_mhz: f64, amplitude: f64, phase: f64) -> CMatrix {
        &self.drift + self.amplitude_direction(max_rabi_mhz, phase).scale(amplitude)
    }

    /// Eigendecomposition of every slice Hamiltonian, in time order.
    pub(crate) fn slice_eigens(&self, pulse: &PulseSequence) -> Vec<HermitianEigen> {
        pulse
            .slices()
            .iter()
            .map(|s| HermitianEigen::new(&self.slice_generator(pulse.max_rabi_mhz(), s.amplitude, s.phase_rad)))
            .collect()
    }

    /// Time-ordered product `U_M ⋯ U_1` (first slice acts first).
    pub fn propagate(&self, pulse: &PulseSequence) -> Result<CMatrix> {
        check_finite(pulse)?;
        let mut u = identity(self.dim());
        for (eig, s) in self.slice_eigens(pulse).iter().zip(pulse.slices()) {
            u = eig.propagator(s.duration_us) * u;
        }
        Ok(u)
    }

    /// Free evolution `exp(−i H_rot t)`.
    pub fn free_propagator(&self, t_us: f64) -> CMatrix {
        HermitianEigen::new(&self.drift).propagator(t_us)
    }
}

fn check_finite(pulse: &PulseSequence) -> Result<()> {
    let bad = pulse
        .slices()
        .iter()
        .any(|s| !s.amplitude.is_finite() || !s.phase_rad.is_finite() || !s.duration_us.is_finite());
    if bad {
        return Err(Error::InvalidPulse("non-finite slice".into()));
    }
    Ok(())
}

/// `H_rot + 2π Ω_R a (cos φ S_x + sin φ S_y)`.
pub fn slice_generator(
    sys: &SpinSystem,
    carrier_freq_mhz: f64,
    max_rabi_mhz: f64,
    amplitude: f64,
    phase_rad: f64,
) -> CMatrix {
    DriveModel::new(sys, carrier_freq_mhz).slice_generator(max_rabi_mhz, amplitude, phase_rad)
}

pub fn propagate(pulse: &PulseSequence, sys: &SpinSystem) -> Result<CMatrix> {
    DriveModel::new(sys, pulse.carrier_freq_mhz()).propagate(pulse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, expm_hermitian, max_abs, unitarity_error};
    use crate::pulse::Slice;
    use crate::NucleusSpec;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn resonant_bare_electron_has_no_drift() {
        let sys = SpinSystem::new(250.0, vec![NucleusSpec::new(0.0, 0.0, 0.0, 0.0)]).unwrap();
        assert!(max_abs(&rotating_frame_hamiltonian(&sys, 250.0)) < 1e-9);
    }

    #[test]
    fn malonic_offset_on_sz() {
        let sys = SpinSystem::malonic_acid();
        let h_rot = rotating_frame_hamiltonian(&sys, 11_909.0);
        let ops = build_operators(1).unwrap();
        // Electron part: 2π (ν_s − Ω) S_z = 2π (−24) S_z.
        let electron = (&ops.s[2] * &h_rot).trace().re * 2.0 / 2.0 / TAU;
        assert!((electron - (-24.0)).abs() < 1e-9, "{electron}");
        assert!(max_abs(&commutator(&h_rot, &ops.s[2])) < 1e-12);
        assert!(max_abs(&h_rot) < TAU * 40.0);
    }

    #[test]
    fn generator_controls() {
        let sys = SpinSystem::malonic_acid();
        let model = DriveModel::new(&sys, 11_909.0);
        let ops = build_operators(1).unwrap();
        assert_eq!(model.slice_generator(7.0, 0.0, 0.3), model.drift);
        let ctrl = model.slice_generator(7.0, 1.0, 0.0) - &model.drift;
        assert!(max_abs(&(ctrl - ops.s[0].scale(TAU * 7.0))) < 1e-12);

        // φ = π/2 is the φ = 0 control rotated about S_z.
        let rz = expm_hermitian(&ops.s[2], FRAC_PI_2);
        let c0 = model.slice_generator(7.0, 0.6, 0.0) - &model.drift;
        let c90 = model.slice_generator(7.0, 0.6, FRAC_PI_2) - &model.drift;
        assert!(max_abs(&(c90 - &rz * c0 * rz.adjoint())) < 1e-12);
    }

    #[test]
    fn empty_pulse_is_identity() {
        let sys = SpinSystem::malonic_acid();
        let u = propagate(&PulseSequence::empty(11_909.0, 7.0), &sys).unwrap();
        assert_eq!(u, identity(4));
    }

    #[test]
    fn concatenation_is_product() {
        let sys = SpinSystem::malonic_acid();
        let p1 = PulseSequence::uniform(11_909.0, 7.0, 0.004, &[0.3, -0.7, 1.0, 0.1]).unwrap();
        let p2 = PulseSequence::uniform(11_909.0, 7.0, 0.004, &[-0.2, 0.9]).unwrap();
        let u12 = propagate(&p1.concat(&p2).unwrap(), &sys).unwrap();
        let prod = propagate(&p2, &sys).unwrap() * propagate(&p1, &sys).unwrap();
        assert!(max_abs(&(u12 - &prod)) < 1e-12);
        assert!(unitarity_error(&prod) < 1e-10);
    }

    #[test]
    fn rabi_formula_on_single_electron() {
        // Detuned constant drive: P(↑→↓) = Ω²/(Ω²+Δ²) sin²(π √(Ω²+Δ²) t).
        let sys = SpinSystem::new(1_000.0, vec![]).unwrap();
        let (rabi, amp) = (7.0, 0.8);
        for (carrier, t) in [(1_000.0, 0.05), (1_000.0, 0.113), (1_003.0, 0.21)] {
            let pulse = PulseSequence::new(
                carrier,
                rabi,
                false,
                vec![Slice { duration_us: t, amplitude: amp, phase_rad: 0.0 }],
            )
            .unwrap();
            let u = propagate(&pulse, &sys).unwrap();
            let p = u[(1, 0)].norm_sqr();
            let (w, d): (f64, f64) = (rabi * amp, 1_000.0 - carrier);
            let eff = (w * w + d * d).sqrt();
            let oracle = w * w / (eff * eff) * (PI * eff * t).sin().powi(2);
            assert!((p - oracle).abs() < 1e-9, "{p} vs {oracle}");
        }
    }

    #[test]
    fn non_finite_rejected_at_construction() {
        assert!(PulseSequence::uniform(11_909.0, 7.0, 0.004, &[f64::INFINITY]).is_err());
    }
}
