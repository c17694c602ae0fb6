// SPDX-License-Identifier: Apache-2.0

//! Ramsey and Hahn-echo sequences on deviation density matrices.
//!
//! Everything here lives in the labeled eigenbasis of the secular
//! Hamiltonian, in the frame rotating at the carrier. Optimized pulses are
//! propagated in the lab product basis and mapped across with `V† U V`.

use std::f64::consts::TAU;

use nalgebra::DVector;
use rayon::prelude::*;
use rustfft::{num_complex::Complex64, FftPlanner};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::pulse::{targets::eigenbasis_target, DriveModel, PulseSequence};
use crate::spin_model::{build_operators, build_secular_hamiltonian, eigensystem, EigenStructure};
use crate::SpinSystem;

/// Default monitored electron transition.
pub const READOUT_PAIR: (usize, usize) = (1, 4);

/// Simulation context for one system and rotating frame.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub system: SpinSystem,
    pub eigs: EigenStructure,
    pub carrier_freq_mhz: f64,
    /// Level energies in the rotating frame, rad/μs, label order.
    rotating_energies: Vec<f64>,
}

impl Experiment {
    pub fn new(system: SpinSystem, carrier_freq_mhz: f64) -> Self {
        let eigs = eigensystem(&build_secular_hamiltonian(&system), &system);
        let rotating_energies = eigs
            .energies_mhz
            .iter()
            .zip(&eigs.manifold)
            .map(|(e, m)| TAU * (e - carrier_freq_mhz * m.m_s()))
            .collect();
        Self { system, eigs, carrier_freq_mhz, rotating_energies }
    }

    /// Frame resonant with the 1–4 electron transition.
    pub fn resonant_with_readout(system: SpinSystem) -> Self {
        let probe = eigensystem(&build_secular_hamiltonian(&system), &system);
        let (j, k) = (READOUT_PAIR.0.min(probe.dim()), READOUT_PAIR.1.min(probe.dim()));
        let carrier = probe.transition_mhz(j, k);
        Self::new(system, carrier)
    }

    pub fn dim(&self) -> usize {
        self.eigs.dim()
    }

    /// Free evolution `exp(−i H_rot t)` in the eigenbasis (diagonal).
    pub fn free_evolution(&self, t_us: f64) -> CMatrix {
        CMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            self.rotating_energies.iter().map(|e| C64::from_polar(1.0, -e * t_us)),
        ))
    }

    /// Propagator of an optimized pulse, expressed in the eigenbasis.
    pub fn pulse_unitary(&self, pulse: &PulseSequence) -> Result<CMatrix> {
        if (pulse.carrier_freq_mhz() - self.carrier_freq_mhz).abs() > 1e-9 * self.carrier_freq_mhz.abs().max(1.0) {
            return Err(Error::InvalidPulse(format!(
                "pulse carrier {} MHz differs from the experiment frame {} MHz",
                pulse.carrier_freq_mhz(),
                self.carrier_freq_mhz
            )));
        }
        let u = DriveModel::new(&self.system, self.carrier_freq_mhz).propagate(pulse)?;
        Ok(self.eigs.to_eigenbasis(&u))
    }

    pub fn element_unitary(&self, element: &Element) -> Result<CMatrix> {
        match element {
            Element::Gate(u) => {
                if u.nrows() != self.dim() {
                    return Err(Error::DimensionMismatch { expected: self.dim(), found: u.nrows() });
                }
                Ok(u.clone())
            }
            Element::Pulse(p) => self.pulse_unitary(p),
            Element::Delay(t) => Ok(self.free_evolution(*t)),
        }
    }

    /// `ρ_thermal = −S_z` in the eigenbasis.
    pub fn thermal_state(&self) -> CMatrix {
        let ops = build_operators(self.system.n_nuclei()).expect("validated system");
        self.eigs.to_eigenbasis(&-&ops.s[2])
    }

    /// `ρ → U ρ U†` for each element in order.
    pub fn evolve(&self, rho: &CMatrix, schedule: &[Element]) -> Result<CMatrix> {
        let mut out = rho.clone();
        for element in schedule {
            let u = self.element_unitary(element)?;
            out = &u * out * u.adjoint();
        }
        Ok(out)
    }

    fn sweep<F>(&self, taus_us: &[f64], description: String, signal_at: F) -> Result<ExperimentTrace>
    where
        F: Fn(f64) -> Result<f64> + Sync,
    {
        let signal = taus_us.par_iter().map(|&t| signal_at(t)).collect::<Result<Vec<f64>>>()?;
        Ok(ExperimentTrace {
            tau_us: taus_us.to_vec(),
            signal,
            meta: TraceMeta { description, system_hash: system_hash(&self.system, self.carrier_freq_mhz) },
        })
    }

    /// `ρ_thermal → U_pc → free(τ) → U_pc⁻¹ → Tr(ρ σ_z^{14})`.
    pub fn ramsey(&self, gates: &RamseyGates, taus_us: &[f64]) -> Result<ExperimentTrace> {
        let prep = self.element_unitary(&gates.prepare)?;
        let read = self.element_unitary(&gates.unprepare)?;
        let rho0 = &prep * self.thermal_state() * prep.adjoint();
        self.sweep(taus_us, format!("ramsey {} / {}", gates.prepare.describe(), gates.unprepare.describe()), |tau| {
            let u = &read * self.free_evolution(tau);
            Ok(echo_signal(&(&u * &rho0 * u.adjoint()), READOUT_PAIR))
        })
    }

    /// `ρ_thermal → U_pc → free(τ/2) → U_r → free(τ/2) → U_pc⁻¹ → Tr(ρ σ_z^{14})`.
    pub fn hahn(&self, gates: &HahnGates, taus_us: &[f64]) -> Result<ExperimentTrace> {
        let prep = self.element_unitary(&gates.prepare)?;
        let refocus = self.element_unitary(&gates.refocus)?;
        let read = self.element_unitary(&gates.unprepare)?;
        let rho0 = &prep * self.thermal_state() * prep.adjoint();
        let description = format!(
            "hahn {} / {} / {}",
            gates.prepare.describe(),
            gates.refocus.describe(),
            gates.unprepare.describe()
        );
        self.sweep(taus_us, description, |tau| {
            let half = self.free_evolution(tau / 2.0);
            let u = &read * &half * &refocus * &half;
            Ok(echo_signal(&(&u * &rho0 * u.adjoint()), READOUT_PAIR))
        })
    }

    /// Bloch projections for each pair after every slice of `pulse`,
    /// starting from `rho0`. The first row is the initial state at t = 0.
    pub fn bloch_trajectory(
        &self,
        rho0: &CMatrix,
        pulse: &PulseSequence,
        pairs: &[(usize, usize)],
    ) -> Result<Vec<(f64, Vec<[f64; 3]>)>> {
        let project = |rho: &CMatrix| pairs.iter().map(|&p| bloch_projection(rho, p)).collect::<Result<Vec<_>>>();
        let mut rows = vec![(0.0, project(rho0)?)];
        let mut rho = rho0.clone();
        let mut t = 0.0;
        for slice in pulse.slices() {
            let single = PulseSequence::new(pulse.carrier_freq_mhz(), pulse.max_rabi_mhz(), pulse.phase_enabled(), vec![*slice])?;
            let u = self.pulse_unitary(&single)?;
            rho = &u * rho * u.adjoint();
            t += slice.duration_us;
            rows.push((t, project(&rho)?));
        }
        Ok(rows)
    }
}

/// One step of a schedule.
#[derive(Debug, Clone)]
pub enum Element {
    /// Ideal unitary in the labeled eigenbasis.
    Gate(CMatrix),
    Pulse(PulseSequence),
    /// Free evolution for the given time in μs.
    Delay(f64),
}

impl Element {
    fn describe(&self) -> String {
        match self {
            Element::Gate(_) => "ideal".into(),
            Element::Pulse(p) => format!("pulse[{}x, {:.0} ns]", p.len(), p.total_duration_us() * 1e3),
            Element::Delay(t) => format!("delay[{:.1} ns]", t * 1e3),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RamseyGates {
    pub prepare: Element,
    pub unprepare: Element,
}

impl RamseyGates {
    pub fn ideal() -> Self {
        Self {
            prepare: Element::Gate(eigenbasis_target("u_pc", 4).expect("built-in")),
            unprepare: Element::Gate(eigenbasis_target("u_pc_inv", 4).expect("built-in")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct HahnGates {
    pub prepare: Element,
    pub refocus: Element,
    pub unprepare: Element,
}

impl HahnGates {
    pub fn ideal() -> Self {
        Self {
            prepare: Element::Gate(eigenbasis_target("u_pc", 4).expect("built-in")),
            refocus: Element::Gate(eigenbasis_target("u_r", 4).expect("built-in")),
            unprepare: Element::Gate(eigenbasis_target("u_pc_inv", 4).expect("built-in")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceMeta {
    pub description: String,
    pub system_hash: u64,
}

/// Echo amplitude versus free-evolution time.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentTrace {
    pub tau_us: Vec<f64>,
    pub signal: Vec<f64>,
    pub meta: TraceMeta,
}

impl ExperimentTrace {
    pub fn peak_to_peak(&self) -> f64 {
        let max = self.signal.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = self.signal.iter().cloned().fold(f64::INFINITY, f64::min);
        max - min
    }
}

/// FNV-1a over the parameter bit patterns.
fn system_hash(sys: &SpinSystem, carrier: f64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |v: f64| {
        for b in v.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    feed(sys.electron_freq_mhz());
    feed(carrier);
    for n in sys.nuclei() {
        for v in [n.zeeman_freq_mhz, n.a_zx_mhz, n.a_zy_mhz, n.a_zz_mhz] {
            feed(v);
        }
    }
    h
}

/// `τ` grid `start, start + step, …` with `n` points.
pub fn tau_grid(start_us: f64, step_us: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| start_us + step_us * i as f64).collect()
}

/// Default Ramsey grid: 0 to 1.28 μs in 10 ns steps.
pub fn default_tau_grid() -> Vec<f64> {
    tau_grid(0.0, 0.01, 128)
}

fn check_pair(rho: &CMatrix, (j, k): (usize, usize)) -> Result<()> {
    let dim = rho.nrows();
    if j == 0 || k == 0 || j == k || j > dim || k > dim {
        return Err(Error::LevelOutOfRange { j, k, dim });
    }
    Ok(())
}

/// `Tr(ρ σ_z^{jk}) = ρ_jj − ρ_kk`.
pub fn echo_signal(rho: &CMatrix, (j, k): (usize, usize)) -> f64 {
    (rho[(j - 1, j - 1)] - rho[(k - 1, k - 1)]).re
}

/// `(Tr ρσ_x^{jk}, Tr ρσ_y^{jk}, Tr ρσ_z^{jk})` with
/// `σ_y^{jk} = i|j⟩⟨k| − i|k⟩⟨j|`.
pub fn bloch_projection(rho: &CMatrix, pair: (usize, usize)) -> Result<[f64; 3]> {
    check_pair(rho, pair)?;
    let (j, k) = (pair.0 - 1, pair.1 - 1);
    let (rjk, rkj) = (rho[(j, k)], rho[(k, j)]);
    let x = (rjk + rkj).re;
    let y = (C64::i() * (rkj - rjk)).re;
    let z = (rho[(j, j)] - rho[(k, k)]).re;
    Ok([x, y, z])
}

/// Location of the largest non-DC FFT magnitude peak in MHz, refined by a
/// parabola through the peak bin and its neighbours.
pub fn dominant_frequency(trace: &ExperimentTrace) -> Result<f64> {
    let n = trace.tau_us.len();
    if n < 4 || trace.signal.len() != n {
        return Err(Error::InvalidTrace("need at least four equally long samples".into()));
    }
    let dt = trace.tau_us[1] - trace.tau_us[0];
    if !(dt > 0.0) || trace.tau_us.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.max(1e-12)) {
        return Err(Error::InvalidTrace("τ grid must be uniform and increasing".into()));
    }
    let mean = trace.signal.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex64> = trace.signal.iter().map(|s| Complex64::new(s - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let mags: Vec<f64> = buf.iter().take(n / 2 + 1).map(|z| z.norm()).collect();
    let (peak, &peak_mag) = mags
        .iter()
        .enumerate()
        .skip(1)
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("n ≥ 4");
    let scale = trace.signal.iter().fold(0.0_f64, |m, s| m.max(s.abs())).max(f64::MIN_POSITIVE);
    if peak_mag <= 1e-9 * scale * n as f64 {
        return Err(Error::NoSpectralPeak);
    }
    let mut bin = peak as f64;
    if peak + 1 < mags.len() {
        let (a, b, c) = (mags[peak - 1], mags[peak], mags[peak + 1]);
        let denom = a - 2.0 * b + c;
        if denom.abs() > 0.0 {
            bin += 0.5 * (a - c) / denom;
        }
    }
    Ok(bin / (n as f64 * dt))
}
