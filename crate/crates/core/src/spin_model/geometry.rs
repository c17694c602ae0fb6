// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};

use super::SpinSystem;

/// Effective nuclear fields (MHz) in the two electron manifolds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizationAxes {
    /// Field with the electron in m_s = +1/2.
    pub up: [f64; 3],
    /// Field with the electron in m_s = −1/2.
    pub down: [f64; 3],
    /// Angle between `up` and `down`, radians in [0, π].
    pub angle_rad: f64,
}

/// `h(m_s) = (m_s A_zx, m_s A_zy, −ν_n + m_s A_zz)` for nucleus `k` (0-based).
pub fn quantization_axes(sys: &SpinSystem, k: usize) -> Result<QuantizationAxes> {
    let nuc = sys
        .nuclei()
        .get(k)
        .ok_or_else(|| Error::InvalidSystem(format!("no nucleus with index {k}")))?;
    let field = |m: f64| [m * nuc.a_zx_mhz, m * nuc.a_zy_mhz, -nuc.zeeman_freq_mhz + m * nuc.a_zz_mhz];
    let up = field(0.5);
    let down = field(-0.5);
    let dot: f64 = up.iter().zip(&down).map(|(a, b)| a * b).sum();
    let norm = |v: &[f64; 3]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let denom = norm(&up) * norm(&down);
    let angle_rad = if denom == 0.0 { 0.0 } else { (dot / denom).clamp(-1.0, 1.0).acos() };
    Ok(QuantizationAxes { up, down, angle_rad })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_model::NucleusSpec;
    use std::f64::consts::PI;

    #[test]
    fn malonic_axes_are_tilted() {
        let axes = quantization_axes(&SpinSystem::malonic_acid(), 0).unwrap();
        // Oracle: atan2 of each in-plane field, difference of polar angles.
        let polar = |v: [f64; 3]| v[0].atan2(v[2]);
        let expected = (polar(axes.up) - polar(axes.down)).abs();
        let expected = if expected > PI { 2.0 * PI - expected } else { expected };
        assert!((axes.angle_rad - expected).abs() < 1e-12);
        assert!(axes.angle_rad > 0.0 && axes.angle_rad < PI);
        assert_eq!(axes.up, [7.1, 0.0, -18.1 - 21.35]);
    }

    #[test]
    fn isotropic_axes_are_collinear() {
        let sys = SpinSystem::new(100.0, vec![NucleusSpec::new(18.1, 0.0, 0.0, -42.7)]).unwrap();
        let axes = quantization_axes(&sys, 0).unwrap();
        // −18.1 + 21.35 > 0 and −18.1 − 21.35 < 0: antiparallel
        assert!((axes.angle_rad - PI).abs() < 1e-12);
        let sys = SpinSystem::new(100.0, vec![NucleusSpec::new(18.1, 0.0, 0.0, 10.0)]).unwrap();
        assert!(quantization_axes(&sys, 0).unwrap().angle_rad.abs() < 1e-12);
    }

    #[test]
    fn pure_transverse_hyperfine_gives_antiparallel_x() {
        let sys = SpinSystem::new(100.0, vec![NucleusSpec::new(0.0, 5.0, 0.0, 0.0)]).unwrap();
        let axes = quantization_axes(&sys, 0).unwrap();
        assert_eq!(axes.up, [2.5, 0.0, 0.0]);
        assert_eq!(axes.down, [-2.5, 0.0, 0.0]);
        assert!((axes.angle_rad - PI).abs() < 1e-12);
    }

    #[test]
    fn missing_nucleus() {
        assert!(quantization_axes(&SpinSystem::malonic_acid(), 1).is_err());
    }
}
