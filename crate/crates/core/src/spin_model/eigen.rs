// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::TAU;

use crate::linalg::{c, CMatrix, HermitianEigen, C64};

use super::operators::{embed, half_paulis};
use super::{build_operators, SpinSystem};

/// Two levels (or transitions) closer than this are treated as degenerate.
pub const DEFAULT_DEGENERACY_TOL_MHZ: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Manifold {
    /// m_s = +1/2
    Up,
    /// m_s = −1/2
    Down,
}

impl Manifold {
    pub fn m_s(self) -> f64 {
        match self {
            Manifold::Up => 0.5,
            Manifold::Down => -0.5,
        }
    }
}

/// Eigenstates of a spin Hamiltonian relabeled by electron manifold.
///
/// Level `ℓ` (1-based) is column `ℓ-1` of `states`. The m_s = −1/2 manifold
/// takes levels `1..=dim/2` and m_s = +1/2 takes the rest. Inside a manifold
/// levels are ordered by the nuclear logical index `j_1 j_2 … j_N`, where
/// `j_k = 1` is the upper eigenstate of nucleus k's effective field; for one
/// nucleus this is plain energy order.
#[derive(Debug, Clone)]
pub struct EigenStructure {
    /// Level energies E/h in MHz, in label order.
    pub energies_mhz: Vec<f64>,
    /// Eigenvectors as columns, in label order; the largest component of
    /// each column is real and positive.
    pub states: CMatrix,
    /// `labels[i]` is the level number of the i-th lowest eigenvalue.
    pub labels: Vec<usize>,
    pub manifold: Vec<Manifold>,
    /// Set when two energies differ by less than the degeneracy tolerance,
    /// in which case the labeling is not unique.
    pub ambiguous: bool,
}

impl EigenStructure {
    pub fn dim(&self) -> usize {
        self.energies_mhz.len()
    }

    /// Transition frequency |E_k − E_j|/h between 1-based levels, in MHz.
    pub fn transition_mhz(&self, j: usize, k: usize) -> f64 {
        (self.energies_mhz[k - 1] - self.energies_mhz[j - 1]).abs()
    }

    /// Express a lab-basis operator in the labeled eigenbasis, `V† A V`.
    pub fn to_eigenbasis(&self, a: &CMatrix) -> CMatrix {
        self.states.adjoint() * a * &self.states
    }

    /// Express a labeled-eigenbasis operator in the lab basis, `V A V†`.
    pub fn from_eigenbasis(&self, a: &CMatrix) -> CMatrix {
        &self.states * a * self.states.adjoint()
    }
}

/// One row of the transition table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub j: usize,
    pub k: usize,
    pub freq_mhz: f64,
    /// |⟨k|S_x|j⟩|
    pub sx_element: f64,
}

fn fix_gauge(v: &mut CMatrix, col: usize) {
    let mut best = 0;
    let mut best_norm = -1.0;
    for r in 0..v.nrows() {
        let n = v[(r, col)].norm();
        // Earlier index wins near-ties so the gauge is reproducible.
        if n > best_norm + 1e-12 {
            best = r;
            best_norm = n;
        }
    }
    let phase = v[(best, col)] / best_norm;
    let rot = phase.conj();
    for r in 0..v.nrows() {
        v[(r, col)] *= rot;
    }
}

fn expectation(op: &CMatrix, v: &CMatrix, col: usize) -> f64 {
    let psi = v.column(col);
    (psi.adjoint() * op * psi)[(0, 0)].re
}

/// Diagonalize `h` (rad/μs) and label its levels using the electron
/// manifold structure of `sys`.
pub fn eigensystem(h: &CMatrix, sys: &SpinSystem) -> EigenStructure {
    let dim = sys.dim();
    assert_eq!(h.nrows(), dim, "Hamiltonian dimension does not match the spin system");
    let eig = HermitianEigen::new(h);
    let energies: Vec<f64> = eig.values.iter().map(|e| e / TAU).collect();
    let ambiguous = energies.windows(2).any(|w| w[1] - w[0] < DEFAULT_DEGENERACY_TOL_MHZ);

    let n_spins = sys.n_nuclei() + 1;
    let up_proj = embed(&CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), C64::from(0.0), C64::from(0.0), C64::from(0.0)]), 0, n_spins);
    let up_weight: Vec<f64> = (0..dim).map(|i| expectation(&up_proj, &eig.vectors, i)).collect();

    // Lowest up-weight half goes to the m_s = −1/2 manifold.
    let mut by_weight: Vec<usize> = (0..dim).collect();
    by_weight.sort_by(|&a, &b| up_weight[a].total_cmp(&up_weight[b]).then(a.cmp(&b)));
    let mut manifold_of = vec![Manifold::Up; dim];
    for &i in &by_weight[..dim / 2] {
        manifold_of[i] = Manifold::Down;
    }

    let logical: Vec<usize> = (0..dim)
        .map(|i| nuclear_logical_index(sys, manifold_of[i], &eig.vectors, i))
        .collect();

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by_key(|&i| (manifold_of[i] == Manifold::Up, logical[i], i));

    let mut states = CMatrix::zeros(dim, dim);
    let mut labels = vec![0; dim];
    for (label_idx, &i) in order.iter().enumerate() {
        states.set_column(label_idx, &eig.vectors.column(i));
        fix_gauge(&mut states, label_idx);
        labels[i] = label_idx + 1;
    }
    EigenStructure {
        energies_mhz: order.iter().map(|&i| energies[i]).collect(),
        states,
        labels,
        manifold: order.iter().map(|&i| manifold_of[i]).collect(),
        ambiguous,
    }
}

/// Bits `j_k` packed with nucleus 1 most significant.
fn nuclear_logical_index(sys: &SpinSystem, manifold: Manifold, vectors: &CMatrix, col: usize) -> usize {
    let n_spins = sys.n_nuclei() + 1;
    let paulis = half_paulis();
    let mut index = 0;
    for (k, nuc) in sys.nuclei().iter().enumerate() {
        let m = manifold.m_s();
        let local = paulis[0].scale(m * nuc.a_zx_mhz)
            + paulis[1].scale(m * nuc.a_zy_mhz)
            + paulis[2].scale(m * nuc.a_zz_mhz - nuc.zeeman_freq_mhz);
        let upper = HermitianEigen::new(&local).vectors.column(1).into_owned();
        let proj = &upper * upper.adjoint();
        let weight = expectation(&embed(&proj, k + 1, n_spins), vectors, col);
        index = (index << 1) | usize::from(weight > 0.5);
    }
    index
}

/// All `j < k` level pairs with their frequency and |⟨k|S_x|j⟩|.
pub fn transition_table(eigs: &EigenStructure) -> Vec<Transition> {
    let dim = eigs.dim();
    let n_nuclei = dim.trailing_zeros() as usize - 1;
    let sx = eigs.to_eigenbasis(&build_operators(n_nuclei).expect("dimension already validated").s[0]);
    let mut out = Vec::with_capacity(dim * (dim - 1) / 2);
    for j in 1..=dim {
        for k in j + 1..=dim {
            out.push(Transition {
                j,
                k,
                freq_mhz: eigs.transition_mhz(j, k),
                sx_element: sx[(k - 1, j - 1)].norm(),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, unitarity_error};
    use crate::spin_model::{build_secular_hamiltonian, NucleusSpec};

    fn malonic() -> (SpinSystem, EigenStructure) {
        let sys = SpinSystem::malonic_acid();
        let eigs = eigensystem(&build_secular_hamiltonian(&sys), &sys);
        (sys, eigs)
    }

    fn splitting(nu_n: f64, a_zx: f64, a_zy: f64, a_zz: f64, m_s: f64) -> f64 {
        ((nu_n - m_s * a_zz).powi(2) + m_s * m_s * (a_zx * a_zx + a_zy * a_zy)).sqrt()
    }

    #[test]
    fn malonic_nuclear_splittings() {
        let (_, eigs) = malonic();
        let w12 = eigs.transition_mhz(1, 2);
        let w34 = eigs.transition_mhz(3, 4);
        assert!((w12 - 7.81).abs() < 0.05, "ω12 = {w12}");
        assert!((w34 - 40.08).abs() < 0.05, "ω34 = {w34}");
        // closed form for each manifold
        assert!((w12 - splitting(18.1, 14.2, 0.0, -42.7, -0.5)).abs() < 1e-9 * w12);
        assert!((w34 - splitting(18.1, 14.2, 0.0, -42.7, 0.5)).abs() < 1e-9 * w34);
        assert_eq!(eigs.manifold, vec![Manifold::Down, Manifold::Down, Manifold::Up, Manifold::Up]);
        assert!(!eigs.ambiguous);
    }

    #[test]
    fn eigenvectors_unitary_and_reconstruct() {
        let (sys, eigs) = malonic();
        assert!(unitarity_error(&eigs.states) < 1e-10);
        let h = build_secular_hamiltonian(&sys);
        let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            4,
            eigs.energies_mhz.iter().map(|e| C64::from(e * TAU)),
        ));
        let rebuilt = eigs.from_eigenbasis(&diag);
        assert!(max_abs(&(rebuilt - &h)) <= 1e-9 * max_abs(&h));
    }

    #[test]
    fn manifold_projector_weights() {
        let (sys, eigs) = malonic();
        let up = embed(&CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]), 0, 2);
        for l in 0..sys.dim() {
            let w = expectation(&up, &eigs.states, l);
            let w = if eigs.manifold[l] == Manifold::Up { w } else { 1.0 - w };
            assert!(w >= 0.5);
        }
    }

    #[test]
    fn mixing_angle_in_down_manifold() {
        // Oracle: 2×2 nuclear Hamiltonian for m_s = −1/2 is
        // −(ν_n + A_zz/2) I_z − (A_zx/2) I_x, so tan θ = (A_zx/2)/(ν_n + A_zz/2)
        // with θ the tilt of the quantization axis from z.
        let (_, eigs) = malonic();
        let (nu, azx, azz) = (18.1_f64, 14.2_f64, -42.7_f64);
        let theta = (azx / 2.0).atan2(nu + azz / 2.0);
        // Level 1 nuclear part: amplitudes on |↓↑⟩ (index 2) and |↓↓⟩ (index 3).
        let a_up = eigs.states[(2, 0)].norm();
        let a_dn = eigs.states[(3, 0)].norm();
        let half = theta / 2.0;
        let expected = [half.cos().abs(), half.sin().abs()];
        let mut got = [a_up, a_dn];
        got.sort_by(f64::total_cmp);
        let mut want = expected;
        want.sort_by(f64::total_cmp);
        assert!((got[0] - want[0]).abs() < 1e-9 && (got[1] - want[1]).abs() < 1e-9);
        assert!(eigs.states[(0, 0)].norm() < 1e-12 && eigs.states[(1, 0)].norm() < 1e-12);
    }

    #[test]
    fn isotropic_eigenvectors_are_product_states() {
        let sys = SpinSystem::new(11_885.0, vec![NucleusSpec::new(18.1, 0.0, 0.0, -42.7)]).unwrap();
        let eigs = eigensystem(&build_secular_hamiltonian(&sys), &sys);
        for col in 0..4 {
            let big = eigs.states.column(col).iter().filter(|z| z.norm() > 1e-12).count();
            assert_eq!(big, 1);
        }
    }

    #[test]
    fn transition_table_selection_rules() {
        let (_, eigs) = malonic();
        let table = transition_table(&eigs);
        assert_eq!(table.len(), 6);
        for t in &table {
            let electron = (t.j <= 2) != (t.k <= 2);
            if electron {
                assert!(t.sx_element > 1e-3, "{t:?}");
            } else {
                assert!(t.sx_element < 1e-12, "{t:?}");
            }
        }
        let w = |j, k| eigs.transition_mhz(j, k);
        assert!(((w(1, 4) - w(2, 3)) - (w(1, 2) + w(3, 4))).abs() < 1e-6);
    }

    #[test]
    fn isotropic_has_two_electron_transitions() {
        let sys = SpinSystem::new(11_885.0, vec![NucleusSpec::new(18.1, 0.0, 0.0, -42.7)]).unwrap();
        let eigs = eigensystem(&build_secular_hamiltonian(&sys), &sys);
        let nonzero = transition_table(&eigs).iter().filter(|t| t.sx_element > 1e-12).count();
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn two_nucleus_labels_follow_product_bits() {
        let sys = SpinSystem::new(
            9_000.0,
            vec![NucleusSpec::new(14.0, 6.0, 0.0, -20.0), NucleusSpec::new(3.5, 2.0, 1.0, 9.0)],
        )
        .unwrap();
        let eigs = eigensystem(&build_secular_hamiltonian(&sys), &sys);
        let mut seen = eigs.labels.clone();
        seen.sort();
        assert_eq!(seen, (1..=8).collect::<Vec<_>>());
        // Energy of |j1 j2⟩ is additive in the per-nucleus splittings.
        for m in 0..2 {
            let e = |idx: usize| eigs.energies_mhz[m * 4 + idx];
            assert!(((e(3) - e(2)) - (e(1) - e(0))).abs() < 1e-6);
            assert!(((e(3) - e(1)) - (e(2) - e(0))).abs() < 1e-6);
            assert!(e(2) > e(0) && e(1) > e(0));
        }
    }

    #[test]
    fn degenerate_spectrum_is_flagged() {
        let sys = SpinSystem::new(100.0, vec![NucleusSpec::new(0.0, 0.0, 0.0, 0.0)]).unwrap();
        let eigs = eigensystem(&build_secular_hamiltonian(&sys), &sys);
        assert!(eigs.ambiguous);
    }
}
