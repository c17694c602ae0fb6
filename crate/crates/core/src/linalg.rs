// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrix helpers shared by the spin model and the propagators.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn dagger(a: &CMatrix) -> CMatrix {
    a.adjoint()
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Largest absolute entry.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

pub fn trace(a: &CMatrix) -> C64 {
    a.trace()
}

/// `Tr(a b)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// `max|H - H†|`.
pub fn hermiticity_error(h: &CMatrix) -> f64 {
    max_abs(&(h - h.adjoint()))
}

/// `max|U†U - 1|`.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    max_abs(&(u.adjoint() * u - identity(u.nrows())))
}

/// Eigendecomposition `H = V diag(λ) V†` of a Hermitian matrix with
/// eigenvalues in ascending order.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(h: &CMatrix) -> Self {
        let n = h.nrows();
        // Symmetrize so round-off asymmetry never leaks into the solver.
        let sym = (h + h.adjoint()).scale(0.5);
        let eig = sym.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = CMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
        Self { values, vectors }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `exp(-i H t)`.
    pub fn propagator(&self, t: f64) -> CMatrix {
        let phases = DVector::from_iterator(
            self.dim(),
            self.values.iter().map(|&l| (-I * l * t).exp()),
        );
        let scaled = CMatrix::from_fn(self.dim(), self.dim(), |r, col| {
            self.vectors[(r, col)] * phases[col]
        });
        scaled * self.vectors.adjoint()
    }

    /// Divided differences of `x -> exp(-i x t)` on the spectrum, i.e. the
    /// kernel that maps a perturbation `dH` (in the eigenbasis) onto the
    /// first-order change of `exp(-i H t)`.
    pub fn exp_derivative_kernel(&self, t: f64) -> CMatrix {
        let n = self.dim();
        CMatrix::from_fn(n, n, |j, k| {
            let (lj, lk) = (self.values[j], self.values[k]);
            let mean = 0.5 * (lj + lk);
            let half = 0.5 * t * (lj - lk);
            let sinc = if half.abs() < 1e-8 {
                1.0 - half * half / 6.0
            } else {
                half.sin() / half
            };
            -I * t * (-I * mean * t).exp() * sinc
        })
    }
}

/// Matrix exponential `exp(-i H t)` of a Hermitian generator.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    HermitianEigen::new(h).propagator(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
    }

    #[test]
    fn exp_of_pauli_is_rotation() {
        let theta = 0.7;
        let u = expm_hermitian(&pauli_x(), theta);
        assert!((u[(0, 0)] - c(theta.cos(), 0.0)).norm() < 1e-14);
        assert!((u[(0, 1)] - c(0.0, -theta.sin())).norm() < 1e-14);
        assert!(unitarity_error(&u) < 1e-14);
    }

    #[test]
    fn derivative_kernel_matches_finite_difference() {
        let h = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.0), c(0.3, 0.2), c(0.0, 0.0),
                c(0.3, -0.2), c(-0.5, 0.0), c(0.1, 0.0),
                c(0.0, 0.0), c(0.1, 0.0), c(0.5, 0.0),
            ],
        );
        let dh = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(0.2, 0.0), c(0.0, 1.0), c(0.4, 0.0),
                c(0.0, -1.0), c(0.0, 0.0), c(0.0, 0.0),
                c(0.4, 0.0), c(0.0, 0.0), c(-0.3, 0.0),
            ],
        );
        let t = 1.3;
        let eig = HermitianEigen::new(&h);
        let kernel = eig.exp_derivative_kernel(t);
        let v = &eig.vectors;
        let m = v.adjoint() * &dh * v;
        let analytic = v * m.component_mul(&kernel) * v.adjoint();
        let eps = 1e-6;
        let fd = (expm_hermitian(&(&h + dh.scale(eps)), t) - expm_hermitian(&(&h - dh.scale(eps)), t))
            .scale(0.5 / eps);
        assert!(max_abs(&(analytic - fd)) < 1e-8);
    }

    #[test]
    fn kernel_handles_degenerate_spectrum() {
        let h = identity(2);
        let k = HermitianEigen::new(&h).exp_derivative_kernel(2.0);
        let expected = -I * 2.0 * (-I * 2.0).exp();
        for z in k.iter() {
            assert!((z - expected).norm() < 1e-14);
        }
    }
}
