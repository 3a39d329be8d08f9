//! Explicit matrices for small registers, used by the verification oracles.
//!
//! Basis index `k` encodes qubit `q` in bit `q`, qubit 0 least significant.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{PauliString, PauliSum};
use crate::error::{Error, Result};

pub type DenseMatrix = DMatrix<Complex64>;

/// Memory guard for [`to_dense`]: a 2^14 square complex matrix is 4 GiB.
pub const MAX_DENSE_QUBITS: usize = 14;

pub(crate) fn check_dense(what: &'static str, n_qubits: usize, limit: usize) -> Result<()> {
    if n_qubits > limit {
        return Err(Error::Resource {
            what,
            n_qubits,
            limit,
        });
    }
    Ok(())
}

pub fn string_to_dense(p: &PauliString) -> Result<DenseMatrix> {
    check_dense("dense Pauli string", p.n_qubits(), MAX_DENSE_QUBITS)?;
    let dim = 1usize << p.n_qubits();
    let mut m = DenseMatrix::zeros(dim, dim);
    for k in 0..dim as u64 {
        let row = (k ^ p.x_mask()) as usize;
        m[(row, k as usize)] = p.column_phase(k).to_complex();
    }
    Ok(m)
}

pub fn to_dense(a: &PauliSum) -> Result<DenseMatrix> {
    check_dense("dense Pauli sum", a.n_qubits(), MAX_DENSE_QUBITS)?;
    let dim = 1usize << a.n_qubits();
    let mut m = DenseMatrix::zeros(dim, dim);
    for (c, p) in a.terms() {
        for k in 0..dim as u64 {
            let row = (k ^ p.x_mask()) as usize;
            m[(row, k as usize)] += c * p.column_phase(k).to_complex();
        }
    }
    Ok(m)
}

pub fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest elementwise deviation of `m` from its conjugate transpose.
pub fn hermiticity_defect(m: &DenseMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Largest elementwise deviation of `u u†` from the identity.
pub fn unitarity_defect(u: &DenseMatrix) -> f64 {
    let n = u.nrows();
    max_abs_diff(&(u * u.adjoint()), &DenseMatrix::identity(n, n))
}

/// `exp(-i * dt * h)` for Hermitian `h`, through its eigendecomposition.
pub fn hermitian_propagator(h: &DenseMatrix, dt: f64) -> Result<DenseMatrix> {
    if !h.is_square() {
        return Err(Error::Argument("propagator of a non-square matrix".into()));
    }
    let defect = hermiticity_defect(h);
    if defect > 1e-10 {
        return Err(Error::Validation(format!(
            "generator deviates from Hermitian by {defect:e}"
        )));
    }
    let eigen = h.clone().symmetric_eigen();
    let phases = DVector::from_iterator(
        eigen.eigenvalues.len(),
        eigen
            .eigenvalues
            .iter()
            .map(|&lambda| Complex64::from_polar(1.0, -lambda * dt)),
    );
    let v = &eigen.eigenvectors;
    Ok(v * DenseMatrix::from_diagonal(&phases) * v.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Axis;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_z_is_diag() {
        let z =
            PauliSum::from_real_terms(1, [(0.5, PauliString::from_label("Z").unwrap())]).unwrap();
        let m = to_dense(&z).unwrap();
        assert_eq!(m[(0, 0)], c(0.5, 0.0));
        assert_eq!(m[(1, 1)], c(-0.5, 0.0));
        assert_eq!(m[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn identity_sum() {
        let id = PauliSum::from_real_terms(2, [(1.0, PauliString::identity(2).unwrap())]).unwrap();
        assert_eq!(to_dense(&id).unwrap(), DenseMatrix::identity(4, 4));
    }

    #[test]
    fn sigma_z_definition() {
        let z = PauliString::single_site(1, 0, Axis::Z).unwrap();
        let m = string_to_dense(&z).unwrap();
        assert_eq!(
            m,
            DenseMatrix::from_diagonal(&DVector::from_vec(vec![c(1.0, 0.0), c(-1.0, 0.0)]))
        );
    }

    #[test]
    fn y_matrix_convention() {
        let y = string_to_dense(&PauliString::from_label("Y").unwrap()).unwrap();
        // Y = [[0, -i], [i, 0]]
        assert_eq!(y[(0, 1)], c(0.0, -1.0));
        assert_eq!(y[(1, 0)], c(0.0, 1.0));
    }

    #[test]
    fn guard_rejects_large_registers() {
        let big = PauliSum::zero(15).unwrap();
        assert!(matches!(to_dense(&big), Err(Error::Resource { .. })));
    }

    #[test]
    fn propagator_of_z() {
        let z = string_to_dense(&PauliString::from_label("Z").unwrap()).unwrap();
        let u = hermitian_propagator(&z, 0.3).unwrap();
        assert!((u[(0, 0)] - Complex64::from_polar(1.0, -0.3)).norm() < 1e-15);
        assert!((u[(1, 1)] - Complex64::from_polar(1.0, 0.3)).norm() < 1e-15);
        assert!(unitarity_defect(&u) < 1e-14);
    }
}
