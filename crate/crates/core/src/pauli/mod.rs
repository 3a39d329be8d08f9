//! Pauli strings on up to 64 qubits, their weighted sums, and dense
//! realizations for small registers.

pub mod dense;
mod string;
mod sum;

pub use dense::{to_dense, DenseMatrix};
pub use string::{Axis, PauliString, Phase, MAX_QUBITS};
pub use sum::{PauliSum, HERMITIAN_TOLERANCE};

/// Free-function form of [`PauliString::single_site`].
pub fn single_site(n_qubits: usize, site: usize, axis: Axis) -> crate::Result<PauliString> {
    PauliString::single_site(n_qubits, site, axis)
}

pub fn multiply(p: &PauliString, q: &PauliString) -> crate::Result<PauliString> {
    p.multiply(q)
}

pub fn commutes(p: &PauliString, q: &PauliString) -> crate::Result<bool> {
    p.commutes(q)
}

pub fn commutator(a: &PauliSum, b: &PauliSum) -> crate::Result<PauliSum> {
    a.commutator(b)
}
