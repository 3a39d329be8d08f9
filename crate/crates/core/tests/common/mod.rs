#![allow(dead_code)]

//! Oracles built from explicit Kronecker products, independent of the
//! bit-mask kernels under test.

use desitter_core::pauli::{Axis, DenseMatrix, PauliString};
use desitter_core::StateVector;
use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_2x2(axis: Option<Axis>) -> DenseMatrix {
    let (a, b, cc, d) = match axis {
        None => (c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)),
        Some(Axis::X) => (c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)),
        Some(Axis::Y) => (c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)),
        Some(Axis::Z) => (c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)),
    };
    DenseMatrix::from_row_slice(2, 2, &[a, b, cc, d])
}

/// Kronecker realization of a label; qubit 0 is the least significant factor.
pub fn kron_label(label: &str) -> DenseMatrix {
    let mut m = DenseMatrix::identity(1, 1);
    for ch in label.chars().rev() {
        let axis = match ch {
            'I' => None,
            'X' => Some(Axis::X),
            'Y' => Some(Axis::Y),
            'Z' => Some(Axis::Z),
            _ => panic!("bad label"),
        };
        m = m.kronecker(&pauli_2x2(axis));
    }
    m
}

/// Includes the string's phase.
pub fn kron_string(p: &PauliString) -> DenseMatrix {
    kron_label(&p.label()) * p.phase().to_complex()
}

pub fn kron_sum(terms: &[(Complex64, PauliString)]) -> DenseMatrix {
    let n = terms[0].1.n_qubits();
    let mut m = DenseMatrix::zeros(1 << n, 1 << n);
    for (coef, p) in terms {
        m += kron_string(p) * *coef;
    }
    m
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_label(rng: &mut impl Rng, n: usize) -> String {
    (0..n)
        .map(|_| ['I', 'X', 'Y', 'Z'][rng.random_range(0..4)])
        .collect()
}

pub fn random_string(rng: &mut impl Rng, n: usize) -> PauliString {
    PauliString::from_label(&random_label(rng, n)).unwrap()
}

pub fn random_state(rng: &mut impl Rng, n: usize) -> StateVector {
    let mut amps: Vec<Complex64> = (0..1 << n)
        .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    StateVector::from_amplitudes(amps).unwrap()
}

pub fn to_dvector(s: &StateVector) -> DVector<Complex64> {
    DVector::from_column_slice(s.amplitudes())
}

pub fn max_abs(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

pub fn vec_dist(a: &DVector<Complex64>, b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `exp(-i θ P)` by nalgebra's Padé matrix exponential.
pub fn expm_rotation(p: &DenseMatrix, theta: f64) -> DenseMatrix {
    (p * c(0.0, -theta)).exp()
}
