//! Dense statevector storage and the in-place Pauli-rotation kernel.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{ensure_same_size, Error, Result};
use crate::pauli::dense::{unitarity_defect, DenseMatrix};
use crate::pauli::{PauliString, PauliSum, Phase};

/// Registers above this many qubits are refused (2^30 amplitudes = 16 GiB).
pub const MAX_STATE_QUBITS: usize = 30;

/// Norm drift beyond this is reported as a kernel fault, never renormalized.
pub const NORM_DRIFT_LIMIT: f64 = 1e-8;

/// Imaginary residue allowed on an expectation value of a Hermitian sum.
const EXPECTATION_IMAG_LIMIT: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|k>`, with qubit `q` set in `k` meaning qubit `q` is `|1>`.
    pub fn basis_state(n_qubits: usize, k: u64) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_STATE_QUBITS {
            return Err(Error::Argument(format!(
                "qubit count must be in 1..={MAX_STATE_QUBITS}, got {n_qubits}"
            )));
        }
        let dim = 1u64 << n_qubits;
        if k >= dim {
            return Err(Error::Argument(format!(
                "basis index {k} out of range for {n_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim as usize];
        amplitudes[k as usize] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    /// Takes amplitudes as given; the length must be a power of two and the
    /// norm within [`NORM_DRIFT_LIMIT`] of one.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Argument(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let state = StateVector {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
        };
        state.check_norm(NORM_DRIFT_LIMIT)?;
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn check_norm(&self, tolerance: f64) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > tolerance || !norm.is_finite() {
            return Err(Error::NormDrift { norm, tolerance });
        }
        Ok(())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `state <- exp(-i θ P) state = (cos θ - i sin θ P) state`.
    ///
    /// Amplitudes `k` and `k ^ x_mask` are updated as a pair; `P|k>` is
    /// `i^{|y|} (-1)^{|k & z|} |k ^ x>`.
    pub fn apply_pauli_rotation(&mut self, p: &PauliString, theta: f64) -> Result<()> {
        ensure_same_size(self.n_qubits, p.n_qubits())?;
        if p.phase() != Phase::ONE {
            return Err(Error::Argument(format!(
                "rotation generator {p} must carry phase +1"
            )));
        }
        if theta == 0.0 {
            return Ok(());
        }
        let (sin, cos) = theta.sin_cos();
        let x = p.x_mask() as usize;
        let z = p.z_mask() as usize;
        // -i sin θ · i^{|y|}
        let base =
            Complex64::new(0.0, -sin) * Phase::from_power(p.y_mask().count_ones()).to_complex();
        let amps = &mut self.amplitudes;

        if x == 0 {
            let plus = Complex64::new(cos, 0.0) + base;
            let minus = Complex64::new(cos, 0.0) - base;
            for (k, a) in amps.iter_mut().enumerate() {
                *a *= if (k & z).count_ones().is_multiple_of(2) {
                    plus
                } else {
                    minus
                };
            }
            return Ok(());
        }

        let pivot = x.trailing_zeros();
        let low = (1usize << pivot) - 1;
        for i in 0..amps.len() / 2 {
            // insert a zero at the pivot bit
            let j = ((i & !low) << 1) | (i & low);
            let k = j ^ x;
            let phase_j = if (j & z).count_ones().is_multiple_of(2) {
                base
            } else {
                -base
            };
            let phase_k = if (k & z).count_ones().is_multiple_of(2) {
                base
            } else {
                -base
            };
            let (a, b) = (amps[j], amps[k]);
            amps[j] = a * cos + phase_k * b;
            amps[k] = b * cos + phase_j * a;
        }
        Ok(())
    }

    /// `state <- u state` for a unitary `u` (defect of `u u†` at most 1e-10).
    pub fn apply_dense(&mut self, u: &DenseMatrix) -> Result<()> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::Argument(format!(
                "matrix is {}x{}, state has dimension {}",
                u.nrows(),
                u.ncols(),
                self.dim()
            )));
        }
        let defect = unitarity_defect(u);
        if defect > 1e-10 {
            return Err(Error::Validation(format!(
                "matrix is not unitary: |u u† - 1| = {defect:e}"
            )));
        }
        let v = DVector::from_column_slice(&self.amplitudes);
        let out = u * v;
        self.amplitudes.copy_from_slice(out.as_slice());
        Ok(())
    }

    /// `Σ_k |amp_k|² w(k)` for a weight diagonal in the computational basis.
    pub fn expectation_zdiag(&self, weights: impl Fn(u64) -> f64) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(k, a)| a.norm_sqr() * weights(k as u64))
            .sum()
    }

    /// `<ψ|A|ψ>` without materializing `A`, as a complex number.
    pub fn expectation_pauli_sum_complex(&self, a: &PauliSum) -> Result<Complex64> {
        ensure_same_size(self.n_qubits, a.n_qubits())?;
        let mut total = Complex64::new(0.0, 0.0);
        for (c, p) in a.terms() {
            let x = p.x_mask() as usize;
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, amp) in self.amplitudes.iter().enumerate() {
                if amp.norm_sqr() == 0.0 {
                    continue;
                }
                acc += self.amplitudes[k ^ x].conj() * p.column_phase(k as u64).to_complex() * amp;
            }
            total += c * acc;
        }
        Ok(total)
    }

    /// Real part of `<ψ|A|ψ>`; a residual imaginary part above 1e-10 means
    /// `A` was not Hermitian and is reported as an error.
    pub fn expectation_pauli_sum(&self, a: &PauliSum) -> Result<f64> {
        let value = self.expectation_pauli_sum_complex(a)?;
        if value.im.abs() > EXPECTATION_IMAG_LIMIT {
            return Err(Error::NonHermitian {
                label: "expectation value".into(),
                imag: value.im,
            });
        }
        Ok(value.re)
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        ensure_same_size(self.n_qubits, other.n_qubits)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }
}

/// `‖e^{iφ} a - b‖` with `φ` chosen so that `a` and `b` agree in phase on
/// the largest-magnitude amplitude of `b`.
pub fn phase_aligned_distance(a: &StateVector, b: &StateVector) -> Result<f64> {
    ensure_same_size(a.n_qubits, b.n_qubits)?;
    let pivot = b
        .amplitudes
        .iter()
        .enumerate()
        .max_by(|(_, x), (_, y)| x.norm_sqr().total_cmp(&y.norm_sqr()))
        .map(|(i, _)| i)
        .expect("non-empty state");
    let ratio = b.amplitudes[pivot] * a.amplitudes[pivot].conj();
    let align = if ratio.norm() > 0.0 {
        ratio / ratio.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| (x * align - y).norm_sqr())
        .sum::<f64>()
        .sqrt())
}
