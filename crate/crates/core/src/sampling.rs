//! Seeded computational-basis shot sampling.
//!
//! Shots come from a ChaCha20 stream (`rand_chacha::ChaCha20Rng`) keyed by
//! `seed_from_u64(seed)`: a counter-based generator with the published
//! ChaCha constants, so a given `(state, shots, seed)` always yields the same
//! counts on every platform. Each shot draws one `f64` uniform in `[0, 1)`
//! and inverts the cumulative distribution in ascending basis-index order.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::StateVector;

pub const GENERATOR_NAME: &str = "ChaCha20 (rand_chacha 0.9, seed_from_u64)";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotCounts {
    pub n_qubits: usize,
    pub shots: u64,
    pub seed: u64,
    /// Outcome bitstring (qubit `q` in bit `q`) to number of occurrences.
    pub counts: BTreeMap<u64, u64>,
}

impl ShotCounts {
    pub fn new(n_qubits: usize, seed: u64, counts: BTreeMap<u64, u64>) -> Result<Self> {
        let shots = counts.values().sum();
        if shots == 0 {
            return Err(Error::Argument("shot record is empty".into()));
        }
        if let Some(&k) = counts
            .keys()
            .find(|&&k| n_qubits < 64 && k >> n_qubits != 0)
        {
            return Err(Error::Argument(format!(
                "outcome {k} exceeds {n_qubits} qubits"
            )));
        }
        Ok(ShotCounts {
            n_qubits,
            shots,
            seed,
            counts,
        })
    }

    pub fn frequency(&self, outcome: u64) -> f64 {
        self.counts.get(&outcome).copied().unwrap_or(0) as f64 / self.shots as f64
    }
}

pub fn sample_z_basis(state: &StateVector, shots: u64, seed: u64) -> Result<ShotCounts> {
    if shots == 0 {
        return Err(Error::Argument("shot count must be at least 1".into()));
    }
    let mut cumulative = Vec::with_capacity(state.dim());
    let mut running = 0.0;
    let mut last_nonzero = 0usize;
    for (k, p) in state.probabilities().into_iter().enumerate() {
        running += p;
        if p > 0.0 {
            last_nonzero = k;
        }
        cumulative.push(running);
    }
    let total = running;

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        let u: f64 = rng.random::<f64>() * total;
        let k = cumulative.partition_point(|&c| c <= u).min(last_nonzero);
        *counts.entry(k as u64).or_insert(0u64) += 1;
    }
    Ok(ShotCounts {
        n_qubits: state.n_qubits(),
        shots,
        seed,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn delta_distribution() {
        let s = StateVector::basis_state(8, 1).unwrap();
        let c = sample_z_basis(&s, 500, 9).unwrap();
        assert_eq!(c.counts.len(), 1);
        assert_eq!(c.counts[&1], 500);
        assert_eq!(c.shots, 500);
    }

    #[test]
    fn deterministic_per_seed() {
        let amp = Complex64::new(0.5, 0.0);
        let s = StateVector::from_amplitudes(vec![amp; 4]).unwrap();
        let a = sample_z_basis(&s, 1000, 42).unwrap();
        let b = sample_z_basis(&s, 1000, 42).unwrap();
        let c = sample_z_basis(&s, 1000, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.counts, c.counts);
    }

    #[test]
    fn counts_sum_to_shots() {
        let amp = Complex64::new(0.5, 0.0);
        let s = StateVector::from_amplitudes(vec![amp; 4]).unwrap();
        let c = sample_z_basis(&s, 777, 1).unwrap();
        assert_eq!(c.counts.values().sum::<u64>(), 777);
    }

    #[test]
    fn zero_shots_rejected() {
        let s = StateVector::basis_state(2, 0).unwrap();
        assert!(sample_z_basis(&s, 0, 0).is_err());
        assert!(ShotCounts::new(2, 0, BTreeMap::new()).is_err());
    }

    #[test]
    fn zero_probability_outcomes_never_drawn() {
        let h = Complex64::new(0.5f64.sqrt(), 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let s = StateVector::from_amplitudes(vec![zero, h, zero, h]).unwrap();
        let c = sample_z_basis(&s, 10_000, 3).unwrap();
        assert!(c.counts.keys().all(|k| *k == 1 || *k == 3));
    }
}
