//! Fermion density, density correlation, polarization and chiral condensate.
//!
//! All four are diagonal in the computational basis, so a single Z-basis
//! shot record estimates every one of them. Occupation of site `x` is
//! `(1 + σ^z(x))/2`, i.e. bit `x` of the outcome is clear. Densities,
//! polarization and condensate carry the volume factor `e^{ht}`; the
//! correlation `C` does not.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{hamiltonian_at, ModelParams};
use crate::sampling::ShotCounts;
use crate::state::StateVector;

/// `|p(0)|` below this makes `p(t)/p(0)` meaningless.
pub const POLARIZATION_RATIO_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Exact,
    Shots,
}

/// Standard errors of the shot estimators, field-for-field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotErrors {
    pub density: Vec<f64>,
    pub n_total: f64,
    pub correlation_c: f64,
    pub polarization_over_e: f64,
    pub chiral_c: f64,
    pub total_sz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableRecord {
    pub t: f64,
    /// `n(x, t)`, including `e^{ht}`.
    pub density: Vec<f64>,
    pub n_total: f64,
    pub correlation_c: f64,
    pub polarization_over_e: f64,
    pub chiral_c: f64,
    /// `<aH(t)>`; only the exact path has it.
    pub energy: Option<f64>,
    pub total_sz: f64,
    pub norm: Option<f64>,
    pub shot_errors: Option<ShotErrors>,
    pub source: Source,
}

impl ObservableRecord {
    /// Occupation probabilities with the volume factor divided out.
    pub fn occupation(&self, hubble: f64) -> Vec<f64> {
        let scale = (hubble * self.t).exp();
        self.density.iter().map(|n| n / scale).collect()
    }
}

#[inline]
fn occupied(k: u64, x: usize) -> bool {
    (k >> x) & 1 == 0
}

/// Per-outcome values, laid out as `[n(0..N)/scale, C, p/scale, c/scale, Σσ^z]`.
fn outcome_values(k: u64, n: usize, out: &mut [f64]) {
    let mut polarization = 0.0;
    let mut chiral = 0.0;
    let mut occupied_count = 0usize;
    for (x, slot) in out[..n].iter_mut().enumerate() {
        let o = if occupied(k, x) { 1.0 } else { 0.0 };
        *slot = o;
        polarization += x as f64 * o;
        chiral += if x % 2 == 0 { o } else { -o };
        occupied_count += o as usize;
    }
    out[n] = if occupied(k, 0) && occupied(k, 1) {
        1.0
    } else {
        0.0
    };
    out[n + 1] = polarization;
    out[n + 2] = chiral;
    out[n + 3] = 2.0 * occupied_count as f64 - n as f64;
}

struct Estimate {
    mean: Vec<f64>,
    stderr: Option<Vec<f64>>,
}

fn estimate_exact(state: &StateVector) -> Estimate {
    let n = state.n_qubits();
    let mut mean = vec![0.0; n + 4];
    let mut values = vec![0.0; n + 4];
    for (k, p) in state.probabilities().into_iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        outcome_values(k as u64, n, &mut values);
        for (m, v) in mean.iter_mut().zip(&values) {
            *m += p * v;
        }
    }
    Estimate { mean, stderr: None }
}

fn estimate_shots(counts: &ShotCounts) -> Estimate {
    let n = counts.n_qubits;
    let shots = counts.shots as f64;
    let mut values = vec![0.0; n + 4];
    let mut mean = vec![0.0; n + 4];
    for (&k, &c) in &counts.counts {
        outcome_values(k, n, &mut values);
        for (m, v) in mean.iter_mut().zip(&values) {
            *m += c as f64 * v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= shots);
    let mut squares = vec![0.0; n + 4];
    for (&k, &c) in &counts.counts {
        outcome_values(k, n, &mut values);
        for ((s, v), m) in squares.iter_mut().zip(&values).zip(&mean) {
            *s += c as f64 * (v - m).powi(2);
        }
    }
    let stderr = squares
        .iter()
        .map(|s| {
            if counts.shots < 2 {
                0.0
            } else {
                (s / (shots - 1.0)).sqrt() / shots.sqrt()
            }
        })
        .collect();
    Estimate {
        mean,
        stderr: Some(stderr),
    }
}

fn assemble(estimate: Estimate, n: usize, t: f64, hubble: f64, source: Source) -> ObservableRecord {
    let scale = (hubble * t).exp();
    let m = &estimate.mean;
    let density: Vec<f64> = m[..n].iter().map(|v| scale * v).collect();
    let shot_errors = estimate.stderr.map(|e| {
        // n_total is (N + Σσ^z)/2 per shot
        ShotErrors {
            density: e[..n].iter().map(|v| scale * v).collect(),
            n_total: scale * e[n + 3] / 2.0,
            correlation_c: e[n],
            polarization_over_e: scale * e[n + 1],
            chiral_c: scale * e[n + 2],
            total_sz: e[n + 3],
        }
    });
    ObservableRecord {
        t,
        n_total: density.iter().sum(),
        density,
        correlation_c: m[n],
        polarization_over_e: scale * m[n + 1],
        chiral_c: scale * m[n + 2],
        energy: None,
        total_sz: m[n + 3],
        norm: None,
        shot_errors,
        source,
    }
}

/// `n(x, t) = e^{ht} <(1 + σ^z(x))/2>` for every site.
pub fn fermion_density(state: &StateVector, t: f64, hubble: f64) -> Vec<f64> {
    let scale = (hubble * t).exp();
    (0..state.n_qubits())
        .map(|x| scale * state.expectation_zdiag(|k| if occupied(k, x) { 1.0 } else { 0.0 }))
        .collect()
}

/// `<(1 + Z_0 Z_1 + Z_0 + Z_1)/4>`, the joint occupation of sites 0 and 1.
pub fn density_correlation(state: &StateVector) -> Result<f64> {
    if state.n_qubits() < 2 {
        return Err(Error::Argument(
            "correlation needs at least two sites".into(),
        ));
    }
    Ok(state.expectation_zdiag(|k| {
        if occupied(k, 0) && occupied(k, 1) {
            1.0
        } else {
            0.0
        }
    }))
}

/// `p/e = e^{ht} Σ_x x <(1 + σ^z(x))/2>`.
pub fn polarization(state: &StateVector, t: f64, hubble: f64) -> f64 {
    let n = state.n_qubits();
    let weight = |k: u64| (0..n).filter(|&x| occupied(k, x)).map(|x| x as f64).sum();
    (hubble * t).exp() * state.expectation_zdiag(weight)
}

/// `c = e^{ht} Σ_x (-1)^x <(1 + σ^z(x))/2>`.
pub fn chiral_condensate(state: &StateVector, t: f64, hubble: f64) -> f64 {
    let n = state.n_qubits();
    let weight = |k: u64| {
        (0..n)
            .filter(|&x| occupied(k, x))
            .map(|x| if x % 2 == 0 { 1.0 } else { -1.0 })
            .sum()
    };
    (hubble * t).exp() * state.expectation_zdiag(weight)
}

/// `<Σ_x σ^z(x)>`.
pub fn total_charge(state: &StateVector) -> f64 {
    let n = state.n_qubits() as i64;
    state.expectation_zdiag(|k| (n - 2 * k.count_ones() as i64) as f64)
}

/// Every observable from the exact amplitudes, including `<aH(t)>`.
pub fn observe_exact(
    state: &StateVector,
    params: &ModelParams,
    t: f64,
) -> Result<ObservableRecord> {
    if state.n_qubits() != params.n_sites {
        return Err(Error::QubitMismatch {
            left: state.n_qubits(),
            right: params.n_sites,
        });
    }
    let mut record = assemble(
        estimate_exact(state),
        params.n_sites,
        t,
        params.hubble,
        Source::Exact,
    );
    record.energy = Some(state.expectation_pauli_sum(&hamiltonian_at(params, t)?)?);
    record.norm = Some(state.norm());
    Ok(record)
}

/// Shot-frequency estimators with standard errors `s / √shots`, `s` the
/// sample standard deviation of the per-shot value.
pub fn estimators_from_counts(
    counts: &ShotCounts,
    t: f64,
    hubble: f64,
) -> Result<ObservableRecord> {
    if counts.shots == 0 || counts.counts.is_empty() {
        return Err(Error::Argument("empty shot record".into()));
    }
    if counts.n_qubits < 2 {
        return Err(Error::Argument(
            "observables need at least two sites".into(),
        ));
    }
    Ok(assemble(
        estimate_shots(counts),
        counts.n_qubits,
        t,
        hubble,
        Source::Shots,
    ))
}

/// `p(t)/p(0)` when `|p(0)|` is large enough to divide by.
pub fn polarization_ratio(p: f64, p0: f64) -> Option<f64> {
    (p0.abs() > POLARIZATION_RATIO_FLOOR).then(|| p / p0)
}

/// Circular variance `1 - |Σ_x q(x) e^{2πix/N}|` of the hole distribution
/// `q(x) ∝ 1 - n(x)/e^{ht}` on the periodic lattice, `q` normalized to unit
/// sum: 0 for a single hole, 1 for holes spread uniformly. `None` when the
/// lattice is (numerically) filled.
///
/// A diagnostic for the spreading of an initial hole, not one of the
/// physical observables.
pub fn hole_circular_variance(occupation: &[f64]) -> Option<f64> {
    let n = occupation.len();
    let total: f64 = occupation.iter().map(|o| 1.0 - o).sum();
    if total.abs() < 1e-12 {
        return None;
    }
    let (mut re, mut im) = (0.0, 0.0);
    for (x, o) in occupation.iter().enumerate() {
        let angle = std::f64::consts::TAU * x as f64 / n as f64;
        re += (1.0 - o) / total * angle.cos();
        im += (1.0 - o) / total * angle.sin();
    }
    Some(1.0 - re.hypot(im))
}
