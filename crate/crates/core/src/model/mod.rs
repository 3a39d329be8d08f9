//! The de Sitter lattice Hamiltonian for a free staggered fermion.
//!
//! Everything is in lattice units (spacing `a = 1`): `hubble`, `mass` and
//! times are the dimensionless products `h·a`, `m·a` and `t/a`. Staggered
//! site `x` is qubit `x`, and an occupied site is `|0>` (`σ^z = +1`).
//!
//! ```text
//! aH(t) = -1/2 Σ_{x=0}^{N-2} [X_x X_{x+1} + Y_x Y_{x+1}]
//!         - (-1)^{N/2}/2 · Z_1…Z_{N-2} · [X_0 X_{N-1} + Y_0 Y_{N-1}]
//!         + h/4 Σ_x Z_x
//!         + m e^{ht}/2 Σ_x (-1)^x Z_x
//! ```

mod fermion;
mod fixture;

pub use fermion::{jw_fermion_op, verify_bilinears, BilinearReport};
pub use fixture::{n8_fixture, N8Fixture, N8_H1_TEXT, N8_H2_TEXT, N8_H3_TEXT};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Axis, PauliString, PauliSum};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n_sites: usize,
    pub hubble: f64,
    pub mass: f64,
}

impl ModelParams {
    pub fn new(n_sites: usize, hubble: f64, mass: f64) -> Result<Self> {
        let params = ModelParams {
            n_sites,
            hubble,
            mass,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_sites(self.n_sites)?;
        for (name, value) in [("hubble", self.hubble), ("mass", self.mass)] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::Argument(format!(
                    "{name} must be finite and non-negative, got {value}"
                )));
            }
        }
        Ok(())
    }

    /// `g(t) = e^{h t}`.
    pub fn scale_factor(&self, t: f64) -> f64 {
        (self.hubble * t).exp()
    }

    /// Coefficient of `Z_x` in `aH(t)`.
    pub fn z_coefficient(&self, site: usize, t: f64) -> f64 {
        let stagger = if site.is_multiple_of(2) { 0.5 } else { -0.5 };
        0.25 * self.hubble + self.mass * self.scale_factor(t) * stagger
    }
}

pub(crate) fn check_sites(n_sites: usize) -> Result<()> {
    if n_sites < 4 || !n_sites.is_multiple_of(2) {
        return Err(Error::Argument(format!(
            "site count must be even and at least 4, got {n_sites}"
        )));
    }
    if n_sites > crate::pauli::MAX_QUBITS {
        return Err(Error::Argument(format!(
            "site count {n_sites} exceeds the mask width"
        )));
    }
    Ok(())
}

/// The hopping terms in evolution order: each bulk bond ascending with XX
/// before YY, then the two boundary strings.
pub fn hopping_terms(n_sites: usize) -> Result<Vec<(f64, PauliString)>> {
    check_sites(n_sites)?;
    let n = n_sites;
    let mut terms = Vec::with_capacity(2 * n);
    for x in 0..n - 1 {
        for axis in [Axis::X, Axis::Y] {
            terms.push((
                -0.5,
                PauliString::from_sites(n, &[(x, axis), (x + 1, axis)])?,
            ));
        }
    }
    let sign = if (n / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    for axis in [Axis::X, Axis::Y] {
        let mut factors = vec![(0, axis), (n - 1, axis)];
        factors.extend((1..n - 1).map(|j| (j, Axis::Z)));
        terms.push((-0.5 * sign, PauliString::from_sites(n, &factors)?));
    }
    Ok(terms)
}

pub fn build_hopping(n_sites: usize) -> Result<PauliSum> {
    PauliSum::from_real_terms(n_sites, hopping_terms(n_sites)?)
}

/// `(1/4) Σ_x Z_x`; the Hubble rate multiplies it at assembly.
pub fn build_charge_term(n_sites: usize) -> Result<PauliSum> {
    check_sites(n_sites)?;
    let terms = (0..n_sites)
        .map(|x| Ok((0.25, PauliString::single_site(n_sites, x, Axis::Z)?)))
        .collect::<Result<Vec<_>>>()?;
    PauliSum::from_real_terms(n_sites, terms)
}

/// `(1/2) Σ_x (-1)^x Z_x`; `m e^{ht}` multiplies it at assembly.
pub fn build_mass_term(n_sites: usize) -> Result<PauliSum> {
    check_sites(n_sites)?;
    let terms = (0..n_sites)
        .map(|x| {
            let c = if x % 2 == 0 { 0.5 } else { -0.5 };
            Ok((c, PauliString::single_site(n_sites, x, Axis::Z)?))
        })
        .collect::<Result<Vec<_>>>()?;
    PauliSum::from_real_terms(n_sites, terms)
}

/// `Σ_x Z_x` with unit coefficients, the conserved charge.
pub fn total_z(n_qubits: usize) -> Result<PauliSum> {
    let terms = (0..n_qubits)
        .map(|x| Ok((1.0, PauliString::single_site(n_qubits, x, Axis::Z)?)))
        .collect::<Result<Vec<_>>>()?;
    PauliSum::from_real_terms(n_qubits, terms)
}

/// The three time-independent operators `aH(t)` is assembled from.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianParts {
    pub hopping: PauliSum,
    pub charge: PauliSum,
    pub mass_term: PauliSum,
}

impl HamiltonianParts {
    pub fn build(n_sites: usize) -> Result<Self> {
        Ok(HamiltonianParts {
            hopping: build_hopping(n_sites)?,
            charge: build_charge_term(n_sites)?,
            mass_term: build_mass_term(n_sites)?,
        })
    }

    pub fn assemble(&self, params: &ModelParams, t: f64) -> Result<PauliSum> {
        check_time(t)?;
        self.hopping
            .add(&self.charge.scale(params.hubble))?
            .add(&self.mass_term.scale(params.mass * params.scale_factor(t)))
    }
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Argument(format!(
            "time must be finite and non-negative, got {t}"
        )));
    }
    Ok(())
}

/// `aH(t)`, with the identity offsets of the bilinear identities dropped.
pub fn hamiltonian_at(params: &ModelParams, t: f64) -> Result<PauliSum> {
    params.validate()?;
    HamiltonianParts::build(params.n_sites)?.assemble(params, t)
}
