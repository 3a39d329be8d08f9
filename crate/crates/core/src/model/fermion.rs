//! Jordan-Wigner fermion operators and a dense check of the bilinear
//! identities that turn the Dirac Hamiltonian into Pauli strings.
//!
//! The fermion side is assembled by Kronecker products of 2×2 factors, column
//! by column, without touching the Pauli-mask code, so it is an independent
//! route to the same matrices.

use num_complex::Complex64;

use super::{build_charge_term, build_hopping, build_mass_term, check_sites};
use crate::error::Result;
use crate::pauli::dense::{check_dense, max_abs_diff, to_dense, DenseMatrix};
use crate::pauli::{PauliString, PauliSum};

const MAX_FERMION_QUBITS: usize = 12;
const MAX_BILINEAR_SITES: usize = 10;

type Factor = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

const IDENTITY: Factor = [[ONE, ZERO], [ZERO, ONE]];
// |1><0|
const LOWER: Factor = [[ZERO, ZERO], [ONE, ZERO]];
// -i σ^z
const MINUS_I_Z: Factor = [[Complex64::new(0.0, -1.0), ZERO], [ZERO, I]];

/// A matrix with at most one nonzero per column: `cols[k] = Some((row, v))`.
///
/// Kronecker products of such 2×2 factors, their adjoints and products all
/// stay in this form, which keeps N = 10 affordable.
#[derive(Clone, Debug)]
struct MonomialOp {
    cols: Vec<Option<(usize, Complex64)>>,
}

impl MonomialOp {
    fn kronecker(factors: &[Factor]) -> Self {
        let dim = 1usize << factors.len();
        let cols = (0..dim)
            .map(|k| {
                let mut row = 0usize;
                let mut value = ONE;
                for (q, f) in factors.iter().enumerate() {
                    let b = (k >> q) & 1;
                    let hit = (0..2).find(|&r| f[r][b] != ZERO)?;
                    row |= hit << q;
                    value *= f[hit][b];
                }
                Some((row, value))
            })
            .collect();
        MonomialOp { cols }
    }

    fn adjoint(&self) -> Self {
        let mut cols = vec![None; self.cols.len()];
        for (k, entry) in self.cols.iter().enumerate() {
            if let Some((row, v)) = *entry {
                cols[row] = Some((k, v.conj()));
            }
        }
        MonomialOp { cols }
    }

    /// `self * rhs`
    fn then_after(&self, rhs: &MonomialOp) -> MonomialOp {
        let cols = rhs
            .cols
            .iter()
            .map(|entry| {
                let (mid, v) = (*entry)?;
                let (row, w) = self.cols[mid]?;
                Some((row, w * v))
            })
            .collect();
        MonomialOp { cols }
    }

    fn accumulate(&self, into: &mut DenseMatrix, weight: Complex64) {
        for (k, entry) in self.cols.iter().enumerate() {
            if let Some((row, v)) = *entry {
                into[(row, k)] += weight * v;
            }
        }
    }

    fn to_dense(&self) -> DenseMatrix {
        let dim = self.cols.len();
        let mut m = DenseMatrix::zeros(dim, dim);
        self.accumulate(&mut m, ONE);
        m
    }
}

fn chi(n_sites: usize, x: usize) -> MonomialOp {
    let factors: Vec<Factor> = (0..n_sites)
        .map(|q| match q.cmp(&x) {
            std::cmp::Ordering::Less => MINUS_I_Z,
            std::cmp::Ordering::Equal => LOWER,
            std::cmp::Ordering::Greater => IDENTITY,
        })
        .collect();
    MonomialOp::kronecker(&factors)
}

/// Dense `χ(x) = ((σ^x - iσ^y)/2)(x) · Π_{j<x} (-iσ^z(j))`.
pub fn jw_fermion_op(n_sites: usize, x: usize) -> Result<DenseMatrix> {
    check_dense("Jordan-Wigner operator", n_sites, MAX_FERMION_QUBITS)?;
    if n_sites == 0 || x >= n_sites {
        return Err(crate::Error::Argument(format!(
            "site {x} out of range for {n_sites} sites"
        )));
    }
    Ok(chi(n_sites, x).to_dense())
}

/// Max elementwise deviation between the fermionic and Pauli forms of each
/// bilinear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilinearReport {
    pub n_sites: usize,
    /// `Σ_X ψ̄ iγ1 ∂_X ψ` against the hopping strings.
    pub kinetic: f64,
    /// `Σ_X ψ̄ γ0 ψ` against `Σ_x (1 + σ^z)/2`.
    pub charge: f64,
    /// `Σ_X ψ̄ ψ` against `Σ_x (-1)^x (1 + σ^z)/2`.
    pub scalar: f64,
}

impl BilinearReport {
    pub fn max_deviation(&self) -> f64 {
        self.kinetic.max(self.charge).max(self.scalar)
    }
}

fn mat2_mul(a: &Factor, b: &Factor) -> Factor {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Builds both sides of the three bilinear identities for `n_sites` staggered
/// sites (lattice spacing 1) and compares them as dense matrices.
///
/// Dirac sites are the even `X`; `ψ(X) = (χ(X), χ(X+1))`. The upper component
/// takes the forward difference `χ(X+2) - χ(X)`, the lower the backward one
/// `χ(X+1) - χ(X-1)`, with staggered indices wrapping modulo `n_sites`.
pub fn verify_bilinears(n_sites: usize) -> Result<BilinearReport> {
    check_sites(n_sites)?;
    check_dense("bilinear verification", n_sites, MAX_BILINEAR_SITES)?;
    let n = n_sites;
    let dim = 1usize << n;

    let gamma0: Factor = [[ONE, ZERO], [ZERO, -ONE]];
    let gamma1: Factor = [[ZERO, -ONE], [ONE, ZERO]];
    let i_gamma1 = gamma1.map(|row| row.map(|v| I * v));
    let kinetic_kernel = mat2_mul(&gamma0, &i_gamma1);
    let charge_kernel = mat2_mul(&gamma0, &gamma0);
    let scalar_kernel = gamma0;

    let chis: Vec<MonomialOp> = (0..n).map(|x| chi(n, x)).collect();
    let chi_at = |x: isize| &chis[x.rem_euclid(n as isize) as usize];

    let mut kinetic = DenseMatrix::zeros(dim, dim);
    let mut charge = DenseMatrix::zeros(dim, dim);
    let mut scalar = DenseMatrix::zeros(dim, dim);

    for big_x in (0..n as isize).step_by(2) {
        let psi = [chi_at(big_x), chi_at(big_x + 1)];
        let psi_dag = [psi[0].adjoint(), psi[1].adjoint()];
        // each derivative component as (plus, minus) operators
        let d_psi = [
            (chi_at(big_x + 2), chi_at(big_x)),
            (chi_at(big_x + 1), chi_at(big_x - 1)),
        ];
        for alpha in 0..2 {
            for beta in 0..2 {
                let kc = kinetic_kernel[alpha][beta];
                if kc != ZERO {
                    let (plus, minus) = d_psi[beta];
                    psi_dag[alpha].then_after(plus).accumulate(&mut kinetic, kc);
                    psi_dag[alpha]
                        .then_after(minus)
                        .accumulate(&mut kinetic, -kc);
                }
                let cc = charge_kernel[alpha][beta];
                if cc != ZERO {
                    psi_dag[alpha]
                        .then_after(psi[beta])
                        .accumulate(&mut charge, cc);
                }
                let sc = scalar_kernel[alpha][beta];
                if sc != ZERO {
                    psi_dag[alpha]
                        .then_after(psi[beta])
                        .accumulate(&mut scalar, sc);
                }
            }
        }
    }

    let identity = PauliString::identity(n)?;
    // kinetic bilinear is minus the hopping part of aH
    let kinetic_pauli = build_hopping(n)?.scale(-1.0);
    let charge_pauli = build_charge_term(n)?
        .scale(2.0)
        .add(&PauliSum::from_real_terms(n, [(n as f64 / 2.0, identity)])?)?;
    let alternating_offset: f64 = (0..n).map(|x| if x % 2 == 0 { 0.5 } else { -0.5 }).sum();
    let scalar_pauli = build_mass_term(n)?.add(&PauliSum::from_real_terms(
        n,
        [(alternating_offset, identity)],
    )?)?;

    Ok(BilinearReport {
        n_sites,
        kinetic: max_abs_diff(&kinetic, &to_dense(&kinetic_pauli)?),
        charge: max_abs_diff(&charge, &to_dense(&charge_pauli)?),
        scalar: max_abs_diff(&scalar, &to_dense(&scalar_pauli)?),
    })
}
