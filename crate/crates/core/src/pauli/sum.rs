use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use super::string::PauliString;
use crate::error::{ensure_same_size, Error, Result};
use crate::format::fmt_g17;

/// Imaginary residue tolerated when a sum is read as a real operator.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// A merged linear combination of phase-one Pauli strings.
///
/// Terms are kept sorted by `(z_mask, x_mask)` and no two share masks. Any
/// phase on an incoming string is folded into its coefficient, and terms that
/// merge to exactly zero are dropped, so an operator that cancels is an empty
/// term list.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<(Complex64, PauliString)>,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Result<Self> {
        PauliString::identity(n_qubits)?;
        Ok(PauliSum {
            n_qubits,
            terms: Vec::new(),
        })
    }

    pub fn from_terms<I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Complex64, PauliString)>,
    {
        PauliString::identity(n_qubits)?;
        let mut merged: BTreeMap<(u64, u64), (Complex64, PauliString)> = BTreeMap::new();
        for (coefficient, string) in terms {
            ensure_same_size(n_qubits, string.n_qubits())?;
            if !(coefficient.re.is_finite() && coefficient.im.is_finite()) {
                return Err(Error::Argument(format!(
                    "non-finite coefficient on {}",
                    string.label()
                )));
            }
            let folded = coefficient * string.phase().to_complex();
            let bare = string.unphased();
            merged
                .entry((bare.z_mask(), bare.x_mask()))
                .and_modify(|(c, _)| *c += folded)
                .or_insert((folded, bare));
        }
        let terms = merged
            .into_values()
            .filter(|(c, _)| *c != Complex64::new(0.0, 0.0))
            .collect();
        Ok(PauliSum { n_qubits, terms })
    }

    pub fn from_real_terms<I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, PauliString)>,
    {
        Self::from_terms(
            n_qubits,
            terms.into_iter().map(|(c, p)| (Complex64::new(c, 0.0), p)),
        )
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(Complex64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms with real coefficients, or an error naming the first term whose
    /// imaginary part exceeds [`HERMITIAN_TOLERANCE`].
    pub fn real_terms(&self) -> Result<Vec<(f64, PauliString)>> {
        self.terms
            .iter()
            .map(|(c, p)| {
                if c.im.abs() > HERMITIAN_TOLERANCE {
                    Err(Error::NonHermitian {
                        label: p.label(),
                        imag: c.im,
                    })
                } else {
                    Ok((c.re, *p))
                }
            })
            .collect()
    }

    pub fn is_hermitian(&self) -> bool {
        self.real_terms().is_ok()
    }

    pub fn coefficient_of(&self, string: &PauliString) -> Complex64 {
        let bare = string.unphased();
        self.terms
            .iter()
            .find(|(_, p)| *p == bare)
            .map(|(c, _)| *c * string.phase().to_complex().conj())
            .unwrap_or_default()
    }

    pub fn scale(&self, factor: f64) -> PauliSum {
        let terms = self.terms.iter().map(|(c, p)| (*c * factor, *p));
        PauliSum::from_terms(self.n_qubits, terms).expect("same width")
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        ensure_same_size(self.n_qubits, other.n_qubits)?;
        PauliSum::from_terms(
            self.n_qubits,
            self.terms.iter().chain(other.terms.iter()).copied(),
        )
    }

    pub fn multiply(&self, other: &PauliSum) -> Result<PauliSum> {
        ensure_same_size(self.n_qubits, other.n_qubits)?;
        let mut products = Vec::with_capacity(self.len() * other.len());
        for (ca, pa) in &self.terms {
            for (cb, pb) in &other.terms {
                products.push((ca * cb, pa.multiply(pb)?));
            }
        }
        PauliSum::from_terms(self.n_qubits, products)
    }

    /// `self * other - other * self`, merged.
    ///
    /// Only anticommuting pairs contribute, each as `2 * ca * cb * pa pb`, so
    /// commuting operators give an empty sum without relying on cancellation.
    pub fn commutator(&self, other: &PauliSum) -> Result<PauliSum> {
        ensure_same_size(self.n_qubits, other.n_qubits)?;
        let mut products = Vec::new();
        for (ca, pa) in &self.terms {
            for (cb, pb) in &other.terms {
                if !pa.commutes(pb)? {
                    products.push((ca * cb * 2.0, pa.multiply(pb)?));
                }
            }
        }
        PauliSum::from_terms(self.n_qubits, products)
    }

    /// One `<coefficient> <label>` line per term.
    ///
    /// Only real sums have a textual form.
    pub fn to_text(&self) -> Result<String> {
        let mut out = String::new();
        for (c, p) in self.real_terms()? {
            writeln!(out, "{} {}", fmt_g17(c), p.label()).expect("write to String");
        }
        Ok(out)
    }

    /// Parses the format written by [`PauliSum::to_text`]. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn from_text(n_qubits: usize, text: &str) -> Result<PauliSum> {
        let mut terms = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: i + 1,
                message,
            };
            let mut fields = line.split_whitespace();
            let (Some(coefficient), Some(label), None) =
                (fields.next(), fields.next(), fields.next())
            else {
                return Err(parse_err(format!(
                    "expected `<coefficient> <label>`, got {line:?}"
                )));
            };
            let coefficient: f64 = coefficient
                .parse()
                .map_err(|e| parse_err(format!("bad coefficient {coefficient:?}: {e}")))?;
            let string = PauliString::from_label(label).map_err(|e| parse_err(e.to_string()))?;
            if string.n_qubits() != n_qubits {
                return Err(parse_err(format!(
                    "label {label} has {} qubits, expected {n_qubits}",
                    string.n_qubits()
                )));
            }
            terms.push((coefficient, string));
        }
        PauliSum::from_real_terms(n_qubits, terms)
    }
}
