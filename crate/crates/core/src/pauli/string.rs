use std::fmt;

use num_complex::Complex64;

use crate::error::{ensure_same_size, Error, Result};

/// Largest register a mask-encoded string can describe.
pub const MAX_QUBITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// A fourth root of unity, stored as the exponent `k` of `i^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: u32) -> Self {
        Phase((k % 4) as u8)
    }

    pub fn power(self) -> u32 {
        self.0 as u32
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;

    // phases multiply by adding powers of i
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Phase) -> Phase {
        Phase::from_power(self.power() + rhs.power())
    }
}

/// An `n_qubits`-wide tensor product of single-qubit Paulis times a phase.
///
/// Qubit `q` carries X when only bit `q` of `x_mask` is set, Z when only the
/// `z_mask` bit is set, and Y when both are. The label's Y factors are part of
/// the operator itself; `phase` is the extra root of unity picked up by
/// products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x_mask: u64,
    z_mask: u64,
    phase: Phase,
}

fn width_mask(n_qubits: usize) -> u64 {
    if n_qubits == MAX_QUBITS {
        u64::MAX
    } else {
        (1u64 << n_qubits) - 1
    }
}

fn check_width(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::Argument(format!(
            "qubit count must be in 1..={MAX_QUBITS}, got {n_qubits}"
        )));
    }
    Ok(())
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::from_masks(n_qubits, 0, 0)
    }

    /// Builds a phase-one string from raw masks.
    pub fn from_masks(n_qubits: usize, x_mask: u64, z_mask: u64) -> Result<Self> {
        check_width(n_qubits)?;
        let outside = !width_mask(n_qubits);
        if (x_mask | z_mask) & outside != 0 {
            return Err(Error::Argument(format!(
                "masks {x_mask:#b}/{z_mask:#b} reach beyond {n_qubits} qubits"
            )));
        }
        Ok(PauliString {
            n_qubits,
            x_mask,
            z_mask,
            phase: Phase::ONE,
        })
    }

    pub fn single_site(n_qubits: usize, site: usize, axis: Axis) -> Result<Self> {
        check_width(n_qubits)?;
        if site >= n_qubits {
            return Err(Error::Argument(format!(
                "site {site} out of range for {n_qubits} qubits"
            )));
        }
        let bit = 1u64 << site;
        let (x, z) = match axis {
            Axis::X => (bit, 0),
            Axis::Y => (bit, bit),
            Axis::Z => (0, bit),
        };
        Self::from_masks(n_qubits, x, z)
    }

    /// Product of single-site factors; sites must be distinct.
    pub fn from_sites(n_qubits: usize, factors: &[(usize, Axis)]) -> Result<Self> {
        let mut out = Self::identity(n_qubits)?;
        for &(site, axis) in factors {
            let factor = Self::single_site(n_qubits, site, axis)?;
            if (out.x_mask | out.z_mask) & (factor.x_mask | factor.z_mask) != 0 {
                return Err(Error::Argument(format!("site {site} listed twice")));
            }
            out = out.multiply(&factor)?;
        }
        Ok(out)
    }

    /// Parses an `I/X/Y/Z` label where character `q` acts on qubit `q`.
    pub fn from_label(label: &str) -> Result<Self> {
        let n = label.chars().count();
        check_width(n)?;
        let (mut x, mut z) = (0u64, 0u64);
        for (q, ch) in label.chars().enumerate() {
            let bit = 1u64 << q;
            match ch {
                'I' => {}
                'X' => x |= bit,
                'Y' => {
                    x |= bit;
                    z |= bit;
                }
                'Z' => z |= bit,
                other => {
                    return Err(Error::Argument(format!(
                        "unexpected character {other:?} in Pauli label"
                    )))
                }
            }
        }
        Self::from_masks(n, x, z)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn y_mask(&self) -> u64 {
        self.x_mask & self.z_mask
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0 && self.phase == Phase::ONE
    }

    /// Same masks, phase reset to one.
    pub fn unphased(&self) -> Self {
        PauliString {
            phase: Phase::ONE,
            ..*self
        }
    }

    pub fn with_phase(&self, phase: Phase) -> Self {
        PauliString { phase, ..*self }
    }

    pub fn axis_at(&self, q: usize) -> Option<Axis> {
        let bit = 1u64 << q;
        match (self.x_mask & bit != 0, self.z_mask & bit != 0) {
            (false, false) => None,
            (true, false) => Some(Axis::X),
            (true, true) => Some(Axis::Y),
            (false, true) => Some(Axis::Z),
        }
    }

    pub fn label(&self) -> String {
        (0..self.n_qubits)
            .map(|q| match self.axis_at(q) {
                None => 'I',
                Some(Axis::X) => 'X',
                Some(Axis::Y) => 'Y',
                Some(Axis::Z) => 'Z',
            })
            .collect()
    }

    pub fn weight(&self) -> u32 {
        (self.x_mask | self.z_mask).count_ones()
    }

    /// Product `self * rhs`.
    ///
    /// Writing each label as `i^{|y|} X^x Z^z`, moving `Z^{z1}` past `X^{x2}`
    /// costs `(-1)^{|z1 & x2|}`, and the result's own Y factors are divided
    /// back out.
    pub fn multiply(&self, rhs: &PauliString) -> Result<PauliString> {
        ensure_same_size(self.n_qubits, rhs.n_qubits)?;
        let x = self.x_mask ^ rhs.x_mask;
        let z = self.z_mask ^ rhs.z_mask;
        let y_in = self.y_mask().count_ones() + rhs.y_mask().count_ones();
        let swap = 2 * (self.z_mask & rhs.x_mask).count_ones();
        let y_out = (x & z).count_ones();
        let k = y_in + swap + 4 * MAX_QUBITS as u32 - y_out;
        Ok(PauliString {
            n_qubits: self.n_qubits,
            x_mask: x,
            z_mask: z,
            phase: self.phase * rhs.phase * Phase::from_power(k),
        })
    }

    /// True iff the symplectic form of the two strings vanishes.
    pub fn commutes(&self, rhs: &PauliString) -> Result<bool> {
        ensure_same_size(self.n_qubits, rhs.n_qubits)?;
        let overlap =
            (self.x_mask & rhs.z_mask).count_ones() + (self.z_mask & rhs.x_mask).count_ones();
        Ok(overlap.is_multiple_of(2))
    }

    /// `P|k> = coefficient * |k ^ x_mask>` for a phase-one label.
    #[inline]
    pub(crate) fn column_phase(&self, k: u64) -> Phase {
        let sign = 2 * (k & self.z_mask).count_ones();
        Phase::from_power(self.y_mask().count_ones() + sign + self.phase.power())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase.power() {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}{}", self.label())
    }
}

impl std::str::FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_label(s)
    }
}
