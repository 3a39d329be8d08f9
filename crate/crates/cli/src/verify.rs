//! Structural checks of the Hamiltonian builders against independent
//! realizations.

use std::fmt;
use std::path::Path;

use desitter_core::model::{
    build_charge_term, build_hopping, build_mass_term, total_z, verify_bilinears, N8Fixture,
    N8_H1_TEXT, N8_H2_TEXT, N8_H3_TEXT,
};
use desitter_core::pauli::{commutator, to_dense, PauliSum};
use desitter_core::{hamiltonian_at, ModelParams};

use crate::error::CliError;

pub const TOLERANCE: f64 = 1e-12;
pub const MAX_VERIFY_SITES: usize = 10;

/// `(h, m, t)` points the commutator and eigenvalue checks visit.
const SAMPLE_POINTS: [(f64, f64, f64); 3] = [(0.1, 0.0, 0.0), (0.1, 1.0, 1.0), (0.7, 2.5, 3.0)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub deviation: Option<f64>,
    pub tolerance: f64,
    pub status: Status,
    pub note: String,
}

impl CheckResult {
    fn measured(name: String, deviation: f64, tolerance: f64) -> Self {
        CheckResult {
            name,
            deviation: Some(deviation),
            tolerance,
            status: if deviation < tolerance {
                Status::Pass
            } else {
                Status::Fail
            },
            note: String::new(),
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        write!(f, "{tag} {:<28}", self.name)?;
        if let Some(d) = self.deviation {
            write!(f, " deviation={d:.3e} tolerance={:.0e}", self.tolerance)?;
        }
        if !self.note.is_empty() {
            write!(f, " ({})", self.note)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Largest coefficient magnitude of `a - b`, and whether the two are equal
/// term for term.
fn sum_difference(a: &PauliSum, b: &PauliSum) -> Result<(f64, bool), CliError> {
    let diff = a.add(&b.scale(-1.0))?;
    let max = diff
        .terms()
        .iter()
        .map(|(c, _)| c.norm())
        .fold(0.0, f64::max);
    Ok((max, a == b))
}

pub fn load_fixture(dir: Option<&Path>) -> Result<N8Fixture, CliError> {
    let Some(dir) = dir else {
        return Ok(N8Fixture::from_texts(N8_H1_TEXT, N8_H2_TEXT, N8_H3_TEXT)?);
    };
    let read = |name: &str| {
        let path = dir.join(name);
        std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))
    };
    Ok(N8Fixture::from_texts(
        &read("n8_h1.txt")?,
        &read("n8_h2.txt")?,
        &read("n8_h3.txt")?,
    )?)
}

fn fixture_check(fixture: &N8Fixture) -> Result<CheckResult, CliError> {
    let pairs = [
        (build_hopping(8)?, fixture.h1.scale(-1.0)),
        (build_charge_term(8)?, fixture.h2.scale(0.5)),
        (build_mass_term(8)?, fixture.h3.clone()),
    ];
    let mut deviation = 0.0f64;
    let mut equal = true;
    for (built, expected) in &pairs {
        let (d, e) = sum_difference(built, expected)?;
        deviation = deviation.max(d);
        equal &= e;
    }
    let mut result = CheckResult::measured("fixture N=8".into(), deviation, TOLERANCE);
    // term-for-term equality is required, not closeness
    if !equal {
        result.status = Status::Fail;
        result.note = "builder and fixture differ".into();
    }
    Ok(result)
}

fn commutator_check(n: usize) -> Result<CheckResult, CliError> {
    let charge = total_z(n)?;
    let mut symbolic = 0.0f64;
    let mut dense = 0.0f64;
    for (h, m, t) in SAMPLE_POINTS {
        let ham = hamiltonian_at(&ModelParams::new(n, h, m)?, t)?;
        let comm = commutator(&charge, &ham)?;
        symbolic = symbolic.max(comm.terms().iter().map(|(c, _)| c.norm()).sum());
        if n <= 8 {
            let (q, hm) = (to_dense(&charge)?, to_dense(&ham)?);
            let d = &q * &hm - &hm * &q;
            dense = dense.max(d.iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
    }
    let mut result =
        CheckResult::measured(format!("commutator N={n}"), symbolic.max(dense), TOLERANCE);
    if symbolic != 0.0 {
        result.status = Status::Fail;
        result.note = "symbolic commutator is not empty".into();
    }
    Ok(result)
}

/// `aH(t)|0...0> = (N h / 4)|0...0>`, read off the dense first column.
fn eigenvalue_check(n: usize) -> Result<CheckResult, CliError> {
    let mut deviation = 0.0f64;
    for (h, m, t) in SAMPLE_POINTS {
        let dense = to_dense(&hamiltonian_at(&ModelParams::new(n, h, m)?, t)?)?;
        let expected = n as f64 * h / 4.0;
        deviation = deviation
            .max((dense[(0, 0)].re - expected).abs())
            .max(dense[(0, 0)].im.abs());
        for k in 1..dense.nrows() {
            deviation = deviation.max(dense[(k, 0)].norm());
        }
    }
    Ok(CheckResult::measured(
        format!("eigenvalue N={n}"),
        deviation,
        TOLERANCE,
    ))
}

pub fn verify(max_n: usize, fixture_dir: Option<&Path>) -> Result<VerifyReport, CliError> {
    if !max_n.is_multiple_of(2) || !(4..=MAX_VERIFY_SITES).contains(&max_n) {
        return Err(CliError::Usage(format!(
            "max_n must be even and between 4 and {MAX_VERIFY_SITES}, got {max_n}"
        )));
    }
    let sizes: Vec<usize> = (4..=max_n).step_by(2).collect();
    let mut checks = Vec::new();
    for &n in &sizes {
        let report = verify_bilinears(n)?;
        let mut c = CheckResult::measured(
            format!("bilinears N={n}"),
            report.max_deviation(),
            TOLERANCE,
        );
        c.note = format!(
            "kinetic {:.1e}, charge {:.1e}, scalar {:.1e}",
            report.kinetic, report.charge, report.scalar
        );
        checks.push(c);
    }
    if max_n >= 8 {
        checks.push(fixture_check(&load_fixture(fixture_dir)?)?);
    } else {
        checks.push(CheckResult {
            name: "fixture N=8".into(),
            deviation: None,
            tolerance: TOLERANCE,
            status: Status::Skipped,
            note: format!("max_n = {max_n}"),
        });
    }
    for &n in &sizes {
        checks.push(commutator_check(n)?);
    }
    for &n in &sizes {
        checks.push(eigenvalue_check(n)?);
    }
    Ok(VerifyReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_scope_skips_fixture() {
        let report = verify(4, None).unwrap();
        assert!(report.passed());
        assert_eq!(report.get("fixture N=8").unwrap().status, Status::Skipped);
        assert_eq!(report.checks.len(), 4);
    }

    #[test]
    fn rejects_odd_and_large() {
        assert!(verify(5, None).is_err());
        assert!(verify(12, None).is_err());
        assert!(verify(2, None).is_err());
    }

    #[test]
    fn tampered_fixture_fails() {
        let h3 = N8_H3_TEXT.replacen("0.5", "0.500001", 1);
        assert_ne!(h3, N8_H3_TEXT);
        let fixture = N8Fixture::from_texts(N8_H1_TEXT, N8_H2_TEXT, &h3).unwrap();
        let c = fixture_check(&fixture).unwrap();
        assert_eq!(c.status, Status::Fail);
        assert!((c.deviation.unwrap() - 1e-6).abs() < 1e-12);
        // below the closeness tolerance still fails
        let h2 = N8_H2_TEXT.replacen("0.5", "0.5000000000000001", 1);
        let fixture = N8Fixture::from_texts(N8_H1_TEXT, &h2, N8_H3_TEXT).unwrap();
        assert_eq!(fixture_check(&fixture).unwrap().status, Status::Fail);
    }
}
