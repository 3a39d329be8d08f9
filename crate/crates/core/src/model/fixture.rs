use crate::error::Result;
use crate::pauli::PauliSum;

pub const N8_H1_TEXT: &str = include_str!("../../fixtures/n8_h1.txt");
pub const N8_H2_TEXT: &str = include_str!("../../fixtures/n8_h2.txt");
pub const N8_H3_TEXT: &str = include_str!("../../fixtures/n8_h3.txt");

/// Hand-transcribed eight-site operators with
/// `aH = -h1 + (h/2)·h2 + (m e^{ht})·h3`.
#[derive(Debug, Clone, PartialEq)]
pub struct N8Fixture {
    pub h1: PauliSum,
    pub h2: PauliSum,
    pub h3: PauliSum,
}

impl N8Fixture {
    pub fn from_texts(h1: &str, h2: &str, h3: &str) -> Result<Self> {
        Ok(N8Fixture {
            h1: PauliSum::from_text(8, h1)?,
            h2: PauliSum::from_text(8, h2)?,
            h3: PauliSum::from_text(8, h3)?,
        })
    }

    pub fn assemble(&self, hubble: f64, mass: f64, t: f64) -> Result<PauliSum> {
        self.h1
            .scale(-1.0)
            .add(&self.h2.scale(0.5 * hubble))?
            .add(&self.h3.scale((hubble * t).exp() * mass))
    }
}

pub fn n8_fixture() -> N8Fixture {
    N8Fixture::from_texts(N8_H1_TEXT, N8_H2_TEXT, N8_H3_TEXT).expect("bundled fixture parses")
}
