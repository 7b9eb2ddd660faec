//! Model parameters and measure conventions.

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Physical constants of the model.
///
/// `h2` and `hbar4` are the two Planck-type constants attached to the shear
/// (x₂) and central (x₄) directions; every phase in the crate appears as
/// e^{2πi h₂·} or e^{2πi ħ₄·}. `m` and `omega` are the oscillator mass and
/// angular frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Central-direction constant ħ₄ (must be > 0).
    pub hbar4: f64,
    /// Shear-direction constant h₂ (any real; 0 switches the shear phase off).
    pub h2: f64,
    /// Oscillator mass m (must be > 0).
    pub m: f64,
    /// Oscillator angular frequency ω (must be > 0).
    pub omega: f64,
}

impl Default for ModelParams {
    /// The reference parameter point used throughout the test suites:
    /// ħ₄ = 1, h₂ = ½, m = 1, ω = 1.
    fn default() -> Self {
        Self { hbar4: 1.0, h2: 0.5, m: 1.0, omega: 1.0 }
    }
}

impl ModelParams {
    /// Checks the positivity constraints (`hbar4`, `m`, `omega` > 0 and all
    /// fields finite).
    pub fn validate(&self) -> Result<(), Error> {
        let ok = self.hbar4 > 0.0
            && self.m > 0.0
            && self.omega > 0.0
            && self.hbar4.is_finite()
            && self.h2.is_finite()
            && self.m.is_finite()
            && self.omega.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::ConfigInvalid(format!(
                "model parameters need hbar4, m, omega > 0 and finite values, got \
                 hbar4={}, h2={}, m={}, omega={}",
                self.hbar4, self.h2, self.m, self.omega
            )))
        }
    }

    /// m·ω, the oscillator scale that fixes the Cayley disk geometry.
    #[inline]
    pub fn m_omega(&self) -> f64 {
        self.m * self.omega
    }
}

/// Line-integral convention for norms and inner products of sampled lines.
///
/// The transforms themselves always integrate against plain Lebesgue
/// measure; the choice here only rescales ‖·‖ and ⟨·,·⟩ on [`SampledLine`]s
/// and the fiducial normalization constant.
///
/// [`SampledLine`]: crate::grid::SampledLine
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Measure {
    /// Plain dy: weight Δy per sample.
    #[default]
    Lebesgue,
    /// Dimensionless convention: weight √(ħ₄/h₂)·Δy per sample
    /// (requires h₂ > 0).
    Dimensionless,
}

impl Measure {
    /// Quadrature weight per sample for a line of step `step`.
    pub fn weight(&self, step: f64, p: &ModelParams) -> f64 {
        match self {
            Measure::Lebesgue => step,
            Measure::Dimensionless => (p.hbar4 / p.h2).sqrt() * step,
        }
    }
}
