//! Error and diagnostic types shared across the crate.
//!
//! Errors are contract violations (bad grids, out-of-range parameters);
//! [`Diagnostic`]s are non-fatal warnings that accompany an otherwise valid
//! result (e.g. the peel factor overflowing at the domain edge).

use thiserror::Error;

/// Contract violations raised by the numerical operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A requested translation does not land on the sample lattice.
    #[error("shift of {shift} is not an integer multiple of the grid step {step}")]
    OffGridShift { shift: f64, step: f64 },

    /// An operation needs more x₂ slices than the volume provides.
    #[error("operation needs at least {needed} x2 slices, volume has {got}")]
    InsufficientSlices { needed: usize, got: usize },

    /// Two sampled objects do not share the grid the operation requires.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A fiducial (or other decaying profile) carries non-negligible mass at
    /// the domain boundary, so cyclic/truncated arithmetic is unsound.
    #[error("domain too narrow: boundary amplitude {boundary:.3e} exceeds {limit:.3e} of peak")]
    DomainTooNarrow { boundary: f64, limit: f64 },

    /// The heat kernel grows on part of the integration grid, so the
    /// quadrature would diverge.
    #[error("heat kernel diverges on the sample grid (max exponent {max_exponent:.3e})")]
    KernelDivergent { max_exponent: f64 },

    /// A squeeze parameter lies outside the disk of convergence declared by
    /// the seed (or a squeeze ratio lies outside (0,1)).
    #[error("squeeze parameter out of range: |u| = {magnitude:.6} >= radius {radius:.6}")]
    SqueezeOutOfRange { magnitude: f64, radius: f64 },

    /// The Cayley point is the disk centre (u = 0); jump times degenerate.
    #[error("Cayley point is the disk centre; jump times are undefined")]
    CenterPoint,

    /// Eigenfunction degree above the supported range.
    #[error("eigenfunction degree {requested} exceeds the supported maximum {max}")]
    DegreeTooHigh { requested: usize, max: usize },

    /// A run configuration failed validation.
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
}

/// Non-fatal warnings attached to results that are still usable.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    /// The inverse of the reported factor underflows (equivalently the factor
    /// overflows) at the domain edge; peeled values there are unreliable.
    Overflow { max_exponent: f64 },
    /// A profile keeps `fraction` of its peak amplitude on the boundary;
    /// cyclic arithmetic is only accurate below the stated limit.
    BoundaryMass { fraction: f64, limit: f64 },
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diagnostic::Overflow { max_exponent } => write!(
                f,
                "peel factor reaches e^{max_exponent:.1} at the domain edge; \
                 edge values are unreliable"
            ),
            Diagnostic::BoundaryMass { fraction, limit } => write!(
                f,
                "boundary amplitude is {fraction:.3e} of peak (limit {limit:.3e})"
            ),
        }
    }
}
