//! The step-3 shear group 𝔾 and its Lie algebra.
//!
//! 𝔾 = ℝ⁴ with coordinates (x₁, x₂, x₃, x₄) and product
//!
//! ```text
//! (x₁,x₂,x₃,x₄)·(y₁,y₂,y₃,y₄)
//!   = (x₁+y₁, x₂+y₂, x₃+y₃+x₁y₂, x₄+y₄+x₁y₃+½x₁²y₂).
//! ```
//!
//! The Heisenberg group embeds as the x₂ = 0 hyperplane via
//! (x, y, s) ↦ (x, 0, y, s). The Lie algebra basis X₁…X₄ (coordinate
//! directions at the identity) obeys
//!
//! ```text
//! [X₁, X₂] = X₃,   [X₁, X₃] = X₄,   all other brackets 0,
//! ```
//!
//! so 𝔾 is nilpotent of step 3 and X₄ spans the centre. The Casimir
//! element used throughout the image-space analysis is C = X₃² − 2·X₂X₄
//! (central in the enveloping algebra; acts as the scalar 8π²h₂ħ₄ in the
//! line representation with characters (h₂, ħ₄)).
//!
//! Coordinates are dimensionally heterogeneous — in oscillator units x₁
//! carries T/(M·L), x₂ M/T, x₃ 1/L, x₄ T/(M·L²) — but that bookkeeping is
//! documentation only; all arithmetic below is plain ℝ⁴.

use serde::{Deserialize, Serialize};

/// A point of the shear group 𝔾 = ℝ⁴.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GroupElement {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
}

impl GroupElement {
    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Self { x1, x2, x3, x4 }
    }

    /// The group identity (0, 0, 0, 0).
    pub const fn identity() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0)
    }

    /// Largest coordinate distance to `other`.
    pub fn max_deviation(&self, other: &GroupElement) -> f64 {
        (self.x1 - other.x1)
            .abs()
            .max((self.x2 - other.x2).abs())
            .max((self.x3 - other.x3).abs())
            .max((self.x4 - other.x4).abs())
    }
}

/// A point of the Heisenberg group ℍ = ℝ³ with product
/// (x,y,s)·(x′,y′,s′) = (x+x′, y+y′, s+s′+x·y′).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HeisenbergElement {
    pub x: f64,
    pub y: f64,
    pub s: f64,
}

impl HeisenbergElement {
    pub const fn new(x: f64, y: f64, s: f64) -> Self {
        Self { x, y, s }
    }

    /// Heisenberg product (used to check that the embedding is a
    /// homomorphism).
    pub fn multiply(&self, other: &HeisenbergElement) -> HeisenbergElement {
        HeisenbergElement::new(
            self.x + other.x,
            self.y + other.y,
            self.s + other.s + self.x * other.y,
        )
    }
}

/// A Lie-algebra vector a₁X₁ + a₂X₂ + a₃X₃ + a₄X₄.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AlgebraVector {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

impl AlgebraVector {
    pub const fn new(a1: f64, a2: f64, a3: f64, a4: f64) -> Self {
        Self { a1, a2, a3, a4 }
    }

    /// The k-th basis vector, k ∈ 1..=4.
    pub fn basis(k: usize) -> AlgebraVector {
        match k {
            1 => AlgebraVector::new(1.0, 0.0, 0.0, 0.0),
            2 => AlgebraVector::new(0.0, 1.0, 0.0, 0.0),
            3 => AlgebraVector::new(0.0, 0.0, 1.0, 0.0),
            4 => AlgebraVector::new(0.0, 0.0, 0.0, 1.0),
            _ => panic!("basis index must be 1..=4, got {k}"),
        }
    }

    /// Largest coefficient distance to `other`.
    pub fn max_deviation(&self, other: &AlgebraVector) -> f64 {
        (self.a1 - other.a1)
            .abs()
            .max((self.a2 - other.a2).abs())
            .max((self.a3 - other.a3).abs())
            .max((self.a4 - other.a4).abs())
    }
}

/// Group product g·h.
pub fn multiply(g: &GroupElement, h: &GroupElement) -> GroupElement {
    GroupElement::new(
        g.x1 + h.x1,
        g.x2 + h.x2,
        g.x3 + h.x3 + g.x1 * h.x2,
        g.x4 + h.x4 + g.x1 * h.x3 + 0.5 * g.x1 * g.x1 * h.x2,
    )
}

/// Group inverse: (−x₁, −x₂, −x₃ + x₁x₂, −x₄ + x₁x₃ − ½x₁²x₂), the unique
/// solution of g·g⁻¹ = e.
pub fn inverse(g: &GroupElement) -> GroupElement {
    GroupElement::new(
        -g.x1,
        -g.x2,
        -g.x3 + g.x1 * g.x2,
        -g.x4 + g.x1 * g.x3 - 0.5 * g.x1 * g.x1 * g.x2,
    )
}

/// Embeds the Heisenberg group as the x₂ = 0 hyperplane:
/// (x, y, s) ↦ (x, 0, y, s). A group homomorphism onto its image.
pub fn embed_heisenberg(h: &HeisenbergElement) -> GroupElement {
    GroupElement::new(h.x, 0.0, h.y, h.s)
}

/// Lie bracket of two algebra vectors from the structure table
/// [X₁,X₂] = X₃, [X₁,X₃] = X₄ (all other basis brackets vanish):
///
/// [a, b] = (a₁b₂ − a₂b₁)·X₃ + (a₁b₃ − a₃b₁)·X₄.
pub fn bracket(a: &AlgebraVector, b: &AlgebraVector) -> AlgebraVector {
    AlgebraVector::new(
        0.0,
        0.0,
        a.a1 * b.a2 - a.a2 * b.a1,
        a.a1 * b.a3 - a.a3 * b.a1,
    )
}

/// One monomial of the Casimir descriptor: `coefficient · X_left X_right`
/// (indices into the basis X₁…X₄; the two factors commute for the central
/// element below, so no ordering ambiguity arises).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CasimirTerm {
    pub coefficient: f64,
    pub left: usize,
    pub right: usize,
}

/// Symbolic descriptor of the Casimir element C = X₃² − 2·X₂X₄.
///
/// This is the fixed element whose image-side action
/// (∂₃₃ + 4πi ħ₄ ∂₂, minus its scalar value 8π²h₂ħ₄) is the structural
/// condition applied by [`conditions::apply_S`]. Its centrality and scalar
/// action are pinned by tests in [`rep`].
///
/// [`conditions::apply_S`]: crate::conditions::apply_S
/// [`rep`]: crate::rep
pub fn casimir_coefficients() -> Vec<CasimirTerm> {
    vec![
        CasimirTerm { coefficient: 1.0, left: 3, right: 3 },
        CasimirTerm { coefficient: -2.0, left: 2, right: 4 },
    ]
}
