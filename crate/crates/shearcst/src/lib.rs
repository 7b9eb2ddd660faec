//! Coherent-state analysis on a four-dimensional step-3 nilpotent shear group.
//!
//! The group 𝔾 = ℝ⁴ carries the polynomial product
//!
//! ```text
//! (x₁,x₂,x₃,x₄)·(y₁,y₂,y₃,y₄)
//!   = (x₁+y₁, x₂+y₂, x₃+y₃+x₁y₂, x₄+y₄+x₁y₃+½x₁²y₂),
//! ```
//!
//! a step-3 extension of the Heisenberg group by one shear direction x₂.
//! This crate provides, over that group:
//!
//! * the group operations and Lie-algebra structure ([`group`]),
//! * the unitary line representation π and its image-side counterparts
//!   ([`rep`]),
//! * the coherent-state transform (CST), its Gaussian closed form, and the
//!   adjoint reconstruction ([`cst`]),
//! * the two image-space characterisations — an analyticity condition 𝒞 and
//!   a structural (Casimir-derived) condition 𝒮 — plus the Gaussian peel
//!   ([`conditions`]),
//! * harmonic-oscillator dynamics in closed geometric form: Hamiltonians,
//!   the first-order reduction on the image space, evolution of squeezed
//!   states through the Cayley disk, and heat-flow propagation in the
//!   squeeze variable ([`dynamics`]),
//! * the ladder operators, vacuum, and eigenfunction family ([`spectrum`]),
//! * a self-contained verification suite mirroring the library's invariants
//!   ([`verify`]).
//!
//! # Conventions
//!
//! Planck-type constants `h2` (shear character) and `hbar4` (central
//! character) enter all phases as e^{2πi h₂·} and e^{2πi ħ₄·}. Discrete
//! axes are uniform grids; x₃ grids are *dual* to the line grid
//! (ħ₄·N·Δy·Δx₃ = 1), which makes the discrete CST pipeline exactly
//! unitary. All on-grid translations are cyclic, valid whenever the stated
//! boundary-mass preconditions hold (see [`cst::boundary_mass`]).
//!
//! With the default `parallel` feature the row/slice kernels run on rayon;
//! `*_seq` twins always run sequentially and back the criterion benches.

pub mod conditions;
pub mod cst;
pub mod diffop;
pub mod dynamics;
pub mod error;
pub mod fourier;
pub mod grid;
pub mod group;
pub(crate) mod parallel;
pub mod params;
pub mod rep;
pub mod spectrum;
pub(crate) mod stencil;
pub mod tol;
pub mod verify;

/// Complex double — the scalar type of every transform in this crate.
pub type C64 = num_complex::Complex64;

pub use error::{Diagnostic, Error};
pub use grid::{PhaseSlice, PhaseVolume, SampledLine, UniformGrid};
pub use params::{Measure, ModelParams};
