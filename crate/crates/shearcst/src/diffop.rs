//! Differential operators with polynomial coefficients on (x₁, x₂, x₃):
//! exact symbolic composition plus numeric application to phase volumes.
//!
//! An operator is a finite sum Σ_α p_α(x₁,x₂,x₃) ∂^α with complex
//! polynomial coefficients. Composition follows the Leibniz rule
//!
//! ```text
//! (p ∂^α)(q ∂^β) = p Σ_{γ≤α} binom(α,γ) (∂^{α−γ} q) ∂^{γ+β},
//! ```
//!
//! carried out exactly on coefficients, so identities between composed
//! operators (Hamiltonian reductions, condition factorizations) can be
//! audited to rounding without touching any grid. Numeric application uses
//! the shared building blocks: spectral ∂₁/∂₃, 5-point stencil ∂₂.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::fourier;
use crate::grid::PhaseVolume;
use crate::params::ModelParams;
use crate::{stencil, C64};

/// Monomial powers (x₁^a · x₂^b · x₃^c) or derivative orders (∂₁^a ∂₂^b ∂₃^c).
pub type Powers = (u8, u8, u8);

/// Polynomial in (x₁, x₂, x₃) with complex coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly3 {
    pub terms: BTreeMap<Powers, C64>,
}

fn binom(n: u8, k: u8) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

impl Poly3 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C64) -> Self {
        let mut terms = BTreeMap::new();
        if c != C64::ZERO {
            terms.insert((0, 0, 0), c);
        }
        Self { terms }
    }

    /// The coordinate monomial x₁, x₂ or x₃ (axis 1, 2 or 3).
    pub fn variable(axis: u8) -> Self {
        let mut terms = BTreeMap::new();
        let key = match axis {
            1 => (1, 0, 0),
            2 => (0, 1, 0),
            3 => (0, 0, 1),
            _ => panic!("axis must be 1, 2 or 3"),
        };
        terms.insert(key, C64::new(1.0, 0.0));
        Self { terms }
    }

    /// Single monomial c·x₁^a x₂^b x₃^c.
    pub fn monomial(powers: Powers, c: C64) -> Self {
        let mut terms = BTreeMap::new();
        if c != C64::ZERO {
            terms.insert(powers, c);
        }
        Self { terms }
    }

    fn insert_add(&mut self, key: Powers, c: C64) {
        let slot = self.terms.entry(key).or_insert(C64::ZERO);
        *slot += c;
        if *slot == C64::ZERO {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Poly3) -> Poly3 {
        let mut out = self.clone();
        for (&k, &c) in &other.terms {
            out.insert_add(k, c);
        }
        out
    }

    pub fn scale(&self, c: C64) -> Poly3 {
        if c == C64::ZERO {
            return Poly3::zero();
        }
        Poly3 { terms: self.terms.iter().map(|(&k, &v)| (k, v * c)).collect() }
    }

    pub fn mul(&self, other: &Poly3) -> Poly3 {
        let mut out = Poly3::zero();
        for (&(a1, a2, a3), &ca) in &self.terms {
            for (&(b1, b2, b3), &cb) in &other.terms {
                out.insert_add((a1 + b1, a2 + b2, a3 + b3), ca * cb);
            }
        }
        out
    }

    /// Partial derivative along axis 1, 2 or 3.
    pub fn derivative(&self, axis: u8) -> Poly3 {
        let mut out = Poly3::zero();
        for (&(a1, a2, a3), &c) in &self.terms {
            let (n, key) = match axis {
                1 if a1 > 0 => (a1, (a1 - 1, a2, a3)),
                2 if a2 > 0 => (a2, (a1, a2 - 1, a3)),
                3 if a3 > 0 => (a3, (a1, a2, a3 - 1)),
                1 | 2 | 3 => continue,
                _ => panic!("axis must be 1, 2 or 3"),
            };
            out.insert_add(key, c * n as f64);
        }
        out
    }

    pub fn eval(&self, x1: f64, x2: f64, x3: f64) -> C64 {
        self.terms
            .iter()
            .map(|(&(a1, a2, a3), &c)| {
                c * x1.powi(a1 as i32) * x2.powi(a2 as i32) * x3.powi(a3 as i32)
            })
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference against `other`.
    pub fn max_deviation(&self, other: &Poly3) -> f64 {
        let mut keys: Vec<Powers> = self.terms.keys().copied().collect();
        keys.extend(other.terms.keys().copied());
        keys.iter()
            .map(|k| {
                let a = self.terms.get(k).copied().unwrap_or(C64::ZERO);
                let b = other.terms.get(k).copied().unwrap_or(C64::ZERO);
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Differential operator Σ_α p_α(x) ∂^α; keys are derivative orders.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiffOp3 {
    pub terms: BTreeMap<Powers, Poly3>,
}

impl DiffOp3 {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Multiplication by a polynomial (the ∂⁰ term).
    pub fn from_poly(p: Poly3) -> Self {
        Self::from_term((0, 0, 0), p)
    }

    /// Multiplication by a constant.
    pub fn scalar(c: C64) -> Self {
        Self::from_poly(Poly3::constant(c))
    }

    /// Single term p(x)·∂^orders.
    pub fn from_term(orders: Powers, p: Poly3) -> Self {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(orders, p);
        }
        Self { terms }
    }

    /// Plain ∂₁^a ∂₂^b ∂₃^c.
    pub fn derivative(orders: Powers) -> Self {
        Self::from_term(orders, Poly3::constant(C64::new(1.0, 0.0)))
    }

    fn insert_add(&mut self, key: Powers, p: Poly3) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&p);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &DiffOp3) -> DiffOp3 {
        let mut out = self.clone();
        for (&k, p) in &other.terms {
            out.insert_add(k, p.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffOp3) -> DiffOp3 {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> DiffOp3 {
        if c == C64::ZERO {
            return DiffOp3::zero();
        }
        DiffOp3 { terms: self.terms.iter().map(|(&k, p)| (k, p.scale(c))).collect() }
    }

    /// Operator product self ∘ other via the Leibniz rule (exact).
    pub fn compose(&self, other: &DiffOp3) -> DiffOp3 {
        let mut out = DiffOp3::zero();
        for (&(a1, a2, a3), p) in &self.terms {
            for (&(b1, b2, b3), q) in &other.terms {
                for g1 in 0..=a1 {
                    for g2 in 0..=a2 {
                        for g3 in 0..=a3 {
                            // ∂^{α−γ} q, i.e. differentiate q (a−g) times
                            // along each axis.
                            let mut dq = q.clone();
                            for _ in 0..a1 - g1 {
                                dq = dq.derivative(1);
                            }
                            for _ in 0..a2 - g2 {
                                dq = dq.derivative(2);
                            }
                            for _ in 0..a3 - g3 {
                                dq = dq.derivative(3);
                            }
                            if dq.is_zero() {
                                continue;
                            }
                            let w = binom(a1, g1) * binom(a2, g2) * binom(a3, g3);
                            out.insert_add(
                                (g1 + b1, g2 + b2, g3 + b3),
                                p.mul(&dq).scale(C64::new(w, 0.0)),
                            );
                        }
                    }
                }
            }
        }
        out
    }

    /// Largest coefficient difference against `other`, across all
    /// derivative orders and monomials.
    pub fn max_deviation(&self, other: &DiffOp3) -> f64 {
        let mut keys: Vec<Powers> = self.terms.keys().copied().collect();
        keys.extend(other.terms.keys().copied());
        let zero = Poly3::zero();
        keys.iter()
            .map(|k| {
                let a = self.terms.get(k).unwrap_or(&zero);
                let b = other.terms.get(k).unwrap_or(&zero);
                a.max_deviation(b)
            })
            .fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude (scale reference for deviations).
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(Poly3::max_coeff).fold(0.0, f64::max)
    }

    /// Applies the operator to a volume: spectral ∂₁/∂₃, iterated 5-point
    /// stencil for each ∂₂ order (x₂ orders above 1 lose stencil accuracy;
    /// the operators used here have order ≤ 1 in x₂).
    pub fn apply(&self, f: &PhaseVolume, _p: &ModelParams) -> Result<PhaseVolume, Error> {
        self.apply_with(true, f)
    }

    /// Sequential twin of [`DiffOp3::apply`] (bench baseline): same
    /// per-term arithmetic with the slice loop forced sequential.
    pub fn apply_seq(&self, f: &PhaseVolume, _p: &ModelParams) -> Result<PhaseVolume, Error> {
        self.apply_with(false, f)
    }

    fn apply_with(&self, parallel: bool, f: &PhaseVolume) -> Result<PhaseVolume, Error> {
        let per = f.grid1.count * f.grid3.count;
        let n3 = f.grid3.count;
        // One derivative volume per distinct order, shared across terms.
        let mut derived: Vec<(Powers, PhaseVolume)> = Vec::with_capacity(self.terms.len());
        for &(a1, a2, a3) in self.terms.keys() {
            let mut d = fourier::volume_dx1_dx3(f, a1 as u32, a3 as u32);
            for _ in 0..a2 {
                d = stencil::volume_dx2(&d)?;
            }
            derived.push(((a1, a2, a3), d));
        }
        let combine = |k: usize| -> Vec<C64> {
            let x2 = f.grid2.point(k);
            let mut out = vec![C64::ZERO; per];
            for (orders, d) in &derived {
                let poly = &self.terms[orders];
                let src = &d.slices[k];
                for i1 in 0..f.grid1.count {
                    let x1 = f.grid1.point(i1);
                    for i3 in 0..n3 {
                        let x3 = f.grid3.point(i3);
                        out[i1 * n3 + i3] += poly.eval(x1, x2, x3) * src[i1 * n3 + i3];
                    }
                }
            }
            out
        };
        let slices = if parallel {
            crate::parallel::map_indexed(f.len(), combine)
        } else {
            crate::parallel::map_indexed_seq(f.len(), combine)
        };
        Ok(f.with_slices(slices))
    }
}
