//! The unitary line representation π, its image-side action π̃, the derived
//! (infinitesimal) actions dπ and dπ̃, and the left-invariant derivatives 𝔏.
//!
//! With characters (h₂, ħ₄) the line representation acts on f ∈ L²(ℝ) by
//!
//! ```text
//! [π(x₁,x₂,x₃,x₄) f](y)
//!   = e^{2πi (h₂x₂ + ħ₄(x₄ − x₃y + ½x₂y²))} · f(y − x₁),
//! ```
//!
//! a pure phase times a translation — on an on-grid lattice a pure phase
//! times a cyclic permutation, hence exactly norm-preserving. The derived
//! action is
//!
//! ```text
//! dπ(X₁) = −d/dy              dπ(X₂) = 2πi h₂ + iπħ₄ y²
//! dπ(X₃) = −2πi ħ₄ y          dπ(X₄) = 2πi ħ₄,
//! ```
//!
//! and the Casimir C = X₃² − 2X₂X₄ acts as the scalar 8π²h₂ħ₄.
//!
//! On transform images F(x₁, x₂, x₃) the same group acts by
//!
//! ```text
//! [π̃(g) F](x′) = e^{2πi ħ₄ (x₄ − x₁x₃ + ½x₁²x₂ + x₁x₃′ − ½x₁²x₂′)}
//!                · F(x₁′−x₁, x₂′−x₂, x₃′−x₃−x₁x₂′+x₁x₂),
//! ```
//!
//! with derived action dπ̃(X₁) = −∂₁ − x₂∂₃ + 2πiħ₄x₃, dπ̃(X₂) = −∂₂,
//! dπ̃(X₃) = −∂₃, dπ̃(X₄) = 2πiħ₄. The commuting right-hand calculus is the
//! left-invariant derivative family
//!
//! ```text
//! 𝔏(X₁) = ∂₁          𝔏(X₂) = ∂₂ + x₁∂₃ − iπħ₄x₁²
//! 𝔏(X₃) = ∂₃ − 2πiħ₄x₁          𝔏(X₄) = −2πiħ₄.
//! ```
//!
//! ∂₁ and ∂₃ are spectral; ∂₂ uses the 4th-order slice stencil (≥ 5
//! slices). x₂ translations in π̃ do not wrap: slices whose source falls
//! outside the volume are zero-filled, and the restricted element sets used
//! by the test suites keep the x₂ shift at 0.

use std::f64::consts::PI;

use crate::error::Error;
use crate::fourier;
use crate::grid::{PhaseVolume, SampledLine};
use crate::group::{AlgebraVector, GroupElement};
use crate::params::ModelParams;
use crate::{stencil, C64};

#[inline]
fn phase(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Applies π(g) to a sampled line. The translation must land on the lattice
/// (x₁ an integer number of steps); it is carried out cyclically, which is
/// exact under the boundary-decay precondition.
pub fn apply_pi(g: &GroupElement, f: &SampledLine, p: &ModelParams) -> Result<SampledLine, Error> {
    let n = f.grid.count as i64;
    let r = f.grid.offset_of(g.x1)?;
    let values = (0..f.grid.count)
        .map(|j| {
            let y = f.grid.point(j);
            let theta = 2.0
                * PI
                * (p.h2 * g.x2 + p.hbar4 * (g.x4 - g.x3 * y + 0.5 * g.x2 * y * y));
            let src = (j as i64 - r).rem_euclid(n) as usize;
            phase(theta) * f.values[src]
        })
        .collect();
    SampledLine::new(f.grid, values)
}

/// Applies π̃(g) to a phase volume. x₁ and the slice-dependent x₃
/// translation must land on their lattices (cyclic); the x₂ translation
/// must be a whole number of slice spacings, with out-of-range source
/// slices zero-filled.
pub fn apply_pi_tilde(
    g: &GroupElement,
    f: &PhaseVolume,
    p: &ModelParams,
) -> Result<PhaseVolume, Error> {
    let (n1, n3, n2) = (f.grid1.count, f.grid3.count, f.len());
    let r1 = f.grid1.offset_of(g.x1)?;
    let r2 = f.grid2.offset_of(g.x2)?;
    let mut r3s = Vec::with_capacity(n2);
    for k in 0..n2 {
        let x2p = f.grid2.point(k);
        r3s.push(f.grid3.offset_of(g.x3 + g.x1 * x2p - g.x1 * g.x2)?);
    }
    let slices = crate::parallel::map_indexed(n2, |k| {
        let src2 = k as i64 - r2;
        if src2 < 0 || src2 >= n2 as i64 {
            return vec![C64::ZERO; n1 * n3];
        }
        let src = &f.slices[src2 as usize];
        let x2p = f.grid2.point(k);
        let r3 = r3s[k];
        let theta0 = p.hbar4
            * (g.x4 - g.x1 * g.x3 + 0.5 * g.x1 * g.x1 * g.x2 - 0.5 * g.x1 * g.x1 * x2p);
        let mut out = vec![C64::ZERO; n1 * n3];
        for i1 in 0..n1 {
            let s1 = (i1 as i64 - r1).rem_euclid(n1 as i64) as usize;
            for i3 in 0..n3 {
                let x3p = f.grid3.point(i3);
                let s3 = (i3 as i64 - r3).rem_euclid(n3 as i64) as usize;
                let theta = 2.0 * PI * (theta0 + p.hbar4 * g.x1 * x3p);
                out[i1 * n3 + i3] = phase(theta) * src[s1 * n3 + s3];
            }
        }
        out
    });
    Ok(f.with_slices(slices))
}

/// Applies the derived line action dπ(a₁X₁ + a₂X₂ + a₃X₃ + a₄X₄).
/// The y-derivative is spectral.
pub fn derived_pi(x: &AlgebraVector, f: &SampledLine, p: &ModelParams) -> SampledLine {
    let d1 = if x.a1 != 0.0 {
        fourier::spectral_derivative(&f.values, f.grid.step, 1)
    } else {
        Vec::new()
    };
    let values = (0..f.grid.count)
        .map(|j| {
            let y = f.grid.point(j);
            let mult = C64::new(0.0, 2.0 * PI * p.h2) * x.a2
                + C64::new(0.0, PI * p.hbar4 * y * y) * x.a2
                + C64::new(0.0, -2.0 * PI * p.hbar4 * y) * x.a3
                + C64::new(0.0, 2.0 * PI * p.hbar4) * x.a4;
            let mut v = mult * f.values[j];
            if x.a1 != 0.0 {
                v -= d1[j] * x.a1;
            }
            v
        })
        .collect();
    SampledLine { grid: f.grid, values }
}

/// Applies the derived image-side action dπ̃(a₁X₁ + a₂X₂ + a₃X₃ + a₄X₄).
/// Needs ≥ 5 slices when a₂ ≠ 0 (the ∂₂ stencil).
pub fn derived_pi_tilde(
    x: &AlgebraVector,
    f: &PhaseVolume,
    p: &ModelParams,
) -> Result<PhaseVolume, Error> {
    let d1 = (x.a1 != 0.0).then(|| fourier::volume_dx1_dx3(f, 1, 0));
    let d3 = (x.a1 != 0.0 || x.a3 != 0.0).then(|| fourier::volume_dx1_dx3(f, 0, 1));
    let d2 = if x.a2 != 0.0 { Some(stencil::volume_dx2(f)?) } else { None };
    let n3 = f.grid3.count;
    let two_pi_h4 = 2.0 * PI * p.hbar4;
    let slices = crate::parallel::map_indexed(f.len(), |k| {
        let x2 = f.grid2.point(k);
        let mut out = vec![C64::ZERO; f.grid1.count * n3];
        for i1 in 0..f.grid1.count {
            for i3 in 0..n3 {
                let idx = i1 * n3 + i3;
                let x3 = f.grid3.point(i3);
                let mut v = C64::new(0.0, two_pi_h4 * (x.a1 * x3 + x.a4)) * f.slices[k][idx];
                if let Some(d1) = &d1 {
                    v -= d1.slices[k][idx] * x.a1;
                }
                if let Some(d3) = &d3 {
                    v -= d3.slices[k][idx] * (x.a1 * x2 + x.a3);
                }
                if let Some(d2) = &d2 {
                    v -= d2.slices[k][idx] * x.a2;
                }
                out[idx] = v;
            }
        }
        out
    });
    Ok(f.with_slices(slices))
}

/// Applies the left-invariant derivative 𝔏(a₁X₁ + a₂X₂ + a₃X₃ + a₄X₄).
/// Needs ≥ 5 slices when a₂ ≠ 0.
pub fn lie_derivative(
    x: &AlgebraVector,
    f: &PhaseVolume,
    p: &ModelParams,
) -> Result<PhaseVolume, Error> {
    let d1 = (x.a1 != 0.0).then(|| fourier::volume_dx1_dx3(f, 1, 0));
    let d3 = (x.a2 != 0.0 || x.a3 != 0.0).then(|| fourier::volume_dx1_dx3(f, 0, 1));
    let d2 = if x.a2 != 0.0 { Some(stencil::volume_dx2(f)?) } else { None };
    let n3 = f.grid3.count;
    let pi_h4 = PI * p.hbar4;
    let slices = crate::parallel::map_indexed(f.len(), |k| {
        let mut out = vec![C64::ZERO; f.grid1.count * n3];
        for i1 in 0..f.grid1.count {
            let x1 = f.grid1.point(i1);
            // 𝔏X₂ zeroth order −iπħ₄x₁², 𝔏X₃ zeroth order −2πiħ₄x₁,
            // 𝔏X₄ = −2πiħ₄: all multiplications, collected once per row.
            let mult = C64::new(
                0.0,
                -pi_h4 * (x.a2 * x1 * x1 + 2.0 * x.a3 * x1 + 2.0 * x.a4),
            );
            for i3 in 0..n3 {
                let idx = i1 * n3 + i3;
                let mut v = mult * f.slices[k][idx];
                if let Some(d1) = &d1 {
                    v += d1.slices[k][idx] * x.a1;
                }
                if let Some(d3) = &d3 {
                    v += d3.slices[k][idx] * (x.a2 * x1 + x.a3);
                }
                if let Some(d2) = &d2 {
                    v += d2.slices[k][idx] * x.a2;
                }
                out[idx] = v;
            }
        }
        out
    });
    Ok(f.with_slices(slices))
}
