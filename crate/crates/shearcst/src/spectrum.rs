//! Ladder structure and the eigenfunction family of the image-space
//! oscillator Hamiltonian.
//!
//! On image slices the Hamiltonian factorizes through the pair of
//! first-order ladder operators
//!
//! ```text
//! L± = (i/2s)(−∂₁ − (x₂ ± imω)∂₃ + 2πiħ₄x₃),      s² = πħ₄mω,
//! ```
//!
//! which are slice-local (no ∂₂) and satisfy [L⁻, L⁺] = Id; L⁺ and L⁻ are
//! adjoint to each other in the sectioned inner product. The [`vacuum`] —
//! the transform of the width-matched Gaussian (q = mω) against the
//! fiducial of squeeze E — is annihilated by L⁻, and repeated raising
//! generates an orthonormal family with eigenvalues ħ₄ω(j + ½).
//!
//! The family has a closed form: with z = (x₃ − iEx₁)/D, D = ix₂ + E + mω,
//! and u the Cayley image of the section,
//!
//! ```text
//! Φ_j = (j!)^{−1/2} P_j(z, u) Φ₀,
//!     P_{j+1} = (u/2s) ∂_z P_j − 2sz P_j,      P_0 = 1.
//! ```
//!
//! The P_j are backward-heat polynomials: P_j(z, u) is (−2s)^j times the
//! heat flow of the monomial z^j, so the spectral family and the evolution
//! closed form are two views of one object. Homogeneity
//! P_j(λz, λ²u) = λ^j P_j(z, u) makes the time evolution of Φ_j the pure
//! phase e^{−iω(j+½)t}, and ∂_z P_j = −2sj P_{j−1} (the Appell property)
//! gives the descent weights √j.

use std::f64::consts::PI;

use crate::cst::cst_closed_form;
use crate::dynamics::{cayley_map, heat_scale_sq};
use crate::error::Error;
use crate::fourier;
use crate::grid::{PhaseSlice, PhaseVolume, UniformGrid};
use crate::params::ModelParams;
use crate::C64;

/// Largest admissible eigenfunction index. Beyond this the factorial
/// weights and the boundary growth of the polynomial factor outrun what
/// the default grids resolve, so construction refuses rather than degrade.
pub const MAX_EIGEN_DEGREE: usize = 16;

/// Oscillator eigenvalue ħ₄ω(j + ½) of the j-th eigenfunction.
pub fn eigenvalue(j: usize, p: &ModelParams) -> f64 {
    p.hbar4 * p.omega * (j as f64 + 0.5)
}

fn factorial(j: usize) -> f64 {
    (1..=j).map(|k| k as f64).product()
}

fn ladder_with(f: &PhaseSlice, sign: f64, p: &ModelParams) -> PhaseSlice {
    let s = heat_scale_sq(p).sqrt();
    let pre = C64::new(0.0, 1.0 / (2.0 * s));
    let c3 = -C64::new(f.x2, sign * p.m_omega());
    let c0 = C64::new(0.0, 2.0 * PI * p.hbar4);
    let d1 = fourier::slice_dx1(f, 1);
    let d3 = fourier::slice_dx3(f, 1);
    let mut out = f.map(|_, x3, v| v * (c0 * x3));
    for i1 in 0..f.grid1.count {
        for i3 in 0..f.grid3.count {
            let v = out.at(i1, i3) - d1.at(i1, i3) + d3.at(i1, i3) * c3;
            *out.at_mut(i1, i3) = v * pre;
        }
    }
    out
}

/// Raising operator L⁺ = (i/2s)(−∂₁ − (x₂ + imω)∂₃ + 2πiħ₄x₃) on one
/// slice (spectral derivatives; the section value is read off the slice).
pub fn ladder_plus(f: &PhaseSlice, p: &ModelParams) -> PhaseSlice {
    ladder_with(f, 1.0, p)
}

/// Lowering operator L⁻ = (i/2s)(−∂₁ − (x₂ − imω)∂₃ + 2πiħ₄x₃), the
/// adjoint of [`ladder_plus`]; it annihilates the [`vacuum`].
pub fn ladder_minus(f: &PhaseSlice, p: &ModelParams) -> PhaseSlice {
    ladder_with(f, -1.0, p)
}

/// The normalized vacuum slice at section `x2`: the transform of the
/// width-matched Gaussian (q = mω) against the fiducial of squeeze `e`,
/// which the lowering operator annihilates exactly.
pub fn vacuum(
    e: f64,
    grid1: &UniformGrid,
    grid3: &UniformGrid,
    x2: f64,
    p: &ModelParams,
) -> Result<PhaseSlice, Error> {
    p.validate()?;
    if !(e > 0.0) || !e.is_finite() {
        return Err(Error::ConfigInvalid(format!(
            "fiducial squeeze must be positive and finite, got {e}"
        )));
    }
    let q = p.m_omega();
    PhaseSlice::sample(*grid1, *grid3, x2, |x1, x3| {
        cst_closed_form(q, e, x1, x2, x3, p)
    })
}

/// Coefficients of the degree-`j` ladder polynomial P_j(·, u), ascending
/// in z, from the two-term recurrence P_{j+1} = (u/2s)∂_zP_j − 2szP_j.
pub fn eigen_polynomial_coeffs(j: usize, u: C64, p: &ModelParams) -> Result<Vec<C64>, Error> {
    if j > MAX_EIGEN_DEGREE {
        return Err(Error::DegreeTooHigh { requested: j, max: MAX_EIGEN_DEGREE });
    }
    let s = heat_scale_sq(p).sqrt();
    let du = u / (2.0 * s);
    let shift = C64::new(-2.0 * s, 0.0);
    let mut c = vec![C64::new(1.0, 0.0)];
    for _ in 0..j {
        let mut next = vec![C64::ZERO; c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            if k > 0 {
                next[k - 1] += du * (k as f64) * ck;
            }
            next[k + 1] += shift * ck;
        }
        c = next;
    }
    Ok(c)
}

fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(C64::ZERO, |acc, ck| acc * z + ck)
}

/// Evaluates the ladder polynomial P_j(z, u).
pub fn eigen_polynomial(j: usize, z: C64, u: C64, p: &ModelParams) -> Result<C64, Error> {
    Ok(horner(&eigen_polynomial_coeffs(j, u, p)?, z))
}

/// The j-th normalized eigenfunction slice Φ_j = (j!)^{−1/2} P_j(z, u) Φ₀
/// at section `x2`, with z = (x₃ − iEx₁)/(ix₂ + E + mω) and u the Cayley
/// image of the section. Fails with `DegreeTooHigh` above
/// [`MAX_EIGEN_DEGREE`].
pub fn eigenstate(
    j: usize,
    e: f64,
    grid1: &UniformGrid,
    grid3: &UniformGrid,
    x2: f64,
    p: &ModelParams,
) -> Result<PhaseSlice, Error> {
    let coeffs = eigen_polynomial_coeffs(j, cayley_map(x2, e, p), p)?;
    let base = vacuum(e, grid1, grid3, x2, p)?;
    let d = C64::new(e + p.m_omega(), x2);
    let w = 1.0 / factorial(j).sqrt();
    Ok(base.map(|x1, x3, v| {
        let z = C64::new(x3, -e * x1) / d;
        v * horner(&coeffs, z) * w
    }))
}

/// Stack of [`eigenstate`] slices over the sections of `grid2`.
pub fn eigenstate_volume(
    j: usize,
    e: f64,
    grid1: &UniformGrid,
    grid3: &UniformGrid,
    grid2: &UniformGrid,
    p: &ModelParams,
) -> Result<PhaseVolume, Error> {
    grid2.validate()?;
    let slices = (0..grid2.count)
        .map(|k| eigenstate(j, e, grid1, grid3, grid2.point(k), p))
        .collect::<Result<Vec<_>, _>>()?;
    PhaseVolume::from_slices(slices)
}

/// Schrödinger evolution of the j-th eigenfunction: the pure phase
/// Φ_j(t) = e^{−iω(j+½)t} Φ_j, consistent with the general evolution of
/// its polynomial seed by the homogeneity P_j(λz, λ²u) = λ^j P_j(z, u).
pub fn evolve_eigenstate(
    j: usize,
    e: f64,
    t: f64,
    grid1: &UniformGrid,
    grid3: &UniformGrid,
    x2: f64,
    p: &ModelParams,
) -> Result<PhaseSlice, Error> {
    let f = eigenstate(j, e, grid1, grid3, x2, p)?;
    let phase = C64::new(0.0, -p.omega * t * (j as f64 + 0.5)).exp();
    Ok(f.map(|_, _, v| v * phase))
}

/// Physicists' Hermite polynomial H_n(y) by the three-term recurrence
/// H_{n+1} = 2yH_n − 2nH_{n−1}. At real positive u the ladder polynomials
/// reduce to P_j(z, u) = (u/2)^{j/2} H_j(−sz/√(u/2)).
pub fn hermite(n: usize, y: f64) -> f64 {
    let mut h0 = 1.0;
    if n == 0 {
        return h0;
    }
    let mut h1 = 2.0 * y;
    for k in 1..n {
        let h2 = 2.0 * y * h1 - 2.0 * (k as f64) * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}
