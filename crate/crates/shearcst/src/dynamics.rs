//! Harmonic-oscillator dynamics on the transform image space, in closed
//! geometric form.
//!
//! Three layers live here:
//!
//! * **Hamiltonians.** The oscillator acts on the line model through
//!   [`hamiltonian_heisenberg`] and on image volumes through
//!   [`hamiltonian_shear`]. On data satisfying both image conditions the
//!   second-order shear Hamiltonian collapses to the first-order operator
//!   [`reduced_h1_op`]; the collapse is an exact operator identity
//!
//!   ```text
//!   H_shear + (A∂₁ + B∂₂ + C∂₃ + K)∘𝒞_E + F·𝒮 = H₁,
//!   ```
//!
//!   with the polynomial coefficients held in [`ReductionCoefficients`]
//!   and audited coefficient-by-coefficient in the tests.
//!
//! * **Evolution.** For a squeezed Gaussian initial state the Schrödinger
//!   flow never leaves a two-parameter family: every evolved state is the
//!   fixed Gaussian frame times a free factor f₂(z, u) evaluated at
//!   rotating arguments (e^{−iωt}z, e^{−2iωt}u). Here z is the peeled
//!   holomorphic coordinate scaled by D = ix₂ + E + mω and u is the
//!   [`cayley_map`] image of the slice. [`evolve_shear`] implements the
//!   closed form; [`evolve_heisenberg`] is its u = 0 line-model limit.
//!
//! * **Heat flow in the squeeze variable.** The factor f₂ depends on u
//!   through the (backward) heat equation ∂_u f₂ = −(1/8s²)∂²_z f₂ with
//!   s² = πħ₄mω. Seeds are carried either in closed form or as gridded
//!   line data pushed through [`heat_propagate`], the direct complex-kernel
//!   quadrature; the quadrature refuses to report values once the
//!   integrand stops decaying at the grid boundary.
//!
//! The Cayley disc geometry (circle per squeeze E, admissible-squeeze
//! bounds per seed radius, jump times where the rotating u crosses the
//! imaginary axis) is closed-form arithmetic and exact to rounding.

use std::f64::consts::PI;

use crate::diffop::{DiffOp3, Poly3};
use crate::error::Error;
use crate::grid::{PhaseSlice, PhaseVolume, SampledLine, UniformGrid};
use crate::params::ModelParams;
use crate::{fourier, tol, C64};

/// s² = πħ₄mω, the squared width scale of the oscillator vacuum; fixes the
/// diffusion constant 1/(8s²) of the heat flow in u.
#[inline]
pub fn heat_scale_sq(p: &ModelParams) -> f64 {
    PI * p.hbar4 * p.m * p.omega
}

/// One evolution request: squeeze parameter, time, and model constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionSpec {
    /// Squeeze parameter E of the Gaussian frame (must be > 0).
    pub e: f64,
    /// Evolution time (any real; the flow has period 2π/ω up to phase).
    pub t: f64,
    /// Model constants.
    pub params: ModelParams,
}

impl EvolutionSpec {
    /// Checks positivity/finiteness of the squeeze and the parameters.
    pub fn validate(&self) -> Result<(), Error> {
        self.params.validate()?;
        if !(self.e > 0.0 && self.e.is_finite() && self.t.is_finite()) {
            return Err(Error::ConfigInvalid(format!(
                "evolution needs a finite squeeze E > 0 and finite time, got E={}, t={}",
                self.e, self.t
            )));
        }
        Ok(())
    }
}

/// Largest supported polynomial seed degree (factorial growth of the
/// monomial recurrence stays far from f64 overflow below this).
pub const MAX_SEED_DEGREE: usize = 32;

/// Initial factor f₂(·, 0) of a squeezed evolution.
///
/// The closed-form variants know their own heat flow exactly; [`Grid`]
/// seeds are real-line samples continued through the complex heat kernel.
/// Every seed declares the radius of the u-disc on which its flow stays
/// regular: ∞ for entire seeds, 2s²/|α| for Gaussians, caller-declared for
/// gridded data.
///
/// [`Grid`]: HeatSeed::Grid
#[derive(Debug, Clone, PartialEq)]
pub enum HeatSeed {
    /// f₂ ≡ 1 (the pure Gaussian frame).
    Unit,
    /// Polynomial seed Σ cₙ zⁿ (coefficients low degree first); each
    /// monomial flows along the terminating heat-polynomial recurrence.
    Polynomial(Vec<C64>),
    /// Gaussian seed e^{−αz²}; flows to
    /// (1 − αu/2s²)^{−1/2} e^{−αz²/(1 − αu/2s²)} inside |u| < 2s²/|α|.
    Gaussian { alpha: C64 },
    /// Samples of f₂(·, 0) on a real z grid, with the caller-declared
    /// regularity radius in u.
    Grid { line: SampledLine, radius: f64 },
}

impl HeatSeed {
    /// Radius of the u-disc on which the evolved factor is regular.
    pub fn radius(&self, p: &ModelParams) -> f64 {
        match self {
            HeatSeed::Unit => f64::INFINITY,
            HeatSeed::Polynomial(_) => f64::INFINITY,
            HeatSeed::Gaussian { alpha } => {
                if alpha.norm() == 0.0 {
                    f64::INFINITY
                } else {
                    2.0 * heat_scale_sq(p) / alpha.norm()
                }
            }
            HeatSeed::Grid { radius, .. } => *radius,
        }
    }

    /// The heat-evolved factor f₂(z, u).
    ///
    /// Closed-form seeds evaluate exactly; [`HeatSeed::Grid`] seeds run the
    /// complex-kernel quadrature (and cannot be continued at u = 0 off the
    /// real axis, where the kernel degenerates to the identity).
    pub fn eval(&self, z: C64, u: C64, p: &ModelParams) -> Result<C64, Error> {
        let radius = self.radius(p);
        if !(u.norm() < radius) {
            return Err(Error::SqueezeOutOfRange { magnitude: u.norm(), radius });
        }
        let s2 = heat_scale_sq(p);
        match self {
            HeatSeed::Unit => Ok(C64::new(1.0, 0.0)),
            HeatSeed::Polynomial(coeffs) => {
                if coeffs.len() > MAX_SEED_DEGREE + 1 {
                    return Err(Error::DegreeTooHigh {
                        requested: coeffs.len() - 1,
                        max: MAX_SEED_DEGREE,
                    });
                }
                let mut total = C64::ZERO;
                for (n, &cn) in coeffs.iter().enumerate() {
                    if cn == C64::ZERO {
                        continue;
                    }
                    total += cn * heat_monomial(n, z, u, s2);
                }
                Ok(total)
            }
            HeatSeed::Gaussian { alpha } => {
                let w = C64::new(1.0, 0.0) - alpha * u / (2.0 * s2);
                Ok((-alpha * z * z / w).exp() / w.sqrt())
            }
            HeatSeed::Grid { line, .. } => {
                if u == C64::ZERO {
                    return Err(Error::CenterPoint);
                }
                heat_eval_point(line, u, z, p)
            }
        }
    }

    /// The seed z ↦ f₂(factor·z, 0), with the declared radius rescaled to
    /// keep the heat flow consistent: evolving the stretched seed to u is
    /// the same as evolving the original to factor²·u.
    pub fn rescaled(&self, factor: f64) -> Result<HeatSeed, Error> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::ConfigInvalid(format!(
                "seed rescale factor must be finite and > 0, got {factor}"
            )));
        }
        Ok(match self {
            HeatSeed::Unit => HeatSeed::Unit,
            HeatSeed::Polynomial(coeffs) => {
                let mut scale = 1.0;
                let mut out = Vec::with_capacity(coeffs.len());
                for &cn in coeffs {
                    out.push(cn * scale);
                    scale *= factor;
                }
                HeatSeed::Polynomial(out)
            }
            HeatSeed::Gaussian { alpha } => {
                HeatSeed::Gaussian { alpha: alpha * factor * factor }
            }
            HeatSeed::Grid { line, radius } => {
                let grid = UniformGrid {
                    origin: line.grid.origin / factor,
                    step: line.grid.step / factor,
                    count: line.grid.count,
                };
                HeatSeed::Grid {
                    line: SampledLine { grid, values: line.values.clone() },
                    radius: radius / (factor * factor),
                }
            }
        })
    }
}

/// Heat flow of the monomial zⁿ: a terminating polynomial in z whose
/// coefficients follow c₀ = 1, c_{k+1} = c_k·(n−2k)(n−2k−1)/(k+1)·β with
/// β = −u/(8s²), multiplying z^{n−2k}.
fn heat_monomial(n: usize, z: C64, u: C64, s2: f64) -> C64 {
    let beta = -u / (8.0 * s2);
    let mut coeff = C64::new(1.0, 0.0);
    let mut total = C64::ZERO;
    let mut k = 0usize;
    loop {
        let m = n - 2 * k;
        let mut zp = C64::new(1.0, 0.0);
        for _ in 0..m {
            zp *= z;
        }
        total += coeff * zp;
        if m < 2 {
            break;
        }
        coeff = coeff * ((m * (m - 1)) as f64) / ((k + 1) as f64) * beta;
        k += 1;
    }
    total
}

// ---------------------------------------------------------------------------
// Hamiltonians and the first-order reduction
// ---------------------------------------------------------------------------

/// The oscillator Hamiltonian on the line model (one slice, x₂ ignored):
///
/// ```text
/// H = −(1/4πm)∂₁₁ − (mω²/4π)∂₃₃ + (iħ₄/m)x₃∂₁ + (πħ₄²/m)x₃²,
/// ```
///
/// with spectral derivatives. Acting on the evolved line states it has the
/// spectrum ħ₄ω(j + ½).
pub fn hamiltonian_heisenberg(f: &PhaseSlice, p: &ModelParams) -> PhaseSlice {
    let d11 = fourier::slice_dx1(f, 2);
    let d33 = fourier::slice_dx3(f, 2);
    let d1 = fourier::slice_dx1(f, 1);
    let c11 = -1.0 / (4.0 * PI * p.m);
    let c33 = -p.m * p.omega * p.omega / (4.0 * PI);
    let c1 = C64::new(0.0, p.hbar4 / p.m);
    let c0 = PI * p.hbar4 * p.hbar4 / p.m;
    let mut out = f.map(|_, x3, v| v * (c0 * x3 * x3));
    let n3 = f.grid3.count;
    for i1 in 0..f.grid1.count {
        for i3 in 0..n3 {
            let x3 = f.grid3.point(i3);
            *out.at_mut(i1, i3) +=
                d11.at(i1, i3) * c11 + d33.at(i1, i3) * c33 + d1.at(i1, i3) * (c1 * x3);
        }
    }
    out
}

/// The oscillator Hamiltonian transported to image volumes, as a symbolic
/// operator with polynomial coefficients:
///
/// ```text
/// H = −(1/4πm)∂₁₁ − (x₂²/4πm + mω²/4π)∂₃₃ − (x₂/2πm)∂₁₃
///     + (iħ₄/m)x₃∂₁ + (iħ₄/m)x₂x₃∂₃ + (iħ₄/2m)x₂ + (πħ₄²/m)x₃².
/// ```
///
/// It is slice-local (no ∂₂), so it applies to volumes with any number of
/// slices.
pub fn hamiltonian_shear_op(p: &ModelParams) -> DiffOp3 {
    let m = p.m;
    let h4 = p.hbar4;
    let mut op = DiffOp3::from_term(
        (2, 0, 0),
        Poly3::constant(C64::new(-1.0 / (4.0 * PI * m), 0.0)),
    );
    op = op.add(&DiffOp3::from_term(
        (0, 0, 2),
        Poly3::monomial((0, 2, 0), C64::new(-1.0 / (4.0 * PI * m), 0.0)).add(&Poly3::constant(
            C64::new(-m * p.omega * p.omega / (4.0 * PI), 0.0),
        )),
    ));
    op = op.add(&DiffOp3::from_term(
        (1, 0, 1),
        Poly3::monomial((0, 1, 0), C64::new(-1.0 / (2.0 * PI * m), 0.0)),
    ));
    op = op.add(&DiffOp3::from_term(
        (1, 0, 0),
        Poly3::monomial((0, 0, 1), C64::new(0.0, h4 / m)),
    ));
    op = op.add(&DiffOp3::from_term(
        (0, 0, 1),
        Poly3::monomial((0, 1, 1), C64::new(0.0, h4 / m)),
    ));
    op.add(&DiffOp3::from_poly(
        Poly3::monomial((0, 1, 0), C64::new(0.0, h4 / (2.0 * m)))
            .add(&Poly3::monomial((0, 0, 2), C64::new(PI * h4 * h4 / m, 0.0))),
    ))
}

/// Applies [`hamiltonian_shear_op`] to a volume (spectral x₁/x₃
/// derivatives, slices in parallel under the default feature).
pub fn hamiltonian_shear(f: &PhaseVolume, p: &ModelParams) -> Result<PhaseVolume, Error> {
    hamiltonian_shear_op(p).apply(f, p)
}

/// Sequential twin of [`hamiltonian_shear`] (bench baseline).
pub fn hamiltonian_shear_seq(f: &PhaseVolume, p: &ModelParams) -> Result<PhaseVolume, Error> {
    hamiltonian_shear_op(p).apply_seq(f, p)
}

/// The image-space Hamiltonian restricted to one slice. The operator is
/// slice-local, so the section value enters only through the coefficients;
/// this matches [`hamiltonian_shear`] slice by slice and serves per-slice
/// work (Rayleigh quotients, single-section evolution checks) without
/// assembling a volume.
pub fn hamiltonian_shear_slice(f: &PhaseSlice, p: &ModelParams) -> PhaseSlice {
    let m = p.m;
    let h4 = p.hbar4;
    let x2 = f.x2;
    let d11 = fourier::slice_dx1(f, 2);
    let d33 = fourier::slice_dx3(f, 2);
    let d13 = fourier::slice_dx1_dx3(f, 1, 1);
    let d1 = fourier::slice_dx1(f, 1);
    let d3 = fourier::slice_dx3(f, 1);
    let c11 = -1.0 / (4.0 * PI * m);
    let c33 = -x2 * x2 / (4.0 * PI * m) - m * p.omega * p.omega / (4.0 * PI);
    let c13 = -x2 / (2.0 * PI * m);
    let c1 = C64::new(0.0, h4 / m);
    let c3 = C64::new(0.0, h4 * x2 / m);
    let c0 = C64::new(0.0, h4 * x2 / (2.0 * m));
    let cq = PI * h4 * h4 / m;
    let mut out = f.map(|_, x3, v| v * (c0 + C64::new(cq * x3 * x3, 0.0)));
    for i1 in 0..f.grid1.count {
        for i3 in 0..f.grid3.count {
            let x3 = f.grid3.point(i3);
            *out.at_mut(i1, i3) += d11.at(i1, i3) * c11
                + d33.at(i1, i3) * c33
                + d13.at(i1, i3) * c13
                + d1.at(i1, i3) * (c1 * x3)
                + d3.at(i1, i3) * (c3 * x3);
        }
    }
    out
}

/// Polynomial coefficients that collapse the shear Hamiltonian to first
/// order on the image space: H + (A∂₁ + B∂₂ + C∂₃ + K)∘𝒞_E + F·𝒮 = H₁.
///
/// `grad1/grad2/grad3` are A, B, C; `zero_order` is K; `structural` is the
/// multiplier F of the structural condition. All are polynomials in
/// (x₁, x₂, x₃) with constant complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionCoefficients {
    pub grad1: Poly3,
    pub grad2: Poly3,
    pub grad3: Poly3,
    pub zero_order: Poly3,
    pub structural: Poly3,
}

/// The reduction coefficients for squeeze `e`:
///
/// ```text
/// A = i/4πm,  B = 0,  C = E/4πm + (i/2πm)x₂,
/// K = −(iħ₄E/2m)x₁ − (ħ₄/m)x₁x₂,
/// F = (x₂ − iE)²/4πm + mω²/4π.
/// ```
pub fn shear_reduction(e: f64, p: &ModelParams) -> ReductionCoefficients {
    let m = p.m;
    let h4 = p.hbar4;
    ReductionCoefficients {
        grad1: Poly3::constant(C64::new(0.0, 1.0 / (4.0 * PI * m))),
        grad2: Poly3::zero(),
        grad3: Poly3::constant(C64::new(e / (4.0 * PI * m), 0.0))
            .add(&Poly3::monomial((0, 1, 0), C64::new(0.0, 1.0 / (2.0 * PI * m)))),
        zero_order: Poly3::monomial((1, 0, 0), C64::new(0.0, -h4 * e / (2.0 * m)))
            .add(&Poly3::monomial((1, 1, 0), C64::new(-h4 / m, 0.0))),
        structural: Poly3::monomial((0, 2, 0), C64::new(1.0 / (4.0 * PI * m), 0.0))
            .add(&Poly3::monomial((0, 1, 0), C64::new(0.0, -e / (2.0 * PI * m))))
            .add(&Poly3::constant(C64::new(
                (-e * e / m + m * p.omega * p.omega) / (4.0 * PI),
                0.0,
            ))),
    }
}

impl ReductionCoefficients {
    /// The first-order multiplier A∂₁ + B∂₂ + C∂₃ + K applied to the
    /// analyticity condition in the reduction identity.
    pub fn multiplier_op(&self) -> DiffOp3 {
        DiffOp3::from_term((1, 0, 0), self.grad1.clone())
            .add(&DiffOp3::from_term((0, 1, 0), self.grad2.clone()))
            .add(&DiffOp3::from_term((0, 0, 1), self.grad3.clone()))
            .add(&DiffOp3::from_poly(self.zero_order.clone()))
    }
}

/// The first-order operator equal to the shear Hamiltonian on data that
/// satisfies both image conditions:
///
/// ```text
/// H₁ = (iħ₄/m)(x₃ + x₁x₂)∂₁ + [(iħ₄/m)x₂x₃ − (iħ₄E²/m)x₁]∂₃
///      + [(iħ₄/m)(x₂ − iE)² + iħ₄mω²]∂₂ + (zeroth order),
/// ```
///
/// with the zeroth order spelled out in [`shear_reduction`]'s audit. At
/// E = mω the ∂₂ coefficient vanishes on the x₂ = 0 slice: the isotropic
/// vacuum frame does not couple neighbouring squeezes.
pub fn reduced_h1_op(e: f64, p: &ModelParams) -> DiffOp3 {
    let m = p.m;
    let h4 = p.hbar4;
    let h2 = p.h2;
    let mw2 = m * p.omega * p.omega;

    let d1 = Poly3::monomial((0, 0, 1), C64::new(0.0, h4 / m))
        .add(&Poly3::monomial((1, 1, 0), C64::new(0.0, h4 / m)));
    let d3 = Poly3::monomial((0, 1, 1), C64::new(0.0, h4 / m))
        .add(&Poly3::monomial((1, 0, 0), C64::new(0.0, -h4 * e * e / m)));
    let d2 = Poly3::monomial((0, 2, 0), C64::new(0.0, h4 / m))
        .add(&Poly3::monomial((0, 1, 0), C64::new(2.0 * h4 * e / m, 0.0)))
        .add(&Poly3::constant(C64::new(0.0, h4 * (mw2 - e * e / m))));
    let zero = Poly3::constant(C64::new(
        h4 * e / (2.0 * m) + 2.0 * PI * h2 * h4 * (e * e / m - mw2),
        0.0,
    ))
    .add(&Poly3::monomial(
        (0, 1, 0),
        C64::new(0.0, h4 / (2.0 * m) + 4.0 * PI * h2 * h4 * e / m),
    ))
    .add(&Poly3::monomial((0, 0, 2), C64::new(PI * h4 * h4 / m, 0.0)))
    .add(&Poly3::monomial((2, 0, 0), C64::new(-PI * h4 * h4 * e * e / m, 0.0)))
    .add(&Poly3::monomial((2, 1, 0), C64::new(0.0, 2.0 * PI * h4 * h4 * e / m)))
    .add(&Poly3::monomial((0, 2, 0), C64::new(-2.0 * PI * h2 * h4 / m, 0.0)));

    DiffOp3::from_term((1, 0, 0), d1)
        .add(&DiffOp3::from_term((0, 0, 1), d3))
        .add(&DiffOp3::from_term((0, 1, 0), d2))
        .add(&DiffOp3::from_poly(zero))
}

/// Applies [`reduced_h1_op`] to a volume (the ∂₂ term needs ≥ 5 slices).
pub fn reduced_h1(f: &PhaseVolume, e: f64, p: &ModelParams) -> Result<PhaseVolume, Error> {
    reduced_h1_op(e, p).apply(f, p)
}

// ---------------------------------------------------------------------------
// Cayley disc geometry
// ---------------------------------------------------------------------------

/// The Cayley image u = (mω − (ix₂ + E)) / (mω + ix₂ + E) of one slice.
///
/// As x₂ sweeps the real line, u traces the circle of
/// [`squeeze_geometry`]; u = 0 exactly at the isotropic point E = mω,
/// x₂ = 0.
pub fn cayley_map(x2: f64, e: f64, p: &ModelParams) -> C64 {
    let mw = p.m_omega();
    C64::new(mw - e, -x2) / C64::new(mw + e, x2)
}

/// The circle traced by [`cayley_map`] for one squeeze E: centre and
/// radius on the real axis, plus the contraction |u(x₂ = 0)| — the closest
/// approach of the circle to the disc centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeGeometry {
    /// Circle centre (real axis): −E/(mω + E).
    pub center: f64,
    /// Circle radius: mω/(mω + E).
    pub radius: f64,
    /// |mω − E|/(mω + E), the distance from u = 0 to the circle.
    pub contraction: f64,
}

/// Closed-form [`SqueezeGeometry`] for squeeze `e`.
pub fn squeeze_geometry(e: f64, p: &ModelParams) -> SqueezeGeometry {
    let mw = p.m_omega();
    SqueezeGeometry {
        center: -e / (mw + e),
        radius: mw / (mw + e),
        contraction: (mw - e).abs() / (mw + e),
    }
}

/// The open interval of squeezes E whose contraction stays inside a seed
/// disc of radius `r` ∈ (0,1):
///
/// ```text
/// ( mω(1−r)/(1+r),  mω(1+r)/(1−r) ).
/// ```
///
/// The two bounds are reciprocal about mω; the upper bound is computed as
/// (mω)²/lower so the pair is exactly reciprocal in floating point too.
pub fn squeeze_bounds(r: f64, p: &ModelParams) -> Result<(f64, f64), Error> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::SqueezeOutOfRange { magnitude: r, radius: 1.0 });
    }
    let mw = p.m_omega();
    // (1−r)/(1+r) written as 2/(1+r) − 1: one division and one exact
    // subtraction instead of two correlated roundings, which keeps simple
    // rational radii (e.g. r = 1/3 → bounds mω/2, 2mω) exact.
    let lower = mw * (2.0 / (1.0 + r) - 1.0);
    Ok((lower, mw * mw / lower))
}

/// Times t ∈ [0, π/ω) at which the rotating Cayley point e^{−2iωt}u(x₂)
/// crosses the imaginary axis — where the evolved Gaussian's x₃-width is
/// momentarily that of the frame and the chirp flips sign. There are
/// exactly two per half-period, π/(2ω) apart; at the disc centre (u = 0,
/// i.e. E = mω and x₂ = 0) every time qualifies and the request is
/// rejected.
///
/// `omega` is passed explicitly so callers can probe a different rotation
/// rate than the frame's; pass `p.omega` for the physical flow.
pub fn jump_times(x2: f64, e: f64, omega: f64, p: &ModelParams) -> Result<Vec<f64>, Error> {
    p.validate()?;
    if !(e > 0.0 && e.is_finite() && omega > 0.0 && omega.is_finite()) {
        return Err(Error::ConfigInvalid(format!(
            "jump times need finite E > 0 and omega > 0, got E={e}, omega={omega}"
        )));
    }
    let mw = p.m * omega;
    let u = C64::new(mw - e, -x2) / C64::new(mw + e, x2);
    if u.norm() == 0.0 {
        return Err(Error::CenterPoint);
    }
    // Re(e^{−2iωt}u) = |u|·cos(arg u − 2ωt) = 0 ⇔ 2ωt ≡ arg u − π/2 (mod π).
    let spacing = PI / (2.0 * omega);
    let t0 = ((u.arg() - PI / 2.0) / (2.0 * omega)).rem_euclid(spacing);
    Ok(vec![t0, t0 + spacing])
}

// ---------------------------------------------------------------------------
// Heat propagation of gridded seeds
// ---------------------------------------------------------------------------

/// Exponent bookkeeping for one kernel quadrature target.
///
/// Checks that the kernel is wide enough for the sample step, and that the
/// integrand (kernel × seed, in log scale) is not *boundary-dominated*:
/// its global maximum may not sit at the grid ends while towering over its
/// value near the kernel centre. Ordinary truncation — output points near
/// the grid edge whose integrand peak is simply adjacent to the boundary —
/// passes; a kernel growing toward the ends (the continuation has left the
/// convergence region) does not. Returns the per-sample complex exponents
/// on success.
fn kernel_exponents(
    g: &SampledLine,
    u: C64,
    z: C64,
    s2: f64,
) -> Result<Vec<C64>, Error> {
    let two_s2_over_u = 2.0 * s2 / u;
    // Kernel e-folding width along the real ξ axis, when it decays at all.
    let decay = -two_s2_over_u.re;
    if decay > 0.0 {
        let width = 1.0 / decay.sqrt();
        if width < tol::KERNEL_WIDTH_STEPS * g.grid.step {
            return Err(Error::GridMismatch(format!(
                "heat kernel width {width:.3e} is under {} sample steps (step {:.3e}); \
                 refine the z grid or move u away from 0",
                tol::KERNEL_WIDTH_STEPS,
                g.grid.step
            )));
        }
    }
    let n = g.grid.count;
    let mut exps = Vec::with_capacity(n);
    let mut log_mag = Vec::with_capacity(n);
    let mut peak = f64::NEG_INFINITY;
    for (k, &gk) in g.values.iter().enumerate() {
        let xi = g.grid.point(k);
        let d = z - xi;
        let w = two_s2_over_u * d * d;
        let mag = gk.norm();
        let lm = if mag > 0.0 { w.re + mag.ln() } else { f64::NEG_INFINITY };
        peak = peak.max(lm);
        exps.push(w);
        log_mag.push(lm);
    }
    let tail = log_mag[0].max(log_mag[n - 1]);
    let ci = g.grid.nearest_index(z.re);
    let center = (ci.saturating_sub(2)..(ci + 3).min(n))
        .map(|k| log_mag[k])
        .fold(f64::NEG_INFINITY, f64::max);
    if tail > peak - tol::KERNEL_BOUNDARY_DOMINANCE
        && peak > center + tol::KERNEL_BOUNDARY_DOMINANCE
    {
        return Err(Error::KernelDivergent { max_exponent: peak - center });
    }
    Ok(exps)
}

/// Evaluates the heat-evolved factor at one (possibly complex) point
/// z, by direct quadrature of the complex kernel against real-line
/// samples:
///
/// ```text
/// f₂(z, u) = (−2ħ₄mω/u)^{1/2} ∫ e^{2s²(z−ξ)²/u} g(ξ) dξ.
/// ```
///
/// The prefactor normalizes the kernel to unit mass, so f₂ → g as u → 0
/// along directions where the kernel decays. Fails with
/// [`Error::KernelDivergent`] when the integrand stops decaying at the
/// grid boundary (the analytic continuation left the kernel's region of
/// convergence) and with a grid mismatch when the kernel is narrower than
/// the sampling resolves.
pub fn heat_eval_point(g: &SampledLine, u: C64, z: C64, p: &ModelParams) -> Result<C64, Error> {
    p.validate()?;
    if u == C64::ZERO {
        return Err(Error::CenterPoint);
    }
    let s2 = heat_scale_sq(p);
    let exps = kernel_exponents(g, u, z, s2)?;
    let mut sum = C64::ZERO;
    for (w, &gk) in exps.iter().zip(&g.values) {
        sum += w.exp() * gk;
    }
    let pref = (C64::new(-2.0 * p.hbar4 * p.m_omega(), 0.0) / u).sqrt();
    Ok(pref * sum * g.grid.step)
}

/// [`heat_eval_point`] across the seed's own grid: the whole line
/// f₂(·, u) from f₂(·, 0). u = 0 returns the input unchanged (the kernel
/// is the identity there).
pub fn heat_propagate(g: &SampledLine, u: C64, p: &ModelParams) -> Result<SampledLine, Error> {
    p.validate()?;
    if u == C64::ZERO {
        return Ok(g.clone());
    }
    let s2 = heat_scale_sq(p);
    let pref = (C64::new(-2.0 * p.hbar4 * p.m_omega(), 0.0) / u).sqrt() * g.grid.step;
    let values = crate::parallel::try_map_indexed(g.grid.count, |j| {
        let z = C64::new(g.grid.point(j), 0.0);
        let exps = kernel_exponents(g, u, z, s2)?;
        let mut sum = C64::ZERO;
        for (w, &gk) in exps.iter().zip(&g.values) {
            sum += w.exp() * gk;
        }
        Ok(pref * sum)
    })?;
    SampledLine::new(g.grid, values)
}

// ---------------------------------------------------------------------------
// Closed-form evolution
// ---------------------------------------------------------------------------

/// Evolves a seed on the line model (the u = 0 limit):
///
/// ```text
/// ψ_t(x₁,x₃) = e^{−iωt/2} e^{iπħ₄x₁x₃ − (πħ₄/2mω)(m²ω²x₁² + x₃²)}
///              · f₂(e^{−iωt}(x₃ − imωx₁), 0).
/// ```
///
/// Gridded seeds are rejected ([`Error::CenterPoint`]): at u = 0 the
/// kernel cannot continue real samples to the complex argument.
pub fn evolve_heisenberg(
    seed: &HeatSeed,
    t: f64,
    grid1: UniformGrid,
    grid3: UniformGrid,
    p: &ModelParams,
) -> Result<PhaseSlice, Error> {
    p.validate()?;
    let mw = p.m_omega();
    let h4 = p.hbar4;
    let rot = C64::from_polar(1.0, -p.omega * t);
    let half = C64::from_polar(1.0, -0.5 * p.omega * t);
    let mut out = PhaseSlice::zeros(grid1, grid3, 0.0)?;
    for i1 in 0..grid1.count {
        let x1 = grid1.point(i1);
        for i3 in 0..grid3.count {
            let x3 = grid3.point(i3);
            let zeta = rot * C64::new(x3, -mw * x1);
            let f2 = seed.eval(zeta, C64::ZERO, p)?;
            let expo = C64::new(
                -(PI * h4 / (2.0 * mw)) * (mw * mw * x1 * x1 + x3 * x3),
                PI * h4 * x1 * x3,
            );
            *out.at_mut(i1, i3) = half * expo.exp() * f2;
        }
    }
    Ok(out)
}

/// Evolves a seed on one image slice in closed form:
///
/// ```text
/// W_t = √(E+mω)/√D · e^{−iωt/2 − πħ₄Ex₁² − 2πih₂x₂ − πħ₄(x₃−iEx₁)²/D}
///       · f₂(e^{−iωt}(x₃−iEx₁)/D, e^{−2iωt}u),   D = ix₂ + E + mω,
/// ```
///
/// with u the [`cayley_map`] image of the slice. Rejected with
/// [`Error::SqueezeOutOfRange`] when the squeeze's contraction — or this
/// slice's |u| — reaches the seed's declared radius.
pub fn evolve_shear_slice(
    seed: &HeatSeed,
    e: f64,
    t: f64,
    grid1: UniformGrid,
    grid3: UniformGrid,
    x2: f64,
    p: &ModelParams,
) -> Result<PhaseSlice, Error> {
    EvolutionSpec { e, t, params: *p }.validate()?;
    let radius = seed.radius(p);
    let contraction = squeeze_geometry(e, p).contraction;
    if !(contraction < radius) {
        return Err(Error::SqueezeOutOfRange { magnitude: contraction, radius });
    }
    let u = cayley_map(x2, e, p);
    if !(u.norm() < radius) {
        return Err(Error::SqueezeOutOfRange { magnitude: u.norm(), radius });
    }

    let mw = p.m_omega();
    let h4 = p.hbar4;
    let d = C64::new(e + mw, x2);
    let pref = C64::new((e + mw).sqrt(), 0.0) / d.sqrt()
        * C64::from_polar(1.0, -0.5 * p.omega * t - 2.0 * PI * p.h2 * x2);
    let rot = C64::from_polar(1.0, -p.omega * t);
    let u_t = C64::from_polar(1.0, -2.0 * p.omega * t) * u;

    let mut out = PhaseSlice::zeros(grid1, grid3, x2)?;
    for i1 in 0..grid1.count {
        let x1 = grid1.point(i1);
        for i3 in 0..grid3.count {
            let x3 = grid3.point(i3);
            let w = C64::new(x3, -e * x1);
            let z = w / d;
            let f2 = seed.eval(rot * z, u_t, p)?;
            let expo = C64::new(-PI * h4 * e * x1 * x1, 0.0) - PI * h4 * w * w / d;
            *out.at_mut(i1, i3) = pref * expo.exp() * f2;
        }
    }
    Ok(out)
}

/// [`evolve_shear_slice`] across a whole x₂ grid (slices in parallel
/// under the default feature).
pub fn evolve_shear(
    seed: &HeatSeed,
    e: f64,
    t: f64,
    grid1: UniformGrid,
    grid3: UniformGrid,
    grid2: UniformGrid,
    p: &ModelParams,
) -> Result<PhaseVolume, Error> {
    grid2.validate()?;
    let slices = crate::parallel::try_map_indexed(grid2.count, |k| {
        evolve_shear_slice(seed, e, t, grid1, grid3, grid2.point(k), p)
    })?;
    PhaseVolume::from_slices(slices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::{
        analytic_op, analytic_residual, structural_op, structural_residual,
    };
    use crate::cst::{cst_slice, make_fiducial, FiducialSpec};
    use crate::stencil::differentiate_samples;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn line_grid() -> UniformGrid {
        UniformGrid::centered(0.125, 64).unwrap()
    }

    /// Transform volume of φ_q against φ_E (image data satisfying both
    /// conditions), `n2` slices spaced `step2` around x₂ = 0.
    fn cst_volume(q: f64, e: f64, n2: usize, step2: f64, p: &ModelParams) -> PhaseVolume {
        let f = make_fiducial(&FiducialSpec::gaussian(q), line_grid(), p).unwrap();
        let phi = make_fiducial(&FiducialSpec::gaussian(e), line_grid(), p).unwrap();
        let half = (n2 / 2) as i64;
        let slices = (0..n2)
            .map(|k| {
                let x2 = (k as i64 - half) as f64 * step2;
                cst_slice(&f, &phi, x2, p).unwrap()
            })
            .collect();
        PhaseVolume::from_slices(slices).unwrap()
    }

    #[test]
    fn reduction_identity_holds_at_the_operator_level() {
        let cases = [
            (1.5, ModelParams::default()),
            (0.8, ModelParams { hbar4: 0.8, h2: 0.4, m: 0.7, omega: 1.3 }),
        ];
        for (e, p) in cases {
            let rc = shear_reduction(e, &p);
            let lhs = hamiltonian_shear_op(&p)
                .add(&rc.multiplier_op().compose(&analytic_op(e, &p)))
                .add(&DiffOp3::from_poly(rc.structural.clone()).compose(&structural_op(&p)));
            let rhs = reduced_h1_op(e, &p);
            let dev = lhs.max_deviation(&rhs);
            let scale = rhs.max_coeff();
            assert!(
                dev <= tol::EXACT_ALGEBRA * scale.max(1.0),
                "E={e}: reduction identity off by {dev:.3e} (scale {scale:.3e})"
            );
            // The reduction must really erase every second-order term.
            for (&(a1, a2, a3), poly) in &rhs.terms {
                assert!(
                    (a1 + a2 + a3) <= 1,
                    "H1 keeps a second-order term ∂^({a1},{a2},{a3})·{poly:?}"
                );
            }
        }
    }

    #[test]
    fn shear_coupling_vanishes_at_the_isotropic_point() {
        // At E = mω the structural multiplier F — and with it the ∂₂
        // coefficient of H₁ — vanishes on the x₂ = 0 slice.
        let p = ModelParams::default();
        let e = p.m_omega();
        let f = shear_reduction(e, &p).structural;
        assert!(f.eval(0.3, 0.0, -0.7).norm() < 1e-15);
        let h1 = reduced_h1_op(e, &p);
        let d2_coeff = h1.terms.get(&(0, 1, 0)).expect("H1 has a ∂₂ term");
        assert!(d2_coeff.eval(-1.2, 0.0, 0.4).norm() < 1e-15);
        // Off the slice (x₂ ≠ 0) the coupling is real again.
        assert!(d2_coeff.eval(0.0, 0.5, 0.0).norm() > 0.1);
    }

    #[test]
    fn line_model_vacuum_is_a_ground_eigenstate() {
        let p = ModelParams::default();
        let g1 = line_grid();
        let g3 = g1.dual(p.hbar4).unwrap();
        let vac = evolve_heisenberg(&HeatSeed::Unit, 0.0, g1, g3, &p).unwrap();
        let h = hamiltonian_heisenberg(&vac, &p);
        let want = vac.map(|_, _, v| v * (0.5 * p.hbar4 * p.omega));
        let dev = h.sub(&want).unwrap().interior_norm_weighted(0.1, &p)
            / want.interior_norm_weighted(0.1, &p);
        assert!(dev < 1e-6, "ground eigenvalue residual {dev:.3e}");
    }

    #[test]
    fn hamiltonians_agree_on_transform_images() {
        // On data satisfying both conditions the full Hamiltonian and its
        // first-order reduction act identically; the x₂ stencil inside the
        // reduction needs the fine Δx₂ = 1/128 spacing.
        let p = ModelParams::default();
        let e = 1.5;
        let vol = cst_volume(1.0, e, 9, 1.0 / 128.0, &p);
        let full = hamiltonian_shear(&vol, &p).unwrap();
        let first = reduced_h1(&vol, e, &p).unwrap();
        let scale = full.interior_norm_weighted(0.1, 2, &p);
        let dev = full.sub(&first).unwrap().interior_norm_weighted(0.1, 2, &p) / scale;
        assert!(dev < tol::REDUCTION_AGREEMENT, "H vs H1 deviation {dev:.3e}");
    }

    #[test]
    fn parallel_and_sequential_hamiltonians_agree_exactly() {
        let p = ModelParams::default();
        let vol = cst_volume(1.0, 1.5, 5, 1.0 / 64.0, &p);
        let a = hamiltonian_shear(&vol, &p).unwrap();
        let b = hamiltonian_shear_seq(&vol, &p).unwrap();
        assert_eq!(a.slices, b.slices);
    }

    #[test]
    fn slice_and_volume_shear_hamiltonians_agree() {
        let p = ModelParams::default();
        let vol = cst_volume(1.0, 1.3, 3, 0.25, &p);
        let hv = hamiltonian_shear(&vol, &p).unwrap();
        let scale = hv.peak();
        for k in 0..vol.len() {
            let hs = hamiltonian_shear_slice(&vol.slice(k), &p);
            let dev = hs.sub(&hv.slice(k)).unwrap().peak();
            assert!(
                dev <= tol::ROUNDING_SLACK * scale,
                "slice {k}: dev {dev:.3e} vs scale {scale:.3e}"
            );
        }
    }

    #[test]
    fn shear_evolution_solves_the_schrodinger_equation() {
        // iħ₄ ∂_t W = H W, with ∂_t from a 5-point stencil at Δt = 10⁻³/ω.
        let p = ModelParams::default();
        let e = 1.5 * p.m_omega();
        let seed = HeatSeed::Gaussian { alpha: c(0.5, 0.2) };
        let g1 = line_grid();
        let g3 = g1.dual(p.hbar4).unwrap();
        let g2 = UniformGrid::new(-0.25, 0.25, 3).unwrap();
        let t0 = 0.3 / p.omega;
        let dt = 1e-3 / p.omega;

        let snaps: Vec<PhaseVolume> = (-2..=2)
            .map(|k| {
                evolve_shear(&seed, e, t0 + k as f64 * dt, g1, g3, g2, &p).unwrap()
            })
            .collect();
        let h = hamiltonian_shear(&snaps[2], &p).unwrap();
        let ih4 = c(0.0, p.hbar4);
        let residual = h.with_slices(
            (0..h.len())
                .map(|k| {
                    (0..h.slices[k].len())
                        .map(|idx| {
                            let series: Vec<C64> =
                                snaps.iter().map(|s| s.slices[k][idx]).collect();
                            let ddt = differentiate_samples(&series, dt)[2];
                            ih4 * ddt - h.slices[k][idx]
                        })
                        .collect()
                })
                .collect(),
        );
        let rel = residual.interior_norm_weighted(0.1, 0, &p)
            / h.interior_norm_weighted(0.1, 0, &p);
        assert!(rel < tol::SCHRODINGER_RESIDUAL, "Schrodinger residual {rel:.3e}");
    }

    #[test]
    fn shear_and_line_evolutions_match_at_the_disc_centre() {
        // At E = mω, x₂ = 0 the image slice and the line model coincide
        // pointwise once the seed argument is rescaled by 2mω.
        let p = ModelParams::default();
        let e = p.m_omega();
        let g1 = line_grid();
        let g3 = g1.dual(p.hbar4).unwrap();
        let t = 0.7 / p.omega;
        let seeds = [
            HeatSeed::Unit,
            HeatSeed::Polynomial(vec![c(1.0, 0.0), c(0.0, 0.5), c(0.25, 0.0)]),
            HeatSeed::Gaussian { alpha: c(0.3, -0.2) },
        ];
        for seed in &seeds {
            let line = evolve_heisenberg(seed, t, g1, g3, &p).unwrap();
            let stretched = seed.rescaled(2.0 * p.m_omega()).unwrap();
            let slice = evolve_shear_slice(&stretched, e, t, g1, g3, 0.0, &p).unwrap();
            let peak = line.peak();
            for (a, b) in slice.values.iter().zip(&line.values) {
                assert!(
                    (a - b).norm() <= tol::EVOLUTION_MATCHING * peak,
                    "{seed:?}: |Δ| = {:.3e}",
                    (a - b).norm()
                );
            }
        }
    }

    #[test]
    fn evolution_conserves_slice_norms_and_conditions() {
        let p = ModelParams::default();
        let e = 1.5 * p.m_omega();
        let seed = HeatSeed::Gaussian { alpha: c(0.5, 0.0) };
        let g1 = line_grid();
        let g3 = g1.dual(p.hbar4).unwrap();
        let g2 = UniformGrid::new(-4.0 / 64.0, 1.0 / 64.0, 9).unwrap();
        let reference = evolve_shear(&seed, e, 0.0, g1, g3, g2, &p).unwrap();
        for t in [0.4 / p.omega, 1.1 / p.omega] {
            let evolved = evolve_shear(&seed, e, t, g1, g3, g2, &p).unwrap();
            for k in 0..evolved.len() {
                let n0 = reference.slice(k).norm_weighted(&p);
                let nt = evolved.slice(k).norm_weighted(&p);
                assert!(
                    (nt - n0).abs() <= 1e-6 * n0,
                    "t={t}: slice {k} norm drifts {:.3e}",
                    (nt - n0).abs() / n0
                );
            }
            let mid = evolved.slice(4);
            let ar = analytic_residual(&mid, e, &p);
            assert!(ar.relative < 1e-4, "t={t}: analyticity {:.3e}", ar.relative);
            let sr = structural_residual(&evolved, &p).unwrap();
            assert!(sr.relative < 1e-4, "t={t}: structural {:.3e}", sr.relative);
        }
    }

    #[test]
    fn squeeze_geometry_is_exact() {
        let p = ModelParams::default();
        for e in [0.3, 0.7, 1.0, 1.6, 2.5] {
            let geo = squeeze_geometry(e, &p);
            for x2 in [-8.0, -1.3, -0.2, 0.0, 0.4, 2.7, 31.0] {
                let u = cayley_map(x2, e, &p);
                let off = ((u - geo.center).norm() - geo.radius).abs();
                assert!(off <= tol::GEOMETRY, "E={e}, x2={x2}: circle offset {off:.3e}");
            }
            assert!((cayley_map(0.0, e, &p).norm() - geo.contraction).abs() <= tol::GEOMETRY);
        }
        // The bounds pair is exactly reciprocal about mω and lands on the
        // rational values for r = 1/3.
        let (lo, hi) = squeeze_bounds(1.0 / 3.0, &p).unwrap();
        assert_eq!((lo, hi), (0.5, 2.0));
        for e in [lo, hi] {
            let cg = squeeze_geometry(e, &p).contraction;
            assert!((cg - 1.0 / 3.0).abs() <= tol::GEOMETRY);
        }
        for bad in [0.0, -0.2, 1.0, 1.3] {
            assert!(matches!(
                squeeze_bounds(bad, &p),
                Err(Error::SqueezeOutOfRange { .. })
            ));
        }
    }

    #[test]
    fn jump_times_sit_on_the_imaginary_axis_crossings() {
        let p = ModelParams::default();
        for omega in [1.0, 2.0] {
            for (x2, e) in [(0.0, 1.5), (0.6, 1.5), (-1.1, 0.4)] {
                let ts = jump_times(x2, e, omega, &p).unwrap();
                assert_eq!(ts.len(), 2);
                assert!(ts[0] < ts[1] && ts[0] >= 0.0 && ts[1] < PI / omega);
                assert!((ts[1] - ts[0] - PI / (2.0 * omega)).abs() <= tol::GEOMETRY);
                let mw = p.m * omega;
                let u = C64::new(mw - e, -x2) / C64::new(mw + e, x2);
                for &t in &ts {
                    let re = (C64::from_polar(1.0, -2.0 * omega * t) * u).re.abs();
                    assert!(re <= tol::GEOMETRY * u.norm(), "Re residual {re:.3e}");
                }
            }
        }
        assert_eq!(jump_times(0.0, p.m_omega(), p.omega, &p), Err(Error::CenterPoint));
    }

    #[test]
    fn heat_flow_matches_the_gaussian_closed_form() {
        let p = ModelParams::default();
        let s2 = heat_scale_sq(&p);
        let grid = UniformGrid::centered(1.0 / 16.0, 128).unwrap();
        let alpha = c(1.2, 0.3);
        let u = c(-0.4, 0.25);
        let g = SampledLine::sample(grid, |x| (-alpha * x * x).exp()).unwrap();
        let out = heat_propagate(&g, u, &p).unwrap();
        let w = c(1.0, 0.0) - alpha * u / (2.0 * s2);
        let lo = grid.count / 10;
        let hi = grid.count - lo;
        let mut num = 0.0;
        let mut den = 0.0;
        for k in lo..hi {
            let x = grid.point(k);
            let want = (-alpha * x * x / w).exp() / w.sqrt();
            num += (out.values[k] - want).norm_sqr();
            den += want.norm_sqr();
        }
        let rel = (num / den).sqrt();
        assert!(rel < tol::HEAT_GAUSSIAN, "closed-form deviation {rel:.3e}");

        // u = 0 is the identity.
        let same = heat_propagate(&g, C64::ZERO, &p).unwrap();
        assert_eq!(same.values, g.values);
    }

    #[test]
    fn heat_flow_satisfies_its_generating_equation() {
        // ∂_u f₂ = −(1/8s²)∂²_z f₂, with ∂_u from a 5-point stencil along
        // the real-u direction and ∂²_z spectral.
        let p = ModelParams::default();
        let s2 = heat_scale_sq(&p);
        let grid = UniformGrid::centered(1.0 / 16.0, 128).unwrap();
        let g = SampledLine::sample(grid, |x| (-c(1.2, 0.3) * x * x).exp()).unwrap();
        let u0 = c(-0.4, 0.25);
        let du = 1e-3;
        let snaps: Vec<SampledLine> = (-2..=2)
            .map(|k| heat_propagate(&g, u0 + c(k as f64 * du, 0.0), &p).unwrap())
            .collect();
        let dzz = fourier::spectral_derivative(&snaps[2].values, grid.step, 2);
        let lo = grid.count / 10;
        let hi = grid.count - lo;
        let mut num = 0.0;
        let mut den = 0.0;
        for k in lo..hi {
            let series: Vec<C64> = snaps.iter().map(|s| s.values[k]).collect();
            let lhs = differentiate_samples(&series, du)[2];
            let rhs = -dzz[k] / (8.0 * s2);
            num += (lhs - rhs).norm_sqr();
            den += rhs.norm_sqr();
        }
        let rel = (num / den).sqrt();
        assert!(rel < tol::HEAT_PDE, "heat equation residual {rel:.3e}");
    }

    #[test]
    fn gridded_and_analytic_seeds_evolve_identically_where_the_kernel_converges() {
        // Same Gaussian seed carried two ways: closed form vs real-line
        // samples continued through the complex kernel. Narrow x₁ span
        // keeps the continuation well inside the kernel's convergence
        // region (|Im z| modest).
        let p = ModelParams::default();
        let e = 1.5;
        let x2 = 0.9;
        let t = 0.1;
        let alpha = c(1.2, 0.0);
        let zg = UniformGrid::centered(1.0 / 16.0, 128).unwrap();
        let line = SampledLine::sample(zg, |x| (-alpha * x * x).exp()).unwrap();
        let radius = 2.0 * heat_scale_sq(&p) / alpha.norm();
        let g1 = UniformGrid::centered(1.0 / 16.0, 16).unwrap();
        let g3 = UniformGrid::centered(0.125, 64).unwrap();

        let exact =
            evolve_shear_slice(&HeatSeed::Gaussian { alpha }, e, t, g1, g3, x2, &p).unwrap();
        let gridded =
            evolve_shear_slice(&HeatSeed::Grid { line, radius }, e, t, g1, g3, x2, &p).unwrap();
        let scale = exact.interior_norm_weighted(0.1, &p);
        let dev = exact.sub(&gridded).unwrap().interior_norm_weighted(0.1, &p) / scale;
        assert!(dev < 1e-5, "gridded vs closed form {dev:.3e}");
    }

    #[test]
    fn kernel_misuse_is_flagged() {
        let p = ModelParams::default();
        let grid = UniformGrid::centered(1.0 / 16.0, 128).unwrap();
        let g = SampledLine::sample(grid, |x| (-1.2 * x * x).exp().into()).unwrap();

        // Growing kernel (u on the positive real axis): the integrand
        // peaks at the boundary.
        assert!(matches!(
            heat_propagate(&g, c(0.2, 0.0), &p),
            Err(Error::KernelDivergent { .. })
        ));
        // Kernel narrower than the sampling.
        assert!(matches!(
            heat_propagate(&g, c(-0.005, 0.0), &p),
            Err(Error::GridMismatch(_))
        ));
        // Gridded seeds cannot be used on the line model (u = 0).
        let seed = HeatSeed::Grid { line: g, radius: 1.0 };
        let g1 = UniformGrid::centered(0.125, 16).unwrap();
        assert_eq!(
            evolve_heisenberg(&seed, 0.0, g1, g1, &p),
            Err(Error::CenterPoint)
        );
        // A seed whose disc is smaller than the squeeze's contraction.
        let tight = HeatSeed::Gaussian { alpha: c(4.0 * heat_scale_sq(&p), 0.0) };
        assert!((tight.radius(&p) - 0.5).abs() < 1e-15);
        let err = evolve_shear_slice(&tight, 3.0, 0.0, g1, g1, 0.0, &p).unwrap_err();
        assert!(matches!(err, Error::SqueezeOutOfRange { .. }));
        // Rescale factors must be positive.
        assert!(matches!(
            HeatSeed::Unit.rescaled(-1.0),
            Err(Error::ConfigInvalid(_))
        ));
    }

    #[test]
    fn polynomial_seeds_follow_the_monomial_recurrence() {
        let p = ModelParams::default();
        let s2 = heat_scale_sq(&p);
        let z = c(0.7, -0.3);
        let u = c(0.2, 0.4);
        let beta = -u / (8.0 * s2);
        // z² picks up 2β, z⁴ picks up 12βz² + 12β².
        let m2 = HeatSeed::Polynomial(vec![C64::ZERO, C64::ZERO, c(1.0, 0.0)])
            .eval(z, u, &p)
            .unwrap();
        assert!((m2 - (z * z + 2.0 * beta)).norm() < 1e-14);
        let m4 =
            HeatSeed::Polynomial(vec![C64::ZERO, C64::ZERO, C64::ZERO, C64::ZERO, c(1.0, 0.0)])
                .eval(z, u, &p)
                .unwrap();
        let want = z * z * z * z + 12.0 * beta * z * z + 12.0 * beta * beta;
        assert!((m4 - want).norm() < 1e-14);

        // Rescaling the seed equals rescaling the arguments (z, u) →
        // (fz, f²u), for every closed-form variant.
        let f = 2.0;
        for seed in [
            HeatSeed::Polynomial(vec![c(0.3, 0.1), c(-0.2, 0.0), c(0.0, 1.0), c(0.5, 0.5)]),
            HeatSeed::Gaussian { alpha: c(0.8, -0.1) },
        ] {
            let lhs = seed.rescaled(f).unwrap().eval(z, u, &p).unwrap();
            let rhs = seed.eval(f * z, f * f * u, &p).unwrap();
            assert!((lhs - rhs).norm() < 1e-12, "{seed:?}");
        }
    }
}
