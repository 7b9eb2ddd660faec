//! Image-space characterization: the analyticity and structural conditions,
//! Gaussian peeling, and the Cauchy–Riemann residual measured along two
//! independent computational routes.
//!
//! A slice F(·, x₂, ·) is the transform of some signal against the Gaussian
//! fiducial of squeeze E exactly when it satisfies the first-order
//! **analyticity condition**
//!
//! ```text
//! 𝒞_E F = (−i∂₁ + E∂₃ − 2πiħ₄E x₁) F = 0,
//! ```
//!
//! and a volume lies in the image of the transform (any fiducial) exactly
//! when it satisfies the second-order **structural condition**
//!
//! ```text
//! 𝒮 F = (∂₃₃ + 4πiħ₄ ∂₂ − 8π²h₂ħ₄) F = 0,
//! ```
//!
//! the Casimir action minus its scalar value. The Casimir itself is exposed
//! through two independently composed routes — the left-invariant
//! derivatives 𝔏 and the derived action dπ̃ — which must agree wherever
//! both are defined; they are never merged into one code path.
//!
//! **Peeling**: multiplying a slice by e^{+πħ₄E x₁²} removes the Gaussian
//! envelope, leaving a function H with 𝒞_E F = 0 ⇔ ∂₁H + iE∂₃H = 0, the
//! Cauchy–Riemann equation in w = x₃ − iE x₁. The CR residual is measured
//! two ways: spectrally on the *unpeeled* slice (where the envelope keeps
//! the data periodic-friendly), and with local 5-point stencils on the
//! *peeled* slice (exact on polynomial data, insensitive to the envelope's
//! edge growth). A third, fully independent diagnostic fits a quadratic
//! polynomial on a centred patch and reports the energy sitting on
//! anti-holomorphic monomials.

use std::f64::consts::PI;

use crate::diffop::{DiffOp3, Poly3};
use crate::error::{Diagnostic, Error};
use crate::fourier;
use crate::grid::{PhaseSlice, PhaseVolume};
use crate::group::casimir_coefficients;
use crate::params::ModelParams;
use crate::rep::{derived_pi_tilde, lie_derivative};
use crate::{stencil, tol, C64};
use crate::group::AlgebraVector;

/// Which condition a residual refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionKind {
    /// First-order analyticity condition 𝒞_E (fiducial-specific).
    Analytic,
    /// Second-order structural condition 𝒮 (fiducial-independent).
    Structural,
    /// Cauchy–Riemann form of the analyticity condition.
    CauchyRiemann,
}

/// Interior-framed residual of one condition on one dataset.
#[derive(Debug, Clone, Copy)]
pub struct ConditionResidual {
    pub operator: ConditionKind,
    /// Weighted interior norm of the condition output.
    pub absolute: f64,
    /// `absolute` relative to the matching norm of the input (or of the
    /// gradient scale for the stencil CR route).
    pub relative: f64,
}

/// Applies the analyticity condition 𝒞_E = −i∂₁ + E∂₃ − 2πiħ₄E x₁ to a
/// slice (spectral derivatives).
pub fn apply_c(f: &PhaseSlice, e: f64, p: &ModelParams) -> PhaseSlice {
    let d1 = fourier::slice_dx1(f, 1);
    let d3 = fourier::slice_dx3(f, 1);
    let mut out = f.map(|x1, _, v| v * C64::new(0.0, -2.0 * PI * p.hbar4 * e * x1));
    for (o, (a, b)) in out.values.iter_mut().zip(d1.values.iter().zip(&d3.values)) {
        *o += a * C64::new(0.0, -1.0) + b * e;
    }
    out
}

/// [`apply_c`] on every slice of a volume.
pub fn apply_c_volume(f: &PhaseVolume, e: f64, p: &ModelParams) -> PhaseVolume {
    let slices = crate::parallel::map_indexed(f.len(), |k| {
        apply_c(&f.slice(k), e, p).values
    });
    f.with_slices(slices)
}

/// Applies the structural condition 𝒮 = ∂₃₃ + 4πiħ₄∂₂ − 8π²h₂ħ₄ to a
/// volume. Needs ≥ 5 slices for the x₂ stencil.
pub fn apply_s(f: &PhaseVolume, p: &ModelParams) -> Result<PhaseVolume, Error> {
    let d33 = fourier::volume_dx1_dx3(f, 0, 2);
    let d2 = stencil::volume_dx2(f)?;
    let scalar = 8.0 * PI * PI * p.h2 * p.hbar4;
    let four_pi_h4 = C64::new(0.0, 4.0 * PI * p.hbar4);
    let per = f.grid1.count * f.grid3.count;
    let slices = crate::parallel::map_indexed(f.len(), |k| {
        let mut out = vec![C64::ZERO; per];
        for (idx, o) in out.iter_mut().enumerate() {
            *o = d33.slices[k][idx] + four_pi_h4 * d2.slices[k][idx]
                - scalar * f.slices[k][idx];
        }
        out
    });
    Ok(f.with_slices(slices))
}

/// The analyticity condition as a symbolic operator with polynomial
/// coefficients, for composition with other operators. The numeric
/// [`apply_c`] stays the production route; this form exists so that
/// operator-level identities can be audited coefficient by coefficient.
pub fn analytic_op(e: f64, p: &ModelParams) -> DiffOp3 {
    DiffOp3::from_term((1, 0, 0), Poly3::constant(C64::new(0.0, -1.0)))
        .add(&DiffOp3::from_term((0, 0, 1), Poly3::constant(C64::new(e, 0.0))))
        .add(&DiffOp3::from_poly(Poly3::monomial(
            (1, 0, 0),
            C64::new(0.0, -2.0 * PI * p.hbar4 * e),
        )))
}

/// The structural condition as a symbolic operator, mirroring
/// [`analytic_op`].
pub fn structural_op(p: &ModelParams) -> DiffOp3 {
    DiffOp3::derivative((0, 0, 2))
        .add(&DiffOp3::from_term(
            (0, 1, 0),
            Poly3::constant(C64::new(0.0, 4.0 * PI * p.hbar4)),
        ))
        .add(&DiffOp3::scalar(C64::new(-8.0 * PI * PI * p.h2 * p.hbar4, 0.0)))
}

fn casimir_with(
    apply: &dyn Fn(&AlgebraVector, &PhaseVolume) -> Result<PhaseVolume, Error>,
    f: &PhaseVolume,
) -> Result<PhaseVolume, Error> {
    let per = f.grid1.count * f.grid3.count;
    let mut acc = vec![vec![C64::ZERO; per]; f.len()];
    for term in casimir_coefficients() {
        let inner = apply(&AlgebraVector::basis(term.right), f)?;
        let outer = apply(&AlgebraVector::basis(term.left), &inner)?;
        for (a, s) in acc.iter_mut().zip(&outer.slices) {
            for (av, sv) in a.iter_mut().zip(s) {
                *av += sv * term.coefficient;
            }
        }
    }
    Ok(f.with_slices(acc))
}

/// Casimir action composed from left-invariant derivatives 𝔏 (route one).
pub fn casimir_left(f: &PhaseVolume, p: &ModelParams) -> Result<PhaseVolume, Error> {
    casimir_with(&|x, v| lie_derivative(x, v, p), f)
}

/// Casimir action composed from the derived action dπ̃ (route two).
/// A central element acts identically through both routes; keeping the
/// compositions separate is what makes their agreement a real check.
pub fn casimir_right(f: &PhaseVolume, p: &ModelParams) -> Result<PhaseVolume, Error> {
    casimir_with(&|x, v| derived_pi_tilde(x, v, p), f)
}

/// Removes the Gaussian x₁ envelope: multiplies by e^{+πħ₄E x₁²}, mapping a
/// transform image to a discrete Cauchy–Riemann solution in w = x₃ − iEx₁.
/// Warns (but proceeds) when the envelope exponent at the grid edge is
/// large enough to overflow alongside O(1) data.
pub fn peel(f: &PhaseSlice, e: f64, p: &ModelParams) -> (PhaseSlice, Option<Diagnostic>) {
    let out = f.map(|x1, _, v| v * (PI * p.hbar4 * e * x1 * x1).exp());
    let edge = f.grid1.point(0).abs().max(f.grid1.point(f.grid1.count - 1).abs());
    let max_exponent = PI * p.hbar4 * e * edge * edge;
    let diag = (max_exponent > tol::PEEL_EXPONENT_LIMIT)
        .then_some(Diagnostic::Overflow { max_exponent });
    (out, diag)
}

/// Inverse of [`peel`]: restores the Gaussian envelope.
pub fn unpeel(f: &PhaseSlice, e: f64, p: &ModelParams) -> PhaseSlice {
    f.map(|x1, _, v| v * (-PI * p.hbar4 * e * x1 * x1).exp())
}

/// Interior-framed residual of the analyticity condition on a slice:
/// ‖𝒞_E F‖ / ‖F‖ over the slice with a boundary frame dropped.
pub fn analytic_residual(f: &PhaseSlice, e: f64, p: &ModelParams) -> ConditionResidual {
    let cf = apply_c(f, e, p);
    let absolute = cf.interior_norm_weighted(tol::BOUNDARY_FRAME_FRACTION, p);
    let scale = f.interior_norm_weighted(tol::BOUNDARY_FRAME_FRACTION, p);
    ConditionResidual {
        operator: ConditionKind::Analytic,
        absolute,
        relative: if scale > 0.0 { absolute / scale } else { absolute },
    }
}

/// Interior-framed residual of the structural condition on a volume
/// (boundary frame in (x₁, x₃), `x2_margin` = 2 one-sided-stencil slices
/// dropped at each x₂ end).
pub fn structural_residual(f: &PhaseVolume, p: &ModelParams) -> Result<ConditionResidual, Error> {
    let sf = apply_s(f, p)?;
    let absolute = sf.interior_norm_weighted(tol::BOUNDARY_FRAME_FRACTION, 2, p);
    let scale = f.interior_norm_weighted(tol::BOUNDARY_FRAME_FRACTION, 2, p);
    Ok(ConditionResidual {
        operator: ConditionKind::Structural,
        absolute,
        relative: if scale > 0.0 { absolute / scale } else { absolute },
    })
}

/// Cauchy–Riemann residual, spectral route: evaluated as ‖𝒞_E F‖/‖F‖ on the
/// *unpeeled* slice, which is the same statement as ∂₁H + iE∂₃H = 0 for the
/// peeled H (the envelope is a pointwise factor and 𝒞_E conjugates to the
/// plain CR operator through it).
pub fn cr_residual_spectral(f: &PhaseSlice, e: f64, p: &ModelParams) -> ConditionResidual {
    let r = analytic_residual(f, e, p);
    ConditionResidual { operator: ConditionKind::CauchyRiemann, ..r }
}

/// Cauchy–Riemann residual, stencil route: local 5-point derivatives of the
/// *peeled* slice H, reported as the cancellation ratio
/// ‖∂₁H + iE∂₃H‖ / (‖∂₁H‖ + E‖∂₃H‖). Local rules are exact on polynomials
/// of degree ≤ 4 and never mix boundary growth into the interior.
pub fn cr_residual_stencil(
    h: &PhaseSlice,
    e: f64,
    p: &ModelParams,
) -> Result<ConditionResidual, Error> {
    let d1 = stencil::slice_fd_dx1(h)?;
    let d3 = stencil::slice_fd_dx3(h)?;
    let mut cr = d1.clone();
    for (o, b) in cr.values.iter_mut().zip(&d3.values) {
        *o += b * C64::new(0.0, e);
    }
    let absolute = cr.interior_norm_weighted(tol::BOUNDARY_FRAME_FRACTION, p);
    let scale = d1.interior_norm_weighted(tol::BOUNDARY_FRAME_FRACTION, p)
        + e * d3.interior_norm_weighted(tol::BOUNDARY_FRAME_FRACTION, p);
    Ok(ConditionResidual {
        operator: ConditionKind::CauchyRiemann,
        absolute,
        relative: if scale > 0.0 { absolute / scale } else { absolute },
    })
}

/// Solves a small dense complex system by Gaussian elimination with partial
/// pivoting. `a` is row-major n×n.
fn solve_dense(mut a: Vec<Vec<C64>>, mut b: Vec<C64>) -> Result<Vec<C64>, Error> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .unwrap();
        if a[pivot][col].norm() < 1e-300 {
            return Err(Error::ConfigInvalid("degenerate least-squares system".into()));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= factor * v;
            }
            let bv = b[col];
            b[row] -= factor * bv;
        }
    }
    let mut x = vec![C64::ZERO; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

/// Patch-local holomorphy diagnostic for a *peeled* slice: least-squares
/// fits a complex quadratic in (x₁, x₃) on the centred 5×5 patch, rewrites
/// it in the conjugate pair w = x₃ − iEx₁, w̄ = x₃ + iEx₁, and returns the
/// fraction of coefficient energy on monomials containing w̄. Near 0 for
/// holomorphic data, near 1 for anti-holomorphic data.
pub fn holomorphy_defect(h: &PhaseSlice, e: f64) -> Result<f64, Error> {
    if h.grid1.count < 5 || h.grid3.count < 5 {
        return Err(Error::GridMismatch("holomorphy patch needs a 5x5 grid".into()));
    }
    if !(e > 0.0 && e.is_finite()) {
        return Err(Error::ConfigInvalid(format!("squeeze must be > 0, got {e}")));
    }
    let (c1, c3) = (h.grid1.count / 2, h.grid3.count / 2);
    let (x1c, x3c) = (h.grid1.point(c1), h.grid3.point(c3));

    // 25 samples, 6 monomials 1, u, v, u², uv, v².
    let mut rows: Vec<([f64; 6], C64)> = Vec::with_capacity(25);
    for i1 in c1 - 2..=c1 + 2 {
        for i3 in c3 - 2..=c3 + 2 {
            let u = h.grid1.point(i1) - x1c;
            let v = h.grid3.point(i3) - x3c;
            rows.push(([1.0, u, v, u * u, u * v, v * v], h.at(i1, i3)));
        }
    }
    let mut gram = vec![vec![C64::ZERO; 6]; 6];
    let mut rhs = vec![C64::ZERO; 6];
    for (m, val) in &rows {
        for a in 0..6 {
            for b in 0..6 {
                gram[a][b] += m[a] * m[b];
            }
            rhs[a] += val * m[a];
        }
    }
    let c = solve_dense(gram, rhs)?;

    // u = i(w − w̄)/(2E), v = (w + w̄)/2: collect w^j w̄^k coefficients.
    let i2e = C64::new(0.0, 1.0 / (2.0 * e));
    let d_w = c[1] * i2e + c[2] * 0.5;
    let d_wb = -c[1] * i2e + c[2] * 0.5;
    let d_ww = -c[3] / (4.0 * e * e) + c[4] * C64::new(0.0, 1.0 / (4.0 * e)) + c[5] * 0.25;
    let d_wwb = c[3] / (2.0 * e * e) + c[5] * 0.5;
    let d_wbwb = -c[3] / (4.0 * e * e) - c[4] * C64::new(0.0, 1.0 / (4.0 * e)) + c[5] * 0.25;
    let holo = c[0].norm_sqr() + d_w.norm_sqr() + d_ww.norm_sqr();
    let anti = d_wb.norm_sqr() + d_wwb.norm_sqr() + d_wbwb.norm_sqr();
    let total = holo + anti;
    Ok(if total > 0.0 { anti / total } else { 0.0 })
}
