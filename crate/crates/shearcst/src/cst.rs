//! The coherent-state transform (CST), its Gaussian closed form, and the
//! adjoint reconstruction.
//!
//! For a signal f and fiducial φ on the line, the transform at fixed shear
//! coordinate x₂ is
//!
//! ```text
//! W_φf(x₁, x₂, x₃) = ⟨f, π(x₁,x₂,x₃,0)φ⟩
//!   = e^{−2πi h₂x₂} ∫ f(y) e^{2πi ħ₄ x₃ y − iπħ₄ x₂ y²} φ̄(y − x₁) dy.
//! ```
//!
//! Discretely: shift φ cyclically (x₁ on the y-lattice), multiply by the
//! x₂ chirp, and apply the scaled analysis transform to the dual x₃ grid
//! (one FFT per x₁ row). On dual grids the pipeline is exactly unitary:
//!
//! ```text
//! ħ₄ ∬ |W_φf|² dx₁ dx₃ = ‖f‖² ‖φ‖²   (per x₂ slice, independent of x₂),
//! ```
//!
//! and the adjoint [`reconstruct`] inverts it exactly up to rounding:
//! M_ψ(W_φ f) = ⟨ψ, φ⟩ f.
//!
//! For Gaussian fiducials φ_q, φ_E (unit Lebesgue norm) the transform of
//! one against the other has the closed form
//!
//! ```text
//! W(x₁,x₂,x₃) = √2 (qE)^{1/4} (ix₂+E+q)^{−1/2}
//!   · exp(−πħ₄E x₁² − 2πi h₂ x₂ − πħ₄ (x₃ − iE x₁)² / (ix₂+E+q)),
//! ```
//!
//! principal square root throughout (ix₂+E+q never crosses the negative
//! real axis, so the branch is continuous in x₂).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Diagnostic, Error};
use crate::fourier;
use crate::grid::{PhaseSlice, SampledLine, UniformGrid};
use crate::group::GroupElement;
use crate::params::{Measure, ModelParams};
use crate::{tol, C64};

/// Fiducial families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FiducialKind {
    /// φ(y) = c·e^{−πEħ₄ y²}.
    Gaussian,
    /// φ(y) = c·e^{iπaħ₄ y³/3 − πEħ₄ y² + 2πi a h₂ y}: the Gaussian deformed
    /// by the shear parameter `a` (pure phases for real `a`, so the same
    /// constant c gives unit norm; a = 0 reduces to `Gaussian` exactly).
    Generic,
}

/// A fiducial recipe: family, squeeze E, shear a, and which line measure
/// the normalization constant targets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiducialSpec {
    pub kind: FiducialKind,
    /// Squeeze parameter E > 0 (width of the Gaussian envelope).
    pub e: f64,
    /// Shear parameter (only used by [`FiducialKind::Generic`]).
    pub a: f64,
    /// Measure under which the profile is normalized to 1.
    pub normalization: Measure,
}

impl FiducialSpec {
    /// Lebesgue-normalized Gaussian fiducial of squeeze E.
    pub fn gaussian(e: f64) -> Self {
        Self { kind: FiducialKind::Gaussian, e, a: 0.0, normalization: Measure::Lebesgue }
    }

    /// Lebesgue-normalized sheared fiducial.
    pub fn generic(e: f64, a: f64) -> Self {
        Self { kind: FiducialKind::Generic, e, a, normalization: Measure::Lebesgue }
    }

    /// Same recipe normalized under `measure`.
    pub fn with_normalization(mut self, measure: Measure) -> Self {
        self.normalization = measure;
        self
    }
}

/// Samples a fiducial on `grid` with unit norm under the selected measure:
/// constant (2ħ₄E)^{1/4} for Lebesgue, (2h₂E)^{1/4} for the dimensionless
/// convention. Rejects grids whose boundary amplitude exceeds 1e−12 of the
/// peak (the decay precondition of the cyclic pipeline).
pub fn make_fiducial(
    spec: &FiducialSpec,
    grid: UniformGrid,
    p: &ModelParams,
) -> Result<SampledLine, Error> {
    p.validate()?;
    grid.validate()?;
    if !(spec.e > 0.0 && spec.e.is_finite()) {
        return Err(Error::ConfigInvalid(format!("fiducial squeeze must be > 0, got {}", spec.e)));
    }
    let c = match spec.normalization {
        Measure::Lebesgue => (2.0 * p.hbar4 * spec.e).powf(0.25),
        Measure::Dimensionless => {
            if p.h2 <= 0.0 {
                return Err(Error::ConfigInvalid(
                    "dimensionless normalization needs h2 > 0".into(),
                ));
            }
            (2.0 * p.h2 * spec.e).powf(0.25)
        }
    };
    let a = match spec.kind {
        FiducialKind::Gaussian => 0.0,
        FiducialKind::Generic => spec.a,
    };
    let line = SampledLine::sample(grid, |y| {
        let expo = C64::new(
            -PI * spec.e * p.hbar4 * y * y,
            PI * a * p.hbar4 * y * y * y / 3.0 + 2.0 * PI * a * p.h2 * y,
        );
        expo.exp() * c
    })?;
    let mass = boundary_mass(&line);
    if mass >= tol::BOUNDARY_MASS_LIMIT {
        return Err(Error::DomainTooNarrow { boundary: mass, limit: tol::BOUNDARY_MASS_LIMIT });
    }
    Ok(line)
}

/// Boundary amplitude of a sampled line relative to its peak.
pub fn boundary_mass(line: &SampledLine) -> f64 {
    let peak = line.peak();
    if peak == 0.0 {
        return 0.0;
    }
    let first = line.values.first().map_or(0.0, |v| v.norm());
    let last = line.values.last().map_or(0.0, |v| v.norm());
    first.max(last) / peak
}

/// Boundary amplitude of a slice (largest |value| on the four edge lines)
/// relative to its peak.
pub fn boundary_mass_slice(s: &PhaseSlice) -> f64 {
    let peak = s.peak();
    if peak == 0.0 {
        return 0.0;
    }
    let (n1, n3) = (s.grid1.count, s.grid3.count);
    let mut edge: f64 = 0.0;
    for i1 in 0..n1 {
        edge = edge.max(s.at(i1, 0).norm()).max(s.at(i1, n3 - 1).norm());
    }
    for i3 in 0..n3 {
        edge = edge.max(s.at(0, i3).norm()).max(s.at(n1 - 1, i3).norm());
    }
    edge / peak
}

/// Truncation check used by the verification suites: warns when a profile
/// keeps more than the permitted boundary amplitude.
pub fn check_truncation(line: &SampledLine) -> Option<Diagnostic> {
    let fraction = boundary_mass(line);
    (fraction >= tol::BOUNDARY_MASS_LIMIT)
        .then_some(Diagnostic::BoundaryMass { fraction, limit: tol::BOUNDARY_MASS_LIMIT })
}

fn cst_slice_with(
    parallel: bool,
    f: &SampledLine,
    phi: &SampledLine,
    x2: f64,
    p: &ModelParams,
) -> Result<PhaseSlice, Error> {
    p.validate()?;
    if f.grid != phi.grid {
        return Err(Error::GridMismatch("signal and fiducial must share the line grid".into()));
    }
    let grid = f.grid;
    let n = grid.count;
    let q = grid.origin_in_steps()?;
    let grid3 = grid.dual(p.hbar4)?;
    let shear_phase = C64::from_polar(1.0, -2.0 * PI * p.h2 * x2);

    // x₂ chirp on the line, shared by every row.
    let chirped: Vec<C64> = (0..n)
        .map(|j| {
            let y = grid.point(j);
            f.values[j] * C64::from_polar(1.0, -PI * p.hbar4 * x2 * y * y)
        })
        .collect();

    let row = |i: usize| -> Vec<C64> {
        let mut g = vec![C64::ZERO; n];
        for (j, slot) in g.iter_mut().enumerate() {
            let src = (j as i64 - i as i64 - q).rem_euclid(n as i64) as usize;
            *slot = chirped[j] * phi.values[src].conj();
        }
        let mut out = fourier::line_to_dual(&g, q, grid.step);
        for v in out.iter_mut() {
            *v *= shear_phase;
        }
        out
    };

    let rows = if parallel {
        crate::parallel::map_indexed(n, row)
    } else {
        crate::parallel::map_indexed_seq(n, row)
    };
    PhaseSlice::new(grid, grid3, x2, rows.concat())
}

/// Coherent-state transform of `f` against `phi` at shear coordinate `x2`.
///
/// The x₁ axis is the signal's y-lattice, the x₃ axis its dual grid.
/// Runs row-parallel under the `parallel` feature.
pub fn cst_slice(
    f: &SampledLine,
    phi: &SampledLine,
    x2: f64,
    p: &ModelParams,
) -> Result<PhaseSlice, Error> {
    cst_slice_with(true, f, phi, x2, p)
}

/// Sequential twin of [`cst_slice`] (bench baseline; identical output).
pub fn cst_slice_seq(
    f: &SampledLine,
    phi: &SampledLine,
    x2: f64,
    p: &ModelParams,
) -> Result<PhaseSlice, Error> {
    cst_slice_with(false, f, phi, x2, p)
}

/// Closed form of the transform of the Gaussian fiducial φ_q against φ_E
/// (both unit Lebesgue norm):
/// √2(qE)^{1/4}(ix₂+E+q)^{−1/2} e^{−πħ₄Ex₁² − 2πih₂x₂ − πħ₄(x₃−iEx₁)²/(ix₂+E+q)}.
pub fn cst_closed_form(q: f64, e: f64, x1: f64, x2: f64, x3: f64, p: &ModelParams) -> C64 {
    let d = C64::new(e + q, x2);
    let z = C64::new(x3, -e * x1);
    let expo = C64::new(-PI * p.hbar4 * e * x1 * x1, -2.0 * PI * p.h2 * x2)
        - z * z * (PI * p.hbar4) / d;
    expo.exp() * (2.0f64).sqrt() * (q * e).powf(0.25) / d.sqrt()
}

/// x₂-sectioned inner product ⟨u, v⟩ = Σ u·v̄·ħ₄·Δx₁·Δx₃ of two slices on
/// the same grids.
pub fn inner_product_x2(u: &PhaseSlice, v: &PhaseSlice, p: &ModelParams) -> Result<C64, Error> {
    u.same_grids(v)?;
    let w = p.hbar4 * u.grid1.step * u.grid3.step;
    let sum: C64 = u
        .values
        .iter()
        .zip(&v.values)
        .map(|(a, b)| a * b.conj())
        .sum();
    Ok(sum * w)
}

/// Adjoint of the transform: synthesizes a line from a slice,
///
/// ```text
/// M_φF(t) = ħ₄ ∬ F(x₁,x₃) [π(x₁,x₂,x₃,0)φ](t) dx₁ dx₃,
/// ```
///
/// so that M_ψ(W_φf) = ⟨ψ, φ⟩·f exactly on dual grids. The slice's x₁ grid
/// must equal the fiducial's grid and its x₃ grid must be the dual lattice.
pub fn reconstruct(f: &PhaseSlice, phi: &SampledLine, p: &ModelParams) -> Result<SampledLine, Error> {
    p.validate()?;
    if f.grid1 != phi.grid {
        return Err(Error::GridMismatch("slice x1 grid must equal the fiducial grid".into()));
    }
    if !phi.grid.is_dual_of(&f.grid3, p.hbar4) {
        return Err(Error::GridMismatch("slice x3 grid is not dual to the fiducial grid".into()));
    }
    let grid = phi.grid;
    let n = grid.count;
    let q = grid.origin_in_steps()?;
    let x2 = f.x2;

    // Per-row synthesis in x₃ (one FFT per row), then the x₁ correlation.
    let synth: Vec<Vec<C64>> = crate::parallel::map_indexed(n, |i| {
        fourier::dual_to_line(&f.values[i * n..(i + 1) * n], q)
    });
    let weight = p.hbar4 * grid.step * f.grid3.step;
    let values: Vec<C64> = crate::parallel::map_indexed(n, |j| {
        let t = grid.point(j);
        let mut acc = C64::ZERO;
        for (i, row) in synth.iter().enumerate() {
            let src = (j as i64 - i as i64 - q).rem_euclid(n as i64) as usize;
            acc += row[j] * phi.values[src];
        }
        acc * weight
            * C64::from_polar(1.0, 2.0 * PI * p.h2 * x2 + PI * p.hbar4 * x2 * t * t)
    });
    SampledLine::new(grid, values)
}

/// Evaluates the transform lifted to the full group at an on-grid point:
/// the x₄ coordinate contributes the central character only,
/// W(x₁,x₂,x₃,x₄) = e^{−2πiħ₄x₄}·W(x₁,x₂,x₃). The slice must already sit at
/// g.x₂, and (g.x₁, g.x₃) must be lattice points.
pub fn cst_lifted(f: &PhaseSlice, g: &GroupElement, p: &ModelParams) -> Result<C64, Error> {
    if (f.x2 - g.x2).abs() > crate::grid::ON_GRID_REL_TOL * (1.0 + g.x2.abs()) {
        return Err(Error::GridMismatch(format!(
            "slice sits at x2 = {}, group element at x2 = {}",
            f.x2, g.x2
        )));
    }
    let i1 = f.grid1.nearest_index(g.x1);
    let i3 = f.grid3.nearest_index(g.x3);
    if (f.grid1.point(i1) - g.x1).abs() > crate::grid::ON_GRID_REL_TOL * (1.0 + g.x1.abs()) {
        return Err(Error::OffGridShift { shift: g.x1, step: f.grid1.step });
    }
    if (f.grid3.point(i3) - g.x3).abs() > crate::grid::ON_GRID_REL_TOL * (1.0 + g.x3.abs()) {
        return Err(Error::OffGridShift { shift: g.x3, step: f.grid3.step });
    }
    Ok(f.at(i1, i3) * C64::from_polar(1.0, -2.0 * PI * p.hbar4 * g.x4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::PhaseVolume;
    use crate::rep;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn wide_grid() -> UniformGrid {
        UniformGrid::centered(0.125, 64).unwrap()
    }

    fn fine_grid() -> UniformGrid {
        UniformGrid::centered(1.0 / 16.0, 128).unwrap()
    }

    /// Random smooth decayed signal: low-degree polynomial × unit Gaussian.
    fn random_signal(grid: UniformGrid, rng: &mut impl Rng) -> SampledLine {
        let coeffs: Vec<C64> = (0..6)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        SampledLine::sample(grid, |y| {
            let poly: C64 = coeffs
                .iter()
                .rev()
                .fold(C64::ZERO, |acc, &ck| acc * y + ck);
            poly * (-PI * y * y).exp()
        })
        .unwrap()
    }

    #[test]
    fn gaussian_fiducial_matches_the_flat_profile() {
        // E = 1, ħ₄ = 1, h₂ = ½, dimensionless: constant (2·½·1)^{1/4} = 1,
        // so the samples are exactly e^{−πy²}.
        let p = ModelParams::default();
        let spec = FiducialSpec::gaussian(1.0).with_normalization(Measure::Dimensionless);
        let phi = make_fiducial(&spec, wide_grid(), &p).unwrap();
        for (j, &y) in phi.grid.points().iter().enumerate() {
            let want = (-PI * y * y).exp();
            assert!((phi.values[j] - c(want, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn fiducials_have_unit_norm_under_their_measure() {
        let p = ModelParams::default();
        for e in [0.7, 1.0, 2.0] {
            for measure in [Measure::Lebesgue, Measure::Dimensionless] {
                for kind in [FiducialKind::Gaussian, FiducialKind::Generic] {
                    let spec = FiducialSpec {
                        kind,
                        e,
                        a: if kind == FiducialKind::Generic { 0.8 } else { 0.0 },
                        normalization: measure,
                    };
                    let phi = make_fiducial(&spec, wide_grid(), &p).unwrap();
                    let n = phi.norm(measure, &p);
                    assert!((n - 1.0).abs() < 1e-9, "{kind:?} E={e} {measure:?}: norm {n}");
                }
            }
        }
    }

    #[test]
    fn generic_fiducial_with_zero_shear_is_the_gaussian() {
        let p = ModelParams::default();
        let a = make_fiducial(&FiducialSpec::gaussian(1.3), wide_grid(), &p).unwrap();
        let b = make_fiducial(&FiducialSpec::generic(1.3, 0.0), wide_grid(), &p).unwrap();
        assert_eq!(a.values, b.values);
    }

    #[test]
    fn narrow_domain_is_rejected() {
        let p = ModelParams::default();
        let narrow = UniformGrid::centered(0.125, 16).unwrap(); // span [−1, 1)
        let err = make_fiducial(&FiducialSpec::gaussian(1.0), narrow, &p);
        assert!(matches!(err, Err(Error::DomainTooNarrow { .. })));
    }

    #[test]
    fn pipeline_matches_the_gaussian_closed_form() {
        let p = ModelParams::default();
        let grid = wide_grid();
        for (q, e) in [(1.0, 1.0), (1.0, 1.5), (2.0, 0.7)] {
            let f = make_fiducial(&FiducialSpec::gaussian(q), grid, &p).unwrap();
            let phi = make_fiducial(&FiducialSpec::gaussian(e), grid, &p).unwrap();
            for x2 in [0.0, 0.25, -0.4] {
                let w = cst_slice(&f, &phi, x2, &p).unwrap();
                let mut num = 0.0;
                let mut den = 0.0;
                for i1 in 0..w.grid1.count {
                    for i3 in 0..w.grid3.count {
                        let want = cst_closed_form(
                            q,
                            e,
                            w.grid1.point(i1),
                            x2,
                            w.grid3.point(i3),
                            &p,
                        );
                        num += (w.at(i1, i3) - want).norm_sqr();
                        den += want.norm_sqr();
                    }
                }
                let rel = (num / den).sqrt();
                assert!(rel < tol::CST_CLOSED_FORM, "(q,E)=({q},{e}), x2={x2}: rel {rel:.3e}");
            }
        }
    }

    #[test]
    fn self_transform_at_the_origin_is_one() {
        let p = ModelParams::default();
        let grid = wide_grid();
        let phi = make_fiducial(&FiducialSpec::gaussian(1.0), grid, &p).unwrap();
        let w = cst_slice(&phi, &phi, 0.0, &p).unwrap();
        let i0 = w.grid1.nearest_index(0.0);
        let k0 = w.grid3.nearest_index(0.0);
        assert!((w.at(i0, k0) - c(1.0, 0.0)).norm() < 1e-9);
        assert!((cst_closed_form(1.0, 1.0, 0.0, 0.0, 0.0, &p) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn parallel_and_sequential_transforms_agree_exactly() {
        let p = ModelParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let f = random_signal(wide_grid(), &mut rng);
        let phi = make_fiducial(&FiducialSpec::gaussian(1.5), wide_grid(), &p).unwrap();
        let a = cst_slice(&f, &phi, 0.5, &p).unwrap();
        let b = cst_slice_seq(&f, &phi, 0.5, &p).unwrap();
        assert_eq!(a.values, b.values);
    }

    #[test]
    fn transform_is_an_isometry_independent_of_x2() {
        let p = ModelParams::default();
        let grid = wide_grid();
        let phi = make_fiducial(&FiducialSpec::gaussian(1.0), grid, &p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..5 {
            let f = random_signal(grid, &mut rng);
            let want = f.norm(Measure::Lebesgue, &p) * phi.norm(Measure::Lebesgue, &p);
            let mut norms = Vec::new();
            for x2 in [-1.0, -0.5, 0.0, 0.5, 1.0] {
                let w = cst_slice(&f, &phi, x2, &p).unwrap();
                norms.push(w.norm_weighted(&p));
            }
            for &n in &norms {
                assert!((n - want).abs() < tol::CST_UNITARITY * want, "{n} vs {want}");
            }
            let spread = norms.iter().cloned().fold(f64::MIN, f64::max)
                - norms.iter().cloned().fold(f64::MAX, f64::min);
            assert!(spread < tol::CST_UNITARITY * want);
        }
    }

    #[test]
    fn transform_pairs_satisfy_the_orthogonality_relation() {
        let p = ModelParams::default();
        let grid = wide_grid();
        let phi1 = make_fiducial(&FiducialSpec::gaussian(1.0), grid, &p).unwrap();
        let phi2 = make_fiducial(&FiducialSpec::gaussian(1.5), grid, &p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..5 {
            let f1 = random_signal(grid, &mut rng);
            let f2 = random_signal(grid, &mut rng);
            let want = f1.inner(&f2, Measure::Lebesgue, &p).unwrap()
                * phi1.inner(&phi2, Measure::Lebesgue, &p).unwrap().conj();
            for x2 in [-0.5, 0.25] {
                let w1 = cst_slice(&f1, &phi1, x2, &p).unwrap();
                let w2 = cst_slice(&f2, &phi2, x2, &p).unwrap();
                let got = inner_product_x2(&w1, &w2, &p).unwrap();
                assert!(
                    (got - want).norm() < tol::CST_UNITARITY * (1.0 + want.norm()),
                    "x2={x2}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn reconstruction_inverts_the_transform() {
        let p = ModelParams::default();
        let grid = wide_grid();
        let phi = make_fiducial(&FiducialSpec::gaussian(1.0), grid, &p).unwrap();
        let psi = make_fiducial(&FiducialSpec::gaussian(1.5), grid, &p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let f = random_signal(grid, &mut rng);
        for x2 in [0.0, 0.25] {
            let w = cst_slice(&f, &phi, x2, &p).unwrap();

            // Same fiducial: M_φ W_φ f = ⟨φ,φ⟩ f = f.
            let back = reconstruct(&w, &phi, &p).unwrap();
            let nf = f.norm(Measure::Lebesgue, &p);
            let err = back
                .values
                .iter()
                .zip(&f.values)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt()
                * grid.step.sqrt();
            assert!(err / nf < tol::CST_UNITARITY, "x2={x2}: {:.3e}", err / nf);

            // Different synthesis window: M_ψ W_φ f = ⟨ψ,φ⟩ f.
            let scale = psi.inner(&phi, Measure::Lebesgue, &p).unwrap();
            let back2 = reconstruct(&w, &psi, &p).unwrap();
            let err2 = back2
                .values
                .iter()
                .zip(&f.values)
                .map(|(a, b)| (a - b * scale).norm_sqr())
                .sum::<f64>()
                .sqrt()
                * grid.step.sqrt();
            assert!(err2 / nf < tol::CST_UNITARITY);
        }
    }

    #[test]
    fn reconstruction_rejects_foreign_grids() {
        let p = ModelParams::default();
        let phi = make_fiducial(&FiducialSpec::gaussian(1.0), wide_grid(), &p).unwrap();
        let other = make_fiducial(&FiducialSpec::gaussian(1.0), fine_grid(), &p).unwrap();
        let w = cst_slice(&phi, &phi, 0.0, &p).unwrap();
        assert!(matches!(reconstruct(&w, &other, &p), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn pipeline_agrees_with_trapezoid_quadrature_on_probes() {
        let p = ModelParams::default();
        let grid = wide_grid();
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let f = random_signal(grid, &mut rng);
        let phi = make_fiducial(&FiducialSpec::gaussian(1.0), grid, &p).unwrap();
        let x2 = 0.3;
        let w = cst_slice(&f, &phi, x2, &p).unwrap();
        let n = grid.count;
        // 8×8 probe points spread over the slice.
        for i1 in (4..n).step_by(8) {
            for i3 in (4..n).step_by(8) {
                let x1 = w.grid1.point(i1);
                let x3 = w.grid3.point(i3);
                let mut acc = C64::ZERO;
                for (j, &y) in grid.points().iter().enumerate() {
                    // Trapezoid weights: half at the two ends.
                    let wt = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                    let shift = y - x1;
                    let src = (grid.offset_of(shift - grid.origin).unwrap())
                        .rem_euclid(n as i64) as usize;
                    let phase = C64::from_polar(
                        1.0,
                        2.0 * PI * p.hbar4 * x3 * y - PI * p.hbar4 * x2 * y * y,
                    );
                    acc += f.values[j] * phase * phi.values[src].conj() * wt;
                }
                acc *= grid.step * C64::from_polar(1.0, -2.0 * PI * p.h2 * x2);
                assert!(
                    (acc - w.at(i1, i3)).norm() < 1e-8,
                    "probe ({i1},{i3}): {:.3e}",
                    (acc - w.at(i1, i3)).norm()
                );
            }
        }
    }

    #[test]
    fn closed_form_branch_is_continuous_in_x2() {
        let p = ModelParams::default();
        let (x1, x3) = (0.5, 0.7);
        let mut prev = cst_closed_form(1.0, 1.5, x1, -4.0, x3, &p);
        let dx = 1e-3;
        let mut x2 = -4.0 + dx;
        while x2 <= 4.0 {
            let cur = cst_closed_form(1.0, 1.5, x1, x2, x3, &p);
            // A branch flip would jump by O(|W|); the closed form is smooth,
            // so successive samples differ by O(dx).
            assert!((cur - prev).norm() < 0.05 * dx.max(1e-6) / 1e-3);
            prev = cur;
            x2 += dx;
        }
    }

    #[test]
    fn central_covariance_of_the_lifted_transform() {
        let p = ModelParams::default();
        let grid = wide_grid();
        let phi = make_fiducial(&FiducialSpec::gaussian(1.0), grid, &p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let f = random_signal(grid, &mut rng);
        let x2 = 0.5;
        let w = cst_slice(&f, &phi, x2, &p).unwrap();
        for _ in 0..20 {
            let g = GroupElement::new(
                rng.gen_range(-8..=8) as f64 * 0.125,
                x2,
                rng.gen_range(-8..=8) as f64 * 0.125,
                rng.gen_range(-2.0..2.0),
            );
            let central = GroupElement::new(0.0, 0.0, 0.0, rng.gen_range(-2.0..2.0));
            let gh = crate::group::multiply(&g, &central);
            // Central elements act by the conjugate character χ̄(h) = e^{−2πiħ₄y₄}.
            let chi = C64::from_polar(1.0, 2.0 * PI * p.hbar4 * central.x4);
            let lhs = cst_lifted(&w, &gh, &p).unwrap();
            let rhs = cst_lifted(&w, &g, &p).unwrap() * chi.conj();
            assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn transform_intertwines_the_two_actions() {
        // W_φ(π(g)f) = π̃(g)(W_φf) for g in the restricted on-grid set
        // (x₁ shifts, x₃ shifts, central directions; x₂ fixed at 0).
        let p = ModelParams::default();
        let grid = wide_grid();
        let phi = make_fiducial(&FiducialSpec::gaussian(1.0), grid, &p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let f = random_signal(grid, &mut rng);
        // Integer x₂ slices keep π̃'s slice-dependent x₃ shift on-grid.
        let x2s: Vec<f64> = vec![-2.0, -1.0, 0.0, 1.0, 2.0];
        let volume_of = |f: &SampledLine| {
            let slices: Vec<PhaseSlice> = x2s
                .iter()
                .map(|&x2| cst_slice(f, &phi, x2, &p).unwrap())
                .collect();
            PhaseVolume::from_slices(slices).unwrap()
        };
        let w = volume_of(&f);
        for _ in 0..8 {
            let g = GroupElement::new(
                rng.gen_range(-4..=4) as f64 * 0.125,
                0.0,
                rng.gen_range(-4..=4) as f64 * 0.125,
                rng.gen_range(-1.0..1.0),
            );
            let lhs = volume_of(&rep::apply_pi(&g, &f, &p).unwrap());
            let rhs = rep::apply_pi_tilde(&g, &w, &p).unwrap();
            let dev = lhs.sub(&rhs).unwrap().peak() / w.peak();
            assert!(dev < 1e-10, "intertwining broke: {dev:.3e}");
        }
    }
}
