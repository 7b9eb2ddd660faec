//! FFT-backed spectral calculus on lines, slices, and volumes.
//!
//! Derivatives along x₁ and x₃ use the trigonometric interpolant: forward
//! FFT, multiply bin m by (2πi·m/(NΔ))^order over the signed mode set
//! m ∈ {−N/2, …, N/2−1}, inverse FFT (÷N). For odd orders the Nyquist bin
//! is zeroed, the usual symmetric choice; data reaching the Nyquist mode
//! violates the decay preconditions anyway.
//!
//! The two scaled transforms are the exact kernels of the analysis and
//! synthesis sums of the coherent-state pipeline on *dual* grids
//! (Δx₃ = 1/(ħ₄NΔy), both lattices centred with integer origin/step):
//!
//! ```text
//! line_to_dual:  G(x₃ₖ) = Δy · Σ_n g(y_n) e^{2πi ħ₄ y_n x₃ₖ}
//! dual_to_line:  S(t_n) =      Σ_k F(x₃ₖ) e^{−2πi ħ₄ x₃ₖ t_n}
//! ```
//!
//! Both reduce to one unnormalized FFT plus an exact index/phase shuffle,
//! so the pipeline built from them is unitary to rounding.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::{Fft, FftDirection, FftPlanner};

use crate::grid::{PhaseSlice, PhaseVolume};
use crate::C64;

/// Plans a length-`n` FFT. `rustfft` transforms are unnormalized in both
/// directions; callers account for the 1/N where needed.
pub(crate) fn plan(n: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    FftPlanner::new().plan_fft(n, direction)
}

/// Signed mode index of bin `k` in an N-point FFT: k for k < N/2, k−N after.
#[inline]
fn signed_mode(k: usize, n: usize) -> i64 {
    if k < n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Spectral derivative of order `order` for a line sampled with spacing
/// `step` (cyclic model; exact on the grid's band-limited interpolant).
pub fn spectral_derivative(values: &[C64], step: f64, order: u32) -> Vec<C64> {
    let n = values.len();
    let fwd = plan(n, FftDirection::Forward);
    let inv = plan(n, FftDirection::Inverse);
    derivative_with(&fwd, &inv, values, step, order)
}

/// Same as [`spectral_derivative`] with caller-provided plans (hot loops).
pub(crate) fn derivative_with(
    fwd: &Arc<dyn Fft<f64>>,
    inv: &Arc<dyn Fft<f64>>,
    values: &[C64],
    step: f64,
    order: u32,
) -> Vec<C64> {
    let n = values.len();
    let mut buf = values.to_vec();
    fwd.process(&mut buf);
    let scale = 1.0 / n as f64;
    for (k, v) in buf.iter_mut().enumerate() {
        let m = signed_mode(k, n);
        if order % 2 == 1 && n % 2 == 0 && m == -(n as i64) / 2 {
            *v = C64::ZERO;
            continue;
        }
        let nu = m as f64 / (n as f64 * step);
        *v *= C64::new(0.0, 2.0 * PI * nu).powu(order) * scale;
    }
    inv.process(&mut buf);
    buf
}

/// Analysis kernel: `Δy·Σ_n g_n e^{2πi ħ₄ y_n x₃ₖ}` on the centred dual
/// grid, where the line grid origin is `q` steps (q = origin/Δy ∈ ℤ).
/// Exact restatement: one unnormalized inverse FFT of `g_n(−1)^n` followed
/// by the phase Δy·e^{2πi q(k−N/2)/N}.
pub(crate) fn line_to_dual(g: &[C64], q: i64, step: f64) -> Vec<C64> {
    let n = g.len();
    let mut buf: Vec<C64> = g
        .iter()
        .enumerate()
        .map(|(j, v)| if j % 2 == 1 { -v } else { *v })
        .collect();
    plan(n, FftDirection::Inverse).process(&mut buf);
    let half = n as i64 / 2;
    for (k, v) in buf.iter_mut().enumerate() {
        let angle = 2.0 * PI * q as f64 * (k as i64 - half) as f64 / n as f64;
        *v *= C64::from_polar(step, angle);
    }
    buf
}

/// Synthesis kernel: `Σ_k F_k e^{−2πi ħ₄ x₃ₖ t_n}` for every point t_n of
/// the line grid (origin `q` steps). Exact restatement: one unnormalized
/// forward FFT, read out at bin (q+n) mod N with sign (−1)^{q+n}.
pub(crate) fn dual_to_line(f_row: &[C64], q: i64) -> Vec<C64> {
    let n = f_row.len();
    let mut buf = f_row.to_vec();
    plan(n, FftDirection::Forward).process(&mut buf);
    (0..n)
        .map(|j| {
            let idx = (q + j as i64).rem_euclid(n as i64) as usize;
            if (q + j as i64).rem_euclid(2) == 0 {
                buf[idx]
            } else {
                -buf[idx]
            }
        })
        .collect()
}

/// Spectral ∂^order/∂x₃ of a slice (rows are contiguous in x₃).
pub fn slice_dx3(f: &PhaseSlice, order: u32) -> PhaseSlice {
    let n3 = f.grid3.count;
    let fwd = plan(n3, FftDirection::Forward);
    let inv = plan(n3, FftDirection::Inverse);
    let rows = crate::parallel::map_indexed(f.grid1.count, |i1| {
        derivative_with(&fwd, &inv, &f.values[i1 * n3..(i1 + 1) * n3], f.grid3.step, order)
    });
    PhaseSlice { grid1: f.grid1, grid3: f.grid3, x2: f.x2, values: rows.concat() }
}

/// Spectral ∂^order/∂x₁ of a slice (columns, stride N₃).
pub fn slice_dx1(f: &PhaseSlice, order: u32) -> PhaseSlice {
    let n1 = f.grid1.count;
    let n3 = f.grid3.count;
    let fwd = plan(n1, FftDirection::Forward);
    let inv = plan(n1, FftDirection::Inverse);
    let cols = crate::parallel::map_indexed(n3, |i3| {
        let col: Vec<C64> = (0..n1).map(|i1| f.values[i1 * n3 + i3]).collect();
        derivative_with(&fwd, &inv, &col, f.grid1.step, order)
    });
    let mut values = vec![C64::ZERO; n1 * n3];
    for (i3, col) in cols.iter().enumerate() {
        for (i1, v) in col.iter().enumerate() {
            values[i1 * n3 + i3] = *v;
        }
    }
    PhaseSlice { grid1: f.grid1, grid3: f.grid3, x2: f.x2, values }
}

/// Mixed spectral derivative ∂^o1_{x₁} ∂^o3_{x₃} of a slice.
pub fn slice_dx1_dx3(f: &PhaseSlice, o1: u32, o3: u32) -> PhaseSlice {
    match (o1, o3) {
        (0, 0) => f.clone(),
        (0, _) => slice_dx3(f, o3),
        (_, 0) => slice_dx1(f, o1),
        _ => slice_dx3(&slice_dx1(f, o1), o3),
    }
}

/// Mixed spectral derivative applied slice-by-slice over a volume.
pub fn volume_dx1_dx3(f: &PhaseVolume, o1: u32, o3: u32) -> PhaseVolume {
    let slices = crate::parallel::map_indexed(f.len(), |i2| {
        let s = f.slice(i2);
        slice_dx1_dx3(&s, o1, o3).values
    });
    f.with_slices(slices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::UniformGrid;
    use crate::tol;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn derivative_is_exact_on_grid_modes() {
        // e^{2πiνy} with ν on the grid's mode lattice differentiates exactly.
        let g = UniformGrid::centered(0.125, 64).unwrap();
        let nu = 3.0 / (64.0 * 0.125); // mode m = 3
        let f: Vec<C64> = g.points().iter().map(|&y| c(0.0, 2.0 * PI * nu * y).exp()).collect();
        let d = spectral_derivative(&f, g.step, 1);
        for (k, y) in g.points().iter().enumerate() {
            let want = c(0.0, 2.0 * PI * nu) * c(0.0, 2.0 * PI * nu * y).exp();
            assert!((d[k] - want).norm() < tol::ROUNDING_SLACK, "bin {k}");
        }
    }

    #[test]
    fn derivative_matches_analytic_gaussian() {
        let g = UniformGrid::centered(0.125, 128).unwrap();
        let f: Vec<C64> = g.points().iter().map(|&y| c((-PI * y * y).exp(), 0.0)).collect();
        let d1 = spectral_derivative(&f, g.step, 1);
        let d2 = spectral_derivative(&f, g.step, 2);
        for (k, &y) in g.points().iter().enumerate() {
            let e = (-PI * y * y).exp();
            let want1 = -2.0 * PI * y * e;
            let want2 = (4.0 * PI * PI * y * y - 2.0 * PI) * e;
            assert!((d1[k].re - want1).abs() < 1e-10 && d1[k].im.abs() < 1e-10);
            assert!((d2[k].re - want2).abs() < 1e-9 && d2[k].im.abs() < 1e-9);
        }
    }

    #[test]
    fn scaled_transforms_match_direct_sums() {
        let hbar4 = 1.0;
        let y = UniformGrid::centered(0.125, 32).unwrap();
        let x3 = y.dual(hbar4).unwrap();
        let q = y.origin_in_steps().unwrap();
        let g: Vec<C64> = y
            .points()
            .iter()
            .map(|&t| c((-PI * t * t).exp() * (1.0 + t), 0.3 * t))
            .collect();

        let fast = line_to_dual(&g, q, y.step);
        for (k, &xk) in x3.points().iter().enumerate() {
            let direct: C64 = y
                .points()
                .iter()
                .zip(&g)
                .map(|(&yn, &gn)| gn * c(0.0, 2.0 * PI * hbar4 * yn * xk).exp())
                .sum::<C64>()
                * y.step;
            assert!((fast[k] - direct).norm() < 1e-12, "analysis bin {k}");
        }

        let back = dual_to_line(&fast, q);
        for (j, &tj) in y.points().iter().enumerate() {
            let direct: C64 = x3
                .points()
                .iter()
                .zip(&fast)
                .map(|(&xk, &fk)| fk * c(0.0, -2.0 * PI * hbar4 * xk * tj).exp())
                .sum();
            assert!((back[j] - direct).norm() < 1e-11, "synthesis point {j}");
        }

        // Round trip: Σ_k over the dual grid resolves the discrete delta,
        // so synthesis ∘ analysis = N·Δy = 1/(ħ₄·Δx₃) times the identity.
        let roundtrip_scale = y.count as f64 * y.step;
        for (j, (&gj, bj)) in g.iter().zip(&back).enumerate() {
            assert!((bj - gj * roundtrip_scale).norm() < 1e-11, "roundtrip point {j}");
        }
    }

    #[test]
    fn slice_derivatives_act_on_the_right_axis() {
        // Δ = 1/8 puts the Nyquist frequency at 4, where the unit Gaussian's
        // spectrum is ~e^{−16π}; a coarser grid would alias at ~1e−5.
        let g1 = UniformGrid::centered(0.125, 64).unwrap();
        let g3 = UniformGrid::centered(0.125, 64).unwrap();
        let s = PhaseSlice::sample(g1, g3, 0.0, |x1, x3| {
            c((-PI * (x1 * x1 + x3 * x3)).exp(), 0.0)
        })
        .unwrap();
        let d1 = slice_dx1(&s, 1);
        let d3 = slice_dx3(&s, 1);
        for i1 in 0..g1.count {
            for i3 in 0..g3.count {
                let (x1, x3) = (g1.point(i1), g3.point(i3));
                let e = (-PI * (x1 * x1 + x3 * x3)).exp();
                assert!((d1.at(i1, i3).re + 2.0 * PI * x1 * e).abs() < 1e-9);
                assert!((d3.at(i1, i3).re + 2.0 * PI * x3 * e).abs() < 1e-9);
            }
        }
        // Mixed derivative commutes.
        let d13 = slice_dx1_dx3(&s, 1, 1);
        let d31 = slice_dx1(&slice_dx3(&s, 1), 1);
        for (a, b) in d13.values.iter().zip(&d31.values) {
            assert!((a - b).norm() < tol::ROUNDING_SLACK);
        }
    }
}
