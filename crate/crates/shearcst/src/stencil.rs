//! Fourth-order five-point finite differences.
//!
//! The x₂ axis carries few slices and no periodicity, so its first
//! derivative uses classical 5-point stencils: the centred rule in the
//! interior, one-sided rules of the same order on the two nodes at each
//! end. The same table powers the local (non-spectral) in-slice derivative
//! used by the stencil variant of the holomorphy residual, where data may
//! grow towards the boundary and a global interpolant would be unusable.
//!
//! All five rules are exact on polynomials of degree ≤ 4; the unit tests
//! pin that down, which fixes every coefficient uniquely.

use crate::error::Error;
use crate::grid::{PhaseSlice, PhaseVolume};
use crate::C64;

/// Five-point first-derivative rules, in units of 1/(12h): rows are the
/// stencils for output nodes 0, 1, centre, n−2, n−1 relative to the window.
const FIRST_DERIVATIVE_5PT: [[f64; 5]; 5] = [
    [-25.0, 48.0, -36.0, 16.0, -3.0], // node 0 of the window
    [-3.0, -10.0, 18.0, -6.0, 1.0],   // node 1
    [1.0, -8.0, 0.0, 8.0, -1.0],      // centred
    [-1.0, 6.0, -18.0, 10.0, 3.0],    // node 3
    [3.0, -16.0, 36.0, -48.0, 25.0],  // node 4
];

/// For output index `i` of an axis with `n` nodes, returns the window start
/// and the stencil row to use.
#[inline]
fn window(i: usize, n: usize) -> (usize, &'static [f64; 5]) {
    if i < 2 {
        (0, &FIRST_DERIVATIVE_5PT[i])
    } else if i >= n - 2 {
        (n - 5, &FIRST_DERIVATIVE_5PT[5 - (n - i)])
    } else {
        (i - 2, &FIRST_DERIVATIVE_5PT[2])
    }
}

/// First derivative along a strided axis of packed complex data.
fn differentiate_axis(
    values: &[C64],
    n_axis: usize,
    stride: usize,
    offset: usize,
    h: f64,
) -> Vec<C64> {
    let inv = 1.0 / (12.0 * h);
    (0..n_axis)
        .map(|i| {
            let (start, row) = window(i, n_axis);
            let mut acc = C64::ZERO;
            for (j, &c) in row.iter().enumerate() {
                if c != 0.0 {
                    acc += values[offset + (start + j) * stride] * c;
                }
            }
            acc * inv
        })
        .collect()
}

/// ∂/∂x₂ of a volume via the 5-point table across slices.
/// Needs at least 5 slices.
pub(crate) fn volume_dx2(f: &PhaseVolume) -> Result<PhaseVolume, Error> {
    let n2 = f.len();
    if n2 < 5 {
        return Err(Error::InsufficientSlices { needed: 5, got: n2 });
    }
    let h = f.grid2.step;
    let per_slice = f.grid1.count * f.grid3.count;
    let slices = crate::parallel::map_indexed(n2, |i2| {
        let (start, row) = window(i2, n2);
        let inv = 1.0 / (12.0 * h);
        let mut out = vec![C64::ZERO; per_slice];
        for (j, &c) in row.iter().enumerate() {
            if c != 0.0 {
                let src = &f.slices[start + j];
                for (o, s) in out.iter_mut().zip(src) {
                    *o += s * c;
                }
            }
        }
        for o in out.iter_mut() {
            *o *= inv;
        }
        out
    });
    Ok(f.with_slices(slices))
}

/// Local (finite-difference) ∂/∂x₁ of a slice. Unlike the spectral version
/// this sees only a 5-point neighbourhood, so boundary growth does not
/// pollute the interior; it is exact on polynomials of degree ≤ 4.
pub(crate) fn slice_fd_dx1(f: &PhaseSlice) -> Result<PhaseSlice, Error> {
    let (n1, n3) = (f.grid1.count, f.grid3.count);
    if n1 < 5 {
        return Err(Error::GridMismatch(format!("5-point stencil needs >= 5 x1 nodes, got {n1}")));
    }
    let cols = crate::parallel::map_indexed(n3, |i3| {
        differentiate_axis(&f.values, n1, n3, i3, f.grid1.step)
    });
    let mut values = vec![C64::ZERO; n1 * n3];
    for (i3, col) in cols.iter().enumerate() {
        for (i1, v) in col.iter().enumerate() {
            values[i1 * n3 + i3] = *v;
        }
    }
    Ok(PhaseSlice { grid1: f.grid1, grid3: f.grid3, x2: f.x2, values })
}

/// Local (finite-difference) ∂/∂x₃ of a slice; see [`slice_fd_dx1`].
pub(crate) fn slice_fd_dx3(f: &PhaseSlice) -> Result<PhaseSlice, Error> {
    let (n1, n3) = (f.grid1.count, f.grid3.count);
    if n3 < 5 {
        return Err(Error::GridMismatch(format!("5-point stencil needs >= 5 x3 nodes, got {n3}")));
    }
    let rows = crate::parallel::map_indexed(n1, |i1| {
        differentiate_axis(&f.values, n3, 1, i1 * n3, f.grid3.step)
    });
    Ok(PhaseSlice { grid1: f.grid1, grid3: f.grid3, x2: f.x2, values: rows.concat() })
}

/// First derivative of scalar samples on a uniform axis (used for the time
/// direction in the evolution residual checks).
pub fn differentiate_samples(values: &[C64], h: f64) -> Vec<C64> {
    differentiate_axis(values, values.len(), 1, 0, h)
}
