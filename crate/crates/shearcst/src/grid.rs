//! Sample lattices and the sampled-function containers built on them.
//!
//! A [`UniformGrid`] is an arithmetic lattice origin + k·step. Line data
//! ([`SampledLine`]) lives on one grid; phase-space data lives on an
//! (x₁, x₃) product of two grids at a fixed shear coordinate x₂
//! ([`PhaseSlice`]) or on a stack of such slices over a uniform x₂ grid
//! ([`PhaseVolume`]).
//!
//! The x₃ axis of a transform image is always the *dual* of the line grid:
//! Δx₃ = 1/(ħ₄·N·Δy). Under that relation the discrete transform pipeline
//! is exactly unitary (Parseval plus cyclic shifts), which is why the
//! isometry checks in this crate hold to rounding rather than to a
//! quadrature tolerance.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::params::{Measure, ModelParams};
use crate::C64;

/// Relative slack when testing whether a ratio is an integer (shift/step,
/// origin/step, x₂ spacing uniformity). Grid arithmetic is exact for the
/// dyadic steps used in practice; 1e-9 only absorbs decimal-literal noise.
pub const ON_GRID_REL_TOL: f64 = 1e-9;

/// Uniform one-dimensional lattice `origin + k·step`, `k = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    /// Coordinate of sample 0.
    pub origin: f64,
    /// Spacing between consecutive samples (> 0).
    pub step: f64,
    /// Number of samples (≥ 2).
    pub count: usize,
}

impl UniformGrid {
    /// Builds and validates a grid.
    pub fn new(origin: f64, step: f64, count: usize) -> Result<Self, Error> {
        let g = Self { origin, step, count };
        g.validate()?;
        Ok(g)
    }

    /// Symmetric grid of `count` points with spacing `step`, origin at
    /// −(count/2)·step. With even `count` the lattice contains 0 and is the
    /// natural domain for the cyclic transforms in this crate.
    pub fn centered(step: f64, count: usize) -> Result<Self, Error> {
        Self::new(-(count as f64 / 2.0).floor() * step, step, count)
    }

    /// Checks positivity/finiteness of the fields.
    pub fn validate(&self) -> Result<(), Error> {
        if self.step > 0.0 && self.step.is_finite() && self.origin.is_finite() && self.count >= 2 {
            Ok(())
        } else {
            Err(Error::ConfigInvalid(format!(
                "grid needs finite origin, step > 0 and count >= 2, got \
                 origin={}, step={}, count={}",
                self.origin, self.step, self.count
            )))
        }
    }

    /// Coordinate of sample `k`.
    #[inline]
    pub fn point(&self, k: usize) -> f64 {
        self.origin + k as f64 * self.step
    }

    /// All sample coordinates.
    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.point(k)).collect()
    }

    /// Coordinate one past the last sample (the period of the cyclic model).
    #[inline]
    pub fn span(&self) -> f64 {
        self.count as f64 * self.step
    }

    /// The dual lattice of a transform image: Δx₃ = 1/(ħ₄·N·Δy), centred so
    /// that it contains 0. Satisfies ħ₄·N·Δy·Δx₃ = 1 exactly (up to one
    /// floating division).
    pub fn dual(&self, hbar4: f64) -> Result<UniformGrid, Error> {
        let step = 1.0 / (hbar4 * self.count as f64 * self.step);
        UniformGrid::centered(step, self.count)
    }

    /// Whether `other` can serve as the dual of `self` (same count, step
    /// product matching the dual relation to relative 1e-9).
    pub fn is_dual_of(&self, other: &UniformGrid, hbar4: f64) -> bool {
        self.count == other.count
            && (hbar4 * self.count as f64 * other.step * self.step - 1.0).abs() < ON_GRID_REL_TOL
    }

    /// Expresses `shift` in units of the step, requiring it to be an integer
    /// multiple (relative slack [`ON_GRID_REL_TOL`]).
    pub fn offset_of(&self, shift: f64) -> Result<i64, Error> {
        let ratio = shift / self.step;
        let rounded = ratio.round();
        if (ratio - rounded).abs() <= ON_GRID_REL_TOL * (1.0 + ratio.abs()) {
            Ok(rounded as i64)
        } else {
            Err(Error::OffGridShift { shift, step: self.step })
        }
    }

    /// The origin expressed in units of the step (must be an integer multiple
    /// for the cyclic shift arithmetic of the transform pipeline).
    pub fn origin_in_steps(&self) -> Result<i64, Error> {
        self.offset_of(self.origin)
    }

    /// Index of the sample nearest to `x`.
    pub fn nearest_index(&self, x: f64) -> usize {
        let k = ((x - self.origin) / self.step).round();
        k.clamp(0.0, (self.count - 1) as f64) as usize
    }
}

/// A complex-valued function sampled on one [`UniformGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledLine {
    pub grid: UniformGrid,
    pub values: Vec<C64>,
}

impl SampledLine {
    /// Wraps values, checking the length against the grid.
    pub fn new(grid: UniformGrid, values: Vec<C64>) -> Result<Self, Error> {
        grid.validate()?;
        if values.len() != grid.count {
            return Err(Error::GridMismatch(format!(
                "line carries {} values for a grid of {} samples",
                values.len(),
                grid.count
            )));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` on `grid`.
    pub fn sample(grid: UniformGrid, f: impl Fn(f64) -> C64) -> Result<Self, Error> {
        let values = (0..grid.count).map(|k| f(grid.point(k))).collect();
        Self::new(grid, values)
    }

    /// ⟨self, other⟩ = Σ u·v̄·w with the per-sample weight of `measure`.
    pub fn inner(&self, other: &SampledLine, measure: Measure, p: &ModelParams) -> Result<C64, Error> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("inner product needs matching line grids".into()));
        }
        let w = measure.weight(self.grid.step, p);
        let sum: C64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(u, v)| u * v.conj())
            .sum();
        Ok(sum * w)
    }

    /// L² norm under `measure`.
    pub fn norm(&self, measure: Measure, p: &ModelParams) -> f64 {
        let w = measure.weight(self.grid.step, p);
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * w).sqrt()
    }

    /// Largest |value| on the line.
    pub fn peak(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// A function of (x₁, x₃) at one fixed shear coordinate x₂, sampled on the
/// product of two grids. Values are row-major over x₁: index `i1·N₃ + i3`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSlice {
    pub grid1: UniformGrid,
    pub grid3: UniformGrid,
    pub x2: f64,
    pub values: Vec<C64>,
}

impl PhaseSlice {
    /// Wraps values, checking the length against the grids.
    pub fn new(grid1: UniformGrid, grid3: UniformGrid, x2: f64, values: Vec<C64>) -> Result<Self, Error> {
        grid1.validate()?;
        grid3.validate()?;
        if values.len() != grid1.count * grid3.count {
            return Err(Error::GridMismatch(format!(
                "slice carries {} values for a {}x{} grid",
                values.len(),
                grid1.count,
                grid3.count
            )));
        }
        Ok(Self { grid1, grid3, x2, values })
    }

    /// Zero-filled slice.
    pub fn zeros(grid1: UniformGrid, grid3: UniformGrid, x2: f64) -> Result<Self, Error> {
        Self::new(grid1, grid3, x2, vec![C64::ZERO; grid1.count * grid3.count])
    }

    /// Samples `f(x₁, x₃)` on the product grid.
    pub fn sample(
        grid1: UniformGrid,
        grid3: UniformGrid,
        x2: f64,
        f: impl Fn(f64, f64) -> C64 + Sync,
    ) -> Result<Self, Error> {
        grid1.validate()?;
        grid3.validate()?;
        let n3 = grid3.count;
        let rows = crate::parallel::map_indexed(grid1.count, |i1| {
            let x1 = grid1.point(i1);
            (0..n3).map(|i3| f(x1, grid3.point(i3))).collect::<Vec<C64>>()
        });
        Self::new(grid1, grid3, x2, rows.concat())
    }

    /// Value at row `i1`, column `i3`.
    #[inline]
    pub fn at(&self, i1: usize, i3: usize) -> C64 {
        self.values[i1 * self.grid3.count + i3]
    }

    /// Mutable value at row `i1`, column `i3`.
    #[inline]
    pub fn at_mut(&mut self, i1: usize, i3: usize) -> &mut C64 {
        &mut self.values[i1 * self.grid3.count + i3]
    }

    /// Applies `f(x₁, x₃, value)` pointwise, keeping the grids.
    pub fn map(&self, f: impl Fn(f64, f64, C64) -> C64 + Sync) -> PhaseSlice {
        let n3 = self.grid3.count;
        let rows = crate::parallel::map_indexed(self.grid1.count, |i1| {
            let x1 = self.grid1.point(i1);
            (0..n3)
                .map(|i3| f(x1, self.grid3.point(i3), self.at(i1, i3)))
                .collect::<Vec<C64>>()
        });
        PhaseSlice { grid1: self.grid1, grid3: self.grid3, x2: self.x2, values: rows.concat() }
    }

    /// Checks that `other` shares both grids (x₂ may differ).
    pub fn same_grids(&self, other: &PhaseSlice) -> Result<(), Error> {
        if self.grid1 == other.grid1 && self.grid3 == other.grid3 {
            Ok(())
        } else {
            Err(Error::GridMismatch("slices do not share (x1, x3) grids".into()))
        }
    }

    /// Pointwise difference (grids must match).
    pub fn sub(&self, other: &PhaseSlice) -> Result<PhaseSlice, Error> {
        self.same_grids(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(PhaseSlice { values, ..*self })
    }

    /// Squared slice norm Σ |F|²·ħ₄·Δx₁·Δx₃ (the x₂-sectioned inner product
    /// that makes the transform an isometry).
    pub fn norm_sq_weighted(&self, p: &ModelParams) -> f64 {
        let w = p.hbar4 * self.grid1.step * self.grid3.step;
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * w
    }

    /// Slice norm √(Σ |F|²·ħ₄·Δx₁·Δx₃).
    pub fn norm_weighted(&self, p: &ModelParams) -> f64 {
        self.norm_sq_weighted(p).sqrt()
    }

    /// Largest |value| on the slice.
    pub fn peak(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Norm over the interior window that drops `frame_fraction` of each
    /// axis per side — the region where stencils are centred and cyclic
    /// edges cannot contribute.
    pub fn interior_norm_weighted(&self, frame_fraction: f64, p: &ModelParams) -> f64 {
        let (lo1, hi1) = interior_range(self.grid1.count, frame_fraction);
        let (lo3, hi3) = interior_range(self.grid3.count, frame_fraction);
        let w = p.hbar4 * self.grid1.step * self.grid3.step;
        let mut acc = 0.0;
        for i1 in lo1..hi1 {
            for i3 in lo3..hi3 {
                acc += self.at(i1, i3).norm_sqr();
            }
        }
        (acc * w).sqrt()
    }
}

/// Index window keeping the inner (1 − 2·fraction) of an axis.
pub(crate) fn interior_range(count: usize, fraction: f64) -> (usize, usize) {
    let cut = (count as f64 * fraction).ceil() as usize;
    (cut, count.saturating_sub(cut).max(cut + 1).min(count))
}

/// A stack of [`PhaseSlice`]s over a strictly increasing uniform x₂ grid,
/// all sharing the same (x₁, x₃) grids.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVolume {
    pub grid1: UniformGrid,
    pub grid3: UniformGrid,
    /// The x₂ lattice; slice `k` sits at `grid2.point(k)`.
    pub grid2: UniformGrid,
    /// Per-slice value blocks, each laid out like [`PhaseSlice::values`].
    pub slices: Vec<Vec<C64>>,
}

impl PhaseVolume {
    /// Assembles a volume from slices, checking shared grids and uniform,
    /// strictly increasing x₂ spacing.
    pub fn from_slices(slices: Vec<PhaseSlice>) -> Result<Self, Error> {
        if slices.len() < 2 {
            return Err(Error::InsufficientSlices { needed: 2, got: slices.len() });
        }
        let grid1 = slices[0].grid1;
        let grid3 = slices[0].grid3;
        for s in &slices {
            if s.grid1 != grid1 || s.grid3 != grid3 {
                return Err(Error::GridMismatch("volume slices must share (x1, x3) grids".into()));
            }
        }
        let step = slices[1].x2 - slices[0].x2;
        if step <= 0.0 {
            return Err(Error::GridMismatch("x2 must be strictly increasing".into()));
        }
        for w in slices.windows(2) {
            let d = w[1].x2 - w[0].x2;
            if (d - step).abs() > ON_GRID_REL_TOL * step.abs() {
                return Err(Error::GridMismatch(format!(
                    "x2 spacing is not uniform: {} vs {}",
                    d, step
                )));
            }
        }
        let grid2 = UniformGrid { origin: slices[0].x2, step, count: slices.len() };
        Ok(Self { grid1, grid3, grid2, slices: slices.into_iter().map(|s| s.values).collect() })
    }

    /// Samples `f(x₁, x₂, x₃)` on the product of the three grids.
    pub fn sample(
        grid1: UniformGrid,
        grid3: UniformGrid,
        grid2: UniformGrid,
        f: impl Fn(f64, f64, f64) -> C64 + Sync,
    ) -> Result<Self, Error> {
        grid1.validate()?;
        grid2.validate()?;
        grid3.validate()?;
        let n3 = grid3.count;
        let slices = crate::parallel::map_indexed(grid2.count, |i2| {
            let x2 = grid2.point(i2);
            let mut block = Vec::with_capacity(grid1.count * n3);
            for i1 in 0..grid1.count {
                let x1 = grid1.point(i1);
                for i3 in 0..n3 {
                    block.push(f(x1, x2, grid3.point(i3)));
                }
            }
            block
        });
        Ok(Self { grid1, grid3, grid2, slices })
    }

    /// Number of x₂ slices.
    #[inline]
    pub fn len(&self) -> usize {
        self.slices.len()
    }

    /// Whether the volume has no slices (never true for validated volumes).
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    /// Extracts slice `k` as a standalone [`PhaseSlice`].
    pub fn slice(&self, k: usize) -> PhaseSlice {
        PhaseSlice {
            grid1: self.grid1,
            grid3: self.grid3,
            x2: self.grid2.point(k),
            values: self.slices[k].clone(),
        }
    }

    /// Index of the slice nearest to `x2` (must match to the on-grid slack).
    pub fn slice_index_at(&self, x2: f64) -> Result<usize, Error> {
        let k = self.grid2.nearest_index(x2);
        if (self.grid2.point(k) - x2).abs() <= ON_GRID_REL_TOL * (1.0 + x2.abs()) {
            Ok(k)
        } else {
            Err(Error::GridMismatch(format!("no slice at x2 = {x2}")))
        }
    }

    /// Applies `f(x₁, x₂, x₃, value)` pointwise.
    pub fn map(&self, f: impl Fn(f64, f64, f64, C64) -> C64 + Sync) -> PhaseVolume {
        let n3 = self.grid3.count;
        let slices = crate::parallel::map_indexed(self.len(), |i2| {
            let x2 = self.grid2.point(i2);
            let block = &self.slices[i2];
            let mut out = Vec::with_capacity(block.len());
            for i1 in 0..self.grid1.count {
                let x1 = self.grid1.point(i1);
                for i3 in 0..n3 {
                    out.push(f(x1, x2, self.grid3.point(i3), block[i1 * n3 + i3]));
                }
            }
            out
        });
        PhaseVolume { grid1: self.grid1, grid3: self.grid3, grid2: self.grid2, slices }
    }

    /// Checks that `other` shares all three grids.
    pub fn same_grids(&self, other: &PhaseVolume) -> Result<(), Error> {
        if self.grid1 == other.grid1 && self.grid3 == other.grid3 && self.grid2 == other.grid2 {
            Ok(())
        } else {
            Err(Error::GridMismatch("volumes do not share grids".into()))
        }
    }

    /// Pointwise difference (grids must match).
    pub fn sub(&self, other: &PhaseVolume) -> Result<PhaseVolume, Error> {
        self.same_grids(other)?;
        let slices = self
            .slices
            .iter()
            .zip(&other.slices)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        Ok(PhaseVolume { grid1: self.grid1, grid3: self.grid3, grid2: self.grid2, slices })
    }

    /// Squared slice-aggregated norm Σ_slices Σ |F|²·ħ₄·Δx₁·Δx₃.
    pub fn norm_sq_weighted(&self, p: &ModelParams) -> f64 {
        let w = p.hbar4 * self.grid1.step * self.grid3.step;
        self.slices
            .iter()
            .map(|s| s.iter().map(|v| v.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            * w
    }

    /// Slice-aggregated norm.
    pub fn norm_weighted(&self, p: &ModelParams) -> f64 {
        self.norm_sq_weighted(p).sqrt()
    }

    /// Largest |value| over all slices.
    pub fn peak(&self) -> f64 {
        self.slices
            .iter()
            .flat_map(|s| s.iter())
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Norm over the interior of each slice (frame dropped per
    /// [`PhaseSlice::interior_norm_weighted`]), skipping `x2_margin` slices
    /// at each x₂ end where one-sided stencils apply.
    pub fn interior_norm_weighted(
        &self,
        frame_fraction: f64,
        x2_margin: usize,
        p: &ModelParams,
    ) -> f64 {
        let lo2 = x2_margin.min(self.len());
        let hi2 = self.len().saturating_sub(x2_margin).max(lo2);
        let mut acc = 0.0;
        for k in lo2..hi2 {
            let s = self.slice(k).interior_norm_weighted(frame_fraction, p);
            acc += s * s;
        }
        acc.sqrt()
    }

    /// Builds a volume with the same grids from per-slice blocks.
    pub(crate) fn with_slices(&self, slices: Vec<Vec<C64>>) -> PhaseVolume {
        debug_assert_eq!(slices.len(), self.len());
        PhaseVolume { grid1: self.grid1, grid3: self.grid3, grid2: self.grid2, slices }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const fn c64(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn dual_grid_relation_is_exact() {
        let p = ModelParams::default();
        let y = UniformGrid::centered(0.125, 64).unwrap();
        let d = y.dual(p.hbar4).unwrap();
        assert_eq!(d.count, 64);
        assert!((p.hbar4 * 64.0 * y.step * d.step - 1.0).abs() < 1e-15);
        assert!(y.is_dual_of(&d, p.hbar4));
        // Centered: contains 0 exactly.
        assert_eq!(d.point(32), 0.0);
    }

    #[test]
    fn off_grid_shift_is_rejected() {
        let g = UniformGrid::centered(0.125, 16).unwrap();
        assert_eq!(g.offset_of(0.5).unwrap(), 4);
        assert_eq!(g.offset_of(-0.375).unwrap(), -3);
        assert!(matches!(g.offset_of(0.3), Err(Error::OffGridShift { .. })));
    }

    #[test]
    fn line_norm_measures_differ_by_constant_ratio() {
        let p = ModelParams { hbar4: 1.0, h2: 0.25, ..Default::default() };
        let g = UniformGrid::centered(0.25, 32).unwrap();
        let f = SampledLine::sample(g, |y| c64((-y * y).exp(), 0.0)).unwrap();
        let leb = f.norm(Measure::Lebesgue, &p);
        let dim = f.norm(Measure::Dimensionless, &p);
        // weight ratio √(ħ₄/h₂) = 2 ⟹ norms differ by √2.
        assert!((dim / leb - 2.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn volume_assembly_checks_uniform_x2() {
        let g1 = UniformGrid::centered(0.5, 8).unwrap();
        let g3 = UniformGrid::centered(0.5, 8).unwrap();
        let slice = |x2: f64| PhaseSlice::zeros(g1, g3, x2).unwrap();
        let v = PhaseVolume::from_slices(vec![slice(0.0), slice(0.25), slice(0.5)]).unwrap();
        assert_eq!(v.grid2.step, 0.25);
        assert_eq!(v.slice(2).x2, 0.5);

        let bad = PhaseVolume::from_slices(vec![slice(0.0), slice(0.25), slice(0.6)]);
        assert!(matches!(bad, Err(Error::GridMismatch(_))));
        let decreasing = PhaseVolume::from_slices(vec![slice(0.5), slice(0.0)]);
        assert!(matches!(decreasing, Err(Error::GridMismatch(_))));
    }

    #[test]
    fn slice_indexing_is_row_major() {
        let g1 = UniformGrid::new(0.0, 1.0, 2).unwrap();
        let g3 = UniformGrid::new(0.0, 1.0, 3).unwrap();
        let s = PhaseSlice::sample(g1, g3, 0.0, |x1, x3| c64(x1, x3)).unwrap();
        assert_eq!(s.at(1, 2), c64(1.0, 2.0));
        assert_eq!(s.values[1 * 3 + 2], c64(1.0, 2.0));
    }
}
