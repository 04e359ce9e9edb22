//! Uniform 1-D grids and fields sampled on them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::trapezoid_samples;

/// Uniform grid x_i = x0 + i·dx, i = 0..n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpaceGrid {
    x0: f64,
    dx: f64,
    n: usize,
}

impl SpaceGrid {
    pub fn new(x0: f64, dx: f64, n: usize) -> Result<Self> {
        if !x0.is_finite() || !dx.is_finite() || dx <= 0.0 {
            return Err(Error::Usage(format!(
                "grid needs finite x0 and dx > 0, got x0={x0}, dx={dx}"
            )));
        }
        if n < 2 {
            return Err(Error::Usage(format!("grid needs at least 2 points, got {n}")));
        }
        Ok(SpaceGrid { x0, dx, n })
    }

    /// `n` points spanning [xmin, xmax] inclusive.
    pub fn from_range(xmin: f64, xmax: f64, n: usize) -> Result<Self> {
        if n < 2 || !(xmax > xmin) {
            return Err(Error::Usage(format!(
                "range grid needs xmax > xmin and n >= 2, got [{xmin}, {xmax}], n={n}"
            )));
        }
        Self::new(xmin, (xmax - xmin) / (n - 1) as f64, n)
    }

    /// Grid on [xmin, xmax] with spacing exactly `dx`; the right end is
    /// rounded to the nearest whole number of cells.
    pub fn with_spacing(xmin: f64, xmax: f64, dx: f64) -> Result<Self> {
        if !(dx > 0.0) || !(xmax > xmin) {
            return Err(Error::Usage(format!(
                "spacing grid needs xmax > xmin and dx > 0, got [{xmin}, {xmax}], dx={dx}"
            )));
        }
        let cells = ((xmax - xmin) / dx).round() as usize;
        Self::new(xmin, dx, cells + 1)
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x_end(&self) -> f64 {
        self.point(self.n - 1)
    }

    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.point(i))
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x0 && x <= self.x_end()
    }

    /// Same grid with half the spacing over the same interval.
    pub fn refined(&self) -> SpaceGrid {
        SpaceGrid {
            x0: self.x0,
            dx: 0.5 * self.dx,
            n: 2 * self.n - 1,
        }
    }

    /// Four-point Lagrange stencil for an off-grid point: the index of the
    /// first node and its weights. `None` outside the grid.
    #[inline]
    pub(crate) fn stencil(&self, x: f64) -> Option<(usize, [f64; 4])> {
        let s = (x - self.x0) / self.dx;
        let last = (self.n - 1) as f64;
        if !(s >= 0.0 && s <= last) {
            return None;
        }
        if self.n < 4 {
            // linear fallback on tiny grids
            let i = (s.floor() as usize).min(self.n - 2);
            let u = s - i as f64;
            return Some((i, [1.0 - u, u, 0.0, 0.0]));
        }
        let cell = (s.floor() as usize).min(self.n - 2);
        let start = cell.saturating_sub(1).min(self.n - 4);
        let u = s - start as f64; // position relative to the stencil's first node
        let (a, b, c, d) = (u, u - 1.0, u - 2.0, u - 3.0);
        Some((
            start,
            [
                -b * c * d / 6.0,
                a * c * d / 2.0,
                -a * b * d / 2.0,
                a * b * c / 6.0,
            ],
        ))
    }
}

/// Real samples on a [`SpaceGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    grid: SpaceGrid,
    values: Vec<f64>,
}

impl SampledField {
    pub fn new(grid: SpaceGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Usage(format!(
                "field has {} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite field value at index {i}")));
        }
        Ok(SampledField { grid, values })
    }

    pub fn zeros(grid: SpaceGrid) -> Self {
        SampledField {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn<F: Fn(f64) -> f64>(grid: SpaceGrid, f: F) -> Self {
        SampledField {
            grid,
            values: grid.points().map(f).collect(),
        }
    }

    pub(crate) fn from_values_unchecked(grid: SpaceGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        SampledField { grid, values }
    }

    pub fn grid(&self) -> &SpaceGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Cubic interpolation inside the grid, zero outside.
    #[inline]
    pub fn sample(&self, x: f64) -> f64 {
        match self.grid.stencil(x) {
            Some((i, w)) => self.apply_stencil(i, &w),
            None => 0.0,
        }
    }

    #[inline]
    pub(crate) fn apply_stencil(&self, i: usize, w: &[f64; 4]) -> f64 {
        let v = &self.values;
        let mut acc = w[0] * v[i] + w[1] * v[i + 1];
        if w[2] != 0.0 || w[3] != 0.0 {
            acc += w[2] * v[i + 2] + w[3] * v[i + 3];
        }
        acc
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> SampledField {
        SampledField {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// a·self + b·other on a shared grid.
    pub fn combine(&self, a: f64, other: &SampledField, b: f64) -> Result<SampledField> {
        self.require_same_grid(other)?;
        Ok(SampledField {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    pub fn require_same_grid(&self, other: &SampledField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Usage(format!(
                "fields live on different grids: {:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }

    /// Discrete L² norm by the trapezoid rule.
    pub fn l2_norm(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        trapezoid_samples(&sq, self.grid.dx).sqrt()
    }

    /// L² norm restricted to grid points inside [a, b].
    pub fn l2_norm_on(&self, a: f64, b: f64) -> f64 {
        let sq: Vec<f64> = self
            .grid
            .points()
            .zip(&self.values)
            .filter(|(x, _)| *x >= a && *x <= b)
            .map(|(_, v)| v * v)
            .collect();
        trapezoid_samples(&sq, self.grid.dx).sqrt()
    }

    /// Spatial derivative: second-order central differences inside, second-order
    /// one-sided stencils at the two ends.
    pub fn derivative(&self) -> SampledField {
        let v = &self.values;
        let n = v.len();
        let h = self.grid.dx;
        let mut d = vec![0.0; n];
        if n == 2 {
            let s = (v[1] - v[0]) / h;
            d[0] = s;
            d[1] = s;
        } else {
            d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
            d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
            for i in 1..n - 1 {
                d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
            }
        }
        SampledField {
            grid: self.grid,
            values: d,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &SampledField) -> Result<f64> {
        self.require_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// ‖self − reference‖ / ‖reference‖ over grid points in [a, b].
    pub fn rel_l2_error_on(&self, reference: &SampledField, a: f64, b: f64) -> Result<f64> {
        let diff = self.combine(1.0, reference, -1.0)?;
        let denom = reference.l2_norm_on(a, b);
        let num = diff.l2_norm_on(a, b);
        Ok(if denom == 0.0 { num } else { num / denom })
    }

    pub fn rel_l2_error(&self, reference: &SampledField) -> Result<f64> {
        self.rel_l2_error_on(reference, f64::NEG_INFINITY, f64::INFINITY)
    }
}
