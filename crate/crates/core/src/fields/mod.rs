//! Discretized fields, query regions, whole-field group actions and initial-condition generators.

mod generators;
mod io;
mod query;
mod transform;

pub use generators::{ace_ic_value, gen_ace_ic, gen_grf_ic, gen_sine_ic, grf_mode_std, AceIcParams, GrfParams, SineIcParams};
pub use io::{read_field1d_csv, read_field2d_csv, write_field1d_csv, write_field2d_csv, FieldMeta};
pub use query::{QueryLine, QueryRegion, QueryWindow};
pub use transform::{transform_ic_ace, transform_ic_burgers, transform_ic_heat, PERIODIC_TOL};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A field sampled on the uniform grid `x_i = x_lo + i·(x_hi − x_lo)/(n − 1)`, both endpoints included.
///
/// A periodic field repeats its first sample at `x_hi`; its period is `x_hi − x_lo`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field1D {
    pub x_lo: f64,
    pub x_hi: f64,
    pub values: Vec<f64>,
    pub time: f64,
    pub periodic: bool,
}

impl Field1D {
    pub fn new(x_lo: f64, x_hi: f64, values: Vec<f64>, time: f64, periodic: bool) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidArgument("a field needs at least two samples".into()));
        }
        if !(x_hi > x_lo) || !x_lo.is_finite() || !x_hi.is_finite() {
            return Err(Error::InvalidArgument(format!("invalid interval [{x_lo}, {x_hi}]")));
        }
        Ok(Field1D { x_lo, x_hi, values, time, periodic })
    }

    /// Samples `f` on `n` nodes over `[x_lo, x_hi]`.
    pub fn from_fn(x_lo: f64, x_hi: f64, n: usize, time: f64, periodic: bool, f: impl Fn(f64) -> f64) -> Result<Self> {
        let probe = Field1D::new(x_lo, x_hi, vec![0.0; n.max(2)], time, periodic)?;
        let values = (0..probe.len()).map(|i| f(probe.x(i))).collect();
        Field1D::new(x_lo, x_hi, values, time, periodic)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.x_hi - self.x_lo
    }

    pub fn dx(&self) -> f64 {
        self.length() / (self.len() - 1) as f64
    }

    /// Grid node `i`; the last node is exactly `x_hi`.
    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.len() {
            self.x_hi
        } else {
            self.x_lo + self.length() * (i as f64) / ((self.len() - 1) as f64)
        }
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.x(i)).collect()
    }

    /// Samples of one period (the duplicated endpoint dropped) for periodic fields.
    pub fn period_samples(&self) -> &[f64] {
        &self.values[..self.len() - 1]
    }

    /// Trapezoid-rule mean over `[x_lo, x_hi]`; equals the discrete periodic mean for periodic fields.
    pub fn mean(&self) -> f64 {
        let n = self.len();
        let inner: f64 = self.values[1..n - 1].iter().sum();
        (inner + 0.5 * (self.values[0] + self.values[n - 1])) / (n - 1) as f64
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Piecewise-linear interpolation, wrapping for periodic fields and clamping otherwise.
    pub fn interpolate(&self, x: f64) -> f64 {
        let n = self.len();
        let mut s = (x - self.x_lo) / self.dx();
        if self.periodic {
            s = s.rem_euclid((n - 1) as f64);
        } else {
            s = s.clamp(0.0, (n - 1) as f64);
        }
        let i = (s.floor() as usize).min(n - 2);
        let w = s - i as f64;
        (1.0 - w) * self.values[i] + w * self.values[i + 1]
    }

    /// True when both grids coincide within `tol` (absolute, in domain units).
    pub fn same_grid(&self, other: &Field1D, tol: f64) -> bool {
        self.len() == other.len() && (self.x_lo - other.x_lo).abs() <= tol && (self.x_hi - other.x_hi).abs() <= tol
    }

    /// Euclidean norm of the sample vector.
    pub fn l2(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Extremal statistics `(u, x, t)` of the zeroth-order jet of a field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JetBounds {
    pub u_min: f64,
    pub u_max: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

/// Componentwise extrema of the samples, the grid and the field time.
pub fn jet_bounds(f: &Field1D) -> JetBounds {
    JetBounds {
        u_min: f.min(),
        u_max: f.max(),
        x_min: f.x_lo.min(f.x_hi),
        x_max: f.x_hi.max(f.x_lo),
        t_min: f.time,
        t_max: f.time,
    }
}

/// A field on the periodic unit square, sampled at nodes `(i/nx, j/ny)`; `values[j·nx + i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field2D {
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
    pub time: f64,
    pub periodic: bool,
}

impl Field2D {
    pub fn new(nx: usize, ny: usize, values: Vec<f64>, time: f64, periodic: bool) -> Result<Self> {
        if nx < 2 || ny < 2 || values.len() != nx * ny {
            return Err(Error::InvalidArgument(format!("{nx}×{ny} grid with {} values", values.len())));
        }
        Ok(Field2D { nx, ny, values, time, periodic })
    }

    pub fn zeros(nx: usize, ny: usize) -> Self {
        Field2D { nx, ny, values: vec![0.0; nx * ny], time: 0.0, periodic: true }
    }

    pub fn from_fn(nx: usize, ny: usize, time: f64, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                values.push(f(i as f64 / nx as f64, j as f64 / ny as f64));
            }
        }
        Field2D::new(nx, ny, values, time, true)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    /// Periodic bilinear interpolation at `(x, y)` in domain units.
    pub fn interpolate(&self, x: f64, y: f64) -> f64 {
        let sx = (x * self.nx as f64).rem_euclid(self.nx as f64);
        let sy = (y * self.ny as f64).rem_euclid(self.ny as f64);
        let i0 = (sx.floor() as usize).min(self.nx - 1);
        let j0 = (sy.floor() as usize).min(self.ny - 1);
        let (wx, wy) = (sx - i0 as f64, sy - j0 as f64);
        let i1 = (i0 + 1) % self.nx;
        let j1 = (j0 + 1) % self.ny;
        (1.0 - wy) * ((1.0 - wx) * self.get(i0, j0) + wx * self.get(i1, j0)) + wy * ((1.0 - wx) * self.get(i0, j1) + wx * self.get(i1, j1))
    }

    pub fn l2(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Cyclic translation by whole cells: `out(i, j) = self(i − sx, j − sy)`.
    pub fn shifted(&self, sx: usize, sy: usize) -> Field2D {
        let (nx, ny) = (self.nx, self.ny);
        let mut out = vec![0.0; nx * ny];
        for j in 0..ny {
            let src_j = (j + ny - sy % ny) % ny;
            for i in 0..nx {
                let src_i = (i + nx - sx % nx) % nx;
                out[j * nx + i] = self.values[src_j * nx + src_i];
            }
        }
        Field2D { nx, ny, values: out, time: self.time, periodic: self.periodic }
    }

    /// Rotation by `k` quarter turns about the origin of the periodic square grid.
    ///
    /// `out(q) = self(R^{-k} q)`; requires a square grid.
    pub fn rotated_quarter(&self, k: u8) -> Field2D {
        assert_eq!(self.nx, self.ny, "quarter-turn rotation needs a square grid");
        let n = self.nx;
        let mut values = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                let (a, b) = match k % 4 {
                    0 => (i, j),
                    1 => (j, (n - i) % n),
                    2 => ((n - i) % n, (n - j) % n),
                    _ => ((n - j) % n, i),
                };
                values.push(self.values[b * n + a]);
            }
        }
        Field2D { nx: self.nx, ny: self.ny, values, time: self.time, periodic: self.periodic }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::quarter_turn_sources;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    #[test]
    fn rejects_bad_grids() {
        assert!(Field1D::new(0.0, 1.0, vec![1.0], 0.0, false).is_err());
        assert!(Field1D::new(1.0, 1.0, vec![1.0, 2.0], 0.0, false).is_err());
        assert!(Field2D::new(2, 2, vec![0.0; 3], 0.0, true).is_err());
    }

    #[test]
    fn jet_bounds_of_a_sine() {
        let f = Field1D::from_fn(0.0, TAU, 257, 0.0, true, |x| (2.0 * x).sin()).unwrap();
        let b = jet_bounds(&f);
        assert!((b.u_max - 1.0).abs() < 1e-3 && (b.u_min + 1.0).abs() < 1e-3);
        assert_eq!((b.x_min, b.x_max, b.t_min, b.t_max), (0.0, TAU, 0.0, 0.0));
        let c = Field1D::from_fn(0.0, 1.0, 9, 0.0, true, |_| 5.0).unwrap();
        assert_eq!((jet_bounds(&c).u_min, jet_bounds(&c).u_max), (5.0, 5.0));
        let big = Field1D::from_fn(0.0, TAU, 1025, 0.0, true, |x| 5.0 * (2.0 * x).sin()).unwrap();
        assert!((jet_bounds(&big).u_max - 5.0).abs() < 1e-3);
    }

    #[test]
    fn interpolation_wraps_for_periodic_fields() {
        let f = Field1D::new(0.0, 1.0, vec![0.0, 1.0, 2.0, 0.0], 0.0, true).unwrap();
        assert!((f.interpolate(1.0 / 6.0) - 0.5).abs() < 1e-15);
        assert!((f.interpolate(1.0 + 1.0 / 6.0) - 0.5).abs() < 1e-15);
        let g = Field1D { periodic: false, ..f.clone() };
        assert_eq!(g.interpolate(-3.0), 0.0);
        assert!((f.mean() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quarter_turns_match_index_permutation() {
        let f = Field2D::from_fn(8, 8, 0.0, |x, y| (3.0 * x + 7.0 * y * y).sin()).unwrap();
        for k in 0..4u8 {
            let expected: Vec<f64> = quarter_turn_sources(8, k).into_iter().map(|s| f.values[s]).collect();
            assert_eq!(f.rotated_quarter(k).values, expected);
        }
        let four = (0..4).fold(f.clone(), |g, _| g.rotated_quarter(1));
        assert_eq!(four.values, f.values);
    }

    #[test]
    fn one_cell_shift_is_a_cyclic_shift() {
        let f = Field2D::from_fn(4, 3, 0.0, |x, y| x + 10.0 * y).unwrap();
        let s = f.shifted(1, 0);
        for j in 0..3 {
            for i in 0..4 {
                assert_eq!(s.get(i, j), f.get((i + 3) % 4, j));
            }
        }
    }

    proptest! {
        #[test]
        fn interpolation_reproduces_nodes(vals in prop::collection::vec(-10.0f64..10.0, 3..40)) {
            let f = Field1D::new(-1.0, 2.0, vals.clone(), 0.0, false).unwrap();
            for (i, v) in vals.iter().enumerate() {
                prop_assert!((f.interpolate(f.x(i)) - v).abs() < 1e-12);
            }
        }
    }
}
