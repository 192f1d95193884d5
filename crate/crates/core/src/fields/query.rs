use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::ProjectiveMap;

/// Axis-aligned bounding window of the evaluation points `(x_f, t_f)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueryWindow {
    pub xf_lo: f64,
    pub xf_hi: f64,
    pub tf_lo: f64,
    pub tf_hi: f64,
}

impl QueryWindow {
    pub fn new(xf_lo: f64, xf_hi: f64, tf_lo: f64, tf_hi: f64) -> Result<Self> {
        if !(xf_lo <= xf_hi && tf_lo <= tf_hi) {
            return Err(Error::InvalidArgument("query window bounds out of order".into()));
        }
        Ok(QueryWindow { xf_lo, xf_hi, tf_lo, tf_hi })
    }
}

/// The line `x = c + m·t` in the `(t, x)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueryLine {
    pub c: f64,
    pub m: f64,
}

impl QueryLine {
    pub fn at(&self, t: f64) -> f64 {
        self.c + self.m * t
    }
}

/// Evaluation region `{(t, x) : t_lo ≤ t ≤ t_hi, left(t) ≤ x ≤ right(t)}`.
///
/// Lines map to lines under the heat and Burgers base maps and time bounds map monotonically,
/// so the region is transformed exactly and `g⁻¹·(g·q) = q` up to round-off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueryRegion {
    pub t_lo: f64,
    pub t_hi: f64,
    pub left: QueryLine,
    pub right: QueryLine,
}

impl QueryRegion {
    /// The rectangle `[x_lo, x_hi] × [t_lo, t_hi]`.
    pub fn rectangle(x_lo: f64, x_hi: f64, t_lo: f64, t_hi: f64) -> Result<Self> {
        QueryWindow::new(x_lo, x_hi, t_lo, t_hi)?;
        Ok(QueryRegion { t_lo, t_hi, left: QueryLine { c: x_lo, m: 0.0 }, right: QueryLine { c: x_hi, m: 0.0 } })
    }

    /// The four corners `(t, x)`.
    pub fn corners(&self) -> [(f64, f64); 4] {
        [
            (self.t_lo, self.left.at(self.t_lo)),
            (self.t_hi, self.left.at(self.t_hi)),
            (self.t_lo, self.right.at(self.t_lo)),
            (self.t_hi, self.right.at(self.t_hi)),
        ]
    }

    /// Bounding window; spatial extremes are attained at the corners.
    pub fn window(&self) -> QueryWindow {
        let xs = self.corners().map(|c| c.1);
        QueryWindow {
            xf_lo: xs.iter().copied().fold(f64::INFINITY, f64::min),
            xf_hi: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            tf_lo: self.t_lo,
            tf_hi: self.t_hi,
        }
    }

    /// Image under a projective space–time map.
    ///
    /// Fails with `SingularTransform` when `γt + δ` vanishes or changes sign on `[t_lo, t_hi]`.
    pub fn transform(&self, map: &ProjectiveMap) -> Result<QueryRegion> {
        let sign = map.check_interval(self.t_lo, self.t_hi)?;
        let t_lo = map.map_time(self.t_lo)?;
        let t_hi = map.map_time(self.t_hi)?;
        let (lc, lm) = map.map_line(self.left.c, self.left.m);
        let (rc, rm) = map.map_line(self.right.c, self.right.m);
        let (left, right) = if sign > 0.0 {
            (QueryLine { c: lc, m: lm }, QueryLine { c: rc, m: rm })
        } else {
            (QueryLine { c: rc, m: rm }, QueryLine { c: lc, m: lm })
        };
        Ok(QueryRegion { t_lo, t_hi, left, right })
    }
}
