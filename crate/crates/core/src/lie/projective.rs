use serde::{Deserialize, Serialize};

use super::Sl2Matrix;
use crate::error::{Error, Result};

/// Smallest admissible `|γt + δ|`; elements closer to the projective singularity are rejected.
pub const TAU_SING: f64 = 1e-6;

/// The space–time part shared by the heat and Burgers actions:
/// `(t, x) ↦ ((αt+β)/(γt+δ), (x+λ1 t+λ0)/(γt+δ))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectiveMap {
    pub a: Sl2Matrix,
    pub lambda1: f64,
    pub lambda0: f64,
}

impl ProjectiveMap {
    /// `γt + δ`.
    pub fn denominator(&self, t: f64) -> f64 {
        self.a.gamma * t + self.a.delta
    }

    /// Checked denominator at `t`.
    pub fn checked_denominator(&self, t: f64) -> Result<f64> {
        let den = self.denominator(t);
        if den.abs() < TAU_SING || !den.is_finite() {
            return Err(Error::SingularTransform(den.abs()));
        }
        Ok(den)
    }

    /// Image of a time, `(αt+β)/(γt+δ)`.
    pub fn map_time(&self, t: f64) -> Result<f64> {
        let den = self.checked_denominator(t)?;
        Ok((self.a.alpha * t + self.a.beta) / den)
    }

    /// Image of a space–time point.
    pub fn apply(&self, t: f64, x: f64) -> Result<(f64, f64)> {
        let den = self.checked_denominator(t)?;
        Ok(((self.a.alpha * t + self.a.beta) / den, (x + self.lambda1 * t + self.lambda0) / den))
    }

    /// Image of the line `x = c + m·t` as `(c′, m′)` with `x̃ = c′ + m′·t̃`.
    pub fn map_line(&self, c: f64, m: f64) -> (f64, f64) {
        let p = c + self.lambda0;
        let q = m + self.lambda1;
        (self.a.alpha * p - self.a.beta * q, -self.a.gamma * p + self.a.delta * q)
    }

    /// Checks that `γt + δ` keeps one sign with magnitude ≥ τ on `[t_lo, t_hi]`; returns that sign.
    pub fn check_interval(&self, t_lo: f64, t_hi: f64) -> Result<f64> {
        let d0 = self.checked_denominator(t_lo)?;
        let d1 = self.checked_denominator(t_hi)?;
        if d0.signum() != d1.signum() {
            return Err(Error::SingularTransform(0.0));
        }
        Ok(d0.signum())
    }
}
