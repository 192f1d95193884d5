use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 2×2 real matrix `[[alpha, beta], [gamma, delta]]` with unit determinant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sl2Matrix {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl Sl2Matrix {
    pub const IDENTITY: Sl2Matrix = Sl2Matrix { alpha: 1.0, beta: 0.0, gamma: 0.0, delta: 1.0 };

    /// Builds a matrix and rescales it to unit determinant.
    ///
    /// Fails unless the determinant is positive and all entries are finite.
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        let m = Sl2Matrix { alpha, beta, gamma, delta };
        let det = m.det();
        if !(det > 0.0 && det.is_finite()) || [alpha, beta, gamma, delta].iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("matrix has determinant {det}, expected > 0")));
        }
        Ok(m.normalized())
    }

    /// `diag(a, 1/a)`.
    pub fn diag(a: f64) -> Self {
        Sl2Matrix { alpha: a, beta: 0.0, gamma: 0.0, delta: 1.0 / a }
    }

    pub fn det(&self) -> f64 {
        self.alpha * self.delta - self.beta * self.gamma
    }

    /// Divides every entry by `sqrt(det)`; leaves exact unit-determinant matrices untouched.
    pub fn normalized(self) -> Self {
        let det = self.det();
        if det == 1.0 || !(det > 0.0) {
            return self;
        }
        let s = det.sqrt();
        Sl2Matrix { alpha: self.alpha / s, beta: self.beta / s, gamma: self.gamma / s, delta: self.delta / s }
    }

    /// Matrix product `self · rhs`, renormalized.
    pub fn mul(&self, rhs: &Sl2Matrix) -> Sl2Matrix {
        Sl2Matrix {
            alpha: self.alpha * rhs.alpha + self.beta * rhs.gamma,
            beta: self.alpha * rhs.beta + self.beta * rhs.delta,
            gamma: self.gamma * rhs.alpha + self.delta * rhs.gamma,
            delta: self.gamma * rhs.beta + self.delta * rhs.delta,
        }
        .normalized()
    }

    /// Exact inverse `[[delta, -beta], [-gamma, alpha]]`.
    pub fn inverse(&self) -> Sl2Matrix {
        Sl2Matrix { alpha: self.delta, beta: -self.beta, gamma: -self.gamma, delta: self.alpha }
    }

    pub fn is_identity(&self) -> bool {
        self.alpha == 1.0 && self.beta == 0.0 && self.gamma == 0.0 && self.delta == 1.0
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }
}

impl Default for Sl2Matrix {
    fn default() -> Self {
        Self::IDENTITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_normalizes_to_unit_determinant() {
        let m = Sl2Matrix::new(2.0, 1.0, 1.0, 2.0).unwrap();
        assert!((m.det() - 1.0).abs() < 1e-15);
        assert!((m.alpha - 2.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!(Sl2Matrix::new(1.0, 2.0, 2.0, 1.0).is_err());
        assert!(Sl2Matrix::new(f64::NAN, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn diagonal_inverse() {
        let m = Sl2Matrix::diag(2.0);
        assert_eq!(m.inverse(), Sl2Matrix::diag(0.5));
        assert!(m.mul(&m.inverse()).is_identity());
    }

    #[test]
    fn product_is_associative() {
        let a = Sl2Matrix::new(1.2, 0.3, -0.4, 0.9).unwrap();
        let b = Sl2Matrix::new(0.7, -0.2, 0.5, 1.3).unwrap();
        let c = Sl2Matrix::new(1.0, 0.6, 0.1, 1.1).unwrap();
        let l = a.mul(&b).mul(&c).entries();
        let r = a.mul(&b.mul(&c)).entries();
        for (x, y) in l.iter().zip(&r) {
            assert!((x - y).abs() < 1e-14);
        }
    }
}
