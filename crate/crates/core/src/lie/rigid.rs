use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};

use super::{GroupId, LieGroup};

/// Rigid motion of the plane, `p ↦ R(theta)·p + (tx, ty)`, with `theta` reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Se2Element {
    pub theta: f64,
    pub tx: f64,
    pub ty: f64,
}

/// Reduces an angle to `[0, 2π)`.
pub(crate) fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed difference of two angles in `(-π, π]`.
pub(crate) fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > std::f64::consts::PI {
        d - TAU
    } else {
        d
    }
}

impl Se2Element {
    pub fn new(theta: f64, tx: f64, ty: f64) -> Self {
        Se2Element { theta: reduce_angle(theta), tx, ty }
    }

    pub fn identity() -> Self {
        Se2Element::default()
    }

    pub fn rotation(theta: f64) -> Self {
        Se2Element::new(theta, 0.0, 0.0)
    }

    pub fn translation(tx: f64, ty: f64) -> Self {
        Se2Element::new(0.0, tx, ty)
    }

    /// `(cos θ, sin θ)`, snapped to exact values within 1e-14 of a multiple of π/2.
    pub fn cos_sin(&self) -> (f64, f64) {
        match self.quarter_turns(1e-14) {
            Some(0) => (1.0, 0.0),
            Some(1) => (0.0, 1.0),
            Some(2) => (-1.0, 0.0),
            Some(3) => (0.0, -1.0),
            _ => (self.theta.cos(), self.theta.sin()),
        }
    }

    /// `Some(k)` when `theta` is within `tol` of `k·π/2`.
    pub fn quarter_turns(&self, tol: f64) -> Option<u8> {
        let k = (self.theta / FRAC_PI_2).round();
        let err = angle_diff(self.theta, k * FRAC_PI_2).abs();
        (err <= tol).then_some((k as i64).rem_euclid(4) as u8)
    }

    pub fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        let (c, s) = self.cos_sin();
        (c * x - s * y + self.tx, s * x + c * y + self.ty)
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &Se2Element) -> Se2Element {
        let (tx, ty) = self.apply(rhs.tx, rhs.ty);
        Se2Element::new(self.theta + rhs.theta, tx, ty)
    }

    pub fn inverse(&self) -> Se2Element {
        let (c, s) = self.cos_sin();
        Se2Element::new(-self.theta, -(c * self.tx + s * self.ty), -(-s * self.tx + c * self.ty))
    }

    /// Homogeneous 3×3 matrix, row-major.
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        let (c, s) = self.cos_sin();
        [[c, -s, self.tx], [s, c, self.ty], [0.0, 0.0, 1.0]]
    }
}

/// Element of the Allen–Cahn symmetry group ℝ × SE(2): a time shift and a rigid motion.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AceGroupElement {
    pub t_shift: f64,
    pub rigid: Se2Element,
}

impl AceGroupElement {
    pub fn new(t_shift: f64, rigid: Se2Element) -> Self {
        AceGroupElement { t_shift, rigid }
    }
}

impl LieGroup for AceGroupElement {
    const GROUP: GroupId = GroupId::Se2;

    fn identity() -> Self {
        AceGroupElement::default()
    }

    fn compose(&self, rhs: &Self) -> Self {
        AceGroupElement { t_shift: self.t_shift + rhs.t_shift, rigid: self.rigid.compose(&rhs.rigid) }
    }

    fn inverse(&self) -> Self {
        AceGroupElement { t_shift: -self.t_shift, rigid: self.rigid.inverse() }
    }

    /// Basis `v1 = ∂t`, `v2 = ∂x`, `v3 = ∂y`, `v4 = −y∂x + x∂y`.
    fn exp_generator(index: usize, c: f64) -> Self {
        match index {
            1 => AceGroupElement { t_shift: c, rigid: Se2Element::identity() },
            2 => AceGroupElement { t_shift: 0.0, rigid: Se2Element::translation(c, 0.0) },
            3 => AceGroupElement { t_shift: 0.0, rigid: Se2Element::translation(0.0, c) },
            4 => AceGroupElement { t_shift: 0.0, rigid: Se2Element::rotation(c) },
            _ => panic!("SE(2) generator index {index} out of range 1..=4"),
        }
    }

    fn params(&self) -> Vec<f64> {
        vec![self.t_shift, self.rigid.theta, self.rigid.tx, self.rigid.ty]
    }

    fn param_distance(&self, other: &Self) -> f64 {
        let dtheta = angle_diff(self.rigid.theta, other.rigid.theta).abs();
        [
            (self.t_shift - other.t_shift).abs(),
            dtheta,
            (self.rigid.tx - other.rigid.tx).abs(),
            (self.rigid.ty - other.rigid.ty).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Planar rotation by `theta` (not reduced, so descent paths stay continuous).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct So2Element {
    pub theta: f64,
}

impl So2Element {
    pub fn new(theta: f64) -> Self {
        So2Element { theta }
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        let (s, c) = self.theta.sin_cos();
        [c * p[0] - s * p[1], s * p[0] + c * p[1]]
    }
}

impl LieGroup for So2Element {
    const GROUP: GroupId = GroupId::So2;

    fn identity() -> Self {
        So2Element { theta: 0.0 }
    }

    fn compose(&self, rhs: &Self) -> Self {
        So2Element { theta: self.theta + rhs.theta }
    }

    fn inverse(&self) -> Self {
        So2Element { theta: -self.theta }
    }

    fn exp_generator(index: usize, c: f64) -> Self {
        assert_eq!(index, 1, "SO(2) has a single generator");
        So2Element { theta: c }
    }

    fn params(&self) -> Vec<f64> {
        vec![self.theta]
    }

    fn param_distance(&self, other: &Self) -> f64 {
        angle_diff(self.theta, other.theta).abs()
    }
}
