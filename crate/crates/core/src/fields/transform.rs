use super::{Field1D, Field2D};
use crate::error::{Error, Result};
use crate::jet::heat_u_factor;
use crate::lie::{AceGroupElement, BurgersGroupElement, HeatGroupElement, ProjectiveMap};

const MIN_LENGTH: f64 = 1e-9;

/// Largest variation across the domain of the `x`-dependent part of a transformed field for which
/// the periodic flag is kept.
pub const PERIODIC_TOL: f64 = 1e-10;

/// Applies the base map at the field's time slice and assembles the transformed field.
///
/// At fixed `t` the map `x ↦ (x + λ1 t + λ0)/(γt + δ)` is affine, so the images of a uniform
/// grid form a uniform grid over the transformed interval; samples are reported on it directly
/// (in reverse order when `γt + δ < 0`).
fn transform_1d(map: &ProjectiveMap, f: &Field1D, periodic: bool, u_map: impl Fn(f64, f64) -> Result<f64>) -> Result<Field1D> {
    let t = f.time;
    let den = map.checked_denominator(t)?;
    let t_new = map.map_time(t)?;
    let n = f.len();
    let shift = map.lambda1 * t + map.lambda0;
    let mut xs = Vec::with_capacity(n);
    let mut us = Vec::with_capacity(n);
    for (i, &u) in f.values.iter().enumerate() {
        let x = f.x(i);
        xs.push((x + shift) / den);
        us.push(u_map(x, u)?);
    }
    if den < 0.0 {
        xs.reverse();
        us.reverse();
    }
    let (lo, hi) = (xs[0], xs[n - 1]);
    if !(hi - lo >= MIN_LENGTH) {
        return Err(Error::DegenerateDomain(hi - lo));
    }
    Field1D::new(lo, hi, us, t_new, periodic)
}

/// Heat symmetry acting on a whole field at its time slice.
///
/// At fixed `t` the spatial map is affine, so periodicity survives exactly when the `u`-factor
/// does not depend on `x` (`γ = 0`, `λ1 = 0`). The flag is kept when the exponent of the factor
/// varies by at most [`PERIODIC_TOL`] over the domain.
pub fn transform_ic_heat(g: &HeatGroupElement, nu: f64, f: &Field1D) -> Result<Field1D> {
    let a = g.a;
    let t = f.time;
    let den = (a.gamma * t + a.delta).abs();
    let shift = g.h.lambda1 * t + g.h.lambda0;
    let reach = (f.x_lo + shift).abs().max((f.x_hi + shift).abs());
    let variation = a.gamma.abs() * reach * reach / (4.0 * nu * den) + g.h.lambda1.abs() * f.length() / (2.0 * nu);
    let periodic = f.periodic && variation <= PERIODIC_TOL;
    transform_1d(&g.base_map(), f, periodic, |x, u| Ok(heat_u_factor(g, nu, f.time, x)? * u))
}

/// Burgers symmetry acting on a whole field: `ũ = (γt+δ)u − γx + λ1δ − λ0γ` at each node.
///
/// Periodicity survives when `γ = 0`; the flag is kept while `|γ|·L ≤` [`PERIODIC_TOL`].
pub fn transform_ic_burgers(g: &BurgersGroupElement, f: &Field1D) -> Result<Field1D> {
    let a = g.a;
    let periodic = f.periodic && a.gamma.abs() * f.length() <= PERIODIC_TOL;
    let t = f.time;
    let den = a.gamma * t + a.delta;
    let offset = g.lambda1 * a.delta - g.lambda0 * a.gamma;
    transform_1d(&g.base_map(), f, periodic, |x, u| Ok(den * u - a.gamma * x + offset))
}

fn near_integer(v: f64, tol: f64) -> Option<i64> {
    let r = v.round();
    ((v - r).abs() <= tol).then_some(r as i64)
}

/// Allen–Cahn symmetry acting on a periodic field: `ũ(q) = u(R⁻¹(q − τ))`, time shifted.
///
/// Quarter turns combined with whole-cell translations are exact index permutations;
/// every other element is resampled bilinearly with periodic wrap.
pub fn transform_ic_ace(g: &AceGroupElement, f: &Field2D) -> Field2D {
    let rigid = g.rigid;
    let time = f.time + g.t_shift;
    let quarter = if f.nx == f.ny { rigid.quarter_turns(1e-12) } else if rigid.theta == 0.0 { Some(0) } else { None };
    let sx = near_integer(rigid.tx * f.nx as f64, 1e-9);
    let sy = near_integer(rigid.ty * f.ny as f64, 1e-9);
    if let (Some(k), Some(sx), Some(sy)) = (quarter, sx, sy) {
        let rotated = if k == 0 { f.clone() } else { f.rotated_quarter(k) };
        let mut out = rotated.shifted(sx.rem_euclid(f.nx as i64) as usize, sy.rem_euclid(f.ny as i64) as usize);
        out.time = time;
        return out;
    }
    let inv = rigid.inverse();
    let mut values = Vec::with_capacity(f.values.len());
    for j in 0..f.ny {
        for i in 0..f.nx {
            let (x, y) = inv.apply(i as f64 / f.nx as f64, j as f64 / f.ny as f64);
            values.push(f.interpolate(x, y));
        }
    }
    Field2D { nx: f.nx, ny: f.ny, values, time, periodic: f.periodic }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::{burgers_act_point, heat_act_point, JetPoint};
    use crate::lie::{LieGroup, Se2Element};
    use std::f64::consts::{FRAC_PI_2, TAU};

    const NU: f64 = 0.1;

    fn sine() -> Field1D {
        Field1D::from_fn(0.0, TAU, 129, 0.0, true, |x| x.sin() + 0.3 * (2.0 * x).cos()).unwrap()
    }

    #[test]
    fn identity_is_bitwise() {
        let f = sine();
        assert_eq!(transform_ic_heat(&HeatGroupElement::identity(), NU, &f).unwrap(), f);
        assert_eq!(transform_ic_burgers(&BurgersGroupElement::identity(), &f).unwrap(), f);
    }

    #[test]
    fn heat_scaling_keeps_the_grid() {
        let f = sine();
        let g = HeatGroupElement::exp_train(&[0.0, 0.0, 0.05, 0.0, 0.0, 0.0]);
        let out = transform_ic_heat(&g, NU, &f).unwrap();
        assert!(out.periodic && out.same_grid(&f, 0.0));
        for (a, b) in out.values.iter().zip(&f.values) {
            assert!((a - 0.5f64.exp() * b).abs() < 1e-14);
        }
    }

    #[test]
    fn nodes_match_the_pointwise_action() {
        let f = Field1D { time: 0.3, ..sine() };
        let g = HeatGroupElement::exp_train(&[0.2, -0.1, 0.03, 0.15, -0.05, 0.1]);
        let out = transform_ic_heat(&g, NU, &f).unwrap();
        assert!(!out.periodic);
        for i in 0..f.len() {
            let p = heat_act_point(&g, NU, &JetPoint::new(f.time, f.x(i), f.values[i])).unwrap();
            assert!((out.interpolate(p.x) - p.u).abs() < 1e-10 * p.u.abs().max(1.0));
            assert!((out.time - p.t).abs() < 1e-15);
        }
        let h = BurgersGroupElement::exp_train(&[0.2, -0.1, 0.1, 0.3, -0.2]);
        let out = transform_ic_burgers(&h, &f).unwrap();
        for i in 0..f.len() {
            let p = burgers_act_point(&h, &JetPoint::new(f.time, f.x(i), f.values[i])).unwrap();
            assert!((out.interpolate(p.x) - p.u).abs() < 1e-10);
        }
    }

    #[test]
    fn galilean_boost_shifts_values() {
        let f = sine();
        let g = BurgersGroupElement::exp_train(&[0.0, 0.0, 0.0, 0.4, 0.0]);
        let out = transform_ic_burgers(&g, &f).unwrap();
        assert!(out.periodic && out.same_grid(&f, 0.0));
        for (a, b) in out.values.iter().zip(&f.values) {
            assert!((a - b - 0.4).abs() < 1e-15);
        }
    }

    #[test]
    fn round_trip_restores_the_field() {
        let f = Field1D { time: 0.2, ..sine() };
        let g = HeatGroupElement::exp_train(&[0.3, -0.2, 0.1, 0.25, -0.3, 0.2]);
        let back = transform_ic_heat(&g.inverse(), NU, &transform_ic_heat(&g, NU, &f).unwrap()).unwrap();
        assert!(back.same_grid(&f, 1e-12));
        for (a, b) in back.values.iter().zip(&f.values) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn ace_quarter_turns_and_shifts_are_exact() {
        let f = Field2D::from_fn(16, 16, 0.0, |x, y| (TAU * x).sin() + (TAU * 2.0 * y).cos() * x).unwrap();
        let quarter = AceGroupElement::new(0.0, Se2Element::rotation(FRAC_PI_2));
        let four = (0..4).fold(f.clone(), |g, _| transform_ic_ace(&quarter, &g));
        assert_eq!(four.values, f.values);
        let cell = AceGroupElement::new(0.0, Se2Element::translation(1.0 / 16.0, 0.0));
        assert_eq!(transform_ic_ace(&cell, &f).values, f.shifted(1, 0).values);
        let smooth = Field2D::from_fn(128, 128, 0.0, |x, y| (TAU * x).sin() * (TAU * y).cos()).unwrap();
        let small = AceGroupElement::new(0.0, Se2Element::rotation(0.05));
        let back = transform_ic_ace(&small.inverse(), &transform_ic_ace(&small, &smooth));
        let interior = |k: usize| (13..115).contains(&(k % 128)) && (13..115).contains(&(k / 128));
        let (num, den) = (0..128 * 128).filter(|&k| interior(k)).fold((0.0, 0.0), |(n, d), k| {
            (n + (back.values[k] - smooth.values[k]).powi(2), d + smooth.values[k].powi(2))
        });
        let err = (num / den).sqrt();
        assert!(err < 1e-3, "{err}");
    }
}
