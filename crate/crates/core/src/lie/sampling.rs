use rand::Rng;

use super::{AceGroupElement, BurgersGroupElement, HeatGroupElement, HeisenbergPol, Se2Element, Sl2Matrix, So2Element};

/// `α = 1 + U, β = U, γ = U, δ = (1 + βγ)/α` with `U ~ U[−scale, scale]` (requires `scale < 1`).
pub fn random_sl2<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Sl2Matrix {
    let alpha = 1.0 + rng.random_range(-scale..=scale);
    let beta = rng.random_range(-scale..=scale);
    let gamma = rng.random_range(-scale..=scale);
    Sl2Matrix { alpha, beta, gamma, delta: (1.0 + beta * gamma) / alpha }
}

/// Heat element with SL(2) part from [`random_sl2`] and `λ₁, λ₀, s ~ U[−scale, scale]`.
pub fn random_heat<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> HeatGroupElement {
    let a = random_sl2(rng, scale);
    let mut u = || rng.random_range(-scale..=scale);
    HeatGroupElement::new(a, HeisenbergPol { lambda1: u(), lambda0: u(), s: u() })
}

/// Burgers element with SL(2) part from [`random_sl2`] and `λ₁, λ₀ ~ U[−scale, scale]`.
pub fn random_burgers<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> BurgersGroupElement {
    let a = random_sl2(rng, scale);
    let mut u = || rng.random_range(-scale..=scale);
    BurgersGroupElement::new(a, u(), u())
}

/// Time shift, angle and translations uniform in `[−scale, scale]`, angle in `[−π, π]`.
pub fn random_ace<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> AceGroupElement {
    let theta = rng.random_range(-std::f64::consts::PI..=std::f64::consts::PI);
    let mut u = || rng.random_range(-scale..=scale);
    AceGroupElement::new(u(), Se2Element::new(theta, u(), u()))
}

/// Rotation by an angle uniform in `[−π, π]`.
pub fn random_so2<R: Rng + ?Sized>(rng: &mut R) -> So2Element {
    So2Element::new(rng.random_range(-std::f64::consts::PI..=std::f64::consts::PI))
}
