use serde::{Deserialize, Serialize};

use super::{LieGroup, ProjectiveMap, Sl2Matrix};
use super::GroupId;

/// Element of the polarized Heisenberg group H(1,ℝ).
///
/// `s` is the central coordinate normalized by the diffusivity: the heat action multiplies
/// `u` by `exp(s / ν)`, so `ln σ = s / ν`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HeisenbergPol {
    pub lambda1: f64,
    pub lambda0: f64,
    pub s: f64,
}

impl HeisenbergPol {
    pub const ZERO: HeisenbergPol = HeisenbergPol { lambda1: 0.0, lambda0: 0.0, s: 0.0 };

    /// Product `(a1,a0,a_s)·(b1,b0,b_s) = (a1+b1, a0+b0, a_s+b_s − a1·b0/2)`.
    pub fn mul(&self, rhs: &HeisenbergPol) -> HeisenbergPol {
        HeisenbergPol {
            lambda1: self.lambda1 + rhs.lambda1,
            lambda0: self.lambda0 + rhs.lambda0,
            s: self.s + rhs.s - 0.5 * self.lambda1 * rhs.lambda0,
        }
    }

    pub fn inverse(&self) -> HeisenbergPol {
        HeisenbergPol {
            lambda1: -self.lambda1,
            lambda0: -self.lambda0,
            s: -self.s - 0.5 * self.lambda1 * self.lambda0,
        }
    }

    /// `ln σ` for diffusivity `nu`.
    pub fn ln_sigma(&self, nu: f64) -> f64 {
        self.s / nu
    }

    /// Builds the element from `ln σ` at diffusivity `nu`.
    pub fn from_ln_sigma(lambda1: f64, lambda0: f64, ln_sigma: f64, nu: f64) -> Self {
        HeisenbergPol { lambda1, lambda0, s: ln_sigma * nu }
    }
}

/// The antihomomorphism `φ(A)` acting on the Heisenberg factor.
///
/// `(λ1, λ0, s) ↦ (αλ1+γλ0, βλ1+δλ0, s + ¼λ0λ1 − ¼(αλ1+γλ0)(βλ1+δλ0))`.
pub fn heat_phi(a: &Sl2Matrix, h: &HeisenbergPol) -> HeisenbergPol {
    let l1 = a.alpha * h.lambda1 + a.gamma * h.lambda0;
    let l0 = a.beta * h.lambda1 + a.delta * h.lambda0;
    HeisenbergPol { lambda1: l1, lambda0: l0, s: h.s + 0.25 * h.lambda0 * h.lambda1 - 0.25 * l1 * l0 }
}

/// Element `(A, H)` of the identity component of the heat symmetry group SL(2,ℝ) ⋉_φ H(1,ℝ).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HeatGroupElement {
    pub a: Sl2Matrix,
    pub h: HeisenbergPol,
}

impl HeatGroupElement {
    pub fn new(a: Sl2Matrix, h: HeisenbergPol) -> Self {
        HeatGroupElement { a, h }
    }

    /// Space–time part `(t, x) ↦ ((αt+β)/(γt+δ), (x+λ1 t+λ0)/(γt+δ))`.
    pub fn base_map(&self) -> ProjectiveMap {
        ProjectiveMap { a: self.a, lambda1: self.h.lambda1, lambda0: self.h.lambda0 }
    }

    /// Inverse of [`LieGroup::exp_train`] on its image (α > 0).
    ///
    /// Returns `None` when `α ≤ 0`, which the train of exponentials cannot reach.
    pub fn train_coeffs(&self) -> Option<[f64; 6]> {
        let a = self.a;
        if !(a.alpha > 0.0) {
            return None;
        }
        let e4 = a.alpha.ln();
        let e2 = a.beta / a.alpha;
        let e6 = -a.gamma / a.alpha;
        // self = (A6·A4·A2, φ(A4·A2)((e5,0,e3))·(0,e1,0)) with A4·A2 = [[a, a·e2], [0, 1/a]].
        let prefix = HeatGroupElement::exp_train(&[0.0, e2, 0.0, e4, 0.0, e6]);
        let rest = prefix.inverse().compose(self).h;
        let (ab, bb) = (a.alpha, a.beta);
        let e5 = rest.lambda1 / ab;
        let e1 = rest.lambda0 - bb * e5;
        let e3 = rest.s + 0.25 * ab * bb * e5 * e5 + 0.5 * ab * e5 * e1;
        Some([e1, e2, e3, e4, e5, e6])
    }
}

impl LieGroup for HeatGroupElement {
    const GROUP: GroupId = GroupId::Heat;

    fn identity() -> Self {
        HeatGroupElement { a: Sl2Matrix::IDENTITY, h: HeisenbergPol::ZERO }
    }

    /// `(A′, H′)·(A, H) = (A′A, φ(A)(H′)·H)`.
    fn compose(&self, rhs: &Self) -> Self {
        HeatGroupElement { a: self.a.mul(&rhs.a), h: heat_phi(&rhs.a, &self.h).mul(&rhs.h) }
    }

    /// `(A⁻¹, φ(A⁻¹)(H⁻¹))`.
    fn inverse(&self) -> Self {
        let ai = self.a.inverse();
        HeatGroupElement { a: ai, h: heat_phi(&ai, &self.h.inverse()) }
    }

    fn exp_generator(index: usize, c: f64) -> Self {
        let mut g = Self::identity();
        match index {
            1 => g.h.lambda0 = c,
            2 => g.a.beta = c,
            3 => g.h.s = c,
            4 => g.a = Sl2Matrix::diag(c.exp()),
            5 => g.h.lambda1 = c,
            6 => g.a.gamma = -c,
            _ => panic!("heat generator index {index} out of range 1..=6"),
        }
        g
    }

    fn params(&self) -> Vec<f64> {
        let mut p = self.a.entries().to_vec();
        p.extend([self.h.lambda1, self.h.lambda0, self.h.s]);
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::random_heat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn translation(l0: f64) -> HeatGroupElement {
        HeatGroupElement::new(Sl2Matrix::IDENTITY, HeisenbergPol { lambda1: 0.0, lambda0: l0, s: 0.0 })
    }

    fn close(a: &HeatGroupElement, b: &HeatGroupElement, tol: f64) -> bool {
        a.param_distance(b) <= tol
    }

    #[test]
    fn translations_add() {
        assert_eq!(translation(1.0).compose(&translation(2.0)), translation(3.0));
        assert_eq!(translation(1.0).inverse(), translation(-1.0));
    }

    #[test]
    fn diagonal_inverse() {
        let g = HeatGroupElement::new(Sl2Matrix::diag(2.0), HeisenbergPol::ZERO);
        assert_eq!(g.inverse(), HeatGroupElement::new(Sl2Matrix::diag(0.5), HeisenbergPol::ZERO));
    }

    #[test]
    fn identity_and_inverse_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let g = random_heat(&mut rng, 0.5);
            assert!(close(&HeatGroupElement::identity().compose(&g), &g, 1e-15));
            assert!(close(&g.compose(&g.inverse()), &HeatGroupElement::identity(), 1e-10));
        }
    }

    #[test]
    fn phi_is_an_antihomomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let (a, b) = (random_heat(&mut rng, 0.5).a, random_heat(&mut rng, 0.5).a);
            let h = random_heat(&mut rng, 0.5).h;
            let lhs = heat_phi(&a.mul(&b), &h);
            let rhs = heat_phi(&b, &heat_phi(&a, &h));
            assert!((lhs.lambda1 - rhs.lambda1).abs() + (lhs.lambda0 - rhs.lambda0).abs() + (lhs.s - rhs.s).abs() < 1e-10);
        }
        assert_eq!(heat_phi(&Sl2Matrix::diag(3.0), &HeisenbergPol::ZERO), HeisenbergPol::ZERO);
        let h = HeisenbergPol { lambda1: 0.3, lambda0: -0.2, s: 0.1 };
        let same = heat_phi(&Sl2Matrix::IDENTITY, &h);
        assert!((same.s - h.s).abs() < 1e-16 && same.lambda1 == h.lambda1 && same.lambda0 == h.lambda0);
    }

    #[test]
    fn single_generators_match_parameters() {
        assert_eq!(HeatGroupElement::exp_train(&[0.0; 6]), HeatGroupElement::identity());
        assert_eq!(HeatGroupElement::exp_train(&[0.7, 0.0, 0.0, 0.0, 0.0, 0.0]), translation(0.7));
        let g = HeatGroupElement::exp_train(&[0.0, 0.0, 0.0, 2f64.ln(), 0.0, 0.0]);
        assert!((g.a.alpha - 2.0).abs() < 1e-15 && (g.a.delta - 0.5).abs() < 1e-15);
        assert!((HeisenbergPol::from_ln_sigma(0.0, 0.0, 10.0 * 0.3, 0.1).s - 0.3).abs() < 1e-15);
    }

    #[test]
    fn train_coeffs_invert_exp_train() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let xi: Vec<f64> = (0..6).map(|_| rand::Rng::random_range(&mut rng, -0.5..0.5)).collect();
            let back = HeatGroupElement::exp_train(&xi).train_coeffs().unwrap();
            for (a, b) in xi.iter().zip(&back) {
                assert!((a - b).abs() < 1e-10);
            }
        }
        let flipped = HeatGroupElement::new(Sl2Matrix { alpha: -1.0, beta: 0.0, gamma: 0.0, delta: -1.0 }, HeisenbergPol::ZERO);
        assert!(flipped.train_coeffs().is_none());
    }
}
