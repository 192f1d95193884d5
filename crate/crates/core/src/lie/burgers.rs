use serde::{Deserialize, Serialize};

use super::{GroupId, LieGroup, ProjectiveMap, Sl2Matrix};

/// Element `(A, λ1, λ0)` of the Burgers symmetry group SL(2,ℝ) ⋉ (ℝ², +).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BurgersGroupElement {
    pub a: Sl2Matrix,
    pub lambda1: f64,
    pub lambda0: f64,
}

/// `(λ1, λ0) ↦ (αλ1 + γλ0, βλ1 + δλ0)`.
fn rho(a: &Sl2Matrix, l1: f64, l0: f64) -> (f64, f64) {
    (a.alpha * l1 + a.gamma * l0, a.beta * l1 + a.delta * l0)
}

impl BurgersGroupElement {
    pub fn new(a: Sl2Matrix, lambda1: f64, lambda0: f64) -> Self {
        BurgersGroupElement { a, lambda1, lambda0 }
    }

    /// Space–time part `(t, x) ↦ ((αt+β)/(γt+δ), (x+λ1 t+λ0)/(γt+δ))`.
    pub fn base_map(&self) -> ProjectiveMap {
        ProjectiveMap { a: self.a, lambda1: self.lambda1, lambda0: self.lambda0 }
    }
}

impl LieGroup for BurgersGroupElement {
    const GROUP: GroupId = GroupId::Burgers;

    fn identity() -> Self {
        BurgersGroupElement { a: Sl2Matrix::IDENTITY, lambda1: 0.0, lambda0: 0.0 }
    }

    /// `(A′, λ′)·(A, λ) = (A′A, ρ(A)(λ′) + λ)`.
    fn compose(&self, rhs: &Self) -> Self {
        let (l1, l0) = rho(&rhs.a, self.lambda1, self.lambda0);
        BurgersGroupElement { a: self.a.mul(&rhs.a), lambda1: l1 + rhs.lambda1, lambda0: l0 + rhs.lambda0 }
    }

    fn inverse(&self) -> Self {
        let ai = self.a.inverse();
        let (l1, l0) = rho(&ai, self.lambda1, self.lambda0);
        BurgersGroupElement { a: ai, lambda1: -l1, lambda0: -l0 }
    }

    fn exp_generator(index: usize, c: f64) -> Self {
        let mut g = Self::identity();
        match index {
            1 => g.lambda0 = c,
            2 => g.a.beta = c,
            3 => g.a = Sl2Matrix::diag(c.exp()),
            4 => g.lambda1 = c,
            5 => g.a.gamma = -c,
            _ => panic!("Burgers generator index {index} out of range 1..=5"),
        }
        g
    }

    fn params(&self) -> Vec<f64> {
        let mut p = self.a.entries().to_vec();
        p.extend([self.lambda1, self.lambda0]);
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::random_burgers;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn translations_add() {
        let t = |l0| BurgersGroupElement::new(Sl2Matrix::IDENTITY, 0.0, l0);
        assert_eq!(t(1.0).compose(&t(2.0)), t(3.0));
    }

    #[test]
    fn group_laws_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let (a, b, c) = (random_burgers(&mut rng, 0.5), random_burgers(&mut rng, 0.5), random_burgers(&mut rng, 0.5));
            assert!(a.compose(&b).compose(&c).param_distance(&a.compose(&b.compose(&c))) < 1e-10);
            assert!(a.compose(&a.inverse()).param_distance(&BurgersGroupElement::identity()) < 1e-10);
        }
    }

    #[test]
    fn exp_train_of_zero_is_identity() {
        assert_eq!(BurgersGroupElement::exp_train(&[0.0; 5]), BurgersGroupElement::identity());
        assert_eq!(BurgersGroupElement::exp_train(&[0.0, 0.0, 0.0, 0.3, 0.0]).lambda1, 0.3);
    }
}
