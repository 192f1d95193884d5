//! Exact arithmetic for the heat, Burgers, SE(2) and SO(2) symmetry groups.

mod burgers;
mod heat;
mod projective;
mod rigid;
mod sampling;
mod sl2;

pub use burgers::BurgersGroupElement;
pub use heat::{heat_phi, HeatGroupElement, HeisenbergPol};
pub use projective::{ProjectiveMap, TAU_SING};
pub use rigid::{AceGroupElement, Se2Element, So2Element};
pub use sampling::{random_ace, random_burgers, random_heat, random_sl2, random_so2};
pub use sl2::Sl2Matrix;

use serde::{Deserialize, Serialize};
use std::fmt::Debug;

use crate::error::{Error, Result};

/// Identifies a symmetry group and fixes its Lie-algebra basis `v_1 … v_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupId {
    /// Heat equation: SL(2,ℝ) ⋉ H(1,ℝ), basis v1 … v6.
    Heat,
    /// Viscous Burgers equation: SL(2,ℝ) ⋉ ℝ², basis v1 … v5.
    Burgers,
    /// Allen–Cahn: time shift × SE(2), basis ∂t, ∂x, ∂y, rotation.
    Se2,
    /// Planar rotations.
    So2,
}

impl GroupId {
    /// Dimension of the Lie algebra.
    pub fn dim(self) -> usize {
        match self {
            GroupId::Heat => 6,
            GroupId::Burgers => 5,
            GroupId::Se2 => 4,
            GroupId::So2 => 1,
        }
    }

    /// Lower-case name used in configs and reports.
    pub fn name(self) -> &'static str {
        match self {
            GroupId::Heat => "heat",
            GroupId::Burgers => "burgers",
            GroupId::Se2 => "se2",
            GroupId::So2 => "so2",
        }
    }
}

impl std::str::FromStr for GroupId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "heat" => Ok(GroupId::Heat),
            "burgers" => Ok(GroupId::Burgers),
            "se2" | "ace" => Ok(GroupId::Se2),
            "so2" => Ok(GroupId::So2),
            other => Err(Error::InvalidArgument(format!("unknown group '{other}'"))),
        }
    }
}

/// A finite-dimensional Lie group with a fixed generator basis.
///
/// `exp_generator(j, c)` is the exact one-parameter subgroup `exp(c v_j)` (1-based `j`).
pub trait LieGroup: Clone + Debug + PartialEq + Send + Sync + 'static {
    /// Group identifier.
    const GROUP: GroupId;

    /// Neutral element.
    fn identity() -> Self;

    /// Group product `self · rhs`.
    fn compose(&self, rhs: &Self) -> Self;

    /// Group inverse.
    fn inverse(&self) -> Self;

    /// `exp(coeff · v_index)` for a 1-based generator index.
    fn exp_generator(index: usize, coeff: f64) -> Self;

    /// Flat parameter vector used for error measurements and reports.
    fn params(&self) -> Vec<f64>;

    /// Largest per-parameter difference to `other`.
    fn param_distance(&self, other: &Self) -> f64 {
        self.params()
            .iter()
            .zip(other.params())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Train of exponentials `exp(a_n v_n) · … · exp(a_1 v_1)`.
    ///
    /// # Panics
    /// If `coeffs.len()` differs from the algebra dimension.
    fn exp_train(coeffs: &[f64]) -> Self {
        assert_eq!(coeffs.len(), Self::GROUP.dim(), "coefficient length mismatch");
        let mut g = Self::identity();
        for (k, &c) in coeffs.iter().enumerate() {
            g = Self::exp_generator(k + 1, c).compose(&g);
        }
        g
    }
}

/// Coefficients of a Lie-algebra element over the basis of `group`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LieAlgebraCoeffs {
    pub group: GroupId,
    pub coeffs: Vec<f64>,
}

impl LieAlgebraCoeffs {
    /// Validates the length against the group's algebra dimension.
    pub fn new(group: GroupId, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != group.dim() {
            return Err(Error::DimensionMismatch { expected: group.dim(), got: coeffs.len() });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("non-finite algebra coefficient".into()));
        }
        Ok(Self { group, coeffs })
    }

    /// The zero element.
    pub fn zeros(group: GroupId) -> Self {
        Self { group, coeffs: vec![0.0; group.dim()] }
    }

    /// Train of exponentials in the group `G`, checked against the stored group id.
    pub fn exp_train<G: LieGroup>(&self) -> Result<G> {
        if G::GROUP != self.group {
            return Err(Error::InvalidArgument(format!(
                "coefficients belong to {}, requested {}",
                self.group.name(),
                G::GROUP.name()
            )));
        }
        Ok(G::exp_train(&self.coeffs))
    }
}
