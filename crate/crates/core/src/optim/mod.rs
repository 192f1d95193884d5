//! Canonicalization by energy minimization over Lie-algebra coefficients.
//!
//! Three algorithms share one contract: given an action, an energy and an instance `x`, return
//! `g_inv` with `canonical = g_inv · x` of (locally) minimal energy and `g = g_inv⁻¹`.
//!
//! * [`alg1_global_retraction`]: descent on `ξ ↦ E(exp_train(ξ) · x)`.
//! * [`alg2_lie_descent`]: descent on `ξ ↦ E(g_inv · exp_train(−ξ) · x)` from `ξ = 0`, then
//!   recalibration `g_inv ← g_inv · exp_train(−ξ)`, repeated `n_outer` times.
//! * [`alg3_coordinate_descent`]: line search along one generator at a time.
//!
//! [`multi_init_canonicalize`] runs any of them from several starts and keeps the best.

mod actions;
mod descent;
mod discrete;
mod linalg;

pub use actions::{AceAction, Action, BurgersAction, HeatAction, PointAction, So2Action};
pub use descent::{
    alg1_from, alg1_global_retraction, alg2_from, alg2_lie_descent, alg3_coordinate_descent, alg3_from, fd_grad, fd_grad_fn,
    line_search,
};
pub use discrete::ace_discrete_canonicalize;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::energy::Energy;
use crate::error::{Error, Result};
use crate::lie::LieGroup;

/// How the coordinate-descent generator index is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CoordPickRule {
    Cyclic,
    Random,
}

/// Search direction of the retraction and Lie-algebra descents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Direction {
    /// Negative central-difference gradient with step halving.
    Gradient,
    /// Levenberg–Marquardt step on the energy's residual vector with adaptive damping.
    GaussNewton,
}

/// Which canonicalization algorithm [`multi_init_canonicalize`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Algorithm {
    GlobalRetraction,
    LieDescent,
    CoordinateDescent,
}

/// Optimizer settings shared by all algorithms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct OptimConfig {
    /// Outer recalibrations of the Lie-algebra descent.
    pub n_outer: usize,
    /// Inner descent steps of the Lie-algebra descent.
    pub n_inner: usize,
    /// Iteration budget of the retraction descent and coordinate steps of coordinate descent.
    pub n_steps: usize,
    /// Initial step size `η₀`; step `i` uses `η₀ · decay^i`.
    pub eta0: f64,
    pub decay: f64,
    /// Central-difference step on algebra coefficients.
    pub fd_step: f64,
    pub num_inits: usize,
    /// Random starts draw `ξ₀ ~ U[−init_scale, init_scale]^dim`.
    pub init_scale: f64,
    pub seed: u64,
    pub coord_pick_rule: CoordPickRule,
    /// Proximal weight `λ²/(2τ)` in the coordinate line search.
    pub proximal_tau: Option<f64>,
    pub direction: Direction,
    /// Maximum step halvings (gradient) or damping increases (Gauss–Newton) per iteration.
    pub max_halvings: usize,
    /// Largest `|λ|` probed by the coordinate line search.
    pub line_search_max: f64,
    /// Runs stop once the energy is at or below this value.
    pub energy_tol: f64,
    /// Gradient descent stops when the gradient norm falls below this value.
    pub grad_tol: f64,
    /// Initial Levenberg–Marquardt damping.
    pub lm_damping: f64,
    /// Relative tolerance under which final energies of different starts count as tied.
    pub tie_tol: f64,
}

impl Default for OptimConfig {
    fn default() -> Self {
        OptimConfig {
            n_outer: 1,
            n_inner: 100,
            n_steps: 200,
            eta0: 0.1,
            decay: 1.0,
            fd_step: 1e-4,
            num_inits: 1,
            init_scale: 0.3,
            seed: 0,
            coord_pick_rule: CoordPickRule::Cyclic,
            proximal_tau: None,
            direction: Direction::Gradient,
            max_halvings: 20,
            line_search_max: 2.0,
            energy_tol: 1e-14,
            grad_tol: 1e-10,
            lm_damping: 1e-3,
            tie_tol: 1e-12,
        }
    }
}

impl OptimConfig {
    /// Settings for Gauss–Newton descent on residual energies.
    pub fn gauss_newton() -> Self {
        OptimConfig { direction: Direction::GaussNewton, eta0: 1.0, fd_step: 1e-7, ..OptimConfig::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        if self.num_inits < 1 {
            return bad("numInits must be ≥ 1");
        }
        if !(self.eta0 > 0.0) {
            return bad("eta0 must be positive");
        }
        if !(self.decay > 0.0 && self.decay <= 1.0) {
            return bad("decay must lie in (0, 1]");
        }
        if !(self.fd_step > 0.0) {
            return bad("fdStep must be positive");
        }
        if !(self.init_scale >= 0.0) {
            return bad("initScale must be nonnegative");
        }
        if let Some(t) = self.proximal_tau {
            if !(t > 0.0) {
                return bad("proximalTau must be positive");
            }
        }
        if !(self.line_search_max > 1e-7) {
            return bad("lineSearchMax must exceed 1e-7");
        }
        Ok(())
    }
}

/// Output of every canonicalizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonResult<G, X> {
    /// `g_inv · x`.
    pub canonical: X,
    /// Canonicalizing element, `x = g · canonical`.
    pub g: G,
    pub g_inv: G,
    /// Energies of accepted iterates, starting with the initial energy.
    pub energy_trace: Vec<f64>,
    pub init_index: usize,
    pub final_energy: f64,
    /// Algebra steps taken: the final `ξ` for the retraction descent, one entry per recalibration or coordinate move otherwise.
    pub steps: Vec<Vec<f64>>,
}

/// Starting coefficients: index 0 is the identity, others uniform in `[−init_scale, init_scale]^dim`.
///
/// Start `i` uses its own ChaCha stream so the set does not depend on execution order.
pub fn init_points(dim: usize, cfg: &OptimConfig) -> Vec<Vec<f64>> {
    (0..cfg.num_inits)
        .map(|i| {
            if i == 0 {
                return vec![0.0; dim];
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            (0..dim).map(|_| rng.random_range(-cfg.init_scale..=cfg.init_scale)).collect()
        })
        .collect()
}

fn run_one<A: Action, E: Energy<A::Space>>(
    algorithm: Algorithm,
    action: &A,
    energy: &E,
    x: &A::Space,
    cfg: &OptimConfig,
    xi0: &[f64],
    index: usize,
) -> Result<CanonResult<A::Group, A::Space>> {
    let mut r = match algorithm {
        Algorithm::GlobalRetraction => alg1_from(action, energy, x, cfg, xi0)?,
        Algorithm::LieDescent => alg2_from(action, energy, x, cfg, xi0)?,
        Algorithm::CoordinateDescent => alg3_from(action, energy, x, cfg, xi0, index as u64)?,
    };
    r.init_index = index;
    Ok(r)
}

/// Runs `algorithm` from [`init_points`] and returns the best run.
pub fn multi_init_canonicalize<A: Action, E: Energy<A::Space>>(
    algorithm: Algorithm,
    action: &A,
    energy: &E,
    x: &A::Space,
    cfg: &OptimConfig,
) -> Result<CanonResult<A::Group, A::Space>> {
    cfg.validate()?;
    let inits = init_points(<A::Group as LieGroup>::GROUP.dim(), cfg);
    multi_init_from(algorithm, action, energy, x, cfg, &inits)
}

/// Runs `algorithm` from the given starting coefficients (in parallel) and returns the run with
/// minimal final energy; runs within `tie_tol` of the best are tied and the lowest index wins.
pub fn multi_init_from<A: Action, E: Energy<A::Space>>(
    algorithm: Algorithm,
    action: &A,
    energy: &E,
    x: &A::Space,
    cfg: &OptimConfig,
    inits: &[Vec<f64>],
) -> Result<CanonResult<A::Group, A::Space>> {
    let runs: Vec<Option<CanonResult<A::Group, A::Space>>> =
        inits.par_iter().enumerate().map(|(i, xi0)| run_one(algorithm, action, energy, x, cfg, xi0, i).ok()).collect();
    let best = runs.iter().flatten().map(|r| r.final_energy).fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        return Err(Error::NoFiniteStart);
    }
    let tol = cfg.tie_tol * best.abs().max(1.0);
    runs.into_iter().flatten().find(|r| r.final_energy <= best + tol).ok_or(Error::NoFiniteStart)
}
