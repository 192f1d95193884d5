//! Closed-form actions of group elements and one-parameter flows on jet points, generator
//! vector fields, bracket tables and the commutator-of-flows bracket estimate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{
    random_ace, random_burgers, random_heat, random_so2, AceGroupElement, BurgersGroupElement, GroupId, HeatGroupElement, LieGroup,
    Se2Element, So2Element, TAU_SING,
};

/// A point `(t, x, u)` of the zeroth-order jet space over one spatial dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JetPoint {
    pub t: f64,
    pub x: f64,
    pub u: f64,
}

impl JetPoint {
    pub fn new(t: f64, x: f64, u: f64) -> Self {
        JetPoint { t, x, u }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.t, self.x, self.u]
    }

    /// Largest absolute coordinate difference.
    pub fn max_diff(&self, other: &JetPoint) -> f64 {
        (self.t - other.t).abs().max((self.x - other.x).abs()).max((self.u - other.u).abs())
    }
}

/// A point `(t, x, y, u)` of the zeroth-order jet space over the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JetPoint2D {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub u: f64,
}

/// A basis generator `v_index` of a group's Lie algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorId {
    pub group: GroupId,
    pub index: usize,
}

impl GeneratorId {
    pub fn new(group: GroupId, index: usize) -> Result<Self> {
        if index == 0 || index > group.dim() {
            return Err(Error::InvalidArgument(format!(
                "generator index {index} outside 1..={} for {}",
                group.dim(),
                group.name()
            )));
        }
        Ok(GeneratorId { group, index })
    }
}

fn singular_check(den: f64) -> Result<f64> {
    if den.abs() < TAU_SING || !den.is_finite() {
        Err(Error::SingularTransform(den.abs()))
    } else {
        Ok(den)
    }
}

/// Multiplicative factor of the heat action on `u` at the original point `(t, x)`.
///
/// `σ·√|γt+δ|·exp(γ(x+λ1 t+λ0)²/(4ν(γt+δ)) − λ1 x/(2ν) − λ1² t/(4ν))` with `σ = e^{s/ν}`.
pub fn heat_u_factor(g: &HeatGroupElement, nu: f64, t: f64, x: f64) -> Result<f64> {
    let den = singular_check(g.a.gamma * t + g.a.delta)?;
    let (l1, l0) = (g.h.lambda1, g.h.lambda0);
    let num = x + l1 * t + l0;
    let expo = g.h.s / nu + g.a.gamma * num * num / (4.0 * nu * den) - l1 * x / (2.0 * nu) - l1 * l1 * t / (4.0 * nu);
    Ok(den.abs().sqrt() * expo.exp())
}

/// Heat symmetry acting on a jet point.
pub fn heat_act_point(g: &HeatGroupElement, nu: f64, p: &JetPoint) -> Result<JetPoint> {
    let (t, x) = g.base_map().apply(p.t, p.x)?;
    let f = heat_u_factor(g, nu, p.t, p.x)?;
    Ok(JetPoint { t, x, u: f * p.u })
}

/// Closed-form flow `exp[v_index](eps)` of the heat generators.
pub fn heat_flow(v: usize, eps: f64, nu: f64, p: &JetPoint) -> Result<JetPoint> {
    let JetPoint { t, x, u } = *p;
    Ok(match v {
        1 => JetPoint { t, x: x + eps, u },
        2 => JetPoint { t: t + eps, x, u },
        3 => JetPoint { t, x, u: (eps / nu).exp() * u },
        4 => JetPoint { t: (2.0 * eps).exp() * t, x: eps.exp() * x, u: (-eps / 2.0).exp() * u },
        5 => JetPoint { t, x: x + eps * t, u: (-(eps * eps * t + 2.0 * eps * x) / (4.0 * nu)).exp() * u },
        6 => {
            let d = singular_check(1.0 - eps * t)?;
            JetPoint {
                t: t / d,
                x: x / d,
                u: d.abs().sqrt() * (eps * x * x / (4.0 * nu * (eps * t - 1.0))).exp() * u,
            }
        }
        _ => return Err(Error::InvalidArgument(format!("heat generator index {v} out of range"))),
    })
}

/// Burgers symmetry acting on a jet point: `ũ = (γt+δ)u − γx + λ1δ − λ0γ`.
pub fn burgers_act_point(g: &BurgersGroupElement, p: &JetPoint) -> Result<JetPoint> {
    let (t, x) = g.base_map().apply(p.t, p.x)?;
    let den = g.a.gamma * p.t + g.a.delta;
    let u = den * p.u - g.a.gamma * p.x + g.lambda1 * g.a.delta - g.lambda0 * g.a.gamma;
    Ok(JetPoint { t, x, u })
}

/// Closed-form flow `exp[v_index](eps)` of the Burgers generators.
pub fn burgers_flow(v: usize, eps: f64, p: &JetPoint) -> Result<JetPoint> {
    let JetPoint { t, x, u } = *p;
    Ok(match v {
        1 => JetPoint { t, x: x + eps, u },
        2 => JetPoint { t: t + eps, x, u },
        3 => JetPoint { t: (2.0 * eps).exp() * t, x: eps.exp() * x, u: (-eps).exp() * u },
        4 => JetPoint { t, x: x + eps * t, u: u + eps },
        5 => {
            let d = singular_check(1.0 - eps * t)?;
            JetPoint { t: t / d, x: x / d, u: u * d + eps * x }
        }
        _ => return Err(Error::InvalidArgument(format!("Burgers generator index {v} out of range"))),
    })
}

/// Allen–Cahn symmetry: rigid motion of `(x, y)`, shift of `t`, `u` unchanged.
pub fn ace_act_point(g: &Se2Element, t_shift: f64, p: &JetPoint2D) -> JetPoint2D {
    let (x, y) = g.apply(p.x, p.y);
    JetPoint2D { t: p.t + t_shift, x, y, u: p.u }
}

/// [`ace_act_point`] for a combined group element.
pub fn ace_group_act_point(g: &AceGroupElement, p: &JetPoint2D) -> JetPoint2D {
    ace_act_point(&g.rigid, g.t_shift, p)
}

/// Components `(ξ^t, ξ^x, φ^u)` of a heat generator at `p`.
pub fn heat_vector_field(v: usize, nu: f64, p: &JetPoint) -> [f64; 3] {
    let JetPoint { t, x, u } = *p;
    match v {
        1 => [0.0, 1.0, 0.0],
        2 => [1.0, 0.0, 0.0],
        3 => [0.0, 0.0, u / nu],
        4 => [2.0 * t, x, -u / 2.0],
        5 => [0.0, t, -x * u / (2.0 * nu)],
        6 => [t * t, t * x, -(x * x + 2.0 * nu * t) * u / (4.0 * nu)],
        _ => panic!("heat generator index {v} out of range"),
    }
}

/// Components `(ξ^t, ξ^x, φ^u)` of a Burgers generator at `p`.
pub fn burgers_vector_field(v: usize, p: &JetPoint) -> [f64; 3] {
    let JetPoint { t, x, u } = *p;
    match v {
        1 => [0.0, 1.0, 0.0],
        2 => [1.0, 0.0, 0.0],
        3 => [2.0 * t, x, -u],
        4 => [0.0, t, 1.0],
        5 => [t * t, t * x, x - t * u],
        _ => panic!("Burgers generator index {v} out of range"),
    }
}

/// `(i, j, [v_i, v_j])` with the bracket as `(index, coefficient)` terms.
type BracketRow = (usize, usize, &'static [(usize, f64)]);

const HEAT_BRACKETS: &[BracketRow] = &[
    (4, 2, &[(2, -2.0)]),
    (4, 6, &[(6, 2.0)]),
    (2, 6, &[(4, 1.0)]),
    (2, 5, &[(1, 1.0)]),
    (4, 5, &[(5, 1.0)]),
    (4, 1, &[(1, -1.0)]),
    (6, 1, &[(5, -1.0)]),
    (5, 1, &[(3, 0.5)]),
];

const BURGERS_BRACKETS: &[BracketRow] = &[
    (3, 2, &[(2, -2.0)]),
    (3, 5, &[(5, 2.0)]),
    (2, 5, &[(3, 1.0)]),
    (2, 4, &[(1, 1.0)]),
    (3, 4, &[(4, 1.0)]),
    (3, 1, &[(1, -1.0)]),
    (5, 1, &[(4, -1.0)]),
];

/// Tabulated bracket `[v_i, v_j] = Σ c_k v_k` as `(k, c_k)` pairs; empty when the generators commute.
pub fn bracket_table(group: GroupId, i: usize, j: usize) -> Vec<(usize, f64)> {
    let table = match group {
        GroupId::Heat => HEAT_BRACKETS,
        GroupId::Burgers => BURGERS_BRACKETS,
        _ => return Vec::new(),
    };
    for &(a, b, coeffs) in table {
        if (a, b) == (i, j) {
            return coeffs.to_vec();
        }
        if (a, b) == (j, i) {
            return coeffs.iter().map(|&(k, c)| (k, -c)).collect();
        }
    }
    Vec::new()
}

/// Vector field of a generator of the heat or Burgers algebra at `p`.
pub fn vector_field(group: GroupId, v: usize, nu: f64, p: &JetPoint) -> Result<[f64; 3]> {
    match group {
        GroupId::Heat => Ok(heat_vector_field(v, nu, p)),
        GroupId::Burgers => Ok(burgers_vector_field(v, p)),
        _ => Err(Error::InvalidArgument("vector fields are tabulated for heat and Burgers only".into())),
    }
}

/// One-parameter flow of a heat or Burgers generator.
pub fn flow(group: GroupId, v: usize, eps: f64, nu: f64, p: &JetPoint) -> Result<JetPoint> {
    match group {
        GroupId::Heat => heat_flow(v, eps, nu, p),
        GroupId::Burgers => burgers_flow(v, eps, p),
        _ => Err(Error::InvalidArgument("flows are tabulated for heat and Burgers only".into())),
    }
}

/// `Δ(p) = Φ_j^{−ε} Φ_i^{−ε} Φ_j^{ε} Φ_i^{ε}(p) − p`, which approaches `ε²·[v_i, v_j]|_p`.
pub fn bracket_commutator_estimate(vi: GeneratorId, vj: GeneratorId, eps: f64, nu: f64, p: &JetPoint) -> Result<[f64; 3]> {
    if vi.group != vj.group {
        return Err(Error::InvalidArgument("generators belong to different groups".into()));
    }
    let g = vi.group;
    let q = flow(g, vi.index, eps, nu, p)?;
    let q = flow(g, vj.index, eps, nu, &q)?;
    let q = flow(g, vi.index, -eps, nu, &q)?;
    let q = flow(g, vj.index, -eps, nu, &q)?;
    Ok([q.t - p.t, q.x - p.x, q.u - p.u])
}

/// Tabulated bracket evaluated as a vector field at `p`.
pub fn bracket_field(group: GroupId, i: usize, j: usize, nu: f64, p: &JetPoint) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for (k, c) in bracket_table(group, i, j) {
        let v = vector_field(group, k, nu, p)?;
        for d in 0..3 {
            out[d] += c * v[d];
        }
    }
    Ok(out)
}

/// Outcome of checking one generator pair against the bracket table.
#[derive(Debug, Clone, Serialize)]
pub struct BracketCheck {
    pub i: usize,
    pub j: usize,
    pub estimate: [f64; 3],
    pub expected: [f64; 3],
    /// `|Δ/ε² − s·expected| / |expected|` for nonzero brackets, `|Δ|/ε²` otherwise.
    pub error: f64,
    pub zero_bracket: bool,
    pub pass: bool,
}

/// Result of the bracket suite with one fitted global sign.
#[derive(Debug, Clone, Serialize)]
pub struct BracketReport {
    pub group: GroupId,
    pub sign: f64,
    pub rows: Vec<BracketCheck>,
}

impl BracketReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Checks every generator pair `i < j` by commutator of flows at `p`.
///
/// The global sign is fitted by majority vote of `⟨Δ, expected⟩` over the nonzero brackets.
/// Nonzero brackets pass within relative error `rel_tol`; zero brackets pass when `|Δ|/ε² ≤ zero_tol`.
pub fn check_brackets(group: GroupId, eps: f64, nu: f64, p: &JetPoint, rel_tol: f64, zero_tol: f64) -> Result<BracketReport> {
    let n = match group {
        GroupId::Heat | GroupId::Burgers => group.dim(),
        _ => return Err(Error::InvalidArgument("bracket tables exist for heat and Burgers only".into())),
    };
    let mut raw = Vec::new();
    let mut votes = 0.0;
    for i in 1..=n {
        for j in (i + 1)..=n {
            let d = bracket_commutator_estimate(GeneratorId::new(group, i)?, GeneratorId::new(group, j)?, eps, nu, p)?;
            let est = [d[0] / (eps * eps), d[1] / (eps * eps), d[2] / (eps * eps)];
            let expected = bracket_field(group, i, j, nu, p)?;
            let dot: f64 = est.iter().zip(&expected).map(|(a, b)| a * b).sum();
            if !bracket_table(group, i, j).is_empty() {
                votes += dot.signum();
            }
            raw.push((i, j, est, expected));
        }
    }
    let sign = if votes >= 0.0 { 1.0 } else { -1.0 };
    let rows = raw
        .into_iter()
        .map(|(i, j, est, expected)| {
            let zero_bracket = bracket_table(group, i, j).is_empty();
            let error = if zero_bracket {
                norm3(&est)
            } else {
                let diff = [est[0] - sign * expected[0], est[1] - sign * expected[1], est[2] - sign * expected[2]];
                norm3(&diff) / norm3(&expected)
            };
            let pass = if zero_bracket { error <= zero_tol } else { error <= rel_tol };
            BracketCheck { i, j, estimate: est, expected, error, zero_bracket, pass }
        })
        .collect();
    Ok(BracketReport { group, sign, rows })
}

/// Largest errors of the group axioms and of the action homomorphism over random samples.
#[derive(Debug, Clone, Serialize)]
pub struct GroupLawReport {
    pub group: GroupId,
    pub n_samples: usize,
    pub n_jets: usize,
    /// `max d((g1 g2) g3, g1 (g2 g3))` in parameter distance.
    pub associativity: f64,
    /// `max d(e g, g) ∨ d(g e, g)`.
    pub identity: f64,
    /// `max d(g g⁻¹, e) ∨ d(g⁻¹ g, e)`.
    pub inverse: f64,
    /// `max |act(g1 g2, p) − act(g1, act(g2, p))| / max(1, |·|)` per coordinate.
    pub action: f64,
    /// Jet/pair combinations skipped because a map hit the projective singularity.
    pub skipped: usize,
}

impl GroupLawReport {
    pub fn pass(&self, param_tol: f64, action_tol: f64) -> bool {
        self.associativity <= param_tol && self.identity <= param_tol && self.inverse <= param_tol && self.action <= action_tol
    }
}

fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs() / y.abs().max(1.0)).fold(0.0, f64::max)
}

fn law_errors<G: LieGroup>(gs: &[G]) -> (f64, f64, f64) {
    let e = G::identity();
    let (mut assoc, mut ident, mut inv) = (0.0f64, 0.0f64, 0.0f64);
    for w in gs.windows(3) {
        let (a, b, c) = (&w[0], &w[1], &w[2]);
        assoc = assoc.max(a.compose(b).compose(c).param_distance(&a.compose(&b.compose(c))));
    }
    for g in gs {
        ident = ident.max(e.compose(g).param_distance(g)).max(g.compose(&e).param_distance(g));
        let gi = g.inverse();
        inv = inv.max(g.compose(&gi).param_distance(&e)).max(gi.compose(g).param_distance(&e));
    }
    (assoc, ident, inv)
}

fn action_errors<G: LieGroup>(gs: &[G], jets: &[Vec<f64>], act: impl Fn(&G, &[f64]) -> Result<Vec<f64>>) -> (f64, usize) {
    let mut worst = 0.0f64;
    let mut skipped = 0;
    for (k, p) in jets.iter().enumerate() {
        let (g1, g2) = (&gs[(2 * k) % gs.len()], &gs[(2 * k + 1) % gs.len()]);
        let lhs = act(&g1.compose(g2), p);
        let rhs = act(g2, p).and_then(|q| act(g1, &q));
        match (lhs, rhs) {
            (Ok(a), Ok(b)) => worst = worst.max(rel_diff(&a, &b)),
            _ => skipped += 1,
        }
    }
    (worst, skipped)
}

/// Group-axiom and action-homomorphism suite on `n_samples` random elements (parameters
/// `U[−0.5, 0.5]`, see [`crate::lie::random_sl2`]) and `n_jets` random jets.
pub fn check_group_laws(group: GroupId, n_samples: usize, n_jets: usize, nu: f64, seed: u64) -> Result<GroupLawReport> {
    if n_samples < 3 {
        return Err(Error::InvalidArgument("group-law suite needs at least three samples".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 0.5;
    let jet = |dim: usize, rng: &mut ChaCha8Rng| -> Vec<f64> {
        let mut v = vec![rng.random_range(0.0..=0.3)];
        v.extend((1..dim - 1).map(|_| rng.random_range(-0.5..=0.5)));
        v.push(rng.random_range(0.5..=1.5));
        v
    };
    let ((associativity, identity, inverse), (action, skipped)) = match group {
        GroupId::Heat => {
            let gs: Vec<HeatGroupElement> = (0..n_samples).map(|_| random_heat(&mut rng, scale)).collect();
            let jets: Vec<Vec<f64>> = (0..n_jets).map(|_| jet(3, &mut rng)).collect();
            let act = |g: &HeatGroupElement, p: &[f64]| heat_act_point(g, nu, &JetPoint::new(p[0], p[1], p[2])).map(|q| q.to_array().to_vec());
            (law_errors(&gs), action_errors(&gs, &jets, act))
        }
        GroupId::Burgers => {
            let gs: Vec<BurgersGroupElement> = (0..n_samples).map(|_| random_burgers(&mut rng, scale)).collect();
            let jets: Vec<Vec<f64>> = (0..n_jets).map(|_| jet(3, &mut rng)).collect();
            let act = |g: &BurgersGroupElement, p: &[f64]| burgers_act_point(g, &JetPoint::new(p[0], p[1], p[2])).map(|q| q.to_array().to_vec());
            (law_errors(&gs), action_errors(&gs, &jets, act))
        }
        GroupId::Se2 => {
            let gs: Vec<AceGroupElement> = (0..n_samples).map(|_| random_ace(&mut rng, scale)).collect();
            let jets: Vec<Vec<f64>> = (0..n_jets).map(|_| jet(4, &mut rng)).collect();
            let act = |g: &AceGroupElement, p: &[f64]| {
                let q = ace_group_act_point(g, &JetPoint2D { t: p[0], x: p[1], y: p[2], u: p[3] });
                Ok(vec![q.t, q.x, q.y, q.u])
            };
            (law_errors(&gs), action_errors(&gs, &jets, act))
        }
        GroupId::So2 => {
            let gs: Vec<So2Element> = (0..n_samples).map(|_| random_so2(&mut rng)).collect();
            let jets: Vec<Vec<f64>> = (0..n_jets).map(|_| jet(3, &mut rng)[1..].to_vec()).collect();
            let act = |g: &So2Element, p: &[f64]| Ok(g.apply([p[0], p[1]]).to_vec());
            (law_errors(&gs), action_errors(&gs, &jets, act))
        }
    };
    Ok(GroupLawReport { group, n_samples, n_jets, associativity, identity, inverse, action, skipped })
}
