use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::solve_dense;
use super::{Action, CanonResult, CoordPickRule, Direction, OptimConfig};
use crate::energy::{Energy, SENTINEL};
use crate::error::{Error, Result};
use crate::lie::{LieAlgebraCoeffs, LieGroup};

const FD_RETRIES: usize = 4;
const GOLDEN_ITERS: usize = 60;
const SCAN_POINTS: usize = 29;

fn usable(e: f64) -> bool {
    e.is_finite() && e < SENTINEL
}

fn energy_of<A: Action, E: Energy<A::Space>>(action: &A, energy: &E, g: &A::Group, x: &A::Space) -> f64 {
    match action.act(g, x) {
        Ok(y) => {
            let e = energy.energy(&y);
            if e.is_nan() {
                f64::INFINITY
            } else {
                e
            }
        }
        Err(_) => f64::INFINITY,
    }
}

fn residuals_of<A: Action, E: Energy<A::Space>>(action: &A, energy: &E, g: &A::Group, x: &A::Space) -> Option<Vec<f64>> {
    let y = action.act(g, x).ok()?;
    let r = energy.residuals(&y)?;
    r.iter().all(|v| v.is_finite()).then_some(r)
}

/// Central-difference gradient of `f` at `xi` with step `h`.
///
/// Fails with [`Error::NonFiniteEnergy`] when any probe is non-finite or at the sentinel.
pub fn fd_grad_fn(f: impl Fn(&[f64]) -> f64, xi: &[f64], h: f64) -> Result<Vec<f64>> {
    let mut probe = xi.to_vec();
    let mut grad = Vec::with_capacity(xi.len());
    for i in 0..xi.len() {
        probe[i] = xi[i] + h;
        let fp = f(&probe);
        probe[i] = xi[i] - h;
        let fm = f(&probe);
        probe[i] = xi[i];
        if !usable(fp) || !usable(fm) {
            return Err(Error::NonFiniteEnergy);
        }
        grad.push((fp - fm) / (2.0 * h));
    }
    Ok(grad)
}

/// Central-difference gradient of `ξ ↦ E(exp_train(ξ) · x)`.
pub fn fd_grad<A: Action, E: Energy<A::Space>>(
    energy: &E,
    action: &A,
    xi: &LieAlgebraCoeffs,
    x: &A::Space,
    fd_step: f64,
) -> Result<Vec<f64>> {
    let g0 = xi.exp_train::<A::Group>()?;
    if !usable(energy_of(action, energy, &g0, x)) {
        return Err(Error::NonFiniteEnergy);
    }
    fd_grad_fn(|c| energy_of(action, energy, &A::Group::exp_train(c), x), &xi.coeffs, fd_step)
}

fn robust_grad(f: &dyn Fn(&[f64]) -> f64, xi: &[f64], h0: f64) -> Option<Vec<f64>> {
    let mut h = h0;
    for _ in 0..=FD_RETRIES {
        if let Ok(g) = fd_grad_fn(f, xi, h) {
            return Some(g);
        }
        h *= 0.25;
    }
    None
}

fn fd_jacobian(r: &dyn Fn(&[f64]) -> Option<Vec<f64>>, xi: &[f64], h: f64) -> Option<Vec<Vec<f64>>> {
    let mut probe = xi.to_vec();
    let mut cols = Vec::with_capacity(xi.len());
    for i in 0..xi.len() {
        probe[i] = xi[i] + h;
        let rp = r(&probe)?;
        probe[i] = xi[i] - h;
        let rm = r(&probe)?;
        probe[i] = xi[i];
        if rp.len() != rm.len() {
            return None;
        }
        cols.push(rp.iter().zip(&rm).map(|(a, b)| (a - b) / (2.0 * h)).collect());
    }
    Some(cols)
}

fn robust_jacobian(r: &dyn Fn(&[f64]) -> Option<Vec<f64>>, xi: &[f64], h0: f64) -> Option<Vec<Vec<f64>>> {
    let mut h = h0;
    for _ in 0..=FD_RETRIES {
        if let Some(j) = fd_jacobian(r, xi, h) {
            return Some(j);
        }
        h *= 0.25;
    }
    None
}

fn lm_step(jac: &[Vec<f64>], r0: &[f64], mu: f64) -> Option<Vec<f64>> {
    let n = jac.len();
    let mut a: Vec<Vec<f64>> =
        (0..n).map(|i| (0..n).map(|j| jac[i].iter().zip(&jac[j]).map(|(p, q)| p * q).sum()).collect()).collect();
    let b: Vec<f64> = (0..n).map(|i| -jac[i].iter().zip(r0).map(|(p, q)| p * q).sum::<f64>()).collect();
    let max_diag = (0..n).map(|i| a[i][i]).fold(0.0, f64::max);
    let tiny = 1e-12 * (1.0 + max_diag);
    for (i, row) in a.iter_mut().enumerate() {
        row[i] += mu * (row[i] + tiny);
    }
    let d = solve_dense(a, b)?;
    d.iter().all(|v| v.is_finite()).then_some(d)
}

/// Monotone descent on `f` from `xi0`; returns the final coefficients and the accepted-energy trace.
fn descend(
    f: &dyn Fn(&[f64]) -> f64,
    r: &dyn Fn(&[f64]) -> Option<Vec<f64>>,
    xi0: &[f64],
    cfg: &OptimConfig,
    iters: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut xi = xi0.to_vec();
    let mut fx = f(&xi);
    if !fx.is_finite() {
        return Err(Error::NoFiniteStart);
    }
    let mut trace = vec![fx];
    let mut mu = cfg.lm_damping;
    let use_lm = cfg.direction == Direction::GaussNewton && r(&xi).is_some();
    for it in 0..iters {
        if fx <= cfg.energy_tol {
            break;
        }
        let accepted = if use_lm {
            let Some(r0) = r(&xi) else { break };
            let Some(jac) = robust_jacobian(r, &xi, cfg.fd_step) else { break };
            let mut found = None;
            for _ in 0..=cfg.max_halvings {
                if let Some(d) = lm_step(&jac, &r0, mu) {
                    let cand: Vec<f64> = xi.iter().zip(&d).map(|(a, b)| a + b).collect();
                    let fc = f(&cand);
                    if fc.is_finite() && fc < fx {
                        mu = (mu / 3.0).max(1e-12);
                        found = Some((cand, fc));
                        break;
                    }
                }
                mu *= 4.0;
            }
            found
        } else {
            let Some(grad) = robust_grad(f, &xi, cfg.fd_step) else { break };
            let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            if norm < cfg.grad_tol {
                break;
            }
            let mut eta = cfg.eta0 * cfg.decay.powi(it as i32);
            let mut found = None;
            for _ in 0..=cfg.max_halvings {
                let cand: Vec<f64> = xi.iter().zip(&grad).map(|(a, g)| a - eta * g).collect();
                let fc = f(&cand);
                if fc.is_finite() && fc <= fx {
                    found = Some((cand, fc));
                    break;
                }
                eta *= 0.5;
            }
            found
        };
        match accepted {
            Some((cand, fc)) => {
                xi = cand;
                fx = fc;
                trace.push(fx);
            }
            None => break,
        }
    }
    Ok((xi, trace))
}

fn finish<A: Action>(
    action: &A,
    x: &A::Space,
    g_inv: A::Group,
    g: A::Group,
    energy_trace: Vec<f64>,
    steps: Vec<Vec<f64>>,
) -> Result<CanonResult<A::Group, A::Space>> {
    let canonical = action.act(&g_inv, x)?;
    let final_energy = *energy_trace.last().expect("trace starts with the initial energy");
    Ok(CanonResult { canonical, g, g_inv, energy_trace, init_index: 0, final_energy, steps })
}

/// Global-retraction descent from coefficients `xi0`: descent on `ξ ↦ E(exp_train(ξ) · x)`.
pub fn alg1_from<A: Action, E: Energy<A::Space>>(
    action: &A,
    energy: &E,
    x: &A::Space,
    cfg: &OptimConfig,
    xi0: &[f64],
) -> Result<CanonResult<A::Group, A::Space>> {
    check_dim::<A::Group>(xi0)?;
    let f = |c: &[f64]| energy_of(action, energy, &A::Group::exp_train(c), x);
    let r = |c: &[f64]| residuals_of(action, energy, &A::Group::exp_train(c), x);
    let (xi, trace) = descend(&f, &r, xi0, cfg, cfg.n_steps)?;
    let g_inv = A::Group::exp_train(&xi);
    let g = g_inv.inverse();
    finish(action, x, g_inv, g, trace, vec![xi])
}

/// Global-retraction descent from the identity.
pub fn alg1_global_retraction<A: Action, E: Energy<A::Space>>(
    action: &A,
    energy: &E,
    x: &A::Space,
    cfg: &OptimConfig,
) -> Result<CanonResult<A::Group, A::Space>> {
    cfg.validate()?;
    alg1_from(action, energy, x, cfg, &vec![0.0; A::Group::GROUP.dim()])
}

fn check_dim<G: LieGroup>(xi: &[f64]) -> Result<()> {
    if xi.len() != G::GROUP.dim() {
        return Err(Error::DimensionMismatch { expected: G::GROUP.dim(), got: xi.len() });
    }
    Ok(())
}

fn negated(xi: &[f64]) -> Vec<f64> {
    xi.iter().map(|v| -v).collect()
}

/// Rebuilds `g` from the start element and the recorded steps so that `g · g_inv = id`.
fn reconstruct<G: LieGroup>(start: &G, steps: &[Vec<f64>]) -> G {
    steps.iter().fold(start.inverse(), |g, s| G::exp_train(&negated(s)).inverse().compose(&g))
}

/// Lie-algebra descent with recalibration, starting from `g_inv = exp_train(xi0)`.
pub fn alg2_from<A: Action, E: Energy<A::Space>>(
    action: &A,
    energy: &E,
    x: &A::Space,
    cfg: &OptimConfig,
    xi0: &[f64],
) -> Result<CanonResult<A::Group, A::Space>> {
    check_dim::<A::Group>(xi0)?;
    let dim = xi0.len();
    let start = A::Group::exp_train(xi0);
    let mut g_inv = start.clone();
    let mut steps = Vec::new();
    let mut trace: Vec<f64> = Vec::new();
    for _ in 0..cfg.n_outer.max(1) {
        let base = g_inv.clone();
        let f = |c: &[f64]| energy_of(action, energy, &base.compose(&A::Group::exp_train(&negated(c))), x);
        let r = |c: &[f64]| residuals_of(action, energy, &base.compose(&A::Group::exp_train(&negated(c))), x);
        let (xi, inner) = descend(&f, &r, &vec![0.0; dim], cfg, cfg.n_inner)?;
        if trace.is_empty() {
            trace.extend_from_slice(&inner);
        } else {
            trace.extend_from_slice(&inner[1..]);
        }
        let moved = xi.iter().any(|v| *v != 0.0);
        if moved {
            g_inv = base.compose(&A::Group::exp_train(&negated(&xi)));
            steps.push(xi);
        }
        if !moved || *trace.last().unwrap() <= cfg.energy_tol {
            break;
        }
    }
    let g = reconstruct(&start, &steps);
    finish(action, x, g_inv, g, trace, steps)
}

/// Lie-algebra descent from the identity.
pub fn alg2_lie_descent<A: Action, E: Energy<A::Space>>(
    action: &A,
    energy: &E,
    x: &A::Space,
    cfg: &OptimConfig,
) -> Result<CanonResult<A::Group, A::Space>> {
    cfg.validate()?;
    alg2_from(action, energy, x, cfg, &vec![0.0; A::Group::GROUP.dim()])
}

/// One-dimensional minimization of `phi` over `|λ| ≤ max_step`.
///
/// Scans `0` and `±λ` on a log grid from `1e-7` to `max_step`, then refines the best bracket by
/// golden-section search. Returns `(λ, phi(λ))`, with `λ = 0` when nothing beats `phi(0)`.
pub fn line_search(phi: impl Fn(f64) -> f64, max_step: f64) -> (f64, f64) {
    let lo = 1e-7f64.ln();
    let hi = max_step.ln();
    let mut grid: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| (lo + (hi - lo) * i as f64 / (SCAN_POINTS - 1) as f64).exp())
        .flat_map(|m| [m, -m])
        .collect();
    grid.push(0.0);
    grid.sort_by(f64::total_cmp);
    let vals: Vec<f64> = grid.iter().map(|&l| if l == 0.0 { phi(0.0) } else { phi(l) }).collect();
    let f0 = vals[grid.iter().position(|&l| l == 0.0).unwrap()];
    let mut best = 0;
    for i in 0..grid.len() {
        if vals[i] < vals[best] || (vals[i] == vals[best] && grid[i].abs() < grid[best].abs()) {
            best = i;
        }
    }
    if !(vals[best] < f0) {
        return (0.0, f0);
    }
    let mut a = grid[best.saturating_sub(1)];
    let mut b = grid[(best + 1).min(grid.len() - 1)];
    let (mut lam, mut val) = (grid[best], vals[best]);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (phi(c), phi(d));
    for _ in 0..GOLDEN_ITERS {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = phi(d);
        }
    }
    for (l, v) in [(c, fc), (d, fd)] {
        if v < val {
            lam = l;
            val = v;
        }
    }
    (lam, val)
}

/// Coordinate descent starting from `g_inv = exp_train(xi0)`; `stream` selects the random pick sequence.
pub fn alg3_from<A: Action, E: Energy<A::Space>>(
    action: &A,
    energy: &E,
    x: &A::Space,
    cfg: &OptimConfig,
    xi0: &[f64],
    stream: u64,
) -> Result<CanonResult<A::Group, A::Space>> {
    check_dim::<A::Group>(xi0)?;
    let dim = xi0.len();
    let start = A::Group::exp_train(xi0);
    let mut g_inv = start.clone();
    let mut fx = energy_of(action, energy, &g_inv, x);
    if !fx.is_finite() {
        return Err(Error::NoFiniteStart);
    }
    let mut trace = vec![fx];
    let mut steps = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    let patience = match cfg.coord_pick_rule {
        CoordPickRule::Cyclic => dim,
        CoordPickRule::Random => 4 * dim,
    };
    let mut failures = 0;
    for k in 0..cfg.n_steps {
        if fx <= cfg.energy_tol || failures >= patience {
            break;
        }
        let j = match cfg.coord_pick_rule {
            CoordPickRule::Cyclic => k % dim,
            CoordPickRule::Random => rng.random_range(0..dim),
        };
        let prox = |l: f64| cfg.proximal_tau.map_or(0.0, |tau| l * l / (2.0 * tau));
        let phi = |l: f64| energy_of(action, energy, &g_inv.compose(&A::Group::exp_generator(j + 1, -l)), x) + prox(l);
        let (lam, _) = line_search(phi, cfg.line_search_max);
        let cand = g_inv.compose(&A::Group::exp_generator(j + 1, -lam));
        let fc = energy_of(action, energy, &cand, x);
        if lam != 0.0 && fc.is_finite() && fc < fx {
            g_inv = cand;
            fx = fc;
            trace.push(fx);
            let mut s = vec![0.0; dim];
            s[j] = lam;
            steps.push(s);
            failures = 0;
        } else {
            failures += 1;
        }
    }
    let g = reconstruct(&start, &steps);
    finish(action, x, g_inv, g, trace, steps)
}

/// Coordinate descent from the identity.
pub fn alg3_coordinate_descent<A: Action, E: Energy<A::Space>>(
    action: &A,
    energy: &E,
    x: &A::Space,
    cfg: &OptimConfig,
) -> Result<CanonResult<A::Group, A::Space>> {
    cfg.validate()?;
    alg3_from(action, energy, x, cfg, &vec![0.0; A::Group::GROUP.dim()], 0)
}
