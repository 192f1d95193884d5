use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::Field1D;

/// Which PDE a residual is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum PdeKind {
    /// `u_t − ν u_xx`.
    Heat,
    /// `u_t + u u_x − ν u_xx`.
    Burgers,
}

impl PdeKind {
    fn residual(self, u: f64, u_t: f64, u_x: f64, u_xx: f64, nu: f64) -> f64 {
        match self {
            PdeKind::Heat => u_t - nu * u_xx,
            PdeKind::Burgers => u_t + u * u_x - nu * u_xx,
        }
    }
}

/// Largest central-difference residual of `u(t, x)` over the interior nodes of an `nt × nx` lattice
/// on `[t_lo, t_hi] × [x_lo, x_hi]`.
pub fn pde_residual_fn(
    kind: PdeKind,
    u: impl Fn(f64, f64) -> f64,
    nu: f64,
    (t_lo, t_hi): (f64, f64),
    (x_lo, x_hi): (f64, f64),
    (nt, nx): (usize, usize),
) -> f64 {
    let dt = (t_hi - t_lo) / (nt - 1) as f64;
    let dx = (x_hi - x_lo) / (nx - 1) as f64;
    let mut worst = 0.0f64;
    for i in 1..nt - 1 {
        let t = t_lo + dt * i as f64;
        for j in 1..nx - 1 {
            let x = x_lo + dx * j as f64;
            let c = u(t, x);
            let u_t = (u(t + dt, x) - u(t - dt, x)) / (2.0 * dt);
            let (l, r) = (u(t, x - dx), u(t, x + dx));
            let u_x = (r - l) / (2.0 * dx);
            let u_xx = (r - 2.0 * c + l) / (dx * dx);
            worst = worst.max(kind.residual(c, u_t, u_x, u_xx, nu).abs());
        }
    }
    worst
}

/// Largest central-difference residual of a stack of fields at equispaced times on a shared grid.
pub fn pde_residual_grid(kind: PdeKind, stack: &[Field1D], nu: f64) -> Result<f64> {
    if stack.len() < 3 {
        return Err(Error::InvalidArgument("residual needs at least three time levels".into()));
    }
    if stack.iter().any(|f| !f.same_grid(&stack[0], 1e-12)) {
        return Err(Error::GridMismatch);
    }
    let dt = stack[1].time - stack[0].time;
    let dx = stack[0].dx();
    let n = stack[0].len();
    let mut worst = 0.0f64;
    for i in 1..stack.len() - 1 {
        let (prev, cur, next) = (&stack[i - 1].values, &stack[i].values, &stack[i + 1].values);
        for j in 1..n - 1 {
            let u_t = (next[j] - prev[j]) / (2.0 * dt);
            let u_x = (cur[j + 1] - cur[j - 1]) / (2.0 * dx);
            let u_xx = (cur[j + 1] - 2.0 * cur[j] + cur[j - 1]) / (dx * dx);
            worst = worst.max(kind.residual(cur[j], u_t, u_x, u_xx, nu).abs());
        }
    }
    Ok(worst)
}
