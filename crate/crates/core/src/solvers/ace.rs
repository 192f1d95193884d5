use rustfft::num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::elapsed;
use crate::error::{Error, Result};
use crate::fields::Field2D;
use crate::fourier::{signed_freq, Fft2dPlan};

/// Allen–Cahn `u_t = Δu − ε² u (u² − 1)` on the periodic unit square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct AceConfig {
    pub epsilon: f64,
    /// Largest time step; must satisfy `dt ≤ Δx²/8`.
    pub dt: f64,
    /// Steps used when no explicit output times are given.
    pub n_steps: usize,
}

impl Default for AceConfig {
    fn default() -> Self {
        AceConfig { epsilon: 10.0, dt: 2e-5, n_steps: 500 }
    }
}

impl AceConfig {
    /// `Δx²/8` for the finer direction of an `nx × ny` grid on the unit square.
    pub fn stability_bound(nx: usize, ny: usize) -> f64 {
        let dx = 1.0 / nx.max(ny) as f64;
        dx * dx / 8.0
    }

    /// Final time of a run with the default step count.
    pub fn horizon(&self) -> f64 {
        self.dt * self.n_steps as f64
    }
}

/// Exact flow of `u' = a u (1 − u²)` over unit time with `a = ε² τ`.
pub fn ace_reaction(u: f64, a: f64) -> f64 {
    let e2 = (2.0 * a).exp();
    u * a.exp() / (1.0 + u * u * (e2 - 1.0)).sqrt()
}

/// Strang splitting: half reaction step, exact Fourier diffusion, half reaction step.
///
/// Reaction substeps use the closed-form solution, so `u ≡ −1, 0, 1` are preserved to round-off.
pub fn ace_solve(ic: &Field2D, cfg: &AceConfig, times: &[f64]) -> Result<Vec<Field2D>> {
    let bound = AceConfig::stability_bound(ic.nx, ic.ny);
    if !(cfg.dt > 0.0) || cfg.dt > bound {
        return Err(Error::UnstableStep { dt: cfg.dt, bound });
    }
    if !ic.periodic {
        return Err(Error::NotPeriodic);
    }
    let (nx, ny) = (ic.nx, ic.ny);
    let plan = Fft2dPlan::new(nx, ny);
    let k2: Vec<f64> = (0..ny)
        .flat_map(|j| {
            (0..nx).map(move |i| {
                let kx = std::f64::consts::TAU * signed_freq(i, nx);
                let ky = std::f64::consts::TAU * signed_freq(j, ny);
                kx * kx + ky * ky
            })
        })
        .collect();
    let norm = (nx * ny) as f64;
    let eps2 = cfg.epsilon * cfg.epsilon;
    let mut u = ic.values.clone();
    let mut t_now = ic.time;
    let mut out = Vec::with_capacity(times.len());
    let mut buf = vec![Complex::new(0.0, 0.0); nx * ny];
    for &t in times {
        let span = elapsed(t_now, t).map_err(|_| Error::InvalidArgument("times must be nondecreasing from the initial time".into()))?;
        let steps = (span / cfg.dt).ceil() as usize;
        if steps > 0 {
            let h = span / steps as f64;
            let half = 0.5 * eps2 * h;
            let decay: Vec<f64> = k2.iter().map(|k| (-k * h).exp() / norm).collect();
            for _ in 0..steps {
                for (b, v) in buf.iter_mut().zip(&u) {
                    *b = Complex::new(ace_reaction(*v, half), 0.0);
                }
                plan.process(&mut buf, false);
                for (b, d) in buf.iter_mut().zip(&decay) {
                    *b *= d;
                }
                plan.process(&mut buf, true);
                for (v, b) in u.iter_mut().zip(&buf) {
                    *v = ace_reaction(b.re, half);
                }
            }
        }
        t_now = t;
        out.push(Field2D { nx, ny, values: u.clone(), time: t, periodic: true });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(c: f64) -> Field2D {
        Field2D::from_fn(32, 32, 0.0, |_, _| c).unwrap()
    }

    fn rk4_scalar(u0: f64, eps: f64, t: f64, n: usize) -> f64 {
        let f = |u: f64| -eps * eps * u * (u * u - 1.0);
        let h = t / n as f64;
        let mut u = u0;
        for _ in 0..n {
            let k1 = f(u);
            let k2 = f(u + 0.5 * h * k1);
            let k3 = f(u + 0.5 * h * k2);
            let k4 = f(u + h * k3);
            u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        u
    }

    #[test]
    fn fixed_points_are_preserved() {
        let cfg = AceConfig { dt: 1e-4, ..AceConfig::default() };
        for c in [-1.0, 0.0, 1.0] {
            let out = ace_solve(&constant(c), &cfg, &[0.01]).unwrap();
            assert!(out[0].values.iter().all(|u| (u - c).abs() < 1e-10));
        }
    }

    #[test]
    fn constant_state_matches_scalar_ode() {
        let cfg = AceConfig { dt: 1e-4, ..AceConfig::default() };
        let out = ace_solve(&constant(0.1), &cfg, &[0.02]).unwrap();
        let want = rk4_scalar(0.1, 10.0, 0.02, 20000);
        assert!(out[0].values.iter().all(|u| (u - want).abs() < 1e-6));
    }

    #[test]
    fn rejects_large_steps() {
        let cfg = AceConfig { dt: 1.0, ..AceConfig::default() };
        assert!(matches!(ace_solve(&constant(0.0), &cfg, &[0.1]), Err(Error::UnstableStep { .. })));
    }

    #[test]
    fn commutes_with_quarter_turns_and_translations() {
        let ic = Field2D::from_fn(32, 32, 0.0, |x, y| (std::f64::consts::TAU * x).sin() * (0.3 + (std::f64::consts::TAU * 2.0 * y).cos()) + 0.2 * x).unwrap();
        let cfg = AceConfig { dt: 1e-4, ..AceConfig::default() };
        let base = ace_solve(&ic, &cfg, &[0.003]).unwrap();
        for k in 0..4u8 {
            let moved = ic.rotated_quarter(k).shifted(3, 7);
            let solved = ace_solve(&moved, &cfg, &[0.003]).unwrap();
            let aligned = base[0].rotated_quarter(k).shifted(3, 7);
            for (a, b) in solved[0].values.iter().zip(&aligned.values) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
