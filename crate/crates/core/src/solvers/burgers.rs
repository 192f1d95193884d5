use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::{closed, elapsed, series_of};
use crate::error::{Error, Result};
use crate::fields::Field1D;
use crate::fourier::{signed_freq, PeriodicSeries};
use crate::lie::GroupId;
use crate::pipeline::Operator1D;

/// Largest initial mean accepted by the Cole–Hopf solver.
pub const MEAN_TOL: f64 = 1e-6;

/// Cole–Hopf representation of a periodic zero-mean solution.
struct ColeHopf {
    theta: PeriodicSeries,
    mean: f64,
    nu: f64,
    t0: f64,
}

impl ColeHopf {
    fn new(ic: &Field1D, nu: f64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::InvalidArgument("viscosity must be positive".into()));
        }
        let series = series_of(ic)?;
        let mean = series.coeffs[0].re;
        if mean.abs() > MEAN_TOL {
            return Err(Error::NonZeroMean(mean));
        }
        let phi = series.antiderivative().to_samples();
        let top = phi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let theta0: Vec<f64> = phi.iter().map(|p| (-(p - top) / (2.0 * nu)).exp()).collect();
        Ok(ColeHopf { theta: PeriodicSeries::from_samples(&theta0, ic.x_lo, ic.length()), mean, nu, t0: ic.time })
    }

    /// `u(x, t) = m − 2ν θ_x/θ` evaluated in the frame moving with the mean `m`.
    fn evaluate(&self, t: f64, xs: &[f64]) -> Result<Vec<f64>> {
        let dt = elapsed(self.t0, t)?;
        let nu = self.nu;
        let theta = self.theta.scaled(|w| (-nu * w * w * dt).exp());
        let shift = self.mean * dt;
        Ok(xs
            .iter()
            .map(|&x| {
                let (v, d) = theta.eval_with_derivative(x - shift);
                self.mean - 2.0 * nu * d / v
            })
            .collect())
    }
}

/// Viscous Burgers `u_t + u u_x = ν u_xx` by the Cole–Hopf transform and exact heat decay.
///
/// The initial condition must be periodic with mean at most [`MEAN_TOL`] in magnitude; the
/// remaining mean is carried exactly by a Galilean shift, so the mean is conserved.
pub fn burgers_solve(ic: &Field1D, nu: f64, times: &[f64]) -> Result<Vec<Field1D>> {
    let ch = ColeHopf::new(ic, nu)?;
    let grid = ic.grid();
    times
        .iter()
        .map(|&t| {
            let v = ch.evaluate(t, &grid[..grid.len() - 1])?;
            Field1D::new(ic.x_lo, ic.x_hi, closed(v), t, true)
        })
        .collect()
}

/// [`burgers_solve`] as a pipeline operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgersOperator {
    pub nu: f64,
}

impl Default for BurgersOperator {
    fn default() -> Self {
        BurgersOperator { nu: 0.01 }
    }
}

impl Operator1D for BurgersOperator {
    fn name(&self) -> &str {
        "burgers-cole-hopf"
    }

    fn group(&self) -> GroupId {
        GroupId::Burgers
    }

    fn evaluate(&self, ic: &Field1D, t: f64, xs: &[f64]) -> Result<Vec<f64>> {
        ColeHopf::new(ic, self.nu)?.evaluate(t, xs)
    }
}

/// Settings of the pseudo-spectral reference solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct PseudoSpectralConfig {
    /// Fine-grid refinement factor over the initial-condition grid.
    pub refine: usize,
    /// Largest time step.
    pub dt: f64,
}

impl Default for PseudoSpectralConfig {
    fn default() -> Self {
        PseudoSpectralConfig { refine: 4, dt: 5e-4 }
    }
}

struct Spectral {
    n: usize,
    k: Vec<f64>,
    keep: Vec<bool>,
    planner: FftPlanner<f64>,
}

impl Spectral {
    fn new(n: usize, period: f64) -> Self {
        let k = (0..n).map(|j| 2.0 * std::f64::consts::PI * signed_freq(j, n) / period).collect();
        let keep = (0..n).map(|j| signed_freq(j, n).abs() < n as f64 / 3.0).collect();
        Spectral { n, k, keep, planner: FftPlanner::new() }
    }

    /// `−i k · FFT(u²/2)` with two-thirds dealiasing.
    fn nonlinear(&mut self, u_hat: &[Complex<f64>]) -> Vec<Complex<f64>> {
        let n = self.n;
        let mut u = u_hat.to_vec();
        self.planner.plan_fft_inverse(n).process(&mut u);
        let mut q: Vec<Complex<f64>> = u.iter().map(|v| Complex::new(0.5 * (v.re / n as f64).powi(2), 0.0)).collect();
        self.planner.plan_fft_forward(n).process(&mut q);
        q.iter()
            .enumerate()
            .map(|(j, c)| if self.keep[j] { c * Complex::new(0.0, -self.k[j]) } else { Complex::new(0.0, 0.0) })
            .collect()
    }
}

/// Viscous Burgers by integrating-factor RK4 on a refined grid with two-thirds dealiasing.
///
/// Independent of the Cole–Hopf path and valid for any mean; used as the reference solution.
/// Output fields live on the grid of `ic`.
pub fn burgers_pseudospectral_solve(
    ic: &Field1D,
    nu: f64,
    times: &[f64],
    cfg: &PseudoSpectralConfig,
) -> Result<Vec<Field1D>> {
    let fine = pseudospectral_fine(ic, nu, times, cfg)?;
    let m = ic.len() - 1;
    fine.into_iter()
        .zip(times)
        .map(|(s, &t)| Field1D::new(ic.x_lo, ic.x_hi, closed((0..m).map(|i| s[i * cfg.refine]).collect()), t, true))
        .collect()
}

fn pseudospectral_fine(ic: &Field1D, nu: f64, times: &[f64], cfg: &PseudoSpectralConfig) -> Result<Vec<Vec<f64>>> {
    if cfg.refine < 1 || !(cfg.dt > 0.0) || !(nu > 0.0) {
        return Err(Error::InvalidArgument("pseudo-spectral solver needs refine ≥ 1, dt > 0, ν > 0".into()));
    }
    let coarse = series_of(ic)?;
    let m = coarse.m;
    let n = m * cfg.refine;
    let mut sp = Spectral::new(n, ic.length());
    let mut u_hat = vec![Complex::new(0.0, 0.0); n];
    for (j, c) in coarse.coeffs.iter().enumerate() {
        let scaled = c * n as f64;
        if m % 2 == 0 && j == m / 2 && cfg.refine > 1 {
            u_hat[j] = Complex::new(0.5 * scaled.re, 0.0);
            u_hat[n - j] = Complex::new(0.5 * scaled.re, 0.0);
        } else {
            u_hat[j] = scaled;
            if j > 0 && j < n - j {
                u_hat[n - j] = scaled.conj();
            }
        }
    }
    let mut t_now = ic.time;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let span = elapsed(t_now, t).map_err(|_| Error::InvalidArgument("times must be nondecreasing from the initial time".into()))?;
        let steps = (span / cfg.dt).ceil() as usize;
        if steps > 0 {
            let h = span / steps as f64;
            let e: Vec<f64> = sp.k.iter().map(|k| (-nu * k * k * h).exp()).collect();
            let e2: Vec<f64> = sp.k.iter().map(|k| (-nu * k * k * h / 2.0).exp()).collect();
            for _ in 0..steps {
                let k1 = sp.nonlinear(&u_hat);
                let u2: Vec<Complex<f64>> = (0..n).map(|j| e2[j] * (u_hat[j] + 0.5 * h * k1[j])).collect();
                let k2 = sp.nonlinear(&u2);
                let u3: Vec<Complex<f64>> = (0..n).map(|j| e2[j] * u_hat[j] + 0.5 * h * k2[j]).collect();
                let k3 = sp.nonlinear(&u3);
                let u4: Vec<Complex<f64>> = (0..n).map(|j| e[j] * u_hat[j] + h * e2[j] * k3[j]).collect();
                let k4 = sp.nonlinear(&u4);
                for j in 0..n {
                    u_hat[j] = e[j] * u_hat[j] + h / 6.0 * (e[j] * k1[j] + 2.0 * e2[j] * (k2[j] + k3[j]) + k4[j]);
                }
            }
        }
        t_now = t;
        let mut u = u_hat.clone();
        sp.planner.plan_fft_inverse(n).process(&mut u);
        out.push(u.iter().map(|v| v.re / n as f64).collect());
    }
    Ok(out)
}

/// [`burgers_pseudospectral_solve`] as a pipeline operator, interpolating the fine-grid solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgersReferenceOperator {
    pub nu: f64,
    pub cfg: PseudoSpectralConfig,
}

impl Default for BurgersReferenceOperator {
    fn default() -> Self {
        BurgersReferenceOperator { nu: 0.01, cfg: PseudoSpectralConfig::default() }
    }
}

impl Operator1D for BurgersReferenceOperator {
    fn name(&self) -> &str {
        "burgers-pseudo-spectral"
    }

    fn group(&self) -> GroupId {
        GroupId::Burgers
    }

    fn evaluate(&self, ic: &Field1D, t: f64, xs: &[f64]) -> Result<Vec<f64>> {
        let fine = pseudospectral_fine(ic, self.nu, &[t], &self.cfg)?;
        let s = PeriodicSeries::from_samples(&fine[0], ic.x_lo, ic.length());
        Ok(xs.iter().map(|&x| s.eval(x)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{gen_grf_ic, GrfParams};

    fn rel_l2(a: &[f64], b: &[f64]) -> f64 {
        let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
        let den: f64 = b.iter().map(|y| y * y).sum();
        (num / den).sqrt()
    }

    #[test]
    fn zero_stays_zero() {
        let ic = Field1D::from_fn(0.0, 1.0, 65, 0.0, true, |_| 0.0).unwrap();
        let out = burgers_solve(&ic, 0.01, &[0.5, 1.0]).unwrap();
        assert!(out.iter().all(|f| f.values.iter().all(|u| u.abs() < 1e-15)));
    }

    #[test]
    fn small_sine_follows_linear_decay() {
        let a = 1e-4;
        let nu = 0.01;
        let ic = Field1D::from_fn(0.0, 1.0, 129, 0.0, true, |x| a * (std::f64::consts::TAU * x).sin()).unwrap();
        let out = burgers_solve(&ic, nu, &[1.0]).unwrap();
        let decay = (-nu * std::f64::consts::TAU.powi(2)).exp();
        for (x, u) in out[0].grid().iter().zip(&out[0].values) {
            assert!((u - a * decay * (std::f64::consts::TAU * x).sin()).abs() < 10.0 * a * a);
        }
    }

    #[test]
    fn nonzero_mean_is_rejected() {
        let ic = Field1D::from_fn(0.0, 1.0, 65, 0.0, true, |x| 0.1 + x.sin()).unwrap();
        assert!(matches!(burgers_solve(&ic, 0.01, &[1.0]), Err(Error::NonZeroMean(_))));
    }

    #[test]
    fn cole_hopf_matches_pseudo_spectral() {
        let ic = gen_grf_ic(&GrfParams::default(), 257, 3).unwrap();
        let times = [0.5, 1.0];
        let ch = burgers_solve(&ic, 0.01, &times).unwrap();
        let ps = burgers_pseudospectral_solve(&ic, 0.01, &times, &PseudoSpectralConfig::default()).unwrap();
        for (a, b) in ch.iter().zip(&ps) {
            assert!(rel_l2(&a.values, &b.values) < 1e-4);
            assert!((a.mean() - ic.mean()).abs() < 1e-10);
        }
    }

    #[test]
    fn galilean_boost_covariance() {
        let nu = 0.01;
        let c = 0.3;
        let ic = gen_grf_ic(&GrfParams::default(), 129, 5).unwrap();
        let boosted = Field1D { values: ic.values.iter().map(|u| u + c).collect(), ..ic.clone() };
        let t = 0.8;
        let direct = burgers_pseudospectral_solve(&ic, nu, &[t], &PseudoSpectralConfig::default()).unwrap();
        let op = BurgersReferenceOperator::default();
        let xs: Vec<f64> = ic.grid().iter().map(|x| x + c * t).collect();
        let moved = op.evaluate(&boosted, t, &xs).unwrap();
        let unboosted: Vec<f64> = moved.iter().map(|u| u - c).collect();
        assert!(rel_l2(&unboosted, &direct[0].values) < 1e-6);
    }
}
