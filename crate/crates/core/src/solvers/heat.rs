use serde::{Deserialize, Serialize};

use super::{closed, elapsed, series_of};
use crate::error::{Error, Result};
use crate::fields::Field1D;
use crate::lie::GroupId;
use crate::pipeline::Operator1D;

/// Periodic heat equation `u_t = ν u_xx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct HeatConfig {
    pub nu: f64,
    /// Highest retained mode; `None` keeps every resolved mode.
    pub n_modes: Option<usize>,
}

impl Default for HeatConfig {
    fn default() -> Self {
        HeatConfig { nu: 0.1, n_modes: None }
    }
}

impl HeatConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return Err(Error::InvalidArgument("heat diffusivity must be positive".into()));
        }
        Ok(())
    }

    fn filter(&self, t: f64) -> impl Fn(f64) -> f64 {
        let nu = self.nu;
        move |w: f64| (-nu * w * w * t).exp()
    }

    fn truncate(&self, k: usize) -> bool {
        self.n_modes.is_some_and(|n| k > n)
    }
}

/// Exact Fourier-mode decay `e^{−ν k² t}` of a periodic initial condition.
///
/// Returns the solution on the grid of `ic` at each requested time; `t = ic.time` returns `ic`
/// unchanged and the zero mode is conserved exactly.
pub fn heat_spectral_solve(ic: &Field1D, cfg: &HeatConfig, times: &[f64]) -> Result<Vec<Field1D>> {
    cfg.validate()?;
    let series = series_of(ic)?;
    times
        .iter()
        .map(|&t| {
            let dt = elapsed(ic.time, t)?;
            if dt == 0.0 && cfg.n_modes.is_none() {
                return Ok(Field1D { time: t, ..ic.clone() });
            }
            let mut s = series.scaled(cfg.filter(dt));
            for (k, c) in s.coeffs.iter_mut().enumerate() {
                if cfg.truncate(k) {
                    *c = 0.0.into();
                }
            }
            Field1D::new(ic.x_lo, ic.x_hi, closed(s.to_samples()), t, true)
        })
        .collect()
}

/// [`heat_spectral_solve`] as a pipeline operator evaluated by trigonometric interpolation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HeatOperator {
    pub cfg: HeatConfig,
}

impl Operator1D for HeatOperator {
    fn name(&self) -> &str {
        "heat-spectral"
    }

    fn group(&self) -> GroupId {
        GroupId::Heat
    }

    fn evaluate(&self, ic: &Field1D, t: f64, xs: &[f64]) -> Result<Vec<f64>> {
        self.cfg.validate()?;
        let dt = elapsed(ic.time, t)?;
        let mut s = series_of(ic)?.scaled(self.cfg.filter(dt));
        for (k, c) in s.coeffs.iter_mut().enumerate() {
            if self.cfg.truncate(k) {
                *c = 0.0.into();
            }
        }
        Ok(xs.iter().map(|&x| s.eval(x)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine(n: usize, f: impl Fn(f64) -> f64) -> Field1D {
        Field1D::from_fn(0.0, std::f64::consts::TAU, n, 0.0, true, f).unwrap()
    }

    #[test]
    fn single_mode_decays_exactly() {
        let ic = sine(257, |x| (2.0 * x).sin());
        let out = heat_spectral_solve(&ic, &HeatConfig::default(), &[1.0]).unwrap();
        let decay = (-0.4f64).exp();
        for (x, u) in out[0].grid().iter().zip(&out[0].values) {
            assert!((u - decay * (2.0 * x).sin()).abs() < 1e-12);
        }
        assert!((out[0].max() - 0.670320046).abs() < 1e-6);
    }

    #[test]
    fn constant_is_stationary_and_t0_is_bitwise() {
        let ic = sine(65, |_| 0.7);
        let out = heat_spectral_solve(&ic, &HeatConfig::default(), &[0.0, 3.0]).unwrap();
        assert_eq!(out[0].values, ic.values);
        assert!(out[1].values.iter().all(|u| (u - 0.7).abs() < 1e-14));
    }

    #[test]
    fn linear_in_initial_condition() {
        let a = sine(129, |x| x.sin() + 0.3 * (5.0 * x).cos());
        let b = sine(129, |x| (3.0 * x).cos() - 0.2);
        let ab = sine(129, |x| 2.0 * (x.sin() + 0.3 * (5.0 * x).cos()) - 3.0 * ((3.0 * x).cos() - 0.2));
        let cfg = HeatConfig::default();
        let (sa, sb, sab) = (
            heat_spectral_solve(&a, &cfg, &[0.7]).unwrap(),
            heat_spectral_solve(&b, &cfg, &[0.7]).unwrap(),
            heat_spectral_solve(&ab, &cfg, &[0.7]).unwrap(),
        );
        for i in 0..129 {
            assert!((sab[0].values[i] - 2.0 * sa[0].values[i] + 3.0 * sb[0].values[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn mass_is_conserved() {
        let ic = sine(257, |x| 0.4 + x.sin() * (2.0 * x).cos());
        let out = heat_spectral_solve(&ic, &HeatConfig::default(), &[5.0]).unwrap();
        assert!((out[0].mean() - ic.mean()).abs() < 1e-14);
    }

    #[test]
    fn operator_matches_grid_solve() {
        let ic = sine(257, |x| (x + 0.3).sin() + 0.5 * (4.0 * x).sin());
        let op = HeatOperator::default();
        let grid = heat_spectral_solve(&ic, &op.cfg, &[2.0]).unwrap();
        let vals = op.evaluate(&ic, 2.0, &ic.grid()).unwrap();
        for (a, b) in vals.iter().zip(&grid[0].values) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_periodic_and_past_times() {
        let mut ic = sine(33, |x| x.sin());
        assert!(heat_spectral_solve(&ic, &HeatConfig::default(), &[-1.0]).is_err());
        ic.periodic = false;
        assert!(matches!(heat_spectral_solve(&ic, &HeatConfig::default(), &[1.0]), Err(Error::NotPeriodic)));
    }
}
