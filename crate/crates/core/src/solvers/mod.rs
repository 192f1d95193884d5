//! Classical reference solvers on periodic domains and finite-difference residual checks.

mod ace;
mod burgers;
mod heat;
mod residual;

pub use ace::{ace_reaction, ace_solve, AceConfig};
pub use burgers::{burgers_pseudospectral_solve, burgers_solve, BurgersOperator, BurgersReferenceOperator, PseudoSpectralConfig, MEAN_TOL};
pub use heat::{heat_spectral_solve, HeatConfig, HeatOperator};
pub use residual::{pde_residual_fn, pde_residual_grid, PdeKind};

use crate::error::{Error, Result};
use crate::fields::Field1D;
use crate::fourier::PeriodicSeries;

fn series_of(ic: &Field1D) -> Result<PeriodicSeries> {
    if !ic.periodic {
        return Err(Error::NotPeriodic);
    }
    Ok(PeriodicSeries::from_samples(ic.period_samples(), ic.x_lo, ic.length()))
}

fn elapsed(ic_time: f64, t: f64) -> Result<f64> {
    let dt = t - ic_time;
    if !(dt >= 0.0) {
        return Err(Error::InvalidArgument(format!("requested time {t} precedes the initial time {ic_time}")));
    }
    Ok(dt)
}

/// Periodic samples extended by the copy of the first value at the right endpoint.
fn closed(mut samples: Vec<f64>) -> Vec<f64> {
    samples.push(samples[0]);
    samples
}
