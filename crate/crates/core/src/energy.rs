//! Energies over problem instances: KDE negative log-likelihood, the heat and Burgers
//! training-domain distances and the constrained Allen–Cahn energy.

use rustfft::num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::Arc;

use crate::fields::{jet_bounds, Field1D, Field2D, QueryRegion};
use crate::fourier::{quarter_turn_sources, Fft2dPlan};
use crate::lie::GroupId;

/// Finite stand-in for `+∞` returned by characteristic-function constraints.
pub const SENTINEL: f64 = 1e9;

/// An energy over instances of type `X`.
///
/// Energies that are sums of absolute values may also expose the residual vector `r` with
/// `energy = Σ |r_k|`; Gauss–Newton descent uses it.
pub trait Energy<X>: Sync {
    fn energy(&self, x: &X) -> f64;

    fn residuals(&self, _x: &X) -> Option<Vec<f64>> {
        None
    }
}

/// Wraps a closure as an [`Energy`].
pub struct FnEnergy<F>(pub F);

impl<X, F: Fn(&X) -> f64 + Sync> Energy<X> for FnEnergy<F> {
    fn energy(&self, x: &X) -> f64 {
        (self.0)(x)
    }
}

/// Adds `alpha · R(x)` to a base energy; `R` must be nonnegative.
pub struct Regularized<X, E> {
    pub base: E,
    pub alpha: f64,
    pub reg: Arc<dyn Fn(&X) -> f64 + Send + Sync>,
}

impl<X, E: Energy<X>> Energy<X> for Regularized<X, E> {
    fn energy(&self, x: &X) -> f64 {
        let b = self.base.energy(x);
        if self.alpha == 0.0 {
            b
        } else {
            b + self.alpha * (self.reg)(x)
        }
    }

    fn residuals(&self, x: &X) -> Option<Vec<f64>> {
        let mut r = self.base.residuals(x)?;
        if self.alpha != 0.0 {
            r.push(self.alpha * (self.reg)(x));
        }
        Some(r)
    }
}

/// Distance from `v` to the interval `[lo, hi]`.
pub fn dist_interval(v: f64, lo: f64, hi: f64) -> f64 {
    if v < lo {
        lo - v
    } else if v > hi {
        v - hi
    } else {
        0.0
    }
}

/// Negative log-likelihood of `point` under a Gaussian KDE with bandwidth `h`.
///
/// `−log((1/N) Σ_i (2πh²)^{−d/2} exp(−|point − s_i|²/(2h²)))`, evaluated with log-sum-exp.
pub fn kde_nll<S: AsRef<[f64]>>(samples: &[S], h: f64, point: &[f64]) -> f64 {
    let d = point.len() as f64;
    let inv = 1.0 / (2.0 * h * h);
    let mut top = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for s in samples {
        let r2: f64 = s.as_ref().iter().zip(point).map(|(a, b)| (a - b) * (a - b)).sum();
        let e = -r2 * inv;
        if e > top {
            sum = sum * (top - e).exp() + 1.0;
            top = e;
        } else {
            sum += (e - top).exp();
        }
    }
    let log_mean = top + sum.ln() - (samples.len() as f64).ln();
    0.5 * d * (2.0 * PI * h * h).ln() - log_mean
}

/// KDE negative log-likelihood as an energy over planar points.
#[derive(Debug, Clone)]
pub struct KdeEnergy {
    pub samples: Vec<[f64; 2]>,
    pub h: f64,
}

impl Energy<[f64; 2]> for KdeEnergy {
    fn energy(&self, x: &[f64; 2]) -> f64 {
        kde_nll(&self.samples, self.h, x)
    }
}

/// A 1D problem: an initial condition and the region where the solution is queried.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub field: Field1D,
    pub query: QueryRegion,
}

impl ProblemInstance {
    pub fn new(field: Field1D, query: QueryRegion) -> Self {
        ProblemInstance { field, query }
    }
}

/// How the heat energy treats the query-time window `[tf_lo, tf_hi]` against the horizon `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TfMode {
    /// `dist(tf_lo, [0,H]) + dist(tf_hi, [0,H])`.
    Interval,
    /// `|tf_lo − H| + |tf_hi − H|`.
    Point,
    /// `dist(tf_lo, [0,H]) + |tf_hi − H|`: the window must lie in `[0,H]` and end at `H`.
    Horizon,
}

/// Training box of the heat experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct HeatDomainConfig {
    pub u_lo: f64,
    pub u_hi: f64,
    pub x_lo: f64,
    pub x_hi: f64,
    pub t0: f64,
    pub horizon: f64,
    pub tf_mode: TfMode,
}

impl Default for HeatDomainConfig {
    fn default() -> Self {
        HeatDomainConfig { u_lo: -1.0, u_hi: 1.0, x_lo: 0.0, x_hi: TAU, t0: 0.0, horizon: 16.0, tf_mode: TfMode::Horizon }
    }
}

/// Signed residuals whose absolute values sum to [`e_heat`].
pub fn heat_residuals(inst: &ProblemInstance, cfg: &HeatDomainConfig) -> Vec<f64> {
    let b = jet_bounds(&inst.field);
    let w = inst.query.window();
    let h = cfg.horizon;
    let (r_lo, r_hi) = match cfg.tf_mode {
        TfMode::Interval => (dist_interval(w.tf_lo, 0.0, h), dist_interval(w.tf_hi, 0.0, h)),
        TfMode::Point => (w.tf_lo - h, w.tf_hi - h),
        TfMode::Horizon => (dist_interval(w.tf_lo, 0.0, h), w.tf_hi - h),
    };
    vec![
        b.u_max - cfg.u_hi,
        b.u_min - cfg.u_lo,
        b.x_max - cfg.x_hi,
        b.x_min - cfg.x_lo,
        b.t_max - cfg.t0,
        b.t_min - cfg.t0,
        dist_interval(w.xf_lo, cfg.x_lo, cfg.x_hi),
        dist_interval(w.xf_hi, cfg.x_lo, cfg.x_hi),
        r_lo,
        r_hi,
    ]
}

/// Distance of a heat instance to the training box: jet extrema against `([u_lo,u_hi], [x_lo,x_hi], t0)`
/// summed in ℓ1, plus the spatial and temporal query terms.
pub fn e_heat(inst: &ProblemInstance, cfg: &HeatDomainConfig) -> f64 {
    heat_residuals(inst, cfg).iter().map(|r| r.abs()).sum()
}

/// [`e_heat`] as an [`Energy`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct HeatDomainEnergy(pub HeatDomainConfig);

impl Energy<ProblemInstance> for HeatDomainEnergy {
    fn energy(&self, x: &ProblemInstance) -> f64 {
        e_heat(x, &self.0)
    }

    fn residuals(&self, x: &ProblemInstance) -> Option<Vec<f64>> {
        Some(heat_residuals(x, &self.0))
    }
}

/// How the Burgers energy treats the initial time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum T0Mode {
    /// Distance to `{0}`.
    Point,
    /// Distance to `[t_lo, t_hi]`.
    Interval,
}

/// Training box of the Burgers experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct BurgersDomainConfig {
    pub length: f64,
    pub x_lo: f64,
    pub x_hi: f64,
    pub t_lo: f64,
    pub t_hi: f64,
    pub t0_mode: T0Mode,
}

impl Default for BurgersDomainConfig {
    fn default() -> Self {
        BurgersDomainConfig { length: 1.0, x_lo: 0.0, x_hi: 1.0, t_lo: 0.0, t_hi: 1.0, t0_mode: T0Mode::Point }
    }
}

/// Signed residuals whose absolute values sum to [`e_burgers`].
///
/// The spatial query term vanishes for periodic fields, whose solutions are defined on all of ℝ.
pub fn burgers_residuals(inst: &ProblemInstance, cfg: &BurgersDomainConfig) -> Vec<f64> {
    let f = &inst.field;
    let w = inst.query.window();
    let t0 = match cfg.t0_mode {
        T0Mode::Point => f.time,
        T0Mode::Interval => dist_interval(f.time, cfg.t_lo, cfg.t_hi),
    };
    let (xq_lo, xq_hi) = if f.periodic {
        (0.0, 0.0)
    } else {
        (dist_interval(w.xf_lo, cfg.x_lo, cfg.x_hi), dist_interval(w.xf_hi, cfg.x_lo, cfg.x_hi))
    };
    vec![
        f.length() - cfg.length,
        t0,
        f.mean(),
        xq_lo,
        xq_hi,
        dist_interval(w.tf_lo, cfg.t_lo, cfg.t_hi),
        dist_interval(w.tf_hi, cfg.t_lo, cfg.t_hi),
    ]
}

/// Distance of a Burgers instance to the training box (unit length, `t0 = 0`, zero mean, queries in `[0,1]²`).
pub fn e_burgers(inst: &ProblemInstance, cfg: &BurgersDomainConfig) -> f64 {
    burgers_residuals(inst, cfg).iter().map(|r| r.abs()).sum()
}

/// [`e_burgers`] as an [`Energy`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BurgersDomainEnergy(pub BurgersDomainConfig);

impl Energy<ProblemInstance> for BurgersDomainEnergy {
    fn energy(&self, x: &ProblemInstance) -> f64 {
        e_burgers(x, &self.0)
    }

    fn residuals(&self, x: &ProblemInstance) -> Option<Vec<f64>> {
        Some(burgers_residuals(x, &self.0))
    }
}

/// A 2D Allen–Cahn problem on the periodic unit square.
///
/// `domain_angle` records the rotation accumulated by the spatial domain, which a resampled
/// periodic field cannot represent on its own; the initial time is `field.time`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AceInstance {
    pub field: Field2D,
    pub tf_lo: f64,
    pub tf_hi: f64,
    pub domain_angle: f64,
}

impl AceInstance {
    pub fn new(field: Field2D, tf_lo: f64, tf_hi: f64) -> Self {
        AceInstance { field, tf_lo, tf_hi, domain_angle: 0.0 }
    }
}

/// An energy over periodic 2D fields, with an optional fast path over all cyclic translations.
pub trait FieldEnergy2D: Sync {
    fn energy(&self, f: &Field2D) -> f64;

    /// `out[sy·nx + sx] = energy(f.shifted(sx, sy))`; may carry round-off relative to [`Self::energy`].
    fn translation_energies(&self, f: &Field2D) -> Vec<f64> {
        let mut out = vec![0.0; f.nx * f.ny];
        for sy in 0..f.ny {
            for sx in 0..f.nx {
                out[sy * f.nx + sx] = self.energy(&f.shifted(sx, sy));
            }
        }
        out
    }

    /// Translation energies of each quarter-turn rotation: `out[k] = translation_energies(f.rotated_quarter(k))`.
    fn orbit_energies(&self, f: &Field2D) -> Vec<Vec<f64>> {
        (0..4).map(|k| self.translation_energies(&f.rotated_quarter(k))).collect()
    }
}

/// Wraps a closure as a [`FieldEnergy2D`].
pub struct FnFieldEnergy<F>(pub F);

impl<F: Fn(&Field2D) -> f64 + Sync> FieldEnergy2D for FnFieldEnergy<F> {
    fn energy(&self, f: &Field2D) -> f64 {
        (self.0)(f)
    }
}

/// Linear template energy `E(u) = −(1/N) Σ_p w(p) u(p)`; translation energies by FFT correlation.
#[derive(Debug, Clone)]
pub struct TemplateEnergy {
    pub nx: usize,
    pub ny: usize,
    pub weights: Vec<f64>,
    spectrum: Vec<Complex<f64>>,
    plan: Fft2dPlan,
    rotations: Vec<Vec<usize>>,
    scale: f64,
    sparse: Option<SparseTemplate>,
}

/// Nonzero template modes with twiddle tables, used when the template spectrum is sparse.
#[derive(Debug, Clone)]
struct SparseTemplate {
    /// `(qx, qy, W_q)` for every nonzero bin.
    modes: Vec<(usize, usize, Complex<f64>)>,
    /// `tw_x[p·nx + x] = e^{−2πi p x / nx}`.
    tw_x: Vec<Complex<f64>>,
    tw_y: Vec<Complex<f64>>,
}

const SPARSE_REL_TOL: f64 = 1e-12;
const SPARSE_MAX_FRACTION: usize = 64;

fn twiddles(n: usize) -> Vec<Complex<f64>> {
    (0..n * n).map(|i| Complex::from_polar(1.0, -TAU * ((i / n) * (i % n) % n) as f64 / n as f64)).collect()
}

impl SparseTemplate {
    fn detect(nx: usize, ny: usize, spectrum: &[Complex<f64>]) -> Option<Self> {
        let peak = spectrum.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let modes: Vec<_> = spectrum
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > SPARSE_REL_TOL * peak)
            .map(|(i, &c)| (i % nx, i / nx, c))
            .collect();
        (modes.len() * SPARSE_MAX_FRACTION <= nx * ny).then(|| SparseTemplate { modes, tw_x: twiddles(nx), tw_y: twiddles(ny) })
    }

    /// Field DFT at bin `(px, py)`, reusing row sums per `px`.
    fn bin(&self, f: &Field2D, rows: &mut Vec<(usize, Vec<Complex<f64>>)>, px: usize, py: usize) -> Complex<f64> {
        let (nx, ny) = (f.nx, f.ny);
        let pos = match rows.iter().position(|(p, _)| *p == px) {
            Some(pos) => pos,
            None => {
                let tw = &self.tw_x[px * nx..(px + 1) * nx];
                let r = (0..ny).map(|y| f.values[y * nx..(y + 1) * nx].iter().zip(tw).map(|(u, t)| t * u).sum()).collect();
                rows.push((px, r));
                rows.len() - 1
            }
        };
        rows[pos].1.iter().zip(&self.tw_y[py * ny..(py + 1) * ny]).map(|(r, t)| r * t).sum()
    }

    /// `out[s] = −(1/scale) Re Σ_q c_q e^{+2πi q·s}` over all translations `s`.
    fn synthesize(&self, nx: usize, ny: usize, coeffs: &[Complex<f64>], scale: f64) -> Vec<f64> {
        let mut out = vec![0.0; nx * ny];
        for (&(qx, qy, _), c) in self.modes.iter().zip(coeffs) {
            let ex = &self.tw_x[qx * nx..(qx + 1) * nx];
            for (sy, row) in out.chunks_mut(nx).enumerate() {
                let a = c * self.tw_y[qy * ny + sy].conj();
                for (o, e) in row.iter_mut().zip(ex) {
                    *o -= (a.re * e.re + a.im * e.im) / scale;
                }
            }
        }
        out
    }
}

impl TemplateEnergy {
    pub fn new(nx: usize, ny: usize, weights: Vec<f64>) -> Self {
        assert_eq!(weights.len(), nx * ny, "template size mismatch");
        let plan = Fft2dPlan::new(nx, ny);
        let mut spectrum: Vec<Complex<f64>> = weights.iter().map(|&w| Complex::new(w, 0.0)).collect();
        plan.process(&mut spectrum, false);
        let rotations = if nx == ny { (0..4u8).map(|k| quarter_turn_sources(nx, k)).collect() } else { Vec::new() };
        let scale = ((nx * ny) as f64).powi(2);
        let sparse = SparseTemplate::detect(nx, ny, &spectrum);
        TemplateEnergy { nx, ny, weights, spectrum, plan, rotations, scale, sparse }
    }

    /// A smooth template without rotational or translational symmetry.
    pub fn standard(n: usize) -> Self {
        let f = |x: f64, y: f64| {
            (TAU * x).cos() + 0.6 * (TAU * (x + 2.0 * y) + 0.3).sin() + 0.35 * (TAU * (3.0 * x - y) + 1.1).cos() + 0.2 * (TAU * 2.0 * y + 0.7).sin()
        };
        let mut w = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                w.push(f(i as f64 / n as f64, j as f64 / n as f64));
            }
        }
        TemplateEnergy::new(n, n, w)
    }
}

impl FieldEnergy2D for TemplateEnergy {
    fn energy(&self, f: &Field2D) -> f64 {
        let s: f64 = self.weights.iter().zip(&f.values).map(|(w, u)| w * u).sum();
        -s / (f.nx * f.ny) as f64
    }

    fn translation_energies(&self, f: &Field2D) -> Vec<f64> {
        assert!(f.nx == self.nx && f.ny == self.ny, "template size mismatch");
        if let Some(sp) = &self.sparse {
            let mut rows = Vec::new();
            let coeffs: Vec<Complex<f64>> = sp.modes.iter().map(|&(qx, qy, w)| w * sp.bin(f, &mut rows, qx, qy).conj()).collect();
            return sp.synthesize(f.nx, f.ny, &coeffs, self.scale);
        }
        let mut buf: Vec<Complex<f64>> = f.values.iter().map(|&u| Complex::new(u, 0.0)).collect();
        self.plan.process(&mut buf, false);
        self.correlate(&buf)
    }

    fn orbit_energies(&self, f: &Field2D) -> Vec<Vec<f64>> {
        assert!(f.nx == self.nx && f.ny == self.ny && f.nx == f.ny, "template size mismatch");
        if let Some(sp) = &self.sparse {
            let n = f.nx;
            let mut rows = Vec::new();
            return self
                .rotations
                .iter()
                .map(|src| {
                    let coeffs: Vec<Complex<f64>> = sp
                        .modes
                        .iter()
                        .map(|&(qx, qy, w)| {
                            let b = src[qy * n + qx];
                            w * sp.bin(f, &mut rows, b % n, b / n).conj()
                        })
                        .collect();
                    sp.synthesize(n, n, &coeffs, self.scale)
                })
                .collect();
        }
        let mut spec: Vec<Complex<f64>> = f.values.iter().map(|&u| Complex::new(u, 0.0)).collect();
        self.plan.process(&mut spec, false);
        let products: Vec<Vec<Complex<f64>>> = self
            .rotations
            .iter()
            .map(|src| src.iter().zip(&self.spectrum).map(|(&s, w)| w * spec[s].conj()).collect())
            .collect();
        let mut out = Vec::with_capacity(4);
        for pair in products.chunks(2) {
            let i = Complex::new(0.0, 1.0);
            let mut buf: Vec<Complex<f64>> = pair[0].iter().zip(&pair[1]).map(|(a, b)| a + i * b).collect();
            self.plan.process(&mut buf, true);
            out.push(buf.iter().map(|c| -c.re / self.scale).collect());
            out.push(buf.iter().map(|c| -c.im / self.scale).collect());
        }
        out
    }
}

impl TemplateEnergy {
    /// Energies of all cyclic translations from the spectrum of the field.
    fn correlate(&self, spectrum: &[Complex<f64>]) -> Vec<f64> {
        let mut buf: Vec<Complex<f64>> = spectrum.iter().zip(&self.spectrum).map(|(b, w)| w * b.conj()).collect();
        self.plan.process(&mut buf, true);
        buf.iter().map(|c| -c.re / self.scale).collect()
    }
}

/// Constraint tolerance of the Allen–Cahn energy.
pub const ACE_CONSTRAINT_TOL: f64 = 1e-9;

/// True when the domain is a quarter-turn image of the square, `t0 = 0` and `t_f ⊆ [0, 1]`, within `tol`.
pub fn ace_constraints_hold(inst: &AceInstance, tol: f64) -> bool {
    let k = (inst.domain_angle / FRAC_PI_2).round();
    let angle_ok = (inst.domain_angle - k * FRAC_PI_2).abs() <= tol;
    let t0_ok = inst.field.time.abs() <= tol;
    let tf_ok = dist_interval(inst.tf_lo, 0.0, 1.0) <= tol && dist_interval(inst.tf_hi, 0.0, 1.0) <= tol;
    angle_ok && t0_ok && tf_ok
}

/// `inner(u₀)` when every characteristic constraint holds within [`ACE_CONSTRAINT_TOL`], [`SENTINEL`] otherwise.
pub fn e_ace(inst: &AceInstance, inner: &dyn FieldEnergy2D) -> f64 {
    if ace_constraints_hold(inst, ACE_CONSTRAINT_TOL) {
        inner.energy(&inst.field)
    } else {
        SENTINEL
    }
}

/// The constrained Allen–Cahn energy as an [`Energy`].
pub struct AceEnergy<I> {
    pub inner: I,
    pub tol: f64,
}

impl<I> AceEnergy<I> {
    pub fn new(inner: I) -> Self {
        AceEnergy { inner, tol: ACE_CONSTRAINT_TOL }
    }
}

impl<I: FieldEnergy2D> Energy<AceInstance> for AceEnergy<I> {
    fn energy(&self, x: &AceInstance) -> f64 {
        if ace_constraints_hold(x, self.tol) {
            self.inner.energy(&x.field)
        } else {
            SENTINEL
        }
    }
}

/// Serializable energy selection used by run configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum EnergyConfig {
    KdeNll {
        bandwidth: f64,
    },
    HeatDomain {
        #[serde(default)]
        domain: HeatDomainConfig,
        #[serde(default)]
        alpha_reg: f64,
    },
    BurgersDomain {
        #[serde(default)]
        domain: BurgersDomainConfig,
        #[serde(default)]
        alpha_reg: f64,
    },
    AceConstrained {
        #[serde(default = "default_tol")]
        constraint_tol: f64,
    },
    Custom {
        name: String,
    },
}

fn default_tol() -> f64 {
    ACE_CONSTRAINT_TOL
}

impl EnergyConfig {
    /// Checks kind-specific parameter ranges.
    pub fn validate(&self) -> crate::Result<()> {
        let bad = |m: &str| Err(crate::Error::InvalidArgument(m.to_string()));
        match self {
            EnergyConfig::KdeNll { bandwidth } if !(*bandwidth > 0.0) => bad("KDE bandwidth must be positive"),
            EnergyConfig::HeatDomain { alpha_reg, .. } | EnergyConfig::BurgersDomain { alpha_reg, .. } if !(*alpha_reg >= 0.0) => {
                bad("alphaReg must be nonnegative")
            }
            EnergyConfig::AceConstrained { constraint_tol } if !(*constraint_tol > 0.0) => bad("constraint tolerance must be positive"),
            _ => Ok(()),
        }
    }

    /// The group this energy canonicalizes over.
    pub fn group(&self) -> Option<GroupId> {
        match self {
            EnergyConfig::KdeNll { .. } => Some(GroupId::So2),
            EnergyConfig::HeatDomain { .. } => Some(GroupId::Heat),
            EnergyConfig::BurgersDomain { .. } => Some(GroupId::Burgers),
            EnergyConfig::AceConstrained { .. } => Some(GroupId::Se2),
            EnergyConfig::Custom { .. } => None,
        }
    }
}
