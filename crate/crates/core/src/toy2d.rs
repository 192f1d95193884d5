//! Ring-mixture classification with rotation canonicalization.
//!
//! Points on concentric rings are labeled by ring. A kernel density estimate of the training
//! points serves as the energy; every point is rotated about the origin to a density maximum
//! on its circle before k-nearest-neighbor classification.

use std::f64::consts::{PI, TAU};
use std::fmt::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::energy::KdeEnergy;
use crate::error::{Error, Result};
use crate::lie::So2Element;
use crate::optim::{multi_init_from, Algorithm, CanonResult, OptimConfig, So2Action};

/// Planar points with integer labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPoints2D {
    pub points: Vec<[f64; 2]>,
    pub labels: Vec<usize>,
}

impl LabeledPoints2D {
    pub fn new(points: Vec<[f64; 2]>, labels: Vec<usize>) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), got: labels.len() });
        }
        Ok(LabeledPoints2D { points, labels })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Mean distance of the points from the origin.
    pub fn mean_radius(&self) -> f64 {
        self.points.iter().map(|p| p[0].hypot(p[1])).sum::<f64>() / self.len() as f64
    }
}

/// Gaussian lobes at equispaced angles on each ring; odd rings are offset by half a lobe spacing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct RingMixture {
    pub radii: Vec<f64>,
    pub lobes: usize,
    /// Angular standard deviation of each lobe in radians.
    pub lobe_std: f64,
    /// Radial noise standard deviation.
    pub noise_std: f64,
}

impl Default for RingMixture {
    fn default() -> Self {
        RingMixture { radii: vec![1.0, 1.5], lobes: 3, lobe_std: 0.1, noise_std: 0.05 }
    }
}

impl RingMixture {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        if self.radii.is_empty() || self.radii.iter().any(|r| !(*r > 0.0)) {
            return bad("radii must be positive");
        }
        for (i, a) in self.radii.iter().enumerate() {
            if self.radii[..i].contains(a) {
                return bad("radii must be distinct");
            }
        }
        if self.lobes == 0 || !(self.lobe_std >= 0.0) || !(self.noise_std >= 0.0) {
            return bad("lobes must be ≥ 1 and standard deviations nonnegative");
        }
        Ok(())
    }

    /// Center angle of lobe `j` on ring `ring`.
    pub fn lobe_angle(&self, ring: usize, j: usize) -> f64 {
        let spacing = TAU / self.lobes as f64;
        j as f64 * spacing + if ring % 2 == 1 { 0.5 * spacing } else { 0.0 }
    }

    /// `n_per_ring` points per ring cycling through the lobes; labels are ring indices.
    pub fn sample(&self, n_per_ring: usize, seed: u64) -> Result<LabeledPoints2D> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ang = Normal::new(0.0, self.lobe_std).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let rad = Normal::new(0.0, self.noise_std).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let mut points = Vec::with_capacity(n_per_ring * self.radii.len());
        let mut labels = Vec::with_capacity(points.capacity());
        for (ring, &r) in self.radii.iter().enumerate() {
            for i in 0..n_per_ring {
                let theta = self.lobe_angle(ring, i % self.lobes) + ang.sample(&mut rng);
                let rr = if self.noise_std > 0.0 { r + rad.sample(&mut rng) } else { r };
                points.push([rr * theta.cos(), rr * theta.sin()]);
                labels.push(ring);
            }
        }
        LabeledPoints2D::new(points, labels)
    }
}

/// Samples the default three-lobe mixture with the given radii and radial noise.
pub fn sample_ring_mixture(n_per_ring: usize, radii: &[f64], noise_std: f64, seed: u64) -> Result<LabeledPoints2D> {
    RingMixture { radii: radii.to_vec(), noise_std, ..RingMixture::default() }.sample(n_per_ring, seed)
}

/// Majority label among the `k` nearest training points; distance ties keep the lower index and
/// vote ties go to the smaller label.
pub fn knn_classify(train: &LabeledPoints2D, k: usize, query: [f64; 2]) -> usize {
    assert!(k >= 1 && k <= train.len(), "k must lie in 1..=n");
    let mut order: Vec<(f64, usize)> = train
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| ((p[0] - query[0]).powi(2) + (p[1] - query[1]).powi(2), i))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let n_labels = train.labels.iter().max().map_or(0, |m| m + 1);
    let mut votes = vec![0usize; n_labels];
    for &(_, i) in &order[..k] {
        votes[train.labels[i]] += 1;
    }
    let best = *votes.iter().max().unwrap();
    votes.iter().position(|&v| v == best).unwrap()
}

/// Optimizer settings for rotation canonicalization: `num_inits` starts on an even angle grid.
pub fn toy_optim_config() -> OptimConfig {
    OptimConfig { num_inits: 16, n_steps: 100, eta0: 0.02, grad_tol: 1e-7, ..OptimConfig::default() }
}

/// Rotates `point` to a minimizer of the KDE negative log-likelihood on its circle.
///
/// Descent starts from `cfg.num_inits` angles `2πk/num_inits`, so start 0 is the identity.
pub fn so2_canonicalize(
    train_samples: &[[f64; 2]],
    h: f64,
    point: [f64; 2],
    cfg: &OptimConfig,
) -> Result<CanonResult<So2Element, [f64; 2]>> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument("bandwidth must be positive".into()));
    }
    cfg.validate()?;
    let energy = KdeEnergy { samples: train_samples.to_vec(), h };
    let inits: Vec<Vec<f64>> = (0..cfg.num_inits).map(|k| vec![TAU * k as f64 / cfg.num_inits as f64]).collect();
    multi_init_from(Algorithm::GlobalRetraction, &So2Action, &energy, &point, cfg, &inits)
}

/// A kNN classifier on canonicalized inputs.
#[derive(Debug, Clone)]
pub struct CanonicalKnn {
    /// KDE samples defining the energy (the raw training points).
    pub samples: Vec<[f64; 2]>,
    /// Training set mapped to canonical positions.
    pub canonical: LabeledPoints2D,
    pub h: f64,
    pub k: usize,
    pub cfg: OptimConfig,
}

impl CanonicalKnn {
    /// Canonicalizes every training point in parallel.
    pub fn fit(train: &LabeledPoints2D, h: f64, k: usize, cfg: &OptimConfig) -> Result<Self> {
        let canon: Vec<[f64; 2]> = train
            .points
            .par_iter()
            .map(|&p| so2_canonicalize(&train.points, h, p, cfg).map(|r| r.canonical))
            .collect::<Result<_>>()?;
        Ok(CanonicalKnn {
            samples: train.points.clone(),
            canonical: LabeledPoints2D::new(canon, train.labels.clone())?,
            h,
            k,
            cfg: cfg.clone(),
        })
    }

    pub fn canonicalize(&self, p: [f64; 2]) -> Result<[f64; 2]> {
        Ok(so2_canonicalize(&self.samples, self.h, p, &self.cfg)?.canonical)
    }

    pub fn predict(&self, p: [f64; 2]) -> Result<usize> {
        Ok(knn_classify(&self.canonical, self.k, self.canonicalize(p)?))
    }
}

/// Default KDE bandwidth: `0.2` times the mean sample radius.
pub fn default_bandwidth(train: &LabeledPoints2D) -> f64 {
    0.2 * train.mean_radius()
}

/// Rectangular lattice for decision-boundary export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Lattice {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Default for Lattice {
    fn default() -> Self {
        Lattice { x_lo: -2.0, x_hi: 2.0, y_lo: -2.0, y_hi: 2.0, nx: 41, ny: 41 }
    }
}

impl Lattice {
    pub fn points(&self) -> Vec<[f64; 2]> {
        let step = |lo: f64, hi: f64, n: usize, i: usize| if n > 1 { lo + (hi - lo) * i as f64 / (n - 1) as f64 } else { lo };
        (0..self.ny)
            .flat_map(|j| (0..self.nx).map(move |i| [step(self.x_lo, self.x_hi, self.nx, i), step(self.y_lo, self.y_hi, self.ny, j)]))
            .collect()
    }
}

/// `x,y,label_raw,label_canon` rows over the lattice: raw kNN against canonicalized kNN.
pub fn decision_boundary_csv(train: &LabeledPoints2D, model: &CanonicalKnn, lattice: &Lattice) -> Result<String> {
    let pts = lattice.points();
    let rows: Vec<(usize, usize)> = pts
        .par_iter()
        .map(|&p| Ok((knn_classify(train, model.k, p), model.predict(p)?)))
        .collect::<Result<_>>()?;
    let mut out = String::from("x,y,label_raw,label_canon\n");
    for (p, (raw, canon)) in pts.iter().zip(rows) {
        writeln!(out, "{:.16e},{:.16e},{raw},{canon}", p[0], p[1]).expect("writing to a String cannot fail");
    }
    Ok(out)
}

/// Rotates a point by `theta` about the origin.
pub fn rotate(p: [f64; 2], theta: f64) -> [f64; 2] {
    So2Element::new(theta).apply(p)
}

/// Angle of a point in `(−π, π]`.
pub fn angle_of(p: [f64; 2]) -> f64 {
    let a = p[1].atan2(p[0]);
    if a <= -PI {
        a + TAU
    } else {
        a
    }
}
