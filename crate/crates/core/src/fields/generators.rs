use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::{Field1D, Field2D};
use crate::error::{Error, Result};

/// Parameters of `u₀(x) = Σ_k A_k sin(2π l_k x / L + φ_k)` on `[0, L]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SineIcParams {
    pub amps: Vec<f64>,
    pub freqs: Vec<f64>,
    pub phases: Vec<f64>,
    pub length: f64,
}

impl SineIcParams {
    /// A single mode `A sin(2π l x / L + φ)`.
    pub fn single(amp: f64, freq: f64, phase: f64, length: f64) -> Self {
        SineIcParams { amps: vec![amp], freqs: vec![freq], phases: vec![phase], length }
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.amps.len();
        if k == 0 || self.freqs.len() != k || self.phases.len() != k {
            return Err(Error::InvalidArgument("sine IC needs K ≥ 1 matching amps/freqs/phases".into()));
        }
        if self.freqs.iter().any(|l| l.fract() != 0.0) {
            return Err(Error::InvalidArgument("sine IC frequencies must be integers".into()));
        }
        if !(self.length > 0.0) {
            return Err(Error::InvalidArgument("sine IC domain length must be positive".into()));
        }
        Ok(())
    }

    pub fn value(&self, x: f64) -> f64 {
        self.amps
            .iter()
            .zip(&self.freqs)
            .zip(&self.phases)
            .map(|((a, l), p)| a * (2.0 * PI * l * x / self.length + p).sin())
            .sum()
    }
}

/// Periodic sine-sum initial condition on `n` nodes over `[0, L]`.
pub fn gen_sine_ic(p: &SineIcParams, n: usize) -> Result<Field1D> {
    p.validate()?;
    if n < 2 {
        return Err(Error::InvalidArgument("need n ≥ 2 samples".into()));
    }
    let mut f = Field1D::from_fn(0.0, p.length, n, 0.0, true, |x| p.value(x))?;
    let last = f.len() - 1;
    f.values[last] = f.values[0];
    Ok(f)
}

/// Gaussian random field with covariance `scale²(−Δ + shift²)^{−power}` on the periodic unit interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GrfParams {
    pub scale: f64,
    pub shift: f64,
    pub power: u32,
    pub mean_offset: f64,
}

impl Default for GrfParams {
    fn default() -> Self {
        GrfParams { scale: 25.0, shift: 5.0, power: 4, mean_offset: 0.0 }
    }
}

/// Standard deviation `scale·((2πk)² + shift²)^{−power/2}` of the cosine and sine coefficients of mode `k`.
pub fn grf_mode_std(p: &GrfParams, k: usize) -> f64 {
    let w = 2.0 * PI * k as f64;
    p.scale * (w * w + p.shift * p.shift).powf(-(p.power as f64) / 2.0)
}

/// Samples `u(x) = m + Σ_k std_k (a_k cos 2πkx + b_k sin 2πkx)` with `a_k, b_k ~ N(0, 1)`.
///
/// The field has `n` nodes on `[0, 1]` (the last repeating the first), modes `k = 1 … M/2 − 1`
/// for `M = n − 1` distinct samples, and its discrete mean is exactly `mean_offset` up to round-off.
pub fn gen_grf_ic(p: &GrfParams, n: usize, seed: u64) -> Result<Field1D> {
    if n < 8 {
        return Err(Error::InvalidArgument("GRF needs n ≥ 8".into()));
    }
    if p.power < 1 {
        return Err(Error::InvalidArgument("GRF power must be ≥ 1".into()));
    }
    let m = n - 1;
    let k_max = m.div_ceil(2) - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spec = vec![Complex::new(0.0, 0.0); m];
    for k in 1..=k_max {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        let s = grf_mode_std(p, k);
        spec[k] = Complex::new(0.5 * s * a, -0.5 * s * b);
        spec[m - k] = spec[k].conj();
    }
    FftPlanner::new().plan_fft_inverse(m).process(&mut spec);
    let mut values: Vec<f64> = spec.iter().map(|c| c.re).collect();
    let drift = values.iter().sum::<f64>() / m as f64;
    for v in &mut values {
        *v += p.mean_offset - drift;
    }
    values.push(values[0]);
    Field1D::new(0.0, 1.0, values, 0.0, true)
}

/// Parameters of the Allen–Cahn initial condition
/// `Σ_{i,j ≤ K} a_ij (i² + j²)^{−r} sin(π i {x − x₀}) sin(π j {y − y₀})`, `{·}` the sawtooth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AceIcParams {
    pub k: usize,
    pub r: f64,
    /// Row-major `K × K` coefficients, `a[(i−1)·K + (j−1)]`.
    pub a: Vec<f64>,
    pub x0_shift: f64,
    pub y0_shift: f64,
}

impl AceIcParams {
    /// Draws `K ∈ [16, 32]`, `r ∈ [0.7, 1]`, `a_ij ∈ [−1, 1]`; shifts in `[0, 1]` when `shifted`, zero otherwise.
    pub fn random(seed: u64, shifted: bool) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.random_range(16..=32);
        let r = rng.random_range(0.7..=1.0);
        let a = (0..k * k).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let (x0_shift, y0_shift) = if shifted { (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)) } else { (0.0, 0.0) };
        AceIcParams { k, r, a, x0_shift, y0_shift }
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.len() != self.k * self.k || self.k == 0 {
            return Err(Error::InvalidArgument("ACE IC needs K ≥ 1 and K×K coefficients".into()));
        }
        Ok(())
    }

    fn weight(&self, i: usize, j: usize) -> f64 {
        self.a[(i - 1) * self.k + (j - 1)] * ((i * i + j * j) as f64).powf(-self.r)
    }
}

fn sawtooth(v: f64) -> f64 {
    v - v.floor()
}

/// Direct evaluation of the Allen–Cahn initial condition at `(x, y)`.
pub fn ace_ic_value(p: &AceIcParams, x: f64, y: f64) -> f64 {
    let (xs, ys) = (sawtooth(x - p.x0_shift), sawtooth(y - p.y0_shift));
    let mut s = 0.0;
    for i in 1..=p.k {
        let si = (PI * i as f64 * xs).sin();
        for j in 1..=p.k {
            s += p.weight(i, j) * si * (PI * j as f64 * ys).sin();
        }
    }
    s
}

/// Allen–Cahn initial condition on the `n × n` periodic grid `(i/n, j/n)`.
pub fn gen_ace_ic(p: &AceIcParams, n: usize) -> Result<Field2D> {
    p.validate()?;
    if n < 16 {
        return Err(Error::InvalidArgument("ACE IC needs n ≥ 16".into()));
    }
    let modes = |shift: f64| -> Vec<Vec<f64>> {
        (1..=p.k)
            .map(|i| (0..n).map(|node| (PI * i as f64 * sawtooth(node as f64 / n as f64 - shift)).sin()).collect())
            .collect()
    };
    let sx = modes(p.x0_shift);
    let sy = modes(p.y0_shift);
    let mut b = vec![vec![0.0; n]; p.k];
    for i in 1..=p.k {
        for j in 1..=p.k {
            let w = p.weight(i, j);
            for (node, v) in b[i - 1].iter_mut().enumerate() {
                *v += w * sy[j - 1][node];
            }
        }
    }
    let mut values = vec![0.0; n * n];
    for yj in 0..n {
        for xi in 0..n {
            values[yj * n + xi] = (0..p.k).map(|i| sx[i][xi] * b[i][yj]).sum();
        }
    }
    Field2D::new(n, n, values, 0.0, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_examples() {
        let f = gen_sine_ic(&SineIcParams::single(1.0, 2.0, 0.0, 2.0 * PI), 257).unwrap();
        assert!((f.interpolate(PI / 4.0) - 1.0).abs() < 1e-14);
        assert!(f.periodic);
        let zero = gen_sine_ic(&SineIcParams::single(0.0, 1.0, 0.3, 1.0), 17).unwrap();
        assert!(zero.values.iter().all(|v| *v == 0.0));
        let two = SineIcParams { amps: vec![0.7, -0.2], freqs: vec![1.0, 3.0], phases: vec![0.1, 2.0], length: 2.0 };
        let f = gen_sine_ic(&two, 65).unwrap();
        for i in 0..64 {
            let x = f.x(i);
            let direct = 0.7 * (PI * x + 0.1).sin() - 0.2 * (3.0 * PI * x + 2.0).sin();
            assert!((f.values[i] - direct).abs() < 1e-14);
        }
        assert!(gen_sine_ic(&SineIcParams::single(1.0, 1.5, 0.0, 1.0), 9).is_err());
    }

    #[test]
    fn grf_mean_and_determinism() {
        let p = GrfParams::default();
        let a = gen_grf_ic(&p, 257, 3).unwrap();
        assert!(a.mean().abs() < 1e-12);
        assert_eq!(a, gen_grf_ic(&p, 257, 3).unwrap());
        assert_ne!(a, gen_grf_ic(&p, 257, 4).unwrap());
        let shifted = gen_grf_ic(&GrfParams { mean_offset: 0.2, ..p }, 257, 3).unwrap();
        assert!((shifted.mean() - 0.2).abs() < 1e-12);
        assert_eq!(a.values[0], a.values[256]);
    }

    #[test]
    fn grf_mode_variance_matches_spectrum() {
        let p = GrfParams::default();
        let (n, trials) = (65, 10_000);
        let m = n - 1;
        let mut acc = [0.0f64; 3];
        for seed in 0..trials {
            let f = gen_grf_ic(&p, n, seed).unwrap();
            for (k, a) in acc.iter_mut().enumerate() {
                let kk = k + 1;
                let c: f64 = f.period_samples().iter().enumerate().map(|(j, u)| u * (2.0 * PI * (kk * j) as f64 / m as f64).cos()).sum();
                *a += (2.0 * c / m as f64).powi(2);
            }
        }
        for (k, a) in acc.iter().enumerate() {
            let expected = grf_mode_std(&p, k + 1).powi(2);
            assert!((a / trials as f64 / expected - 1.0).abs() < 0.05, "mode {}", k + 1);
        }
    }

    #[test]
    fn ace_examples() {
        let p = AceIcParams::random(7, false);
        let f = gen_ace_ic(&p, 32).unwrap();
        for j in 0..32 {
            assert!(f.get(0, j).abs() < 1e-12 && f.get(j, 0).abs() < 1e-12);
        }
        let one = AceIcParams { k: 1, r: 1.0, a: vec![1.0], x0_shift: 0.0, y0_shift: 0.0 };
        assert!((ace_ic_value(&one, 0.5, 0.5) - 0.5).abs() < 1e-15);
        let g = gen_ace_ic(&one, 16).unwrap();
        assert!((g.get(8, 8) - 0.5).abs() < 1e-15);
        let shifted = AceIcParams { x0_shift: 0.25, ..p.clone() };
        let fs = gen_ace_ic(&shifted, 32).unwrap();
        for j in 0..32 {
            for i in 0..32 {
                assert!((fs.get(i, j) - f.get((i + 24) % 32, j)).abs() < 1e-12);
                assert!((fs.get(i, j) - ace_ic_value(&shifted, i as f64 / 32.0, j as f64 / 32.0)).abs() < 1e-12);
            }
        }
    }
}
