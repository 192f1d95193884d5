//! Real trigonometric interpolation of periodic samples and 2D FFT helpers.

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;
use std::f64::consts::PI;

/// Trigonometric interpolant of `M` equispaced samples of one period starting at `x_lo`.
///
/// `c[k] = (1/M) Σ_j u_j e^{−2πikj/M}` for `k = 0 … ⌊M/2⌋`; for even `M` the Nyquist mode
/// contributes `Re(c[M/2]) cos(M/2 · θ)` so that the interpolant is real.
#[derive(Debug, Clone)]
pub struct PeriodicSeries {
    pub x_lo: f64,
    pub period: f64,
    pub m: usize,
    pub coeffs: Vec<Complex<f64>>,
}

impl PeriodicSeries {
    pub fn from_samples(samples: &[f64], x_lo: f64, period: f64) -> Self {
        let m = samples.len();
        let mut buf: Vec<Complex<f64>> = samples.iter().map(|&v| Complex::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        let coeffs = buf[..=m / 2].iter().map(|c| c / m as f64).collect();
        PeriodicSeries { x_lo, period, m, coeffs }
    }

    /// Angular wavenumber of mode `k`.
    pub fn wavenumber(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.period
    }

    /// Multiplies every mode by `f(wavenumber)`.
    pub fn scaled(&self, f: impl Fn(f64) -> f64) -> PeriodicSeries {
        let coeffs = self.coeffs.iter().enumerate().map(|(k, c)| c * f(self.wavenumber(k))).collect();
        PeriodicSeries { coeffs, ..self.clone() }
    }

    fn nyquist(&self, k: usize) -> bool {
        self.m.is_multiple_of(2) && k == self.m / 2
    }

    /// Value and first derivative at `x`.
    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let theta = 2.0 * PI * (x - self.x_lo) / self.period;
        let mut v = self.coeffs[0].re;
        let mut d = 0.0;
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            let (s, co) = (k as f64 * theta).sin_cos();
            let w = self.wavenumber(k);
            if self.nyquist(k) {
                v += c.re * co;
                d -= c.re * w * s;
            } else {
                v += 2.0 * (c.re * co - c.im * s);
                d += 2.0 * w * (-c.re * s - c.im * co);
            }
        }
        (v, d)
    }

    /// Values at the `M` equispaced nodes of one period.
    pub fn to_samples(&self) -> Vec<f64> {
        let m = self.m;
        let mut buf = vec![Complex::new(0.0, 0.0); m];
        for (k, c) in self.coeffs.iter().enumerate() {
            if self.nyquist(k) {
                buf[k] = Complex::new(c.re, 0.0);
            } else {
                buf[k] = *c;
                if k > 0 {
                    buf[m - k] = c.conj();
                }
            }
        }
        FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
        buf.iter().map(|c| c.re).collect()
    }

    /// Series of the derivative; the Nyquist mode is dropped.
    pub fn derivative(&self) -> PeriodicSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if self.nyquist(k) { Complex::new(0.0, 0.0) } else { c * Complex::new(0.0, self.wavenumber(k)) })
            .collect();
        PeriodicSeries { coeffs, ..self.clone() }
    }

    /// Zero-mean antiderivative of the zero-mean part; the Nyquist mode is dropped.
    pub fn antiderivative(&self) -> PeriodicSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k == 0 || self.nyquist(k) {
                    Complex::new(0.0, 0.0)
                } else {
                    c / Complex::new(0.0, self.wavenumber(k))
                }
            })
            .collect();
        PeriodicSeries { coeffs, ..self.clone() }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let theta = 2.0 * PI * (x - self.x_lo) / self.period;
        let mut v = self.coeffs[0].re;
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            let (s, co) = (k as f64 * theta).sin_cos();
            if self.nyquist(k) {
                v += c.re * co;
            } else {
                v += 2.0 * (c.re * co - c.im * s);
            }
        }
        v
    }
}

/// In-place 2D FFT of a row-major `nx × ny` array (x fastest). `inverse` is unnormalized.
pub fn fft2d(data: &mut [Complex<f64>], nx: usize, ny: usize, inverse: bool, planner: &mut FftPlanner<f64>) {
    Fft2dPlan::with_planner(nx, ny, planner).process(data, inverse);
}

/// Cached row and column plans for repeated 2D transforms of one grid size.
#[derive(Clone)]
pub struct Fft2dPlan {
    pub nx: usize,
    pub ny: usize,
    fwd: [Arc<dyn Fft<f64>>; 2],
    inv: [Arc<dyn Fft<f64>>; 2],
}

impl std::fmt::Debug for Fft2dPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft2dPlan").field("nx", &self.nx).field("ny", &self.ny).finish()
    }
}

impl Fft2dPlan {
    pub fn new(nx: usize, ny: usize) -> Self {
        Self::with_planner(nx, ny, &mut FftPlanner::new())
    }

    pub fn with_planner(nx: usize, ny: usize, p: &mut FftPlanner<f64>) -> Self {
        Fft2dPlan {
            nx,
            ny,
            fwd: [p.plan_fft_forward(nx), p.plan_fft_forward(ny)],
            inv: [p.plan_fft_inverse(nx), p.plan_fft_inverse(ny)],
        }
    }

    /// Same transform as [`fft2d`] with the cached plans.
    pub fn process(&self, data: &mut [Complex<f64>], inverse: bool) {
        let [fx, fy] = if inverse { &self.inv } else { &self.fwd };
        let (nx, ny) = (self.nx, self.ny);
        let mut scratch = vec![Complex::new(0.0, 0.0); fx.get_inplace_scratch_len().max(fy.get_inplace_scratch_len())];
        fx.process_with_scratch(data, &mut scratch);
        let mut cols = vec![Complex::new(0.0, 0.0); nx * ny];
        transpose(nx, ny, data, &mut cols);
        fy.process_with_scratch(&mut cols, &mut scratch);
        transpose(ny, nx, &cols, data);
    }
}

/// Writes the transpose of the row-major `rows × cols` matrix `src` into `dst`.
fn transpose(cols: usize, rows: usize, src: &[Complex<f64>], dst: &mut [Complex<f64>]) {
    for j in 0..rows {
        for i in 0..cols {
            dst[i * rows + j] = src[j * cols + i];
        }
    }
}

/// Source indices of a quarter-turn rotation on an `n × n` periodic grid: `out[q] = in[src[q]]` with `src(q) = R^{-k} q`.
///
/// The same permutation rotates a 2D DFT spectrum.
pub fn quarter_turn_sources(n: usize, k: u8) -> Vec<usize> {
    let n = n as i64;
    let mut src = Vec::with_capacity((n * n) as usize);
    for j in 0..n {
        for i in 0..n {
            let (mut a, mut b) = (i, j);
            for _ in 0..(k % 4) {
                (a, b) = (b, -a);
            }
            src.push((b.rem_euclid(n) * n + a.rem_euclid(n)) as usize);
        }
    }
    src
}

/// Signed integer frequency of FFT bin `k` for length `n`.
pub fn signed_freq(k: usize, n: usize) -> f64 {
    if k <= n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(m: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..m).map(|j| f(2.0 * PI * j as f64 / m as f64)).collect()
    }

    #[test]
    fn series_interpolates_and_differentiates() {
        let s = PeriodicSeries::from_samples(&samples(32, |x| 0.3 + x.sin() - 0.5 * (3.0 * x).cos()), 0.0, 2.0 * PI);
        for x in [0.1, 1.7, 4.4] {
            let (v, d) = s.eval_with_derivative(x);
            assert!((v - (0.3 + x.sin() - 0.5 * (3.0 * x).cos())).abs() < 1e-13);
            assert!((d - (x.cos() + 1.5 * (3.0 * x).sin())).abs() < 1e-12);
            assert!((s.derivative().eval(x) - d).abs() < 1e-12);
            assert!((s.antiderivative().eval(x) - (-x.cos() - (3.0 * x).sin() / 6.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn samples_round_trip() {
        let u = samples(16, |x| (2.0 * x).cos() + 0.1 * (8.0 * x).cos());
        let back = PeriodicSeries::from_samples(&u, 0.0, 1.0).to_samples();
        for (a, b) in u.iter().zip(&back) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn plan_matches_direct_dft() {
        let (nx, ny) = (4, 3);
        let data: Vec<Complex<f64>> = (0..nx * ny).map(|i| Complex::new((i as f64).sin(), 0.0)).collect();
        let mut fast = data.clone();
        Fft2dPlan::new(nx, ny).process(&mut fast, false);
        for (q, f) in fast.iter().enumerate() {
            let (kx, ky) = (q % nx, q / nx);
            let direct: Complex<f64> = data
                .iter()
                .enumerate()
                .map(|(p, v)| {
                    let phase = -2.0 * PI * ((kx * (p % nx)) as f64 / nx as f64 + (ky * (p / nx)) as f64 / ny as f64);
                    v * Complex::from_polar(1.0, phase)
                })
                .sum();
            assert!((f - direct).norm() < 1e-12);
        }
        let mut back = fast.clone();
        fft2d(&mut back, nx, ny, true, &mut FftPlanner::new());
        for (a, b) in back.iter().zip(&data) {
            assert!((a / (nx * ny) as f64 - b).norm() < 1e-14);
        }
    }

    #[test]
    fn quarter_turn_sources_are_permutations() {
        for k in 0..4 {
            let mut src = quarter_turn_sources(5, k);
            src.sort_unstable();
            assert_eq!(src, (0..25).collect::<Vec<_>>());
        }
        assert_eq!(quarter_turn_sources(3, 0), (0..9).collect::<Vec<_>>());
        assert_eq!(signed_freq(7, 8), -1.0);
        assert_eq!(signed_freq(3, 8), 3.0);
    }
}
