//! Log-radial change of variables and the discrete Fourier step.
//!
//! A radial function `f` on `(0, inf)` with measure `r^{N-3} dr` is carried
//! to `g(s) = e^{(N-2)s/2} f(e^s)` on the line with measure `ds`, and from
//! there to `g^(sigma) = (2 pi)^{-1/2} int g(s) e^{-i sigma s} ds`. Both
//! steps are unitary; the discrete versions here are unitary on the grid.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::half_dim_shift;

/// Uniform periodic grid in `s = log r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRadialGrid {
    pub dim: usize,
    pub s_min: f64,
    pub s_max: f64,
    pub n: usize,
}

impl LogRadialGrid {
    pub const DEFAULT_S_MIN: f64 = -16.0;
    pub const DEFAULT_S_MAX: f64 = 16.0;
    pub const DEFAULT_N: usize = 2048;

    pub fn new(dim: usize, s_min: f64, s_max: f64, n: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidGrid("dimension must be at least 1".into()));
        }
        if !(s_min < s_max) || !s_min.is_finite() || !s_max.is_finite() {
            return Err(Error::InvalidGrid(format!("need s_min < s_max, got [{s_min}, {s_max}]")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("point count must be a power of two >= 8, got {n}")));
        }
        Ok(Self { dim, s_min, s_max, n })
    }

    /// `s in [-16, 16]` with 2048 points.
    pub fn default_for(dim: usize) -> Result<Self> {
        Self::new(dim, Self::DEFAULT_S_MIN, Self::DEFAULT_S_MAX, Self::DEFAULT_N)
    }

    pub fn ds(&self) -> f64 {
        (self.s_max - self.s_min) / self.n as f64
    }

    pub fn s(&self, j: usize) -> f64 {
        self.s_min + j as f64 * self.ds()
    }

    pub fn r(&self, j: usize) -> f64 {
        self.s(j).exp()
    }

    /// Frequency spacing `2 pi / (n ds)`.
    pub fn d_sigma(&self) -> f64 {
        2.0 * PI / (self.n as f64 * self.ds())
    }

    /// Signed frequency index of storage slot `k`: `k - n/2`.
    pub fn signed_index(&self, k: usize) -> i64 {
        k as i64 - (self.n / 2) as i64
    }

    /// Frequency stored in slot `k` (ascending from `-pi/ds`).
    pub fn sigma(&self, k: usize) -> f64 {
        self.signed_index(k) as f64 * self.d_sigma()
    }

    pub fn sigmas(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.sigma(k)).collect()
    }

    /// `(N - 2) / 2`.
    pub fn weight_exponent(&self) -> f64 {
        half_dim_shift(self.dim)
    }

    /// Same geometry with a different ambient dimension.
    pub fn with_dim(&self, dim: usize) -> Self {
        Self { dim, ..*self }
    }
}

/// Samples `f(r_j)` at `r_j = exp(s_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSamples {
    pub grid: LogRadialGrid,
    pub values: Vec<Complex64>,
}

impl RadialSamples {
    pub fn new(grid: LogRadialGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::InvalidGrid(format!(
                "expected {} radial samples, got {}",
                grid.n,
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: LogRadialGrid) -> Self {
        Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.n] }
    }

    pub fn from_fn(grid: LogRadialGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.n).map(|j| f(grid.r(j))).collect();
        Self { grid, values }
    }

    /// Norm in `L^2((0, inf), r^{N-3} dr)`, discretized as
    /// `sqrt(sum |f(r_j)|^2 r_j^{N-2} ds)`.
    pub fn weighted_norm(&self) -> f64 {
        weighted_norm(self)
    }
}

/// Samples `g(s_j)` on the line.
#[derive(Debug, Clone, PartialEq)]
pub struct LogSamples {
    pub grid: LogRadialGrid,
    pub values: Vec<Complex64>,
}

impl LogSamples {
    pub fn from_fn(grid: LogRadialGrid, g: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.n).map(|j| g(grid.s(j))).collect();
        Self { grid, values }
    }

    /// `sqrt(sum |g_j|^2 ds)`.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.ds()).sqrt()
    }
}

/// Samples `g^(sigma_k)` in ascending signed-frequency order.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySamples {
    pub grid: LogRadialGrid,
    pub sigma: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl FrequencySamples {
    /// `sqrt(sum |g^_k|^2 d sigma)`.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.d_sigma()).sqrt()
    }

    /// Multiplies every sample by `multiplier(sigma_k)`.
    pub fn scale_by(&mut self, multiplier: impl Fn(f64) -> Complex64) {
        for (value, &sigma) in self.values.iter_mut().zip(&self.sigma) {
            *value *= multiplier(sigma);
        }
    }
}

/// `g(s) = e^{(N-2)s/2} f(e^s)`.
pub fn u_forward(f: &RadialSamples) -> LogSamples {
    let grid = f.grid;
    let w = grid.weight_exponent();
    let values = f
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| v * (w * grid.s(j)).exp())
        .collect();
    LogSamples { grid, values }
}

/// `f(r) = r^{-(N-2)/2} g(log r)`.
pub fn u_inverse(g: &LogSamples) -> RadialSamples {
    let grid = g.grid;
    let w = grid.weight_exponent();
    let values = g
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| v * (-w * grid.s(j)).exp())
        .collect();
    RadialSamples { grid, values }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut planner = p.borrow_mut();
        if inverse {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        }
    })
}

/// Discrete `(2 pi)^{-1/2} int g(s) e^{-i sigma s} ds` at the grid frequencies.
pub fn fourier_forward(g: &LogSamples) -> FrequencySamples {
    let grid = g.grid;
    let n = grid.n;
    let mut buffer = g.values.clone();
    plan(n, false).process(&mut buffer);
    let scale = grid.ds() / (2.0 * PI).sqrt();
    let sigma = grid.sigmas();
    let values = (0..n)
        .map(|k| {
            let slot = grid.signed_index(k).rem_euclid(n as i64) as usize;
            buffer[slot] * Complex64::from_polar(scale, -sigma[k] * grid.s_min)
        })
        .collect();
    FrequencySamples { grid, sigma, values }
}

/// Discrete `(2 pi)^{-1/2} int h(sigma) e^{i sigma s} d sigma` on the grid.
pub fn fourier_inverse(h: &FrequencySamples) -> LogSamples {
    let grid = h.grid;
    let n = grid.n;
    let mut buffer = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let slot = grid.signed_index(k).rem_euclid(n as i64) as usize;
        buffer[slot] = h.values[k] * Complex64::from_polar(1.0, h.sigma[k] * grid.s_min);
    }
    plan(n, true).process(&mut buffer);
    let scale = grid.d_sigma() / (2.0 * PI).sqrt();
    for v in buffer.iter_mut() {
        *v *= scale;
    }
    LogSamples { grid, values: buffer }
}

/// `sqrt(sum |f(r_j)|^2 r_j^{N-2} ds)`, the grid version of the
/// `L^2(r^{N-3} dr)` norm (`r^{N-3} dr = r^{N-2} ds`).
pub fn weighted_norm(f: &RadialSamples) -> f64 {
    let grid = f.grid;
    let p = grid.dim as f64 - 2.0;
    let sum: f64 = f
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| v.norm_sqr() * (p * grid.s(j)).exp())
        .sum();
    (sum * grid.ds()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn grid_validation() {
        assert!(LogRadialGrid::new(2, 1.0, 1.0, 64).is_err());
        assert!(LogRadialGrid::new(2, -1.0, 1.0, 100).is_err());
        assert!(LogRadialGrid::new(2, -1.0, 1.0, 4).is_err());
        assert!(LogRadialGrid::new(0, -1.0, 1.0, 64).is_err());
        let g = LogRadialGrid::default_for(3).unwrap();
        assert_eq!(g.n, 2048);
        assert_eq!(g.ds(), 1.0 / 64.0);
        assert_eq!(g.sigma(g.n / 2), 0.0);
        assert!(g.sigma(0) < 0.0);
    }

    #[test]
    fn u_forward_examples() {
        let grid = LogRadialGrid::new(2, -8.0, 8.0, 256).unwrap();
        let f = RadialSamples::from_fn(grid, |r| re((-r).exp()));
        let g = u_forward(&f);
        assert_eq!(g.values, f.values);

        let grid = LogRadialGrid::new(5, -8.0, 8.0, 256).unwrap();
        let h = |s: f64| (-s * s / 2.0).exp();
        let f = RadialSamples::from_fn(grid, |r| re(r.powf(-1.5) * h(r.ln())));
        let g = u_forward(&f);
        for (j, v) in g.values.iter().enumerate() {
            assert!((v - h(grid.s(j))).norm() < 1e-13);
        }
        let back = u_inverse(&g);
        for (a, b) in back.values.iter().zip(&f.values) {
            assert!((a - b).norm() <= 1e-15 * b.norm().max(1e-300) + 1e-300);
        }
        assert!((weighted_norm(&f) - g.l2_norm()).abs() < 1e-12);
    }

    #[test]
    fn gaussian_is_self_dual() {
        let grid = LogRadialGrid::new(2, -20.0, 20.0, 1024).unwrap();
        let g = LogSamples::from_fn(grid, |s| re((-s * s / 2.0).exp()));
        let hat = fourier_forward(&g);
        for (v, sigma) in hat.values.iter().zip(&hat.sigma) {
            assert!((v - (-sigma * sigma / 2.0).exp()).norm() < 1e-10, "sigma={sigma}");
        }
        assert!((g.l2_norm() - hat.l2_norm()).abs() < 1e-12);
        let back = fourier_inverse(&hat);
        for (a, b) in back.values.iter().zip(&g.values) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        let grid = LogRadialGrid::new(3, -4.0, 4.0, 64).unwrap();
        let zero = u_forward(&RadialSamples::zeros(grid));
        let hat = fourier_forward(&zero);
        assert!(hat.values.iter().all(|v| v.norm() == 0.0));
        assert_eq!(weighted_norm(&RadialSamples::zeros(grid)), 0.0);
    }

    #[test]
    fn weighted_norm_examples() {
        let grid = LogRadialGrid::new(4, -4.0, 4.0, 64).unwrap();
        let mut f = RadialSamples::zeros(grid);
        f.values[10] = re(1.0);
        let expected = (grid.r(10).powi(2) * grid.ds()).sqrt();
        assert!((weighted_norm(&f) - expected).abs() < 1e-15);

        let grid = LogRadialGrid::default_for(3).unwrap();
        let f = RadialSamples::from_fn(grid, |r| re(r.powf(-0.5) * (-(r.ln()).powi(2) / 2.0).exp()));
        assert!((weighted_norm(&f) - PI.powf(0.25)).abs() < 1e-8);
    }

    #[test]
    fn multiplier_shift_is_translation() {
        let grid = LogRadialGrid::new(2, -16.0, 16.0, 512).unwrap();
        let g = LogSamples::from_fn(grid, |s| Complex64::new((-s * s).exp(), s * (-s * s).exp()));
        let steps = 12;
        let two_t = steps as f64 * grid.ds();
        let mut hat = fourier_forward(&g);
        hat.scale_by(|sigma| Complex64::from_polar(1.0, two_t * sigma));
        let shifted = fourier_inverse(&hat);
        for j in 0..grid.n {
            let expected = g.values[(j + steps) % grid.n];
            assert!((shifted.values[j] - expected).norm() < 1e-13);
        }
    }
}
