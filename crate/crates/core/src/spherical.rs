//! Spherical-harmonic bookkeeping: factored fields `p (x) f`, the zonal
//! projection kernel, and explicit decompositions for `N = 1` (two points)
//! and `N = 2` (angular Fourier modes).

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::log_radial::{LogRadialGrid, RadialSamples};
use crate::par::{self, Execution};
use crate::special::{gegenbauer_tilde, half_dim_shift, sphere_area};

/// Which spherical harmonic `p` of degree `m` multiplies the radial part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphericalPart {
    /// `N = 1`, `m = 0`: the constant on `{+1, -1}`.
    Constant,
    /// `N = 1`, `m = 1`: the sign function.
    Sign,
    /// `N = 2`: `e^{i k phi}` with degree `|k|`.
    AngularMode(i64),
    /// Some unit-norm harmonic of the field's degree, left unspecified.
    Abstract,
}

impl SphericalPart {
    /// `L^2` norm of `p` for the unnormalized surface measure.
    pub fn norm(&self) -> f64 {
        match self {
            SphericalPart::Constant | SphericalPart::Sign => 2f64.sqrt(),
            SphericalPart::AngularMode(_) => (2.0 * PI).sqrt(),
            SphericalPart::Abstract => 1.0,
        }
    }
}

/// The function `r omega -> p(omega) f(r)` with `p` of degree `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredField {
    pub dim: usize,
    pub degree: usize,
    pub radial: RadialSamples,
    pub spherical_part: SphericalPart,
}

impl FactoredField {
    pub fn new(degree: usize, radial: RadialSamples, spherical_part: SphericalPart) -> Result<Self> {
        let dim = radial.grid.dim;
        let consistent = match spherical_part {
            SphericalPart::Constant => dim == 1 && degree == 0,
            SphericalPart::Sign => dim == 1 && degree == 1,
            SphericalPart::AngularMode(k) => dim == 2 && k.unsigned_abs() as usize == degree,
            SphericalPart::Abstract => dim != 1 || degree <= 1,
        };
        if !consistent {
            return Err(Error::InvalidArgument(format!(
                "spherical part {spherical_part:?} does not fit degree {degree} in dimension {dim}"
            )));
        }
        Ok(Self { dim, degree, radial, spherical_part })
    }

    /// A degree-`m` slot with an unspecified unit-norm harmonic.
    pub fn abstract_slot(degree: usize, radial: RadialSamples) -> Result<Self> {
        Self::new(degree, radial, SphericalPart::Abstract)
    }

    pub fn grid(&self) -> LogRadialGrid {
        self.radial.grid
    }

    /// Norm in `L^2(R^N, |x|^{-2} dx)`: `||p|| ||f||`.
    pub fn norm(&self) -> f64 {
        self.spherical_part.norm() * self.radial.weighted_norm()
    }

    pub fn with_radial(&self, radial: RadialSamples) -> Self {
        Self { radial, ..self.clone() }
    }
}

/// Samples of a function on `R^2` over an (angle x log-radius) grid.
///
/// `values[i * grid.n + j]` is the sample at angle `2 pi i / n_phi` and
/// radius `exp(s_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField2D {
    pub n_phi: usize,
    pub grid: LogRadialGrid,
    pub values: Vec<Complex64>,
}

impl GridField2D {
    pub fn new(n_phi: usize, grid: LogRadialGrid, values: Vec<Complex64>) -> Result<Self> {
        if n_phi < 8 || !n_phi.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("angle count must be a power of two >= 8, got {n_phi}")));
        }
        if grid.dim != 2 {
            return Err(Error::InvalidGrid(format!("angular grids need dimension 2, got {}", grid.dim)));
        }
        if values.len() != n_phi * grid.n {
            return Err(Error::InvalidGrid(format!(
                "expected {} samples, got {}",
                n_phi * grid.n,
                values.len()
            )));
        }
        Ok(Self { n_phi, grid, values })
    }

    pub fn from_fn(n_phi: usize, grid: LogRadialGrid, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let mut values = Vec::with_capacity(n_phi * grid.n);
        for i in 0..n_phi {
            let phi = angle(n_phi, i);
            values.extend((0..grid.n).map(|j| f(phi, grid.r(j))));
        }
        Self::new(n_phi, grid, values)
    }

    pub fn at(&self, angle_index: usize, s_index: usize) -> Complex64 {
        self.values[angle_index * self.grid.n + s_index]
    }

    pub fn row(&self, angle_index: usize) -> &[Complex64] {
        &self.values[angle_index * self.grid.n..(angle_index + 1) * self.grid.n]
    }

    /// `sqrt(sum |F|^2 (2 pi / n_phi) ds)`, the grid norm of `L^2(R^2, |x|^{-2} dx)`.
    pub fn norm(&self) -> f64 {
        let sum: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (sum * 2.0 * PI / self.n_phi as f64 * self.grid.ds()).sqrt()
    }
}

pub fn angle(n_phi: usize, i: usize) -> f64 {
    2.0 * PI * i as f64 / n_phi as f64
}

/// Zonal kernel of the projection onto degree-`m` harmonics on `S^{N-1}`:
/// `Gamma(N/2) / (2 pi^{N/2}) C~_m^{(N-2)/2}(t)`.
pub fn projection_kernel(m: usize, dim: usize, t: f64) -> Result<f64> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    Ok(gegenbauer_tilde(m, half_dim_shift(dim), t)? / sphere_area(dim))
}

/// Signed angular modes in the order `0, 1, -1, 2, -2, ..., n/2`.
fn mode_order(n_phi: usize) -> Vec<i64> {
    let half = (n_phi / 2) as i64;
    let mut modes = vec![0];
    for k in 1..half {
        modes.push(k);
        modes.push(-k);
    }
    modes.push(-half);
    modes
}

/// Splits a planar field into its angular Fourier modes, one factored field
/// per mode `e^{i k phi}` with degree `|k|`. The mode `-n_phi/2` is the
/// Nyquist mode and is reported with degree `n_phi/2`.
pub fn decompose_2d(field: &GridField2D) -> Vec<FactoredField> {
    let n_phi = field.n_phi;
    let n = field.grid.n;
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n_phi);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n_phi * n];
    let mut column = vec![Complex64::new(0.0, 0.0); n_phi];
    for j in 0..n {
        for (i, c) in column.iter_mut().enumerate() {
            *c = field.values[i * n + j];
        }
        fft.process(&mut column);
        for (slot, c) in column.iter().enumerate() {
            coeffs[slot * n + j] = c / n_phi as f64;
        }
    }
    mode_order(n_phi)
        .into_iter()
        .map(|k| {
            let slot = k.rem_euclid(n_phi as i64) as usize;
            let radial = RadialSamples { grid: field.grid, values: coeffs[slot * n..(slot + 1) * n].to_vec() };
            FactoredField {
                dim: 2,
                degree: k.unsigned_abs() as usize,
                radial,
                spherical_part: SphericalPart::AngularMode(k),
            }
        })
        .collect()
}

/// Inverse of [`decompose_2d`]: sums `c_k(r) e^{i k phi}` on the angle grid.
pub fn recompose_2d(components: &[FactoredField], n_phi: usize) -> Result<GridField2D> {
    let grid = components
        .first()
        .map(|c| c.grid())
        .ok_or_else(|| Error::InvalidArgument("no components to recompose".into()))?;
    let n = grid.n;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n_phi * n];
    for c in components {
        let k = match c.spherical_part {
            SphericalPart::AngularMode(k) => k,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "planar recomposition needs angular modes, got {other:?}"
                )))
            }
        };
        if c.grid() != grid {
            return Err(Error::InvalidGrid("components live on different radial grids".into()));
        }
        let slot = k.rem_euclid(n_phi as i64) as usize;
        for (dst, src) in coeffs[slot * n..(slot + 1) * n].iter_mut().zip(&c.radial.values) {
            *dst += src;
        }
    }
    let ifft = FftPlanner::<f64>::new().plan_fft_inverse(n_phi);
    let mut values = vec![Complex64::new(0.0, 0.0); n_phi * n];
    let mut column = vec![Complex64::new(0.0, 0.0); n_phi];
    for j in 0..n {
        for (slot, c) in column.iter_mut().enumerate() {
            *c = coeffs[slot * n + j];
        }
        ifft.process(&mut column);
        for (i, c) in column.iter().enumerate() {
            values[i * n + j] = *c;
        }
    }
    GridField2D::new(n_phi, grid, values)
}

/// Even/odd split of a function on `S^0 = {+1, -1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignSplit {
    /// Coefficient of the constant harmonic (degree 0).
    pub even: Complex64,
    /// Coefficient of `sgn` (degree 1).
    pub odd: Complex64,
}

impl SignSplit {
    /// `(p(+1), p(-1))`.
    pub fn reconstruct(&self) -> (Complex64, Complex64) {
        (self.even + self.odd, self.even - self.odd)
    }
}

/// Projections of `p` on `S^0` onto degrees 0 and 1.
pub fn project_pm(at_plus: Complex64, at_minus: Complex64) -> SignSplit {
    SignSplit { even: 0.5 * (at_plus + at_minus), odd: 0.5 * (at_plus - at_minus) }
}

/// Splits a function on `R \ {0}`, given by its radial profiles on the two
/// half-lines, into `1 (x) f_0` and `sgn (x) f_1`.
pub fn decompose_1d(positive: &RadialSamples, negative: &RadialSamples) -> Result<[FactoredField; 2]> {
    if positive.grid != negative.grid || positive.grid.dim != 1 {
        return Err(Error::InvalidGrid("half-line profiles must share a one-dimensional grid".into()));
    }
    let (even, odd): (Vec<_>, Vec<_>) = positive
        .values
        .iter()
        .zip(&negative.values)
        .map(|(&p, &q)| {
            let split = project_pm(p, q);
            (split.even, split.odd)
        })
        .unzip();
    let grid = positive.grid;
    Ok([
        FactoredField::new(0, RadialSamples { grid, values: even }, SphericalPart::Constant)?,
        FactoredField::new(1, RadialSamples { grid, values: odd }, SphericalPart::Sign)?,
    ])
}

/// Inverse of [`decompose_1d`]: returns the profiles on `x > 0` and `x < 0`.
pub fn recompose_1d(components: &[FactoredField]) -> Result<(RadialSamples, RadialSamples)> {
    let grid = components
        .first()
        .map(|c| c.grid())
        .ok_or_else(|| Error::InvalidArgument("no components to recompose".into()))?;
    let mut plus = RadialSamples::zeros(grid);
    let mut minus = RadialSamples::zeros(grid);
    for c in components {
        let sign = match c.spherical_part {
            SphericalPart::Constant => 1.0,
            SphericalPart::Sign => -1.0,
            other => {
                return Err(Error::InvalidArgument(format!("line recomposition got {other:?}")));
            }
        };
        for j in 0..grid.n {
            plus.values[j] += c.radial.values[j];
            minus.values[j] += sign * c.radial.values[j];
        }
    }
    Ok((plus, minus))
}

/// Applies the degree-`m` projection to equispaced samples on the circle by
/// quadrature of the zonal kernel:
/// `(P_m p)(phi_i) = sum_j K_m(cos(phi_i - phi_j)) p(phi_j) 2 pi / n`.
pub fn project_circle(m: usize, samples: &[Complex64]) -> Result<Vec<Complex64>> {
    project_circle_with(Execution::default(), m, samples)
}

pub fn project_circle_with(exec: Execution, m: usize, samples: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = samples.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let weight = 2.0 * PI / n as f64;
    // The kernel depends only on the index difference.
    let kernel: Vec<f64> = (0..n)
        .map(|d| projection_kernel(m, 2, angle(n, d).cos().clamp(-1.0, 1.0)))
        .collect::<Result<_>>()?;
    Ok(par::map_range(exec, n, |i| {
        samples
            .iter()
            .enumerate()
            .map(|(j, p)| p * kernel[(i + n - j) % n])
            .sum::<Complex64>()
            * weight
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_examples() {
        for t in [-1.0, 0.0, 0.4] {
            assert!((projection_kernel(0, 2, t).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-16);
        }
        assert_eq!(projection_kernel(2, 1, 1.0).unwrap(), 0.0);
        assert_eq!(projection_kernel(2, 1, -1.0).unwrap(), 0.0);
        assert!((projection_kernel(0, 1, 1.0).unwrap() - 0.5).abs() < 1e-16);
        assert!(projection_kernel(1, 3, 1.5).is_err());
    }

    #[test]
    fn factored_field_validation() {
        let grid = LogRadialGrid::new(1, -2.0, 2.0, 16).unwrap();
        let f = RadialSamples::zeros(grid);
        assert!(FactoredField::new(2, f.clone(), SphericalPart::Abstract).is_err());
        assert!(FactoredField::new(1, f.clone(), SphericalPart::Constant).is_err());
        assert!(FactoredField::new(1, f, SphericalPart::Sign).is_ok());
        let grid2 = LogRadialGrid::new(2, -2.0, 2.0, 16).unwrap();
        assert!(FactoredField::new(3, RadialSamples::zeros(grid2), SphericalPart::AngularMode(-3)).is_ok());
        assert!(FactoredField::new(2, RadialSamples::zeros(grid2), SphericalPart::AngularMode(3)).is_err());
    }

    fn radial_profile(r: f64) -> Complex64 {
        let s = r.ln();
        Complex64::new((-s * s).exp(), 0.3 * s * (-s * s).exp())
    }

    #[test]
    fn radial_field_is_pure_degree_zero() {
        let grid = LogRadialGrid::new(2, -6.0, 6.0, 64).unwrap();
        let field = GridField2D::from_fn(16, grid, |_, r| radial_profile(r)).unwrap();
        let parts = decompose_2d(&field);
        assert_eq!(parts.len(), 16);
        assert_eq!(parts[0].spherical_part, SphericalPart::AngularMode(0));
        for p in &parts[1..] {
            assert!(p.norm() < 1e-14);
        }
        assert!((parts[0].norm() - field.norm()).abs() < 1e-13);
    }

    #[test]
    fn cos_two_phi_is_degree_two() {
        let grid = LogRadialGrid::new(2, -6.0, 6.0, 64).unwrap();
        let field = GridField2D::from_fn(32, grid, |phi, r| (2.0 * phi).cos() * radial_profile(r)).unwrap();
        for p in decompose_2d(&field) {
            if p.degree == 2 {
                assert!(p.norm() > 0.1);
            } else {
                assert!(p.norm() < 1e-14, "degree {} leaked", p.degree);
            }
        }
    }

    #[test]
    fn decomposition_round_trip_and_parseval() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let grid = LogRadialGrid::new(2, -4.0, 4.0, 32).unwrap();
        let values = (0..16 * 32).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let field = GridField2D::new(16, grid, values).unwrap();
        let parts = decompose_2d(&field);
        let total: f64 = parts.iter().map(|p| p.norm().powi(2)).sum();
        assert!((total - field.norm().powi(2)).abs() < 1e-12 * total);
        let back = recompose_2d(&parts, 16).unwrap();
        for (a, b) in back.values.iter().zip(&field.values) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn sign_split_examples() {
        let one = Complex64::new(1.0, 0.0);
        let s = project_pm(one, one);
        assert_eq!((s.even, s.odd), (one, Complex64::new(0.0, 0.0)));
        let s = project_pm(one, -one);
        assert_eq!((s.even, s.odd), (Complex64::new(0.0, 0.0), one));
        let (a, b) = (Complex64::new(0.375, -2.0), Complex64::new(-1.75, 0.25));
        assert_eq!(project_pm(a, b).reconstruct(), (a, b));
    }

    #[test]
    fn line_decomposition_round_trip() {
        let grid = LogRadialGrid::new(1, -4.0, 4.0, 32).unwrap();
        let plus = RadialSamples::from_fn(grid, radial_profile);
        let minus = RadialSamples::from_fn(grid, |r| 2.0 * radial_profile(r * 1.3));
        let parts = decompose_1d(&plus, &minus).unwrap();
        let (p, m) = recompose_1d(&parts).unwrap();
        for j in 0..grid.n {
            assert!((p.values[j] - plus.values[j]).norm() < 1e-15);
            assert!((m.values[j] - minus.values[j]).norm() < 1e-15);
        }
    }

    /// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
    fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
        (0..n)
            .map(|i| {
                let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
                let mut dp = 0.0;
                for _ in 0..100 {
                    let (mut p0, mut p1) = (1.0, x);
                    for k in 2..=n {
                        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                        p0 = p1;
                        p1 = p2;
                    }
                    dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                    let dx = p1 / dp;
                    x -= dx;
                    if dx.abs() < 1e-16 {
                        break;
                    }
                }
                (x, 2.0 / ((1.0 - x * x) * dp * dp))
            })
            .collect()
    }

    #[test]
    fn three_dimensional_kernel_reproduces_degree_one_harmonic() {
        let nodes = gauss_legendre(24);
        let n_az = 48;
        let points: Vec<([f64; 3], f64)> = nodes
            .iter()
            .flat_map(|&(ct, w)| {
                let st = (1.0 - ct * ct).sqrt();
                (0..n_az).map(move |k| {
                    let az = angle(n_az, k);
                    ([st * az.cos(), st * az.sin(), ct], w * 2.0 * PI / n_az as f64)
                })
            })
            .collect();
        for omega in [[0.0, 0.0, 1.0], [0.6, 0.0, 0.8], [0.3, -0.5, (1.0f64 - 0.34).sqrt()]] {
            let integral: f64 = points
                .iter()
                .map(|(w2, weight)| {
                    let t = (omega[0] * w2[0] + omega[1] * w2[1] + omega[2] * w2[2]).clamp(-1.0, 1.0);
                    projection_kernel(1, 3, t).unwrap() * w2[2] * weight
                })
                .sum();
            assert!((integral - omega[2]).abs() < 1e-10);
        }
    }

    #[test]
    fn circle_projection_idempotent_and_orthogonal() {
        let n = 256;
        let signal: Vec<Complex64> = (0..n)
            .map(|i| {
                let phi = angle(n, i);
                Complex64::new((3.0 * phi).cos() + 0.5 * (7.0 * phi).sin(), (3.0 * phi).sin())
            })
            .collect();
        let once = project_circle(3, &signal).unwrap();
        let twice = project_circle(3, &once).unwrap();
        for (a, b) in once.iter().zip(&twice) {
            assert!((a - b).norm() < 1e-10);
        }
        let other = project_circle(5, &signal).unwrap();
        assert!(other.iter().all(|v| v.norm() < 1e-10));
    }
}
