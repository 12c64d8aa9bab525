//! Integral kernels of `exp(z |x|^2 Laplacian)` for `Re z > 0`.
//!
//! The radial kernel `K_m` acts on one harmonic degree; the full kernel is
//! the Gegenbauer series `sum_m C~_m(<w, w'>) K_m / |S^{N-1}|`, truncated
//! with a certified tail. In dimensions 1, 2 and 4 the series sums to a
//! closed form built from the theta function.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::log_radial::RadialSamples;
use crate::par::{self, Execution};
use crate::special::{
    half_dim_shift, sphere_area, theta, theta_dv, GegenbauerParam, GegenbauerTildeSeq, ThetaArgs, DOMAIN_SLACK,
};
use crate::spherical::{angle, GridField2D};

/// Absolute tolerance used for theta sums inside the closed forms.
pub const THETA_TOL: f64 = 1e-17;

/// Beyond this `|t|` the four-dimensional closed form is replaced by the series.
pub const FOUR_D_POLE_GUARD: f64 = 1.0 - 1e-6;

/// Semigroup time `z` with its principal square root (`Re sqrt_z >= 0`,
/// positive on the positive axis).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexTime {
    pub z: Complex64,
    pub sqrt_z: Complex64,
}

impl ComplexTime {
    pub fn new(z: Complex64) -> Self {
        Self { z, sqrt_z: z.sqrt() }
    }

    pub fn real(z: f64) -> Self {
        Self::new(Complex64::new(z, 0.0))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.z.conj())
    }

    /// Fails unless `Re z > 0`, the regime where the kernel formulas hold.
    pub fn require_kernel_regime(&self, what: &'static str) -> Result<()> {
        if self.z.re > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidRegime { what, re_z: self.z.re })
        }
    }

    /// `(4 pi z)^{-1/2}` on the principal branch.
    pub fn heat_normalization(&self) -> Complex64 {
        1.0 / ((4.0 * PI).sqrt() * self.sqrt_z)
    }
}

impl From<Complex64> for ComplexTime {
    fn from(z: Complex64) -> Self {
        Self::new(z)
    }
}

/// A point pair `(r omega, r' omega')` described by `r`, `r'` and
/// `t = <omega, omega'>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelQuery {
    pub dim: usize,
    pub z: ComplexTime,
    pub r: f64,
    pub r_prime: f64,
    pub t: f64,
    pub tol: f64,
}

impl KernelQuery {
    pub fn new(dim: usize, z: ComplexTime, r: f64, r_prime: f64, t: f64, tol: f64) -> Self {
        Self { dim, z, r, r_prime, t, tol }
    }

    fn validate(&self) -> Result<()> {
        self.z.require_kernel_regime("full kernel series")?;
        validate_radii(self.r, self.r_prime)?;
        if self.dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if self.t.is_nan() || self.t.abs() > 1.0 + DOMAIN_SLACK {
            return Err(Error::Domain { what: "kernel angle cosine", value: self.t });
        }
        Ok(())
    }
}

fn validate_radii(r: f64, r_prime: f64) -> Result<()> {
    if r > 0.0 && r_prime > 0.0 && r.is_finite() && r_prime.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("radii must be positive and finite, got r = {r}, r' = {r_prime}")))
    }
}

/// `-(log r - log r')^2 / (4z) - (N-2)/2 (log r + log r')`, the log of the
/// radial Gaussian factor shared by every kernel.
fn log_gaussian_factor(dim: usize, z: &ComplexTime, r: f64, r_prime: f64) -> Complex64 {
    let (s, sp) = (r.ln(), r_prime.ln());
    let delta = s - sp;
    -(delta * delta) / (4.0 * z.z) - half_dim_shift(dim) * (s + sp)
}

/// Kernel of `exp(z (theta - m)(theta + m + N - 2))` on
/// `L^2((0, inf), r^{N-3} dr)`:
///
/// `(4 pi z)^{-1/2} exp(-z (m + (N-2)/2)^2) exp(-(log r - log r')^2 / (4z)) (r r')^{-(N-2)/2}`.
pub fn radial_kernel(m: usize, dim: usize, r: f64, r_prime: f64, z: &ComplexTime) -> Result<Complex64> {
    z.require_kernel_regime("radial kernel")?;
    validate_radii(r, r_prime)?;
    let mu = m as f64 + half_dim_shift(dim);
    Ok(z.heat_normalization() * (log_gaussian_factor(dim, z, r, r_prime) - z.z * mu * mu).exp())
}

const MAX_SERIES_DEGREE: usize = 1 << 20;

/// Smallest `M` with `sum_{m > M} sup|C~_m^nu| exp(-Re z (m + nu)^2) < tol`,
/// `nu = (N - 2)/2`.
///
/// Terms are summed explicitly up to a cutoff `L` past which consecutive
/// ratios are bounded by some `q <= 1/2`; the rest is bounded geometrically.
pub fn truncation_degree(dim: usize, z: &ComplexTime, tol: f64) -> Result<usize> {
    z.require_kernel_regime("series truncation")?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if tol == f64::INFINITY {
        return Ok(0);
    }
    let nu = half_dim_shift(dim);
    let a = z.z.re;
    let bound = |m: usize| GegenbauerParam::new(nu, m).tilde_sup() * (-a * (m as f64 + nu).powi(2)).exp();

    // Upper bound on b_{k+1} / b_k valid for every k >= m.
    let ratio_bound = |m: usize| {
        let mf = m as f64;
        let growth = if nu > 0.0 {
            (mf + 1.0 + nu) / (mf + nu) * ((mf + 2.0 * nu) / (mf + 1.0)).max(1.0)
        } else {
            1.0
        };
        growth * (-a * (2.0 * (mf + nu) + 1.0)).exp()
    };

    let mut terms = Vec::new();
    let (cutoff, tail_after_cutoff) = loop {
        let m = terms.len();
        let b = bound(m);
        terms.push(b);
        if nu == -0.5 && m >= 1 {
            break (m, 0.0);
        }
        if m >= 1 {
            let q = ratio_bound(m);
            if q <= 0.5 && b * q / (1.0 - q) < tol * 1e-3 {
                break (m, b * q / (1.0 - q));
            }
        }
        if m > MAX_SERIES_DEGREE {
            return Err(Error::InvalidArgument(format!(
                "series needs more than {MAX_SERIES_DEGREE} terms at Re z = {a}"
            )));
        }
    };
    let mut tail = tail_after_cutoff;
    for big_m in (0..cutoff).rev() {
        tail += terms[big_m + 1];
        if tail >= tol {
            return Ok(big_m + 1);
        }
    }
    Ok(0)
}

/// Full kernel `K(r omega, r' omega'; z)` by the truncated Gegenbauer series.
/// The absolute error is at most `|prefactor| * tol`, see [`series_error_bound`].
pub fn full_kernel_series(q: &KernelQuery) -> Result<Complex64> {
    q.validate()?;
    let nu = half_dim_shift(q.dim);
    let big_m = truncation_degree(q.dim, &q.z, q.tol)?;
    let t = q.t.clamp(-1.0, 1.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut terms: Vec<Complex64> = Vec::with_capacity(big_m + 1);
    for (m, c) in GegenbauerTildeSeq::new(nu, t)?.take(big_m + 1).enumerate() {
        let mu = m as f64 + nu;
        terms.push((-q.z.z * mu * mu).exp() * c);
    }
    for term in terms.iter().rev() {
        sum += term;
    }
    Ok(series_prefactor(q) * sum)
}

/// `Gamma(N/2) / (2 pi^{N/2}) (4 pi z)^{-1/2} exp(-(log r - log r')^2/(4z)) (r r')^{-(N-2)/2}`.
pub fn series_prefactor(q: &KernelQuery) -> Complex64 {
    q.z.heat_normalization() * log_gaussian_factor(q.dim, &q.z, q.r, q.r_prime).exp() / sphere_area(q.dim)
}

/// Certified bound on the truncation error of [`full_kernel_series`].
pub fn series_error_bound(q: &KernelQuery) -> f64 {
    series_prefactor(q).norm() * q.tol
}

/// Kernel of `exp(z (|x|^2 Laplacian - 1))`, i.e. `e^{-z} K`.
pub fn laguerre_renormalized_kernel(q: &KernelQuery) -> Result<Complex64> {
    Ok((-q.z.z).exp() * full_kernel_series(q)?)
}

/// Closed form on the line:
/// `(1 + sgn(x x'))/2 e^{-z/4} (4 pi z)^{-1/2} exp(-(log|x| - log|x'|)^2/(4z)) |x x'|^{1/2}`.
pub fn closed_form_1d(x: f64, x_prime: f64, z: &ComplexTime) -> Result<Complex64> {
    z.require_kernel_regime("one-dimensional kernel")?;
    if x == 0.0 || x_prime == 0.0 || !x.is_finite() || !x_prime.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "kernel points must be nonzero, got x = {x}, x' = {x_prime}"
        )));
    }
    if x.signum() != x_prime.signum() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(z.heat_normalization() * (log_gaussian_factor(1, z, x.abs(), x_prime.abs()) - z.z / 4.0).exp())
}

/// Angular argument of the planar closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleArg {
    /// `t = <omega, omega'>`, converted with `arccos` into `[0, pi]`.
    Cosine(f64),
    /// A signed angle difference `phi - phi'`.
    Signed(f64),
}

impl AngleArg {
    fn angle(self) -> Result<f64> {
        match self {
            AngleArg::Cosine(t) => {
                if t.is_nan() || t.abs() > 1.0 + DOMAIN_SLACK {
                    Err(Error::Domain { what: "kernel angle cosine", value: t })
                } else {
                    Ok(t.clamp(-1.0, 1.0).acos())
                }
            }
            AngleArg::Signed(phi) => Ok(phi),
        }
    }
}

/// `tau = i z / pi`.
fn theta_tau(z: &ComplexTime) -> Complex64 {
    Complex64::i() * z.z / PI
}

/// Closed form in the plane:
/// `(2 pi)^{-1} (4 pi z)^{-1/2} exp(-(log r - log r')^2/(4z)) theta(dphi / (2 pi), i z / pi)`.
pub fn closed_form_2d(r: f64, r_prime: f64, angle_arg: AngleArg, z: &ComplexTime) -> Result<Complex64> {
    z.require_kernel_regime("two-dimensional kernel")?;
    validate_radii(r, r_prime)?;
    let dphi = angle_arg.angle()?;
    let th = theta(&ThetaArgs::new(Complex64::new(dphi / (2.0 * PI), 0.0), theta_tau(z), THETA_TOL))?;
    Ok(z.heat_normalization() * log_gaussian_factor(2, z, r, r_prime).exp() * th / (2.0 * PI))
}

/// Closed form in dimension four:
/// `-(8 pi^3)^{-1} (4 pi z)^{-1/2} exp(-(log r - log r')^2/(4z)) (r r')^{-1}
///  (1 - t^2)^{-1/2} d theta/dv(arccos(t) / (2 pi), i z / pi)`.
///
/// The pole at `t = +-1` is removable; for `|t| > 1 - 1e-6` the Gegenbauer
/// series (with `C~_m^1 = (m + 1) U_m`) is evaluated instead.
pub fn closed_form_4d(r: f64, r_prime: f64, t: f64, z: &ComplexTime) -> Result<Complex64> {
    z.require_kernel_regime("four-dimensional kernel")?;
    validate_radii(r, r_prime)?;
    if t.is_nan() || t.abs() > 1.0 + DOMAIN_SLACK {
        return Err(Error::Domain { what: "kernel angle cosine", value: t });
    }
    if t.abs() > FOUR_D_POLE_GUARD {
        let q = KernelQuery::new(4, *z, r, r_prime, t.clamp(-1.0, 1.0), 1e-16);
        return full_kernel_series(&q);
    }
    let theta_angle = t.acos();
    let dv = theta_dv(&ThetaArgs::new(Complex64::new(theta_angle / (2.0 * PI), 0.0), theta_tau(z), THETA_TOL))?;
    let sin = (1.0 - t * t).sqrt();
    Ok(-z.heat_normalization() * log_gaussian_factor(4, z, r, r_prime).exp() * dv / (8.0 * PI.powi(3) * sin))
}

/// Applies `exp(z (theta - m)(theta + m + N - 2))` to radial samples by
/// direct quadrature of the kernel:
/// `sum_j K_m(r_i, r_j; z) f(r_j) r_j^{N-2} ds`.
pub fn apply_radial_kernel_quadrature(m: usize, f: &RadialSamples, z: &ComplexTime) -> Result<RadialSamples> {
    apply_radial_kernel_quadrature_with(Execution::default(), m, f, z)
}

pub fn apply_radial_kernel_quadrature_with(
    exec: Execution,
    m: usize,
    f: &RadialSamples,
    z: &ComplexTime,
) -> Result<RadialSamples> {
    z.require_kernel_regime("radial kernel quadrature")?;
    let grid = f.grid;
    let n = grid.n;
    let ds = grid.ds();
    let nu = half_dim_shift(grid.dim);
    let mu = m as f64 + nu;
    // K_m(r_i, r_j) = (r_i r_j)^{-nu} T[i - j]; T[d] is stored at d + n - 1.
    let table: Vec<Complex64> = (0..2 * n - 1)
        .map(|k| {
            let delta = (k as f64 - (n - 1) as f64) * ds;
            z.heat_normalization() * (-(delta * delta) / (4.0 * z.z) - z.z * mu * mu).exp()
        })
        .collect();
    let outer: Vec<f64> = (0..n).map(|j| (-nu * grid.s(j)).exp()).collect();
    let weighted: Vec<Complex64> = f
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| v * (nu * grid.s(j)).exp() * ds)
        .collect();
    let values = par::map_range(exec, n, |i| {
        let row = &table[i..i + n];
        let acc: Complex64 = row.iter().rev().zip(&weighted).map(|(k, w)| k * w).sum();
        acc * outer[i]
    });
    Ok(RadialSamples { grid, values })
}

/// Applies `exp(z |x|^2 Laplacian)` to a planar field by quadrature of the
/// full kernel over the whole (angle x log-radius) grid:
/// `sum_{b, j} K(x_{a,i}, x_{b,j}) F_{b,j} ds (2 pi / n_phi)`.
pub fn apply_full_kernel_quadrature_2d(field: &GridField2D, z: &ComplexTime) -> Result<GridField2D> {
    apply_full_kernel_quadrature_2d_with(Execution::default(), field, z)
}

pub fn apply_full_kernel_quadrature_2d_with(
    exec: Execution,
    field: &GridField2D,
    z: &ComplexTime,
) -> Result<GridField2D> {
    z.require_kernel_regime("planar kernel quadrature")?;
    let grid = field.grid;
    let (n, n_phi) = (grid.n, field.n_phi);
    let weight = grid.ds() * 2.0 * PI / n_phi as f64;
    // In the plane K depends only on (s - s') and (phi - phi').
    let table: Vec<Result<Complex64>> = par::map_range(exec, n_phi * (2 * n - 1), |idx| {
        let (da, dj) = (idx / (2 * n - 1), idx % (2 * n - 1));
        let delta_s = (dj as f64 - (n - 1) as f64) * grid.ds();
        closed_form_2d(delta_s.exp(), 1.0, AngleArg::Signed(angle(n_phi, da)), z)
    });
    let table: Vec<Complex64> = table.into_iter().collect::<Result<_>>()?;
    let values = par::map_range(exec, n_phi * n, |out| {
        let (a, i) = (out / n, out % n);
        let mut acc = Complex64::new(0.0, 0.0);
        for b in 0..n_phi {
            let da = (a + n_phi - b) % n_phi;
            let row = &table[da * (2 * n - 1)..(da + 1) * (2 * n - 1)];
            let src = field.row(b);
            for (j, v) in src.iter().enumerate() {
                acc += row[i + n - 1 - j] * v;
            }
        }
        acc * weight
    });
    GridField2D::new(n_phi, grid, values)
}

/// Applies `exp(z |x|^2 Laplacian)` on the line by quadrature of the
/// closed-form kernel over both half-lines. Inputs and outputs are the
/// radial profiles on `x > 0` and `x < 0`.
pub fn apply_full_kernel_quadrature_1d(
    positive: &RadialSamples,
    negative: &RadialSamples,
    z: &ComplexTime,
) -> Result<(RadialSamples, RadialSamples)> {
    z.require_kernel_regime("line kernel quadrature")?;
    let grid = positive.grid;
    if negative.grid != grid || grid.dim != 1 {
        return Err(Error::InvalidGrid("half-line profiles must share a one-dimensional grid".into()));
    }
    let ds = grid.ds();
    let radii: Vec<f64> = (0..grid.n).map(|j| grid.r(j)).collect();
    let eval = |sign: f64| -> Result<Vec<Complex64>> {
        par::map_range(Execution::default(), grid.n, |i| {
            let x = sign * radii[i];
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &rj) in radii.iter().enumerate() {
                let w = ds / rj;
                acc += closed_form_1d(x, rj, z)? * positive.values[j] * w;
                acc += closed_form_1d(x, -rj, z)? * negative.values[j] * w;
            }
            Ok(acc)
        })
        .into_iter()
        .collect()
    };
    Ok((RadialSamples { grid, values: eval(1.0)? }, RadialSamples { grid, values: eval(-1.0)? }))
}
