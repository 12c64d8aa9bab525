//! Joint functional calculus of the commutative algebra spanned by
//! `2 sum x_j d_j + N - 2`, `1` and `|x|^2 Laplacian`.
//!
//! After the log-radial Fourier transform, on degree-`m` factored fields
//! the three generators act as multiplication by `2 i sigma`, `1` and
//! `-(sigma^2 + (m + (N-2)/2)^2)`.

use std::ops::{Add, Neg};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::log_radial::{fourier_forward, fourier_inverse, u_forward, u_inverse, LogSamples, RadialSamples};
use crate::par::{self, Execution};
use crate::special::half_dim_shift;
use crate::spherical::{decompose_1d, decompose_2d, recompose_1d, recompose_2d, FactoredField, GridField2D};

/// Coefficients of `exp(z1/i (2 sum x_j d_j + N - 2) + z2 + z3 |x|^2 Laplacian)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct G0Exponent {
    pub z1: Complex64,
    pub z2: Complex64,
    pub z3: Complex64,
}

impl G0Exponent {
    pub fn new(z1: Complex64, z2: Complex64, z3: Complex64) -> Self {
        Self { z1, z2, z3 }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `exp(t (2 sum x_j d_j + N - 2))`, i.e. `z1 = i t`.
    pub fn scaling(t: f64) -> Self {
        Self { z1: Complex64::new(0.0, t), ..Self::default() }
    }

    /// `exp(z |x|^2 Laplacian)`.
    pub fn heat(z: Complex64) -> Self {
        Self { z3: z, ..Self::default() }
    }

    /// `(t1, t2, t3) -> exp(t1 (2 sum x_j d_j + N - 2) + i t2 + i t3 |x|^2 Laplacian)`.
    pub fn unitary(t1: f64, t2: f64, t3: f64) -> Self {
        Self::new(Complex64::new(0.0, t1), Complex64::new(0.0, t2), Complex64::new(0.0, t3))
    }

    /// `|e^{z2}|`, the operator norm contributed by the scalar direction.
    pub fn scalar_modulus(&self) -> f64 {
        self.z2.re.exp()
    }

    pub fn boundedness(&self) -> Boundedness {
        is_bounded(self)
    }
}

impl Add for G0Exponent {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(self.z1 + rhs.z1, self.z2 + rhs.z2, self.z3 + rhs.z3)
    }
}

impl Neg for G0Exponent {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.z1, -self.z2, -self.z3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundedness {
    BoundedUnitary,
    Bounded,
    Unbounded,
}

/// Unitary iff all three real parts vanish; bounded iff `Re z1 = 0` and
/// `Re z3 >= 0` (the `z2` part only contributes the scalar `|e^{z2}|`).
pub fn is_bounded(e: &G0Exponent) -> Boundedness {
    if e.z1.re != 0.0 || e.z3.re < 0.0 || !e.z2.re.is_finite() {
        Boundedness::Unbounded
    } else if e.z2.re == 0.0 && e.z3.re == 0.0 {
        Boundedness::BoundedUnitary
    } else {
        Boundedness::Bounded
    }
}

/// `exp(2 z1 sigma + z2 - z3 (sigma^2 + (m + (N-2)/2)^2))`.
pub fn multiplier(e: &G0Exponent, m: usize, sigma: f64, dim: usize) -> Complex64 {
    let mu = m as f64 + half_dim_shift(dim);
    (2.0 * e.z1 * sigma + e.z2 - e.z3 * (sigma * sigma + mu * mu)).exp()
}

fn require_bounded(e: &G0Exponent) -> Result<()> {
    if is_bounded(e) == Boundedness::Unbounded {
        return Err(Error::Unbounded(format!(
            "exp needs Re z1 = 0 and Re z3 >= 0, got z1 = {}, z3 = {}",
            e.z1, e.z3
        )));
    }
    Ok(())
}

/// Applies the multiplier of degree `m` to radial samples.
pub fn apply_exp_g0_radial(e: &G0Exponent, m: usize, f: &RadialSamples) -> Result<RadialSamples> {
    require_bounded(e)?;
    let scalar = e.z2.exp();
    if e.z1 == Complex64::new(0.0, 0.0) && e.z3 == Complex64::new(0.0, 0.0) {
        return Ok(RadialSamples { grid: f.grid, values: f.values.iter().map(|v| v * scalar).collect() });
    }
    let dim = f.grid.dim;
    let mut hat = fourier_forward(&u_forward(f));
    hat.scale_by(|sigma| multiplier(e, m, sigma, dim));
    Ok(u_inverse(&fourier_inverse(&hat)))
}

/// `exp(z1/i (2 sum x_j d_j + N - 2) + z2 + z3 |x|^2 Laplacian) (p (x) f)`,
/// computed on the Fourier side of the log-radial variable. The degree and
/// spherical part are unchanged.
pub fn apply_exp_g0(e: &G0Exponent, field: &FactoredField) -> Result<FactoredField> {
    Ok(field.with_radial(apply_exp_g0_radial(e, field.degree, &field.radial)?))
}

/// Applies the same exponent to several factored fields, one task per field.
pub fn apply_exp_g0_all(e: &G0Exponent, fields: &[FactoredField]) -> Result<Vec<FactoredField>> {
    apply_exp_g0_all_with(Execution::default(), e, fields)
}

pub fn apply_exp_g0_all_with(exec: Execution, e: &G0Exponent, fields: &[FactoredField]) -> Result<Vec<FactoredField>> {
    require_bounded(e)?;
    par::map_slice(exec, fields, |f| apply_exp_g0(e, f)).into_iter().collect()
}

/// Planar fields: angular decomposition, per-degree multiplier, recomposition.
pub fn apply_exp_g0_grid_2d(e: &G0Exponent, field: &GridField2D) -> Result<GridField2D> {
    let parts = apply_exp_g0_all(e, &decompose_2d(field))?;
    recompose_2d(&parts, field.n_phi)
}

/// Fields on the line, given by their profiles on `x > 0` and `x < 0`.
pub fn apply_exp_g0_line(
    e: &G0Exponent,
    positive: &RadialSamples,
    negative: &RadialSamples,
) -> Result<(RadialSamples, RadialSamples)> {
    let parts = apply_exp_g0_all(e, &decompose_1d(positive, negative)?)?;
    recompose_1d(&parts)
}

/// Number of grid steps `2t / ds`, required to be an integer.
pub fn scaling_steps(t: f64, ds: f64) -> Result<i64> {
    let steps = 2.0 * t / ds;
    let rounded = steps.round();
    if !steps.is_finite() || (steps - rounded).abs() > 1e-9 * rounded.abs().max(1.0) {
        return Err(Error::Misaligned { t, steps });
    }
    Ok(rounded as i64)
}

/// `F -> e^{(N-2)t} F(e^{2t} x)` on radial samples, as an index shift of
/// `2t/ds` in `s`. The shift is periodic in the log-radial variable
/// `g = e^{(N-2)s/2} f`, matching the periodic Fourier side.
pub fn apply_scaling_radial(t: f64, f: &RadialSamples) -> Result<RadialSamples> {
    let grid = f.grid;
    let steps = scaling_steps(t, grid.ds())?;
    if steps == 0 {
        return Ok(f.clone());
    }
    let g = u_forward(f);
    let n = grid.n as i64;
    let values = (0..n).map(|j| g.values[(j + steps).rem_euclid(n) as usize]).collect();
    Ok(u_inverse(&LogSamples { grid, values }))
}

pub fn apply_scaling_direct(t: f64, field: &FactoredField) -> Result<FactoredField> {
    Ok(field.with_radial(apply_scaling_radial(t, &field.radial)?))
}

/// Dilation of a planar field; each angular row is shifted independently.
pub fn apply_scaling_grid_2d(t: f64, field: &GridField2D) -> Result<GridField2D> {
    let grid = field.grid;
    let mut values = Vec::with_capacity(field.values.len());
    for a in 0..field.n_phi {
        let row = RadialSamples { grid, values: field.row(a).to_vec() };
        values.extend(apply_scaling_radial(t, &row)?.values);
    }
    GridField2D::new(field.n_phi, grid, values)
}
