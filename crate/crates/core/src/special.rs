//! Gegenbauer and Chebyshev polynomials by three-term recurrence, and the
//! Jacobi-type theta function `sum_m exp(i pi tau m^2 + 2 i pi m v)` together
//! with its `v`-derivative.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Slack allowed on the closed interval `[-1, 1]` before a domain error.
pub const DOMAIN_SLACK: f64 = 1e-12;

fn check_unit_interval(what: &'static str, t: f64) -> Result<()> {
    if t.is_nan() || t.abs() > 1.0 + DOMAIN_SLACK {
        Err(Error::Domain { what, value: t })
    } else {
        Ok(())
    }
}

/// Gegenbauer polynomial `C_m^nu(t)`, the coefficient of `xi^m` in
/// `(1 - 2 t xi + xi^2)^(-nu)`.
///
/// Uses `n C_n = 2 (n + nu - 1) t C_{n-1} - (n + 2 nu - 2) C_{n-2}`.
pub fn gegenbauer_c(m: usize, nu: f64, t: f64) -> Result<f64> {
    check_unit_interval("gegenbauer_c", t)?;
    Ok(gegenbauer_c_unchecked(m, nu, t))
}

fn gegenbauer_c_unchecked(m: usize, nu: f64, t: f64) -> f64 {
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = 2.0 * nu * t;
    for n in 2..=m {
        let n_f = n as f64;
        let next = (2.0 * (n_f + nu - 1.0) * t * cur - (n_f + 2.0 * nu - 2.0) * prev) / n_f;
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalized Gegenbauer polynomial `((m + nu) / nu) C_m^nu(t)`.
///
/// At `nu = 0` this is the limit `1` for `m = 0` and `2 T_m(t)` otherwise.
/// At `nu = -1/2` and `t = +-1` (the two points of the zero-sphere) the
/// exact values `1, +-1, 0, 0, ...` are returned.
pub fn gegenbauer_tilde(m: usize, nu: f64, t: f64) -> Result<f64> {
    check_unit_interval("gegenbauer_tilde", t)?;
    if nu < -0.5 {
        return Err(Error::InvalidArgument(format!(
            "gegenbauer_tilde needs nu >= -1/2, got {nu}"
        )));
    }
    Ok(tilde_unchecked(m, nu, t))
}

fn tilde_unchecked(m: usize, nu: f64, t: f64) -> f64 {
    if nu == 0.0 {
        return if m == 0 { 1.0 } else { 2.0 * chebyshev_t_unchecked(m, t) };
    }
    if nu == -0.5 && (t.abs() - 1.0).abs() <= DOMAIN_SLACK {
        return match m {
            0 => 1.0,
            1 => t.signum(),
            _ => 0.0,
        };
    }
    (m as f64 + nu) / nu * gegenbauer_c_unchecked(m, nu, t)
}

/// Chebyshev polynomial of the first kind, `T_m(cos x) = cos(m x)`.
pub fn chebyshev_t(m: usize, t: f64) -> Result<f64> {
    check_unit_interval("chebyshev_t", t)?;
    Ok(chebyshev_t_unchecked(m, t))
}

fn chebyshev_t_unchecked(m: usize, t: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, t);
    if m == 0 {
        return prev;
    }
    for _ in 1..m {
        let next = 2.0 * t * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Chebyshev polynomial of the second kind, `U_m(cos x) = sin((m+1)x) / sin x`.
pub fn chebyshev_u(m: usize, t: f64) -> Result<f64> {
    check_unit_interval("chebyshev_u", t)?;
    let (mut prev, mut cur) = (1.0, 2.0 * t);
    if m == 0 {
        return Ok(prev);
    }
    for _ in 1..m {
        let next = 2.0 * t * cur - prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// A Gegenbauer index pair `(nu, m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GegenbauerParam {
    pub nu: f64,
    pub degree: usize,
}

impl GegenbauerParam {
    pub fn new(nu: f64, degree: usize) -> Self {
        Self { nu, degree }
    }

    /// The index `nu = (N - 2) / 2` attached to the sphere `S^{N-1}`.
    pub fn for_dim(dim: usize, degree: usize) -> Self {
        Self::new(half_dim_shift(dim), degree)
    }

    pub fn c(&self, t: f64) -> Result<f64> {
        gegenbauer_c(self.degree, self.nu, t)
    }

    pub fn tilde(&self, t: f64) -> Result<f64> {
        gegenbauer_tilde(self.degree, self.nu, t)
    }

    /// `sup_{|t| <= 1} |C~_m^nu(t)|`.
    ///
    /// For `nu > 0` the supremum is attained at `t = 1`, where
    /// `C_m^nu(1) = Gamma(m + 2 nu) / (m! Gamma(2 nu))`; it is accumulated
    /// here as the product `prod_{j < m} (2 nu + j) / (j + 1)`.
    pub fn tilde_sup(&self) -> f64 {
        let m = self.degree;
        let nu = self.nu;
        if nu == 0.0 {
            return if m == 0 { 1.0 } else { 2.0 };
        }
        if nu == -0.5 {
            return if m <= 1 { 1.0 } else { 0.0 };
        }
        let c_at_one = (0..m).fold(1.0, |acc, j| acc * (2.0 * nu + j as f64) / (j as f64 + 1.0));
        (m as f64 + nu) / nu * c_at_one
    }
}

/// `(N - 2) / 2`.
pub fn half_dim_shift(dim: usize) -> f64 {
    (dim as f64 - 2.0) / 2.0
}

/// Iterator over `C~_0^nu(t), C~_1^nu(t), ...`, running one recurrence.
#[derive(Debug, Clone)]
pub struct GegenbauerTildeSeq {
    nu: f64,
    t: f64,
    n: usize,
    prev: f64,
    cur: f64,
}

impl GegenbauerTildeSeq {
    pub fn new(nu: f64, t: f64) -> Result<Self> {
        check_unit_interval("gegenbauer_tilde", t)?;
        // nu = 0 runs the Chebyshev recurrence, everything else the Gegenbauer one.
        let (prev, cur) = if nu == 0.0 { (1.0, t) } else { (1.0, 2.0 * nu * t) };
        Ok(Self { nu, t, n: 0, prev, cur })
    }
}

impl Iterator for GegenbauerTildeSeq {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let m = self.n;
        let nu = self.nu;
        let value = if nu == -0.5 && (self.t.abs() - 1.0).abs() <= DOMAIN_SLACK {
            tilde_unchecked(m, nu, self.t)
        } else {
            let raw = match m {
                0 => self.prev,
                _ => self.cur,
            };
            if nu == 0.0 {
                if m == 0 { 1.0 } else { 2.0 * raw }
            } else {
                (m as f64 + nu) / nu * raw
            }
        };
        if m >= 1 {
            let n_f = (m + 1) as f64;
            let next = if nu == 0.0 {
                2.0 * self.t * self.cur - self.prev
            } else {
                (2.0 * (n_f + nu - 1.0) * self.t * self.cur - (n_f + 2.0 * nu - 2.0) * self.prev) / n_f
            };
            self.prev = self.cur;
            self.cur = next;
        }
        self.n += 1;
        Some(value)
    }
}

/// `Gamma(k / 2)` for a positive integer `k`.
pub fn gamma_half_integer(k: usize) -> f64 {
    assert!(k >= 1, "gamma_half_integer needs k >= 1");
    let (mut value, mut x) = if k.is_multiple_of(2) { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    while x + 1e-9 < k as f64 / 2.0 {
        value *= x;
        x += 1.0;
    }
    value
}

/// Surface measure of the unit sphere `S^{N-1}`: `2 pi^{N/2} / Gamma(N/2)`.
pub fn sphere_area(dim: usize) -> f64 {
    2.0 * PI.powf(dim as f64 / 2.0) / gamma_half_integer(dim)
}

/// Arguments of the theta function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaArgs {
    pub v: Complex64,
    pub tau: Complex64,
    /// Absolute truncation tolerance.
    pub tol: f64,
}

impl ThetaArgs {
    pub fn new(v: Complex64, tau: Complex64, tol: f64) -> Self {
        Self { v, tau, tol }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tau.im > 0.0) {
            return Err(Error::Divergence { im_tau: self.tau.im });
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!("theta tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

const THETA_MAX_TERMS: usize = 1 << 22;

/// Number of terms `M` kept on each side of the theta series.
///
/// The first `M >= 4` with
/// `|exp(i pi tau M^2)| (1 + 2 pi M) exp(2 pi M |Im v|) < tol / 4`.
pub fn theta_truncation(args: &ThetaArgs) -> Result<usize> {
    args.validate()?;
    let log_target = (args.tol / 4.0).ln();
    let im_v = args.v.im.abs();
    let mut m = 4usize;
    loop {
        let mf = m as f64;
        let log_bound = -PI * args.tau.im * mf * mf + (1.0 + 2.0 * PI * mf).ln() + 2.0 * PI * mf * im_v;
        if log_bound < log_target {
            return Ok(m);
        }
        m += 1;
        if m > THETA_MAX_TERMS {
            return Err(Error::InvalidArgument(format!(
                "theta series needs more than {THETA_MAX_TERMS} terms (Im tau = {})",
                args.tau.im
            )));
        }
    }
}

fn reduce_period(v: Complex64) -> Complex64 {
    Complex64::new(v.re - v.re.round(), v.im)
}

/// `theta(v, tau) = 1 + 2 sum_{m >= 1} exp(i pi tau m^2) cos(2 pi m v)`.
pub fn theta(args: &ThetaArgs) -> Result<Complex64> {
    let big_m = theta_truncation(args)?;
    let v = reduce_period(args.v);
    let i_pi_tau = Complex64::i() * PI * args.tau;
    let mut sum = Complex64::new(0.0, 0.0);
    for m in (1..=big_m).rev() {
        let mf = m as f64;
        sum += (i_pi_tau * (mf * mf)).exp() * (2.0 * PI * mf * v).cos();
    }
    Ok(1.0 + 2.0 * sum)
}

/// `d theta / dv = -4 pi sum_{m >= 1} m exp(i pi tau m^2) sin(2 pi m v)`.
pub fn theta_dv(args: &ThetaArgs) -> Result<Complex64> {
    let big_m = theta_truncation(args)?;
    let v = reduce_period(args.v);
    let i_pi_tau = Complex64::i() * PI * args.tau;
    let mut sum = Complex64::new(0.0, 0.0);
    for m in (1..=big_m).rev() {
        let mf = m as f64;
        sum += mf * (i_pi_tau * (mf * mf)).exp() * (2.0 * PI * mf * v).sin();
    }
    Ok(-4.0 * PI * sum)
}
