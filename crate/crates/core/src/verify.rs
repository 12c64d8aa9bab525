//! Verification suites: commutator relations, degeneration, series versus
//! closed forms, spectral versus kernel routes, unitarity, scaling, the
//! semigroup law and spherical projections. Each suite reports the worst
//! defect of every check against a fixed tolerance.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::Result;
use crate::kernels::{
    apply_radial_kernel_quadrature, closed_form_1d, closed_form_2d, closed_form_4d, full_kernel_series, radial_kernel,
    AngleArg, ComplexTime, KernelQuery,
};
use crate::log_radial::{fourier_forward, fourier_inverse, u_inverse, LogRadialGrid, LogSamples, RadialSamples};
use crate::oracle::{
    commutator_defect, contraction_defect, degenerate_relations, degeneration_trace, full_space_commutator_defect,
    sl2_relations, standard_basis, GeneratorPair, LadderKind,
};
use crate::special::{half_dim_shift, theta, theta_dv, ThetaArgs};
use crate::spectral::{apply_exp_g0, apply_scaling_direct, G0Exponent};
use crate::spherical::{angle, project_circle, FactoredField};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub defect: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `defect < tolerance`.
    pub fn below(name: impl Into<String>, defect: f64, tolerance: f64) -> Self {
        Self { name: name.into(), defect, tolerance, passed: defect < tolerance }
    }

    /// Passes when `defect` lies in `[lo, hi]`; `tolerance` records `hi - lo`.
    fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Self { name: name.into(), defect: value, tolerance: hi - lo, passed: (lo..=hi).contains(&value) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub seconds: f64,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

pub const SUITES: [&str; 8] = ["sl2", "degeneration", "theta", "spectral", "unitarity", "scaling", "semigroup", "projection"];

/// Runs the named suites (all of them when `names` is empty).
pub fn run(names: &[String]) -> Result<Report> {
    let selected: Vec<&str> = if names.is_empty() {
        SUITES.to_vec()
    } else {
        names.iter().map(String::as_str).collect()
    };
    let mut suites = Vec::new();
    for name in selected {
        let start = Instant::now();
        let checks = match name {
            "sl2" => sl2_suite()?,
            "degeneration" => degeneration_suite()?,
            "theta" => {
                let mut checks = theta_suite()?;
                checks.extend(closed_form_suite()?);
                checks
            }
            "spectral" => spectral_suite()?,
            "unitarity" => unitarity_suite()?,
            "scaling" => scaling_suite()?,
            "semigroup" => semigroup_suite()?,
            "projection" => projection_suite()?,
            other => {
                return Err(crate::Error::Parse(format!(
                    "unknown suite {other:?}; expected one of {}",
                    SUITES.join(", ")
                )))
            }
        };
        suites.push(SuiteReport {
            name: name.to_string(),
            passed: checks.iter().all(|c| c.passed),
            seconds: start.elapsed().as_secs_f64(),
            checks,
        });
    }
    Ok(Report { passed: suites.iter().all(|s| s.passed), suites })
}

pub const SL2_A: [f64; 4] = [0.5, 1.0, 2.0, 3.0];
pub const SL2_TOL: f64 = 1e-12;

/// Nine checks: the three sl2 relations on the full space (mixed-degree
/// fields), the same three on each radial part, and the three vanishing
/// commutators of the degenerate generators.
pub fn sl2_suite() -> Result<Vec<Check>> {
    let basis = standard_basis();
    let degrees = [0usize, 1, 2, 3];
    let mut full = [0.0f64; 3];
    let mut radial = [0.0f64; 3];
    let mut degenerate = [0.0f64; 3];
    let mut names = [""; 3];
    let mut degenerate_names = [""; 3];
    for a in SL2_A {
        for dim in 1..=4 {
            for (k, (name, x, y, e)) in sl2_relations(a, 0, dim)?.into_iter().enumerate() {
                names[k] = name;
                full[k] = full[k].max(full_space_commutator_defect(&x, &y, &e, &basis, &degrees));
                for m in degrees {
                    let d = commutator_defect(&x.with_degree(m), &y.with_degree(m), &e.with_degree(m), &basis);
                    radial[k] = radial[k].max(d);
                }
            }
        }
    }
    for dim in 1..=4 {
        for m in degrees {
            for (k, (name, x, y, e)) in degenerate_relations(m, dim).into_iter().enumerate() {
                degenerate_names[k] = name;
                degenerate[k] = degenerate[k].max(commutator_defect(&x, &y, &e, &basis));
            }
        }
    }
    let mut checks = Vec::new();
    for k in 0..3 {
        checks.push(Check::below(format!("full space {}", names[k]), full[k], SL2_TOL));
    }
    for k in 0..3 {
        checks.push(Check::below(format!("radial parts {}", names[k]), radial[k], SL2_TOL));
    }
    for k in 0..3 {
        checks.push(Check::below(format!("degenerate {}", degenerate_names[k]), degenerate[k], SL2_TOL));
    }
    Ok(checks)
}

pub const DEGENERATION_A: [f64; 3] = [1e-1, 1e-2, 1e-3];
pub const DEGENERATION_RATIO: (f64, f64) = (9.5, 10.5);

pub fn degeneration_suite() -> Result<Vec<Check>> {
    let basis = standard_basis();
    let mut checks = Vec::new();
    for pair in GeneratorPair::ALL {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for dim in 1..=4 {
            for m in 0..=3 {
                let trace = degeneration_trace(&DEGENERATION_A, pair, m, dim, &basis)?;
                for w in trace.windows(2) {
                    let ratio = w[0] / w[1];
                    lo = lo.min(ratio);
                    hi = hi.max(ratio);
                }
            }
        }
        let (a, b) = DEGENERATION_RATIO;
        checks.push(Check::within(format!("{pair} min ratio"), lo, a, b));
        checks.push(Check::within(format!("{pair} max ratio"), hi, a, b));
    }
    for kind in [LadderKind::H, LadderKind::EPlus, LadderKind::EMinus] {
        let mut worst: f64 = 0.0;
        for dim in 1..=4 {
            for m in 0..=3 {
                worst = worst.max(contraction_defect(kind, 1e-6, m, dim, &basis, &[0.5, 1.0, 2.0])?);
            }
        }
        checks.push(Check::below(format!("a {kind}_a -> degenerate {kind} (first order, a = 1e-6)"), worst, 1e-10));
    }
    let mut worst: f64 = 0.0;
    for dim in 1..=4 {
        for m in 0..=3 {
            for (_, x, y, e) in degenerate_relations(m, dim) {
                worst = worst.max(commutator_defect(&x, &y, &e, &basis));
            }
        }
    }
    checks.push(Check::below("degenerate commutators", worst, 1e-12));
    Ok(checks)
}

/// Reference value of `theta(0, i)`.
pub const THETA_0_I: f64 = 1.086434811213308;

pub fn theta_suite() -> Result<Vec<Check>> {
    let value = theta(&ThetaArgs::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0), 1e-16))?;
    let mut checks = vec![Check::below("theta(0, i)", (value - THETA_0_I).norm(), 1e-12)];
    let mut worst: f64 = 0.0;
    let h = 1e-5;
    for &(v, tau) in &[(0.2, Complex64::new(0.0, 0.5)), (0.13, Complex64::new(0.2, 0.8)), (0.41, Complex64::new(-0.1, 0.3))] {
        let v = Complex64::new(v, 0.0);
        let f = |v: Complex64| theta(&ThetaArgs::new(v, tau, 1e-16));
        let fd = (f(v + h)? - f(v - h)?) / (2.0 * h);
        let exact = theta_dv(&ThetaArgs::new(v, tau, 1e-16))?;
        worst = worst.max((fd - exact).norm() / exact.norm());
    }
    checks.push(Check::below("d theta/dv vs finite differences (relative)", worst, 1e-6));
    Ok(checks)
}

pub const CLOSED_FORM_R: [f64; 3] = [0.5, 1.0, 2.0];
pub const CLOSED_FORM_R_PRIME: [f64; 3] = [0.7, 1.3, 3.0];
pub const CLOSED_FORM_T: [f64; 3] = [-0.8, 0.1, 0.95];

pub fn closed_form_times() -> [ComplexTime; 3] {
    [
        ComplexTime::real(0.3),
        ComplexTime::new(Complex64::new(0.5, 0.2)),
        ComplexTime::new(Complex64::new(1.2, -0.7)),
    ]
}

/// Closed forms in dimensions 1, 2, 4 against the truncated series on a
/// 3 x 3 x 3 x 3 grid of `(r, r', t, z)`. Errors are absolute, scaled by
/// `max(1, |K|)`.
pub fn closed_form_suite() -> Result<Vec<Check>> {
    let mut worst = [0.0f64; 3];
    for &r in &CLOSED_FORM_R {
        for &rp in &CLOSED_FORM_R_PRIME {
            for &t in &CLOSED_FORM_T {
                for z in closed_form_times() {
                    let series = |dim: usize, t: f64| full_kernel_series(&KernelQuery::new(dim, z, r, rp, t, 1e-15));
                    let sign = t.signum();
                    let k1 = closed_form_1d(r, sign * rp, &z)?;
                    let s1 = series(1, sign)?;
                    worst[0] = worst[0].max((k1 - s1).norm() / s1.norm().max(1.0));
                    let k2 = closed_form_2d(r, rp, AngleArg::Cosine(t), &z)?;
                    let s2 = series(2, t)?;
                    worst[1] = worst[1].max((k2 - s2).norm() / s2.norm().max(1.0));
                    let k4 = closed_form_4d(r, rp, t, &z)?;
                    let s4 = series(4, t)?;
                    worst[2] = worst[2].max((k4 - s4).norm() / s4.norm().max(1.0));
                }
            }
        }
    }
    Ok(vec![
        Check::below("N = 1 closed form vs two-term series", worst[0], 1e-14),
        Check::below("N = 2 theta closed form vs series", worst[1], 1e-9),
        Check::below("N = 4 theta-derivative closed form vs series", worst[2], 1e-8),
    ])
}

/// Radial samples whose log-radial image is `exp(-s^2 / 2)`.
pub fn gaussian_in_s(grid: LogRadialGrid) -> RadialSamples {
    u_inverse(&LogSamples::from_fn(grid, |s| Complex64::new((-s * s / 2.0).exp(), 0.0)))
}

fn relative_error(a: &RadialSamples, b: &RadialSamples) -> f64 {
    let diff = RadialSamples { grid: a.grid, values: a.values.iter().zip(&b.values).map(|(x, y)| x - y).collect() };
    diff.weighted_norm() / b.weighted_norm()
}

pub fn spectral_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for dim in 2..=4 {
        let mut worst: f64 = 0.0;
        for m in 0..=4 {
            let field = FactoredField::abstract_slot(m, gaussian_in_s(LogRadialGrid::default_for(dim)?))?;
            for z in [Complex64::new(0.5, 0.0), Complex64::new(0.3, 0.4)] {
                let spectral = apply_exp_g0(&G0Exponent::heat(z), &field)?;
                let quad = apply_radial_kernel_quadrature(m, &field.radial, &ComplexTime::new(z))?;
                worst = worst.max(relative_error(&spectral.radial, &quad));
            }
        }
        checks.push(Check::below(format!("N = {dim}: spectral vs radial kernel quadrature"), worst, 1e-8));
    }
    Ok(checks)
}

/// Random field with Fourier support in `|sigma| < band`, weight-adjusted to `dim`.
pub fn random_band_limited(grid: LogRadialGrid, band: f64, seed: u64) -> RadialSamples {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut hat = fourier_forward(&LogSamples { grid, values: vec![Complex64::new(0.0, 0.0); grid.n] });
    for (v, &sigma) in hat.values.iter_mut().zip(&hat.sigma) {
        if sigma.abs() < band {
            *v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    u_inverse(&fourier_inverse(&hat))
}

pub fn unitary_exponents() -> Vec<(&'static str, G0Exponent)> {
    let i = |t: f64| Complex64::new(0.0, t);
    let zero = Complex64::new(0.0, 0.0);
    vec![
        ("z3 = 0.7i", G0Exponent::new(zero, zero, i(0.7))),
        ("z3 = -1.3i", G0Exponent::new(zero, zero, i(-1.3))),
        ("z1 = 0.4i", G0Exponent::new(i(0.4), zero, zero)),
        ("z1 = 0.4i, z2 = 0.9i, z3 = 0.7i", G0Exponent::new(i(0.4), i(0.9), i(0.7))),
    ]
}

pub fn unitarity_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (name, e) in unitary_exponents() {
        let mut worst: f64 = 0.0;
        for dim in 1..=4usize {
            for m in 0..=2usize {
                if dim == 1 && m > 1 {
                    continue;
                }
                let grid = LogRadialGrid::default_for(dim)?;
                let f = FactoredField::abstract_slot(m, random_band_limited(grid, 6.0, 17 * dim as u64 + m as u64))?;
                let out = apply_exp_g0(&e, &f)?;
                worst = worst.max((out.norm() - f.norm()).abs() / f.norm());
            }
        }
        checks.push(Check::below(format!("norm preserved for {name}"), worst, 1e-12));
    }
    Ok(checks)
}

pub fn scaling_suite() -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    for dim in 1..=4usize {
        let grid = LogRadialGrid::default_for(dim)?;
        let w = half_dim_shift(dim);
        let radial = RadialSamples::from_fn(grid, |r| {
            let s = r.ln();
            Complex64::new(r.powf(-w) * (-2.0 * (s - 1.0).powi(2)).exp(), r.powf(-w) * s * (-(s * s)).exp())
        });
        let field = FactoredField::abstract_slot(dim.min(2) - 1, radial)?;
        for steps in [-40i64, 7, 64] {
            let t = steps as f64 * grid.ds() / 2.0;
            let spectral = apply_exp_g0(&G0Exponent::scaling(t), &field)?;
            let direct = apply_scaling_direct(t, &field)?;
            worst = worst.max(relative_error(&spectral.radial, &direct.radial));
        }
    }
    Ok(vec![Check::below("spectral z1 = it vs direct dilation", worst, 1e-10)])
}

pub const SEMIGROUP_PAIRS: [(usize, usize); 5] = [(1, 0), (2, 0), (2, 3), (3, 1), (4, 2)];

/// `int K_m(r, rho; z1) K_m(rho, r'; z2) rho^{N-3} d rho` on the log grid,
/// compared with `K_m(r, r'; z1 + z2)` (relative error).
pub fn semigroup_defect(dim: usize, m: usize, z1: Complex64, z2: Complex64, r: f64, r_prime: f64) -> Result<f64> {
    let grid = LogRadialGrid::default_for(dim)?;
    let (t1, t2) = (ComplexTime::new(z1), ComplexTime::new(z2));
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..grid.n {
        let rho = grid.r(j);
        acc += radial_kernel(m, dim, r, rho, &t1)? * radial_kernel(m, dim, rho, r_prime, &t2)? * rho.powf(dim as f64 - 2.0);
    }
    acc *= grid.ds();
    let exact = radial_kernel(m, dim, r, r_prime, &ComplexTime::new(z1 + z2))?;
    Ok((acc - exact).norm() / exact.norm())
}

pub fn semigroup_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (dim, m) in SEMIGROUP_PAIRS {
        let mut worst: f64 = 0.0;
        for (z1, z2) in [
            (Complex64::new(0.3, 0.0), Complex64::new(0.5, 0.0)),
            (Complex64::new(0.2, 0.3), Complex64::new(0.4, -0.1)),
        ] {
            for (r, rp) in [(1.3, 0.7), (0.4, 2.0)] {
                worst = worst.max(semigroup_defect(dim, m, z1, z2, r, rp)?);
            }
        }
        checks.push(Check::below(format!("K_m semigroup law, N = {dim}, m = {m}"), worst, 1e-6));
    }
    Ok(checks)
}

pub const PROJECTION_N_PHI: usize = 256;
pub const PROJECTION_MAX_DEGREE: usize = 20;

pub fn projection_suite() -> Result<Vec<Check>> {
    let n = PROJECTION_N_PHI;
    let mut rng = rand::rngs::StdRng::seed_from_u64(2025);
    let coeffs: Vec<(Complex64, Complex64)> = (0..=PROJECTION_MAX_DEGREE)
        .map(|_| {
            (
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
        })
        .collect();
    let signal: Vec<Complex64> = (0..n)
        .map(|i| {
            let phi = angle(n, i);
            coeffs
                .iter()
                .enumerate()
                .map(|(k, (a, b))| a * Complex64::from_polar(1.0, k as f64 * phi) + b * Complex64::from_polar(1.0, -(k as f64) * phi))
                .sum()
        })
        .collect();
    let mut idempotence: f64 = 0.0;
    let mut exactness: f64 = 0.0;
    for (m, &(a, b)) in coeffs.iter().enumerate() {
        let once = project_circle(m, &signal)?;
        let twice = project_circle(m, &once)?;
        idempotence = idempotence.max(max_diff(&once, &twice));
        let expected: Vec<Complex64> = (0..n)
            .map(|i| {
                let phi = angle(n, i);
                if m == 0 {
                    a + b
                } else {
                    a * Complex64::from_polar(1.0, m as f64 * phi) + b * Complex64::from_polar(1.0, -(m as f64) * phi)
                }
            })
            .collect();
        exactness = exactness.max(max_diff(&once, &expected));
    }
    let mut orthogonality: f64 = 0.0;
    for m in 0..=PROJECTION_MAX_DEGREE {
        for k in 0..=PROJECTION_MAX_DEGREE {
            if k == m {
                continue;
            }
            let mode: Vec<Complex64> = (0..n).map(|i| Complex64::from_polar(1.0, k as f64 * angle(n, i))).collect();
            let projected = project_circle(m, &mode)?;
            orthogonality = orthogonality.max(projected.iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
    }
    Ok(vec![
        Check::below("P_m P_m = P_m on S^1", idempotence, 1e-10),
        Check::below("P_m e^{i k phi} = 0 for k != m", orthogonality, 1e-10),
        Check::below("P_m extracts the degree-m modes", exactness, 1e-10),
    ])
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
