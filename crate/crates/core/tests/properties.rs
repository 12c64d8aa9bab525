use num_complex::Complex64;
use proptest::prelude::*;

use conformal_heat::cli::fields::parse_field;
use conformal_heat::kernels::{full_kernel_series, ComplexTime, KernelQuery};
use conformal_heat::log_radial::{fourier_forward, u_forward};
use conformal_heat::special::{theta, GegenbauerParam, ThetaArgs};
use conformal_heat::spectral::{apply_exp_g0, apply_scaling_direct, G0Exponent};
use conformal_heat::spherical::{angle, project_circle, FactoredField};
use conformal_heat::verify::random_band_limited;
use conformal_heat::{LogRadialGrid, RadialSamples};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn small_grid(dim: usize) -> LogRadialGrid {
    LogRadialGrid::new(dim, -12.0, 12.0, 256).unwrap()
}

fn field(dim: usize, m: usize, seed: u64) -> FactoredField {
    FactoredField::abstract_slot(m, random_band_limited(small_grid(dim), 5.0, seed)).unwrap()
}

fn max_diff(a: &RadialSamples, b: &RadialSamples) -> f64 {
    a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn bounded_exponent() -> impl Strategy<Value = G0Exponent> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.0..1.0f64, -1.0..1.0f64)
        .prop_map(|(a, b, d, e, f)| G0Exponent::new(c(0.0, a), c(b, d), c(e, f)))
}

fn unitary_exponent() -> impl Strategy<Value = G0Exponent> {
    (-1.0..1.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b, d)| G0Exponent::unitary(a, b, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn theta_is_periodic_and_even(v in -2.0..2.0f64, vi in -0.3..0.3f64, re in -1.0..1.0f64, im in 0.2..3.0f64) {
        let tau = c(re, im);
        let at = |v: Complex64| theta(&ThetaArgs::new(v, tau, 1e-15)).unwrap();
        let v = c(v, vi);
        let base = at(v);
        let scale = base.norm().max(1.0);
        prop_assert!((at(v + 1.0) - base).norm() <= 1e-12 * scale);
        prop_assert!((at(-v) - base).norm() <= 1e-12 * scale);
    }

    #[test]
    fn kernel_symmetries(
        dim in 1usize..=4,
        r in 0.2..3.0f64,
        rp in 0.2..3.0f64,
        t in -0.99..0.99f64,
        re in 0.1..2.0f64,
        im in -1.5..1.5f64,
    ) {
        let t = if dim == 1 { t.signum() } else { t };
        let z = ComplexTime::new(c(re, im));
        let k = |z: ComplexTime, a: f64, b: f64| full_kernel_series(&KernelQuery::new(dim, z, a, b, t, 1e-14)).unwrap();
        let base = k(z, r, rp);
        let scale = base.norm().max(1.0);
        prop_assert!((k(z, rp, r) - base).norm() <= 1e-12 * scale);
        prop_assert!((k(z.conj(), r, rp).conj() - base).norm() <= 1e-12 * scale);
    }

    #[test]
    fn kernel_diagonal_is_positive_for_real_time(dim in 1usize..=4, r in 0.2..3.0f64, z in 0.05..3.0f64) {
        let k = full_kernel_series(&KernelQuery::new(dim, ComplexTime::real(z), r, r, 1.0, 1e-14)).unwrap();
        prop_assert!(k.re > 0.0);
        prop_assert!(k.im.abs() <= 1e-14 * k.re);
    }

    #[test]
    fn gegenbauer_sup_is_attained_at_one(nu in 0.05..3.0f64, m in 0usize..25) {
        let p = GegenbauerParam::new(nu, m);
        let sup = p.tilde_sup();
        prop_assert!((p.tilde(1.0).unwrap() - sup).abs() <= 1e-9 * sup);
        for k in 0..=200 {
            let t = -1.0 + k as f64 / 100.0;
            prop_assert!(p.tilde(t).unwrap().abs() <= sup * (1.0 + 1e-9));
        }
    }

    #[test]
    fn log_fourier_transform_is_unitary(dim in 1usize..=4, seed in any::<u64>()) {
        let f = random_band_limited(small_grid(dim), 5.0, seed);
        let hat = fourier_forward(&u_forward(&f));
        prop_assert!((hat.l2_norm() - f.weighted_norm()).abs() <= 1e-12 * f.weighted_norm());
    }

    #[test]
    fn exponentials_compose(dim in 1usize..=4, m in 0usize..=3, seed in any::<u64>(), e1 in bounded_exponent(), e2 in bounded_exponent()) {
        let m = if dim == 1 { m % 2 } else { m };
        let f = field(dim, m, seed);
        let two_steps = apply_exp_g0(&e1, &apply_exp_g0(&e2, &f).unwrap()).unwrap();
        let one_step = apply_exp_g0(&(e1 + e2), &f).unwrap();
        let scale = f.radial.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        prop_assert!(max_diff(&two_steps.radial, &one_step.radial) <= 1e-10 * scale);
    }

    #[test]
    fn unitary_exponentials_preserve_norm_and_invert(dim in 1usize..=4, seed in any::<u64>(), e in unitary_exponent()) {
        let f = field(dim, if dim == 1 { 1 } else { 2 }, seed);
        let g = apply_exp_g0(&e, &f).unwrap();
        prop_assert!((g.norm() - f.norm()).abs() <= 1e-12 * f.norm());
        let back = apply_exp_g0(&-e, &g).unwrap();
        prop_assert!(max_diff(&back.radial, &f.radial) <= 1e-10 * f.norm());
    }

    #[test]
    fn aligned_scaling_matches_spectral_route(dim in 1usize..=4, steps in -40i64..40, center in -2.0..2.0f64) {
        let grid = small_grid(dim);
        let nu = (dim as f64 - 2.0) / 2.0;
        let radial = RadialSamples::from_fn(grid, |r| {
            let s = r.ln();
            c((-(s - center).powi(2)).exp(), 0.5 * (-(s + center).powi(2) / 0.7).exp()) * r.powf(-nu)
        });
        let f = FactoredField::abstract_slot(0, radial).unwrap();
        let t = steps as f64 * grid.ds() / 2.0;
        let spectral = apply_exp_g0(&G0Exponent::scaling(t), &f).unwrap();
        let direct = apply_scaling_direct(t, &f).unwrap();
        prop_assert!(max_diff(&spectral.radial, &direct.radial) <= 1e-10 * f.norm());
    }

    #[test]
    fn circle_projection_is_idempotent(m in 0usize..=20, coeffs in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 41)) {
        let n = 64;
        let signal: Vec<Complex64> = (0..n)
            .map(|i| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, &(a, b))| c(a, b) * Complex64::from_polar(1.0, (k as f64 - 20.0) * angle(n, i)))
                    .sum()
            })
            .collect();
        let once = project_circle(m, &signal).unwrap();
        let twice = project_circle(m, &once).unwrap();
        let err = once.iter().zip(&twice).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-10);
    }

    #[test]
    fn field_csv_round_trip(values in prop::collection::vec((-1e3..1e3f64, -1e3..1e3f64), 16)) {
        let mut text = String::from("# dim=4\n# grid=-2,2,8\nm,s_index,re,im\n");
        for (k, (re, im)) in values.iter().enumerate() {
            text.push_str(&format!("{},{},{re:e},{im:e}\n", 3 - k / 8 * 2, k % 8));
        }
        let file = parse_field(&text, None, None).unwrap();
        let again = parse_field(&file.to_csv(&[]), None, None).unwrap();
        prop_assert_eq!(file.ordered_values(), again.ordered_values());
        let parsed: Vec<(f64, f64)> = file.ordered_values().iter().map(|(_, _, v)| (v.re, v.im)).collect();
        prop_assert_eq!(parsed, values);
    }
}
