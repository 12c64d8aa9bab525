//! Exact checks of the commutation relations on power functions.
//!
//! The radial operators act on `r^lambda` in closed form (`theta r^lambda =
//! lambda r^lambda`), so commutators can be evaluated coefficient by
//! coefficient on finite sums `sum c_lambda r^lambda`.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Exponents closer than this are merged into one term.
const EXPONENT_MERGE: f64 = 1e-12;

/// A finite sum `sum c_lambda r^lambda` with complex exponents.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PowerSum {
    terms: Vec<(Complex64, Complex64)>,
}

impl PowerSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(lambda: Complex64) -> Self {
        let mut s = Self::zero();
        s.add_term(lambda, Complex64::new(1.0, 0.0));
        s
    }

    /// `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> &[(Complex64, Complex64)] {
        &self.terms
    }

    pub fn add_term(&mut self, lambda: Complex64, coeff: Complex64) {
        match self.terms.iter_mut().find(|(l, _)| (*l - lambda).norm() <= EXPONENT_MERGE) {
            Some((_, c)) => *c += coeff,
            None => self.terms.push((lambda, coeff)),
        }
    }

    pub fn scaled(&self, k: Complex64) -> Self {
        Self { terms: self.terms.iter().map(|&(l, c)| (l, c * k)).collect() }
    }

    pub fn plus(&self, other: &PowerSum) -> Self {
        let mut out = self.clone();
        for &(l, c) in &other.terms {
            out.add_term(l, c);
        }
        out
    }

    pub fn minus(&self, other: &PowerSum) -> Self {
        self.plus(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    /// Largest coefficient modulus.
    pub fn max_coeff(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    /// Evaluates the sum at `r > 0`.
    pub fn eval(&self, r: f64) -> Complex64 {
        let log_r = r.ln();
        self.terms.iter().map(|(l, c)| c * (l * log_r).exp()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LadderKind {
    H,
    EPlus,
    EMinus,
}

impl fmt::Display for LadderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LadderKind::H => "H",
            LadderKind::EPlus => "E+",
            LadderKind::EMinus => "E-",
        })
    }
}

/// Deformation parameter `a != 0`, or the degenerate limit `a = 0` after
/// rescaling by `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    Deformed(Complex64),
    Degenerate,
}

/// One generator in radial form, acting on functions of `r` attached to the
/// harmonic degree `degree` in dimension `dim`.
///
/// Deformed (`a != 0`):
/// `H = (2 theta + a + N - 2)/a`, `E+ = (i/a) r^a`,
/// `E- = (i/a) r^{-a} (theta - m)(theta + m + N - 2)`.
///
/// Degenerate: `2 theta + N - 2`, `i`, `i (theta - m)(theta + m + N - 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderOperatorSpec {
    pub kind: LadderKind,
    pub regime: Regime,
    pub degree: usize,
    pub dim: usize,
}

impl LadderOperatorSpec {
    pub fn new(kind: LadderKind, regime: Regime, degree: usize, dim: usize) -> Result<Self> {
        if let Regime::Deformed(a) = regime {
            if a == Complex64::new(0.0, 0.0) {
                return Err(Error::InvalidArgument("deformation parameter a must be nonzero".into()));
            }
        }
        Ok(Self { kind, regime, degree, dim })
    }

    pub fn deformed(kind: LadderKind, a: f64, degree: usize, dim: usize) -> Result<Self> {
        Self::new(kind, Regime::Deformed(Complex64::new(a, 0.0)), degree, dim)
    }

    pub fn degenerate(kind: LadderKind, degree: usize, dim: usize) -> Self {
        Self { kind, regime: Regime::Degenerate, degree, dim }
    }

    /// Image of `r^lambda` as `(new exponent, coefficient)`.
    pub fn on_monomial(&self, lambda: Complex64) -> (Complex64, Complex64) {
        let i = Complex64::i();
        let n = self.dim as f64;
        let m = self.degree as f64;
        let casimir = (lambda - m) * (lambda + m + n - 2.0);
        match (self.regime, self.kind) {
            (Regime::Deformed(a), LadderKind::H) => (lambda, (2.0 * lambda + a + n - 2.0) / a),
            (Regime::Deformed(a), LadderKind::EPlus) => (lambda + a, i / a),
            (Regime::Deformed(a), LadderKind::EMinus) => (lambda - a, i / a * casimir),
            (Regime::Degenerate, LadderKind::H) => (lambda, 2.0 * lambda + n - 2.0),
            (Regime::Degenerate, LadderKind::EPlus) => (lambda, i),
            (Regime::Degenerate, LadderKind::EMinus) => (lambda, i * casimir),
        }
    }

    pub fn with_degree(&self, degree: usize) -> Self {
        Self { degree, ..*self }
    }
}

/// Exact action of one generator on a power sum.
pub fn act(op: &LadderOperatorSpec, f: &PowerSum) -> PowerSum {
    let mut out = PowerSum::zero();
    for &(lambda, c) in f.terms() {
        let (mu, k) = op.on_monomial(lambda);
        out.add_term(mu, c * k);
    }
    out
}

/// A linear combination `sum c_k X_k` of generators.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OperatorSum {
    pub terms: Vec<(Complex64, LadderOperatorSpec)>,
}

impl OperatorSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scaled(&self, k: Complex64) -> Self {
        Self { terms: self.terms.iter().map(|&(c, op)| (c * k, op)).collect() }
    }

    pub fn apply(&self, f: &PowerSum) -> PowerSum {
        self.terms.iter().fold(PowerSum::zero(), |acc, (c, op)| acc.plus(&act(op, f).scaled(*c)))
    }

    /// Same combination with every generator moved to `degree`.
    pub fn with_degree(&self, degree: usize) -> Self {
        Self { terms: self.terms.iter().map(|&(c, op)| (c, op.with_degree(degree))).collect() }
    }
}

impl From<LadderOperatorSpec> for OperatorSum {
    fn from(op: LadderOperatorSpec) -> Self {
        Self { terms: vec![(Complex64::new(1.0, 0.0), op)] }
    }
}

/// `[X, Y] f = X(Y f) - Y(X f)`.
pub fn commutator(x: &OperatorSum, y: &OperatorSum, f: &PowerSum) -> PowerSum {
    x.apply(&y.apply(f)).minus(&y.apply(&x.apply(f)))
}

/// Max over `lambda` in `basis` of the largest coefficient of
/// `([X, Y] - expected) r^lambda`.
pub fn commutator_defect(x: &OperatorSum, y: &OperatorSum, expected: &OperatorSum, basis: &[Complex64]) -> f64 {
    basis
        .iter()
        .map(|&lambda| {
            let f = PowerSum::monomial(lambda);
            commutator(x, y, &f).minus(&expected.apply(&f)).max_coeff()
        })
        .fold(0.0, f64::max)
}

/// A function on `R^N \ {0}` of the form `sum_m p_m (x) f_m`, with `p_m` a
/// degree-`m` harmonic and `f_m` a power sum.
pub type DegreeSum = Vec<(usize, PowerSum)>;

/// Full-space action: each degree-`m` component is acted on by the radial
/// part of degree `m`. The `degree` fields of the operators are ignored.
pub fn act_full_space(op: &OperatorSum, field: &DegreeSum) -> DegreeSum {
    field.iter().map(|(m, f)| (*m, op.with_degree(*m).apply(f))).collect()
}

/// Full-space analogue of [`commutator_defect`], tested on the fields
/// `sum_{m in degrees} p_m (x) r^lambda`.
pub fn full_space_commutator_defect(
    x: &OperatorSum,
    y: &OperatorSum,
    expected: &OperatorSum,
    basis: &[Complex64],
    degrees: &[usize],
) -> f64 {
    let mut worst: f64 = 0.0;
    for &lambda in basis {
        let field: DegreeSum = degrees.iter().map(|&m| (m, PowerSum::monomial(lambda))).collect();
        let xy = act_full_space(x, &act_full_space(y, &field));
        let yx = act_full_space(y, &act_full_space(x, &field));
        let ex = act_full_space(expected, &field);
        for ((a, b), c) in xy.iter().zip(&yx).zip(&ex) {
            worst = worst.max(a.1.minus(&b.1).minus(&c.1).max_coeff());
        }
    }
    worst
}

/// `{-2, ..., 3} + i {-1, 0, 1}`: 18 exponents, including points on and
/// off the spectral lines `Re lambda = -(N-2)/2`.
pub fn standard_basis() -> Vec<Complex64> {
    let mut basis = Vec::with_capacity(18);
    for re in -2..=3 {
        for im in -1..=1 {
            basis.push(Complex64::new(re as f64, im as f64));
        }
    }
    basis
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// The three defining relations of an sl2-triple, as
/// `(name, X, Y, expected [X, Y])`.
pub fn sl2_relations(a: f64, degree: usize, dim: usize) -> Result<Vec<(&'static str, OperatorSum, OperatorSum, OperatorSum)>> {
    let h = LadderOperatorSpec::deformed(LadderKind::H, a, degree, dim)?;
    let ep = LadderOperatorSpec::deformed(LadderKind::EPlus, a, degree, dim)?;
    let em = LadderOperatorSpec::deformed(LadderKind::EMinus, a, degree, dim)?;
    Ok(vec![
        ("[H, E+] = 2 E+", h.into(), ep.into(), OperatorSum::from(ep).scaled(2.0 * one())),
        ("[H, E-] = -2 E-", h.into(), em.into(), OperatorSum::from(em).scaled(-2.0 * one())),
        ("[E+, E-] = H", ep.into(), em.into(), h.into()),
    ])
}

/// The three commutators of the degenerate generators, all expected to vanish.
pub fn degenerate_relations(degree: usize, dim: usize) -> Vec<(&'static str, OperatorSum, OperatorSum, OperatorSum)> {
    let h = LadderOperatorSpec::degenerate(LadderKind::H, degree, dim);
    let ep = LadderOperatorSpec::degenerate(LadderKind::EPlus, degree, dim);
    let em = LadderOperatorSpec::degenerate(LadderKind::EMinus, degree, dim);
    vec![
        ("[H0, E+0] = 0", h.into(), ep.into(), OperatorSum::zero()),
        ("[H0, E-0] = 0", h.into(), em.into(), OperatorSum::zero()),
        ("[E+0, E-0] = 0", ep.into(), em.into(), OperatorSum::zero()),
    ]
}

/// A pair of generators whose rescaled commutator is traced as `a -> 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GeneratorPair {
    HEPlus,
    HEMinus,
    EPlusEMinus,
}

impl GeneratorPair {
    pub const ALL: [GeneratorPair; 3] = [GeneratorPair::HEPlus, GeneratorPair::HEMinus, GeneratorPair::EPlusEMinus];

    fn kinds(self) -> (LadderKind, LadderKind) {
        match self {
            GeneratorPair::HEPlus => (LadderKind::H, LadderKind::EPlus),
            GeneratorPair::HEMinus => (LadderKind::H, LadderKind::EMinus),
            GeneratorPair::EPlusEMinus => (LadderKind::EPlus, LadderKind::EMinus),
        }
    }
}

impl fmt::Display for GeneratorPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y) = self.kinds();
        write!(f, "[a{x}, a{y}]")
    }
}

/// Defect `max_lambda |[a X_a, a Y_a] r^lambda|` for each `a` in the sequence.
/// It is `O(a)`: the commutators equal `2a (a E+)`, `-2a (a E-)`, `a (a H)`.
pub fn degeneration_trace(
    a_sequence: &[f64],
    pair: GeneratorPair,
    degree: usize,
    dim: usize,
    basis: &[Complex64],
) -> Result<Vec<f64>> {
    let (kx, ky) = pair.kinds();
    a_sequence
        .iter()
        .map(|&a| {
            if !(a > 0.0) {
                return Err(Error::InvalidArgument(format!("degeneration parameters must be positive, got {a}")));
            }
            let scale = Complex64::new(a, 0.0);
            let x = OperatorSum::from(LadderOperatorSpec::deformed(kx, a, degree, dim)?).scaled(scale);
            let y = OperatorSum::from(LadderOperatorSpec::deformed(ky, a, degree, dim)?).scaled(scale);
            Ok(commutator_defect(&x, &y, &OperatorSum::zero(), basis))
        })
        .collect()
}

/// Pointwise first-order comparison of `a X_a` with its degenerate limit:
/// `max |(a X_a r^lambda)(r) - (X_0 r^lambda)(r) - a D(r)|`, where `D` is
/// the `a`-derivative at zero (`r^lambda`, `i log r r^lambda`, or
/// `-log r X_0 r^lambda` for `H`, `E+`, `E-`). The remainder is `O(a^2)`.
pub fn contraction_defect(
    kind: LadderKind,
    a: f64,
    degree: usize,
    dim: usize,
    basis: &[Complex64],
    radii: &[f64],
) -> Result<f64> {
    let deformed = LadderOperatorSpec::deformed(kind, a, degree, dim)?;
    let limit = LadderOperatorSpec::degenerate(kind, degree, dim);
    let mut worst: f64 = 0.0;
    for &lambda in basis {
        let f = PowerSum::monomial(lambda);
        let rescaled = act(&deformed, &f).scaled(Complex64::new(a, 0.0));
        let degenerate = act(&limit, &f);
        for &r in radii {
            let log_r = r.ln();
            let base = (lambda * log_r).exp();
            let derivative = match kind {
                LadderKind::H => base,
                LadderKind::EPlus => Complex64::i() * log_r * base,
                LadderKind::EMinus => -log_r * degenerate.eval(r),
            };
            let residual = rescaled.eval(r) - degenerate.eval(r) - a * derivative;
            worst = worst.max(residual.norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn action_examples() {
        let h = LadderOperatorSpec::deformed(LadderKind::H, 2.0, 0, 3).unwrap();
        let out = act(&h, &PowerSum::monomial(c(0.7, 0.0)));
        assert_eq!(out.terms(), &[(c(0.7, 0.0), c(0.7 + 1.5, 0.0))]);

        let ep = LadderOperatorSpec::deformed(LadderKind::EPlus, 1.0, 0, 3).unwrap();
        let out = act(&ep, &PowerSum::monomial(c(0.0, 0.0)));
        assert_eq!(out.terms(), &[(c(1.0, 0.0), c(0.0, 1.0))]);

        let em0 = LadderOperatorSpec::degenerate(LadderKind::EMinus, 1, 2);
        let out = act(&em0, &PowerSum::monomial(c(3.0, 0.0)));
        assert_eq!(out.terms(), &[(c(3.0, 0.0), c(0.0, 8.0))]);

        assert!(LadderOperatorSpec::deformed(LadderKind::H, 0.0, 0, 2).is_err());
    }

    #[test]
    fn power_sum_merging() {
        let mut s = PowerSum::monomial(c(1.0, 0.0));
        s.add_term(c(1.0, 0.0), c(2.0, 0.0));
        s.add_term(c(2.0, 0.0), c(1.0, 0.0));
        assert_eq!(s.terms().len(), 2);
        assert!((s.eval(2.0) - c(3.0 * 2.0 + 4.0, 0.0)).norm() < 1e-14);
        assert_eq!(s.minus(&s).max_coeff(), 0.0);
    }

    #[test]
    fn sl2_relations_hold() {
        let basis = standard_basis();
        assert_eq!(basis.len(), 18);
        for a in [0.5, 1.0, 2.0, 3.0] {
            for dim in 1..=4 {
                for m in 0..=3 {
                    for (name, x, y, e) in sl2_relations(a, m, dim).unwrap() {
                        let d = commutator_defect(&x, &y, &e, &basis);
                        assert!(d < 1e-12, "{name} a={a} N={dim} m={m}: {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn wrong_relation_is_detected() {
        let basis = standard_basis();
        let rels = sl2_relations(1.0, 1, 3).unwrap();
        let (_, x, y, e) = &rels[0];
        assert!(commutator_defect(x, y, &e.scaled(c(0.5, 0.0)), &basis) > 0.1);
    }

    #[test]
    fn degenerate_generators_commute() {
        let basis = standard_basis();
        for dim in 1..=4 {
            for m in 0..=3 {
                for (name, x, y, e) in degenerate_relations(m, dim) {
                    assert!(commutator_defect(&x, &y, &e, &basis) < 1e-12, "{name}");
                }
            }
        }
    }

    #[test]
    fn full_space_relations() {
        let basis = standard_basis();
        let degrees = [0, 1, 2, 3];
        for (_, x, y, e) in sl2_relations(0.5, 0, 3).unwrap() {
            assert!(full_space_commutator_defect(&x, &y, &e, &basis, &degrees) < 1e-12);
        }
    }

    #[test]
    fn degeneration_is_linear() {
        let basis = standard_basis();
        for pair in GeneratorPair::ALL {
            let trace = degeneration_trace(&[1e-1, 1e-2, 1e-3], pair, 1, 3, &basis).unwrap();
            for w in trace.windows(2) {
                let ratio = w[0] / w[1];
                assert!((9.5..=10.5).contains(&ratio), "{pair}: {ratio}");
            }
        }
        // [aH, aE+] = 2a (aE+) = 2a i r^{lambda + a}: defect exactly 2a.
        let trace = degeneration_trace(&[1.0, 0.1, 0.01], GeneratorPair::HEPlus, 0, 2, &basis).unwrap();
        for (d, a) in trace.iter().zip([1.0, 0.1, 0.01]) {
            assert!((d - 2.0 * a).abs() < 1e-14);
        }
        assert!(degeneration_trace(&[0.0], GeneratorPair::HEPlus, 0, 2, &basis).is_err());
    }

    #[test]
    fn rescaled_generators_approach_degenerate_ones() {
        let basis = standard_basis();
        for kind in [LadderKind::H, LadderKind::EPlus, LadderKind::EMinus] {
            for dim in 1..=4 {
                let d = contraction_defect(kind, 1e-6, 2, dim, &basis, &[0.5, 1.0, 2.0]).unwrap();
                assert!(d < 1e-10, "{kind} N={dim}: {d}");
            }
        }
    }
}
