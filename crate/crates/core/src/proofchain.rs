//! The elimination chain behind the irreducibility proof of the 3×3
//! specialization.
//!
//! A common eigenvector `v = e1 + α1·e2 + α2·e3` of `φ(A12)` and `φ(A23)`
//! forces three cubics in `α1`. Two quadratic combinations of them
//! eliminate the cubic term, Cramer's rule on the pair gives `α1`, and back
//! substitution gives `α2` and the eigenvalue `n1`. Substituting all three
//! into the remaining relation yields a polynomial in `C` whose imaginary
//! and real parts have no common root in `(-1/2, 1/2) \ {0}`.
//!
//! Every closed form is evaluated next to an independent route
//! built from the entry symbols; the polynomial part is exact.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::Complex;
use crate::poly::{
    isolate_all_real_roots, isolate_real_roots, IntPolynomial, PolyError, RootInterval,
};
use crate::rep::{entry_symbols, ARSpecialization, BetaChoice, EntrySymbols, RepError};

/// Relative agreement required between a closed form and its route.
pub const ROUTE_TOL: f64 = 1e-9;
/// Smallest admissible magnitude for a denominator factor.
pub const DENOMINATOR_TOL: f64 = 1e-12;
/// Smallest admissible magnitude for `I`, `Jent`, `P`, `Q`.
pub const NONVANISHING_TOL: f64 = 1e-6;
/// `|eigen_relation_residual|` must exceed this at every sampled point.
pub const EIGEN_RELATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProofError {
    #[error("{quantity}: denominator factor {factor} has magnitude {magnitude:e}")]
    Singularity {
        quantity: &'static str,
        factor: &'static str,
        magnitude: f64,
    },
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// `|a - b| / max(|a|, |b|)`, and 0 when both vanish.
pub fn relative_error(a: Complex, b: Complex) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

fn check_factors(
    quantity: &'static str,
    factors: &[(&'static str, Complex)],
) -> Result<Complex, ProofError> {
    let mut product = re(1.0);
    for &(factor, value) in factors {
        if value.norm().is_nan() || value.norm() <= DENOMINATOR_TOL {
            return Err(ProofError::Singularity {
                quantity,
                factor,
                magnitude: value.norm(),
            });
        }
        product *= value;
    }
    if product.norm().is_nan() || product.norm() <= DENOMINATOR_TOL {
        return Err(ProofError::Singularity {
            quantity,
            factor: "denominator",
            magnitude: product.norm(),
        });
    }
    Ok(product)
}

/// Cubic coefficients in `α1`, highest degree first.
pub type Cubic = [Complex; 4];

fn horner(coeffs: &[Complex], x: Complex) -> Complex {
    coeffs.iter().fold(re(0.0), |acc, &k| acc * x + k)
}

/// The three cubics satisfied by `α1` at a common eigenvector.
pub fn chain_cubics(spec: &ARSpecialization) -> (Cubic, Cubic, Cubic) {
    let EntrySymbols {
        i,
        jent: j,
        p,
        m,
        q,
        r,
    } = entry_symbols(spec);
    let be = spec.beta();
    let be2 = be * be;
    let k1 = [
        (p * p + j * j) * q,
        (-be2 * p * p + 2.0 * q * q - be2 * j * j) * p,
        (-2.0 * be2 * p * p + be2 * j * j + q * q) * q,
        -be * p * (be * q * q + j * j),
    ];
    let k2 = [
        -be2 * p * q,
        (m - i) * (m - r),
        j * (r - 2.0 * m + i),
        j * j,
    ];
    let k3 = [
        be2 * j * j,
        be * j * (r - 2.0 * i + m),
        (i - m) * (i - r),
        -be * p * q,
    ];
    (k1, k2, k3)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicResiduals {
    #[serde(serialize_with = "crate::linalg::serialize_complex")]
    pub first: Complex,
    #[serde(serialize_with = "crate::linalg::serialize_complex")]
    pub second: Complex,
    #[serde(serialize_with = "crate::linalg::serialize_complex")]
    pub third: Complex,
}

/// Values of the three cubics at `alpha1`.
pub fn cubic_residuals(spec: &ARSpecialization, alpha1: Complex) -> CubicResiduals {
    let (k1, k2, k3) = chain_cubics(spec);
    CubicResiduals {
        first: horner(&k1, alpha1),
        second: horner(&k2, alpha1),
        third: horner(&k3, alpha1),
    }
}

/// Coefficients of the two quadratics `a1·x² + b1·x + c1` and
/// `a2·x² + b2·x + c2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quadratics {
    #[serde(serialize_with = "crate::linalg::serialize_complex")]
    pub a1: Complex,
    #[serde(serialize_with = "crate::linalg::serialize_complex")]
    pub b1: Complex,
    #[serde(serialize_with = "crate::linalg::serialize_complex")]
    pub c1: Complex,
    #[serde(serialize_with = "crate::linalg::serialize_complex")]
    pub a2: Complex,
    #[serde(serialize_with = "crate::linalg::serialize_complex")]
    pub b2: Complex,
    #[serde(serialize_with = "crate::linalg::serialize_complex")]
    pub c2: Complex,
}

impl Quadratics {
    pub const NAMES: [&'static str; 6] = ["a1", "b1", "c1", "a2", "b2", "c2"];

    pub fn values(&self) -> [Complex; 6] {
        [self.a1, self.b1, self.c1, self.a2, self.b2, self.c2]
    }

    /// Cramer elimination of `x` from the two quadratics.
    pub fn cramer(&self) -> Complex {
        (self.a2 * self.c1 - self.a1 * self.c2) / (self.a1 * self.b2 - self.a2 * self.b1)
    }

    pub fn first_at(&self, x: Complex) -> Complex {
        horner(&[self.a1, self.b1, self.c1], x)
    }

    pub fn second_at(&self, x: Complex) -> Complex {
        horner(&[self.a2, self.b2, self.c2], x)
    }
}

/// The quadratic coefficients as closed forms in `C` and `β`.
pub fn closed_form_quadratics(spec: &ARSpecialization) -> Quadratics {
    let c = spec.c();
    let b = spec.b();
    let be = spec.beta();
    let one = re(1.0);
    let c2 = c * c;
    let c3 = c2 * c;
    let c4 = c2 * c2;
    let c6 = c4 * c2;
    let c7 = c6 * c;
    let c8 = c4 * c4;
    let f = 4.0 * c2 - 1.0;
    let bm1 = be - one;
    Quadratics {
        a1: 64.0 * be * c6 * f.powi(3) * bm1.powi(4) * (4.0 * be * c2 + be + 2.0),
        b1: 128.0
            * c6
            * f.powi(2)
            * b
            * bm1.powi(4)
            * (8.0 * be * c2 - be + 4.0 * c2 - 16.0 * c4 - 1.0),
        c1: -16.0
            * c4
            * f.powi(2)
            * bm1.powi(4)
            * (be - 12.0 * be * c2 + 32.0 * be * c4 - 8.0 * c2 + 32.0 * c4 - 64.0 * c6),
        a2: 128.0
            * be
            * c7
            * f.powi(3)
            * bm1.powi(5)
            * (be - 8.0 * be * c2 + 16.0 * be * c4 + 16.0 * c4),
        b2: 256.0
            * c7
            * b
            * (be * be + 4.0 * c2)
            * bm1.powi(5)
            * (f.powi(2) * (16.0 * be * c4 + 4.0 * c2 + be - 1.0)),
        c2: 8.0
            * be
            * c3
            * bm1.powi(3)
            * (f.powi(2)
                * (768.0 * be * c8 - 192.0 * be * c6 - 16.0 * be * c4 - 8.0 * c2 + be + 1.0)),
    }
}

/// The quadratic coefficients obtained by combining the cubics:
/// `J²·k2 + PQ·k3` and `Q(P² + J²)·k3 - β²J²·k1` for the cubics
/// `(k1, k2, k3)` of [`chain_cubics`]. Both combinations
/// cancel the cubic term; the returned cancellation residuals are the
/// magnitudes of what is left of it.
pub fn derived_quadratics(spec: &ARSpecialization) -> (Quadratics, [f64; 2]) {
    let EntrySymbols { jent: j, p, q, .. } = entry_symbols(spec);
    let be = spec.beta();
    let (k1, k2, k3) = chain_cubics(spec);
    let first: Vec<Complex> = k2
        .iter()
        .zip(&k3)
        .map(|(x, y)| j * j * x + p * q * y)
        .collect();
    let w = q * (p * p + j * j);
    let second: Vec<Complex> = k3
        .iter()
        .zip(&k1)
        .map(|(x, y)| w * x - be * be * j * j * y)
        .collect();
    (
        Quadratics {
            a1: first[1],
            b1: first[2],
            c1: first[3],
            a2: second[1],
            b2: second[2],
            c2: second[3],
        },
        [first[0].norm(), second[0].norm()],
    )
}

/// A closed form evaluated next to its independent route.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RouteCheck {
    pub formula: &'static str,
    #[serde(serialize_with = "crate::linalg::serialize_complex")]
    pub closed_form: Complex,
    #[serde(serialize_with = "crate::linalg::serialize_complex")]
    pub derived: Complex,
    pub relative_error: f64,
    pub passed: bool,
}

impl RouteCheck {
    fn new(formula: &'static str, closed_form: Complex, derived: Complex) -> Self {
        Self::with_tol(formula, closed_form, derived, ROUTE_TOL)
    }

    fn with_tol(formula: &'static str, closed_form: Complex, derived: Complex, tol: f64) -> Self {
        let relative_error = relative_error(closed_form, derived);
        Self {
            formula,
            closed_form,
            derived,
            relative_error,
            passed: relative_error <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraticComparison {
    pub closed_form: Quadratics,
    pub derived: Quadratics,
    pub cubic_cancellation: [f64; 2],
    pub checks: Vec<RouteCheck>,
}

impl QuadraticComparison {
    /// Names of the closed forms that deviate from their route.
    pub fn discrepancies(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.formula)
            .collect()
    }
}

pub fn quadratic_coefficients(spec: &ARSpecialization) -> QuadraticComparison {
    let closed_form = closed_form_quadratics(spec);
    let (derived, cubic_cancellation) = derived_quadratics(spec);
    let checks = Quadratics::NAMES
        .iter()
        .zip(closed_form.values().iter().zip(derived.values()))
        .map(|(&name, (&p, d))| RouteCheck::new(name, p, d))
        .collect();
    QuadraticComparison {
        closed_form,
        derived,
        cubic_cancellation,
        checks,
    }
}

/// `K = -β + 12βC² - 32βC⁴ + 8C² - 32C⁴ + 64C⁶`.
pub fn k_value(spec: &ARSpecialization) -> Complex {
    let c2 = spec.c() * spec.c();
    let c4 = c2 * c2;
    let be = spec.beta();
    -be + 12.0 * be * c2 - 32.0 * be * c4 + 8.0 * c2 - 32.0 * c4 + 64.0 * c2 * c4
}

fn shared_factor(spec: &ARSpecialization) -> Complex {
    -4.0 * spec.c() * spec.c() + 3.0 * spec.beta() + 2.0
}

/// `α1 = K / (8C²·√(1/4 - C²)·(-4C² + 3β + 2))`.
pub fn alpha1(spec: &ARSpecialization) -> Result<Complex, ProofError> {
    let c = spec.c();
    let den = check_factors(
        "alpha1",
        &[
            ("8C^2", re(8.0 * c * c)),
            ("sqrt(1/4 - C^2)", re(spec.b())),
            ("-4C^2 + 3beta + 2", shared_factor(spec)),
        ],
    )?;
    Ok(k_value(spec) / den)
}

/// `α1` by Cramer elimination from the derived quadratics.
pub fn alpha1_route(spec: &ARSpecialization) -> Result<Complex, ProofError> {
    let (q, _) = derived_quadratics(spec);
    // The coefficients carry high powers of C, so the determinant is
    // judged against the size of its two products rather than absolutely.
    let (x, y) = (q.a1 * q.b2, q.a2 * q.b1);
    let scale = x.norm() + y.norm();
    let gap = (x - y).norm();
    if gap.is_nan() || gap <= DENOMINATOR_TOL * scale {
        return Err(ProofError::Singularity {
            quantity: "alpha1",
            factor: "a1*b2 - a2*b1",
            magnitude: (x - y).norm(),
        });
    }
    Ok(q.cramer())
}

/// Closed form of `α2`.
pub fn alpha2(spec: &ARSpecialization) -> Result<Complex, ProofError> {
    let c = spec.c();
    let be = spec.beta();
    let c2 = c * c;
    let c4 = c2 * c2;
    let c6 = c4 * c2;
    let s = shared_factor(spec);
    let den = check_factors(
        "alpha2",
        &[
            ("8C^3", re(8.0 * c2 * c)),
            ("4C^2 - 1", re(4.0 * c2 - 1.0)),
            ("beta^2 + 4C^2", be * be + 4.0 * c2),
            ("(-4C^2 + 3beta + 2)^2", s * s),
        ],
    )?;
    let num = -k_value(spec)
        * (be + 8.0 * be * c2 - 48.0 * be * c4 + 64.0 * be * c6 - 4.0 * c2 - 16.0 * c4
            + 64.0 * c6
            + 1.0);
    Ok(num / den)
}

/// `α2 = (β·Jent·α1² + (M - I)·α1) / Q` with the closed-form `α1`.
pub fn alpha2_route(spec: &ARSpecialization) -> Result<Complex, ProofError> {
    let s = entry_symbols(spec);
    let a1 = alpha1(spec)?;
    check_factors("alpha2", &[("Q", s.q)])?;
    Ok((spec.beta() * s.jent * a1 * a1 + (s.m - s.i) * a1) / s.q)
}

/// Closed form of the eigenvalue `n1`.
pub fn n1_value(spec: &ARSpecialization) -> Result<Complex, ProofError> {
    let c = spec.c();
    let be = spec.beta();
    let c2 = c * c;
    let c4 = c2 * c2;
    let s = shared_factor(spec);
    let den = check_factors(
        "n1",
        &[
            ("4C^2", re(4.0 * c2)),
            ("beta^2 + 4C^2", be * be + 4.0 * c2),
            ("(-4C^2 + 3beta + 2)^2", s * s),
        ],
    )?;
    let num = -k_value(spec) * (be - 1.0) * (be + 32.0 * be * c4 + 16.0 * c4 - 64.0 * c4 * c2);
    Ok(num / den)
}

/// `n1 = α1·Jent·(β + 1) + α2·β·P` with the closed-form `α1`, `α2`.
pub fn n1_route(spec: &ARSpecialization) -> Result<Complex, ProofError> {
    let s = entry_symbols(spec);
    let be = spec.beta();
    Ok(alpha1(spec)? * s.jent * (be + 1.0) + alpha2(spec)? * be * s.p)
}

/// `β·Jent - α2·β·Q - n1·α1` with the closed forms. A common eigenvector
/// of the assumed shape needs this to vanish.
pub fn eigen_relation_residual(spec: &ARSpecialization) -> Result<Complex, ProofError> {
    let s = entry_symbols(spec);
    let be = spec.beta();
    let a1 = alpha1(spec)?;
    Ok(be * s.jent - alpha2(spec)? * be * s.q - n1_value(spec)? * a1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainValues {
    #[serde(serialize_with = "crate::linalg::serialize_complex")]
    pub alpha1: Complex,
    #[serde(serialize_with = "crate::linalg::serialize_complex")]
    pub alpha2: Complex,
    #[serde(serialize_with = "crate::linalg::serialize_complex")]
    pub n1: Complex,
    #[serde(rename = "K", serialize_with = "crate::linalg::serialize_complex")]
    pub k: Complex,
    pub coefficients: Quadratics,
}

/// Closed-form chain values.
pub fn chain_values(spec: &ARSpecialization) -> Result<ChainValues, ProofError> {
    Ok(ChainValues {
        alpha1: alpha1(spec)?,
        alpha2: alpha2(spec)?,
        n1: n1_value(spec)?,
        k: k_value(spec),
        coefficients: closed_form_quadratics(spec),
    })
}

/// Every closed form next to its route, in chain order:
/// `a1, b1, c1, a2, b2, c2, alpha1, alpha2, n1`.
pub fn route_checks(spec: &ARSpecialization) -> Result<Vec<RouteCheck>, ProofError> {
    route_checks_with(spec, ROUTE_TOL)
}

/// [`route_checks`] with a custom relative tolerance.
pub fn route_checks_with(spec: &ARSpecialization, tol: f64) -> Result<Vec<RouteCheck>, ProofError> {
    let closed_form = closed_form_quadratics(spec);
    let (derived, _) = derived_quadratics(spec);
    let mut checks: Vec<RouteCheck> = Quadratics::NAMES
        .iter()
        .zip(closed_form.values().iter().zip(derived.values()))
        .map(|(&name, (&p, d))| RouteCheck::with_tol(name, p, d, tol))
        .collect();
    checks.push(RouteCheck::with_tol(
        "alpha1",
        alpha1(spec)?,
        alpha1_route(spec)?,
        tol,
    ));
    checks.push(RouteCheck::with_tol(
        "alpha2",
        alpha2(spec)?,
        alpha2_route(spec)?,
        tol,
    ));
    checks.push(RouteCheck::with_tol(
        "n1",
        n1_value(spec)?,
        n1_route(spec)?,
        tol,
    ));
    Ok(checks)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstDiscrepancy {
    pub formula: &'static str,
    pub c: f64,
    pub beta: BetaChoice,
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RouteAgreementReport {
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Largest relative error per formula over all samples and both roots.
    pub max_relative_error: BTreeMap<String, f64>,
    /// Number of failing evaluations per formula.
    pub failures: BTreeMap<String, usize>,
    pub first_discrepancy: Option<FirstDiscrepancy>,
    pub min_abs_eigen_relation_residual: Option<f64>,
    pub eigen_relation_nonvanishing: bool,
    pub passed: bool,
}

/// Seed-deterministic sample of `c` in `(-0.49, -0.01] ∪ [0.01, 0.49)`.
pub fn sample_c_values(samples: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let mag: f64 = rng.gen_range(0.01..0.49);
            if rng.gen_bool(0.5) {
                mag
            } else {
                -mag
            }
        })
        .collect()
}

/// Route agreement and nonvanishing of `eigen_relation_residual` on `samples` seeded
/// values of `c`, each with both roots of unity.
pub fn route_agreement(samples: usize, seed: u64) -> Result<RouteAgreementReport, ProofError> {
    route_agreement_with(samples, seed, ROUTE_TOL)
}

/// [`route_agreement`] with a custom relative tolerance.
pub fn route_agreement_with(
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<RouteAgreementReport, ProofError> {
    let mut max_rel = BTreeMap::new();
    let mut failures = BTreeMap::new();
    let mut first = None;
    let mut min_r8: Option<f64> = None;
    for c in sample_c_values(samples, seed) {
        for beta in BetaChoice::BOTH {
            let spec = ARSpecialization::new(c, beta)?;
            for check in route_checks_with(&spec, tol)? {
                let e = max_rel.entry(check.formula.to_string()).or_insert(0.0f64);
                *e = e.max(check.relative_error);
                let f = failures.entry(check.formula.to_string()).or_insert(0usize);
                if !check.passed {
                    *f += 1;
                    if first.is_none() {
                        first = Some(FirstDiscrepancy {
                            formula: check.formula,
                            c,
                            beta,
                            relative_error: check.relative_error,
                        });
                    }
                }
            }
            let r = eigen_relation_residual(&spec)?.norm();
            min_r8 = Some(min_r8.map_or(r, |m| m.min(r)));
        }
    }
    let nonvanishing = min_r8.is_none_or(|m| m > EIGEN_RELATION_TOL);
    Ok(RouteAgreementReport {
        samples,
        seed,
        tolerance: tol,
        max_relative_error: max_rel,
        failures,
        passed: first.is_none() && nonvanishing,
        first_discrepancy: first,
        min_abs_eigen_relation_residual: min_r8,
        eigen_relation_nonvanishing: nonvanishing,
    })
}

/// The contradiction polynomial split as `P_const + β·P_beta`, both even
/// of degree 16.
pub fn contradiction_components() -> (IntPolynomial, IntPolynomial) {
    let p_const = IntPolynomial::from_terms(&[
        (0, -1),
        (4, 304),
        (6, -2432),
        (8, 5632),
        (10, 41984),
        (12, -208896),
        (14, 98304),
        (16, 196608),
    ]);
    let p_beta = IntPolynomial::from_terms(&[
        (2, -28),
        (4, 256),
        (6, -128),
        (8, -12032),
        (10, 75776),
        (12, -94208),
        (14, -229376),
        (16, 196608),
    ]);
    (p_const, p_beta)
}

/// `P_const(c) + β·P_beta(c)`.
pub fn contradiction_value(spec: &ARSpecialization) -> Complex {
    let (pc, pb) = contradiction_components();
    re(pc.evaluate_f64(spec.c())) + spec.beta() * pb.evaluate_f64(spec.c())
}

/// The degree-12 factor of the imaginary-part equation.
pub fn imaginary_part_factor() -> IntPolynomial {
    IntPolynomial::from_terms(&[
        (0, 7),
        (2, -36),
        (4, -112),
        (6, 2560),
        (8, -8704),
        (10, -11264),
        (12, 12288),
    ])
}

/// `4C²(4C² - 1)`.
pub fn imaginary_part_prefactor() -> IntPolynomial {
    IntPolynomial::from_terms(&[(2, -4), (4, 16)])
}

/// `4C²(4C² - 1)·(degree-12 factor)`, expanded.
pub fn imaginary_part_poly() -> IntPolynomial {
    imaginary_part_prefactor().mul(&imaginary_part_factor())
}

/// The real-part equation.
pub fn real_part_poly() -> IntPolynomial {
    IntPolynomial::from_terms(&[
        (0, -1),
        (2, 14),
        (4, 176),
        (6, -2368),
        (8, 11648),
        (10, 4096),
        (12, -161792),
        (14, 212992),
        (16, 98304),
    ])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Zero exactly when the identity holds.
    pub difference: IntPolynomial,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitIdentities {
    /// `P_beta = 4C²(4C² - 1)·(degree-12 factor)`, including the exact
    /// division reproducing the factor.
    pub imaginary_part: IdentityCheck,
    /// `2·P_const - P_beta = 2·(real-part equation)`.
    pub real_part: IdentityCheck,
}

impl SplitIdentities {
    pub fn all_pass(&self) -> bool {
        self.imaginary_part.passed && self.real_part.passed
    }

    pub fn as_map(&self) -> BTreeMap<String, bool> {
        [&self.imaginary_part, &self.real_part]
            .iter()
            .map(|c| (c.name.to_string(), c.passed))
            .collect()
    }
}

/// With `β = -1/2 + (√3/2)i`, `Im = (√3/2)·P_beta` and
/// `Re = P_const - P_beta/2`; both checks are exact integer identities.
pub fn split_identities_for(p_const: &IntPolynomial, p_beta: &IntPolynomial) -> SplitIdentities {
    let difference = p_beta.sub(&imaginary_part_poly());
    let divides = match p_beta.divide_exact(&imaginary_part_prefactor()) {
        Ok(q) => q == imaginary_part_factor(),
        Err(_) => false,
    };
    let imaginary_part = IdentityCheck {
        name: "imaginary_part",
        passed: difference.is_zero() && divides,
        difference,
    };
    let two = BigInt::from(2);
    let combo = IntPolynomial::linear_combination(&two, p_const, &BigInt::from(-1), p_beta);
    let difference = combo.sub(&real_part_poly().scale(&two));
    let real_part = IdentityCheck {
        name: "real_part",
        passed: difference.is_zero(),
        difference,
    };
    SplitIdentities {
        imaginary_part,
        real_part,
    }
}

pub fn split_identities() -> SplitIdentities {
    let (pc, pb) = contradiction_components();
    split_identities_for(&pc, &pb)
}

/// The two real equations obtained from the imaginary and real parts of
/// the contradiction polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Equation {
    #[serde(rename = "imaginary")]
    ImaginaryPart,
    #[serde(rename = "real")]
    RealPart,
}

impl Equation {
    pub fn poly(self) -> IntPolynomial {
        match self {
            Equation::ImaginaryPart => imaginary_part_poly(),
            Equation::RealPart => real_part_poly(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Equation::ImaginaryPart => "imaginary",
            Equation::RealPart => "real",
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown equation {0:?} (expected imaginary/29 or real/30)")]
pub struct UnknownEquation(pub String);

impl std::str::FromStr for Equation {
    type Err = UnknownEquation;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "imaginary" | "im" | "29" => Ok(Equation::ImaginaryPart),
            "real" | "re" | "30" => Ok(Equation::RealPart),
            other => Err(UnknownEquation(other.to_string())),
        }
    }
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// Real roots in `(-1/2, 1/2)` other than `0`, refined to `precision`.
pub fn accepted_roots_of(
    p: &IntPolynomial,
    precision: f64,
) -> Result<Vec<RootInterval>, ProofError> {
    let h = half();
    let roots = isolate_real_roots(p, &-h.clone(), &h, precision)?;
    Ok(roots
        .into_iter()
        .filter(|r| match &r.exact {
            Some(x) => !x.is_zero() && x.abs() != h,
            None => true,
        })
        .collect())
}

pub fn accepted_roots(which: Equation, precision: f64) -> Result<Vec<RootInterval>, ProofError> {
    accepted_roots_of(&which.poly(), precision)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RejectedRoot {
    pub root: RootInterval,
    pub reason: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootInventory {
    pub equation: Equation,
    pub precision: f64,
    pub degree: usize,
    pub distinct_real_roots: usize,
    pub accepted: Vec<RootInterval>,
    pub rejected: Vec<RejectedRoot>,
}

/// All distinct real roots, split into accepted and rejected.
pub fn root_inventory(which: Equation, precision: f64) -> Result<RootInventory, ProofError> {
    let p = which.poly();
    let accepted = accepted_roots_of(&p, precision)?;
    let h = half();
    let overlaps = |a: &RootInterval, b: &RootInterval| a.lo < b.hi && b.lo < a.hi;
    let all = isolate_all_real_roots(&p, precision)?;
    let distinct_real_roots = all.len();
    let rejected = all
        .into_iter()
        .filter(|r| !accepted.iter().any(|a| overlaps(a, r)))
        .map(|root| {
            let reason = match &root.exact {
                Some(x) if x.is_zero() => "zero",
                Some(x) if x.abs() == h => "boundary",
                _ => "outside (-1/2, 1/2)",
            };
            RejectedRoot { root, reason }
        })
        .collect();
    Ok(RootInventory {
        equation: which,
        precision,
        degree: p.degree().unwrap_or(0),
        distinct_real_roots,
        accepted,
        rejected,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofVerdict {
    ContradictionEstablished,
    Failed,
}

impl ProofVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            ProofVerdict::ContradictionEstablished => "contradiction_established",
            ProofVerdict::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofChainReport {
    pub precision: f64,
    pub imaginary_accepted: Vec<RootInterval>,
    pub real_accepted: Vec<RootInterval>,
    pub identity_checks: BTreeMap<String, bool>,
    pub min_gap: f64,
    /// `max |p(r)|` over the refined accepted roots, per equation.
    pub residuals: BTreeMap<String, f64>,
    pub verdict: ProofVerdict,
}

fn is_symmetric_pair(roots: &[RootInterval], precision: f64) -> bool {
    roots.len() == 2 && (roots[0].refined + roots[1].refined).abs() <= 2.0 * precision
}

/// Smallest distance between two accepted root sets, using the isolating
/// intervals: 0 when any pair of intervals overlaps.
fn min_gap(a: &[RootInterval], b: &[RootInterval]) -> f64 {
    let mut gap = f64::INFINITY;
    for x in a {
        for y in b {
            let d = if x.hi < y.lo {
                &y.lo - &x.hi
            } else if y.hi < x.lo {
                &x.lo - &y.hi
            } else {
                BigRational::zero()
            };
            gap = gap.min(rational_to_f64(&d));
        }
    }
    gap
}

fn rational_to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Verdict for an arbitrary pair of equations (used to sanity-check the
/// decision rule, e.g. against itself).
pub fn theorem_verdict_for(
    first: &IntPolynomial,
    second: &IntPolynomial,
    identities: &SplitIdentities,
    precision: f64,
) -> Result<ProofChainReport, ProofError> {
    let imaginary_accepted = accepted_roots_of(first, precision)?;
    let real_accepted = accepted_roots_of(second, precision)?;
    let gap = min_gap(&imaginary_accepted, &real_accepted);
    let eval_max = |p: &IntPolynomial, rs: &[RootInterval]| {
        rs.iter()
            .map(|r| p.evaluate_f64(r.refined).abs())
            .fold(0.0, f64::max)
    };
    let mut residuals = BTreeMap::new();
    residuals.insert(
        "imaginary_at_roots".to_string(),
        eval_max(first, &imaginary_accepted),
    );
    residuals.insert(
        "real_at_roots".to_string(),
        eval_max(second, &real_accepted),
    );
    let holds = identities.all_pass()
        && is_symmetric_pair(&imaginary_accepted, precision)
        && is_symmetric_pair(&real_accepted, precision)
        && gap > 10.0 * precision;
    Ok(ProofChainReport {
        precision,
        imaginary_accepted,
        real_accepted,
        identity_checks: identities.as_map(),
        min_gap: if gap.is_finite() { gap } else { 0.0 },
        residuals,
        verdict: if holds {
            ProofVerdict::ContradictionEstablished
        } else {
            ProofVerdict::Failed
        },
    })
}

pub fn theorem_verdict(precision: f64) -> Result<ProofChainReport, ProofError> {
    theorem_verdict_for(
        &imaginary_part_poly(),
        &real_part_poly(),
        &split_identities(),
        precision,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonvanishingReport {
    pub magnitudes: BTreeMap<String, f64>,
    pub threshold: f64,
    pub passed: bool,
}

/// Magnitudes of `I`, `Jent`, `P`, `Q`; the case analysis needs all four
/// nonzero.
pub fn case_nonvanishing(spec: &ARSpecialization) -> NonvanishingReport {
    let s = entry_symbols(spec);
    let magnitudes: BTreeMap<String, f64> = [("I", s.i), ("Jent", s.jent), ("P", s.p), ("Q", s.q)]
        .iter()
        .map(|(k, v)| (k.to_string(), v.norm()))
        .collect();
    let passed = magnitudes.values().all(|&m| m > NONVANISHING_TOL);
    NonvanishingReport {
        magnitudes,
        threshold: NONVANISHING_TOL,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(c: f64) -> ARSpecialization {
        ARSpecialization::new(c, BetaChoice::Plus).unwrap()
    }

    fn close(a: Complex, re_: f64, im: f64, tol: f64) -> bool {
        (a - Complex::new(re_, im)).norm() <= tol * a.norm().max(1.0)
    }

    #[test]
    fn reference_values_at_three_tenths() {
        // independent floating-point evaluation of the same chain
        let s = spec(0.3);
        assert!(close(k_value(&s), 0.597056, -0.1551917523581715, 1e-12));
        assert!(close(
            alpha1(&s).unwrap(),
            -0.16393353291840643,
            -0.8067745651802368,
            1e-12
        ));
        assert!(close(
            alpha2(&s).unwrap(),
            0.8952028349470932,
            0.11131044493812813,
            1e-11
        ));
        assert!(close(
            n1_value(&s).unwrap(),
            0.6090227736170445,
            -0.027596265540921205,
            1e-11
        ));
        assert!(close(
            eigen_relation_residual(&s).unwrap(),
            -0.5353986683770096,
            1.0097033147922416,
            1e-11
        ));
        let (d, _) = derived_quadratics(&s);
        assert!(close(
            d.c2,
            -0.13964594657624022,
            0.13756722784153178,
            1e-11
        ));
        assert!(close(
            closed_form_quadratics(&s).c2,
            0.19939225868697574,
            -0.24384142130321484,
            1e-11
        ));
    }

    #[test]
    fn quadratic_routes() {
        let s = spec(0.3);
        let q = quadratic_coefficients(&s);
        assert!(q.cubic_cancellation.iter().all(|&r| r < 1e-14));
        for ch in &q.checks[..5] {
            assert!(ch.passed, "{} {}", ch.formula, ch.relative_error);
        }
        // the closed_form c2 does not match the stated combination
        assert_eq!(q.discrepancies(), vec!["c2"]);
        let a1_reduced = q.closed_form.a1 / (s.beta() - 1.0).powi(4);
        let c = 0.3f64;
        let be = s.beta();
        let expect =
            64.0 * be * c.powi(6) * (4.0 * c * c - 1.0).powi(3) * (4.0 * be * c * c + be + 2.0);
        assert!(relative_error(a1_reduced, expect) < 1e-12);
    }

    #[test]
    fn degenerate_coefficients_vanish() {
        let s = ARSpecialization::with_degenerate(0.0, BetaChoice::Plus).unwrap();
        assert!(closed_form_quadratics(&s)
            .values()
            .iter()
            .all(|z| z.norm() == 0.0));
        match alpha1(&s) {
            Err(ProofError::Singularity { factor, .. }) => assert_eq!(factor, "8C^2"),
            other => panic!("unexpected {other:?}"),
        }
        let nv = case_nonvanishing(&s);
        assert!(!nv.passed);
        assert_eq!(nv.magnitudes["Jent"], 0.0);
        assert_eq!(nv.magnitudes["P"], 0.0);
        assert_eq!(nv.magnitudes["Q"], 0.0);
    }

    #[test]
    fn cubic_residual_examples() {
        let s = spec(0.3);
        let e = entry_symbols(&s);
        let r = cubic_residuals(&s, re(0.0));
        assert!((r.second - e.jent * e.jent).norm() < 1e-15);
        assert!((r.third + s.beta() * e.p * e.q).norm() < 1e-15);
        let a = alpha1(&s).unwrap();
        let r = cubic_residuals(&s, a);
        let (d, _) = derived_quadratics(&s);
        let combo = e.jent * e.jent * r.second + e.p * e.q * r.third;
        assert!(relative_error(combo, d.first_at(a)) < 1e-9);
        // the closed-form alpha1 is the common root of the derived pair
        assert!(relative_error(alpha1_route(&s).unwrap(), a) < 1e-9);
    }

    #[test]
    fn back_substitution_routes() {
        for &(c, beta) in &[
            (0.3, BetaChoice::Plus),
            (0.1, BetaChoice::Minus),
            (0.25, BetaChoice::Plus),
        ] {
            let s = ARSpecialization::new(c, beta).unwrap();
            let checks = route_checks(&s).unwrap();
            for name in ["alpha1", "alpha2", "n1"] {
                let ch = checks.iter().find(|x| x.formula == name).unwrap();
                assert!(ch.passed, "{name} at {c}: {}", ch.relative_error);
            }
        }
    }

    #[test]
    fn parity_and_conjugation() {
        let p = spec(0.3);
        let m = spec(-0.3);
        assert!(relative_error(alpha2(&m).unwrap(), -alpha2(&p).unwrap()) < 1e-12);
        assert!(relative_error(alpha1(&m).unwrap(), alpha1(&p).unwrap()) < 1e-12);
        let s = spec(0.1);
        let t = s.conjugate_beta();
        assert!(relative_error(n1_value(&t).unwrap(), n1_value(&s).unwrap().conj()) < 1e-12);
        assert!(
            relative_error(
                eigen_relation_residual(&t).unwrap(),
                eigen_relation_residual(&s).unwrap().conj()
            ) < 1e-12
        );
    }

    #[test]
    fn eigen_relation_nonzero_near_accepted_root() {
        assert!(eigen_relation_residual(&spec(0.3)).unwrap().norm() > EIGEN_RELATION_TOL);
        assert!(
            eigen_relation_residual(&spec(0.43733267518137))
                .unwrap()
                .norm()
                > EIGEN_RELATION_TOL
        );
    }

    #[test]
    fn contradiction_encoding() {
        let (pc, pb) = contradiction_components();
        assert_eq!(pc.coeff(0), BigInt::from(-1));
        assert_eq!(pb.coeff(4), BigInt::from(256));
        assert!(pc.is_even() && pb.is_even());
        assert_eq!(pc.degree(), Some(16));
        assert_eq!(pb.degree(), Some(16));
        assert!(imaginary_part_poly()
            .evaluate(&BigRational::zero())
            .is_zero());
        assert_eq!(real_part_poly().coeff(0), BigInt::from(-1));
        assert_eq!(imaginary_part_poly().degree(), Some(16));
    }

    #[test]
    fn split_identities_exact() {
        let id = split_identities();
        assert!(id.all_pass());
        assert!(id.imaginary_part.difference.is_zero());
        assert!(id.real_part.difference.is_zero());
        let (pc, pb) = contradiction_components();
        let bumped = pb.add(&IntPolynomial::from_terms(&[(8, 1)]));
        let id = split_identities_for(&pc, &bumped);
        assert!(!id.imaginary_part.passed);
        assert_eq!(
            id.imaginary_part.difference,
            IntPolynomial::from_terms(&[(8, 1)])
        );
    }

    #[test]
    fn accepted_root_examples() {
        let im_roots = accepted_roots(Equation::ImaginaryPart, 1e-12).unwrap();
        let re_roots = accepted_roots(Equation::RealPart, 1e-12).unwrap();
        assert_eq!(im_roots.len(), 2);
        assert_eq!(re_roots.len(), 2);
        assert!((im_roots[1].refined - 0.43733267518137).abs() < 1e-11);
        assert!((re_roots[1].refined - 0.23309404043518).abs() < 1e-11);
        assert!((im_roots[0].refined + im_roots[1].refined).abs() < 1e-12);
        let inv = root_inventory(Equation::ImaginaryPart, 1e-12).unwrap();
        let reasons: Vec<&str> = inv.rejected.iter().map(|r| r.reason).collect();
        assert_eq!(inv.distinct_real_roots, 7);
        assert_eq!(reasons.iter().filter(|&&r| r == "boundary").count(), 2);
        assert_eq!(reasons.iter().filter(|&&r| r == "zero").count(), 1);
        let inv = root_inventory(Equation::RealPart, 1e-12).unwrap();
        assert_eq!(inv.rejected.len(), 4);
        assert!("31".parse::<Equation>().is_err());
    }

    #[test]
    fn verdicts() {
        for precision in [1e-12, 1e-6] {
            let rep = theorem_verdict(precision).unwrap();
            assert_eq!(rep.verdict, ProofVerdict::ContradictionEstablished);
            assert!((rep.min_gap - 0.2042).abs() < 0.02, "{}", rep.min_gap);
        }
        let p = imaginary_part_poly();
        let rep = theorem_verdict_for(&p, &p, &split_identities(), 1e-12).unwrap();
        assert_eq!(rep.verdict, ProofVerdict::Failed);
        assert_eq!(rep.min_gap, 0.0);
    }

    #[test]
    fn route_sweep_reports_c2_first() {
        let rep = route_agreement(5, 42).unwrap();
        assert!(!rep.passed);
        assert_eq!(rep.first_discrepancy.as_ref().unwrap().formula, "c2");
        assert!(rep.eigen_relation_nonvanishing);
        for (name, &n) in &rep.failures {
            assert_eq!(n == 0, name != "c2", "{name}");
        }
        assert_eq!(route_agreement(5, 42).unwrap(), rep);
        let empty = route_agreement(0, 1).unwrap();
        assert!(empty.passed && empty.min_abs_eigen_relation_residual.is_none());
    }
}
