//! Generator images: `U = π(S)`, `V = π(J)`, `π(σ1)`, `π(σ2)` and the
//! pure braid generators `A12`, `A23`, `A13`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::params::{ARSpecialization, BetaChoice, GeneralARParams};
use super::RepError;
use crate::linalg::{frobenius_distance, max_entry_distance, unitarity_residual, CMatrix, Complex};

/// Entrywise tolerance for the closed forms.
pub const CLOSED_FORM_TOL: f64 = 1e-12;

/// Frobenius tolerance for the group relations.
pub const RELATION_TOL: f64 = 1e-10;

fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// `U` and `V` for general block data.
///
/// `U = 2·[[A - I/2, B, C], [B*, B*A⁻¹B - I/2, B*A⁻¹C], [C*, C*A⁻¹B, C*A⁻¹C - I/2]]`
/// and `V = diag(I_n, βI_n, β²I_m)`.
pub fn build_general(
    params: &GeneralARParams,
    beta: BetaChoice,
) -> Result<(CMatrix, CMatrix), RepError> {
    let (n, m) = (params.n(), params.m());
    let a = params.a();
    let b = params.b();
    let c = params.c();
    let a_inv = a.inverse()?;
    let bs = b.adjoint();
    let cs = c.adjoint();
    let half_n = CMatrix::identity(n).scale_real(0.5);
    let half_m = CMatrix::identity(m).scale_real(0.5);

    let mut u = CMatrix::zeros(2 * n + m, 2 * n + m);
    u.set_block(0, 0, &a.sub(&half_n)?);
    u.set_block(0, n, b);
    u.set_block(0, 2 * n, c);
    u.set_block(n, 0, &bs);
    u.set_block(n, n, &bs.mul(&a_inv)?.mul(b)?.sub(&half_n)?);
    u.set_block(n, 2 * n, &bs.mul(&a_inv)?.mul(c)?);
    u.set_block(2 * n, 0, &cs);
    u.set_block(2 * n, n, &cs.mul(&a_inv)?.mul(b)?);
    u.set_block(2 * n, 2 * n, &cs.mul(&a_inv)?.mul(c)?.sub(&half_m)?);
    let u = u.scale_real(2.0);

    let bv = beta.value();
    let diag: Vec<Complex> = (0..n)
        .map(|_| re(1.0))
        .chain((0..n).map(|_| bv))
        .chain((0..m).map(|_| bv * bv))
        .collect();
    Ok((u, CMatrix::diag(&diag)))
}

/// `U` and `V` of the 3×3 specialization, straight from the displayed
/// matrices.
pub fn build_specialized(spec: &ARSpecialization) -> (CMatrix, CMatrix) {
    let c = spec.c();
    let b = spec.b();
    let u = CMatrix::from_real_rows(&[
        [0.0, 2.0 * b, 2.0 * c],
        [2.0 * b, -4.0 * c * c, 4.0 * c * b],
        [2.0 * c, 4.0 * c * b, 4.0 * c * c - 1.0],
    ])
    .expect("finite entries");
    let beta = spec.beta();
    (u, CMatrix::diag(&[re(1.0), beta, beta * beta]))
}

/// `σ1 = S·J⁻¹` and `σ2 = J·S⁻¹·J` as matrix products, unchecked.
fn sigma_products(spec: &ARSpecialization) -> Result<(CMatrix, CMatrix), RepError> {
    let (u, v) = build_specialized(spec);
    let v_inv = v.inverse()?;
    let u_inv = u.inverse()?;
    let s1 = u.mul(&v_inv)?;
    let s2 = v.mul(&u_inv)?.mul(&v)?;
    Ok((s1, s2))
}

/// The closed forms of `π(σ1)` and `π(σ2)`.
pub fn sigma_closed_form(spec: &ARSpecialization) -> (CMatrix, CMatrix) {
    let c = spec.c();
    let b = spec.b();
    let be = spec.beta();
    let be2 = be * be;
    let s1 = CMatrix::from_rows(&[
        [re(0.0), re(2.0 * b) / be, re(2.0 * c) / be2],
        [re(2.0 * b), re(-4.0 * c * c) / be, re(4.0 * c * b) / be2],
        [
            re(2.0 * c),
            re(4.0 * c * b) / be,
            re(4.0 * c * c - 1.0) / be2,
        ],
    ])
    .expect("finite entries");
    let s2 = CMatrix::from_rows(&[
        [re(0.0), be * 2.0 * b, be2 * 2.0 * c],
        [be * 2.0 * b, be2 * (-4.0 * c * c), re(4.0 * c * b)],
        [be2 * 2.0 * c, re(4.0 * c * b), be * (4.0 * c * c - 1.0)],
    ])
    .expect("finite entries");
    (s1, s2)
}

/// Images of the standard generators, derived from `U` and `V` and
/// checked against the closed forms entrywise.
pub fn sigma_images(spec: &ARSpecialization) -> Result<(CMatrix, CMatrix), RepError> {
    let (s1, s2) = sigma_products(spec)?;
    let (f1, f2) = sigma_closed_form(spec);
    for (name, prod, closed) in [("sigma1", &s1, &f1), ("sigma2", &s2, &f2)] {
        let dev = max_entry_distance(prod, closed)?;
        if dev > CLOSED_FORM_TOL {
            return Err(RepError::ClosedFormMismatch {
                image: name,
                deviation: dev,
            });
        }
    }
    Ok((s1, s2))
}

/// The six closed-form entry values of `φ(A12)` and `φ(A23)`.
///
/// `jent` is the entry usually written `J`, renamed so it cannot be confused
/// with the group element `J = σ1σ2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntrySymbols {
    #[serde(rename = "I", serialize_with = "crate::linalg::serialize_complex")]
    pub i: Complex,
    #[serde(rename = "Jent", serialize_with = "crate::linalg::serialize_complex")]
    pub jent: Complex,
    #[serde(rename = "P", serialize_with = "crate::linalg::serialize_complex")]
    pub p: Complex,
    #[serde(rename = "M", serialize_with = "crate::linalg::serialize_complex")]
    pub m: Complex,
    #[serde(rename = "Q", serialize_with = "crate::linalg::serialize_complex")]
    pub q: Complex,
    #[serde(rename = "R", serialize_with = "crate::linalg::serialize_complex")]
    pub r: Complex,
}

pub fn entry_symbols(spec: &ARSpecialization) -> EntrySymbols {
    let c = spec.c();
    let b = spec.b();
    let be = spec.beta();
    let be2 = be * be;
    let c2 = c * c;
    let c4 = c2 * c2;
    let one = re(1.0);
    EntrySymbols {
        i: 4.0 * be * c2 * (one - be) + be2,
        jent: 8.0 * c2 * (one - be) * b,
        p: 2.0 * be * c * (one - be) * (4.0 * c2 - 1.0),
        m: be2 * (-4.0 * c2 + 1.0) + 16.0 * c4 * (be - one) + 4.0 * c2,
        q: 4.0 * c * (one - be) * (4.0 * c2 + be2) * b,
        r: 4.0 * be * c2 - 16.0 * c4 + 4.0 * c2 + 16.0 * be2 * c4 - 8.0 * be2 * c2 + be2,
    }
}

/// `φ(A12)` and `φ(A23)` assembled from the entry symbols in the closed-form
/// block pattern.
pub fn pure_closed_form(spec: &ARSpecialization) -> (CMatrix, CMatrix) {
    let s = entry_symbols(spec);
    let be = spec.beta();
    let be2 = be * be;
    let a12 = CMatrix::from_rows(&[
        [s.i, s.jent, be * s.p],
        [be * s.jent, s.m, be2 * s.q],
        [s.p, s.q, s.r],
    ])
    .expect("finite entries");
    let a23 = CMatrix::from_rows(&[
        [s.i, be2 * s.jent, be2 * s.p],
        [be2 * s.jent, s.m, be * s.q],
        [be2 * s.p, be * s.q, s.r],
    ])
    .expect("finite entries");
    (a12, a23)
}

fn pure_from_sigma(s1: &CMatrix, s2: &CMatrix) -> Result<(CMatrix, CMatrix, CMatrix), RepError> {
    let a12 = s1.mul(s1)?;
    let a23 = s2.mul(s2)?;
    let a13 = s2.mul(&a12)?.mul(&s2.inverse()?)?;
    Ok((a12, a23, a13))
}

/// `φ(A12) = σ1²`, `φ(A23) = σ2²`, `φ(A13) = σ2σ1²σ2⁻¹`.
pub fn pure_braid_images(spec: &ARSpecialization) -> Result<(CMatrix, CMatrix, CMatrix), RepError> {
    let (s1, s2) = sigma_images(spec)?;
    pure_from_sigma(&s1, &s2)
}

/// Every image the crate knows about, computed once.
#[derive(Debug, Clone, Serialize)]
pub struct Images {
    #[serde(rename = "U")]
    pub u: CMatrix,
    #[serde(rename = "V")]
    pub v: CMatrix,
    pub sigma1: CMatrix,
    pub sigma2: CMatrix,
    #[serde(rename = "A12")]
    pub a12: CMatrix,
    #[serde(rename = "A23")]
    pub a23: CMatrix,
    #[serde(rename = "A13")]
    pub a13: CMatrix,
}

pub fn images(spec: &ARSpecialization) -> Result<Images, RepError> {
    let (u, v) = build_specialized(spec);
    let (sigma1, sigma2) = sigma_images(spec)?;
    let (a12, a23, a13) = pure_from_sigma(&sigma1, &sigma2)?;
    Ok(Images {
        u,
        v,
        sigma1,
        sigma2,
        a12,
        a23,
        a13,
    })
}

/// Frobenius residuals of every identity the representation must satisfy.
#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub c: f64,
    pub beta: BetaChoice,
    pub tolerance: f64,
    pub residuals: BTreeMap<String, f64>,
    pub passed: bool,
}

impl RelationReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.values().cloned().fold(0.0, f64::max)
    }
}

/// Checks `U = U*`, `U² = I`, `V³ = I`, `π(S)² = π(J)³`, the braid
/// relation, unitarity and unit determinant of the images, and agreement
/// with the closed forms. Failures are reported, never raised.
pub fn verify_relations(spec: &ARSpecialization) -> Result<RelationReport, RepError> {
    let (u, v) = build_specialized(spec);
    let i3 = CMatrix::identity(3);
    let (s1, s2) = sigma_products(spec)?;
    let (a12, a23, a13) = pure_from_sigma(&s1, &s2)?;
    let (f1, f2) = sigma_closed_form(spec);
    let (p12, p23) = pure_closed_form(spec);

    let u2 = u.mul(&u)?;
    let v3 = v.pow(3)?;
    let lhs = s1.mul(&s2)?.mul(&s1)?;
    let rhs = s2.mul(&s1)?.mul(&s2)?;

    let mut r = BTreeMap::new();
    r.insert(
        "U_hermitian".to_string(),
        frobenius_distance(&u, &u.adjoint())?,
    );
    r.insert(
        "U_squared_identity".to_string(),
        frobenius_distance(&u2, &i3)?,
    );
    r.insert(
        "V_cubed_identity".to_string(),
        frobenius_distance(&v3, &i3)?,
    );
    r.insert("S2_equals_J3".to_string(), frobenius_distance(&u2, &v3)?);
    r.insert(
        "braid_relation".to_string(),
        frobenius_distance(&lhs, &rhs)?,
    );
    for (name, m) in [
        ("sigma1", &s1),
        ("sigma2", &s2),
        ("A12", &a12),
        ("A23", &a23),
        ("A13", &a13),
    ] {
        r.insert(format!("unitary_{name}"), unitarity_residual(m)?);
    }
    r.insert("det_sigma1".to_string(), (s1.det()? - 1.0).norm());
    r.insert("det_sigma2".to_string(), (s2.det()? - 1.0).norm());
    r.insert(
        "sigma_closed_form".to_string(),
        frobenius_distance(&s1, &f1)?.max(frobenius_distance(&s2, &f2)?),
    );
    r.insert(
        "pure_closed_form".to_string(),
        frobenius_distance(&a12, &p12)?.max(frobenius_distance(&a23, &p23)?),
    );
    let passed = r.values().all(|&x| x <= RELATION_TOL);
    Ok(RelationReport {
        c: spec.c(),
        beta: spec.beta_choice(),
        tolerance: RELATION_TOL,
        residuals: r,
        passed,
    })
}
