//! Irreducibility of finite matrix families.
//!
//! The primary criterion is the commutant: a unitary family is irreducible
//! exactly when the only matrices commuting with every member are scalars.
//! The commutant dimension is the nullity of the stacked Sylvester system
//! `(I ⊗ M - Mᵀ ⊗ I) vec(X) = 0`. An independent search for common
//! eigenvectors (and, through adjoints, for invariant planes) cross-checks
//! the verdict and produces a witness subspace when the family is
//! reducible.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::linalg::{
    eigen3, inner, nullspace_scaled, orthonormalize, rank, rank_profile, unit_vector,
    unitarity_residual, vec_norm, CMatrix, Complex, LinalgError, RankProfile, DEFAULT_RANK_TOL,
};
use crate::rep::GeneralARParams;

/// Pivot decisions closer than this factor to the threshold make a
/// verdict inconclusive.
pub const NEAR_THRESHOLD_FACTOR: f64 = 10.0;

/// Largest orbit residual accepted for a witness subspace.
pub const WITNESS_TOL: f64 = 1e-8;

/// Largest matrix size accepted by [`commutant_dimension`].
pub const MAX_COMMUTANT_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IrredError {
    #[error("matrix {index} is {rows}x{cols}; expected {expected}x{expected}")]
    Shape {
        index: usize,
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error("matrix {index} is not unitary (residual {residual:e})")]
    NotUnitary { index: usize, residual: f64 },
    #[error("empty matrix family")]
    EmptyFamily,
    #[error("dimension {0} exceeds the supported maximum of {MAX_COMMUTANT_DIM}")]
    TooLarge(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Commutant dimension together with the elimination profile behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct Commutant {
    pub dim: usize,
    pub profile: RankProfile,
    /// Set when the family was empty and the answer is the full algebra.
    pub warning: Option<String>,
}

impl Commutant {
    pub fn near_threshold(&self) -> bool {
        self.profile.near_threshold(NEAR_THRESHOLD_FACTOR)
    }
}

fn check_square(mats: &[CMatrix], d: usize) -> Result<(), IrredError> {
    for (index, m) in mats.iter().enumerate() {
        if m.shape() != (d, d) {
            return Err(IrredError::Shape {
                index,
                rows: m.rows(),
                cols: m.cols(),
                expected: d,
            });
        }
    }
    Ok(())
}

/// Dimension of `{X : XM = MX for all M in mats}` for `d × d` matrices.
///
/// The pivot threshold is `tol` times the largest generator entry, so a
/// family of (numerically) scalar matrices yields the full algebra rather
/// than a rank decided by rounding noise.
pub fn commutant_dimension(d: usize, mats: &[CMatrix], tol: f64) -> Result<Commutant, IrredError> {
    if d > MAX_COMMUTANT_DIM {
        return Err(IrredError::TooLarge(d));
    }
    check_square(mats, d)?;
    if mats.is_empty() {
        return Ok(Commutant {
            dim: d * d,
            profile: RankProfile {
                rank: 0,
                threshold: 0.0,
                pivots: Vec::new(),
                remainder: 0.0,
            },
            warning: Some("empty generator family: every matrix commutes".into()),
        });
    }
    let id = CMatrix::identity(d);
    let blocks: Vec<CMatrix> = mats
        .iter()
        .map(|m| id.kron(m).sub(&m.transpose().kron(&id)))
        .collect::<Result<_, _>>()?;
    let system = CMatrix::vstack(&blocks)?;
    let scale = mats.iter().map(|m| m.max_abs()).fold(0.0, f64::max);
    let profile = rank_profile(&system, tol, scale);
    Ok(Commutant {
        dim: d * d - profile.rank,
        profile,
        warning: None,
    })
}

/// Distinct eigenvalues of a 3×3 matrix in the deterministic order of
/// [`eigen3`].
fn distinct_eigenvalues(m: &CMatrix) -> Result<Vec<Complex>, IrredError> {
    Ok(eigen3(m)?.distinct_values())
}

fn shifted(m: &CMatrix, lambda: Complex) -> CMatrix {
    let mut a = m.clone();
    for i in 0..m.rows() {
        a[(i, i)] -= lambda;
    }
    a
}

/// Keeps vectors that are not in the span of those already kept. Vectors
/// are stored as given (unit length), not orthogonalized against each
/// other, so each stays a common eigenvector.
fn push_independent(acc: &mut Vec<Vec<Complex>>, v: Vec<Complex>) {
    let mut trial = acc.clone();
    trial.push(v.clone());
    if orthonormalize(&trial, 1e-6).len() == trial.len() {
        let n = vec_norm(&v);
        acc.push(v.into_iter().map(|z| z / n).collect());
    }
}

/// Independent common eigenvectors of a family of 3×3 matrices.
///
/// For every tuple of eigenvalues `(λ₁, …, λₖ)` the stacked matrix
/// `[M₁ - λ₁I; …; Mₖ - λₖI]` is reduced and its kernel collected. Tuples
/// are visited in the eigenvalue order of [`eigen3`], so the first vector
/// returned is reproducible.
pub fn common_eigenvectors_family(
    mats: &[CMatrix],
    tol: f64,
) -> Result<Vec<Vec<Complex>>, IrredError> {
    if mats.is_empty() {
        return Err(IrredError::EmptyFamily);
    }
    check_square(mats, 3)?;
    let spectra: Vec<Vec<Complex>> = mats
        .iter()
        .map(distinct_eigenvalues)
        .collect::<Result<_, _>>()?;
    let scale = mats.iter().map(|m| m.max_abs()).fold(0.0, f64::max);
    let mut out: Vec<Vec<Complex>> = Vec::new();
    let mut idx = vec![0usize; mats.len()];
    loop {
        let blocks: Vec<CMatrix> = mats
            .iter()
            .zip(&idx)
            .zip(&spectra)
            .map(|((m, &k), sp)| shifted(m, sp[k]))
            .collect();
        let stacked = CMatrix::vstack(&blocks)?;
        for v in nullspace_scaled(&stacked, tol, scale) {
            push_independent(&mut out, v);
        }
        // odometer over eigenvalue tuples
        let mut pos = mats.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < spectra[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Independent common eigenvectors of two 3×3 matrices.
pub fn common_eigenvectors(
    m1: &CMatrix,
    m2: &CMatrix,
    tol: f64,
) -> Result<Vec<Vec<Complex>>, IrredError> {
    common_eigenvectors_family(&[m1.clone(), m2.clone()], tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Irreducible,
    Reducible,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Irreducible => "irreducible",
            Verdict::Reducible => "reducible",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

fn serialize_basis<S: Serializer>(basis: &[Vec<Complex>], s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<Vec<[f64; 2]>> = basis
        .iter()
        .map(|b| b.iter().map(|z| [z.re, z.im]).collect())
        .collect();
    v.serialize(s)
}

/// A proper invariant subspace, given by an orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub dimension: usize,
    #[serde(serialize_with = "serialize_basis")]
    pub basis: Vec<Vec<Complex>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrreducibilityReport {
    pub verdict: Verdict,
    pub commutant_dim: usize,
    pub witness: Option<Witness>,
    pub residuals: BTreeMap<String, f64>,
    pub tolerance: f64,
}

/// Largest `‖(I - WW*) M W‖_F` over the family: zero exactly when the span
/// of the orthonormal columns `W` is invariant under every matrix.
pub fn orbit_residual(mats: &[CMatrix], basis: &[Vec<Complex>]) -> Result<f64, IrredError> {
    let mut worst = 0.0f64;
    for m in mats {
        for w in basis {
            let mw = m.apply(w)?;
            let mut r = mw.clone();
            for q in basis {
                let c = inner(q, &mw);
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri -= c * qi;
                }
            }
            worst = worst.max(vec_norm(&r));
        }
    }
    Ok(worst)
}

/// Orthonormal basis of the orthogonal complement of `v` in `C³`.
fn complement(v: &[Complex]) -> Vec<Vec<Complex>> {
    let mut seed = vec![v.to_vec()];
    seed.extend((0..3).map(|k| unit_vector(3, k)));
    orthonormalize(&seed, 1e-8)
        .into_iter()
        .skip(1)
        .take(2)
        .collect()
}

/// Decides irreducibility of a unitary family of 3×3 matrices.
///
/// Invariant lines come from common eigenvectors of the family; invariant
/// planes are orthogonal complements of common eigenvectors of the adjoint
/// family (for unitary matrices the complement of an invariant subspace is
/// invariant). The commutant dimension is computed independently; when the
/// two routes disagree, or a pivot decision sits within
/// [`NEAR_THRESHOLD_FACTOR`] of the threshold, the verdict is
/// `inconclusive`.
pub fn invariant_subspace_search(
    mats: &[CMatrix],
    tol: f64,
) -> Result<IrreducibilityReport, IrredError> {
    if mats.is_empty() {
        return Err(IrredError::EmptyFamily);
    }
    check_square(mats, 3)?;
    let unitary_tol = tol.max(DEFAULT_RANK_TOL);
    let mut unitarity = 0.0f64;
    for (index, m) in mats.iter().enumerate() {
        let residual = unitarity_residual(m)?;
        if residual > unitary_tol {
            return Err(IrredError::NotUnitary { index, residual });
        }
        unitarity = unitarity.max(residual);
    }

    let commutant = commutant_dimension(3, mats, tol)?;
    let mut residuals = BTreeMap::new();
    residuals.insert("unitarity_max".to_string(), unitarity);
    // margins are infinite when there is no pivot (or no remainder) to
    // compare; only finite ones are reported
    for (key, margin) in [
        ("commutant_pivot_margin", commutant.profile.pivot_margin()),
        (
            "commutant_remainder_margin",
            commutant.profile.remainder_margin(),
        ),
    ] {
        if margin.is_finite() {
            residuals.insert(key.to_string(), margin);
        }
    }

    let lines = common_eigenvectors_family(mats, tol)?;
    let witness = if let Some(v) = lines.first() {
        Some(Witness {
            dimension: 1,
            basis: vec![v.clone()],
        })
    } else {
        let adjoints: Vec<CMatrix> = mats.iter().map(|m| m.adjoint()).collect();
        common_eigenvectors_family(&adjoints, tol)?
            .first()
            .map(|w| Witness {
                dimension: 2,
                basis: complement(w),
            })
    };
    if let Some(w) = &witness {
        residuals.insert("witness_orbit".to_string(), orbit_residual(mats, &w.basis)?);
    }

    let witness_ok = witness
        .as_ref()
        .is_none_or(|_| residuals["witness_orbit"] <= WITNESS_TOL);
    let consistent = witness.is_some() == (commutant.dim >= 2) && witness_ok;
    let verdict = if commutant.near_threshold() || !consistent {
        Verdict::Inconclusive
    } else if commutant.dim == 1 {
        Verdict::Irreducible
    } else {
        Verdict::Reducible
    };
    Ok(IrreducibilityReport {
        verdict,
        commutant_dim: commutant.dim,
        witness,
        residuals,
        tolerance: tol,
    })
}

/// Hypotheses of the block-data irreducibility criterion. Sufficient
/// conditions only: a failed flag says nothing about reducibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BlockCriterionChecklist {
    pub a_invertible: bool,
    pub b_invertible: bool,
    pub rank_c_is_m: bool,
    pub bstarb_diagonal_simple: bool,
    pub a_entries_nonzero: bool,
}

impl BlockCriterionChecklist {
    pub fn all_hypotheses_hold(&self) -> bool {
        self.a_invertible
            && self.b_invertible
            && self.rank_c_is_m
            && self.bstarb_diagonal_simple
            && self.a_entries_nonzero
    }
}

/// Evaluates each hypothesis with threshold `tol` (relative to the largest
/// entry of the block in question, or absolute for an all-zero block).
pub fn block_criterion_check(params: &GeneralARParams, tol: f64) -> BlockCriterionChecklist {
    let n = params.n();
    let full_rank = |m: &CMatrix| rank(m, tol) == m.rows().min(m.cols()) && m.max_abs() > tol;
    let a = params.a();
    let b = params.b();
    let c = params.c();
    let bsb = b.adjoint().mul(b).expect("square blocks");
    let scale = bsb.max_abs().max(tol);
    let off_diag = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .all(|(i, j)| bsb[(i, j)].norm() <= tol * scale);
    let diag: Vec<Complex> = (0..n).map(|i| bsb[(i, i)]).collect();
    let simple = (0..n).all(|i| (i + 1..n).all(|j| (diag[i] - diag[j]).norm() > tol * scale));
    let a_scale = a.max_abs();
    BlockCriterionChecklist {
        a_invertible: full_rank(a),
        b_invertible: full_rank(b),
        rank_c_is_m: c.max_abs() > tol && rank(c, tol) == params.m(),
        bstarb_diagonal_simple: off_diag && simple,
        a_entries_nonzero: a_scale > 0.0 && a.entries().iter().all(|z| z.norm() > tol * a_scale),
    }
}
