//! Small dense complex matrices.
//!
//! Everything in this crate lives in dimension at most 8 (the 3×3
//! specialization and the `(2n+m)`-dimensional general construction with
//! `n ≤ 4`), so rank and kernel computations use Gauss-Jordan elimination
//! with complete pivoting and a relative threshold instead of an SVD.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use thiserror::Error;

pub type Complex = Complex64;

/// Default relative threshold for rank and kernel decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Largest dimension accepted by [`CMatrix::inverse`].
pub const MAX_INVERSE_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    Shape {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("entry count {len} does not match {rows}x{cols}")]
    EntryCount {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is singular (smallest pivot {smallest_pivot:e})")]
    Singular { smallest_pivot: f64 },
    #[error("dimension {dim} exceeds the supported maximum {max}")]
    TooLarge { dim: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Row-major dense complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<[f64; 2]> = self.row(i).iter().map(|z| [z.re, z.im]).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(LinalgError::EntryCount {
                rows,
                cols,
                len: data.len(),
            });
        }
        if let Some(k) = data
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(LinalgError::NonFinite {
                row: k / cols.max(1),
                col: k % cols.max(1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from rows of equal length.
    pub fn from_rows<R: AsRef<[Complex]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != ncols {
                return Err(LinalgError::Shape {
                    op: "from_rows",
                    left: (nrows, ncols),
                    right: (1, r.len()),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(nrows, ncols, data)
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<Complex>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Complex::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(entries: &[Complex]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Column matrix from a vector.
    pub fn column(v: &[Complex]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Complex> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Copies the block with top-left corner `(r0, c0)` and the given shape.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> CMatrix {
        let mut out = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(r0 + i, c0 + j)];
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, src: &CMatrix) {
        for i in 0..src.rows {
            for j in 0..src.cols {
                self[(r0 + i, c0 + j)] = src[(i, j)];
            }
        }
    }

    /// Largest entry modulus; zero for the empty matrix.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> CMatrix {
        self.scale(Complex::new(s, 0.0))
    }

    fn same_shape(&self, other: &CMatrix, op: &'static str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(LinalgError::Shape {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &CMatrix) -> Result<CMatrix> {
        self.same_shape(other, "add")?;
        Ok(CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &CMatrix) -> Result<CMatrix> {
        self.same_shape(other, "sub")?;
        Ok(CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn mul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape {
                op: "mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex]) -> Result<Vec<Complex>> {
        if self.cols != v.len() {
            return Err(LinalgError::Shape {
                op: "apply",
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Non-negative integer power of a square matrix.
    pub fn pow(&self, k: u32) -> Result<CMatrix> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                op: "pow",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = CMatrix::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Gauss-Jordan inverse with partial pivoting.
    ///
    /// A pivot whose modulus is at most `1e-12` times the largest entry is
    /// treated as zero.
    pub fn inverse(&self) -> Result<CMatrix> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                op: "inverse",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n > MAX_INVERSE_DIM {
            return Err(LinalgError::TooLarge {
                dim: n,
                max: MAX_INVERSE_DIM,
            });
        }
        let scale = self.max_abs();
        if scale == 0.0 {
            return Err(LinalgError::Singular {
                smallest_pivot: 0.0,
            });
        }
        let mut a = self.clone();
        let mut inv = CMatrix::identity(n);
        let mut smallest = f64::INFINITY;
        for k in 0..n {
            let (p, mag) = (k..n)
                .map(|i| (i, a[(i, k)].norm()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            smallest = smallest.min(mag);
            if mag <= 1e-12 * scale {
                return Err(LinalgError::Singular {
                    smallest_pivot: mag,
                });
            }
            a.swap_rows(k, p);
            inv.swap_rows(k, p);
            let piv = a[(k, k)].inv();
            for j in 0..n {
                a[(k, j)] *= piv;
                inv[(k, j)] *= piv;
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = a[(i, k)];
                if f == Complex::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    let akj = a[(k, j)];
                    let ikj = inv[(k, j)];
                    a[(i, j)] -= f * akj;
                    inv[(i, j)] -= f * ikj;
                }
            }
        }
        Ok(inv)
    }

    /// Determinant via partial-pivoted LU.
    pub fn det(&self) -> Result<Complex> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                op: "det",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Complex::new(1.0, 0.0);
        for k in 0..n {
            let (p, mag) = (k..n)
                .map(|i| (i, a[(i, k)].norm()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            if mag == 0.0 {
                return Ok(Complex::new(0.0, 0.0));
            }
            if p != k {
                a.swap_rows(k, p);
                det = -det;
            }
            let piv = a[(k, k)];
            det *= piv;
            for i in k + 1..n {
                let f = a[(i, k)] / piv;
                for j in k..n {
                    let akj = a[(k, j)];
                    a[(i, j)] -= f * akj;
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(r1 * self.cols + j, r2 * self.cols + j);
        }
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[CMatrix]) -> Result<CMatrix> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.cols != cols {
                return Err(LinalgError::Shape {
                    op: "vstack",
                    left: (rows, cols),
                    right: b.shape(),
                });
            }
            rows += b.rows;
            data.extend_from_slice(&b.data);
        }
        Ok(CMatrix { rows, cols, data })
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (r1, c1) = self.shape();
        let (r2, c2) = other.shape();
        let mut out = CMatrix::zeros(r1 * r2, c1 * c2);
        for i in 0..r1 {
            for j in 0..c1 {
                let a = self[(i, j)];
                for k in 0..r2 {
                    for l in 0..c2 {
                        out[(i * r2 + k, j * c2 + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }
}

/// Serializes a complex number as `[re, im]`.
pub fn serialize_complex<S: Serializer>(z: &Complex, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// Serializes a vector of complex numbers as `[[re, im], ...]`.
pub fn serialize_complex_vec<S: Serializer>(
    v: &[Complex],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
    pairs.serialize(s)
}

/// Frobenius norm of `a - b`.
pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    Ok(a.sub(b)?.frobenius_norm())
}

/// Largest entrywise modulus of `a - b`.
pub fn max_entry_distance(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    Ok(a.sub(b)?.max_abs())
}

/// Frobenius distance of `M* M` from the identity.
pub fn unitarity_residual(m: &CMatrix) -> Result<f64> {
    let g = m.adjoint().mul(m)?;
    frobenius_distance(&g, &CMatrix::identity(m.cols()))
}

pub fn vec_norm(v: &[Complex]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian inner product `<u, v> = Σ conj(u_i) v_i`.
pub fn inner(u: &[Complex], v: &[Complex]) -> Complex {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Outcome of a thresholded elimination.
#[derive(Debug, Clone, PartialEq)]
pub struct RankProfile {
    pub rank: usize,
    /// Absolute threshold used for the pivot decision.
    pub threshold: f64,
    /// Moduli of accepted pivots, in elimination order.
    pub pivots: Vec<f64>,
    /// Largest entry left in the unreduced block when elimination stopped.
    pub remainder: f64,
}

impl RankProfile {
    /// Ratio of the weakest accepted pivot to the threshold (`inf` if none).
    pub fn pivot_margin(&self) -> f64 {
        self.pivots.iter().cloned().fold(f64::INFINITY, f64::min) / self.threshold
    }

    /// Ratio of the threshold to the largest rejected entry (`inf` if none).
    pub fn remainder_margin(&self) -> f64 {
        if self.remainder == 0.0 {
            f64::INFINITY
        } else {
            self.threshold / self.remainder
        }
    }

    /// True when some pivot decision sat within `factor` of the threshold.
    pub fn near_threshold(&self, factor: f64) -> bool {
        self.pivot_margin() < factor || self.remainder_margin() < factor
    }
}

struct Reduced {
    rref: CMatrix,
    pivot_cols: Vec<usize>,
    profile: RankProfile,
}

/// Gauss-Jordan with complete pivoting. Entries of modulus at most
/// `threshold` are treated as zero.
fn reduce(m: &CMatrix, threshold: f64) -> Reduced {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut pivot_cols = Vec::new();
    let mut pivots = Vec::new();
    let mut used = vec![false; cols];
    let mut remainder = 0.0;
    for k in 0..rows.min(cols) {
        let mut best = (0, 0, -1.0f64);
        for i in k..rows {
            for j in (0..cols).filter(|&j| !used[j]) {
                let mag = a[(i, j)].norm();
                if mag > best.2 {
                    best = (i, j, mag);
                }
            }
        }
        let (pi, pj, mag) = best;
        if mag < 0.0 {
            break;
        }
        if mag <= threshold {
            remainder = mag;
            break;
        }
        a.swap_rows(k, pi);
        used[pj] = true;
        pivot_cols.push(pj);
        pivots.push(mag);
        let inv = a[(k, pj)].inv();
        for j in 0..cols {
            a[(k, j)] *= inv;
        }
        for i in 0..rows {
            if i == k {
                continue;
            }
            let f = a[(i, pj)];
            if f == Complex::new(0.0, 0.0) {
                continue;
            }
            for j in 0..cols {
                let akj = a[(k, j)];
                a[(i, j)] -= f * akj;
            }
        }
    }
    Reduced {
        rref: a,
        profile: RankProfile {
            rank: pivot_cols.len(),
            threshold,
            pivots,
            remainder,
        },
        pivot_cols,
    }
}

/// Numerical rank relative to the largest entry of `m`.
pub fn rank(m: &CMatrix, tol: f64) -> usize {
    rank_profile(m, tol, m.max_abs()).rank
}

/// Rank with the threshold `tol * scale` for an explicit `scale`.
///
/// Used where the natural scale is that of some other matrix, e.g. the
/// generators behind a commutator system whose entries may all be rounding
/// noise.
pub fn rank_profile(m: &CMatrix, tol: f64, scale: f64) -> RankProfile {
    assert!(tol > 0.0, "tolerance must be positive");
    if scale == 0.0 {
        return RankProfile {
            rank: 0,
            threshold: 0.0,
            pivots: Vec::new(),
            remainder: 0.0,
        };
    }
    reduce(m, tol * scale).profile
}

/// Orthonormal basis of the numerical kernel of `m`, relative to its
/// largest entry.
pub fn nullspace(m: &CMatrix, tol: f64) -> Vec<Vec<Complex>> {
    nullspace_scaled(m, tol, m.max_abs())
}

/// Kernel with the threshold `tol * scale`.
pub fn nullspace_scaled(m: &CMatrix, tol: f64, scale: f64) -> Vec<Vec<Complex>> {
    assert!(tol > 0.0, "tolerance must be positive");
    let cols = m.cols();
    if scale == 0.0 {
        return (0..cols).map(|j| unit_vector(cols, j)).collect();
    }
    let red = reduce(m, tol * scale);
    let free: Vec<usize> = (0..cols).filter(|j| !red.pivot_cols.contains(j)).collect();
    let raw: Vec<Vec<Complex>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![Complex::new(0.0, 0.0); cols];
            v[f] = Complex::new(1.0, 0.0);
            for (k, &p) in red.pivot_cols.iter().enumerate() {
                v[p] = -red.rref[(k, f)];
            }
            v
        })
        .collect();
    orthonormalize(&raw, 1e-12)
}

pub fn unit_vector(n: usize, k: usize) -> Vec<Complex> {
    let mut v = vec![Complex::new(0.0, 0.0); n];
    v[k] = Complex::new(1.0, 0.0);
    v
}

/// Modified Gram-Schmidt with one reorthogonalization pass. Vectors whose
/// residual falls below `drop_tol` times their original norm are dropped.
pub fn orthonormalize(vectors: &[Vec<Complex>], drop_tol: f64) -> Vec<Vec<Complex>> {
    let mut basis: Vec<Vec<Complex>> = Vec::new();
    for v in vectors {
        let norm0 = vec_norm(v);
        if norm0 == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = inner(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        let n = vec_norm(&w);
        if n > drop_tol * norm0 {
            basis.push(w.into_iter().map(|z| z / n).collect());
        }
    }
    basis
}

/// Scales `v` to unit length with its largest-modulus component real and
/// positive (first such index on ties).
pub fn normalize_phase(v: &[Complex]) -> Vec<Complex> {
    let n = vec_norm(v);
    if n == 0.0 {
        return v.to_vec();
    }
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let k = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-9))
        .unwrap_or(0);
    let phase = v[k].conj() / v[k].norm();
    v.iter().map(|z| z * phase / n).collect()
}

/// One eigenpair of a 3×3 matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: Complex,
    pub vector: Vec<Complex>,
}

/// Eigen-decomposition of a 3×3 matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen3 {
    /// Three pairs, repeated according to algebraic multiplicity, sorted by
    /// real part and then imaginary part of the eigenvalue.
    pub pairs: Vec<EigenPair>,
    /// Set when some eigenvalue has fewer independent eigenvectors than its
    /// multiplicity; the missing vectors are repeats.
    pub defective: bool,
}

impl Eigen3 {
    pub fn values(&self) -> Vec<Complex> {
        self.pairs.iter().map(|p| p.value).collect()
    }

    /// Distinct eigenvalues in output order.
    pub fn distinct_values(&self) -> Vec<Complex> {
        let mut out: Vec<Complex> = Vec::new();
        for p in &self.pairs {
            if out.last() != Some(&p.value) {
                out.push(p.value);
            }
        }
        out
    }
}

/// Sort key for deterministic eigenvalue ordering: real part, then
/// imaginary part, each quantized to 1e-9.
fn order_key(z: Complex) -> (i64, i64) {
    ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64)
}

/// Roots of the characteristic polynomial from Cardano's formula with the
/// principal cube root.
fn cubic_eigenvalues(m: &CMatrix) -> [Complex; 3] {
    let t = m.trace();
    let s = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)] + m[(0, 0)] * m[(2, 2)]
        - m[(0, 2)] * m[(2, 0)]
        + m[(1, 1)] * m[(2, 2)]
        - m[(1, 2)] * m[(2, 1)];
    let d = m.det().expect("square");
    // λ³ + aλ² + bλ + c with a = -t, b = s, c = -d; shift λ = μ + t/3.
    let a = -t;
    let b = s;
    let c = -d;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
    let sq = disc.sqrt();
    let w1 = -q / 2.0 + sq;
    let w2 = -q / 2.0 - sq;
    let w = if w1.norm() >= w2.norm() { w1 } else { w2 };
    let shift = t / 3.0;
    let omega = Complex::new(-0.5, 3f64.sqrt() / 2.0);
    if w.norm() == 0.0 {
        return [shift; 3];
    }
    let u = w.powf(1.0 / 3.0);
    let v = -p / (3.0 * u);
    let mut out = [Complex::new(0.0, 0.0); 3];
    let mut om = Complex::new(1.0, 0.0);
    for r in out.iter_mut() {
        *r = om * u + om.conj() * v + shift;
        om *= omega;
    }
    out
}

fn shifted(m: &CMatrix, lambda: Complex) -> CMatrix {
    let mut a = m.clone();
    for i in 0..m.rows() {
        a[(i, i)] -= lambda;
    }
    a
}

fn cross(u: &[Complex], v: &[Complex]) -> Vec<Complex> {
    vec![
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

/// Solves `a x = rhs` by partial-pivoted elimination, nudging exactly zero
/// pivots to `floor` so that near-singular shifted systems still produce a
/// usable inverse-iteration direction.
fn solve_nudged(a: &CMatrix, rhs: &[Complex], floor: f64) -> Vec<Complex> {
    let n = a.rows();
    let mut m = a.clone();
    let mut x = rhs.to_vec();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[(i, k)].norm().total_cmp(&m[(j, k)].norm()))
            .unwrap_or(k);
        m.swap_rows(k, p);
        x.swap(k, p);
        if m[(k, k)].norm() < floor {
            m[(k, k)] = Complex::new(floor, 0.0);
        }
        let piv = m[(k, k)];
        for i in k + 1..n {
            let f = m[(i, k)] / piv;
            for j in k..n {
                let mkj = m[(k, j)];
                m[(i, j)] -= f * mkj;
            }
            let xk = x[k];
            x[i] -= f * xk;
        }
    }
    for k in (0..n).rev() {
        let mut acc = x[k];
        for j in k + 1..n {
            acc -= m[(k, j)] * x[j];
        }
        x[k] = acc / m[(k, k)];
    }
    x
}

fn rayleigh(m: &CMatrix, v: &[Complex]) -> Complex {
    let mv = m.apply(v).expect("3-vector");
    inner(v, &mv) / inner(v, v)
}

fn eigen_residual(m: &CMatrix, lambda: Complex, v: &[Complex]) -> f64 {
    let mv = m.apply(v).expect("3-vector");
    let r: Vec<Complex> = mv.iter().zip(v).map(|(a, b)| a - lambda * b).collect();
    vec_norm(&r) / vec_norm(v)
}

/// Eigenpairs of a simple eigenvalue: cross product of two rows of
/// `M - λI` as the starting vector, then one inverse-iteration step and a
/// Rayleigh-quotient update. Further steps run only while the residual is
/// above `1e-12·|M|`.
fn simple_pair(m: &CMatrix, lambda0: Complex, scale: f64) -> EigenPair {
    let a = shifted(m, lambda0);
    let rows: Vec<&[Complex]> = (0..3).map(|i| a.row(i)).collect();
    let mut v = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| cross(rows[i], rows[j]))
        .max_by(|x, y| vec_norm(x).total_cmp(&vec_norm(y)))
        .expect("three candidates");
    if vec_norm(&v) <= 1e-300 {
        v = nullspace_scaled(&a, 1e-6, scale.max(1e-300))
            .into_iter()
            .next()
            .unwrap_or_else(|| unit_vector(3, 0));
    }
    let mut lambda = lambda0;
    let floor = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
    for _ in 0..4 {
        let x = solve_nudged(&shifted(m, lambda), &v, floor);
        if x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) && vec_norm(&x) > 0.0 {
            let n = vec_norm(&x);
            v = x.into_iter().map(|z| z / n).collect();
        }
        lambda = rayleigh(m, &v);
        if eigen_residual(m, lambda, &v) <= 1e-12 * scale {
            break;
        }
    }
    EigenPair {
        value: lambda,
        vector: normalize_phase(&v),
    }
}

/// Eigenpairs of a 3×3 matrix: closed-form characteristic roots, clustered
/// by distance `1e-5·|M|`, then polished.
///
/// Clustered roots are replaced by their mean (the cluster sum is the
/// corresponding share of the trace, so the mean is accurate even when the
/// individual roots are not) and the eigenvectors come from the kernel of
/// `M - λI`.
pub fn eigen3(m: &CMatrix) -> Result<Eigen3> {
    if m.shape() != (3, 3) {
        return Err(LinalgError::Shape {
            op: "eigen3",
            left: m.shape(),
            right: (3, 3),
        });
    }
    let scale = m.max_abs();
    if scale == 0.0 {
        return Ok(Eigen3 {
            pairs: (0..3)
                .map(|k| EigenPair {
                    value: Complex::new(0.0, 0.0),
                    vector: unit_vector(3, k),
                })
                .collect(),
            defective: false,
        });
    }
    let roots = cubic_eigenvalues(m);
    let cluster_tol = 1e-5 * scale;
    let mut clusters: Vec<Vec<Complex>> = Vec::new();
    for r in roots {
        match clusters
            .iter_mut()
            .find(|c| c.iter().any(|z| (z - r).norm() <= cluster_tol))
        {
            Some(c) => c.push(r),
            None => clusters.push(vec![r]),
        }
    }
    let mut pairs = Vec::with_capacity(3);
    let mut defective = false;
    for cl in clusters {
        if cl.len() == 1 {
            pairs.push(simple_pair(m, cl[0], scale));
            continue;
        }
        let mean = cl.iter().sum::<Complex>() / cl.len() as f64;
        let kernel = nullspace_scaled(&shifted(m, mean), 1e-7, scale);
        if kernel.is_empty() {
            defective = true;
            let p = simple_pair(m, mean, scale);
            for _ in 0..cl.len() {
                pairs.push(p.clone());
            }
            continue;
        }
        if kernel.len() < cl.len() {
            defective = true;
        }
        for k in 0..cl.len() {
            let v = &kernel[k.min(kernel.len() - 1)];
            let value = if cl.len() == 3 { mean } else { rayleigh(m, v) };
            pairs.push(EigenPair {
                value,
                vector: normalize_phase(v),
            });
        }
        // A multiplicity-2 cluster keeps one shared value so the cluster is
        // reported as a repeated eigenvalue.
        let n = pairs.len();
        let shared = pairs[n - cl.len()..]
            .iter()
            .map(|p| p.value)
            .sum::<Complex>()
            / cl.len() as f64;
        for p in &mut pairs[n - cl.len()..] {
            p.value = shared;
        }
    }
    pairs.sort_by_key(|p| order_key(p.value));
    Ok(Eigen3 { pairs, defective })
}
