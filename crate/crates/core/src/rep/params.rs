//! Parameters of the representation: the one-parameter 3×3 family and
//! the general block data `(A, B, C)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::RepError;
use crate::linalg::{frobenius_distance, orthonormalize, CMatrix, Complex};

/// Which primitive cube root of unity plays the role of `β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BetaChoice {
    /// `e^(2πi/3) = -1/2 + (√3/2)i`.
    #[default]
    Plus,
    /// The conjugate root `-1/2 - (√3/2)i`.
    Minus,
}

impl BetaChoice {
    pub const BOTH: [BetaChoice; 2] = [BetaChoice::Plus, BetaChoice::Minus];

    pub fn value(self) -> Complex {
        let im = 3f64.sqrt() / 2.0;
        match self {
            BetaChoice::Plus => Complex::new(-0.5, im),
            BetaChoice::Minus => Complex::new(-0.5, -im),
        }
    }

    pub fn conjugate(self) -> Self {
        match self {
            BetaChoice::Plus => BetaChoice::Minus,
            BetaChoice::Minus => BetaChoice::Plus,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BetaChoice::Plus => "plus",
            BetaChoice::Minus => "minus",
        }
    }
}

impl std::str::FromStr for BetaChoice {
    type Err = RepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plus" | "+" => Ok(BetaChoice::Plus),
            "minus" | "-" => Ok(BetaChoice::Minus),
            other => Err(RepError::Domain(format!("unknown beta choice {other:?}"))),
        }
    }
}

/// The 3×3 specialization `n = m = 1`, `A = 1/2`, `B = √(1/4 - C²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ARSpecialization {
    c: f64,
    beta_choice: BetaChoice,
    #[serde(serialize_with = "crate::linalg::serialize_complex")]
    beta: Complex,
    b: f64,
    allow_degenerate: bool,
}

impl ARSpecialization {
    /// Requires `-1/2 < c < 1/2` and `c != 0`.
    pub fn new(c: f64, beta: BetaChoice) -> Result<Self, RepError> {
        Self::build(c, beta, false)
    }

    /// Like [`ARSpecialization::new`] but also admits `c = 0`, where the
    /// restriction to `P3` collapses to scalars.
    pub fn with_degenerate(c: f64, beta: BetaChoice) -> Result<Self, RepError> {
        Self::build(c, beta, true)
    }

    fn build(c: f64, beta_choice: BetaChoice, allow_degenerate: bool) -> Result<Self, RepError> {
        if !c.is_finite() || c <= -0.5 || c >= 0.5 {
            return Err(RepError::Domain(format!(
                "C out of range: {c} (need -1/2 < C < 1/2)"
            )));
        }
        if c == 0.0 && !allow_degenerate {
            return Err(RepError::Domain(
                "C = 0 is degenerate (pass the degenerate flag to allow it)".into(),
            ));
        }
        Ok(Self {
            c,
            beta_choice,
            beta: beta_choice.value(),
            b: (0.25 - c * c).sqrt(),
            allow_degenerate,
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `√(1/4 - c²)`, positive branch.
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn beta(&self) -> Complex {
        self.beta
    }

    pub fn beta_choice(&self) -> BetaChoice {
        self.beta_choice
    }

    pub fn allow_degenerate(&self) -> bool {
        self.allow_degenerate
    }

    pub fn is_degenerate(&self) -> bool {
        self.c == 0.0
    }

    /// The same point with the conjugate root of unity.
    pub fn conjugate_beta(&self) -> Self {
        Self {
            beta_choice: self.beta_choice.conjugate(),
            beta: self.beta_choice.conjugate().value(),
            ..*self
        }
    }

    /// The equivalent general block data `A = [1/2]`, `B = [b]`, `C = [c]`.
    pub fn general_params(&self) -> Result<GeneralARParams, RepError> {
        let one = |x: f64| CMatrix::diag(&[Complex::new(x, 0.0)]);
        GeneralARParams::new(one(0.5), one(self.b), one(self.c))
    }
}

/// Tolerance for the block constraints, relative to `max(1, ‖A‖_F)`.
pub const GENERAL_TOL: f64 = 1e-10;

/// Block data for the `(2n+m)`-dimensional construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralARParams {
    n: usize,
    m: usize,
    a: CMatrix,
    b: CMatrix,
    c: CMatrix,
}

impl GeneralARParams {
    /// Validates shapes, `1 ≤ m ≤ n`, `A = A*` and `BB* + CC* = A - A²`.
    pub fn new(a: CMatrix, b: CMatrix, c: CMatrix) -> Result<Self, RepError> {
        let n = a.rows();
        let m = c.cols();
        let invalid = |constraint: &str, residual: f64| RepError::Constraint {
            constraint: constraint.to_string(),
            residual,
        };
        if a.shape() != (n, n) || b.shape() != (n, n) || c.rows() != n {
            return Err(RepError::Domain(format!(
                "block shapes A {:?}, B {:?}, C {:?} are inconsistent",
                a.shape(),
                b.shape(),
                c.shape()
            )));
        }
        if !(1 <= m && m <= n) {
            return Err(invalid("1 <= m <= n", m as f64));
        }
        let scale = a.frobenius_norm().max(1.0);
        let herm = frobenius_distance(&a, &a.adjoint())?;
        if herm > GENERAL_TOL * scale {
            return Err(invalid("A = A*", herm));
        }
        let lhs = b.mul(&b.adjoint())?.add(&c.mul(&c.adjoint())?)?;
        let rhs = a.sub(&a.mul(&a)?)?;
        let resid = frobenius_distance(&lhs, &rhs)?;
        if resid > GENERAL_TOL * scale {
            return Err(invalid("BB* + CC* = A - A^2", resid));
        }
        Ok(Self { n, m, a, b, c })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    pub fn c(&self) -> &CMatrix {
        &self.c
    }

    pub fn dim(&self) -> usize {
        2 * self.n + self.m
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re, im)
}

/// Haar-ish random unitary from Gram-Schmidt on a complex Gaussian matrix.
/// Rows of the result are orthonormal.
fn random_unitary(k: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    loop {
        let rows: Vec<Vec<Complex>> = (0..k)
            .map(|_| (0..k).map(|_| gaussian(rng)).collect())
            .collect();
        let q = orthonormalize(&rows, 1e-6);
        if q.len() == k {
            return CMatrix::from_rows(&q).expect("finite square");
        }
    }
}

/// Seed-deterministic block data satisfying every constraint.
///
/// `A = W diag(d) W*` with `d` in `(0.05, 0.95)`, `L = W diag(√(d - d²))`
/// so that `LL* = A - A²`, and `[B | C] = L·Z` for an `n × (n+m)` matrix
/// `Z` with orthonormal rows.
pub fn random_valid_params(n: usize, m: usize, seed: u64) -> Result<GeneralARParams, RepError> {
    if !(1 <= m && m <= n && n <= 4) {
        return Err(RepError::Domain(format!(
            "need 1 <= m <= n <= 4, got n = {n}, m = {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = random_unitary(n, &mut rng);
    let d: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..0.95)).collect();
    let diag = |f: &dyn Fn(f64) -> f64| {
        CMatrix::diag(
            &d.iter()
                .map(|&x| Complex::new(f(x), 0.0))
                .collect::<Vec<_>>(),
        )
    };
    let a = w.mul(&diag(&|x| x))?.mul(&w.adjoint())?;
    // Hermitian part only; removes rounding asymmetry.
    let a = a.add(&a.adjoint())?.scale_real(0.5);
    let l = w.mul(&diag(&|x| (x - x * x).sqrt()))?;
    let z = random_unitary(n + m, &mut rng).block(0, 0, n, n + m);
    let bc = l.mul(&z)?;
    let b = bc.block(0, 0, n, n);
    let c = bc.block(0, n, n, m);
    GeneralARParams::new(a, b, c)
}
