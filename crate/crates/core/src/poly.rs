//! Exact univariate integer polynomials and real-root isolation.
//!
//! Root counting runs entirely over the integers and rationals: the Sturm
//! chain is built with sign-preserving pseudo-remainders and evaluated at
//! rational points through the homogenized form `Σ aᵢ pⁱ q^(n-i)`, which
//! has the sign of `f(p/q)` for `q > 0`. Floating point appears only in the
//! reported approximations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("divisor is the zero polynomial")]
    DivisionByZero,
    #[error("division is not exact over the integers; remainder {remainder:?}")]
    NotDivisible { remainder: Vec<BigRational> },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("empty interval ({lo}, {hi}]")]
    EmptyInterval { lo: String, hi: String },
    #[error("precision must be positive and finite, got {0}")]
    BadPrecision(f64),
}

/// Integer-coefficient polynomial, constant term first. The zero
/// polynomial has no coefficients; otherwise the last coefficient is
/// nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let sign = if a.is_negative() { "-" } else { "+" };
            if first {
                if a.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = a.abs();
            match k {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "C^{k}")?,
                _ => write!(f, "{mag}*C^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    /// Coefficients as decimal strings, constant term first.
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Builds a polynomial from `(degree, coefficient)` terms.
    pub fn from_terms(terms: &[(usize, i64)]) -> Self {
        let deg = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for &(k, c) in terms {
            coeffs[k] += c;
        }
        Self::new(coeffs)
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// The monomial `C`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `C^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// True when every odd-degree coefficient vanishes.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero())
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `a·p + b·q`.
    pub fn linear_combination(a: &BigInt, p: &Self, b: &BigInt, q: &Self) -> Self {
        p.scale(a).add(&q.scale(b))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// Gcd of the coefficients, always non-negative.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content, keeping the sign of the leading coefficient.
    pub fn primitive_part(&self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Exact value at a rational point (Horner).
    pub fn evaluate(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * x + BigRational::from_integer(c.clone())
            })
    }

    pub fn evaluate_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Sign of the value at a rational point, computed in integers.
    pub fn sign_at(&self, x: &BigRational) -> i8 {
        if self.is_zero() {
            return 0;
        }
        // x = p/q with q > 0: q^n f(p/q) = Σ aᵢ pⁱ q^(n-i), by Horner from
        // the top coefficient.
        let p = x.numer();
        let q = x.denom();
        let mut qpow = BigInt::one();
        let mut coeffs = self.coeffs.iter().rev();
        let mut total = coeffs.next().expect("nonzero").clone();
        for c in coeffs {
            qpow *= q;
            total = total * p + c * &qpow;
        }
        match total.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    /// Long division over the rationals.
    pub fn div_rem_rational(
        &self,
        divisor: &Self,
    ) -> Result<(Vec<BigRational>, Vec<BigRational>), PolyError> {
        let dl = divisor.leading().ok_or(PolyError::DivisionByZero)?.clone();
        let dd = divisor.coeffs.len() - 1;
        let mut rem: Vec<BigRational> = self
            .coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        if rem.len() <= dd {
            return Ok((Vec::new(), rem));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        let dl = BigRational::from_integer(dl);
        for k in (0..quot.len()).rev() {
            let t = &rem[k + dd] / &dl;
            if !t.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &t * BigRational::from_integer(dc.clone());
                }
            }
            quot[k] = t;
        }
        rem.truncate(dd);
        while rem.last().is_some_and(|c| c.is_zero()) {
            rem.pop();
        }
        Ok((quot, rem))
    }

    /// Quotient of an exact division over the integers.
    pub fn divide_exact(&self, divisor: &Self) -> Result<Self, PolyError> {
        let (quot, rem) = self.div_rem_rational(divisor)?;
        if !rem.is_empty() || quot.iter().any(|c| !c.is_integer()) {
            return Err(PolyError::NotDivisible { remainder: rem });
        }
        Ok(Self::new(
            quot.into_iter().map(|c| c.to_integer()).collect(),
        ))
    }

    /// Pseudo-remainder with a positive multiplier, so the result has the
    /// sign of a genuine rational remainder.
    fn signed_prem(&self, divisor: &Self) -> Self {
        let dl = divisor.leading().expect("nonzero divisor").clone();
        let dd = divisor.coeffs.len() - 1;
        let lc_abs = dl.abs();
        let lc_sign = if dl.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let lead = r.leading().expect("nonzero").clone();
            let mut shifted = vec![BigInt::zero(); rd - dd];
            shifted.extend(divisor.coeffs.iter().map(|c| c * &lead * &lc_sign));
            r = r.scale(&lc_abs).sub(&Self::new(shifted));
        }
        r
    }

    /// Primitive gcd via pseudo-remainder sequences.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.signed_prem(&b).primitive_part();
            a = b;
            b = r;
        }
        if a.leading().is_some_and(|c| c.is_negative()) {
            a = a.neg();
        }
        a
    }

    /// `p / gcd(p, p')`: same distinct roots, all simple.
    pub fn square_free(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.primitive_part();
        }
        self.primitive_part()
            .divide_exact(&g)
            .expect("gcd divides its argument")
    }

    /// Power of two `B` with every real root in `(-B, B)`. Bisection from
    /// `±B` then lands exactly on dyadic rational roots.
    pub fn cauchy_bound(&self) -> BigInt {
        let Some(lead) = self.leading() else {
            return BigInt::one();
        };
        let lead = lead.abs();
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        let bound = BigInt::one() + max.div_ceil(&lead);
        let mut pow = BigInt::from(2);
        while pow <= bound {
            pow *= 2;
        }
        pow
    }
}

/// Sturm chain of the square-free part of a polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<IntPolynomial>,
}

impl SturmChain {
    pub fn new(p: &IntPolynomial) -> Result<Self, PolyError> {
        if p.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let f0 = p.square_free();
        let mut chain = vec![f0.clone()];
        let f1 = f0.derivative();
        if !f1.is_zero() {
            chain.push(f1.primitive_part());
            loop {
                let n = chain.len();
                let r = chain[n - 2].signed_prem(&chain[n - 1]);
                if r.is_zero() {
                    break;
                }
                chain.push(r.neg().primitive_part());
            }
        }
        Ok(Self { chain })
    }

    /// The square-free polynomial the chain starts from.
    pub fn base(&self) -> &IntPolynomial {
        &self.chain[0]
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

/// Number of distinct real roots of `p` in `(lo, hi]`.
pub fn sturm_count(
    p: &IntPolynomial,
    lo: &BigRational,
    hi: &BigRational,
) -> Result<usize, PolyError> {
    if lo >= hi {
        return Err(PolyError::EmptyInterval {
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    Ok(SturmChain::new(p)?.count(lo, hi))
}

/// An isolating interval for one real root.
#[derive(Debug, Clone, PartialEq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    /// Midpoint approximation, or the exact value when known.
    pub refined: f64,
    /// Set when bisection hit the root exactly.
    pub exact: Option<BigRational>,
}

impl RootInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo < x && x < &self.hi
    }
}

impl Serialize for RootInterval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RootInterval", 5)?;
        st.serialize_field("value", &self.refined)?;
        st.serialize_field("lo", &rational_to_f64(&self.lo))?;
        st.serialize_field("hi", &rational_to_f64(&self.hi))?;
        st.serialize_field("lo_exact", &self.lo.to_string())?;
        st.serialize_field("hi_exact", &self.hi.to_string())?;
        st.end()
    }
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

fn precision_to_rational(precision: f64) -> Result<BigRational, PolyError> {
    if !(precision.is_finite() && precision > 0.0) {
        return Err(PolyError::BadPrecision(precision));
    }
    BigRational::from_float(precision).ok_or(PolyError::BadPrecision(precision))
}

/// Isolates every distinct real root of `p` in `(lo, hi]` and refines each
/// isolating interval by bisection to width at most `precision`.
///
/// Intervals come back sorted and pairwise disjoint. For a root hit exactly
/// (a rational root) the interval is centred on it; in every case the
/// square-free part has opposite signs at the two endpoints.
pub fn isolate_real_roots(
    p: &IntPolynomial,
    lo: &BigRational,
    hi: &BigRational,
    precision: f64,
) -> Result<Vec<RootInterval>, PolyError> {
    if lo >= hi {
        return Err(PolyError::EmptyInterval {
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    let eps = precision_to_rational(precision)?;
    let chain = SturmChain::new(p)?;
    let mut pending = vec![(lo.clone(), hi.clone())];
    let mut isolated = Vec::new();
    while let Some((a, b)) = pending.pop() {
        match chain.count(&a, &b) {
            0 => {}
            1 => isolated.push((a, b)),
            _ => {
                let m = (&a + &b) * half();
                pending.push((a, m.clone()));
                pending.push((m, b));
            }
        }
    }
    let mut out: Vec<RootInterval> = isolated
        .into_iter()
        .map(|(a, b)| refine(&chain, a, b, &eps))
        .collect();
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    Ok(out)
}

/// Isolates every real root of `p`.
pub fn isolate_all_real_roots(
    p: &IntPolynomial,
    precision: f64,
) -> Result<Vec<RootInterval>, PolyError> {
    let b = BigRational::from_integer(p.cauchy_bound());
    isolate_real_roots(p, &-b.clone(), &b, precision)
}

fn refine(
    chain: &SturmChain,
    mut a: BigRational,
    mut b: BigRational,
    eps: &BigRational,
) -> RootInterval {
    let f = chain.base();
    if f.sign_at(&b) == 0 {
        return around_exact(chain, b, eps);
    }
    while &b - &a > *eps {
        let m = (&a + &b) * half();
        if f.sign_at(&m) == 0 {
            return around_exact(chain, m, eps);
        }
        if chain.count(&a, &m) == 1 {
            b = m;
        } else {
            a = m;
        }
    }
    // (a, b] holds one root and f(b) != 0; a itself may be a neighbouring
    // root, in which case nudge it inwards.
    while f.sign_at(&a) == 0 || chain.count(&a, &b) != 1 {
        a = (&a + &b) * half();
    }
    let refined = rational_to_f64(&((&a + &b) * half()));
    RootInterval {
        lo: a,
        hi: b,
        refined,
        exact: None,
    }
}

fn around_exact(chain: &SturmChain, root: BigRational, eps: &BigRational) -> RootInterval {
    let f = chain.base();
    let mut w = eps * half();
    loop {
        let lo = &root - &w;
        let hi = &root + &w;
        if f.sign_at(&lo) != 0 && f.sign_at(&hi) != 0 && chain.count(&lo, &hi) == 1 {
            return RootInterval {
                lo,
                hi,
                refined: rational_to_f64(&root),
                exact: Some(root),
            };
        }
        w *= half();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn evaluate_examples() {
        let p = IntPolynomial::from_i64(&[-2, 0, 1]);
        assert_eq!(p.evaluate(&r(0, 1)), r(-2, 1));
        assert_eq!(p.evaluate(&r(3, 2)), r(1, 4));
        assert_eq!(p.sign_at(&r(3, 2)), 1);
        assert_eq!(p.sign_at(&r(-1, 1)), -1);
    }

    #[test]
    fn zero_normalization() {
        let z = IntPolynomial::from_i64(&[0, 0, 0]);
        assert!(z.is_zero());
        assert_eq!(z, IntPolynomial::zero());
        assert_eq!(z.degree(), None);
        let p = IntPolynomial::from_i64(&[1, 2, 0]);
        assert_eq!(p.degree(), Some(1));
    }

    #[test]
    fn linear_combination_examples() {
        let p = IntPolynomial::from_i64(&[3, -1, 4]);
        let q = IntPolynomial::from_i64(&[1, 5]);
        let one = BigInt::one();
        assert!(IntPolynomial::linear_combination(&one, &p, &-one.clone(), &p).is_zero());
        assert_eq!(
            IntPolynomial::linear_combination(&BigInt::zero(), &p, &one, &q),
            q
        );
    }

    #[test]
    fn divide_exact_examples() {
        let p = IntPolynomial::from_i64(&[-1, 0, 1]);
        let q = IntPolynomial::from_i64(&[-1, 1]);
        assert_eq!(
            p.divide_exact(&q).unwrap(),
            IntPolynomial::from_i64(&[1, 1])
        );
        let p2 = IntPolynomial::from_i64(&[1, 0, 1]);
        match p2.divide_exact(&q) {
            Err(PolyError::NotDivisible { remainder }) => assert_eq!(remainder, vec![r(2, 1)]),
            other => panic!("expected non-divisibility, got {other:?}"),
        }
        // rational but not integral quotient
        let p3 = IntPolynomial::from_i64(&[0, 1]);
        let q3 = IntPolynomial::from_i64(&[0, 2]);
        assert!(p3.divide_exact(&q3).is_err());
        assert!(matches!(
            p.divide_exact(&IntPolynomial::zero()),
            Err(PolyError::DivisionByZero)
        ));
    }

    #[test]
    fn square_free_and_gcd() {
        // (x-1)^2 (x+2)
        let a = IntPolynomial::from_i64(&[-1, 1]);
        let b = IntPolynomial::from_i64(&[2, 1]);
        let p = a.mul(&a).mul(&b);
        assert_eq!(p.gcd(&p.derivative()), a);
        assert_eq!(p.square_free(), a.mul(&b));
    }

    #[test]
    fn sturm_examples() {
        let p = IntPolynomial::from_i64(&[-2, 0, 1]);
        assert_eq!(sturm_count(&p, &r(0, 1), &r(2, 1)).unwrap(), 1);
        assert_eq!(sturm_count(&p, &r(-2, 1), &r(2, 1)).unwrap(), 2);
        let q = IntPolynomial::from_i64(&[1, 0, 1]);
        assert_eq!(sturm_count(&q, &r(-10, 1), &r(10, 1)).unwrap(), 0);
        // half-open: root at the right end counts, at the left end does not
        let lin = IntPolynomial::from_i64(&[-1, 2]);
        assert_eq!(sturm_count(&lin, &r(0, 1), &r(1, 2)).unwrap(), 1);
        assert_eq!(sturm_count(&lin, &r(1, 2), &r(1, 1)).unwrap(), 0);
        assert!(sturm_count(&p, &r(1, 1), &r(1, 1)).is_err());
        assert!(matches!(
            sturm_count(&IntPolynomial::zero(), &r(0, 1), &r(1, 1)),
            Err(PolyError::ZeroPolynomial)
        ));
    }

    #[test]
    fn isolate_sqrt2() {
        let p = IntPolynomial::from_i64(&[-2, 0, 1]);
        let roots = isolate_real_roots(&p, &r(0, 1), &r(2, 1), 1e-12).unwrap();
        assert_eq!(roots.len(), 1);
        let root = &roots[0];
        assert!(root.width() <= BigRational::from_float(1e-12).unwrap());
        assert!((root.refined - 2f64.sqrt()).abs() < 1e-12);
        assert!(p.sign_at(&root.lo) * p.sign_at(&root.hi) < 0);
    }

    #[test]
    fn isolate_rational_roots_exactly() {
        // x (2x - 1)(2x + 1) with a double root at 0
        let p = IntPolynomial::from_i64(&[0, 0, -1, 0, 4]);
        let roots = isolate_all_real_roots(&p, 1e-9).unwrap();
        assert_eq!(roots.len(), 3);
        assert_eq!(roots[0].exact, Some(r(-1, 2)));
        assert_eq!(roots[1].exact, Some(r(0, 1)));
        assert_eq!(roots[2].exact, Some(r(1, 2)));
        let sf = p.square_free();
        for root in &roots {
            assert!(sf.sign_at(&root.lo) * sf.sign_at(&root.hi) < 0);
        }
    }

    #[test]
    fn bad_precision_rejected() {
        let p = IntPolynomial::from_i64(&[-2, 0, 1]);
        assert!(isolate_real_roots(&p, &r(0, 1), &r(2, 1), 0.0).is_err());
        assert!(isolate_real_roots(&p, &r(0, 1), &r(2, 1), f64::NAN).is_err());
    }

    #[test]
    fn display_and_serialize() {
        let p = IntPolynomial::from_i64(&[-1, 0, 3, 0, 1]);
        assert_eq!(p.to_string(), "C^4 + 3*C^2 - 1");
        assert!(p.is_even());
    }
}
