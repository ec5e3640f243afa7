//! Truncated Laurent q-expansions over exact rationals.
//!
//! A [`QSeries`] stores the coefficients of `q^v, ..., q^P` of a Laurent
//! series, where `v` is the valuation and `P` the precision. Exponents below
//! `v` are exactly zero; exponents above `P` are unknown, never implicitly
//! zero. Every operation propagates precision pessimistically, so a reported
//! coefficient is always the exact coefficient of the untruncated inputs.
//! For a product this means `P = min(Pa + vb, Pb + va)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::complex::Complex64;
use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

/// The rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn rati(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q` or `p` in base 10 (the same shape [`rational_string`] emits).
pub fn parse_rational(s: &str) -> Result<Rational, QSeriesError> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| QSeriesError::ParseRational(s.to_owned()))
}

/// Formats a rational as `p/q`, or just `p` when the denominator is one.
pub fn rational_string(r: &Rational) -> String {
    r.to_string()
}

/// Nearest f64 to an exact rational.
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Error, PartialEq)]
pub enum QSeriesError {
    #[error("leading coefficient is zero; the series has no inverse at this precision")]
    ZeroLeadingCoefficient,
    #[error("Bernoulli index {0} is odd; only even indices (and 1) are meaningful here")]
    OddIndex(u32),
    #[error("evaluation point with |q| = {modulus} lies outside the open unit disk punctured for principal parts")]
    DivergentEvaluation { modulus: f64 },
    #[error("cannot parse {0:?} as a rational p/q")]
    ParseRational(String),
    #[error("coefficient list of length {len} does not match exponent range {valuation}..={precision}")]
    BadCoefficientRange { valuation: i64, precision: i64, len: usize },
}

/// A Laurent series truncation: exact coefficients for `q^v ..= q^P`.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    valuation: i64,
    coeffs: Vec<Rational>,
}

impl QSeries {
    /// Series with the given coefficients for `q^valuation` upward. The
    /// precision is `valuation + coeffs.len() - 1`. Leading zeros are
    /// trimmed away (raising the valuation, never the precision).
    pub fn new(valuation: i64, coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one known coefficient");
        QSeries { valuation, coeffs }.trim()
    }

    /// The zero series, known through `q^precision`.
    pub fn zero(precision: i64) -> Self {
        QSeries { valuation: precision, coeffs: vec![Rational::zero()] }
    }

    /// The constant one, known through `q^precision` (`precision >= 0`).
    pub fn one(precision: i64) -> Self {
        Self::constant(Rational::one(), precision)
    }

    /// A constant series known through `q^precision`.
    pub fn constant(c: Rational, precision: i64) -> Self {
        assert!(precision >= 0);
        let mut coeffs = vec![Rational::zero(); precision as usize + 1];
        coeffs[0] = c;
        QSeries { valuation: 0, coeffs }.trim()
    }

    /// `c * q^exp`, known through `q^precision`.
    pub fn monomial(exp: i64, c: Rational, precision: i64) -> Self {
        assert!(precision >= exp);
        let mut coeffs = vec![Rational::zero(); (precision - exp) as usize + 1];
        coeffs[0] = c;
        QSeries { valuation: exp, coeffs }.trim()
    }

    /// Builds a series from a coefficient rule on `valuation..=precision`.
    pub fn from_fn(valuation: i64, precision: i64, f: impl FnMut(i64) -> Rational) -> Self {
        assert!(precision >= valuation);
        let coeffs = (valuation..=precision).map(f).collect();
        QSeries { valuation, coeffs }.trim()
    }

    fn trim(mut self) -> Self {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        let lead = lead.min(self.coeffs.len() - 1);
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.valuation += lead as i64;
        }
        self
    }

    /// Lowest stored exponent. Coefficients below it are exactly zero.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    /// Highest exponent whose coefficient is known exactly.
    pub fn precision(&self) -> i64 {
        self.valuation + self.coeffs.len() as i64 - 1
    }

    /// Stored coefficients, lowest exponent first.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `q^exp`: zero below the valuation, `None` beyond the
    /// precision (unknown).
    pub fn coeff(&self, exp: i64) -> Option<Rational> {
        if exp > self.precision() {
            None
        } else if exp < self.valuation {
            Some(Rational::zero())
        } else {
            Some(self.coeffs[(exp - self.valuation) as usize].clone())
        }
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero_through_precision(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The same series with precision lowered to `precision`.
    pub fn truncated(&self, precision: i64) -> Self {
        assert!(precision <= self.precision(), "cannot raise precision by truncation");
        if precision < self.valuation {
            return QSeries::zero(precision);
        }
        let len = (precision - self.valuation) as usize + 1;
        QSeries { valuation: self.valuation, coeffs: self.coeffs[..len].to_vec() }.trim()
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return QSeries::zero(self.precision());
        }
        QSeries {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// `self^e` by repeated squaring. `e = 0` gives the constant one with the
    /// relative precision of `self`, so products with siblings of `self` lose
    /// nothing.
    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return QSeries::one(self.precision() - self.valuation);
        }
        let mut base = self.clone();
        let mut exp = e;
        let mut acc: Option<QSeries> = None;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => &a * &base,
                });
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc.expect("e > 0")
    }

    /// Multiplicative inverse. Requires a nonzero coefficient at the
    /// valuation; the result has valuation `-v` and precision `P - 2v`, which
    /// is exactly what makes `self * inv` equal one through the common range.
    pub fn inverse(&self) -> Result<Self, QSeriesError> {
        let u0 = &self.coeffs[0];
        if u0.is_zero() {
            return Err(QSeriesError::ZeroLeadingCoefficient);
        }
        let inv0 = u0.recip();
        let mut w = Vec::with_capacity(self.coeffs.len());
        w.push(inv0.clone());
        for t in 1..self.coeffs.len() {
            let mut acc = Rational::zero();
            for i in 1..=t {
                if !self.coeffs[i].is_zero() {
                    acc += &self.coeffs[i] * &w[t - i];
                }
            }
            w.push(-(acc * &inv0));
        }
        Ok(QSeries { valuation: -self.valuation, coeffs: w })
    }

    /// Horner evaluation of the truncation at a complex point `q`, together
    /// with a tail-bound heuristic `max|c| * |q|^(P+1) / (1 - |q|)` for the
    /// unknown coefficients. Requires `|q| < 1`, and `q != 0` when the series
    /// has a principal part.
    pub fn eval_numeric(&self, q: Complex64) -> Result<SeriesEval, QSeriesError> {
        let modulus = q.norm();
        if modulus >= 1.0 || (modulus == 0.0 && self.valuation < 0) {
            return Err(QSeriesError::DivergentEvaluation { modulus });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        let mut maxabs = 0.0f64;
        for c in self.coeffs.iter().rev() {
            let cf = rational_to_f64(c);
            maxabs = maxabs.max(cf.abs());
            acc = acc * q + cf;
        }
        let value = acc * q.powi(self.valuation as i32);
        let tail_bound = maxabs * modulus.powi(self.precision() as i32 + 1) / (1.0 - modulus);
        Ok(SeriesEval { value, tail_bound })
    }
}

/// Result of a numeric series evaluation.
#[derive(Debug, Clone, Copy)]
pub struct SeriesEval {
    pub value: Complex64,
    /// Heuristic bound on the contribution of coefficients beyond the
    /// precision; reported digits of `value` are meaningful above it only.
    pub tail_bound: f64,
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries[{}..={}](", self.valuation, self.precision())?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let v = self.valuation.min(rhs.valuation);
        let p = self.precision().min(rhs.precision());
        let coeffs = (v..=p)
            .map(|e| {
                let a = self.coeff(e).expect("e <= precision");
                let b = rhs.coeff(e).expect("e <= precision");
                a + b
            })
            .collect();
        QSeries { valuation: v, coeffs }.trim()
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self + &(-rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let v = self.valuation + rhs.valuation;
        let len = self.coeffs.len().min(rhs.coeffs.len());
        let mut out = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(len - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries { valuation: v, coeffs: out }.trim()
    }
}

/// The Bernoulli number `B_k` (convention `B_1 = -1/2`), by the defining
/// recurrence `sum_j C(k+1, j) B_j = 0`. Odd indices above one are rejected
/// rather than silently returning zero.
pub fn bernoulli(k: u32) -> Result<Rational, QSeriesError> {
    if k % 2 == 1 && k > 1 {
        return Err(QSeriesError::OddIndex(k));
    }
    let mut table = bernoulli_table(k);
    Ok(table.pop().expect("table holds B_0..=B_k"))
}

fn bernoulli_table(kmax: u32) -> Vec<Rational> {
    let mut b = Vec::with_capacity(kmax as usize + 1);
    b.push(Rational::one());
    for k in 1..=kmax as usize {
        let mut acc = Rational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                acc += bj * Rational::from_integer(binom.clone());
            }
            binom = binom * (k + 1 - j) / (j + 1);
        }
        let head = Rational::from_integer(BigInt::from(k as u64 + 1));
        b.push(-(acc / head));
    }
    b
}

#[derive(Serialize, Deserialize)]
struct QSeriesRepr {
    valuation: i64,
    precision: i64,
    coeffs: Vec<String>,
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        QSeriesRepr {
            valuation: self.valuation,
            precision: self.precision(),
            coeffs: self.coeffs.iter().map(rational_string).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = QSeriesRepr::deserialize(deserializer)?;
        let expected = repr
            .precision
            .checked_sub(repr.valuation)
            .and_then(|d| d.checked_add(1))
            .filter(|&d| d > 0)
            .ok_or_else(|| D::Error::custom("precision must be >= valuation"))?;
        if repr.coeffs.len() as i64 != expected {
            return Err(D::Error::custom(
                QSeriesError::BadCoefficientRange {
                    valuation: repr.valuation,
                    precision: repr.precision,
                    len: repr.coeffs.len(),
                }
                .to_string(),
            ));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| D::Error::custom(e.to_string()))?;
        Ok(QSeries::new(repr.valuation, coeffs))
    }
}
