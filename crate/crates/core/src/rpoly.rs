//! Dense univariate polynomials over the exact rationals.
//!
//! Coefficients are stored ascending, `coeffs[i]` multiplying `x^i`, with no
//! trailing zeros; the zero polynomial is the empty vector. The JSON form is
//! a bare list of `p/q` strings in the same ascending order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::complex::Complex64;
use num::{BigInt, Integer, One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::qseries::{parse_rational, rational_string, rational_to_f64, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct RPoly {
    coeffs: Vec<Rational>,
}

impl RPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RPoly { coeffs }
    }

    pub fn zero() -> Self {
        RPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RPoly::constant(Rational::one())
    }

    pub fn x() -> Self {
        RPoly { coeffs: vec![Rational::zero(), Rational::one()] }
    }

    pub fn constant(c: Rational) -> Self {
        RPoly::new(vec![c])
    }

    /// Polynomial with the given integer coefficients, ascending degree.
    pub fn from_ints(ints: &[i64]) -> Self {
        RPoly::new(ints.iter().map(|&n| Rational::from_integer(BigInt::from(n))).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rational_to_f64(c);
        }
        acc
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rational_to_f64(c);
        }
        acc
    }

    pub fn derivative(&self) -> RPoly {
        if self.coeffs.len() <= 1 {
            return RPoly::zero();
        }
        RPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> RPoly {
        if c.is_zero() {
            return RPoly::zero();
        }
        RPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn monic(&self) -> RPoly {
        match self.leading() {
            None => RPoly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Exact division with remainder: `self = q * div + r`, `deg r < deg div`.
    /// Panics on a zero divisor.
    pub fn divrem(&self, div: &RPoly) -> (RPoly, RPoly) {
        assert!(!div.is_zero(), "division by the zero polynomial");
        let dd = div.degree().expect("nonzero");
        if self.coeffs.len() < div.coeffs.len() {
            return (RPoly::zero(), self.clone());
        }
        let lead_inv = div.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let qlen = rem.len() - dd;
        let mut q = vec![Rational::zero(); qlen];
        for i in (0..qlen).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for j in 0..=dd {
                let t = &div.coeffs[j] * &c;
                rem[i + j] -= t;
            }
            q[i] = c;
        }
        (RPoly::new(q), RPoly::new(rem))
    }

    /// Monic greatest common divisor by Euclid's algorithm, stripping content
    /// at every step to keep coefficient growth polynomial.
    pub fn gcd(&self, other: &RPoly) -> RPoly {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.primitive_part();
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// The associate with coprime integer coefficients and a positive leading
    /// coefficient. Zero stays zero.
    pub fn primitive_part(&self) -> RPoly {
        if self.is_zero() {
            return RPoly::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut scale = Rational::new(den_lcm, num_gcd);
        if self.leading().expect("nonzero").is_negative() {
            scale = -scale;
        }
        self.scale(&scale)
    }
}

impl Add for &RPoly {
    type Output = RPoly;
    fn add(self, rhs: &RPoly) -> RPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RPoly {
    type Output = RPoly;
    fn sub(self, rhs: &RPoly) -> RPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &RPoly {
    type Output = RPoly;
    fn neg(self) -> RPoly {
        RPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &RPoly {
    type Output = RPoly;
    fn mul(self, rhs: &RPoly) -> RPoly {
        if self.is_zero() || rhs.is_zero() {
            return RPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        RPoly::new(out)
    }
}

impl fmt::Display for RPoly {
    /// Descending powers, e.g. `x^2 - 1488x + 159768`. Non-integer
    /// coefficients are parenthesized.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let coef = if mag.is_one() && i > 0 {
                String::new()
            } else if mag.denom().is_one() {
                mag.to_string()
            } else {
                format!("({})", mag)
            };
            match i {
                0 => write!(f, "{}", if coef.is_empty() { "1".into() } else { coef })?,
                1 => write!(f, "{}x", coef)?,
                _ => write!(f, "{}x^{}", coef, i)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RPoly({})", self)
    }
}

impl Serialize for RPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_zero() {
            return vec!["0".to_owned()].serialize(serializer);
        }
        self.coeffs
            .iter()
            .map(rational_string)
            .collect::<Vec<_>>()
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        let coeffs = strings
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| D::Error::custom(e.to_string()))?;
        Ok(RPoly::new(coeffs))
    }
}
