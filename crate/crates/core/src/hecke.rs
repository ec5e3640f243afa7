//! Hecke operators `T_w(n)` on q-expansions of arbitrary even weight,
//! including the negative weights where coefficients become rationals, and
//! the scaled principal-part action used to assemble Hecke polynomials.

use std::collections::BTreeMap;

use num::pow::Pow;
use num::{BigInt, One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::modforms::cusp_eigenform;
use crate::qseries::{QSeries, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HeckeError {
    #[error("series precision {have} cannot support T({n}) (needs at least {needed})")]
    InsufficientPrecision { n: i64, needed: i64, have: i64 },
    #[error("principal part is not normalized: leading coefficient must be 1")]
    BadNormalization,
    #[error("no eigenvalue available for n = {0}")]
    MissingEigenvalue(i64),
}

/// Where the eigenvalues a(n) of the shadow come from: the coefficients of
/// the unique normalized cusp form when `dim S_k = 1`, or a user-supplied
/// table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum EigenvalueSource {
    #[serde(rename = "builtin-dim1")]
    BuiltinDim1 { k: u32 },
    #[serde(rename = "list")]
    List {
        #[serde(with = "rational_map_serde")]
        values: BTreeMap<i64, Rational>,
    },
}

/// The eigenvalue a(n). Every source has a(1) = 1.
pub fn eigenvalue(src: &EigenvalueSource, n: i64) -> Result<Rational, HeckeError> {
    if n < 1 {
        return Err(HeckeError::MissingEigenvalue(n));
    }
    match src {
        EigenvalueSource::BuiltinDim1 { k } => {
            let f = cusp_eigenform(*k, n).map_err(|_| HeckeError::MissingEigenvalue(n))?;
            f.coeff(n).ok_or(HeckeError::MissingEigenvalue(n))
        }
        EigenvalueSource::List { values } => match values.get(&n) {
            Some(a) => Ok(a.clone()),
            None if n == 1 => Ok(Rational::one()),
            None => Err(HeckeError::MissingEigenvalue(n)),
        },
    }
}

fn divisors(x: i64) -> Vec<i64> {
    debug_assert!(x >= 1);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= x {
        if x % d == 0 {
            small.push(d);
            if d * d != x {
                large.push(x / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// `d^e` as a rational, for any sign of `e`.
fn int_pow(d: i64, e: i32) -> Rational {
    Rational::from_integer(BigInt::from(d)).pow(e)
}

/// The Hecke image `f | T_w(n)`, with coefficient of `q^m` equal to
/// `sum_{d | gcd(n,m), d > 0} d^{w-1} c_f(nm/d^2)` (every `d | n` when
/// `m = 0`). The result is exact through `floor(precision(f)/n)`.
pub fn hecke_apply(f: &QSeries, w: i32, n: i64) -> Result<QSeries, HeckeError> {
    assert!(w % 2 == 0, "only even weights are meaningful here");
    assert!(n >= 1);
    let vf = f.valuation();
    let out_val = if vf < 0 { vf * n } else { vf.div_euclid(n) + i64::from(vf.rem_euclid(n) != 0) };
    let out_prec = f.precision().div_euclid(n);
    if out_prec < out_val {
        return Err(HeckeError::InsufficientPrecision {
            n,
            needed: out_val * n,
            have: f.precision(),
        });
    }
    let mut coeffs = Vec::with_capacity((out_prec - out_val) as usize + 1);
    for m in out_val..=out_prec {
        let mut acc = Rational::zero();
        for d in divisors(n) {
            if m != 0 && m % d != 0 {
                continue;
            }
            // d | n and d | m make nm/d^2 an integer.
            let arg = n * m / (d * d);
            let c = f
                .coeff(arg)
                .ok_or(HeckeError::InsufficientPrecision { n, needed: arg, have: f.precision() })?;
            if !c.is_zero() {
                acc += int_pow(d, w - 1) * c;
            }
        }
        coeffs.push(acc);
    }
    Ok(QSeries::new(out_val, coeffs))
}

/// Exact nonpositive-exponent coefficients of `n^{k-1} (F | T_{2-k}(n))` for
/// a form whose known coefficients are `lower[l] = c_F(l)` for
/// `-m <= l <= 0` with `c_F(-m) = 1`. Exponents below `-m` are zero and
/// positive exponents never contribute to this range, so the output map on
/// `-mn ..= 0` is exact.
pub fn scaled_hecke_principal(
    lower: &BTreeMap<i64, Rational>,
    k: u32,
    m: i64,
    n: i64,
) -> Result<BTreeMap<i64, Rational>, HeckeError> {
    assert!(m >= 1 && n >= 1 && k.is_multiple_of(2));
    if lower.get(&-m) != Some(&Rational::one()) {
        return Err(HeckeError::BadNormalization);
    }
    let c = |l: i64| -> Rational {
        if l < -m {
            Rational::zero()
        } else {
            lower.get(&l).cloned().unwrap_or_else(Rational::zero)
        }
    };
    let e = k - 1;
    let mut out = BTreeMap::new();
    for np in -m * n..=0 {
        let mut acc = Rational::zero();
        for d in divisors(n) {
            if np != 0 && np % d != 0 {
                continue;
            }
            // n^{k-1} d^{1-k} = (n/d)^{k-1}, an integer since d divides n.
            let scale = Rational::from_integer(BigInt::from(n / d).pow(e));
            let term = c(n * np / (d * d));
            if !term.is_zero() {
                acc += scale * term;
            }
        }
        out.insert(np, acc);
    }
    Ok(out)
}

/// True when the known coefficients of `a` and `b` agree wherever both are
/// known (used by tests comparing images of different precisions).
#[cfg(test)]
pub(crate) fn agree_through_common_precision(a: &QSeries, b: &QSeries) -> bool {
    let hi = a.precision().min(b.precision());
    let lo = a.valuation().min(b.valuation());
    (lo..=hi).all(|e| a.coeff(e) == b.coeff(e))
}

mod rational_map_serde {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::qseries::{parse_rational, rational_string, Rational};

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<i64, Rational>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        serializer.collect_map(map.iter().map(|(n, a)| (n.to_string(), rational_string(a))))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<BTreeMap<i64, Rational>, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(deserializer)?;
        raw.into_iter()
            .map(|(n, a)| {
                let n = n.parse::<i64>().map_err(|e| D::Error::custom(e.to_string()))?;
                let a = parse_rational(&a).map_err(|e| D::Error::custom(e.to_string()))?;
                Ok((n, a))
            })
            .collect()
    }
}
