//! End-to-end construction of the Hecke polynomials P_n(F;x) attached to a
//! weak eigenform specification: the lower part of
//! `H_n(F) = Delta^{b(k-2)} E~_{k-2} (n^{k-1} F|T_{2-k}(n) - a(n) F)`
//! is computed exactly from the principal part and constant term of F, then
//! rewritten in the Faber basis to produce a monic polynomial in j, together
//! with endpoint-zero classification.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hecke::{eigenvalue, scaled_hecke_principal, EigenvalueSource, HeckeError};
use crate::modforms::{b_exp, delta, faber_family, tilde_e, ModformError};
use crate::qseries::{bernoulli, parse_rational, rati, rational_string, QSeries, Rational};
use crate::rpoly::RPoly;

#[derive(Debug, Error, PartialEq)]
pub enum HeckePolyError {
    #[error("shadow weight {0} must be even and at least 12")]
    BadWeight(u32),
    #[error("pole order m must be at least 1, got {0}")]
    BadPoleOrder(i64),
    #[error("principal part must list m coefficients for q^-m .. q^-1 with leading coefficient 1")]
    BadNormalization,
    #[error("eigenvalue source must be the weight-{0} builtin (dim S_k = 1) or an explicit list")]
    BadEigenvalueWeight(u32),
    #[error("assembled polynomial has degree {got:?}, expected monic of degree {expected}")]
    DegreeMismatch { expected: usize, got: Option<usize> },
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    Modform(#[from] ModformError),
}

/// A weight `2-k` weak Hecke eigenform, described by the data the
/// constructions actually consume: the shadow weight `k`, the pole order
/// `m`, the exact principal coefficients `c(-m) ..= c(-1)` (with
/// `c(-m) = 1`), the constant term `c(0)`, and the eigenvalue stream of the
/// shadow.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct WeakEigenformSpec {
    k: u32,
    m: i64,
    principal: Vec<Rational>,
    constant: Rational,
    eigenvalues: EigenvalueSource,
}

impl WeakEigenformSpec {
    pub fn new(
        k: u32,
        m: i64,
        principal: Vec<Rational>,
        constant: Rational,
        eigenvalues: EigenvalueSource,
    ) -> Result<Self, HeckePolyError> {
        if !k.is_multiple_of(2) || k < 12 {
            return Err(HeckePolyError::BadWeight(k));
        }
        if m < 1 {
            return Err(HeckePolyError::BadPoleOrder(m));
        }
        if principal.len() != m as usize || !principal[0].is_one() {
            return Err(HeckePolyError::BadNormalization);
        }
        if let EigenvalueSource::BuiltinDim1 { k: ke } = &eigenvalues {
            if *ke != k || !matches!(*ke, 12 | 16 | 18 | 20 | 22 | 26) {
                return Err(HeckePolyError::BadEigenvalueWeight(*ke));
            }
        }
        Ok(WeakEigenformSpec { k, m, principal, constant, eigenvalues })
    }

    /// The central worked example: shadow Delta (k = 12), simple pole,
    /// constant term `24/B_12 = -65520/691`.
    pub fn builtin_r() -> Self {
        let constant = rati(24) / bernoulli(12).expect("even index");
        WeakEigenformSpec::new(
            12,
            1,
            vec![Rational::one()],
            constant,
            EigenvalueSource::BuiltinDim1 { k: 12 },
        )
        .expect("the builtin spec is valid")
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// Principal coefficients in ascending exponent order, `c(-m) ..= c(-1)`.
    pub fn principal(&self) -> &[Rational] {
        &self.principal
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn eigenvalues(&self) -> &EigenvalueSource {
        &self.eigenvalues
    }

    /// All known lower coefficients as a map on `-m ..= 0`.
    pub fn lower_coeffs(&self) -> BTreeMap<i64, Rational> {
        let mut map: BTreeMap<i64, Rational> = self
            .principal
            .iter()
            .enumerate()
            .map(|(i, c)| (i as i64 - self.m, c.clone()))
            .collect();
        map.insert(0, self.constant.clone());
        map
    }

    /// `sum_{l=1}^{m} |c(-l)|`, the principal-part mass entering C_F.
    pub fn principal_abs_sum(&self) -> Rational {
        self.principal.iter().map(|c| c.abs()).sum()
    }

    pub fn a(&self, n: i64) -> Result<Rational, HeckePolyError> {
        Ok(eigenvalue(&self.eigenvalues, n)?)
    }
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    k: u32,
    m: i64,
    principal: Vec<String>,
    constant: String,
    eigenvalues: EigenvalueSource,
}

impl From<WeakEigenformSpec> for SpecRepr {
    fn from(spec: WeakEigenformSpec) -> Self {
        SpecRepr {
            k: spec.k,
            m: spec.m,
            principal: spec.principal.iter().map(rational_string).collect(),
            constant: rational_string(&spec.constant),
            eigenvalues: spec.eigenvalues,
        }
    }
}

impl TryFrom<SpecRepr> for WeakEigenformSpec {
    type Error = String;

    fn try_from(repr: SpecRepr) -> Result<Self, String> {
        let principal = repr
            .principal
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let constant = parse_rational(&repr.constant).map_err(|e| e.to_string())?;
        WeakEigenformSpec::new(repr.k, repr.m, principal, constant, repr.eigenvalues)
            .map_err(|e| e.to_string())
    }
}

/// The monic Hecke polynomial with exact endpoint evaluations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeckePolyResult {
    pub degree: usize,
    #[serde(rename = "coeffs")]
    pub poly: RPoly,
    pub zero_at_0: bool,
    pub zero_at_1728: bool,
}

/// Zeros of `E~_{k-2}` on the arc, keyed on the shadow weight k mod 12:
/// returns (vanishes at theta = pi/3, i.e. j = 0; vanishes at theta = pi/2,
/// i.e. j = 1728).
pub fn z_endpoints(k: u32) -> (bool, bool) {
    debug_assert!(k.is_multiple_of(2));
    match k % 12 {
        0 | 4 => (true, true),
        2 => (false, false),
        6 | 10 => (true, false),
        8 => (false, true),
        _ => unreachable!("even residues mod 12"),
    }
}

/// Number of arc endpoints at which `E~_{k-2}` vanishes.
pub fn z_endpoint_count(k: u32) -> usize {
    let (a, b) = z_endpoints(k);
    usize::from(a) + usize::from(b)
}

/// The lower part of `H_n(F)`: exact coefficients at every exponent from
/// `-(mn - b)` through (at least) zero, where `b = b_exp(k-2)`. `precision`
/// controls how far the Eisenstein side is expanded and must be at least
/// `mn + b + 2`.
pub fn hn_lower_part(
    spec: &WeakEigenformSpec,
    n: i64,
    precision: i64,
) -> Result<QSeries, HeckePolyError> {
    assert!(n >= 2, "Hecke polynomials start at n = 2");
    let (k, m) = (spec.k, spec.m);
    let b = b_exp(k - 2);
    assert!(precision >= m * n + b + 2, "not enough series precision for T({n})");

    let lower = spec.lower_coeffs();
    let mut inner = scaled_hecke_principal(&lower, k, m, n)?;
    let a_n = spec.a(n)?;
    for (l, c) in &lower {
        if !c.is_zero() {
            *inner.entry(*l).or_insert_with(Rational::zero) -= &a_n * c;
        }
    }
    let inner = QSeries::new(-m * n, inner.into_values().collect());

    let eside = &delta(precision).pow(b as u32) * &tilde_e(k - 2, precision)?;
    Ok(&eside * &inner)
}

/// The central construction: the monic polynomial P_n(F;x) of degree
/// `mn - b(k-2)` with `P_n(F; j) = H_n(F)`, plus exact endpoint evaluations
/// at x = 0 and x = 1728.
pub fn hecke_polynomial(spec: &WeakEigenformSpec, n: i64) -> Result<HeckePolyResult, HeckePolyError> {
    let b = b_exp(spec.k - 2);
    hecke_polynomial_with_precision(spec, n, spec.m * n + b + 16)
}

/// As [`hecke_polynomial`] with explicit series precision (headroom beyond
/// the required minimum only affects how much of H_n is cross-checkable).
pub fn hecke_polynomial_with_precision(
    spec: &WeakEigenformSpec,
    n: i64,
    precision: i64,
) -> Result<HeckePolyResult, HeckePolyError> {
    let h = hn_lower_part(spec, n, precision)?;
    let b = b_exp(spec.k - 2);
    let degree = (spec.m * n - b) as usize;

    let family = faber_family(degree, 1);
    let mut poly = RPoly::zero();
    for (d, (_, faber_poly)) in family.iter().enumerate().skip(1) {
        let hd = h.coeff(-(d as i64)).expect("within precision");
        if !hd.is_zero() {
            poly = &poly + &faber_poly.scale(&hd);
        }
    }
    let h0 = h.coeff(0).expect("within precision");
    if !h0.is_zero() {
        poly = &poly + &RPoly::constant(h0);
    }

    if poly.degree() != Some(degree) || !poly.leading().expect("nonzero").is_one() {
        return Err(HeckePolyError::DegreeMismatch { expected: degree, got: poly.degree() });
    }
    let zero_at_0 = poly.eval(&Rational::zero()).is_zero();
    let zero_at_1728 = poly.eval(&rati(1728)).is_zero();
    Ok(HeckePolyResult { degree, poly, zero_at_0, zero_at_1728 })
}

/// Congruence conditions from the endpoint remark, reported verbatim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemarkCongruences {
    /// k = 2 or 4 (mod 6) predicts a zero at x = 0.
    pub zero_at_0: bool,
    /// k = 2 (mod 4) predicts a zero at x = 1728.
    pub zero_at_1728: bool,
}

/// Side-by-side endpoint classification: the Z_{k-2} table prediction, the
/// exact evaluations, and the remark congruences (the latter are surfaced
/// without being asserted against the others).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointReport {
    pub n: i64,
    /// Subset of {"pi/3", "pi/2"}: arc points where E~_{k-2} vanishes.
    pub predicted_z: Vec<String>,
    pub actual_zero_at_0: bool,
    pub actual_zero_at_1728: bool,
    pub remark_congruences: RemarkCongruences,
}

pub fn endpoint_report(spec: &WeakEigenformSpec, n: i64) -> Result<EndpointReport, HeckePolyError> {
    let result = hecke_polynomial(spec, n)?;
    let (at0, at1728) = z_endpoints(spec.k);
    let mut predicted_z = Vec::new();
    if at0 {
        predicted_z.push("pi/3".to_owned());
    }
    if at1728 {
        predicted_z.push("pi/2".to_owned());
    }
    let k = spec.k;
    Ok(EndpointReport {
        n,
        predicted_z,
        actual_zero_at_0: result.zero_at_0,
        actual_zero_at_1728: result.zero_at_1728,
        remark_congruences: RemarkCongruences {
            zero_at_0: k % 6 == 2 || k % 6 == 4,
            zero_at_1728: k % 4 == 2,
        },
    })
}
