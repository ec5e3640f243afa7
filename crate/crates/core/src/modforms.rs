//! Level-one modular objects: Eisenstein series, the discriminant, the
//! j-invariant, the trivial-zero bookkeeping (`tilde_e`, `b_exp`, `h_poly`),
//! Faber polynomials, dimension-one cusp eigenforms, and the divisor
//! polynomial of a holomorphic form.
//!
//! Everything here is exact: q-expansions are [`QSeries`] over big rationals
//! and polynomials are [`RPoly`]. All functions are pure and keep no caches,
//! so they may be called from any number of threads.

use num::{BigInt, One, Zero};
use thiserror::Error;

use crate::qseries::{bernoulli, rati, QSeries, Rational};
use crate::rpoly::RPoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModformError {
    #[error("weight {0} is not supported here (need an even weight >= {1})")]
    BadWeight(u32, u32),
    #[error("weight {0} has no one-dimensional cusp space (need one of 12, 16, 18, 20, 22, 26)")]
    UnsupportedWeight(u32),
    #[error("form is not divisible by the trivial-zero product: remainder at q^{exponent}")]
    InexactDivision { exponent: i64 },
}

/// Divisor-power sums `sigma_{e}(1..=nmax)` by sieving over divisors.
fn sigma_table(e: u32, nmax: i64) -> Vec<Rational> {
    let nmax = nmax.max(0) as usize;
    let mut table = vec![BigInt::zero(); nmax + 1];
    for d in 1..=nmax {
        let p = BigInt::from(d).pow(e);
        let mut m = d;
        while m <= nmax {
            table[m] += &p;
            m += d;
        }
    }
    table.into_iter().map(Rational::from_integer).collect()
}

/// The normalized Eisenstein series of even weight `k >= 4`:
/// `E_k = 1 - (2k/B_k) * sum_{n>=1} sigma_{k-1}(n) q^n`.
///
/// This normalization makes `(E_4^3 - E_6^2)/1728` the discriminant with
/// expansion `q - 24q^2 + 252q^3 - ...`.
pub fn eisenstein(k: u32, precision: i64) -> Result<QSeries, ModformError> {
    if !k.is_multiple_of(2) || k < 4 {
        return Err(ModformError::BadWeight(k, 4));
    }
    let bk = bernoulli(k).expect("even weight");
    let factor = -rati(2 * i64::from(k)) / bk;
    let sigma = sigma_table(k - 1, precision);
    Ok(QSeries::from_fn(0, precision.max(0), |n| {
        if n == 0 {
            Rational::one()
        } else {
            &factor * &sigma[n as usize]
        }
    }))
}

/// The discriminant `Delta = (E_4^3 - E_6^2)/1728 = q - 24q^2 + 252q^3 - ...`.
pub fn delta(precision: i64) -> QSeries {
    let e4 = eisenstein(4, precision).expect("weight 4");
    let e6 = eisenstein(6, precision).expect("weight 6");
    (&e4.pow(3) - &e6.pow(2)).scale(&Rational::new(BigInt::one(), BigInt::from(1728)))
}

/// The modular j-invariant `j = E_4^3 / Delta = q^{-1} + 744 + 196884q + ...`,
/// known exactly through `q^precision`.
pub fn jinv(precision: i64) -> QSeries {
    // Dividing by Delta (valuation 1) costs two orders of precision, so work
    // with headroom and truncate back down.
    let work = precision + 2;
    let e4 = eisenstein(4, work).expect("weight 4");
    let j = &e4.pow(3) * &delta(work).inverse().expect("Delta has leading coefficient 1");
    j.truncated(precision)
}

/// The trivial-zero Eisenstein product, keyed on `k mod 12`:
/// `1, E_4^2 E_6, E_4, E_6, E_4^2, E_4 E_6` for residues `0, 2, 4, 6, 8, 10`.
pub fn tilde_e(k: u32, precision: i64) -> Result<QSeries, ModformError> {
    if !k.is_multiple_of(2) {
        return Err(ModformError::BadWeight(k, 0));
    }
    let e4 = || eisenstein(4, precision).expect("weight 4");
    let e6 = || eisenstein(6, precision).expect("weight 6");
    Ok(match k % 12 {
        0 => QSeries::one(precision.max(0)),
        2 => &e4().pow(2) * &e6(),
        4 => e4(),
        6 => e6(),
        8 => e4().pow(2),
        10 => &e4() * &e6(),
        _ => unreachable!("even residues mod 12"),
    })
}

/// The exponent `b(k) = floor(k/12)`, less one when `k = 2 (mod 12)`.
pub fn b_exp(k: u32) -> i64 {
    debug_assert!(k.is_multiple_of(2));
    i64::from(k / 12) - i64::from(k % 12 == 2)
}

/// The endpoint-zero polynomial `h_k`, keyed on `k mod 12`:
/// `1, x^2(x-1728), x, x-1728, x^2, x(x-1728)` for residues `0, 2, 4, 6, 8, 10`.
pub fn h_poly(k: u32) -> RPoly {
    debug_assert!(k.is_multiple_of(2));
    let x = RPoly::x();
    let x_1728 = RPoly::from_ints(&[-1728, 1]);
    match k % 12 {
        0 => RPoly::one(),
        2 => &(&x * &x) * &x_1728,
        4 => x,
        6 => x_1728,
        8 => &x * &x,
        10 => &x * &x_1728,
        _ => unreachable!("even residues mod 12"),
    }
}

/// All Faber pairs `(j_n, J_n)` for `0 <= n <= dmax`, sharing one pass over
/// the powers of j. `J_n` is the unique monic degree-n polynomial for which
/// `j_n = J_n(j) = q^{-n} + O(q)` has zero constant term; each returned
/// series is exact through `q^precision`.
pub fn faber_family(dmax: usize, precision: i64) -> Vec<(QSeries, RPoly)> {
    let precision = precision.max(1);
    // j^d loses one order of precision per factor; start high enough that
    // even j^dmax is still known through q^precision.
    let j = jinv(precision + dmax as i64);
    let mut powers = Vec::with_capacity(dmax + 1);
    powers.push(QSeries::one(j.precision() + 1));
    for d in 1..=dmax {
        powers.push(&powers[d - 1] * &j);
    }

    let mut family = Vec::with_capacity(dmax + 1);
    family.push((QSeries::one(precision), RPoly::one()));
    for n in 1..=dmax {
        let mut work = powers[n].clone();
        let mut poly = vec![Rational::zero(); n + 1];
        poly[n] = Rational::one();
        for d in (1..n).rev() {
            let a = work.coeff(-(d as i64)).expect("within precision");
            if !a.is_zero() {
                work = &work - &powers[d].scale(&a);
                poly[d] = -a;
            }
        }
        let a0 = work.coeff(0).expect("within precision");
        if !a0.is_zero() {
            work = &work - &QSeries::constant(a0.clone(), work.precision());
            poly[0] = -a0;
        }
        family.push((work.truncated(precision), RPoly::new(poly)));
    }
    family
}

/// The n-th Faber pair `(j_n, J_n)`; see [`faber_family`].
pub fn faber(n: usize, precision: i64) -> (QSeries, RPoly) {
    faber_family(n, precision).pop().expect("nonempty family")
}

/// The normalized Hecke eigenform of weight `k` when `dim S_k = 1`, namely
/// `Delta * E_{k-12}` (with `E_0 := 1`). Its q-coefficients are the Hecke
/// eigenvalues a(n).
pub fn cusp_eigenform(k: u32, precision: i64) -> Result<QSeries, ModformError> {
    if !matches!(k, 12 | 16 | 18 | 20 | 22 | 26) {
        return Err(ModformError::UnsupportedWeight(k));
    }
    let d = delta(precision);
    Ok(match k - 12 {
        0 => d,
        rest => &d * &eisenstein(rest, precision)?,
    })
}

/// The divisor polynomial `P(f;x) = h_k(x) * Ptilde(f;x)` of a holomorphic
/// weight-k form, where `Ptilde` expresses `f / (Delta^{b(k)} E~_k)` as a
/// polynomial in j. `f` must carry precision at least `2 b(k) + 1`.
pub fn divisor_polynomial(f: &QSeries, k: u32) -> Result<RPoly, ModformError> {
    if !k.is_multiple_of(2) || b_exp(k) < 0 {
        return Err(ModformError::BadWeight(k, 4));
    }
    let b = b_exp(k) as usize;
    let precision = f.precision();
    assert!(
        precision > 2 * b as i64,
        "need precision at least {} to divide by Delta^{}",
        2 * b + 1,
        b
    );
    let den = &delta(precision).pow(b as u32) * &tilde_e(k, precision)?;
    let g = f * &den.inverse().expect("unit leading coefficient");

    let family = faber_family(b, g.precision().max(1));
    let mut ptilde = RPoly::zero();
    let mut residual = g;
    for d in (1..=b).rev() {
        let a = residual.coeff(-(d as i64)).expect("within precision");
        if !a.is_zero() {
            residual = &residual - &family[d].0.scale(&a);
            ptilde = &ptilde + &family[d].1.scale(&a);
        }
    }
    if let Some(a0) = residual.coeff(0) {
        if !a0.is_zero() {
            residual = &residual - &QSeries::constant(a0.clone(), residual.precision());
            ptilde = &ptilde + &RPoly::constant(a0);
        }
    }
    for e in residual.valuation()..=residual.precision() {
        let c = residual.coeff(e).expect("in range");
        if !c.is_zero() {
            return Err(ModformError::InexactDivision { exponent: e });
        }
    }
    Ok(&h_poly(k) * &ptilde)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eisenstein_low_coefficients() {
        let e4 = eisenstein(4, 4).unwrap();
        assert_eq!(e4.coeff(0), Some(rati(1)));
        assert_eq!(e4.coeff(1), Some(rati(240)));
        assert_eq!(e4.coeff(2), Some(rati(2160)));
        let e6 = eisenstein(6, 2).unwrap();
        assert_eq!(e6.coeff(1), Some(rati(-504)));
        assert_eq!(e6.coeff(2), Some(rati(-16632)));
        let e10 = eisenstein(10, 2).unwrap();
        assert_eq!(e10.coeff(1), Some(rati(-264)));
        assert_eq!(e10.coeff(2), Some(rati(-135432)));
        assert_eq!(eisenstein(5, 3), Err(ModformError::BadWeight(5, 4)));
        assert_eq!(eisenstein(2, 3), Err(ModformError::BadWeight(2, 4)));
    }

    #[test]
    fn eisenstein_product_relation() {
        // E_10 = E_4 E_6 in the one-dimensional weight-10 space.
        let n = 24;
        let lhs = eisenstein(10, n).unwrap();
        let rhs = &eisenstein(4, n).unwrap() * &eisenstein(6, n).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn delta_and_j_expansions() {
        let d = delta(6);
        assert_eq!(d.valuation(), 1);
        assert_eq!(d.coeff(1), Some(rati(1)));
        assert_eq!(d.coeff(2), Some(rati(-24)));
        assert_eq!(d.coeff(3), Some(rati(252)));
        assert_eq!(d.coeff(4), Some(rati(-1472)));
        let j = jinv(2);
        assert_eq!(j.valuation(), -1);
        assert_eq!(j.precision(), 2);
        assert_eq!(j.coeff(-1), Some(rati(1)));
        assert_eq!(j.coeff(0), Some(rati(744)));
        assert_eq!(j.coeff(1), Some(rati(196884)));
        assert_eq!(j.coeff(2), Some(rati(21493760)));
    }

    #[test]
    fn exact_identities_small() {
        let n = 20;
        let e4 = eisenstein(4, n).unwrap();
        let e6 = eisenstein(6, n).unwrap();
        assert_eq!(delta(n).scale(&rati(1728)), &e4.pow(3) - &e6.pow(2));
        let j = jinv(n - 2);
        let prod = &j * &delta(n - 1);
        assert_eq!(prod, e4.pow(3).truncated(prod.precision()));
    }

    #[test]
    fn tilde_e_table() {
        let n = 8;
        assert_eq!(tilde_e(0, n).unwrap(), QSeries::one(n));
        assert_eq!(tilde_e(12, n).unwrap(), QSeries::one(n));
        assert_eq!(tilde_e(4, n).unwrap(), eisenstein(4, n).unwrap());
        assert_eq!(tilde_e(6, n).unwrap(), eisenstein(6, n).unwrap());
        assert_eq!(tilde_e(8, n).unwrap(), eisenstein(4, n).unwrap().pow(2));
        let e4e6 = &eisenstein(4, n).unwrap() * &eisenstein(6, n).unwrap();
        assert_eq!(tilde_e(10, n).unwrap(), e4e6);
        let e44e6 = &eisenstein(4, n).unwrap().pow(2) * &eisenstein(6, n).unwrap();
        assert_eq!(tilde_e(14, n).unwrap(), e44e6);
        assert_eq!(tilde_e(7, n), Err(ModformError::BadWeight(7, 0)));
    }

    #[test]
    fn b_exp_values() {
        assert_eq!(b_exp(0), 0);
        assert_eq!(b_exp(10), 0);
        assert_eq!(b_exp(12), 1);
        assert_eq!(b_exp(14), 0);
        assert_eq!(b_exp(24), 2);
        assert_eq!(b_exp(26), 1);
        assert_eq!(b_exp(2), -1);
    }

    #[test]
    fn h_poly_table() {
        assert_eq!(h_poly(12), RPoly::one());
        assert_eq!(h_poly(4), RPoly::x());
        assert_eq!(h_poly(6), RPoly::from_ints(&[-1728, 1]));
        assert_eq!(h_poly(8), RPoly::from_ints(&[0, 0, 1]));
        assert_eq!(h_poly(10), RPoly::from_ints(&[0, -1728, 1]));
        assert_eq!(h_poly(14), RPoly::from_ints(&[0, 0, -1728, 1]));
    }

    #[test]
    fn faber_small_cases() {
        let fam = faber_family(2, 3);
        assert_eq!(fam[0].1, RPoly::one());
        assert_eq!(fam[1].1, RPoly::from_ints(&[-744, 1]));
        assert_eq!(fam[2].1, RPoly::from_ints(&[159768, -1488, 1]));
        let j1 = &fam[1].0;
        assert_eq!(j1.valuation(), -1);
        assert_eq!(j1.coeff(0), Some(rati(0)));
        assert_eq!(j1.coeff(1), Some(rati(196884)));
        let (j2, p2) = faber(2, 3);
        assert_eq!(&j2, &fam[2].0);
        assert_eq!(j2.coeff(-2), Some(rati(1)));
        assert_eq!(j2.coeff(-1), Some(rati(0)));
        assert_eq!(j2.coeff(0), Some(rati(0)));
        assert_eq!(p2.to_string(), "x^2 - 1488x + 159768");
    }

    #[test]
    fn faber_polynomials_recover_series() {
        // J_n(j) must reproduce j_n coefficientwise through the precision.
        let precision = 6;
        let fam = faber_family(8, precision);
        let j = jinv(precision + 8);
        for (n, (jn, pn)) in fam.iter().enumerate() {
            assert_eq!(pn.degree(), if n == 0 { Some(0) } else { Some(n) });
            assert!(pn.leading().unwrap().is_one(), "J_{n} monic");
            let mut evaluated = QSeries::zero(j.precision() - n as i64 + 1);
            let mut jpow = QSeries::one(j.precision() + 1);
            for d in 0..=n {
                evaluated = &evaluated + &jpow.scale(&pn.coeff(d));
                jpow = &jpow * &j;
            }
            assert_eq!(evaluated.truncated(precision), *jn, "n = {n}");
            if n > 0 {
                assert_eq!(jn.coeff(0), Some(rati(0)), "zero constant term at n = {n}");
            }
        }
    }

    #[test]
    fn cusp_eigenforms() {
        let d = cusp_eigenform(12, 5).unwrap();
        assert_eq!(d, delta(5));
        let f16 = cusp_eigenform(16, 3).unwrap();
        assert_eq!(f16.coeff(1), Some(rati(1)));
        assert_eq!(f16.coeff(2), Some(rati(216)));
        assert_eq!(f16.coeff(3), Some(rati(-3348)));
        let f26 = cusp_eigenform(26, 2).unwrap();
        assert_eq!(f26.coeff(2), Some(rati(-48)));
        assert_eq!(cusp_eigenform(14, 3), Err(ModformError::UnsupportedWeight(14)));
        assert_eq!(cusp_eigenform(24, 3), Err(ModformError::UnsupportedWeight(24)));
    }

    #[test]
    fn eigenform_coefficients_multiplicative() {
        let d = cusp_eigenform(12, 30).unwrap();
        let a = |n: i64| d.coeff(n).unwrap();
        for m in 2..=30i64 {
            for n in 2..=30i64 {
                if m * n <= 30 && num::integer::gcd(m, n) == 1 {
                    assert_eq!(a(m * n), a(m) * a(n), "a({m}*{n})");
                }
            }
        }
    }

    #[test]
    fn divisor_polynomial_examples() {
        let n = 12;
        assert_eq!(divisor_polynomial(&delta(n), 12).unwrap(), RPoly::one());
        let e4 = eisenstein(4, n).unwrap();
        assert_eq!(divisor_polynomial(&e4, 4).unwrap(), RPoly::x());
        assert_eq!(divisor_polynomial(&e4.pow(3), 12).unwrap(), RPoly::x());
        let e6 = eisenstein(6, n).unwrap();
        assert_eq!(divisor_polynomial(&e6, 6).unwrap(), RPoly::from_ints(&[-1728, 1]));
        // E_4 E_6 Delta has weight 22, b(22) = 1, h_22 = x(x-1728).
        let f = &(&e4 * &e6) * &delta(n);
        assert_eq!(divisor_polynomial(&f, 22).unwrap(), RPoly::from_ints(&[0, -1728, 1]));
    }

    #[test]
    fn divisor_polynomial_rejects_inexact() {
        // E_6 is not divisible by E~_4 = E_4.
        let e6 = eisenstein(6, 10).unwrap();
        assert!(matches!(
            divisor_polynomial(&e6, 4),
            Err(ModformError::InexactDivision { .. })
        ));
    }
}
