//! Exact root isolation for Hecke polynomials on [0, 1728] and the pullback
//! of roots to the arc: Sturm chains over the rationals, bisection
//! refinement, the monotone inverse of `j` along `theta in [pi/3, pi/2]`,
//! star discrepancy of the pulled-back angles, and the
//! one-root-per-phase-subinterval check.

use num::complex::Complex64;
use num::{BigInt, Integer, One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arcbounds::{g_inverse, ArcError, THETA_HI, THETA_LO};
use crate::heckepoly::{hecke_polynomial, HeckePolyError, WeakEigenformSpec};
use crate::modforms::jinv;
use crate::qseries::{rati, rational_to_f64, QSeries, Rational};
use crate::rpoly::RPoly;

use std::f64::consts::PI;
use std::sync::OnceLock;

#[derive(Debug, Error, PartialEq)]
pub enum RootsError {
    #[error("x = {0} is outside the fundamental-arc range [0, 1728]")]
    OutOfRange(f64),
    #[error("discrepancy of an empty sample is undefined")]
    EmptyInput,
    #[error(transparent)]
    Arc(#[from] ArcError),
    #[error(transparent)]
    HeckePoly(#[from] HeckePolyError),
}

/// A rational interval known to contain exactly one root. `lo == hi` marks
/// an exact rational root; otherwise the root lies strictly inside.
#[derive(Clone, Debug, PartialEq)]
pub struct IsolatingInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl IsolatingInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width_f64(&self) -> f64 {
        rational_to_f64(&(&self.hi - &self.lo))
    }
}

// The Sturm machinery runs over primitive integer polynomials (ascending
// coefficients, no trailing zeros) with pseudo-remainders and homogenized
// sign evaluation. Rational arithmetic would re-normalize through a gcd on
// every operation, which is ruinous at degree 40 with large coefficients.
type IPoly = Vec<BigInt>;

fn int_trim(mut v: IPoly) -> IPoly {
    while v.last().map(|c| c.is_zero()) == Some(true) {
        v.pop();
    }
    v
}

/// Divide out the (positive) content.
fn int_strip(v: IPoly) -> IPoly {
    let v = int_trim(v);
    let mut content = BigInt::zero();
    for c in &v {
        content = content.gcd(c);
    }
    if content.is_zero() || content.is_one() {
        return v;
    }
    v.into_iter().map(|c| c / &content).collect()
}

/// Clear denominators and strip content; the leading sign is kept.
fn to_int(p: &RPoly) -> IPoly {
    let mut lcm = BigInt::one();
    for c in p.coeffs() {
        lcm = lcm.lcm(c.denom());
    }
    int_strip(p.coeffs().iter().map(|c| c.numer() * (&lcm / c.denom())).collect())
}

fn int_derivative(v: &IPoly) -> IPoly {
    int_trim(
        v.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect(),
    )
}

/// Remainder of a by b up to a positive constant factor: reduces
/// `lc(b)^s a mod b` over the integers, then flips the sign back when the
/// accumulated factor is negative. Sturm chains tolerate positive scaling.
fn int_prem(a: &IPoly, b: &IPoly) -> IPoly {
    let db = b.len() - 1;
    let lc = b.last().expect("nonempty divisor");
    let mut r = a.clone();
    let mut steps = 0usize;
    while r.len() > db {
        let dr = r.len() - 1;
        let top = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c *= lc;
        }
        for i in 0..=db {
            let delta = &top * &b[i];
            r[dr - db + i] -= delta;
        }
        r = int_trim(r);
        steps += 1;
        if r.is_empty() {
            break;
        }
    }
    if lc.is_negative() && steps % 2 == 1 {
        for c in r.iter_mut() {
            *c = -&*c;
        }
    }
    r
}

/// Exact quotient of integer polynomials (the remainder is known to vanish).
fn int_divexact(a: &IPoly, b: &IPoly) -> IPoly {
    let db = b.len() - 1;
    let lc = b.last().expect("nonempty divisor");
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); a.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let (c, rem) = r.last().unwrap().div_rem(lc);
        debug_assert!(rem.is_zero(), "division is exact");
        for i in 0..=db {
            let delta = &c * &b[i];
            r[dr - db + i] -= delta;
        }
        q[dr - db] = c;
        r = int_trim(r);
        if r.is_empty() {
            break;
        }
    }
    debug_assert!(r.is_empty(), "division is exact");
    int_trim(q)
}

/// Signed remainder chain s0, s1, s_{i+1} = -(s_{i-1} mod s_i), content
/// stripped at each step.
fn int_remainder_chain(p0: IPoly, p1: IPoly) -> Vec<IPoly> {
    let mut chain = vec![p0, p1];
    while chain.last().is_some_and(|s| s.len() > 1) {
        let r = int_prem(&chain[chain.len() - 2], chain.last().unwrap());
        if r.is_empty() {
            break;
        }
        chain.push(int_strip(r.into_iter().map(|c| -c).collect()));
    }
    chain
}

/// Sign of p at x = num/den (den > 0), via the homogenized integer value
/// `sum c_i num^i den^{d-i}`.
fn int_sign_at(v: &IPoly, x: &Rational) -> i8 {
    let num = x.numer();
    let den = x.denom();
    let d = v.len() - 1;
    let mut acc = v[d].clone();
    let mut den_power = BigInt::one();
    for i in (0..d).rev() {
        den_power *= den;
        acc = acc * num + &v[i] * &den_power;
    }
    match acc.sign() {
        num::bigint::Sign::Minus => -1,
        num::bigint::Sign::NoSign => 0,
        num::bigint::Sign::Plus => 1,
    }
}

/// Square-free part and its Sturm chain, built once per polynomial.
struct SturmData {
    sf: IPoly,
    chain: Vec<IPoly>,
}

impl SturmData {
    /// None when p has no roots to isolate (degree < 1).
    fn new(p: &RPoly) -> Option<SturmData> {
        assert!(!p.is_zero(), "root isolation of the zero polynomial");
        let p_int = to_int(p);
        if p_int.len() <= 1 {
            return None;
        }
        let chain = int_remainder_chain(p_int.clone(), int_strip(int_derivative(&p_int)));
        if chain.last().is_none_or(|g| g.len() <= 1) {
            // p itself is square-free, and the probe chain is its chain.
            return Some(SturmData { sf: p_int, chain });
        }
        let g = int_strip(chain.last().unwrap().clone());
        let sf = int_strip(int_divexact(&p_int, &g));
        let chain = int_remainder_chain(sf.clone(), int_strip(int_derivative(&sf)));
        Some(SturmData { sf, chain })
    }

    /// Zero-skipping sign variation count; for the square-free head,
    /// `V(a) - V(b)` is the number of roots in `(a, b]`.
    fn variations(&self, x: &Rational) -> usize {
        let mut previous = 0i8;
        let mut variations = 0;
        for s in &self.chain {
            let sign = int_sign_at(s, x);
            if sign == 0 {
                continue;
            }
            if previous != 0 && sign != previous {
                variations += 1;
            }
            previous = sign;
        }
        variations
    }

    fn isolate(&self, lo: &Rational, hi: &Rational) -> Vec<IsolatingInterval> {
        let mut out = Vec::new();
        if int_sign_at(&self.sf, lo) == 0 {
            out.push(IsolatingInterval { lo: lo.clone(), hi: lo.clone() });
        }
        self.recurse(lo, hi, self.variations(lo), self.variations(hi), &mut out);
        out
    }

    fn recurse(
        &self,
        a: &Rational,
        b: &Rational,
        va: usize,
        vb: usize,
        out: &mut Vec<IsolatingInterval>,
    ) {
        let count = va - vb;
        if count == 0 {
            return;
        }
        if count == 1 {
            if int_sign_at(&self.sf, b) == 0 {
                out.push(IsolatingInterval { lo: b.clone(), hi: b.clone() });
            } else {
                out.push(IsolatingInterval { lo: a.clone(), hi: b.clone() });
            }
            return;
        }
        let mid = (a + b) / rati(2);
        let vm = self.variations(&mid);
        self.recurse(a, &mid, va, vm, out);
        self.recurse(&mid, b, vm, vb, out);
    }

    /// Bisection refinement of an isolating interval down to width tol.
    /// The left endpoint may itself be a (different, already reported)
    /// root, so the bisection anchors on the sign at hi, which never
    /// vanishes for an interval produced by isolate().
    fn refine(&self, interval: &IsolatingInterval, tol: f64) -> f64 {
        if interval.is_exact() {
            return rational_to_f64(&interval.lo);
        }
        let mut lo = interval.lo.clone();
        let mut hi = interval.hi.clone();
        let sign_hi = int_sign_at(&self.sf, &hi);
        debug_assert!(sign_hi != 0);
        while rational_to_f64(&(&hi - &lo)) > tol {
            let mid = (&lo + &hi) / rati(2);
            match int_sign_at(&self.sf, &mid) {
                0 => return rational_to_f64(&mid),
                s if s == sign_hi => hi = mid,
                _ => lo = mid,
            }
        }
        rational_to_f64(&((&lo + &hi) / rati(2)))
    }
}

/// `p / gcd(p, p')`: same roots, all simple. Content stripped, and the
/// leading coefficient normalized positive.
pub fn square_free_part(p: &RPoly) -> RPoly {
    assert!(!p.is_zero(), "square-free part of the zero polynomial");
    match SturmData::new(p) {
        None => RPoly::one(),
        Some(data) => {
            let mut sf = data.sf;
            if sf.last().map(|c| c.is_negative()) == Some(true) {
                for c in sf.iter_mut() {
                    *c = -&*c;
                }
            }
            RPoly::new(sf.into_iter().map(Rational::from_integer).collect())
        }
    }
}

pub fn all_roots_simple(p: &RPoly) -> bool {
    match p.degree() {
        None | Some(0) => true,
        _ => {
            let p_int = to_int(p);
            let chain = int_remainder_chain(p_int.clone(), int_strip(int_derivative(&p_int)));
            chain.last().is_none_or(|g| g.len() <= 1)
        }
    }
}

/// Isolate every real root of p in the closed interval [lo, hi]. Returns
/// ascending intervals, each containing exactly one distinct root
/// (multiplicities collapsed); exact rational roots come back degenerate.
pub fn sturm_isolate(p: &RPoly, lo: &Rational, hi: &Rational) -> Vec<IsolatingInterval> {
    assert!(lo < hi, "empty isolation interval");
    match SturmData::new(p) {
        None => Vec::new(),
        Some(data) => data.isolate(lo, hi),
    }
}

/// Shrink an isolating interval by bisection until its width is below tol,
/// then return the midpoint as f64. Exact intervals return immediately.
pub fn refine_root(p: &RPoly, interval: &IsolatingInterval, tol: f64) -> f64 {
    if interval.is_exact() {
        return rational_to_f64(&interval.lo);
    }
    let data = SturmData::new(p).expect("nonconstant polynomial");
    data.refine(interval, tol)
}

fn arc_j(theta: f64) -> f64 {
    static J: OnceLock<QSeries> = OnceLock::new();
    let series = J.get_or_init(|| jinv(40));
    let q = Complex64::from_polar((-2.0 * PI * theta.sin()).exp(), 2.0 * PI * theta.cos());
    series.eval_numeric(q).expect("|q| < 1").value.re
}

/// Invert `theta -> j(e^{i theta})` on [pi/3, pi/2], where j increases from
/// 0 to 1728. Bisection to 1e-12 radians; inputs a hair outside [0, 1728]
/// (refinement noise) are clamped, anything further is rejected.
pub fn theta_pullback(x: f64) -> Result<f64, RootsError> {
    if !(-1e-6..=1728.0 + 1e-6).contains(&x) {
        return Err(RootsError::OutOfRange(x));
    }
    if x <= 0.0 {
        return Ok(THETA_LO);
    }
    if x >= 1728.0 {
        return Ok(THETA_HI);
    }
    let (mut lo, mut hi) = (THETA_LO, THETA_HI);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if arc_j(mid) < x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Star discrepancy of the angles rescaled to [0, 1] via
/// `u = (theta - pi/3)/(pi/6)`.
pub fn discrepancy(thetas: &[f64]) -> Result<f64, RootsError> {
    if thetas.is_empty() {
        return Err(RootsError::EmptyInput);
    }
    let mut u: Vec<f64> = thetas
        .iter()
        .map(|t| ((t - THETA_LO) / (THETA_HI - THETA_LO)).clamp(0.0, 1.0))
        .collect();
    u.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = u.len() as f64;
    let mut worst = 0.0f64;
    for (i, ui) in u.iter().enumerate() {
        let up = (i + 1) as f64 / n - ui;
        let down = ui - i as f64 / n;
        worst = worst.max(up).max(down);
    }
    Ok(worst)
}

/// One isolated root with its refinement and arc pullback.
#[derive(Clone, Debug)]
pub struct RootRecord {
    pub index: usize,
    pub interval: IsolatingInterval,
    pub refined: f64,
    pub theta: f64,
}

/// Summary of the root layout of one Hecke polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct RootsSummary {
    pub n: i64,
    pub degree: usize,
    pub count_in_interval: usize,
    pub all_simple: bool,
    pub discrepancy_theta: f64,
}

/// Isolate, refine and pull back every root of `P_n` in [0, 1728].
pub fn roots_on_arc(
    spec: &WeakEigenformSpec,
    n: i64,
    tol: f64,
) -> Result<(Vec<RootRecord>, RootsSummary), RootsError> {
    let result = hecke_polynomial(spec, n)?;
    let data = SturmData::new(&result.poly).expect("Hecke polynomial has positive degree");
    // The square-free part keeps the full degree exactly when no root repeats.
    let all_simple = data.sf.len() - 1 == result.degree;
    let intervals = data.isolate(&rati(0), &rati(1728));
    let mut records = Vec::with_capacity(intervals.len());
    for (index, interval) in intervals.into_iter().enumerate() {
        let refined = data.refine(&interval, tol);
        let theta = theta_pullback(refined)?;
        records.push(RootRecord { index, interval, refined, theta });
    }
    let thetas: Vec<f64> = records.iter().map(|r| r.theta).collect();
    let summary = RootsSummary {
        n,
        degree: result.degree,
        count_in_interval: records.len(),
        all_simple,
        discrepancy_theta: discrepancy(&thetas).unwrap_or(1.0),
    };
    Ok((records, summary))
}

/// Check that each phase subinterval `(theta_{i+1}, theta_i)` between
/// consecutive solutions of `g_mn(theta) = pi i` contains exactly one
/// root pullback, endpoints excluded.
pub fn one_per_subinterval(spec: &WeakEigenformSpec, n: i64) -> Result<bool, RootsError> {
    let k = spec.k() as i64;
    let mn = spec.m() * n;
    let i_lo = (k - 2).div_euclid(4) + i64::from((k - 2).rem_euclid(4) != 0);
    let i_hi = mn + (k - 2).div_euclid(6);
    let mut boundaries = Vec::new();
    for i in i_lo..=i_hi {
        boundaries.push(g_inverse(mn, spec.k(), PI * i as f64)?);
    }
    let (records, _) = roots_on_arc(spec, n, 1e-9)?;
    let interior: Vec<f64> = records
        .iter()
        .map(|r| r.theta)
        .filter(|t| *t > THETA_LO + 1e-9 && *t < THETA_HI - 1e-9)
        .collect();
    if interior.len() + 1 != boundaries.len() {
        return Ok(false);
    }
    // boundaries descend in theta as i grows.
    for (w, theta) in boundaries.windows(2).zip(interior.iter().rev()) {
        if !(w[1] < *theta && *theta < w[0]) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::faber;

    #[test]
    fn golden_roots_are_the_endpoints() {
        // x^2 - 1728 x has exactly the roots 0 and 1728.
        let p = RPoly::new(vec![rati(0), rati(-1728), rati(1)]);
        let roots = sturm_isolate(&p, &rati(0), &rati(1728));
        assert_eq!(roots.len(), 2);
        assert!(roots[0].is_exact() && roots[0].lo == rati(0));
        assert!(roots[1].is_exact() && roots[1].lo == rati(1728));
    }

    #[test]
    fn no_real_roots_found_for_positive_polynomial() {
        let p = RPoly::new(vec![rati(1), rati(0), rati(1)]);
        assert!(sturm_isolate(&p, &rati(0), &rati(1728)).is_empty());
    }

    #[test]
    fn sqrt_two_isolation_and_refinement() {
        let p = RPoly::new(vec![rati(-2), rati(0), rati(1)]);
        let roots = sturm_isolate(&p, &rati(0), &rati(1728));
        assert_eq!(roots.len(), 1);
        let x = refine_root(&p, &roots[0], 1e-12);
        assert!((x - 2.0f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn multiple_roots_are_collapsed_and_flagged() {
        // (x - 1)^2 (x - 5)
        let p = &(&RPoly::new(vec![rati(-1), rati(1)]) * &RPoly::new(vec![rati(-1), rati(1)]))
            * &RPoly::new(vec![rati(-5), rati(1)]);
        assert!(!all_roots_simple(&p));
        let roots = sturm_isolate(&p, &rati(0), &rati(10));
        assert_eq!(roots.len(), 2);
        let first = refine_root(&p, &roots[0], 1e-10);
        let second = refine_root(&p, &roots[1], 1e-10);
        assert!((first - 1.0).abs() < 1e-9);
        assert!((second - 5.0).abs() < 1e-9);
    }

    #[test]
    fn exact_interior_rational_root() {
        // (x - 3)(x - 864): the root 864 = 1728/2 sits exactly on the first
        // bisection midpoint and must come back as a degenerate interval.
        let p = RPoly::new(vec![rati(3 * 864), rati(-867), rati(1)]);
        assert_eq!(p.eval(&rati(864)), rati(0));
        let roots = sturm_isolate(&p, &rati(0), &rati(1728));
        assert_eq!(roots.len(), 2);
        assert!((refine_root(&p, &roots[0], 1e-10) - 3.0).abs() < 1e-9);
        assert!(roots[1].is_exact());
        assert_eq!(roots[1].lo, rati(864));
    }

    #[test]
    fn faber_polynomial_roots_all_in_interval() {
        for n in [3usize, 5] {
            let (_, jn) = faber(n, 2);
            let roots = sturm_isolate(&jn, &rati(0), &rati(1728));
            assert_eq!(roots.len(), n, "J_{n} has {n} roots in [0, 1728]");
            assert!(all_roots_simple(&jn));
        }
    }

    #[test]
    fn intervals_come_back_sorted_and_disjoint() {
        let (_, jn) = faber(6, 2);
        let roots = sturm_isolate(&jn, &rati(0), &rati(1728));
        for w in roots.windows(2) {
            assert!(w[0].hi <= w[1].lo || (w[0].hi == w[1].hi && w[0].is_exact()));
            assert!(refine_root(&jn, &w[0], 1e-9) < refine_root(&jn, &w[1], 1e-9));
        }
    }

    #[test]
    fn pullback_endpoints_and_errors() {
        assert_eq!(theta_pullback(0.0).unwrap(), THETA_LO);
        assert_eq!(theta_pullback(1728.0).unwrap(), THETA_HI);
        assert_eq!(theta_pullback(-7.0), Err(RootsError::OutOfRange(-7.0)));
        assert_eq!(theta_pullback(1729.5), Err(RootsError::OutOfRange(1729.5)));
        // Known value: j(e^{i pi/2}) = 1728, j at 5 pi/12 is about 582.85.
        let mid = theta_pullback(582.8545).unwrap();
        assert!((mid - 5.0 * PI / 12.0).abs() < 1e-4);
    }

    #[test]
    fn pullback_round_trips_through_j() {
        for i in 1..=9 {
            let theta = THETA_LO + (THETA_HI - THETA_LO) * i as f64 / 10.0;
            let x = arc_j(theta);
            let back = theta_pullback(x).unwrap();
            assert!((back - theta).abs() < 1e-6, "theta={theta}: {back}");
        }
    }

    #[test]
    fn discrepancy_of_centered_equispaced_points() {
        for count in [4usize, 25] {
            let thetas: Vec<f64> = (0..count)
                .map(|i| THETA_LO + (i as f64 + 0.5) / count as f64 * (THETA_HI - THETA_LO))
                .collect();
            let d = discrepancy(&thetas).unwrap();
            assert!((d - 0.5 / count as f64).abs() < 1e-12);
        }
        assert!((discrepancy(&[THETA_LO]).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(discrepancy(&[]), Err(RootsError::EmptyInput));
    }

    #[test]
    fn golden_spec_small_n_roots() {
        let spec = WeakEigenformSpec::builtin_r();
        let (records, summary) = roots_on_arc(&spec, 2, 1e-9).unwrap();
        assert_eq!(summary.degree, 2);
        assert_eq!(summary.count_in_interval, 2);
        assert!(summary.all_simple);
        assert_eq!(records[0].theta, THETA_LO);
        assert_eq!(records[1].theta, THETA_HI);
    }

    #[test]
    fn golden_spec_n_11_layout() {
        let spec = WeakEigenformSpec::builtin_r();
        let (records, summary) = roots_on_arc(&spec, 11, 1e-9).unwrap();
        assert_eq!(summary.count_in_interval, 11);
        assert!(summary.all_simple);
        let interior = records
            .iter()
            .filter(|r| r.theta > THETA_LO + 1e-9 && r.theta < THETA_HI - 1e-9)
            .count();
        assert_eq!(interior, 9);
        assert!(one_per_subinterval(&spec, 11).unwrap());
    }
}
