//! The approximation machinery along the arc `tau = e^{i theta}`,
//! `theta in [pi/3, pi/2]`: the damped-cosine approximant `f_l`, the phase
//! function `g_mn` and its inverse, the closed-form Q/P/R bounds, the
//! constant `C_F` and its validity threshold, numeric evaluation of the
//! normalized Hecke form `H* = P_n(j)/(Delta^b E~)` on the arc, the
//! gap check `|e^{i(2-k)theta/2} e^{-2 pi mn sin theta} H* - f_mn| < 2`,
//! and sign-change counting between consecutive phase multiples of pi.

use num::complex::Complex64;
use num::{BigInt, One};
use serde::Serialize;
use thiserror::Error;

use crate::heckepoly::{
    hecke_polynomial_with_precision, z_endpoints, HeckePolyError, WeakEigenformSpec,
};
use crate::modforms::{b_exp, delta, jinv, tilde_e};
use crate::qseries::{rational_to_f64, QSeries, QSeriesError, Rational};
use crate::rpoly::RPoly;
use crate::specialfn::trunc_exp;

use std::f64::consts::PI;

pub const THETA_LO: f64 = PI / 3.0;
pub const THETA_HI: f64 = PI / 2.0;

#[derive(Debug, Error, PartialEq)]
pub enum ArcError {
    #[error("g is not strictly decreasing here (need pi sqrt(3) mn > (k-2)/2)")]
    NotMonotone,
    #[error("phase target {target} lies outside [{lo}, {hi}]")]
    TargetOutOfRange { target: f64, lo: f64, hi: f64 },
    #[error("|Delta^b E~| = {modulus:e} at theta = {theta} is too small to divide by")]
    DivisorNearZero { theta: f64, modulus: f64 },
    #[error(transparent)]
    HeckePoly(#[from] HeckePolyError),
    #[error(transparent)]
    Modform(#[from] crate::modforms::ModformError),
    #[error(transparent)]
    Series(#[from] QSeriesError),
}

/// Damping factor `1 - e^{-x} e_{k-2}(x)` at `x = 4 pi l sin(theta)`; lies
/// in [0, 1) for x > 0 and increases with x.
pub fn damping_factor(l: i64, k: u32, theta: f64) -> f64 {
    let x = 4.0 * PI * l as f64 * theta.sin();
    if x > 700.0 {
        // e^{-x} underflows against any polynomial e_j; the factor is 1.
        return 1.0;
    }
    1.0 - (-x).exp() * trunc_exp(k - 2, x)
}

/// The damped cosine approximant
/// `f_l(theta) = 2 (1 - e^{-4 pi l sin theta} e_{k-2}(4 pi l sin theta)) cos((k-2) theta / 2 + 2 pi l cos theta)`.
pub fn f_damped(l: i64, k: u32, theta: f64) -> f64 {
    2.0 * damping_factor(l, k, theta) * g_phase(l, k, theta).cos()
}

/// The phase `g_mn(theta) = (k-2)/2 * theta + 2 pi mn cos(theta)`.
pub fn g_phase(mn: i64, k: u32, theta: f64) -> f64 {
    (k - 2) as f64 / 2.0 * theta + 2.0 * PI * mn as f64 * theta.cos()
}

/// Inverse of the strictly decreasing phase on `[pi/3, pi/2]`, by bisection
/// to 1e-12 radians. Monotonicity needs `pi sqrt(3) mn > (k-2)/2`.
pub fn g_inverse(mn: i64, k: u32, target: f64) -> Result<f64, ArcError> {
    if PI * 3.0f64.sqrt() * mn as f64 <= (k - 2) as f64 / 2.0 {
        return Err(ArcError::NotMonotone);
    }
    let top = g_phase(mn, k, THETA_LO);
    let bottom = g_phase(mn, k, THETA_HI);
    if target > top + 1e-9 || target < bottom - 1e-9 {
        return Err(ArcError::TargetOutOfRange { target, lo: bottom, hi: top });
    }
    let (mut lo, mut hi) = (THETA_LO, THETA_HI);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if g_phase(mn, k, mid) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The constant `C_F = (1/4) max(80 m^{k-1} sum_l |c_F(-l)|, 1)`, exact.
pub fn c_constant(spec: &WeakEigenformSpec) -> Rational {
    let mk = Rational::from_integer(BigInt::from(spec.m()).pow(spec.k() - 1));
    let candidate = Rational::from_integer(BigInt::from(80)) * mk * spec.principal_abs_sum();
    let max = if candidate >= Rational::one() { candidate } else { Rational::one() };
    max / Rational::from_integer(BigInt::from(4))
}

/// Least `n >= 7` with `C_F n^{k-1} e^{-pi n sqrt(3)/2} < 1`.
pub fn min_valid_n(spec: &WeakEigenformSpec) -> i64 {
    let cf = rational_to_f64(&c_constant(spec));
    let k1 = (spec.k() - 1) as i32;
    let mut n = 7i64;
    loop {
        let value = cf * (n as f64).powi(k1) * (-PI * n as f64 * 3.0f64.sqrt() / 2.0).exp();
        if value < 1.0 {
            return n;
        }
        n += 1;
        assert!(n < 1_000_000, "threshold search runaway");
    }
}

/// Q-series tail bound: `e^{2 pi l sin theta} + 8 l e^{pi l sin theta} + 1.008e8 l^{k-1}`.
pub fn q_bound(l: i64, k: u32, theta: f64) -> f64 {
    let s = theta.sin();
    let lf = l as f64;
    (2.0 * PI * lf * s).exp() + 8.0 * lf * (PI * lf * s).exp() + 1.008e8 * lf.powi(k as i32 - 1)
}

/// Poincare tail bound: `4 e^{2 pi l sin theta} + 1.008e8 l^{k-1}`.
pub fn p_bound(l: i64, k: u32, theta: f64) -> f64 {
    let lf = l as f64;
    4.0 * (2.0 * PI * lf * theta.sin()).exp() + 1.008e8 * lf.powi(k as i32 - 1)
}

/// Remainder bound for the lower-order Poincare pieces:
/// `(8 m^{k-2} n^{k/2} e^{pi (2m-1) n sin theta} + 2.016e8 (mn)^{k-1}) sum_l |c_F(-l)|`.
pub fn r_bound(spec: &WeakEigenformSpec, n: i64, theta: f64) -> f64 {
    let k = spec.k();
    let m = spec.m() as f64;
    let nf = n as f64;
    let mass = rational_to_f64(&spec.principal_abs_sum());
    let main = 8.0
        * m.powi(k as i32 - 2)
        * nf.powi(k as i32 / 2)
        * (PI * (2.0 * m - 1.0) * nf * theta.sin()).exp();
    (main + 2.016e8 * (m * nf).powi(k as i32 - 1)) * mass
}

/// Evenly spaced interior grid on `[pi/3, pi/2]`: `count` points offset by a
/// half step, so the endpoints (where `E~_{k-2}` may vanish) are excluded.
pub fn theta_grid(count: usize) -> Vec<f64> {
    let step = (THETA_HI - THETA_LO) / count as f64;
    (0..count).map(|i| THETA_LO + (i as f64 + 0.5) * step).collect()
}

/// Partial Epstein zeta sum `sum 1/(c^2 + cd + d^2)^6` over nonzero pairs
/// with `max(|c|, |d|) <= cutoff`; the proof of the Q bound uses that the
/// full value stays below 6.0099.
pub fn epstein_partial(cutoff: i64) -> f64 {
    let mut sum = 0.0;
    for c in -cutoff..=cutoff {
        for d in -cutoff..=cutoff {
            if c == 0 && d == 0 {
                continue;
            }
            let norm = (c * c + c * d + d * d) as f64;
            sum += norm.powi(-6);
        }
    }
    sum
}

/// The ratio `(4 pi)^{k-1} / Gamma(k)`, bounded by 31294 for the weights in
/// play; it controls the Bessel-series majorant in the P bound.
pub fn stirling_ratio(k: u32) -> f64 {
    let mut ratio = 1.0;
    for i in 1..k {
        ratio *= 4.0 * PI / i as f64;
    }
    ratio
}

/// One evaluated arc point.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ArcSample {
    pub theta: f64,
    /// j(e^{i theta}), real up to the series tail.
    pub j_val: f64,
    /// Real part of the rotated value `e^{i(2-k) theta/2} H*`.
    pub re_hstar: f64,
    /// The damped-cosine approximant `f_mn(theta)`.
    pub f_val: f64,
    /// `|e^{i(2-k) theta/2} e^{-2 pi mn sin theta} H* - f_mn(theta)|`.
    pub gap: f64,
}

/// Report of sign-change counting between consecutive phase multiples.
#[derive(Clone, Debug, Serialize)]
pub struct SignChangeReport {
    pub expected: usize,
    pub found: usize,
    /// `(theta_i, rotated real value)` at each phase multiple, ascending i
    /// (descending theta).
    pub samples: Vec<(f64, f64)>,
}

/// One row of the per-theta bound table.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ThetaRow {
    pub theta: f64,
    pub qbound: f64,
    pub pbound: f64,
    pub rbound: f64,
    pub lhs_gap: f64,
}

/// Certification constants and the per-theta bound table for one n.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub c_f: f64,
    pub n_min: i64,
    pub per_theta: Vec<ThetaRow>,
}

/// Evaluator for `H*_n = P_n(j) / (Delta^{b(k-2)} E~_{k-2})` along the arc.
/// Construction does all the exact work (Hecke polynomial, series); each
/// point evaluation is then a handful of f64 Horner passes.
pub struct ArcEvaluator {
    k: u32,
    mn: i64,
    poly: RPoly,
    j_series: QSeries,
    den_series: QSeries,
    z_at_pi3: bool,
    z_at_pi2: bool,
}

impl ArcEvaluator {
    /// Default series precision for arc evaluation: |q| <= e^{-pi sqrt(3)}
    /// makes 40 terms overkill by many orders of magnitude.
    pub const DEFAULT_PRECISION: i64 = 40;

    pub fn new(spec: &WeakEigenformSpec, n: i64, precision: i64) -> Result<Self, ArcError> {
        let k = spec.k();
        let b = b_exp(k - 2);
        let needed = (spec.m() * n + b + 16).max(precision);
        let result = hecke_polynomial_with_precision(spec, n, needed)?;
        let den_series = &delta(precision).pow(b as u32) * &tilde_e(k - 2, precision)?;
        let (z_at_pi3, z_at_pi2) = z_endpoints(k);
        Ok(ArcEvaluator {
            k,
            mn: spec.m() * n,
            poly: result.poly,
            j_series: jinv(precision),
            den_series,
            z_at_pi3,
            z_at_pi2,
        })
    }

    pub fn polynomial(&self) -> &RPoly {
        &self.poly
    }

    /// `q = e^{2 pi i e^{i theta}}`, with `|q| = e^{-2 pi sin theta}`.
    fn q_at(theta: f64) -> Complex64 {
        Complex64::from_polar((-2.0 * PI * theta.sin()).exp(), 2.0 * PI * theta.cos())
    }

    /// Numeric `j(e^{i theta})`; real on the arc up to the reported error.
    pub fn j_at(&self, theta: f64) -> crate::specialfn::Real {
        let eval = self.j_series.eval_numeric(Self::q_at(theta)).expect("|q| < 1");
        crate::specialfn::Real {
            value: eval.value.re,
            abs_err: eval.tail_bound + eval.value.im.abs(),
        }
    }

    /// `H*(e^{i theta})` as a raw complex value.
    pub fn hstar(&self, theta: f64) -> Result<Complex64, ArcError> {
        let q = Self::q_at(theta);
        let den = self.den_series.eval_numeric(q).expect("|q| < 1");
        if den.value.norm() < 1e-12 {
            // Expected only where E~_{k-2} is known to vanish (the arc
            // endpoints, which interior grids avoid); in either case the
            // quotient is not computable here.
            debug_assert!(
                (self.z_at_pi3 && (theta - THETA_LO).abs() < 1e-9)
                    || (self.z_at_pi2 && (theta - THETA_HI).abs() < 1e-9),
                "denominator vanished away from a tabulated endpoint"
            );
            return Err(ArcError::DivisorNearZero { theta, modulus: den.value.norm() });
        }
        let j = self.j_series.eval_numeric(q).expect("|q| < 1");
        Ok(self.poly.eval_complex(j.value) / den.value)
    }

    /// `e^{i(2-k) theta/2} H*`, which is real on the arc; the imaginary part
    /// measures accumulated numeric error.
    pub fn rotated_hstar(&self, theta: f64) -> Result<Complex64, ArcError> {
        let phase = Complex64::from_polar(1.0, (2.0 - self.k as f64) * theta / 2.0);
        Ok(phase * self.hstar(theta)?)
    }

    /// The gap `|e^{i(2-k) theta/2} e^{-2 pi mn sin theta} H* - f_mn(theta)|`.
    pub fn cosine_gap(&self, theta: f64) -> Result<f64, ArcError> {
        let rotated = self.rotated_hstar(theta)?;
        let scaled = rotated * (-2.0 * PI * self.mn as f64 * theta.sin()).exp();
        Ok((scaled - f_damped(self.mn, self.k, theta)).norm())
    }

    pub fn sample(&self, theta: f64) -> Result<ArcSample, ArcError> {
        let rotated = self.rotated_hstar(theta)?;
        let scaled = rotated * (-2.0 * PI * self.mn as f64 * theta.sin()).exp();
        let f_val = f_damped(self.mn, self.k, theta);
        Ok(ArcSample {
            theta,
            j_val: self.j_at(theta).value,
            re_hstar: rotated.re,
            f_val,
            gap: (scaled - f_val).norm(),
        })
    }

    /// Evaluate the rotated form at every theta with
    /// `g_mn(theta) = pi i`, `ceil((k-2)/4) <= i <= mn + floor((k-2)/6)`,
    /// and count sign changes between consecutive multiples.
    pub fn verify_sign_changes(&self) -> Result<SignChangeReport, ArcError> {
        let k = self.k as i64;
        let i_lo = (k - 2).div_euclid(4) + i64::from((k - 2).rem_euclid(4) != 0);
        let i_hi = self.mn + (k - 2).div_euclid(6);
        let mut samples = Vec::new();
        for i in i_lo..=i_hi {
            let theta = g_inverse(self.mn, self.k, PI * i as f64)?;
            let value = self.rotated_hstar(theta)?.re;
            samples.push((theta, value));
        }
        let found = samples
            .windows(2)
            .filter(|w| w[0].1.signum() * w[1].1.signum() < 0.0)
            .count();
        Ok(SignChangeReport { expected: (i_hi - i_lo) as usize, found, samples })
    }
}

/// Convenience one-shot wrapper around [`ArcEvaluator::hstar`].
pub fn hstar_eval(
    spec: &WeakEigenformSpec,
    n: i64,
    theta: f64,
    precision: i64,
) -> Result<Complex64, ArcError> {
    ArcEvaluator::new(spec, n, precision)?.hstar(theta)
}

/// Convenience one-shot wrapper around [`ArcEvaluator::cosine_gap`].
pub fn cosine_gap(spec: &WeakEigenformSpec, n: i64, theta: f64) -> Result<f64, ArcError> {
    ArcEvaluator::new(spec, n, ArcEvaluator::DEFAULT_PRECISION)?.cosine_gap(theta)
}

/// Convenience one-shot wrapper around [`ArcEvaluator::verify_sign_changes`].
pub fn verify_sign_changes(
    spec: &WeakEigenformSpec,
    n: i64,
) -> Result<SignChangeReport, ArcError> {
    ArcEvaluator::new(spec, n, ArcEvaluator::DEFAULT_PRECISION)?.verify_sign_changes()
}

/// Certification constants plus the bound table over an interior grid.
pub fn bound_report(
    spec: &WeakEigenformSpec,
    n: i64,
    grid: usize,
) -> Result<BoundReport, ArcError> {
    let evaluator = ArcEvaluator::new(spec, n, ArcEvaluator::DEFAULT_PRECISION)?;
    let mn = spec.m() * n;
    let k = spec.k();
    let mut per_theta = Vec::with_capacity(grid);
    for theta in theta_grid(grid) {
        per_theta.push(ThetaRow {
            theta,
            qbound: q_bound(mn, k, theta),
            pbound: p_bound(mn, k, theta),
            rbound: r_bound(spec, n, theta),
            lhs_gap: evaluator.cosine_gap(theta)?,
        });
    }
    Ok(BoundReport {
        c_f: rational_to_f64(&c_constant(spec)),
        n_min: min_valid_n(spec),
        per_theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::rati;

    fn r_spec() -> WeakEigenformSpec {
        WeakEigenformSpec::builtin_r()
    }

    #[test]
    fn phase_endpoint_values() {
        let k = 12u32;
        for mn in [2i64, 5, 11] {
            let top = g_phase(mn, k, THETA_HI);
            assert!((top - (k - 2) as f64 * PI / 4.0).abs() < 1e-12);
            let bottom = g_phase(mn, k, THETA_LO);
            assert!((bottom - ((k - 2) as f64 * PI / 6.0 + PI * mn as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn g_inverse_round_trips() {
        for (mn, k) in [(2i64, 12u32), (7, 16), (11, 12), (3, 26)] {
            for i in 0..=10 {
                let theta = THETA_LO + (THETA_HI - THETA_LO) * i as f64 / 10.0;
                let back = g_inverse(mn, k, g_phase(mn, k, theta)).unwrap();
                assert!((back - theta).abs() < 1e-10, "mn={mn} k={k} theta={theta}");
            }
        }
        assert_eq!(g_inverse(1, 40, 0.0), Err(ArcError::NotMonotone));
        assert!(matches!(
            g_inverse(2, 12, 1e6),
            Err(ArcError::TargetOutOfRange { .. })
        ));
    }

    #[test]
    fn g_strictly_decreasing_when_promised() {
        for (mn, k) in [(2i64, 12u32), (7, 30), (11, 16)] {
            let grid = theta_grid(64);
            for w in grid.windows(2) {
                assert!(
                    g_phase(mn, k, w[0]) > g_phase(mn, k, w[1]),
                    "mn={mn} k={k} at {},{}",
                    w[0],
                    w[1]
                );
            }
        }
    }

    #[test]
    fn damping_factor_range_and_threshold() {
        // Mathematically the factor lies in (0, 1); in f64 it rounds to
        // exactly 1.0 once e^{-x} e_{k-2}(x) drops below machine epsilon.
        for l in 1..=20i64 {
            for k in [4u32, 12, 20, 30] {
                for theta in theta_grid(16) {
                    let d = damping_factor(l, k, theta);
                    assert!(d > 0.0 && d <= 1.0, "l={l} k={k}: {d}");
                }
            }
        }
        // At theorem scale (l = mn >= 7) the factor clears 0.99 for every
        // weight in play; for the central k = 12 example already at l = 2.
        for l in 2..=40i64 {
            let d = damping_factor(l, 12, THETA_LO);
            assert!(d >= 0.99, "k=12 l={l}: {d}");
        }
        for k in (12..=30u32).step_by(2) {
            for l in 7..=40i64 {
                let d = damping_factor(l, k, THETA_LO);
                assert!(d >= 0.99, "k={k} l={l}: {d}");
            }
        }
        // Outside that range the 0.99 claim genuinely fails.
        assert!(damping_factor(2, 30, THETA_LO) < 0.99);
    }

    #[test]
    fn f_damped_is_bounded_and_vanishes_with_cosine() {
        let (mn, k) = (3i64, 12u32);
        for theta in theta_grid(50) {
            assert!(f_damped(mn, k, theta).abs() <= 2.0);
        }
        // At a phase multiple of pi the cosine is +-1; halfway targets of
        // pi/2 parity make it vanish.
        let theta = g_inverse(mn, k, PI * 3.0 + PI / 2.0).unwrap();
        assert!(f_damped(mn, k, theta).abs() < 1e-10);
    }

    #[test]
    fn constants_for_the_central_example() {
        let r = r_spec();
        assert_eq!(c_constant(&r), rati(20));
        assert_eq!(min_valid_n(&r), 11);
    }

    #[test]
    fn c_constant_floor_applies() {
        // A tiny principal mass still yields C_F >= 1/4 via the max(..., 1).
        use crate::hecke::EigenvalueSource;
        use crate::qseries::rat;
        use std::collections::BTreeMap;
        let spec = WeakEigenformSpec::new(
            12,
            1,
            vec![rati(1)],
            rat(1, 1000),
            EigenvalueSource::List { values: BTreeMap::new() },
        )
        .unwrap();
        // principal mass is |c(-1)| = 1, so the max picks 80.
        assert_eq!(c_constant(&spec), rati(20));
        assert!(c_constant(&r_spec()) >= rat(1, 4));
    }

    #[test]
    fn proof_constants() {
        let partial = epstein_partial(200);
        assert!(partial <= 6.0099, "Epstein partial {partial}");
        assert!(partial > 6.0, "Epstein partial should be close to its cap");
        let mut worst: f64 = 0.0;
        for k in (12..=60u32).step_by(2) {
            worst = worst.max(stirling_ratio(k));
        }
        assert!(worst <= 31294.0, "Stirling ratio {worst}");
        assert!((stirling_ratio(14) - worst).abs() < 1e-9, "maximum sits at k = 14");
    }

    #[test]
    fn j_is_real_and_monotone_on_arc() {
        let e = ArcEvaluator::new(&r_spec(), 2, 40).unwrap();
        let ends = (e.j_at(THETA_LO), e.j_at(THETA_HI));
        assert!(ends.0.value.abs() < 1e-8, "j(omega) = 0, got {}", ends.0.value);
        assert!((ends.1.value - 1728.0).abs() < 1e-8, "j(i) = 1728, got {}", ends.1.value);
        let mut prev = -1.0;
        for theta in theta_grid(40) {
            let j = e.j_at(theta);
            assert!(j.abs_err < 1e-8);
            assert!(j.value > prev, "j increasing along theta");
            assert!((-1e-6..=1728.000001).contains(&j.value));
            prev = j.value;
        }
    }

    #[test]
    fn golden_hstar_is_real_and_matches_polynomial() {
        // For the R spec at n = 2: H* = P_2(j) = j(j - 1728) exactly
        // (b = 0, E~_10 in the denominator), so the rotated value must be
        // P_2 at the real j, up to the phase convention.
        let e = ArcEvaluator::new(&r_spec(), 2, 40).unwrap();
        for theta in theta_grid(9) {
            let rotated = e.rotated_hstar(theta).unwrap();
            assert!(
                rotated.im.abs() <= 1e-8 * rotated.re.abs().max(1.0),
                "realness at theta={theta}: {rotated}"
            );
        }
    }

    #[test]
    fn gap_below_two_at_theorem_scale() {
        let e = ArcEvaluator::new(&r_spec(), 11, 40).unwrap();
        for theta in theta_grid(25) {
            let gap = e.cosine_gap(theta).unwrap();
            assert!(gap < 2.0, "theta={theta}: gap {gap}");
        }
    }

    #[test]
    fn gap_bounded_by_qr_chain() {
        // gap <= e^{-2 pi mn sin theta} (q_bound + r_bound), the literal
        // inequality chain of the lemma.
        let r = r_spec();
        for n in [11i64, 15] {
            let e = ArcEvaluator::new(&r, n, 40).unwrap();
            for theta in theta_grid(12) {
                let gap = e.cosine_gap(theta).unwrap();
                let scale = (-2.0 * PI * n as f64 * theta.sin()).exp();
                let rhs = scale * (q_bound(n, 12, theta) + r_bound(&r, n, theta));
                assert!(gap <= rhs, "n={n} theta={theta}: {gap} vs {rhs}");
            }
        }
    }

    #[test]
    fn sign_changes_at_n_11() {
        let report = verify_sign_changes(&r_spec(), 11).unwrap();
        assert_eq!(report.expected, 9); // 11 + 1 - 3
        assert_eq!(report.found, 9);
        assert_eq!(report.samples.len(), 10);
    }

    #[test]
    fn sign_change_index_arithmetic_below_threshold() {
        // n = 2 sits outside the guarantee; the index range is empty of
        // interior changes (expected = 0) and the machinery still runs.
        let report = verify_sign_changes(&r_spec(), 2).unwrap();
        assert_eq!(report.expected, 0);
        assert_eq!(report.samples.len(), 1);
    }

    #[test]
    fn bound_report_shape() {
        let report = bound_report(&r_spec(), 11, 16).unwrap();
        assert_eq!(report.c_f, 20.0);
        assert_eq!(report.n_min, 11);
        assert_eq!(report.per_theta.len(), 16);
        for row in &report.per_theta {
            assert!(row.lhs_gap < 2.0);
            assert!(row.qbound > 0.0 && row.pbound > 0.0 && row.rbound > 0.0);
        }
    }

    #[test]
    fn numeric_vs_series_consistency() {
        // Polynomial-side evaluation agrees with direct series evaluation
        // of P_n(j) * Delta^b E~ against the H_n expansion.
        let r = r_spec();
        for n in [2i64, 3] {
            let precision = 40;
            let e = ArcEvaluator::new(&r, n, precision).unwrap();
            let j = jinv(precision);
            let mut series = QSeries::zero(j.precision() - n);
            let mut jpow = QSeries::one(j.precision() + 1);
            for d in 0..=e.poly.degree().unwrap() {
                series = &series + &jpow.scale(&e.poly.coeff(d));
                jpow = &jpow * &j;
            }
            for theta in theta_grid(10) {
                let q = ArcEvaluator::q_at(theta);
                let direct = series.eval_numeric(q).unwrap();
                let via_poly = e.hstar(theta).unwrap()
                    * e.den_series.eval_numeric(q).unwrap().value;
                let slack = direct.tail_bound + 1e-6 * direct.value.norm().max(1.0);
                assert!(
                    (direct.value - via_poly).norm() <= slack,
                    "n={n} theta={theta}: {} vs {}",
                    direct.value,
                    via_poly
                );
            }
        }
    }
}
