//! Hecke polynomials attached to weak Hecke eigenforms, and the zeros they
//! place on the boundary arc of the modular fundamental domain.
//!
//! The crate is organised bottom-up:
//!
//! * [`qseries`] -- truncated Laurent q-expansions over exact rationals,
//!   Bernoulli numbers, numeric series evaluation.
//! * [`rpoly`] -- dense univariate polynomials with rational coefficients.
//! * [`modforms`] -- Eisenstein series, Delta, the j-function, Faber
//!   polynomials and divisor polynomials of holomorphic forms.
//! * [`hecke`] -- Hecke operators on q-expansions, in particular the exact
//!   action on principal parts in negative weight, and eigenvalue sources.
//! * [`heckepoly`] -- the main construction: for a weak eigenform spec `F`
//!   and an index `n`, the monic polynomial `P_n(F; x)` with
//!   `P_n(F; j) = Delta^b * E~ * (n^(k-1) F|T(n) - a(n) F)`.
//! * [`specialfn`] -- Kloosterman sums, I/J-Bessel series, truncated
//!   exponentials, a closed-form Whittaker M, and Maass-Poincare coefficient
//!   series.
//! * [`arcbounds`] -- the analytic side: the damped cosine model of
//!   `P_n(F; j(e^(i theta)))` on the arc, phase inversion, and the explicit
//!   Q/P/R bounds that force sign changes.
//! * [`roots`] -- exact Sturm isolation of the zeros in `[0, 1728]`,
//!   bisection refinement, the pullback to the arc, and equidistribution
//!   diagnostics.

pub mod arcbounds;
pub mod hecke;
pub mod heckepoly;
pub mod modforms;
pub mod qseries;
pub mod roots;
pub mod rpoly;
pub mod specialfn;

pub use heckepoly::{HeckePolyResult, WeakEigenformSpec};
pub use qseries::{QSeries, Rational};
pub use rpoly::RPoly;
