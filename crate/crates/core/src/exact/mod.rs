//! Exact arithmetic: rationals, sparse polynomials and truncated ℏ-series.

pub mod linalg;
mod poly;
mod series;

pub use poly::{factorial, int, rat, rational_to_f64, Monomial, MultiPoly, Rational, Ring};
pub use series::{exp_hbar, HbarSeries};
pub(crate) use poly::fmt_rational;

/// Default series truncation order.
pub const DEFAULT_ORDER: i64 = 8;
