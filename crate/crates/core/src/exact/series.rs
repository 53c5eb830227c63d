//! Truncated Laurent series in ℏ with polynomial coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed};

use super::poly::{factorial, fmt_rational, MultiPoly, Rational, Ring};
use crate::error::{Error, Result};

/// `Σ_k c_k ℏ^k`. When `truncation` is `Some(N)` the series is only known
/// modulo `ℏ^{N+1}` and no exponent above `N` is stored; `None` marks an exact
/// Laurent polynomial.
#[derive(Clone, PartialEq, Eq)]
pub struct HbarSeries {
    ring: Ring,
    coeffs: BTreeMap<i64, MultiPoly>,
    truncation: Option<i64>,
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl HbarSeries {
    pub fn zero(ring: &Ring, truncation: Option<i64>) -> Self {
        HbarSeries {
            ring: ring.clone(),
            coeffs: BTreeMap::new(),
            truncation,
        }
    }

    /// The unit series `1·ℏ⁰`.
    pub fn one() -> Self {
        Self::scalar(Rational::one())
    }

    pub fn scalar(c: Rational) -> Self {
        Self::exact(MultiPoly::scalar(c))
    }

    pub fn exact(p: MultiPoly) -> Self {
        Self::monomial(p, 0)
    }

    /// `p·ℏ^k`, exact.
    pub fn monomial(p: MultiPoly, k: i64) -> Self {
        let mut s = Self::zero(p.ring(), None);
        if !p.is_zero() {
            s.coeffs.insert(k, p);
        }
        s
    }

    pub fn from_coeffs<I>(ring: &Ring, coeffs: I, truncation: Option<i64>) -> Self
    where
        I: IntoIterator<Item = (i64, MultiPoly)>,
    {
        let mut s = Self::zero(ring, truncation);
        for (k, p) in coeffs {
            s.add_coeff(k, p.embed(ring));
        }
        s
    }

    fn add_coeff(&mut self, k: i64, p: MultiPoly) {
        if self.truncation.is_some_and(|n| k > n) || p.is_zero() {
            return;
        }
        let entry = self
            .coeffs
            .entry(k)
            .or_insert_with(|| MultiPoly::zero(&p.ring().clone()));
        *entry = &*entry + &p;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn truncation(&self) -> Option<i64> {
        self.truncation
    }

    pub fn is_exact(&self) -> bool {
        self.truncation.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn min_order(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_order(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Coefficient of `ℏ^k`; zero when absent.
    pub fn coeff(&self, k: i64) -> MultiPoly {
        self.coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(&self.ring))
    }

    /// Coefficient of `ℏ^k` as a scalar; panics if it is not constant.
    pub fn scalar_coeff(&self, k: i64) -> Rational {
        let c = self.coeff(k);
        assert!(c.is_constant(), "coefficient of h^{k} is not a scalar: {c}");
        c.constant_term()
    }

    pub fn is_known(&self, k: i64) -> bool {
        self.truncation.is_none_or(|n| k <= n)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &MultiPoly)> {
        self.coeffs.iter().map(|(k, p)| (*k, p))
    }

    /// Drops everything above `ℏ^n`.
    pub fn truncate(&self, n: i64) -> Self {
        let truncation = min_opt(self.truncation, Some(n));
        HbarSeries {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(k, _)| **k <= truncation.unwrap())
                .map(|(k, p)| (*k, p.clone()))
                .collect(),
            truncation,
        }
    }

    /// Multiplies by `ℏ^k`.
    pub fn shift(&self, k: i64) -> Self {
        HbarSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|(e, p)| (e + k, p.clone())).collect(),
            truncation: self.truncation.map(|n| n + k),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map_coeffs(|p| p.scale(c))
    }

    pub fn map_coeffs<F: FnMut(&MultiPoly) -> MultiPoly>(&self, mut f: F) -> Self {
        let mut out = HbarSeries::zero(&self.ring, self.truncation);
        for (k, p) in &self.coeffs {
            let q = f(p);
            if out.coeffs.is_empty() && out.ring != *q.ring() && !q.ring().is_scalar() {
                out.ring = q.ring().clone();
            }
            out.add_coeff(*k, q);
        }
        out
    }

    /// Valuation for error propagation: a truncated zero is `O(ℏ^{N+1})`,
    /// an exact zero has infinite valuation.
    fn effective_valuation(&self) -> Option<i64> {
        self.min_order().or(self.truncation.map(|n| n + 1))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let ring = self.ring.unify(&other.ring)?;
        let mut out = HbarSeries::zero(&ring, min_opt(self.truncation, other.truncation));
        for (k, p) in self.coeffs.iter().chain(other.coeffs.iter()) {
            out.add_coeff(*k, p.embed(&ring));
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let ring = self.ring.unify(&other.ring)?;
        let mut truncation = None;
        if let Some(n) = self.truncation {
            truncation = min_opt(truncation, other.effective_valuation().map(|v| n + v));
        }
        if let Some(n) = other.truncation {
            truncation = min_opt(truncation, self.effective_valuation().map(|v| n + v));
        }
        let mut out = HbarSeries::zero(&ring, truncation);
        for (i, p) in &self.coeffs {
            for (j, q) in &other.coeffs {
                if truncation.is_some_and(|n| i + j > n) {
                    continue;
                }
                out.add_coeff(i + j, p.checked_mul(q)?.embed(&ring));
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse, known at least up to `ℏ^order`. The leading
    /// coefficient must be a nonzero constant.
    pub fn inverse(&self, order: i64) -> Result<Self> {
        let v = self.min_order().ok_or(Error::NotInvertible)?;
        let lead = self.coeff(v);
        if !lead.is_constant() {
            return Err(Error::NotInvertible);
        }
        let lead_inv = lead.constant_term().recip();
        if self.is_exact() && self.coeffs.len() == 1 {
            return Ok(HbarSeries::monomial(
                MultiPoly::constant(&self.ring, lead_inv),
                -v,
            ));
        }
        // u = ℏ^{-v}·self = lead·(1 + …); u^{-1} by the usual recurrence.
        let out_trunc = match self.truncation {
            Some(n) => order.min(n - 2 * v),
            None => order,
        };
        let terms = (out_trunc + v + 1).max(0) as usize;
        let a: Vec<MultiPoly> = (0..terms as i64).map(|k| self.coeff(v + k)).collect();
        let mut b: Vec<MultiPoly> = Vec::with_capacity(terms);
        for k in 0..terms {
            if k == 0 {
                b.push(MultiPoly::constant(&self.ring, lead_inv.clone()));
                continue;
            }
            let mut s = MultiPoly::zero(&self.ring);
            for j in 1..=k {
                s = s + &a[j] * &b[k - j];
            }
            b.push(s.scale(&-lead_inv.clone()));
        }
        Ok(HbarSeries::from_coeffs(
            &self.ring,
            b.into_iter().enumerate().map(|(k, p)| (k as i64 - v, p)),
            Some(out_trunc),
        ))
    }

    /// `self / other`, known up to `ℏ^order` where the inputs allow it.
    pub fn div(&self, other: &Self, order: i64) -> Result<Self> {
        let v = self.min_order().unwrap_or(0);
        let inv = other.inverse(order - v)?;
        Ok(self.checked_mul(&inv)?.truncate(order))
    }

    /// Equality of all coefficients both series determine.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let common = min_opt(self.truncation, other.truncation);
        let keys: std::collections::BTreeSet<i64> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .copied()
            .filter(|k| common.is_none_or(|n| *k <= n))
            .collect();
        keys.into_iter().all(|k| {
            self.coeff(k)
                .checked_sub(&other.coeff(k))
                .map(|d| d.is_zero())
                .unwrap_or(false)
        })
    }
}

/// Taylor series of `e^{aℏ}` through `ℏ^order`.
pub fn exp_hbar(a: &Rational, order: i64) -> HbarSeries {
    let order = order.max(0);
    let coeffs = (0..=order).map(|k| {
        let c = num_traits::pow(a.clone(), k as usize) / factorial(k as u32);
        (k, MultiPoly::scalar(c))
    });
    HbarSeries::from_coeffs(&Ring::scalar(), coeffs, Some(order))
}

macro_rules! series_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&HbarSeries> for &HbarSeries {
            type Output = HbarSeries;
            fn $method(self, rhs: &HbarSeries) -> HbarSeries {
                let f: fn(&HbarSeries, &HbarSeries) -> Result<HbarSeries> = $body;
                f(self, rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<HbarSeries> for HbarSeries {
            type Output = HbarSeries;
            fn $method(self, rhs: HbarSeries) -> HbarSeries {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&HbarSeries> for HbarSeries {
            type Output = HbarSeries;
            fn $method(self, rhs: &HbarSeries) -> HbarSeries {
                (&self).$method(rhs)
            }
        }
    };
}

series_binop!(Add, add, |a, b| a.checked_add(b));
series_binop!(Sub, sub, |a, b| a.checked_add(&-b));
series_binop!(Mul, mul, |a, b| a.checked_mul(b));

impl Neg for &HbarSeries {
    type Output = HbarSeries;
    fn neg(self) -> HbarSeries {
        self.map_coeffs(|p| -p)
    }
}

impl Neg for HbarSeries {
    type Output = HbarSeries;
    fn neg(self) -> HbarSeries {
        -&self
    }
}

fn hbar_power(k: i64) -> String {
    match k {
        0 => String::new(),
        1 => "h".into(),
        _ => format!("h^{k}"),
    }
}

/// Ascending in ℏ, e.g. `1 - 1/4*h + 1/32*h^2 + O(h^3)`.
impl fmt::Display for HbarSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, p) in &self.coeffs {
            let h = hbar_power(*k);
            let (neg, body) = if p.is_constant() {
                let c = p.constant_term();
                let abs = c.abs();
                let body = if h.is_empty() {
                    fmt_rational(&abs)
                } else if abs.is_one() {
                    h.clone()
                } else {
                    format!("{}*{h}", fmt_rational(&abs))
                };
                (c.is_negative(), body)
            } else {
                let inner = p.to_string();
                let body = if p.num_terms() == 1 {
                    let (neg, rest) = match inner.strip_prefix('-') {
                        Some(r) => (true, r.to_string()),
                        None => (false, inner),
                    };
                    let body = if h.is_empty() { rest } else { format!("{rest}*{h}") };
                    write_term(f, &mut first, neg, &body)?;
                    continue;
                } else if h.is_empty() {
                    format!("({inner})")
                } else {
                    format!("({inner})*{h}")
                };
                (false, body)
            };
            write_term(f, &mut first, neg, &body)?;
        }
        if first {
            write!(f, "0")?;
            first = false;
        }
        if let Some(n) = self.truncation {
            let _ = first;
            write!(f, " + O({})", {
                let s = hbar_power(n + 1);
                if s.is_empty() {
                    "1".to_string()
                } else {
                    s
                }
            })?;
        }
        Ok(())
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, first: &mut bool, neg: bool, body: &str) -> fmt::Result {
    if *first {
        *first = false;
        write!(f, "{}{body}", if neg { "-" } else { "" })
    } else {
        write!(f, " {} {body}", if neg { "-" } else { "+" })
    }
}

impl fmt::Debug for HbarSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HbarSeries({self})")
    }
}
