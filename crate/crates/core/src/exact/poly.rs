//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `n / d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `k!` as a rational.
pub fn factorial(k: u32) -> Rational {
    (1..=k as i64).fold(Rational::one(), |acc, i| acc * int(i))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Ordered set of variable names. Two polynomials can only be combined when
/// their rings agree; the variable-free scalar ring embeds into every ring.
#[derive(Clone)]
pub struct Ring {
    vars: Arc<[String]>,
}

impl Ring {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vars: Vec<String> = names.into_iter().map(Into::into).collect();
        Ring { vars: vars.into() }
    }

    pub fn scalar() -> Self {
        Ring::new(Vec::<String>::new())
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn is_scalar(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.vars
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn var(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub(crate) fn mismatch(&self, other: &Ring) -> Error {
        Error::RingMismatch {
            left: self.vars.join(","),
            right: other.vars.join(","),
        }
    }

    /// The ring both operands can be embedded in, if any.
    pub fn unify(&self, other: &Ring) -> Result<Ring> {
        if self == other || other.is_scalar() {
            Ok(self.clone())
        } else if self.is_scalar() {
            Ok(other.clone())
        } else {
            Err(self.mismatch(other))
        }
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring[{}]", self.vars.join(","))
    }
}

pub type Monomial = Vec<u32>;

fn total_degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

/// Graded-lexicographic comparison, larger first.
fn grlex_desc(a: &[u32], b: &[u32]) -> Ordering {
    total_degree(b)
        .cmp(&total_degree(a))
        .then_with(|| b.cmp(a))
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    ring: Ring,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(ring: &Ring) -> Self {
        MultiPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Ring, c: Rational) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(vec![0; ring.len()], c);
        }
        p
    }

    pub fn scalar(c: Rational) -> Self {
        Self::constant(&Ring::scalar(), c)
    }

    pub fn var(ring: &Ring, name: &str) -> Result<Self> {
        Ok(Self::var_at(ring, ring.var(name)?))
    }

    pub fn var_at(ring: &Ring, index: usize) -> Self {
        let mut exps = vec![0; ring.len()];
        exps[index] = 1;
        Self::monomial(ring, exps, Rational::one())
    }

    pub fn monomial(ring: &Ring, exps: Monomial, coeff: Rational) -> Self {
        assert_eq!(exps.len(), ring.len(), "exponent vector length");
        let mut p = Self::zero(ring);
        if !coeff.is_zero() {
            p.terms.insert(exps, coeff);
        }
        p
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, summing repeats.
    pub fn from_terms<I>(ring: &Ring, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.len(), self.ring.len());
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(m, c)| (m.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| total_degree(m) == 0)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&vec![0; self.ring.len()])
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| total_degree(m)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| total_degree(m));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| total_degree(m) == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Formal partial derivative with respect to a named variable.
    pub fn diff(&self, var: &str) -> Result<Self> {
        Ok(self.diff_at(self.ring.var(var)?))
    }

    pub fn diff_at(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut e = m.clone();
            e[i] -= 1;
            out.add_term(e, c * int(m[i] as i64));
        }
        out
    }

    /// Applies `∂_i ∂_j`.
    pub fn diff2_at(&self, i: usize, j: usize) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut e = m.clone();
            let a = e[i];
            if a == 0 {
                continue;
            }
            e[i] -= 1;
            let b = e[j];
            if b == 0 {
                continue;
            }
            e[j] -= 1;
            out.add_term(e, c * int(a as i64 * b as i64));
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.ring.len(), "evaluation point dimension");
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&e, x)| acc * num_traits::pow(x.clone(), e as usize))
            })
            .sum()
    }

    /// Ring homomorphism sending the i-th variable to `images[i]`.
    pub fn substitute(&self, target: &Ring, images: &[MultiPoly]) -> Result<Self> {
        if images.len() != self.ring.len() {
            return Err(self.ring.mismatch(target));
        }
        for img in images {
            target.unify(img.ring())?;
        }
        // Cache powers of each image.
        let mut powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|img| vec![Self::one(target), img.embed(target)])
            .collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut t = Self::constant(target, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &powers[i][1];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = out + t;
        }
        Ok(out)
    }

    /// Re-expresses `self` in `ring`; `self` must already live there or be scalar.
    pub(crate) fn embed(&self, ring: &Ring) -> Self {
        if &self.ring == ring {
            return self.clone();
        }
        assert!(
            self.ring.is_scalar() || self.is_zero(),
            "cannot embed {:?} into {:?}",
            self.ring,
            ring
        );
        Self::constant(ring, self.constant_term())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let ring = self.ring.unify(&other.ring)?;
        let mut out = self.embed(&ring);
        for (m, c) in other.embed(&ring).terms {
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let ring = self.ring.unify(&other.ring)?;
        let (a, b) = (self.embed(&ring), other.embed(&ring));
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                *acc.entry(m).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Ok(MultiPoly {
            ring,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    /// Terms in canonical (graded-lex, descending) order.
    pub fn sorted_terms(&self) -> Vec<(&[u32], &Rational)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|a, b| grlex_desc(a.0, b.0));
        v
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$method(rhs)
            }
        }
        impl $trait<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_monomial(ring: &Ring, m: &[u32]) -> String {
    m.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                ring.names()[i].clone()
            } else {
                format!("{}^{}", ring.names()[i], e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Canonical rendering: graded-lex descending, e.g. `1/2*H^2 + 2*E*F`.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono = fmt_monomial(&self.ring, m);
            if mono.is_empty() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", fmt_rational(&abs))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}
