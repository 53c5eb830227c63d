//! Laplacians on quadratic spaces and the Gaussian evaluation operators.
//!
//! `e_op` is `exp(-Δ/(2fℏ))` followed by evaluation at the origin. On the
//! Cartan side everything is written in weight coordinates, with the coroot
//! Gram supplying the Laplacian.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::linalg::{self, Matrix};
use crate::exact::{exp_hbar, factorial, int, HbarSeries, MultiPoly, Rational, Ring};
use crate::liealg::{is_invariant, restrict, LieAlgebraData};
use crate::rootsys::{weyl_group, RootSystem};

#[derive(Debug, Clone)]
pub struct QuadraticSpace {
    ring: Ring,
    gram: Matrix,
    /// Nonzero entries of the Gram matrix with `i ≤ j`, off-diagonal ones doubled.
    pairs: Vec<(usize, usize, Rational)>,
}

impl QuadraticSpace {
    pub fn new(ring: Ring, gram: Matrix) -> Result<Self> {
        let n = ring.len();
        if gram.len() != n || gram.iter().any(|r| r.len() != n) {
            return Err(Error::LengthMismatch(gram.len(), n));
        }
        if !linalg::is_symmetric(&gram) {
            return Err(Error::Config("Gram matrix is not symmetric".into()));
        }
        if linalg::determinant(&gram).is_zero() {
            return Err(Error::DegenerateForm);
        }
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i..n {
                let g = &gram[i][j];
                if !g.is_zero() {
                    pairs.push((i, j, if i == j { g.clone() } else { g * int(2) }));
                }
            }
        }
        Ok(QuadraticSpace { ring, gram, pairs })
    }

    /// `𝔤*` with the trace form.
    pub fn coadjoint(l: &LieAlgebraData) -> Self {
        Self::new(l.ring().clone(), l.gram().clone()).expect("trace form is nondegenerate")
    }

    /// `𝔥*` in weight coordinates.
    pub fn cartan(rs: &RootSystem) -> Self {
        Self::new(rs.coord_ring().clone(), rs.coroot_gram().clone()).expect("coroot Gram is definite")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.ring.len()
    }

    fn check(&self, p: &MultiPoly) -> Result<MultiPoly> {
        if p.ring().is_scalar() {
            return Ok(p.embed(&self.ring));
        }
        if p.ring() != &self.ring {
            return Err(p.ring().mismatch(&self.ring));
        }
        Ok(p.clone())
    }

    fn apply(&self, p: &MultiPoly) -> MultiPoly {
        self.pairs
            .iter()
            .fold(MultiPoly::zero(&self.ring), |acc, (i, j, g)| {
                acc + p.diff2_at(*i, *j).scale(g)
            })
    }
}

/// Nonzero integer framing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Framing(i64);

impl Framing {
    pub fn new(f: i64) -> Result<Self> {
        if f == 0 {
            Err(Error::ZeroFraming)
        } else {
            Ok(Framing(f))
        }
    }

    pub fn value(self) -> i64 {
        self.0
    }

    pub fn sign(self) -> Framing {
        Framing(self.0.signum())
    }
}

/// `Δ p = Σ G_ij ∂_i ∂_j p`.
pub fn laplacian(space: &QuadraticSpace, p: &MultiPoly) -> Result<MultiPoly> {
    Ok(space.apply(&space.check(p)?))
}

pub fn laplacian_pow(space: &QuadraticSpace, p: &MultiPoly, k: u32) -> Result<MultiPoly> {
    let mut q = space.check(p)?;
    for _ in 0..k {
        if q.is_zero() {
            break;
        }
        q = space.apply(&q);
    }
    Ok(q)
}

/// `Σ_d (-1/(2fℏ))^d Δ^d(p)(0)/d!`, an exact Laurent polynomial in ℏ.
pub fn e_op(space: &QuadraticSpace, f: Framing, p: &MultiPoly) -> Result<HbarSeries> {
    let mut q = space.check(p)?;
    let step = Rational::new((-1).into(), (2 * f.0).into());
    let mut coeffs = Vec::new();
    let mut d: u32 = 0;
    while !q.is_zero() {
        let c = q.constant_term();
        if !c.is_zero() {
            let w = num_traits::pow(step.clone(), d as usize) / factorial(d);
            coeffs.push((-(d as i64), MultiPoly::scalar(c * w)));
        }
        q = space.apply(&q);
        d += 1;
    }
    Ok(HbarSeries::from_coeffs(&Ring::scalar(), coeffs, None))
}

/// `e_op` applied coefficientwise to `Σ_j p_j ℏ^j`.
///
/// `degree_excess` bounds `deg p_j − j` for every coefficient, including those
/// beyond the input truncation; it determines how far the output is known.
pub fn e_op_series(
    space: &QuadraticSpace,
    f: Framing,
    s: &HbarSeries,
    degree_excess: i64,
) -> Result<HbarSeries> {
    let mut out = HbarSeries::zero(&Ring::scalar(), None);
    for (j, p) in s.coeffs() {
        out = out.checked_add(&e_op(space, f, p)?.shift(j))?;
    }
    match s.truncation() {
        None => Ok(out),
        Some(n) => {
            // unknown terms contribute only from ℏ^{⌈(n+1-K)/2⌉} on
            let first_unknown = (n + 1 - degree_excess).div_euclid(2) + (n + 1 - degree_excess).rem_euclid(2);
            Ok(out.truncate(first_unknown - 1))
        }
    }
}

/// `Π_j e_op(f_j, p_j)`.
pub fn e_op_multi(space: &QuadraticSpace, framings: &[Framing], factors: &[MultiPoly]) -> Result<HbarSeries> {
    if framings.len() != factors.len() {
        return Err(Error::LengthMismatch(factors.len(), framings.len()));
    }
    framings
        .iter()
        .zip(factors)
        .try_fold(HbarSeries::one(), |acc, (f, p)| acc.checked_mul(&e_op(space, *f, p)?))
}

fn compositions(k: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![k]];
    }
    let mut out = Vec::new();
    for first in (0..=k).rev() {
        for mut rest in compositions(k - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn double_factorial(n: i64) -> Rational {
    let mut r = Rational::one();
    let mut k = n;
    while k > 1 {
        r *= int(k);
        k -= 2;
    }
    r
}

/// Writes a homogeneous form of degree `k` as `Σ_c a_c (c·n)^k` over the
/// compositions `c` of `k`; these powers form a basis of degree-`k` forms.
pub fn power_decomposition(p: &MultiPoly, k: u32) -> Result<Vec<(Vec<u32>, Rational)>> {
    let ring = p.ring();
    let r = ring.len();
    let comps = compositions(k, r);
    let monos = compositions(k, r);
    let powers: Vec<MultiPoly> = comps
        .iter()
        .map(|c| {
            c.iter()
                .enumerate()
                .fold(MultiPoly::zero(ring), |acc, (i, &ci)| {
                    acc + MultiPoly::var_at(ring, i).scale(&int(ci as i64))
                })
                .pow(k)
        })
        .collect();
    let coeff_of = |q: &MultiPoly, m: &[u32]| -> Rational {
        q.terms()
            .find(|(e, _)| *e == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    };
    let a: Matrix = monos
        .iter()
        .map(|m| powers.iter().map(|q| coeff_of(q, m)).collect())
        .collect();
    let b: Matrix = monos.iter().map(|m| vec![coeff_of(p, m)]).collect();
    let x = linalg::solve(&a, &b).ok_or(Error::DegenerateForm)?;
    Ok(comps
        .into_iter()
        .zip(x)
        .filter(|(_, v)| !v[0].is_zero())
        .map(|(c, v)| (c, v[0].clone()))
        .collect())
}

/// `𝒪^(f)` extended linearly from its values on powers of linear forms:
/// `β^{2d} ↦ q^{-f|ρ|²/2} (2d−1)!! (−|β|²/f)^d ℏ^{-d}`, odd powers to 0.
/// The result is known through `ℏ^order`.
pub fn o_op(rs: &RootSystem, f: Framing, p: &MultiPoly, order: i64) -> Result<HbarSeries> {
    let space = QuadraticSpace::cartan(rs);
    let p = space.check(p)?;
    let g = rs.coroot_gram();
    let mut laurent = HbarSeries::zero(&Ring::scalar(), None);
    let top = p.degree().unwrap_or(0);
    for k in (0..=top).step_by(2) {
        let part = p.homogeneous_part(k);
        if part.is_zero() {
            continue;
        }
        let d = (k / 2) as i64;
        let mut total = Rational::zero();
        for (c, a) in power_decomposition(&part, k)? {
            let cq: Vec<Rational> = c.iter().map(|&x| int(x as i64)).collect();
            let beta2 = linalg::dot(&cq, g, &cq);
            let v = -beta2 / int(f.0);
            total += a * double_factorial(2 * d - 1) * num_traits::pow(v, d as usize);
        }
        laurent = laurent.checked_add(&HbarSeries::monomial(MultiPoly::scalar(total), -d))?;
    }
    let depth = laurent.min_order().map_or(0, |v| -v).max(0);
    let prefactor = rho_prefactor(rs, f, order + depth);
    Ok(prefactor.checked_mul(&laurent)?.truncate(order))
}

/// `q^{-f|ρ|²/2}` with `q = e^ℏ`.
pub fn rho_prefactor(rs: &RootSystem, f: Framing, order: i64) -> HbarSeries {
    let rho2 = rs.invariants().rho_norm_sq;
    exp_hbar(&(-rho2 * int(f.0) / int(2)), order)
}

/// `𝒪^(f)(p)` against `q^{-f|ρ|²/2} ℰ^(f)(p)`.
pub fn o_eq_e_check(
    rs: &RootSystem,
    f: Framing,
    p: &MultiPoly,
    order: i64,
) -> Result<(HbarSeries, HbarSeries)> {
    let lhs = o_op(rs, f, p, order)?;
    let e = e_op(&QuadraticSpace::cartan(rs), f, p)?;
    let depth = e.min_order().map_or(0, |v| -v).max(0);
    let rhs = rho_prefactor(rs, f, order + depth).checked_mul(&e)?.truncate(order);
    Ok((lhs, rhs))
}

/// `c = Δ_{𝔥*}^{φ₊}(𝒟²)/φ₊!`.
pub fn c_constant(rs: &RootSystem) -> Rational {
    let phi = rs.invariants().phi_plus as u32;
    let d = rs.disc_poly();
    let q = laplacian_pow(&QuadraticSpace::cartan(rs), &(&d * &d), phi).expect("same ring");
    q.constant_term() / factorial(phi)
}

fn require_invariant(l: &LieAlgebraData, p: &MultiPoly) -> Result<()> {
    if is_invariant(l, p)? {
        Ok(())
    } else {
        Err(Error::NotInvariant(p.to_string()))
    }
}

/// `𝒟·𝒫(Δ_{𝔤*} p)` and `Δ_{𝔥*}(𝒟·𝒫(p))`.
pub fn check_hcrf(l: &LieAlgebraData, p: &MultiPoly) -> Result<(MultiPoly, MultiPoly)> {
    let p = QuadraticSpace::coadjoint(l).check(p)?;
    require_invariant(l, &p)?;
    let rs = l.root_system();
    let g = QuadraticSpace::coadjoint(l);
    let h = QuadraticSpace::cartan(rs);
    let d = rs.disc_poly();
    let lhs = &d * &restrict(l, &laplacian(&g, &p)?)?;
    let rhs = laplacian(&h, &(&d * &restrict(l, &p)?))?;
    Ok((lhs, rhs))
}

/// `(c/d!) Δ_{𝔤*}^d(p)` and `Δ_{𝔥*}^{d+φ₊}(𝒟²𝒫(p))/(d+φ₊)!` for `p` of degree `2d`.
pub fn check_dhd(l: &LieAlgebraData, p: &MultiPoly) -> Result<(Rational, Rational)> {
    let g = QuadraticSpace::coadjoint(l);
    let p = g.check(p)?;
    if !p.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let deg = p.degree().unwrap_or(0);
    if deg % 2 == 1 {
        return Err(Error::OddDegree(deg));
    }
    require_invariant(l, &p)?;
    let rs = l.root_system();
    let d = deg / 2;
    let phi = rs.invariants().phi_plus as u32;
    let disc = rs.disc_poly();
    let lhs = c_constant(rs) / factorial(d) * laplacian_pow(&g, &p, d)?.constant_term();
    let h = QuadraticSpace::cartan(rs);
    let rhs = laplacian_pow(&h, &(&(&disc * &disc) * &restrict(l, &p)?), d + phi)?.constant_term()
        / factorial(d + phi);
    Ok((lhs, rhs))
}

/// `ℰ_{𝔤*}(p)` and `(−2fℏ)^{φ₊} c^{-1} ℰ_{𝔥*}(𝒟²𝒫(p))`.
pub fn reduce_identity(l: &LieAlgebraData, f: Framing, p: &MultiPoly) -> Result<(HbarSeries, HbarSeries)> {
    reduce_identity_with_constant(l, f, p, &c_constant(l.root_system()))
}

/// As [`reduce_identity`] with an explicit value for the constant.
pub fn reduce_identity_with_constant(
    l: &LieAlgebraData,
    f: Framing,
    p: &MultiPoly,
    c: &Rational,
) -> Result<(HbarSeries, HbarSeries)> {
    let g = QuadraticSpace::coadjoint(l);
    let p = g.check(p)?;
    require_invariant(l, &p)?;
    let rs = l.root_system();
    let phi = rs.invariants().phi_plus;
    let lhs = e_op(&g, f, &p)?;
    let disc = rs.disc_poly();
    let inner = e_op(&QuadraticSpace::cartan(rs), f, &(&(&disc * &disc) * &restrict(l, &p)?))?;
    let factor = num_traits::pow(int(-2 * f.0), phi) / c;
    let rhs = inner.shift(phi as i64).scale(&factor);
    Ok((lhs, rhs))
}

/// Factorwise [`reduce_identity`] on a pure tensor of invariants.
pub fn reduce_identity_multi(
    l: &LieAlgebraData,
    framings: &[Framing],
    factors: &[MultiPoly],
) -> Result<(HbarSeries, HbarSeries)> {
    if framings.len() != factors.len() {
        return Err(Error::LengthMismatch(factors.len(), framings.len()));
    }
    let mut lhs = HbarSeries::one();
    let mut rhs = HbarSeries::one();
    for (f, p) in framings.iter().zip(factors) {
        let (a, b) = reduce_identity(l, *f, p)?;
        lhs = lhs.checked_mul(&a)?;
        rhs = rhs.checked_mul(&b)?;
    }
    Ok((lhs, rhs))
}

/// `q^{-f|ρ|²/2} ℰ_{𝔥*}^{(f)}(qdim²)` through `ℏ^order`.
///
/// The qdim numerator is `Σ_w det(w) e^{ℏ⟨wρ,n⟩}` and ℰ sends `e^{ℏλ}` to
/// `exp(-ℏ|λ|²/2f)`, so everything reduces to scalar series.
pub fn i2_trivial(rs: &RootSystem, f: Framing, order: i64) -> Result<HbarSeries> {
    let phi = rs.invariants().phi_plus as i64;
    let order = order.max(0);
    let depth = order + 3 * phi + 1;
    let space = QuadraticSpace::cartan(rs);
    let rho_form = rs
        .positive_roots()
        .iter()
        .fold(MultiPoly::zero(rs.coord_ring()), |acc, r| acc + rs.pairing_form(r))
        .scale(&Rational::new(1.into(), 2.into()));
    let rho = rs.rho();
    // (sign, coefficients of ⟨wρ, n⟩) over the Weyl group
    let forms: Vec<(i64, Vec<Rational>)> = weyl_group(rs)?
        .elements()
        .iter()
        .map(|w| {
            let l = w.act(&rho_form);
            (w.det(), (0..rs.rank()).map(|i| l.diff_at(i).constant_term()).collect())
        })
        .collect();
    let mut num_weights: BTreeMap<Rational, i64> = BTreeMap::new();
    let mut den_weights: BTreeMap<Rational, i64> = BTreeMap::new();
    for (s1, c1) in &forms {
        let at_rho: Rational = c1.iter().zip(&rho).map(|(a, b)| a * b).sum();
        *den_weights.entry(at_rho).or_default() += s1;
        for (s2, c2) in &forms {
            let sum: Vec<Rational> = c1.iter().zip(c2).map(|(a, b)| a + b).collect();
            let q = linalg::dot(&sum, space.gram(), &sum);
            *num_weights.entry(-q / int(2 * f.0)).or_default() += s1 * s2;
        }
    }
    let combine = |weights: BTreeMap<Rational, i64>| {
        weights
            .into_iter()
            .filter(|(_, m)| *m != 0)
            .fold(HbarSeries::zero(&Ring::scalar(), Some(depth)), |acc, (a, m)| {
                acc + exp_hbar(&a, depth).scale(&int(m))
            })
    };
    let num = combine(num_weights);
    let den = combine(den_weights);
    let e = num.div(&den.checked_mul(&den)?, order + phi)?;
    Ok(rho_prefactor(rs, f, order + phi).checked_mul(&e)?.truncate(order))
}

/// `I₂(p)/I₂(sign p)` for the lens space `L(p, 1)`.
pub fn lens_tau(rs: &RootSystem, p: i64, order: i64) -> Result<HbarSeries> {
    let f = Framing::new(p)?;
    let num = i2_trivial(rs, f, order)?;
    let den = i2_trivial(rs, f.sign(), order)?;
    num.div(&den, order)
}

/// `|p|^{φ₊}`, the factor relating `lens_tau` to a series with constant term 1.
pub fn lens_normalizer(rs: &RootSystem, p: i64) -> Rational {
    num_traits::pow(int(p).abs(), rs.invariants().phi_plus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::liealg::{ad_apply, build_sl, casimir, cubic_casimir_sl3};
    use crate::rootsys::{all_supported, build_root_system, weyl_group};
    use proptest::prelude::*;

    fn f(v: i64) -> Framing {
        Framing::new(v).unwrap()
    }

    fn laurent(terms: &[(i64, Rational)]) -> HbarSeries {
        HbarSeries::from_coeffs(
            &Ring::scalar(),
            terms.iter().map(|(k, c)| (*k, MultiPoly::scalar(c.clone()))),
            None,
        )
    }

    /// `Σ G_ij ∂_i∂_j` monomial by monomial, bypassing `diff2_at`.
    fn brute_laplacian(space: &QuadraticSpace, p: &MultiPoly) -> MultiPoly {
        let n = space.dim();
        let ring = space.ring().clone();
        let mut out = MultiPoly::zero(&ring);
        for (e, c) in p.terms() {
            for i in 0..n {
                for j in 0..n {
                    let g = &space.gram()[i][j];
                    if g.is_zero() {
                        continue;
                    }
                    let mut e2 = e.to_vec();
                    let ci = e2[i] as i64;
                    if ci == 0 {
                        continue;
                    }
                    e2[i] -= 1;
                    let cj = e2[j] as i64;
                    if cj == 0 {
                        continue;
                    }
                    e2[j] -= 1;
                    out = out + MultiPoly::monomial(&ring, e2, c * g * int(ci * cj));
                }
            }
        }
        out
    }

    #[test]
    fn characterization_of_laplacian() {
        let l2 = build_sl(2).unwrap();
        let l3 = build_sl(3).unwrap();
        let mut spaces = vec![QuadraticSpace::coadjoint(&l2), QuadraticSpace::coadjoint(&l3)];
        spaces.extend(all_supported().iter().map(QuadraticSpace::cartan));
        for s in &spaces {
            for i in 0..s.dim() {
                for j in 0..s.dim() {
                    let y = MultiPoly::var_at(s.ring(), i) * MultiPoly::var_at(s.ring(), j);
                    let half = laplacian(s, &y).unwrap().scale(&rat(1, 2));
                    assert_eq!(half, MultiPoly::scalar(s.gram()[i][j].clone()).embed(s.ring()));
                }
            }
        }
    }

    #[test]
    fn explicit_operators() {
        // Δ_{𝔤*} = 2(∂_H² + ∂_E∂_F) for sl2
        let l = build_sl(2).unwrap();
        let g = QuadraticSpace::coadjoint(&l);
        let (h, e, fv) = (l.var("H").unwrap(), l.var("E").unwrap(), l.var("F").unwrap());
        assert_eq!(laplacian(&g, &h.pow(2)).unwrap(), MultiPoly::scalar(int(4)).embed(g.ring()));
        assert_eq!(laplacian(&g, &(&e * &fv)).unwrap(), MultiPoly::scalar(int(2)).embed(g.ring()));
        // Δ_{𝔥*} = 2∂_n² for A1 and 2(∂_n² + ∂_m² − ∂_n∂_m) for A2
        let a1 = QuadraticSpace::cartan(&build_root_system('A', 1).unwrap());
        assert_eq!(a1.gram(), &vec![vec![int(2)]]);
        let a2 = QuadraticSpace::cartan(&build_root_system('A', 2).unwrap());
        assert_eq!(a2.gram(), &vec![vec![int(2), int(-1)], vec![int(-1), int(2)]]);
        let n = MultiPoly::var_at(a1.ring(), 0);
        assert_eq!(laplacian(&a1, &n.pow(2)).unwrap().constant_term(), int(4));
    }

    #[test]
    fn casimir_laplacian() {
        for (n, expected) in [(2, 6), (3, 16)] {
            let l = build_sl(n).unwrap();
            let g = QuadraticSpace::coadjoint(&l);
            let c = casimir(&l);
            assert_eq!(laplacian(&g, &c).unwrap().constant_term(), int(expected));
            assert_eq!(brute_laplacian(&g, &c).constant_term(), int(expected));
            assert_eq!(expected as usize, 2 * l.dim());
        }
    }

    #[test]
    fn disc_is_harmonic() {
        for rs in all_supported() {
            let h = QuadraticSpace::cartan(&rs);
            assert!(laplacian(&h, &rs.disc_poly()).unwrap().is_zero(), "{}", rs.name());
        }
    }

    #[test]
    fn e_op_examples() {
        let l = build_sl(2).unwrap();
        let g = QuadraticSpace::coadjoint(&l);
        let one = MultiPoly::one(g.ring());
        assert_eq!(e_op(&g, f(3), &one).unwrap(), HbarSeries::one());
        let c = casimir(&l);
        assert_eq!(e_op(&g, f(1), &c).unwrap(), laurent(&[(-1, int(-3))]));
        assert_eq!(e_op(&g, f(1), &c).unwrap().to_string(), "-3*h^-1");
        assert!(e_op(&g, f(2), &(&c * &l.var("H").unwrap())).unwrap().is_zero());
        assert_eq!(Framing::new(0), Err(Error::ZeroFraming));
        let multi = e_op_multi(&g, &[f(1), f(1)], &[c.clone(), c.clone()]).unwrap();
        assert_eq!(multi, laurent(&[(-2, int(9))]));
        assert!(e_op_multi(&g, &[f(1), f(-1)], &[c.clone(), l.var("E").unwrap()]).unwrap().is_zero());
        assert_eq!(e_op_multi(&g, &[f(1), f(2), f(-3)], &[one.clone(), one.clone(), one.clone()]).unwrap(), HbarSeries::one());
        assert!(matches!(e_op_multi(&g, &[f(1)], &[]), Err(Error::LengthMismatch(0, 1))));
    }

    #[test]
    fn o_op_examples() {
        let rs = build_root_system('A', 1).unwrap();
        let n = rs.coords()[0].clone();
        let pre = rho_prefactor(&rs, f(1), 4);
        assert_eq!(o_op(&rs, f(1), &MultiPoly::one(rs.coord_ring()), 4).unwrap(), pre);
        assert!(o_op(&rs, f(1), &n, 4).unwrap().is_zero());
        let got = o_op(&rs, f(1), &n.pow(2), 4).unwrap();
        let expected = rho_prefactor(&rs, f(1), 5)
            .checked_mul(&laurent(&[(-1, int(-2))]))
            .unwrap()
            .truncate(4);
        assert_eq!(got, expected);
        assert_eq!(got.scalar_coeff(-1), int(-2));
        assert_eq!(got.scalar_coeff(0), rat(1, 2));
    }

    #[test]
    fn power_decomposition_reconstructs() {
        let rs = build_root_system('A', 3).unwrap();
        let x = rs.coords();
        let p = &x[0] * &x[1] * &x[2] - x[1].pow(3).scale(&rat(2, 7));
        let parts = power_decomposition(&p, 3).unwrap();
        let rebuilt = parts.iter().fold(MultiPoly::zero(rs.coord_ring()), |acc, (c, a)| {
            let lin = c.iter().enumerate().fold(MultiPoly::zero(rs.coord_ring()), |s, (i, &ci)| {
                s + x[i].scale(&int(ci as i64))
            });
            acc + lin.pow(3).scale(a)
        });
        assert_eq!(rebuilt, p);
    }

    #[test]
    fn o_equals_e_on_samples() {
        let a2 = build_root_system('A', 2).unwrap();
        let d = a2.disc_poly();
        let (l, r) = o_eq_e_check(&a2, f(-1), &(&d * &d), 8).unwrap();
        assert_eq!(l, r);
        for rs in all_supported() {
            let (l, r) = o_eq_e_check(&rs, f(2), &MultiPoly::one(rs.coord_ring()), 8).unwrap();
            assert_eq!(l, r);
        }
    }

    #[test]
    fn c_constant_values() {
        assert_eq!(c_constant(&build_root_system('A', 1).unwrap()), int(4));
        assert_eq!(c_constant(&build_root_system('A', 2).unwrap()), int(24));
        for rs in all_supported() {
            assert!(!c_constant(&rs).is_zero());
        }
    }

    #[test]
    fn sl2_identities() {
        let l = build_sl(2).unwrap();
        let c = casimir(&l);
        let (lhs, rhs) = check_hcrf(&l, &c).unwrap();
        let n = l.root_system().coords()[0].clone();
        assert_eq!(lhs, n.scale(&int(6)));
        assert_eq!(rhs, lhs);
        let one = MultiPoly::one(l.ring());
        let (a, b) = check_hcrf(&l, &one).unwrap();
        assert!(a.is_zero() && b.is_zero());
        assert_eq!(check_dhd(&l, &c).unwrap(), (int(24), int(24)));
        assert_eq!(check_dhd(&l, &one).unwrap(), (int(4), int(4)));
        assert!(matches!(check_dhd(&l, &l.var("H").unwrap()), Err(Error::OddDegree(1))));
        assert!(matches!(check_hcrf(&l, &l.var("E").unwrap().pow(2)), Err(Error::NotInvariant(_))));
        let (lhs, rhs) = reduce_identity(&l, f(1), &c).unwrap();
        assert_eq!(lhs, laurent(&[(-1, int(-3))]));
        assert_eq!(rhs, lhs);
        assert_eq!(reduce_identity(&l, f(5), &one).unwrap(), (HbarSeries::one(), HbarSeries::one()));
        let (lhs, rhs) = reduce_identity(&l, f(-2), &c.pow(2)).unwrap();
        assert_eq!(lhs, rhs);
        let (lhs, rhs) = reduce_identity_multi(&l, &[f(1), f(1)], &[c.clone(), c.clone()]).unwrap();
        assert_eq!(lhs, laurent(&[(-2, int(9))]));
        assert_eq!(rhs, lhs);
        let (lhs, rhs) = reduce_identity_multi(&l, &[f(1), f(-1), f(2)], &[c.clone(), c.clone(), c.clone()]).unwrap();
        assert_eq!(lhs, rhs);
        let (lhs, _) = reduce_identity_multi(&l, &[f(3), f(1)], &[one.clone(), c.clone()]).unwrap();
        assert_eq!(lhs, reduce_identity(&l, f(1), &c).unwrap().0);
    }

    #[test]
    fn sl3_identities() {
        let l = build_sl(3).unwrap();
        let c = casimir(&l);
        let c3 = cubic_casimir_sl3(&l).unwrap();
        let (a, b) = check_hcrf(&l, &c).unwrap();
        assert_eq!(a, b);
        let (a, b) = check_hcrf(&l, &c3).unwrap();
        assert_eq!(a, b);
        let (a, b) = check_dhd(&l, &c.pow(2)).unwrap();
        assert_eq!(a, b);
        let (a, b) = reduce_identity(&l, f(2), &c).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn weyl_invariance_of_e_op() {
        for rs in all_supported() {
            let h = QuadraticSpace::cartan(&rs);
            let x = rs.coords();
            let p = x.iter().fold(MultiPoly::one(rs.coord_ring()), |acc, xi| acc * (xi + &MultiPoly::one(rs.coord_ring())))
                .pow(2);
            let base = e_op(&h, f(3), &p).unwrap();
            for w in weyl_group(&rs).unwrap().elements() {
                assert_eq!(e_op(&h, f(3), &w.act(&p)).unwrap(), base, "{}", rs.name());
            }
        }
    }

    #[test]
    fn i2_leading_terms() {
        let a1 = build_root_system('A', 1).unwrap();
        let plus = i2_trivial(&a1, f(1), 3).unwrap();
        assert_eq!(plus.min_order(), Some(-1));
        assert_eq!(plus.scalar_coeff(-1), int(-2));
        assert_eq!(i2_trivial(&a1, f(-1), 3).unwrap().scalar_coeff(-1), int(2));
        for rs in all_supported() {
            let phi = rs.invariants().phi_plus;
            let c = c_constant(&rs);
            for s in [1, -1] {
                let i2 = i2_trivial(&rs, f(s), 0).unwrap();
                let lead = i2.scalar_coeff(-(phi as i64));
                assert_eq!(lead, &c / num_traits::pow(int(-2 * s), phi), "{} f={s}", rs.name());
                assert_eq!(i2.truncation(), Some(0));
            }
        }
    }

    /// The polynomial route: square qdim, apply ℰ coefficientwise.
    fn i2_via_polynomials(rs: &RootSystem, fr: Framing, order: i64) -> HbarSeries {
        let phi = rs.invariants().phi_plus as i64;
        let sq = rs.qdim_power(2 * (order + phi) + 2, 2);
        let e = e_op_series(&QuadraticSpace::cartan(rs), fr, &sq, 2 * phi).unwrap();
        rho_prefactor(rs, fr, order + phi).checked_mul(&e).unwrap().truncate(order)
    }

    #[test]
    fn i2_matches_polynomial_route() {
        for rs in all_supported() {
            let order = if rs.invariants().phi_plus > 3 { 0 } else { 2 };
            for s in [1, -1, 2, -3] {
                let fast = i2_trivial(&rs, f(s), order).unwrap();
                let slow = i2_via_polynomials(&rs, f(s), order);
                assert_eq!(fast.truncation(), Some(order));
                assert!(fast.agrees_with(&slow) && fast.truncation() == slow.truncation(), "{} f={s}", rs.name());
            }
        }
    }

    #[test]
    fn qdim_power_is_power() {
        for rs in all_supported() {
            let q = rs.qdim_series(4);
            assert!(rs.qdim_power(4, 2).agrees_with(&(&q * &q)), "{}", rs.name());
        }
    }

    #[test]
    fn lens_examples() {
        let a1 = build_root_system('A', 1).unwrap();
        for p in [1, -1] {
            let t = lens_tau(&a1, p, 6).unwrap();
            assert_eq!(t, HbarSeries::one().truncate(6));
        }
        let t = lens_tau(&a1, 2, 4).unwrap();
        assert_eq!(t.min_order(), Some(0));
        assert_eq!(t.scalar_coeff(0) * lens_normalizer(&a1, 2), int(1));
        assert!(lens_tau(&a1, 0, 4).is_err());
    }

    fn small_sl2_poly() -> impl Strategy<Value = MultiPoly> {
        let ring = build_sl(2).unwrap().ring().clone();
        prop::collection::vec((prop::collection::vec(0u32..3, 3), -4i64..=4), 1..6).prop_map(move |terms| {
            MultiPoly::from_terms(
                &ring,
                terms
                    .into_iter()
                    .filter(|(e, _)| e.iter().sum::<u32>() <= 4)
                    .map(|(e, c)| (e, int(c))),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn intertwiner(g in small_sl2_poly(), a in 0usize..3, fr in prop::sample::select(vec![-2i64, -1, 1, 2, 3])) {
            let l = build_sl(2).unwrap();
            let space = QuadraticSpace::coadjoint(&l);
            let ad = ad_apply(&l, a, &g.embed(l.ring())).unwrap();
            prop_assert!(e_op(&space, f(fr), &ad).unwrap().is_zero());
        }

        #[test]
        fn laplacian_matches_brute_force(g in small_sl2_poly()) {
            let l = build_sl(2).unwrap();
            let space = QuadraticSpace::coadjoint(&l);
            let g = g.embed(l.ring());
            prop_assert_eq!(laplacian(&space, &g).unwrap(), brute_laplacian(&space, &g));
        }
    }
}
