//! `sl_2` and `sl_3` in the split basis with the trace form.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::linalg::{self, Matrix};
use crate::exact::{int, MultiPoly, Rational, Ring};
use crate::rootsys::{build_root_system, RootSystem};

#[derive(Debug, Clone)]
pub struct LieAlgebraData {
    n: usize,
    ring: Ring,
    matrices: Vec<Matrix>,
    gram: Matrix,
    gram_inv: Matrix,
    /// `structure[i][j][k] = c_ij^k`.
    structure: Vec<Vec<Vec<Rational>>>,
    cartan_indices: Vec<usize>,
    root_system: RootSystem,
}

fn unit(n: usize, r: usize, c: usize) -> Matrix {
    let mut m = vec![vec![Rational::zero(); n]; n];
    m[r][c] = Rational::one();
    m
}

fn diag(entries: &[i64]) -> Matrix {
    let n = entries.len();
    let mut m = vec![vec![Rational::zero(); n]; n];
    for (i, &e) in entries.iter().enumerate() {
        m[i][i] = int(e);
    }
    m
}

fn trace(m: &Matrix) -> Rational {
    (0..m.len()).map(|i| m[i][i].clone()).sum()
}

fn mat_sub(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

fn mat_add_scaled(acc: &mut Matrix, b: &Matrix, s: &Rational) {
    for (r, t) in acc.iter_mut().zip(b) {
        for (x, y) in r.iter_mut().zip(t) {
            *x += y * s;
        }
    }
}

pub fn build_sl(n: usize) -> Result<LieAlgebraData> {
    let (names, matrices, cartan_indices, rs): (Vec<&str>, Vec<Matrix>, Vec<usize>, RootSystem) =
        match n {
            2 => (
                vec!["H", "E", "F"],
                vec![diag(&[1, -1]), unit(2, 0, 1), unit(2, 1, 0)],
                vec![0],
                build_root_system('A', 1)?,
            ),
            3 => (
                vec!["H1", "H2", "E1", "E2", "E3", "F1", "F2", "F3"],
                vec![
                    diag(&[1, -1, 0]),
                    diag(&[0, 1, -1]),
                    unit(3, 0, 1),
                    unit(3, 1, 2),
                    unit(3, 2, 0),
                    unit(3, 1, 0),
                    unit(3, 2, 1),
                    unit(3, 0, 2),
                ],
                vec![0, 1],
                build_root_system('A', 2)?,
            ),
            _ => return Err(Error::UnsupportedAlgebra(n)),
        };
    let dim = matrices.len();
    let gram: Matrix = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| trace(&linalg::mat_mul(&matrices[i], &matrices[j])))
                .collect()
        })
        .collect();
    let gram_inv = linalg::inverse(&gram).expect("trace form is nondegenerate");
    let mut l = LieAlgebraData {
        n,
        ring: Ring::new(names),
        matrices,
        gram,
        gram_inv,
        structure: Vec::new(),
        cartan_indices,
        root_system: rs,
    };
    l.structure = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let a = &l.matrices[i];
                    let b = &l.matrices[j];
                    l.coordinates(&mat_sub(&linalg::mat_mul(a, b), &linalg::mat_mul(b, a)))
                })
                .collect()
        })
        .collect();
    Ok(l)
}

/// Parses `"sl2"` / `"sl3"`.
pub fn parse_algebra(name: &str) -> Result<LieAlgebraData> {
    let lower = name.trim().to_ascii_lowercase();
    match lower.strip_prefix("sl").and_then(|r| r.parse::<usize>().ok()) {
        Some(n) => build_sl(n),
        None => Err(Error::Config(format!("unknown Lie algebra `{name}`; supported: sl2, sl3"))),
    }
}

impl LieAlgebraData {
    pub fn rank_n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> String {
        format!("sl{}", self.n)
    }

    pub fn dim(&self) -> usize {
        self.matrices.len()
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn basis_names(&self) -> &[String] {
        self.ring.names()
    }

    pub fn basis_matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn gram_inv(&self) -> &Matrix {
        &self.gram_inv
    }

    pub fn cartan_indices(&self) -> &[usize] {
        &self.cartan_indices
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.root_system
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.ring.var(name)
    }

    pub fn var(&self, name: &str) -> Result<MultiPoly> {
        MultiPoly::var(&self.ring, name)
    }

    /// Coordinates of a matrix in the basis, `x_j = Σ_k G⁻¹_jk Tr(M X_k)`.
    pub fn coordinates(&self, m: &Matrix) -> Vec<Rational> {
        let t: Vec<Rational> = self
            .matrices
            .iter()
            .map(|x| trace(&linalg::mat_mul(m, x)))
            .collect();
        linalg::mat_vec(&self.gram_inv, &t)
    }

    /// `c_ij^k`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.structure[i][j][k]
    }

    /// `[X_i, X_j]` as coordinates.
    pub fn bracket(&self, i: usize, j: usize) -> &[Rational] {
        &self.structure[i][j]
    }

    /// `([X_a, X_b], X_c)`, totally antisymmetric.
    pub fn structure_form(&self, a: usize, b: usize, c: usize) -> Rational {
        self.structure[a][b]
            .iter()
            .zip(&self.gram)
            .map(|(coef, row)| coef * &row[c])
            .sum()
    }

    fn linear(&self, coords: &[Rational]) -> MultiPoly {
        coords
            .iter()
            .enumerate()
            .fold(MultiPoly::zero(&self.ring), |acc, (k, c)| {
                acc + MultiPoly::var_at(&self.ring, k).scale(c)
            })
    }

    /// Dual basis matrices `X^i = Σ_j G⁻¹_ij X_j`.
    pub fn dual_basis(&self) -> Vec<Matrix> {
        let n = self.n;
        (0..self.dim())
            .map(|i| {
                let mut acc = vec![vec![Rational::zero(); n]; n];
                for (j, x) in self.matrices.iter().enumerate() {
                    mat_add_scaled(&mut acc, x, &self.gram_inv[i][j]);
                }
                acc
            })
            .collect()
    }

    /// Eigenvalue of the Casimir `Σ ad X_a ad X^a` on the adjoint representation.
    pub fn adjoint_casimir(&self) -> Rational {
        let dim = self.dim();
        // trace of Σ_a G⁻¹_ab ad_a ad_b divided by dim
        let mut total = Rational::zero();
        for a in 0..dim {
            for b in 0..dim {
                let g = &self.gram_inv[a][b];
                if g.is_zero() {
                    continue;
                }
                for j in 0..dim {
                    for k in 0..dim {
                        total += g * &self.structure[a][k][j] * &self.structure[b][j][k];
                    }
                }
            }
        }
        total / int(dim as i64)
    }
}

/// `C = Σ G⁻¹_ij x_i x_j`.
pub fn casimir(l: &LieAlgebraData) -> MultiPoly {
    let r = &l.ring;
    let mut c = MultiPoly::zero(r);
    for i in 0..l.dim() {
        for j in 0..l.dim() {
            if !l.gram_inv[i][j].is_zero() {
                c = c + (MultiPoly::var_at(r, i) * MultiPoly::var_at(r, j)).scale(&l.gram_inv[i][j]);
            }
        }
    }
    c
}

/// `Tr(M³)` with `M = Σ x_i X^i`.
pub fn cubic_casimir_sl3(l: &LieAlgebraData) -> Result<MultiPoly> {
    if l.n != 3 {
        return Err(Error::WrongAlgebra {
            op: "cubic_casimir_sl3",
            expected: "sl3",
        });
    }
    let r = &l.ring;
    let duals = l.dual_basis();
    let m: Vec<Vec<MultiPoly>> = (0..3)
        .map(|a| {
            (0..3)
                .map(|b| {
                    duals.iter().enumerate().fold(MultiPoly::zero(r), |acc, (i, x)| {
                        acc + MultiPoly::var_at(r, i).scale(&x[a][b])
                    })
                })
                .collect()
        })
        .collect();
    let mut out = MultiPoly::zero(r);
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                out = out + &(&m[a][b] * &m[b][c]) * &m[c][a];
            }
        }
    }
    Ok(out)
}

/// The derivation of `S(𝔤)` extending `ad_{X_a}`.
pub fn ad_apply(l: &LieAlgebraData, a: usize, p: &MultiPoly) -> Result<MultiPoly> {
    let ring = p.ring().unify(&l.ring)?;
    if ring != l.ring {
        return Err(p.ring().mismatch(&l.ring));
    }
    let p = p.embed(&l.ring);
    Ok((0..l.dim()).fold(MultiPoly::zero(&l.ring), |acc, j| {
        let d = p.diff_at(j);
        if d.is_zero() {
            acc
        } else {
            acc + d * l.linear(&l.structure[a][j])
        }
    }))
}

/// `𝒫`: Cartan variables to weight coordinates, everything else to zero.
pub fn restrict(l: &LieAlgebraData, p: &MultiPoly) -> Result<MultiPoly> {
    let target = l.root_system.coord_ring();
    let images: Vec<MultiPoly> = (0..l.dim())
        .map(|i| match l.cartan_indices.iter().position(|&c| c == i) {
            Some(k) => MultiPoly::var_at(target, k),
            None => MultiPoly::zero(target),
        })
        .collect();
    let p = if p.ring().is_scalar() { p.embed(&l.ring) } else { p.clone() };
    if p.ring() != &l.ring {
        return Err(p.ring().mismatch(&l.ring));
    }
    p.substitute(target, &images)
}

pub fn is_invariant(l: &LieAlgebraData, p: &MultiPoly) -> Result<bool> {
    for a in 0..l.dim() {
        if !ad_apply(l, a, p)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `sl_2` acting on `V_k` with basis `v_0, …, v_{k-1}` of weights `k-1, k-3, …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrrepMatrices {
    pub dimension: usize,
    pub h: Matrix,
    pub e: Matrix,
    pub f: Matrix,
}

pub fn sl2_irrep(k: i64) -> Result<IrrepMatrices> {
    if k <= 0 {
        return Err(Error::BadDimension(k));
    }
    let n = k as usize;
    let zero = || vec![vec![Rational::zero(); n]; n];
    let (mut h, mut e, mut f) = (zero(), zero(), zero());
    for j in 0..n {
        h[j][j] = int(k - 1 - 2 * j as i64);
        if j + 1 < n {
            f[j + 1][j] = Rational::one();
        }
        if j > 0 {
            e[j - 1][j] = int(j as i64 * (k - j as i64));
        }
    }
    Ok(IrrepMatrices {
        dimension: n,
        h,
        e,
        f,
    })
}

impl IrrepMatrices {
    /// Matrix of the basis element with index 0, 1, 2 = H, E, F.
    pub fn get(&self, i: usize) -> &Matrix {
        match i {
            0 => &self.h,
            1 => &self.e,
            _ => &self.f,
        }
    }
}

pub const SYM_CHAR_MAX_DEGREE: u32 = 6;

/// `Tr_{V_k}` of the symmetrized image of `p` in `U(sl_2)`.
pub fn sym_char(l: &LieAlgebraData, k: i64, p: &MultiPoly) -> Result<Rational> {
    if l.n != 2 {
        return Err(Error::WrongAlgebra {
            op: "sym_char",
            expected: "sl2",
        });
    }
    let p = if p.ring().is_scalar() { p.embed(&l.ring) } else { p.clone() };
    if p.ring() != &l.ring {
        return Err(p.ring().mismatch(&l.ring));
    }
    if let Some(d) = p.degree() {
        if d > SYM_CHAR_MAX_DEGREE {
            return Err(Error::DegreeBound {
                degree: d,
                bound: SYM_CHAR_MAX_DEGREE,
            });
        }
    }
    let rep = sl2_irrep(k)?;
    let mut total = Rational::zero();
    for (exps, coeff) in p.terms() {
        let letters: Vec<usize> = exps
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect();
        // each distinct arrangement occurs equally often among all orderings
        let words = distinct_permutations(&letters);
        let sum: Rational = words.iter().map(|w| word_trace(&rep, w)).sum();
        total += coeff * sum / int(words.len() as i64);
    }
    Ok(total)
}

fn distinct_permutations(letters: &[usize]) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        let choices: BTreeSet<usize> = rest.iter().copied().collect();
        for c in choices {
            let pos = rest.iter().position(|&x| x == c).expect("present");
            rest.remove(pos);
            cur.push(c);
            go(rest, cur, out);
            cur.pop();
            rest.insert(pos, c);
        }
    }
    let mut out = Vec::new();
    go(&mut letters.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// Trace of `ρ(X_{w_0}) ρ(X_{w_1}) ⋯`; every generator maps a basis vector to a multiple of one.
fn word_trace(rep: &IrrepMatrices, word: &[usize]) -> Rational {
    let n = rep.dimension;
    let mut tr = Rational::zero();
    'basis: for start in 0..n {
        let mut idx = start;
        let mut scalar = Rational::one();
        for &letter in word.iter().rev() {
            let m = rep.get(letter);
            match (0..n).find(|&r| !m[r][idx].is_zero()) {
                Some(r) => {
                    scalar *= &m[r][idx];
                    idx = r;
                }
                None => continue 'basis,
            }
        }
        if idx == start {
            tr += scalar;
        }
    }
    tr
}

/// Products `C^a` (sl2) or `C^a C₃^b` (sl3) of degree at most `max_degree`,
/// labelled like `C^2*C3`, in order of degree.
pub fn invariant_basis(l: &LieAlgebraData, max_degree: u32) -> Vec<(String, MultiPoly)> {
    let c = casimir(l);
    let c3 = cubic_casimir_sl3(l).ok();
    let mut out: Vec<(u32, String, MultiPoly)> = Vec::new();
    for a in 0..=max_degree / 2 {
        let b_max = if c3.is_some() { (max_degree - 2 * a) / 3 } else { 0 };
        for b in 0..=b_max {
            let mut parts = Vec::new();
            if a > 0 {
                parts.push(if a == 1 { "C".to_string() } else { format!("C^{a}") });
            }
            if b > 0 {
                parts.push(if b == 1 { "C3".to_string() } else { format!("C3^{b}") });
            }
            let label = if parts.is_empty() { "1".to_string() } else { parts.join("*") };
            let mut p = c.pow(a);
            if let Some(c3) = &c3 {
                p = p * c3.pow(b);
            }
            out.push((2 * a + 3 * b, label, p));
        }
    }
    out.sort_by_key(|(d, _, _)| *d);
    out.into_iter().map(|(_, l, p)| (l, p)).collect()
}

/// `(k² − 1)/2`, the Casimir eigenvalue on `V_k`.
pub fn casimir_eigenvalue_sl2(k: i64) -> Rational {
    int(k * k - 1) / int(2)
}
