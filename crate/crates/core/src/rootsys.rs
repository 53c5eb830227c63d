//! Root systems A1–A3, B2, G2 in fundamental-weight coordinates.
//!
//! Inner products are normalized so that every short root has square length
//! 2. A weight `λ = Σ n_i Λ_i` is recorded by its coordinates `n_i`, and the
//! coordinate function `n_i` is the pairing with the simple coroot `α_i^∨`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::linalg::{self, Matrix};
use crate::exact::{factorial, int, HbarSeries, MultiPoly, Rational, Ring};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::G => 'G',
        }
    }
}

pub const SUPPORTED: [(Family, usize); 5] = [
    (Family::A, 1),
    (Family::A, 2),
    (Family::A, 3),
    (Family::B, 2),
    (Family::G, 2),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootInvariants {
    pub phi_plus: usize,
    pub dim_g: usize,
    pub rank: usize,
    pub dual_coxeter: i64,
    pub d_max: i64,
    pub rho_norm_sq: Rational,
}

#[derive(Clone)]
pub struct RootSystem {
    family: Family,
    rank: usize,
    /// `A_ij = 2(α_i, α_j)/(α_j, α_j)`.
    cartan: Vec<Vec<i64>>,
    /// `(α_i, α_j)`.
    root_gram: Matrix,
    /// `(Λ_i, Λ_j)`.
    weight_gram: Matrix,
    /// `(α_i^∨, α_j^∨)`.
    coroot_gram: Matrix,
    /// Positive roots as coefficient vectors over the simple roots, sorted by height.
    positive: Vec<Vec<i64>>,
    ring: Ring,
}

impl fmt::Debug for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootSystem({})", self.name())
    }
}

/// Looks up a root system by name such as `"A2"` or `"g2"`.
pub fn parse_root_system(name: &str) -> Result<RootSystem> {
    let mut chars = name.trim().chars();
    let family = chars.next().unwrap_or(' ').to_ascii_uppercase();
    let rank: usize = chars.as_str().parse().unwrap_or(0);
    build_root_system(family, rank)
}

pub fn build_root_system(family: char, rank: usize) -> Result<RootSystem> {
    let unsupported = Error::UnsupportedRootSystem { family, rank };
    // Simple-root Gram matrices with short roots of square length 2.
    let (fam, gram): (Family, Vec<Vec<i64>>) = match (family.to_ascii_uppercase(), rank) {
        ('A', 1) => (Family::A, vec![vec![2]]),
        ('A', 2) => (Family::A, vec![vec![2, -1], vec![-1, 2]]),
        ('A', 3) => (
            Family::A,
            vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
        ),
        // α1 long, α2 short
        ('B', 2) => (Family::B, vec![vec![4, -2], vec![-2, 2]]),
        // α1 short, α2 long
        ('G', 2) => (Family::G, vec![vec![2, -3], vec![-3, 6]]),
        _ => return Err(unsupported),
    };
    let root_gram: Matrix = gram
        .iter()
        .map(|r| r.iter().map(|&x| int(x)).collect())
        .collect();
    let cartan: Vec<Vec<i64>> = (0..rank)
        .map(|i| (0..rank).map(|j| 2 * gram[i][j] / gram[j][j]).collect())
        .collect();
    let cartan_q: Matrix = cartan
        .iter()
        .map(|r| r.iter().map(|&x| int(x)).collect())
        .collect();
    // α_i = Σ_j A_ij Λ_j, hence (α, α) = A W Aᵀ.
    let a_inv = linalg::inverse(&cartan_q).expect("Cartan matrix is nonsingular");
    let weight_gram = linalg::mat_mul(&linalg::mat_mul(&a_inv, &root_gram), &linalg::transpose(&a_inv));
    let coroot_gram: Matrix = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| int(4 * gram[i][j]) / int(gram[i][i] * gram[j][j]))
                .collect()
        })
        .collect();
    let positive = positive_roots(&cartan);
    let names: Vec<String> = match rank {
        1 => vec!["n".into()],
        2 => vec!["n".into(), "m".into()],
        _ => (1..=rank).map(|i| format!("n{i}")).collect(),
    };
    Ok(RootSystem {
        family: fam,
        rank,
        cartan,
        root_gram,
        weight_gram,
        coroot_gram,
        positive,
        ring: Ring::new(names),
    })
}

/// Closure of the simple roots under simple reflections, keeping positive roots.
fn positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let rank = cartan.len();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    for i in 0..rank {
        let mut e = vec![0; rank];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(beta) = queue.pop_front() {
        for i in 0..rank {
            // ⟨β, α_i^∨⟩ = Σ_j β_j A_ji
            let pairing: i64 = (0..rank).map(|j| beta[j] * cartan[j][i]).sum();
            let mut img = beta.clone();
            img[i] -= pairing;
            if seen.insert(img.clone()) {
                queue.push_back(img);
            }
        }
    }
    let mut pos: Vec<Vec<i64>> = seen.into_iter().filter(|b| b.iter().all(|&c| c >= 0)).collect();
    pos.sort_by(|a, b| {
        let (ha, hb): (i64, i64) = (a.iter().sum(), b.iter().sum());
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    pos
}

impl RootSystem {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family.letter(), self.rank)
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn root_gram(&self) -> &Matrix {
        &self.root_gram
    }

    pub fn weight_gram(&self) -> &Matrix {
        &self.weight_gram
    }

    pub fn coroot_gram(&self) -> &Matrix {
        &self.coroot_gram
    }

    /// Ring of weight coordinates (`n`; `n, m`; `n1, n2, n3`).
    pub fn coord_ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coords(&self) -> Vec<MultiPoly> {
        (0..self.rank).map(|i| MultiPoly::var_at(&self.ring, i)).collect()
    }

    /// Positive roots over the simple roots.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive
    }

    /// A root given over simple roots, rewritten over fundamental weights.
    pub fn to_weight_coords(&self, root: &[i64]) -> Vec<i64> {
        (0..self.rank)
            .map(|j| (0..self.rank).map(|i| root[i] * self.cartan[i][j]).sum())
            .collect()
    }

    /// ρ over fundamental weights, computed as the half-sum of positive roots.
    pub fn rho(&self) -> Vec<Rational> {
        let mut sum = vec![0i64; self.rank];
        for r in &self.positive {
            for (s, w) in sum.iter_mut().zip(self.to_weight_coords(r)) {
                *s += w;
            }
        }
        sum.into_iter().map(|s| Rational::new(s.into(), 2.into())).collect()
    }

    /// `(λ, α)` as a linear form in the weight coordinates.
    pub fn pairing_form(&self, root: &[i64]) -> MultiPoly {
        // (Λ_i, α_j) = δ_ij (α_j, α_j)/2
        let ring = &self.ring;
        (0..self.rank).fold(MultiPoly::zero(ring), |acc, i| {
            let c = int(root[i]) * &self.root_gram[i][i] / int(2);
            acc + MultiPoly::var_at(ring, i).scale(&c)
        })
    }

    /// `(ρ, α)`.
    pub fn rho_pairing(&self, root: &[i64]) -> Rational {
        (0..self.rank)
            .map(|i| int(root[i]) * &self.root_gram[i][i] / int(2))
            .sum()
    }

    pub fn highest_root(&self) -> &[i64] {
        self.positive.last().expect("nonempty root system")
    }

    pub fn invariants(&self) -> RootInvariants {
        let phi_plus = self.positive.len();
        let theta = self.highest_root();
        let theta_sq = linalg::dot(
            &theta.iter().map(|&c| int(c)).collect::<Vec<_>>(),
            &self.root_gram,
            &theta.iter().map(|&c| int(c)).collect::<Vec<_>>(),
        );
        // h^∨ = 1 + 2(ρ, θ)/(θ, θ)
        let hv = Rational::one() + int(2) * self.rho_pairing(theta) / theta_sq;
        assert!(hv.is_integer(), "dual Coxeter number must be an integer");
        // ratio of long to short square lengths
        let d_max = (0..self.rank)
            .map(|i| (&self.root_gram[i][i] / int(2)).to_integer())
            .max()
            .and_then(|d| i64::try_from(d).ok())
            .unwrap_or(1);
        let rho = self.rho();
        RootInvariants {
            phi_plus,
            dim_g: 2 * phi_plus + self.rank,
            rank: self.rank,
            dual_coxeter: hv.to_integer().try_into().expect("small"),
            d_max,
            rho_norm_sq: linalg::dot(&rho, &self.weight_gram, &rho),
        }
    }

    /// `𝒟(λ) = Π_{α>0} (λ,α)/(ρ,α)`.
    pub fn disc_poly(&self) -> MultiPoly {
        self.positive.iter().fold(MultiPoly::one(&self.ring), |acc, r| {
            acc * self.pairing_form(r).scale(&self.rho_pairing(r).recip())
        })
    }

    /// The quantum dimension `Π_{α>0} [(λ,α)]/[(ρ,α)]` with `q = e^ℏ`, through `ℏ^order`.
    pub fn qdim_series(&self, order: i64) -> HbarSeries {
        self.qdim_power(order, 1)
    }

    /// `qdim^e` through `ℏ^order`, built factor by factor.
    pub fn qdim_power(&self, order: i64, e: u32) -> HbarSeries {
        let order = order.max(0);
        let mut num = HbarSeries::exact(MultiPoly::one(&self.ring));
        let mut den = HbarSeries::one();
        for r in &self.positive {
            num = num * sinh_quotient_pow(&self.pairing_form(r), order, e);
            den = den * sinh_quotient_pow(&MultiPoly::scalar(self.rho_pairing(r)), order, e);
        }
        num.div(&den, order).expect("constant term of the denominator is nonzero")
    }

    /// Deterministic JSON description.
    pub fn to_json(&self) -> Value {
        let mat = |m: &Matrix| -> Value {
            m.iter()
                .map(|r| r.iter().map(rational_json).collect::<Vec<_>>())
                .collect::<Vec<_>>()
                .into()
        };
        let inv = self.invariants();
        json!({
            "name": self.name(),
            "rank": self.rank,
            "coordinates": self.ring.names(),
            "cartan_matrix": self.cartan,
            "root_gram": mat(&self.root_gram),
            "weight_gram": mat(&self.weight_gram),
            "coroot_gram": mat(&self.coroot_gram),
            "positive_roots": self.positive.iter().map(|r| json!({
                "simple": r,
                "weight": self.to_weight_coords(r),
            })).collect::<Vec<_>>(),
            "rho": self.rho().iter().map(rational_json).collect::<Vec<_>>(),
            "invariants": {
                "phi_plus": inv.phi_plus,
                "dim_g": inv.dim_g,
                "rank": inv.rank,
                "dual_coxeter": inv.dual_coxeter,
                "d_max": inv.d_max,
                "rho_norm_sq": rational_json(&inv.rho_norm_sq),
            },
            "disc_poly": self.disc_poly().to_string(),
        })
    }
}

pub(crate) fn rational_json(r: &Rational) -> Value {
    Value::String(if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    })
}

/// `(sinh(xℏ/2)/ℏ)^e` through `ℏ^order`. With `u = xℏ/2` this is
/// `(x/2)^e (sinh u/u)^e`, so only scalar coefficients need convolving.
fn sinh_quotient_pow(x: &MultiPoly, order: i64, e: u32) -> HbarSeries {
    let terms = (order / 2 + 1) as usize;
    let base: Vec<Rational> = (0..terms).map(|j| factorial(2 * j as u32 + 1).recip()).collect();
    let mut s = vec![Rational::zero(); terms];
    s[0] = Rational::one();
    for _ in 0..e {
        let mut next = vec![Rational::zero(); terms];
        for (i, a) in s.iter().enumerate() {
            for (j, b) in base.iter().take(terms - i).enumerate() {
                next[i + j] += a * b;
            }
        }
        s = next;
    }
    let half = x.scale(&Rational::new(1.into(), 2.into()));
    let half_sq = half.pow(2);
    let mut power = half.pow(e);
    let coeffs = s.into_iter().enumerate().map(|(j, c)| {
        let term = power.scale(&c);
        power = &power * &half_sq;
        (2 * j as i64, term)
    });
    HbarSeries::from_coeffs(x.ring(), coeffs.collect::<Vec<_>>(), Some(order))
}

/// Element of the Weyl group acting on weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    matrix: Vec<Vec<i64>>,
}

impl WeylElement {
    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn det(&self) -> i64 {
        let m: Matrix = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect();
        let d = linalg::determinant(&m);
        if d == Rational::one() {
            1
        } else {
            -1
        }
    }

    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let n = self.matrix.len();
        WeylElement {
            matrix: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)))
    }

    /// Pullback `p ↦ p ∘ w` on polynomials in the weight coordinates.
    pub fn act(&self, p: &MultiPoly) -> MultiPoly {
        let ring = p.ring().clone();
        let images: Vec<MultiPoly> = self
            .matrix
            .iter()
            .map(|row| {
                row.iter().enumerate().fold(MultiPoly::zero(&ring), |acc, (k, &c)| {
                    acc + MultiPoly::var_at(&ring, k).scale(&int(c))
                })
            })
            .collect();
        p.substitute(&ring, &images).expect("same ring")
    }
}

#[derive(Debug, Clone)]
pub struct WeylGroup {
    elements: Vec<WeylElement>,
    generators: Vec<WeylElement>,
}

impl WeylGroup {
    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn generators(&self) -> &[WeylElement] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Reynolds average `|W|^{-1} Σ_w w·p`.
    pub fn symmetrize(&self, p: &MultiPoly) -> MultiPoly {
        let sum = self
            .elements
            .iter()
            .fold(MultiPoly::zero(p.ring()), |acc, w| acc + w.act(p));
        sum.scale(&Rational::new(1.into(), (self.order() as i64).into()))
    }
}

const WEYL_BOUND: usize = 1_000_000;

/// Breadth-first closure of the simple reflections.
pub fn weyl_group(rs: &RootSystem) -> Result<WeylGroup> {
    let rank = rs.rank;
    // s_i: n_j ↦ n_j - n_i A_ij
    let generators: Vec<WeylElement> = (0..rank)
        .map(|i| {
            let mut m: Vec<Vec<i64>> = (0..rank)
                .map(|r| (0..rank).map(|c| i64::from(r == c)).collect())
                .collect();
            for (j, row) in m.iter_mut().enumerate() {
                row[i] -= rs.cartan[i][j];
            }
            WeylElement { matrix: m }
        })
        .collect();
    let id = WeylElement {
        matrix: (0..rank)
            .map(|r| (0..rank).map(|c| i64::from(r == c)).collect())
            .collect(),
    };
    let mut seen: HashSet<WeylElement> = HashSet::from([id.clone()]);
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(w) = queue.pop_front() {
        for s in &generators {
            let next = s.compose(&w);
            if seen.insert(next.clone()) {
                if seen.len() > WEYL_BOUND {
                    return Err(Error::GroupTooLarge(WEYL_BOUND));
                }
                elements.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(WeylGroup {
        elements,
        generators,
    })
}

pub fn disc_poly(rs: &RootSystem) -> MultiPoly {
    rs.disc_poly()
}

pub fn invariants(rs: &RootSystem) -> RootInvariants {
    rs.invariants()
}

pub fn qdim_series(rs: &RootSystem, order: i64) -> HbarSeries {
    rs.qdim_series(order)
}

pub fn all_supported() -> Vec<RootSystem> {
    SUPPORTED
        .iter()
        .map(|(f, r)| build_root_system(f.letter(), *r).expect("supported"))
        .collect()
}

impl RootInvariants {
    /// `2·d·h^∨·dim 𝔤 − 24|ρ|²`, zero for every supported system.
    pub fn strange_formula_defect(&self) -> Rational {
        int(2 * self.d_max * self.dual_coxeter * self.dim_g as i64) - int(24) * &self.rho_norm_sq
    }
}
