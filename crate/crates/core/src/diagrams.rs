//! Jacobi diagrams, their Lie algebra weights and the gluing bracket.
//!
//! A diagram is stored on half-edges. Each half-edge sits either in a slot of
//! a trivalent vertex or at a leg, and every half-edge is paired with exactly
//! one other by an edge. Closed circles without vertices are counted apart.
//!
//! Text form, items separated by spaces:
//!
//! ```text
//! [1/2] v(1,2,3) v(4,6,5) leg(x):7 dleg(x):8 e(1,4) e(2,5) e(3,6) e(7,8) o
//! ```
//!
//! `v(a,b,c)` is a vertex with half-edges in cyclic order, `leg(x):h` and
//! `dleg(x):h` are legs labelled `x` and `∂x`, `e(a,b)` joins two half-edges,
//! `o` is a free circle and the optional `[c]` is a rational coefficient.
//! Sums are written with ` + ` between terms; `empty` is the empty diagram.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, int, HbarSeries, MultiPoly, Rational, Ring};
use crate::laplace::{e_op, Framing, QuadraticSpace};
use crate::liealg::LieAlgebraData;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Leg {
    pub label: String,
    pub deriv: bool,
    pub half: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiDiagram {
    coeff: Rational,
    vertices: Vec<[usize; 3]>,
    legs: Vec<Leg>,
    edges: Vec<(usize, usize)>,
    loops: usize,
}

pub const WU_MAX_LEGS: usize = 6;

impl JacobiDiagram {
    pub fn new(
        vertices: Vec<[usize; 3]>,
        legs: Vec<Leg>,
        edges: Vec<(usize, usize)>,
        loops: usize,
    ) -> Result<Self> {
        let d = JacobiDiagram {
            coeff: Rational::one(),
            vertices,
            legs,
            edges,
            loops,
        };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        let mut placed: BTreeSet<usize> = BTreeSet::new();
        for h in self.vertices.iter().flatten().chain(self.legs.iter().map(|l| &l.half)) {
            if !placed.insert(*h) {
                return Err(Error::Diagram(format!("half-edge {h} is used twice")));
            }
        }
        let mut paired: BTreeSet<usize> = BTreeSet::new();
        for &(a, b) in &self.edges {
            for h in [a, b] {
                if !placed.contains(&h) {
                    return Err(Error::Diagram(format!("edge endpoint {h} is not attached")));
                }
                if !paired.insert(h) {
                    return Err(Error::Diagram(format!("half-edge {h} lies on two edges")));
                }
            }
            if a == b {
                return Err(Error::Diagram(format!("edge ({a},{a}) joins a half-edge to itself")));
            }
        }
        if let Some(h) = placed.difference(&paired).next() {
            return Err(Error::Diagram(format!("half-edge {h} has no edge")));
        }
        for l in &self.legs {
            if !is_ident(&l.label) {
                return Err(Error::Diagram(format!("bad leg label `{}`", l.label)));
            }
        }
        Ok(())
    }

    /// The empty diagram, unit for disjoint union.
    pub fn empty() -> Self {
        JacobiDiagram {
            coeff: Rational::one(),
            vertices: vec![],
            legs: vec![],
            edges: vec![],
            loops: 0,
        }
    }

    pub fn circle() -> Self {
        JacobiDiagram {
            loops: 1,
            ..Self::empty()
        }
    }

    pub fn strut(label: &str, deriv: bool) -> Self {
        let leg = |h| Leg {
            label: label.to_string(),
            deriv,
            half: h,
        };
        JacobiDiagram::new(vec![], vec![leg(0), leg(1)], vec![(0, 1)], 0).expect("valid strut")
    }

    /// Two trivalent vertices joined by three edges, drawn in the plane.
    pub fn theta() -> Self {
        JacobiDiagram::new(vec![[0, 1, 2], [3, 5, 4]], vec![], vec![(0, 3), (1, 4), (2, 5)], 0)
            .expect("valid theta")
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn with_coeff(mut self, c: Rational) -> Self {
        self.coeff = c;
        self
    }

    pub fn vertices(&self) -> &[[usize; 3]] {
        &self.vertices
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn loops(&self) -> usize {
        self.loops
    }

    pub fn num_legs(&self) -> usize {
        self.legs.len()
    }

    pub fn is_closed(&self) -> bool {
        self.legs.is_empty()
    }

    /// Half the number of (uni- and trivalent) vertices.
    pub fn degree(&self) -> usize {
        (self.vertices.len() + self.legs.len()) / 2
    }

    /// Reverses the cyclic order at vertex `i`.
    pub fn flip_vertex(&self, i: usize) -> Result<Self> {
        let mut d = self.clone();
        let v = d
            .vertices
            .get_mut(i)
            .ok_or_else(|| Error::Diagram(format!("no vertex {i}")))?;
        v.swap(1, 2);
        Ok(d)
    }

    fn max_half(&self) -> Option<usize> {
        self.vertices
            .iter()
            .flatten()
            .copied()
            .chain(self.legs.iter().map(|l| l.half))
            .max()
    }

    fn shifted(&self, offset: usize) -> Self {
        JacobiDiagram {
            coeff: self.coeff.clone(),
            vertices: self.vertices.iter().map(|v| v.map(|h| h + offset)).collect(),
            legs: self
                .legs
                .iter()
                .map(|l| Leg {
                    half: l.half + offset,
                    ..l.clone()
                })
                .collect(),
            edges: self.edges.iter().map(|&(a, b)| (a + offset, b + offset)).collect(),
            loops: self.loops,
        }
    }

    /// Disjoint union; coefficients multiply.
    pub fn union(&self, other: &Self) -> Self {
        let offset = self.max_half().map_or(0, |m| m + 1);
        let o = other.shifted(offset);
        JacobiDiagram {
            coeff: &self.coeff * &o.coeff,
            vertices: [self.vertices.clone(), o.vertices].concat(),
            legs: [self.legs.clone(), o.legs].concat(),
            edges: [self.edges.clone(), o.edges].concat(),
            loops: self.loops + o.loops,
        }
    }

    pub fn power(&self, k: usize) -> Self {
        (0..k).fold(Self::empty(), |acc, _| acc.union(self))
    }

    /// Renumbers half-edges by first appearance: vertices, then legs.
    pub fn canonical(&self) -> Self {
        let mut map: HashMap<usize, usize> = HashMap::new();
        for h in self.vertices.iter().flatten().chain(self.legs.iter().map(|l| &l.half)) {
            let next = map.len() + 1;
            map.entry(*h).or_insert(next);
        }
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (map[&a], map[&b]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort();
        JacobiDiagram {
            coeff: self.coeff.clone(),
            vertices: self.vertices.iter().map(|v| v.map(|h| map[&h])).collect(),
            legs: self
                .legs
                .iter()
                .map(|l| Leg {
                    half: map[&l.half],
                    ..l.clone()
                })
                .collect(),
            edges,
            loops: self.loops,
        }
    }

    fn partner_map(&self) -> HashMap<usize, usize> {
        let mut m = HashMap::new();
        for &(a, b) in &self.edges {
            m.insert(a, b);
            m.insert(b, a);
        }
        m
    }

    /// Joins the half-edges at two legs, removing both legs.
    fn glue(&mut self, leg_a: usize, leg_b: usize) {
        let ha = self.legs[leg_a].half;
        let hb = self.legs[leg_b].half;
        let partner = self.partner_map();
        let (pa, pb) = (partner[&ha], partner[&hb]);
        self.edges
            .retain(|&(x, y)| !(x == ha || y == ha || x == hb || y == hb));
        if pa == hb {
            self.loops += 1;
        } else {
            self.edges.push((pa, pb));
        }
        let (hi, lo) = (leg_a.max(leg_b), leg_a.min(leg_b));
        self.legs.remove(hi);
        self.legs.remove(lo);
    }

    /// The leg labels used, sorted.
    pub fn labels(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self.legs.iter().map(|l| l.label.as_str()).collect();
        set.into_iter().map(String::from).collect()
    }
}

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic())
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

impl fmt::Display for JacobiDiagram {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.canonical();
        let mut items: Vec<String> = Vec::new();
        if !d.coeff.is_one() {
            items.push(format!("[{}]", crate::exact::fmt_rational(&d.coeff)));
        }
        for v in &d.vertices {
            items.push(format!("v({},{},{})", v[0], v[1], v[2]));
        }
        for l in &d.legs {
            let kind = if l.deriv { "dleg" } else { "leg" };
            items.push(format!("{kind}({}):{}", l.label, l.half));
        }
        for (a, b) in &d.edges {
            items.push(format!("e({a},{b})"));
        }
        items.extend(std::iter::repeat_n("o".to_string(), d.loops));
        if items.is_empty() || (items.len() == 1 && !d.coeff.is_one()) {
            items.push("empty".into());
        }
        write!(out, "{}", items.join(" "))
    }
}

fn parse_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

fn parse_usize(s: &str, pos: usize) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| parse_err(pos, format!("expected a half-edge number, got `{s}`")))
}

fn parse_rational(s: &str, pos: usize) -> Result<Rational> {
    let s = s.trim();
    let bad = || parse_err(pos, format!("bad coefficient `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: num_bigint::BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: num_bigint::BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl FromStr for JacobiDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut d = JacobiDiagram::empty();
        for (pos, tok) in s.split_whitespace().enumerate() {
            if tok == "o" {
                d.loops += 1;
            } else if tok == "empty" {
            } else if let Some(c) = tok.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
                if pos != 0 {
                    return Err(parse_err(pos, "coefficient must come first"));
                }
                d.coeff = parse_rational(c, pos)?;
            } else if let Some(body) = tok.strip_prefix("v(").and_then(|t| t.strip_suffix(')')) {
                let parts: Vec<&str> = body.split(',').collect();
                if parts.len() != 3 {
                    return Err(parse_err(pos, "a vertex needs exactly three half-edges"));
                }
                d.vertices.push([
                    parse_usize(parts[0], pos)?,
                    parse_usize(parts[1], pos)?,
                    parse_usize(parts[2], pos)?,
                ]);
            } else if let Some(body) = tok.strip_prefix("e(").and_then(|t| t.strip_suffix(')')) {
                let (a, b) = body
                    .split_once(',')
                    .ok_or_else(|| parse_err(pos, "an edge needs two half-edges"))?;
                d.edges.push((parse_usize(a, pos)?, parse_usize(b, pos)?));
            } else if let Some((kind, rest)) = tok.split_once('(') {
                let deriv = match kind {
                    "leg" => false,
                    "dleg" => true,
                    _ => return Err(parse_err(pos, format!("unknown item `{tok}`"))),
                };
                let (label, half) = rest
                    .split_once("):")
                    .ok_or_else(|| parse_err(pos, "expected `leg(label):half`"))?;
                if !is_ident(label) {
                    return Err(parse_err(pos, format!("bad leg label `{label}`")));
                }
                d.legs.push(Leg {
                    label: label.to_string(),
                    deriv,
                    half: parse_usize(half, pos)?,
                });
            } else {
                return Err(parse_err(pos, format!("unknown item `{tok}`")));
            }
        }
        d.validate()?;
        Ok(d)
    }
}

/// Formal rational combination of diagrams.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiagramSum {
    terms: Vec<JacobiDiagram>,
}

impl DiagramSum {
    pub fn new(terms: Vec<JacobiDiagram>) -> Self {
        DiagramSum { terms }
    }

    pub fn single(d: JacobiDiagram) -> Self {
        DiagramSum { terms: vec![d] }
    }

    pub fn terms(&self) -> &[JacobiDiagram] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        DiagramSum {
            terms: self
                .terms
                .iter()
                .map(|d| d.clone().with_coeff(d.coeff() * c))
                .collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        DiagramSum {
            terms: [self.terms.clone(), other.terms.clone()].concat(),
        }
    }
}

impl fmt::Display for DiagramSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FromStr for DiagramSum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "0" {
            return Ok(DiagramSum::default());
        }
        s.split(" + ")
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(DiagramSum::new)
    }
}

/// Sparse contraction data for one Lie algebra.
struct Tensors {
    dim: usize,
    /// Nonzero `([X_a,X_b],X_c)`.
    f: Vec<([usize; 3], Rational)>,
    g_inv: Vec<Vec<Rational>>,
}

impl Tensors {
    fn new(l: &LieAlgebraData) -> Self {
        let dim = l.dim();
        let mut f = Vec::new();
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    let v = l.structure_form(a, b, c);
                    if !v.is_zero() {
                        f.push(([a, b, c], v));
                    }
                }
            }
        }
        Tensors {
            dim,
            f,
            g_inv: l.gram_inv().clone(),
        }
    }
}

enum Node {
    Vertex([usize; 3]),
    Leg { half: usize, var_base: usize },
}

/// The ring in which weights of diagrams with the given labels live.
pub fn weight_ring(l: &LieAlgebraData, labels: &[String]) -> Ring {
    if labels.len() <= 1 {
        return l.ring().clone();
    }
    Ring::new(
        labels
            .iter()
            .flat_map(|lab| l.basis_names().iter().map(move |b| format!("{b}_{lab}"))),
    )
}

/// `W_𝔤(D)`: contraction with `G⁻¹` on edges and `([X_a,X_b],X_c)` at vertices.
pub fn weight(d: &JacobiDiagram, l: &LieAlgebraData) -> Result<MultiPoly> {
    if d.legs.iter().any(|leg| leg.deriv) {
        return Err(Error::Diagram("∂-labelled legs have no weight outside a bracket".into()));
    }
    let labels = d.labels();
    let ring = weight_ring(l, &labels);
    let t = Tensors::new(l);
    Ok(contract(d, &t, &ring, &labels))
}

fn contract(d: &JacobiDiagram, t: &Tensors, ring: &Ring, labels: &[String]) -> MultiPoly {
    let partner = d.partner_map();
    // order nodes so that each one tends to meet already assigned neighbours
    let mut owner: HashMap<usize, usize> = HashMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    for v in &d.vertices {
        for h in v {
            owner.insert(*h, nodes.len());
        }
        nodes.push(Node::Vertex(*v));
    }
    for leg in &d.legs {
        owner.insert(leg.half, nodes.len());
        let lab = labels.iter().position(|x| *x == leg.label).unwrap_or(0);
        nodes.push(Node::Leg {
            half: leg.half,
            var_base: lab * t.dim,
        });
    }
    let mut order: Vec<usize> = Vec::with_capacity(nodes.len());
    let mut seen = vec![false; nodes.len()];
    for start in 0..nodes.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(n) = queue.pop_front() {
            order.push(n);
            let halves: Vec<usize> = match &nodes[n] {
                Node::Vertex(v) => v.to_vec(),
                Node::Leg { half, .. } => vec![*half],
            };
            for h in halves {
                let m = owner[&partner[&h]];
                if !seen[m] {
                    seen[m] = true;
                    queue.push_back(m);
                }
            }
        }
    }
    let mut state = Contraction {
        t,
        nodes: &nodes,
        order: &order,
        partner: &partner,
        index: HashMap::new(),
        exps: vec![0; ring.len()],
        acc: BTreeMap::new(),
    };
    state.run(0, Rational::one());
    let loop_factor = num_traits::pow(int(t.dim as i64), d.loops);
    let scale = &d.coeff * loop_factor;
    MultiPoly::from_terms(ring, state.acc.into_iter().map(|(e, c)| (e, c * &scale)))
}

struct Contraction<'a> {
    t: &'a Tensors,
    nodes: &'a [Node],
    order: &'a [usize],
    partner: &'a HashMap<usize, usize>,
    index: HashMap<usize, usize>,
    exps: Vec<u32>,
    acc: BTreeMap<Vec<u32>, Rational>,
}

impl Contraction<'_> {
    /// Product of `G⁻¹` over edges closed by assigning `halves` to `idx`.
    fn closing_weight(&self, halves: &[usize], idx: &[usize]) -> Option<Rational> {
        let mut w = Rational::one();
        for (k, h) in halves.iter().enumerate() {
            let p = self.partner[h];
            let other = if let Some(j) = halves.iter().position(|x| *x == p) {
                // edge inside this node: count it once
                if j < k {
                    continue;
                }
                if j == k {
                    unreachable!("edge joins a half-edge to itself");
                }
                idx[j]
            } else if let Some(&b) = self.index.get(&p) {
                b
            } else {
                continue;
            };
            let g = &self.t.g_inv[idx[k]][other];
            if g.is_zero() {
                return None;
            }
            w *= g;
        }
        Some(w)
    }

    fn run(&mut self, step: usize, w: Rational) {
        if step == self.order.len() {
            let e = self.exps.clone();
            *self.acc.entry(e).or_insert_with(Rational::zero) += w;
            return;
        }
        match &self.nodes[self.order[step]] {
            Node::Vertex(v) => {
                let v = *v;
                for (abc, fv) in &self.t.f {
                    let Some(g) = self.closing_weight(&v, abc) else {
                        continue;
                    };
                    for (h, a) in v.iter().zip(abc) {
                        self.index.insert(*h, *a);
                    }
                    self.run(step + 1, &w * fv * g);
                    for h in &v {
                        self.index.remove(h);
                    }
                }
            }
            Node::Leg { half, var_base } => {
                let (half, base) = (*half, *var_base);
                for a in 0..self.t.dim {
                    let Some(g) = self.closing_weight(&[half], &[a]) else {
                        continue;
                    };
                    self.index.insert(half, a);
                    self.exps[base + a] += 1;
                    self.run(step + 1, &w * g);
                    self.exps[base + a] -= 1;
                    self.index.remove(&half);
                }
            }
        }
    }
}

/// Scalar weight of a closed diagram.
pub fn closed_weight(d: &JacobiDiagram, l: &LieAlgebraData) -> Result<Rational> {
    if !d.is_closed() {
        return Err(Error::Diagram("diagram has legs".into()));
    }
    Ok(weight(d, l)?.constant_term())
}

pub fn weight_sum(s: &DiagramSum, l: &LieAlgebraData) -> Result<MultiPoly> {
    let mut total: Option<MultiPoly> = None;
    for d in s.terms() {
        let w = weight(d, l)?;
        total = Some(match total {
            None => w,
            Some(t) => t.checked_add(&w)?,
        });
    }
    Ok(total.unwrap_or_else(|| MultiPoly::zero(l.ring())))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// `⟨D1, D2⟩` for single diagrams: every way of matching the `∂x` legs of
/// `d1` with the `x` legs of `d2` label by label.
pub fn bracket_diagrams(d1: &JacobiDiagram, d2: &JacobiDiagram) -> DiagramSum {
    let joined = d1.union(d2);
    let n1 = d1.legs.len();
    let labels: BTreeSet<&str> = d1
        .legs
        .iter()
        .filter(|l| l.deriv)
        .map(|l| l.label.as_str())
        .chain(d2.legs.iter().filter(|l| !l.deriv).map(|l| l.label.as_str()))
        .collect();
    // per label: (∂ legs in d1, x legs in d2) as indices into joined.legs
    let mut groups: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for lab in labels {
        let ds: Vec<usize> = (0..n1)
            .filter(|&i| joined.legs[i].deriv && joined.legs[i].label == lab)
            .collect();
        let xs: Vec<usize> = (n1..joined.legs.len())
            .filter(|&i| !joined.legs[i].deriv && joined.legs[i].label == lab)
            .collect();
        if ds.len() != xs.len() {
            return DiagramSum::default();
        }
        groups.push((ds, xs));
    }
    let mut matchings: Vec<Vec<(usize, usize)>> = vec![vec![]];
    for (ds, xs) in &groups {
        let perms = permutations(ds.len());
        matchings = matchings
            .into_iter()
            .flat_map(|m| {
                perms.iter().map(move |p| {
                    let mut m = m.clone();
                    m.extend(ds.iter().zip(p).map(|(&a, &k)| (a, xs[k])));
                    m
                })
            })
            .collect();
    }
    let terms = matchings
        .into_iter()
        .map(|pairs| {
            let mut d = joined.clone();
            // glue by half-edge so leg removal does not disturb later pairs
            let halves: Vec<(usize, usize)> = pairs
                .iter()
                .map(|&(a, b)| (joined.legs[a].half, joined.legs[b].half))
                .collect();
            for (ha, hb) in halves {
                let ia = d.legs.iter().position(|l| l.half == ha).expect("leg present");
                let ib = d.legs.iter().position(|l| l.half == hb).expect("leg present");
                d.glue(ia, ib);
            }
            d
        })
        .collect();
    DiagramSum::new(terms)
}

/// Bilinear extension of [`bracket_diagrams`].
pub fn bracket(s1: &DiagramSum, s2: &DiagramSum) -> DiagramSum {
    let mut out = Vec::new();
    for a in s1.terms() {
        for b in s2.terms() {
            out.extend(bracket_diagrams(a, b).terms);
        }
    }
    DiagramSum::new(out)
}

/// `Ŵ⟨exp(−∂-strut/(2f)), D⟩` against `ℰ^(f)_{𝔤*}(Ŵ(D))`, exact Laurent
/// polynomials in ℏ. Only the term with `2d` = number of legs pairs off.
pub fn wu_check(l: &LieAlgebraData, f: Framing, d: &JacobiDiagram) -> Result<(HbarSeries, HbarSeries)> {
    let legs = d.num_legs();
    if legs > WU_MAX_LEGS {
        return Err(Error::Diagram(format!(
            "{legs} legs exceed the bound of {WU_MAX_LEGS}"
        )));
    }
    if d.legs.iter().any(|leg| leg.deriv) {
        return Err(Error::Diagram("wu_check expects x-labelled legs".into()));
    }
    let labels = d.labels();
    if labels.len() > 1 {
        return Err(Error::Diagram("wu_check expects a single leg label".into()));
    }
    let w = weight(d, l)?;
    let rhs = e_op(&QuadraticSpace::coadjoint(l), f, &w)?.shift(d.degree() as i64);
    let scalar = Ring::scalar();
    if legs % 2 == 1 {
        return Ok((HbarSeries::zero(&scalar, None), rhs));
    }
    let k = legs / 2;
    let label = labels.first().cloned().unwrap_or_else(|| "x".into());
    let struts = JacobiDiagram::strut(&label, true).power(k);
    let glued = bracket_diagrams(&struts, d);
    let t = Tensors::new(l);
    let mut by_degree: BTreeMap<usize, Rational> = BTreeMap::new();
    for g in glued.terms() {
        let v = contract(g, &t, &scalar, &[]).constant_term();
        *by_degree.entry(g.degree()).or_insert_with(Rational::zero) += v;
    }
    let factor = num_traits::pow(Rational::new((-1).into(), (2 * f.value()).into()), k) / factorial(k as u32);
    let lhs = HbarSeries::from_coeffs(
        &scalar,
        by_degree
            .into_iter()
            .map(|(deg, v)| (deg as i64, MultiPoly::scalar(v * &factor))),
        None,
    );
    Ok((lhs, rhs))
}

/// Diagrams with at most six `x`-legs used to exercise the bracket identity.
pub fn standard_diagrams() -> Vec<(&'static str, JacobiDiagram)> {
    let strut = JacobiDiagram::strut("x", false);
    let parse = |s: &str| s.parse::<JacobiDiagram>().expect("valid literal");
    vec![
        ("strut", strut.clone()),
        ("strut^2", strut.power(2)),
        ("strut^3", strut.power(3)),
        ("tripod", parse("leg(x):1 leg(x):2 leg(x):3 v(4,5,6) e(1,4) e(2,5) e(3,6)")),
        (
            "H",
            parse("v(1,2,3) v(4,5,6) leg(x):7 leg(x):8 leg(x):9 leg(x):10 e(3,4) e(1,7) e(2,8) e(5,9) e(6,10)"),
        ),
        ("wheel2", parse("v(1,2,3) v(4,5,6) leg(x):7 leg(x):8 e(1,7) e(4,8) e(2,6) e(3,5)")),
        (
            "theta+2legs",
            parse(
                "v(1,2,3) v(4,5,6) v(7,8,9) v(10,11,12) leg(x):13 leg(x):14 \
                 e(1,4) e(2,7) e(8,6) e(9,13) e(3,10) e(11,5) e(12,14)",
            ),
        ),
        ("theta*strut", JacobiDiagram::theta().union(&strut)),
    ]
}

/// `W(θ)` together with `C_ad·dim 𝔤` and `24|ρ|²`.
pub fn theta_values(l: &LieAlgebraData) -> Result<(Rational, Rational, Rational)> {
    let w = closed_weight(&JacobiDiagram::theta(), l)?;
    let cad = l.adjoint_casimir() * int(l.dim() as i64);
    let rho = int(24) * l.root_system().invariants().rho_norm_sq;
    Ok((w, cad, rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::liealg::{build_sl, casimir};

    fn sl(n: usize) -> LieAlgebraData {
        build_sl(n).unwrap()
    }

    fn fr(v: i64) -> Framing {
        Framing::new(v).unwrap()
    }

    fn named(name: &str) -> JacobiDiagram {
        standard_diagrams().into_iter().find(|(n, _)| *n == name).unwrap().1
    }

    fn tripod() -> JacobiDiagram {
        named("tripod")
    }

    fn h_diagram() -> JacobiDiagram {
        named("H")
    }

    fn wheel2() -> JacobiDiagram {
        named("wheel2")
    }

    fn theta_two_legs() -> JacobiDiagram {
        named("theta+2legs")
    }

    #[test]
    fn strut_weight_is_casimir() {
        for n in [2, 3] {
            let l = sl(n);
            assert_eq!(weight(&JacobiDiagram::strut("x", false), &l).unwrap(), casimir(&l));
        }
        assert_eq!(weight(&JacobiDiagram::strut("x", false), &sl(2)).unwrap().to_string(), "1/2*H^2 + 2*E*F");
    }

    #[test]
    fn circle_is_dimension() {
        assert_eq!(closed_weight(&JacobiDiagram::circle(), &sl(2)).unwrap(), int(3));
        assert_eq!(closed_weight(&JacobiDiagram::circle(), &sl(3)).unwrap(), int(8));
    }

    #[test]
    fn theta_weights() {
        for (n, expected) in [(2, 12), (3, 48)] {
            let l = sl(n);
            let (w, cad, rho) = theta_values(&l).unwrap();
            assert_eq!(w, int(expected));
            assert_eq!(cad, int(expected));
            assert_eq!(rho, int(expected));
            let flipped = JacobiDiagram::theta().flip_vertex(0).unwrap();
            assert_eq!(closed_weight(&flipped, &l).unwrap(), int(-expected));
        }
    }

    #[test]
    fn structure_form_is_antisymmetric() {
        for l in [sl(2), sl(3)] {
            let d = l.dim();
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        let v = l.structure_form(a, b, c);
                        assert_eq!(v, l.structure_form(b, c, a));
                        assert_eq!(v, -l.structure_form(b, a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn as_relation_on_legged_diagrams() {
        let l = sl(2);
        for d in [h_diagram(), wheel2(), tripod()] {
            for i in 0..d.vertices().len() {
                let w = weight(&d, &l).unwrap();
                let f = weight(&d.flip_vertex(i).unwrap(), &l).unwrap();
                assert_eq!(f, -w);
            }
        }
    }

    #[test]
    fn multiplicative_on_closed() {
        let l = sl(2);
        let a = JacobiDiagram::theta();
        let b = JacobiDiagram::circle();
        assert_eq!(
            closed_weight(&a.union(&b), &l).unwrap(),
            closed_weight(&a, &l).unwrap() * closed_weight(&b, &l).unwrap()
        );
    }

    #[test]
    fn bracket_counts() {
        let ds = JacobiDiagram::strut("x", true);
        let xs = JacobiDiagram::strut("x", false);
        let b = bracket_diagrams(&ds, &xs);
        assert_eq!(b.len(), 2);
        assert!(b.terms().iter().all(|d| d.is_closed() && d.loops() == 1 && d.vertices().is_empty()));
        assert!(bracket_diagrams(&ds, &tripod()).is_empty());
        let b4 = bracket_diagrams(&ds.power(2), &xs.power(2));
        assert_eq!(b4.len(), 24);
        let l = sl(2);
        let total: Rational = b4.terms().iter().map(|d| closed_weight(d, &l).unwrap()).sum();
        // Δ²(C²) evaluated directly
        let g = QuadraticSpace::coadjoint(&l);
        let c2 = casimir(&l).pow(2);
        let direct = crate::laplace::laplacian_pow(&g, &c2, 2).unwrap().constant_term();
        assert_eq!(total, direct);
    }

    #[test]
    fn bracket_bilinear() {
        let l = sl(2);
        let ds = DiagramSum::single(JacobiDiagram::strut("x", true));
        let x1 = DiagramSum::single(JacobiDiagram::strut("x", false).with_coeff(rat(3, 2)));
        let x2 = DiagramSum::single(JacobiDiagram::strut("x", false).with_coeff(int(-5)));
        let lhs = weight_sum(&bracket(&ds, &x1.plus(&x2)), &l).unwrap();
        let rhs = weight_sum(&bracket(&ds, &x1), &l).unwrap() + weight_sum(&bracket(&ds, &x2), &l).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(
            weight_sum(&bracket(&ds.scale(&int(7)), &x1), &l).unwrap(),
            weight_sum(&bracket(&ds, &x1), &l).unwrap().scale(&int(7))
        );
    }

    #[test]
    fn wu_examples() {
        let l = sl(2);
        let (a, b) = wu_check(&l, fr(1), &JacobiDiagram::strut("x", false)).unwrap();
        assert_eq!(a.scalar_coeff(0), int(-3));
        assert_eq!(a, b);
        let (a, b) = wu_check(&l, fr(1), &tripod()).unwrap();
        assert!(a.is_zero() && b.is_zero());
        let (a, b) = wu_check(&l, fr(1), &JacobiDiagram::strut("x", false).power(2)).unwrap();
        assert_eq!(a, b);
        assert!(wu_check(&l, fr(1), &JacobiDiagram::strut("x", false).power(4)).is_err());
    }

    #[test]
    fn wu_test_set() {
        for n in [2, 3] {
            let l = sl(n);
            for (name, d) in standard_diagrams() {
                for f in [1, -1, 2] {
                    let (a, b) = wu_check(&l, fr(f), &d).unwrap();
                    assert_eq!(a, b, "sl{n} f={f} {name}");
                }
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let samples = vec![
            JacobiDiagram::theta(),
            JacobiDiagram::strut("x", true).with_coeff(rat(-1, 2)),
            h_diagram(),
            JacobiDiagram::circle().power(2),
            JacobiDiagram::empty(),
            theta_two_legs(),
        ];
        for d in samples {
            let text = d.to_string();
            let back: JacobiDiagram = text.parse().unwrap();
            assert_eq!(back, d.canonical(), "{text}");
            assert_eq!(back.to_string(), text);
        }
        assert_eq!(JacobiDiagram::theta().to_string(), "v(1,2,3) v(4,5,6) e(1,4) e(2,6) e(3,5)");
        let s: DiagramSum = "[2] o + [-1/3] leg(y):1 leg(y):2 e(1,2)".parse().unwrap();
        assert_eq!(s.to_string(), "[2] o + [-1/3] leg(y):1 leg(y):2 e(1,2)");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("v(1,2)".parse::<JacobiDiagram>(), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!("o q".parse::<JacobiDiagram>(), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!("leg(x):1".parse::<JacobiDiagram>(), Err(Error::Diagram(_))));
        assert!(matches!("leg(x):1 leg(x):2 e(1,2) e(1,2)".parse::<JacobiDiagram>(), Err(Error::Diagram(_))));
        assert!(weight(&JacobiDiagram::strut("x", true), &sl(2)).is_err());
    }

    #[test]
    fn two_labels() {
        let l = sl(2);
        let d: JacobiDiagram = "leg(x):1 leg(y):2 e(1,2)".parse().unwrap();
        let w = weight(&d, &l).unwrap();
        assert_eq!(w.to_string(), "1/2*H_x*H_y + E_x*F_y + F_x*E_y");
    }
}
