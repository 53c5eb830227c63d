//! Batch verification over a configured grid and the JSON report it produces.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::diagrams::{closed_weight, standard_diagrams, theta_values, wu_check, JacobiDiagram};
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, int, rational_to_f64, HbarSeries, MultiPoly, Rational, Ring};
use crate::laplace::{
    c_constant, check_dhd, check_hcrf, e_op, i2_trivial, laplacian, lens_tau, o_eq_e_check,
    reduce_identity_with_constant, Framing, QuadraticSpace,
};
use crate::liealg::{ad_apply, casimir, invariant_basis, parse_algebra, sym_char, LieAlgebraData};
use crate::oracle::{e_op_at, gauss_mc, weyl_ratio, McConfig, MIN_SAMPLES};
use crate::rootsys::{parse_root_system, weyl_group, RootSystem};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Hcrf,
    Dhd,
    Reduce,
    Wu,
    Oe,
    Theta,
    Disc,
    Intertwiner,
    I2,
    Mc,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Hcrf,
        Suite::Dhd,
        Suite::Reduce,
        Suite::Wu,
        Suite::Oe,
        Suite::Theta,
        Suite::Disc,
        Suite::Intertwiner,
        Suite::I2,
        Suite::Mc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hcrf => "hcrf",
            Suite::Dhd => "dhd",
            Suite::Reduce => "reduce",
            Suite::Wu => "wu",
            Suite::Oe => "oe",
            Suite::Theta => "theta",
            Suite::Disc => "disc",
            Suite::Intertwiner => "intertwiner",
            Suite::I2 => "i2",
            Suite::Mc => "mc",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite `{s}`")))
    }
}

fn default_algebras() -> Vec<String> {
    vec!["sl2".into(), "sl3".into()]
}

fn default_root_systems() -> Vec<String> {
    ["A1", "A2", "A3", "B2", "G2"].iter().map(|s| s.to_string()).collect()
}

fn default_framings() -> Vec<i64> {
    vec![1, -1, 2, -2, 3]
}

fn default_suites() -> Vec<Suite> {
    Suite::ALL.to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub algebras: Vec<String>,
    pub root_systems: Vec<String>,
    pub max_degree: u32,
    pub series_order: i64,
    pub framings: Vec<i64>,
    pub mc_samples: u64,
    pub mc_seed: u64,
    pub suites: Vec<Suite>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Negative control: scales the reduction constant by 2.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub tamper_constant: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            algebras: default_algebras(),
            root_systems: default_root_systems(),
            max_degree: 8,
            series_order: 8,
            framings: default_framings(),
            mc_samples: 1_000_000,
            mc_seed: 42,
            suites: default_suites(),
            output: None,
            tamper_constant: false,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_degree < 2 || self.max_degree % 2 == 1 {
            return Err(Error::Config(format!("max_degree must be an even number ≥ 2, got {}", self.max_degree)));
        }
        if self.series_order < 0 {
            return Err(Error::Config(format!("series_order must be non-negative, got {}", self.series_order)));
        }
        if self.framings.is_empty() {
            return Err(Error::Config("framings must not be empty".into()));
        }
        if self.framings.contains(&0) {
            return Err(Error::Config("framings must be non-zero".into()));
        }
        if self.mc_samples < MIN_SAMPLES {
            return Err(Error::Config(format!("mc_samples must be at least {MIN_SAMPLES}")));
        }
        self.algebra_data()?;
        self.root_system_data()?;
        Ok(())
    }

    fn algebra_data(&self) -> Result<Vec<LieAlgebraData>> {
        self.algebras.iter().map(|a| parse_algebra(a)).collect()
    }

    fn root_system_data(&self) -> Result<Vec<RootSystem>> {
        self.root_systems.iter().map(|r| parse_root_system(r)).collect()
    }

    fn framing_values(&self) -> Vec<Framing> {
        self.framings.iter().filter_map(|&f| Framing::new(f).ok()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub suite: Suite,
    pub identity: String,
    pub algebra: String,
    pub inputs: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub pass: bool,
    pub timing_ms: f64,
}

impl Record {
    fn new(suite: Suite, identity: &str, algebra: &str, inputs: Value) -> Self {
        Record {
            suite,
            identity: identity.to_string(),
            algebra: algebra.to_string(),
            inputs,
            lhs: None,
            rhs: None,
            equal: None,
            estimate: None,
            expected: None,
            stderr: None,
            samples: None,
            seed: None,
            order: None,
            error: None,
            pass: false,
            timing_ms: 0.0,
        }
    }

    fn exact(mut self, lhs: impl ToString, rhs: impl ToString, equal: bool) -> Self {
        self.lhs = Some(lhs.to_string());
        self.rhs = Some(rhs.to_string());
        self.equal = Some(equal);
        self.pass = equal;
        self
    }

    fn failed(mut self, e: &Error) -> Self {
        self.error = Some(e.to_string());
        self.pass = false;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: SuiteConfig,
    pub records: Vec<Record>,
    pub overall_pass: bool,
}

impl Report {
    pub fn first_failure(&self) -> Option<&Record> {
        self.records.iter().find(|r| !r.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with timing fields removed, for determinism comparisons.
    pub fn to_json_without_timing(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(recs) = v.get_mut("records").and_then(Value::as_array_mut) {
            for r in recs {
                if let Some(o) = r.as_object_mut() {
                    o.remove("timing_ms");
                }
            }
        }
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    /// Writes through a temporary file in the same directory and renames it.
    pub fn write_atomic(&self, path: &Path) -> std::io::Result<()> {
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
        std::fs::write(&tmp, self.to_json())?;
        std::fs::rename(&tmp, path)
    }

    pub fn summary(&self) -> Vec<(Suite, usize, usize)> {
        let mut out: Vec<(Suite, usize, usize)> = Vec::new();
        for r in &self.records {
            match out.iter_mut().find(|(s, _, _)| *s == r.suite) {
                Some(e) => {
                    e.1 += 1;
                    e.2 += usize::from(r.pass);
                }
                None => out.push((r.suite, 1, usize::from(r.pass))),
            }
        }
        out
    }
}

type Job<'a> = Box<dyn Fn() -> Record + Send + Sync + 'a>;

fn timed(job: &Job<'_>) -> Record {
    let start = Instant::now();
    let mut r = job();
    r.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    r
}

fn series_eq(a: &HbarSeries, b: &HbarSeries) -> bool {
    a.truncation() == b.truncation() && a.agrees_with(b)
}

fn exact_record<T: ToString, F>(rec: Record, f: F) -> Record
where
    F: FnOnce() -> Result<(T, T, bool)>,
{
    match f() {
        Ok((l, r, eq)) => rec.exact(l, r, eq),
        Err(e) => rec.failed(&e),
    }
}

/// Deterministic small polynomials of degree ≤ 4 for the intertwiner checks.
fn sample_polys(ring: &Ring, seed: u64, count: usize) -> Vec<MultiPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = ring.len();
    (0..count)
        .map(|_| {
            let terms = (0..5).map(|_| {
                let mut e = vec![0u32; n];
                let deg = rng.random_range(1..=4u32);
                for _ in 0..deg {
                    e[rng.random_range(0..n)] += 1;
                }
                (e, int(rng.random_range(-3..=3i64)))
            });
            MultiPoly::from_terms(ring, terms)
        })
        .collect()
}

/// Even-degree Weyl-invariant polynomials, symmetrized from monomials.
pub fn weyl_invariant_basis(rs: &RootSystem, max_degree: u32) -> Result<Vec<MultiPoly>> {
    let w = weyl_group(rs)?;
    let ring = rs.coord_ring();
    let n = ring.len();
    let mut out: Vec<MultiPoly> = Vec::new();
    for d in (2..=max_degree).step_by(2) {
        let mut monos: Vec<Vec<u32>> = vec![vec![]];
        for _ in 0..n {
            monos = monos
                .into_iter()
                .flat_map(|m| {
                    let used: u32 = m.iter().sum();
                    (0..=d - used).map(move |k| {
                        let mut m = m.clone();
                        m.push(k);
                        m
                    })
                })
                .collect();
        }
        for m in monos.into_iter().filter(|m| m.iter().sum::<u32>() == d) {
            let p = w.symmetrize(&MultiPoly::monomial(ring, m, Rational::from_integer(1.into())));
            if !p.is_zero() && !out.contains(&p) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

fn hcrf_jobs<'a>(cfg: &'a SuiteConfig, algs: &'a [LieAlgebraData]) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job<'a>> = Vec::new();
    for l in algs {
        for (label, p) in invariant_basis(l, cfg.max_degree) {
            jobs.push(Box::new(move || {
                let rec = Record::new(Suite::Hcrf, "hcrf", &l.name(), json!({ "p": label }));
                exact_record(rec, || {
                    let (a, b) = check_hcrf(l, &p)?;
                    let eq = a == b;
                    Ok((a.to_string(), b.to_string(), eq))
                })
            }));
        }
    }
    jobs
}

fn dhd_jobs<'a>(cfg: &'a SuiteConfig, algs: &'a [LieAlgebraData]) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job<'a>> = Vec::new();
    for l in algs {
        for (label, p) in invariant_basis(l, cfg.max_degree) {
            if p.degree().unwrap_or(0) % 2 == 1 {
                continue;
            }
            jobs.push(Box::new(move || {
                let rec = Record::new(Suite::Dhd, "dhd", &l.name(), json!({ "p": label }));
                exact_record(rec, || {
                    let (a, b) = check_dhd(l, &p)?;
                    Ok((fmt_rational(&a), fmt_rational(&b), a == b))
                })
            }));
        }
    }
    jobs
}

fn reduce_jobs<'a>(cfg: &'a SuiteConfig, algs: &'a [LieAlgebraData]) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job<'a>> = Vec::new();
    for l in algs {
        let mut c = c_constant(l.root_system());
        if cfg.tamper_constant {
            c *= int(2);
        }
        for (label, p) in invariant_basis(l, cfg.max_degree) {
            for f in cfg.framing_values() {
                let (c, label, p) = (c.clone(), label.clone(), p.clone());
                jobs.push(Box::new(move || {
                    let rec = Record::new(
                        Suite::Reduce,
                        "reduce_identity",
                        &l.name(),
                        json!({ "p": label, "f": f.value(), "c": fmt_rational(&c) }),
                    );
                    exact_record(rec, || {
                        let (a, b) = reduce_identity_with_constant(l, f, &p, &c)?;
                        let eq = a == b;
                        Ok((a.to_string(), b.to_string(), eq))
                    })
                }));
            }
        }
    }
    jobs
}

fn wu_jobs<'a>(cfg: &'a SuiteConfig, algs: &'a [LieAlgebraData]) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job<'a>> = Vec::new();
    for l in algs {
        for (name, d) in standard_diagrams() {
            for f in cfg.framing_values() {
                let d = d.clone();
                jobs.push(Box::new(move || {
                    let rec = Record::new(
                        Suite::Wu,
                        "bracket_laplacian",
                        &l.name(),
                        json!({ "diagram": name, "text": d.to_string(), "f": f.value() }),
                    );
                    exact_record(rec, || {
                        let (a, b) = wu_check(l, f, &d)?;
                        let eq = a == b;
                        Ok((a.to_string(), b.to_string(), eq))
                    })
                }));
            }
        }
    }
    jobs
}

fn oe_jobs<'a>(cfg: &'a SuiteConfig, rss: &'a [RootSystem]) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job<'a>> = Vec::new();
    let order = cfg.series_order;
    for rs in rss {
        let mut polys = vec![MultiPoly::one(rs.coord_ring())];
        polys.extend(weyl_invariant_basis(rs, cfg.max_degree).unwrap_or_default());
        for p in polys {
            for f in cfg.framing_values() {
                let p = p.clone();
                jobs.push(Box::new(move || {
                    let mut rec = Record::new(
                        Suite::Oe,
                        "o_equals_e",
                        &rs.name(),
                        json!({ "p": p.to_string(), "f": f.value() }),
                    );
                    rec.order = Some(order);
                    exact_record(rec, || {
                        let (a, b) = o_eq_e_check(rs, f, &p, order)?;
                        let eq = series_eq(&a, &b);
                        Ok((a.to_string(), b.to_string(), eq))
                    })
                }));
            }
        }
    }
    jobs
}

fn theta_jobs<'a>(algs: &'a [LieAlgebraData]) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job<'a>> = Vec::new();
    for l in algs {
        jobs.push(Box::new(move || {
            let rec = Record::new(Suite::Theta, "theta_weight", &l.name(), json!({ "reference": "24|rho|^2" }));
            exact_record(rec, || {
                let (w, cad, rho) = theta_values(l)?;
                let eq = w == rho && w == cad;
                Ok((fmt_rational(&w), fmt_rational(&rho), eq))
            })
        }));
        jobs.push(Box::new(move || {
            let rec = Record::new(Suite::Theta, "theta_flip", &l.name(), json!({ "flipped_vertex": 0 }));
            exact_record(rec, || {
                let w = closed_weight(&JacobiDiagram::theta(), l)?;
                let f = closed_weight(&JacobiDiagram::theta().flip_vertex(0)?, l)?;
                Ok((fmt_rational(&f), fmt_rational(&-w.clone()), f == -w))
            })
        }));
    }
    jobs
}

fn disc_jobs<'a>(rss: &'a [RootSystem]) -> Vec<Job<'a>> {
    rss.iter()
        .map(|rs| -> Job<'a> {
            Box::new(move || {
                let rec = Record::new(Suite::Disc, "disc_harmonic", &rs.name(), json!({ "p": rs.disc_poly().to_string() }));
                exact_record(rec, || {
                    let d = laplacian(&QuadraticSpace::cartan(rs), &rs.disc_poly())?;
                    Ok((d.to_string(), "0".to_string(), d.is_zero()))
                })
            })
        })
        .collect()
}

fn intertwiner_jobs<'a>(cfg: &'a SuiteConfig, algs: &'a [LieAlgebraData]) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job<'a>> = Vec::new();
    for l in algs {
        let polys = sample_polys(l.ring(), cfg.mc_seed, 4);
        for (gi, g) in polys.into_iter().enumerate() {
            for x in 0..l.dim() {
                let g2 = g.clone();
                jobs.push(Box::new(move || {
                    let xname = l.basis_names()[x].clone();
                    let rec = Record::new(
                        Suite::Intertwiner,
                        "e_op_of_ad",
                        &l.name(),
                        json!({ "g": g2.to_string(), "g_index": gi, "X": xname }),
                    );
                    exact_record(rec, || {
                        let ad = ad_apply(l, x, &g2)?;
                        let space = QuadraticSpace::coadjoint(l);
                        let mut all = true;
                        let mut shown = String::from("0");
                        for f in cfg.framing_values() {
                            let v = e_op(&space, f, &ad)?;
                            if !v.is_zero() {
                                all = false;
                                shown = v.to_string();
                            }
                        }
                        Ok((shown, "0".to_string(), all))
                    })
                }));
                if l.rank_n() == 2 {
                    let g3 = g.clone();
                    jobs.push(Box::new(move || {
                        let xname = l.basis_names()[x].clone();
                        let rec = Record::new(
                            Suite::Intertwiner,
                            "trace_of_ad",
                            &l.name(),
                            json!({ "g": g3.to_string(), "g_index": gi, "X": xname, "k": "1..=6" }),
                        );
                        exact_record(rec, || {
                            let ad = ad_apply(l, x, &g3)?;
                            let mut worst = Rational::zero();
                            for k in 1..=6 {
                                let t = sym_char(l, k, &ad)?;
                                if t.abs() > worst.abs() {
                                    worst = t;
                                }
                            }
                            Ok((fmt_rational(&worst), "0".to_string(), worst.is_zero()))
                        })
                    }));
                }
            }
        }
    }
    jobs
}

fn i2_jobs<'a>(cfg: &'a SuiteConfig, rss: &'a [RootSystem]) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job<'a>> = Vec::new();
    let order = cfg.series_order;
    for rs in rss {
        for s in [1i64, -1] {
            jobs.push(Box::new(move || {
                let mut rec = Record::new(Suite::I2, "i2_leading", &rs.name(), json!({ "f": s }));
                rec.order = Some(0);
                exact_record(rec, || {
                    let phi = rs.invariants().phi_plus;
                    let i2 = i2_trivial(rs, Framing::new(s)?, 0)?;
                    let lead = i2.scalar_coeff(-(phi as i64));
                    let expected = c_constant(rs) / num_traits::pow(int(-2 * s), phi);
                    let ok = lead == expected && i2.min_order() == Some(-(phi as i64));
                    Ok((fmt_rational(&lead), fmt_rational(&expected), ok))
                })
            }));
            jobs.push(Box::new(move || {
                let mut rec = Record::new(Suite::I2, "lens_unit", &rs.name(), json!({ "p": s }));
                rec.order = Some(order);
                exact_record(rec, || {
                    let t = lens_tau(rs, s, order)?;
                    let one = HbarSeries::one().truncate(order);
                    let eq = series_eq(&t, &one);
                    Ok((t.to_string(), one.to_string(), eq))
                })
            }));
        }
    }
    jobs
}

fn mc_jobs<'a>(cfg: &'a SuiteConfig, algs: &'a [LieAlgebraData]) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job<'a>> = Vec::new();
    let samples = cfg.mc_samples;
    let seed = cfg.mc_seed;
    let line = || QuadraticSpace::new(Ring::new(["x"]), vec![vec![int(1)]]).expect("valid");
    let gauss = move |rec: Record, space: QuadraticSpace, p: MultiPoly, f_hbar: f64| -> Record {
        let mut rec = rec;
        let res = McConfig::new(samples, seed, f_hbar).and_then(|c| {
            let est = gauss_mc(&space, &c, &p)?;
            let target = e_op_at(&space, &p, f_hbar)?;
            Ok((est, target))
        });
        match res {
            Ok((est, target)) => {
                rec.estimate = Some(est.estimate);
                rec.expected = Some(target);
                rec.stderr = Some(est.stderr);
                rec.samples = Some(samples);
                rec.seed = Some(seed);
                rec.pass = est.within(target, 4.0);
                rec
            }
            Err(e) => rec.failed(&e),
        }
    };
    jobs.push(Box::new(move || {
        let s = line();
        let x = MultiPoly::var(s.ring(), "x").expect("x");
        gauss(Record::new(Suite::Mc, "gauss_mc", "R1", json!({ "p": "x^2", "f_hbar": -0.1 })), s, x.pow(2), -0.1)
    }));
    jobs.push(Box::new(move || {
        let s = line();
        let x = MultiPoly::var(s.ring(), "x").expect("x");
        gauss(Record::new(Suite::Mc, "gauss_mc", "R1", json!({ "p": "x^3", "f_hbar": -0.1 })), s, x.pow(3), -0.1)
    }));
    for l in algs {
        jobs.push(Box::new(move || {
            let rec = Record::new(Suite::Mc, "gauss_mc", &l.name(), json!({ "p": "C", "f_hbar": -0.5 }));
            gauss(rec, QuadraticSpace::coadjoint(l), casimir(l), -0.5)
        }));
        let rs = l.root_system();
        jobs.push(Box::new(move || {
            let d = rs.disc_poly();
            let rec = Record::new(Suite::Mc, "gauss_mc", &rs.name(), json!({ "p": "D^2", "f_hbar": -1.0 }));
            gauss(rec, QuadraticSpace::cartan(rs), &d * &d, -1.0)
        }));
        for (label, p) in [("1", MultiPoly::one(l.ring())), ("C", casimir(l))] {
            jobs.push(Box::new(move || {
                let rec = Record::new(Suite::Mc, "weyl_ratio", &l.name(), json!({ "p": label }));
                let res = McConfig::new(samples, seed, -1.0).and_then(|c| weyl_ratio(l, &c, &p));
                match res {
                    Ok(r) => {
                        let mut rec = rec;
                        rec.estimate = Some(r.ratio);
                        rec.expected = Some(r.expected);
                        rec.stderr = Some(r.stderr);
                        rec.samples = Some(samples);
                        rec.seed = Some(seed);
                        rec.pass = (r.ratio - r.expected).abs() <= 4.0 * r.stderr;
                        rec
                    }
                    Err(e) => rec.failed(&e),
                }
            }));
        }
    }
    jobs
}

/// Runs the selected suites over the configured grid.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let algs = cfg.algebra_data()?;
    let rss = cfg.root_system_data()?;
    let mut suites = cfg.suites.clone();
    suites.sort();
    suites.dedup();
    let mut records = Vec::new();
    for suite in suites {
        let jobs = match suite {
            Suite::Hcrf => hcrf_jobs(cfg, &algs),
            Suite::Dhd => dhd_jobs(cfg, &algs),
            Suite::Reduce => reduce_jobs(cfg, &algs),
            Suite::Wu => wu_jobs(cfg, &algs),
            Suite::Oe => oe_jobs(cfg, &rss),
            Suite::Theta => theta_jobs(&algs),
            Suite::Disc => disc_jobs(&rss),
            Suite::Intertwiner => intertwiner_jobs(cfg, &algs),
            Suite::I2 => i2_jobs(cfg, &rss),
            Suite::Mc => mc_jobs(cfg, &algs),
        };
        // the Monte Carlo jobs parallelize internally
        let batch: Vec<Record> = if suite == Suite::Mc {
            jobs.iter().map(timed).collect()
        } else {
            jobs.par_iter().map(timed).collect()
        };
        records.extend(batch);
    }
    let overall_pass = records.iter().all(|r| r.pass);
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        records,
        overall_pass,
    })
}

/// Floating value of an exact rational, for human-readable summaries.
pub fn approx(r: &Rational) -> f64 {
    rational_to_f64(r)
}
