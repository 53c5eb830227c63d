//! Monte Carlo Gaussian integration.
//!
//! Samples `x` from the density `(4π)^{-n/2} e^{-|x|²/4}` in orthonormal
//! coordinates, so the coordinate functions `y` have covariance `2G`. They
//! are drawn as `y = √2·B z` with `B Bᵀ = G` and `z` standard normal. For an
//! indefinite `G` the factor `B` is complex; moments of `y` only depend on
//! `B Bᵀ`, so the real part of the sample mean estimates the same Gaussian
//! functional.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rational_to_f64, MultiPoly};
use crate::laplace::{c_constant, e_op, Framing, QuadraticSpace};
use crate::liealg::{is_invariant, restrict, LieAlgebraData};

pub const MIN_SAMPLES: u64 = 10_000;
pub const MAX_DEGREE: u32 = 10;
const BLOCK: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    /// The real value of `fℏ`; must be negative.
    pub f_hbar: f64,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64, f_hbar: f64) -> Result<Self> {
        let cfg = McConfig {
            samples,
            seed,
            f_hbar,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < MIN_SAMPLES {
            return Err(Error::MonteCarlo(format!(
                "at least {MIN_SAMPLES} samples are required, got {}",
                self.samples
            )));
        }
        if !self.f_hbar.is_finite() || self.f_hbar >= 0.0 {
            return Err(Error::MonteCarlo(format!(
                "fℏ must be negative for convergence, got {}",
                self.f_hbar
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// `|estimate − target| ≤ k·stderr`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.estimate - target).abs() <= k * self.stderr
    }
}

enum Factor {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

fn sqrt_factor(space: &QuadraticSpace) -> Result<Factor> {
    let n = space.dim();
    let g = DMatrix::from_fn(n, n, |i, j| rational_to_f64(&space.gram()[i][j]));
    if let Some(ch) = g.clone().cholesky() {
        return Ok(Factor::Real(ch.l()));
    }
    let eig = SymmetricEigen::new(g);
    let scale = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if eig.eigenvalues.iter().any(|v| v.abs() <= 1e-12 * scale.max(1.0)) {
        return Err(Error::DegenerateForm);
    }
    Ok(Factor::Complex(DMatrix::from_fn(n, n, |i, j| {
        Complex64::new(eig.eigenvectors[(i, j)], 0.0) * Complex64::new(eig.eigenvalues[j], 0.0).sqrt()
    })))
}

/// Polynomial prepared for fast floating-point evaluation.
struct FloatPoly {
    terms: Vec<(Vec<u32>, f64)>,
    max_exp: usize,
}

impl FloatPoly {
    fn new(p: &MultiPoly) -> Self {
        let terms: Vec<(Vec<u32>, f64)> = p
            .terms()
            .map(|(e, c)| (e.to_vec(), rational_to_f64(c)))
            .collect();
        let max_exp = terms
            .iter()
            .flat_map(|(e, _)| e.iter().copied())
            .max()
            .unwrap_or(0) as usize;
        FloatPoly { terms, max_exp }
    }

    fn eval<T>(&self, y: &[T], powers: &mut Vec<Vec<T>>) -> T
    where
        T: Copy + std::ops::Mul<Output = T> + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + From<f64>,
    {
        powers.resize(y.len(), Vec::new());
        for (v, row) in y.iter().zip(powers.iter_mut()) {
            row.clear();
            let mut acc = T::from(1.0);
            row.push(acc);
            for _ in 0..self.max_exp {
                acc = acc * *v;
                row.push(acc);
            }
        }
        let mut total = T::from(0.0);
        for (e, c) in &self.terms {
            let mut m = T::from(1.0);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    m = m * powers[i][k as usize];
                }
            }
            total = total + m * *c;
        }
        total
    }
}

/// Mean and standard error of `Re p(√2·B z/scale)` over `samples` draws.
fn sample_mean(space: &QuadraticSpace, p: &MultiPoly, scale: f64, samples: u64, seed: u64) -> Result<(f64, f64)> {
    let factor = sqrt_factor(space)?;
    let poly = FloatPoly::new(p);
    let n = space.dim();
    let blocks = samples.div_ceil(BLOCK);
    let k = std::f64::consts::SQRT_2 / scale;
    let sums: Vec<(f64, f64)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let count = BLOCK.min(samples - b * BLOCK);
            let mut z = vec![0.0f64; n];
            let (mut s, mut s2) = (0.0, 0.0);
            match &factor {
                Factor::Real(l) => {
                    let mut y = vec![0.0f64; n];
                    let mut pw = Vec::new();
                    for _ in 0..count {
                        for zi in z.iter_mut() {
                            *zi = rng.sample(StandardNormal);
                        }
                        for i in 0..n {
                            y[i] = k * (0..=i).map(|j| l[(i, j)] * z[j]).sum::<f64>();
                        }
                        let v = poly.eval(&y, &mut pw);
                        s += v;
                        s2 += v * v;
                    }
                }
                Factor::Complex(bm) => {
                    let mut y = vec![Complex64::new(0.0, 0.0); n];
                    let mut pw = Vec::new();
                    for _ in 0..count {
                        for zi in z.iter_mut() {
                            *zi = rng.sample(StandardNormal);
                        }
                        for i in 0..n {
                            y[i] = (0..n).map(|j| bm[(i, j)] * z[j]).sum::<Complex64>() * k;
                        }
                        let v = poly.eval(&y, &mut pw).re;
                        s += v;
                        s2 += v * v;
                    }
                }
            }
            (s, s2)
        })
        .collect();
    // reduce in block order so the result does not depend on scheduling
    let (mut s, mut s2) = (0.0, 0.0);
    for (a, b) in sums {
        s += a;
        s2 += b;
    }
    let nf = samples as f64;
    let mean = s / nf;
    let var = (s2 / nf - mean * mean).max(0.0) * nf / (nf - 1.0);
    Ok((mean, (var / nf).sqrt()))
}

fn check_ring(space: &QuadraticSpace, p: &MultiPoly) -> Result<MultiPoly> {
    if p.ring().is_scalar() {
        return Ok(p.embed(space.ring()));
    }
    if p.ring() != space.ring() {
        return Err(p.ring().mismatch(space.ring()));
    }
    Ok(p.clone())
}

/// `(4π)^{-n/2} ∫ e^{-|x|²/4} p(x/√(−2fℏ)) dx`.
pub fn gauss_mc(space: &QuadraticSpace, cfg: &McConfig, p: &MultiPoly) -> Result<McEstimate> {
    cfg.validate()?;
    let p = check_ring(space, p)?;
    if let Some(d) = p.degree() {
        if d > MAX_DEGREE {
            return Err(Error::DegreeBound {
                degree: d,
                bound: MAX_DEGREE,
            });
        }
    }
    let scale = (-2.0 * cfg.f_hbar).sqrt();
    let (estimate, stderr) = sample_mean(space, &p, scale, cfg.samples, cfg.seed)?;
    Ok(McEstimate {
        estimate,
        stderr,
        samples: cfg.samples,
        seed: cfg.seed,
    })
}

/// `ℰ(p)` evaluated at a real value of `fℏ`.
pub fn e_op_at(space: &QuadraticSpace, p: &MultiPoly, f_hbar: f64) -> Result<f64> {
    // with f = 1 the series is a polynomial in 1/ℏ, so substitute ℏ = fℏ
    let s = e_op(space, Framing::new(1)?, &check_ring(space, p)?)?;
    Ok(s.coeffs()
        .map(|(k, c)| rational_to_f64(&c.constant_term()) * f_hbar.powi(k as i32))
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylRatio {
    pub ratio: f64,
    pub stderr: f64,
    /// `(4π)^{φ₊}/c`.
    pub expected: f64,
    pub g_side: McEstimate,
    pub h_side: McEstimate,
}

/// `∫_{𝔤*} e^{-|x|²/4} p / ∫_{𝔥*} e^{-|x|²/4} 𝒟²𝒫(p)`, both over Lebesgue measure.
pub fn weyl_ratio(l: &LieAlgebraData, cfg: &McConfig, p: &MultiPoly) -> Result<WeylRatio> {
    cfg.validate()?;
    let g = QuadraticSpace::coadjoint(l);
    let p = check_ring(&g, p)?;
    if !is_invariant(l, &p)? {
        return Err(Error::NotInvariant(p.to_string()));
    }
    let rs = l.root_system();
    let h = QuadraticSpace::cartan(rs);
    let disc = rs.disc_poly();
    let q = &(&disc * &disc) * &restrict(l, &p)?;
    let h_seed = cfg.seed ^ 0x9e37_79b9_7f4a_7c15;
    let (mg, sg) = sample_mean(&g, &p, 1.0, cfg.samples, cfg.seed)?;
    let (mh, sh) = sample_mean(&h, &q, 1.0, cfg.samples, h_seed)?;
    let phi = rs.invariants().phi_plus as i32;
    // (4π)^{dim 𝔤/2 − rank/2} = (4π)^{φ₊} converts the normalized means
    let four_pi = (4.0 * std::f64::consts::PI).powi(phi);
    let ratio = four_pi * mg / mh;
    let rel = ((sg / mg).powi(2) + (sh / mh).powi(2)).sqrt();
    Ok(WeylRatio {
        ratio,
        stderr: ratio.abs() * rel,
        expected: four_pi / rational_to_f64(&c_constant(rs)),
        g_side: McEstimate {
            estimate: mg,
            stderr: sg,
            samples: cfg.samples,
            seed: cfg.seed,
        },
        h_side: McEstimate {
            estimate: mh,
            stderr: sh,
            samples: cfg.samples,
            seed: h_seed,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, Ring};
    use crate::liealg::{build_sl, casimir};

    fn line() -> QuadraticSpace {
        QuadraticSpace::new(Ring::new(["x"]), vec![vec![int(1)]]).unwrap()
    }

    fn cfg(samples: u64, f_hbar: f64) -> McConfig {
        McConfig::new(samples, 42, f_hbar).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(McConfig::new(100, 1, -1.0).is_err());
        assert!(McConfig::new(MIN_SAMPLES, 1, 0.0).is_err());
        assert!(McConfig::new(MIN_SAMPLES, 1, 0.5).is_err());
        assert!(McConfig::new(MIN_SAMPLES, 1, f64::NAN).is_err());
    }

    #[test]
    fn second_moment() {
        let s = line();
        let x = MultiPoly::var(s.ring(), "x").unwrap();
        let est = gauss_mc(&s, &cfg(200_000, -0.1), &x.pow(2)).unwrap();
        assert!((e_op_at(&s, &x.pow(2), -0.1).unwrap() - 10.0).abs() < 1e-12);
        assert!(est.within(10.0, 4.0), "{est:?}");
        let odd = gauss_mc(&s, &cfg(200_000, -0.1), &x.pow(3)).unwrap();
        assert!(odd.within(0.0, 4.0), "{odd:?}");
    }

    #[test]
    fn casimir_on_indefinite_form() {
        let l = build_sl(2).unwrap();
        let g = QuadraticSpace::coadjoint(&l);
        let est = gauss_mc(&g, &cfg(200_000, -0.5), &casimir(&l)).unwrap();
        assert!((e_op_at(&g, &casimir(&l), -0.5).unwrap() - 6.0).abs() < 1e-12);
        assert!(est.within(6.0, 4.0), "{est:?}");
    }

    #[test]
    fn reproducible() {
        let l = build_sl(2).unwrap();
        let g = QuadraticSpace::coadjoint(&l);
        let p = casimir(&l).pow(2);
        let a = gauss_mc(&g, &cfg(50_000, -1.0), &p).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| gauss_mc(&g, &cfg(50_000, -1.0), &p).unwrap());
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }

    #[test]
    fn degree_bound_and_ring() {
        let s = line();
        let x = MultiPoly::var(s.ring(), "x").unwrap();
        assert!(matches!(gauss_mc(&s, &cfg(MIN_SAMPLES, -1.0), &x.pow(11)), Err(Error::DegreeBound { .. })));
        let other = MultiPoly::var(&Ring::new(["z"]), "z").unwrap();
        assert!(gauss_mc(&s, &cfg(MIN_SAMPLES, -1.0), &other).is_err());
    }

    #[test]
    fn sl2_ratio_is_pi() {
        let l = build_sl(2).unwrap();
        let r = weyl_ratio(&l, &cfg(200_000, -1.0), &MultiPoly::one(l.ring())).unwrap();
        assert!((r.expected - std::f64::consts::PI).abs() < 1e-12);
        assert!((r.ratio - r.expected).abs() <= 4.0 * r.stderr, "{r:?}");
        assert!(weyl_ratio(&l, &cfg(MIN_SAMPLES, -1.0), &l.var("E").unwrap()).is_err());
    }
}
