use rayon::prelude::*;
use serde::Serialize;

use super::path::{sample_path, WarrenPath};
use super::profile::{SuperchaosVector, Weight};
use super::psi::{PathFunctional, SplitSignProbe};
use super::replica_rng;
use crate::error::{invalid, Result};

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Grid size, replica count and master seed of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McConfig {
    pub m: usize,
    pub samples: usize,
    pub seed: u64,
}

impl McConfig {
    pub fn new(m: usize, samples: usize, seed: u64) -> Result<Self> {
        if m < 4 {
            return Err(invalid("m", format!("{m} < 4")));
        }
        if samples == 0 {
            return Err(invalid("samples", "must be ≥ 1"));
        }
        Ok(Self { m, samples, seed })
    }
}

/// Applies `per_path` to replicas `0..samples`, returning results in replica order.
///
/// Replica `r` is drawn from [`replica_rng`]`(seed, r)`, so the output does
/// not depend on the thread count.
pub fn simulate<T, F>(cfg: &McConfig, per_path: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&WarrenPath) -> T + Sync,
{
    McConfig::new(cfg.m, cfg.samples, cfg.seed)?;
    (0..cfg.samples as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = replica_rng(cfg.seed, r);
            sample_path(cfg.m, &mut rng).map(|p| per_path(&p))
        })
        .collect()
}

/// Mean and standard error, summed in slice order.
pub fn estimate(values: &[f64], seed: u64) -> McEstimate {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let stderr = if n > 1 {
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        (ss / ((n - 1) as f64 * n as f64)).sqrt()
    } else {
        0.0
    };
    McEstimate {
        mean,
        stderr,
        samples: n,
        seed,
    }
}

/// `Σ_j |g(t_j)|²·ψ(t_j)` over the minima of one path.
pub fn path_integrand(psi: &dyn PathFunctional, f: &SuperchaosVector, path: &WarrenPath) -> f64 {
    let factor = f.factor.eval(path);
    let f2 = factor * factor;
    path.minima()
        .iter()
        .map(|&j| {
            let w = f.weight.eval(path.time(j));
            w * w * f2 * psi.eval(j, path)
        })
        .sum()
}

/// `Σ_j |g(t_j)|²`: the η-average of `chaos_eval(f)²` on one path.
pub fn chaos_norm_sqr(f: &SuperchaosVector, path: &WarrenPath) -> f64 {
    let factor = f.factor.eval(path);
    let f2 = factor * factor;
    path.minima()
        .iter()
        .map(|&j| {
            let w = f.weight.eval(path.time(j));
            w * w * f2
        })
        .sum()
}

/// Monte Carlo estimate of `⟨𝒞_ψ f, f⟩ = E Σ_j |g(t_j)|² ψ(t_j)`.
///
/// The signs integrate out exactly, so each path contributes its
/// η-independent integrand.
#[allow(non_snake_case)]
pub fn quad_form_C(psi: &dyn PathFunctional, f: &SuperchaosVector, cfg: &McConfig) -> Result<McEstimate> {
    psi.check(cfg.m)?;
    f.check_alignment(cfg.m)?;
    let values = simulate(cfg, |p| path_integrand(psi, f, p))?;
    Ok(estimate(&values, cfg.seed))
}

/// `⟨𝒞_ψ⟩_f` and `‖f‖²` on common paths, with their ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairEstimate {
    pub form: McEstimate,
    pub mass: McEstimate,
    pub ratio: f64,
    pub ratio_stderr: f64,
}

/// Ratio `x̄/ȳ` with the delta-method error `√(Σ(x − R y)²/(n(n−1)))/ȳ`.
pub fn ratio_estimate(x: &[f64], y: &[f64], seed: u64) -> Result<PairEstimate> {
    let form = estimate(x, seed);
    let mass = estimate(y, seed);
    if mass.mean <= 0.0 {
        return Err(invalid("f", "profile has zero mass on the sampled paths"));
    }
    let ratio = form.mean / mass.mean;
    let n = x.len();
    let ratio_stderr = if n > 1 {
        let ss: f64 = x.iter().zip(y).map(|(a, b)| (a - ratio * b).powi(2)).sum();
        (ss / (n as f64 * (n - 1) as f64)).sqrt() / mass.mean
    } else {
        0.0
    };
    Ok(PairEstimate {
        form,
        mass,
        ratio,
        ratio_stderr,
    })
}

/// [`quad_form_C`] and the mass `‖f‖²` on the same replicas.
pub fn quad_form_pair(psi: &dyn PathFunctional, f: &SuperchaosVector, cfg: &McConfig) -> Result<PairEstimate> {
    psi.check(cfg.m)?;
    f.check_alignment(cfg.m)?;
    let pairs = simulate(cfg, |p| (path_integrand(psi, f, p), chaos_norm_sqr(f, p)))?;
    let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    ratio_estimate(&x, &y, cfg.seed)
}

/// Normalized `⟨sgn Q_t⟩` in the coherent state `Exp(ζχ_(0,t))`, by Monte Carlo.
///
/// Uses the profile `w = 1_[0,1−t)` times the exponential vector of `ζ` on
/// `(1−t, 1)` and the probe `sgn(B_1 − B_{1−t})` before `1 − t`; the form
/// acts there as `1 ⊗ sgn Q_t`, so the ratio to the mass is the coherent
/// expectation.
pub fn coherent_sign_probe(zeta: f64, t: f64, cfg: &McConfig) -> Result<PairEstimate> {
    if !(t > 0.0 && t < 1.0) {
        return Err(invalid("t", format!("{t} outside (0, 1)")));
    }
    let split = 1.0 - t;
    let f = SuperchaosVector::we(Weight::indicator(0.0, split)?, zeta, split, 1.0)?;
    let psi = SplitSignProbe { split, a: split, b: 1.0 };
    quad_form_pair(&psi, &f, cfg)
}
