//! Numerical checks of the commutation relations between shifts and rotations.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::automorphism::{apply_automorphism, apply_automorphism_per_piece, AutomorphismParams};
use super::span::{span_inner, unit, ExpSpan, ExpTerm};
use super::step::StepFunction;
use crate::error::{Error, Result};

/// Contracted bound for every relation residual.
pub const RELATION_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn shift(xi: Complex64) -> AutomorphismParams {
    AutomorphismParams::shift(xi).expect("finite shift")
}

/// `‖a − b‖ / ‖reference‖`.
fn relative_residual(a: &ExpSpan, b: &ExpSpan, reference: &ExpSpan) -> Result<f64> {
    let denom = reference.norm();
    if denom == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(a.sub(b)?.norm() / denom)
}

/// `‖θ^shift(iλ) θ^shift(μ) v − e^{2iλμT} θ^shift(μ) θ^shift(iλ) v‖ / ‖v‖`.
pub fn ccr_phase_residual(lambda: f64, mu: f64, v: &ExpSpan) -> Result<f64> {
    let phase = Complex64::new(0.0, 2.0 * lambda * mu * v.horizon()).exp();
    ccr_phase_residual_with(lambda, mu, v, phase)
}

/// [`ccr_phase_residual`] with an arbitrary trial phase in place of `e^{2iλμT}`.
pub fn ccr_phase_residual_with(lambda: f64, mu: f64, v: &ExpSpan, phase: Complex64) -> Result<f64> {
    let im = shift(Complex64::new(0.0, lambda));
    let re = shift(Complex64::new(mu, 0.0));
    let lhs = apply_automorphism(&im, &apply_automorphism(&re, v)?)?;
    let rhs = apply_automorphism(&re, &apply_automorphism(&im, v)?)?.scaled(phase);
    relative_residual(&lhs, &rhs, v)
}

/// Random complex number with real and imaginary parts in `[-r, r]`.
fn random_complex<R: Rng>(rng: &mut R, r: f64) -> Complex64 {
    Complex64::new(rng.random_range(-r..=r), rng.random_range(-r..=r))
}

/// Random step function on `[0, horizon]` with 1 to 4 pieces.
pub fn random_step_function<R: Rng>(rng: &mut R, horizon: f64) -> StepFunction {
    let pieces = rng.random_range(1..=4usize);
    let mut cuts: Vec<f64> = (1..pieces).map(|_| rng.random_range(0.05..0.95) * horizon).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut breakpoints = vec![0.0];
    breakpoints.extend(cuts);
    breakpoints.push(horizon);
    let values = (1..breakpoints.len()).map(|_| random_complex(rng, 1.0)).collect();
    StepFunction::new(breakpoints, values).expect("sorted random partition")
}

/// Random span of at most `max_terms` exponentials on `[0, horizon]`: a mix
/// of units `u^(a,ζ)(T)` and step-function exponentials.
pub fn random_span<R: Rng>(rng: &mut R, max_terms: usize, horizon: f64) -> ExpSpan {
    let k = rng.random_range(1..=max_terms.max(1));
    let terms: Vec<ExpTerm> = (0..k)
        .map(|_| {
            let coeff = random_complex(rng, 1.0);
            if rng.random_bool(0.5) {
                let u = unit(random_complex(rng, 0.5), random_complex(rng, 1.2), horizon)
                    .expect("positive horizon");
                let t = &u.terms()[0];
                ExpTerm { coeff: coeff * t.coeff, f: t.f.clone() }
            } else {
                ExpTerm { coeff, f: random_step_function(rng, horizon) }
            }
        })
        .collect();
    ExpSpan::new(horizon, terms).expect("common horizon")
}

/// Random span built from units only.
pub fn random_unit_span<R: Rng>(rng: &mut R, max_units: usize, horizon: f64) -> ExpSpan {
    let k = rng.random_range(1..=max_units.max(1));
    let terms: Vec<ExpTerm> = (0..k)
        .map(|_| {
            let u = unit(random_complex(rng, 0.5), random_complex(rng, 1.2), horizon)
                .expect("positive horizon");
            let t = &u.terms()[0];
            ExpTerm { coeff: random_complex(rng, 1.0) * t.coeff, f: t.f.clone() }
        })
        .collect();
    ExpSpan::new(horizon, terms).expect("common horizon")
}

fn random_unimodular<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..TAU))
}

fn random_params<R: Rng>(rng: &mut R) -> AutomorphismParams {
    AutomorphismParams::new(rng.random_range(-3.0..=3.0), random_complex(rng, 1.5), random_unimodular(rng))
        .expect("unimodular by construction")
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationResidual {
    pub relation: &'static str,
    pub trials: usize,
    pub max_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub seed: u64,
    pub rows: Vec<RelationResidual>,
}

impl RelationReport {
    pub fn max_residual(&self) -> f64 {
        self.rows.iter().map(|r| r.max_residual).fold(0.0, f64::max)
    }

    pub fn get(&self, relation: &str) -> Option<&RelationResidual> {
        self.rows.iter().find(|r| r.relation == relation)
    }

    pub fn all_within(&self, tol: f64) -> bool {
        self.rows.iter().all(|r| r.max_residual <= tol)
    }
}

/// [`relation_suite_with`] at 100 trials per relation.
pub fn relation_suite(seed: u64) -> Result<RelationReport> {
    relation_suite_with(seed, 100)
}

/// Evaluates every shift/rotation relation on `trials` seeded random inputs
/// and records the largest residual of each.
///
/// Residuals are `‖lhs − rhs‖/‖v‖`, except `gram_preservation` and
/// `composition_unitarity`, which use `|⟨θv,θw⟩ − ⟨v,w⟩| / (‖v‖‖w‖)`.
pub fn relation_suite_with(seed: u64, trials: usize) -> Result<RelationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<(&'static str, f64)> = [
        "rotation_composition",
        "rotation_on_units",
        "rotation_conjugates_shift",
        "imaginary_shift_composition",
        "real_shift_composition",
        "imaginary_shift_on_units",
        "multiplication_identity",
        "ccr_phase",
        "gram_preservation",
        "composition_unitarity",
        "per_piece_action",
    ]
    .iter()
    .map(|&name| (name, 0.0))
    .collect();

    let mut record = |name: &str, value: f64| {
        let row = rows.iter_mut().find(|(n, _)| *n == name).expect("known relation");
        row.1 = row.1.max(value);
    };

    for _ in 0..trials {
        let horizon = rng.random_range(0.25..=2.0);
        let v = random_span(&mut rng, 8, horizon);
        let w = random_span(&mut rng, 8, horizon);
        let u1 = random_unimodular(&mut rng);
        let u2 = random_unimodular(&mut rng);
        let xi = random_complex(&mut rng, 1.5);
        let lam = rng.random_range(-3.0..=3.0);
        let mu = rng.random_range(-3.0..=3.0);

        // θ^rotat(U) θ^rotat(V) = θ^rotat(UV)
        let rot = |u| AutomorphismParams::rotation(u).expect("unimodular");
        let lhs = apply_automorphism(&rot(u1), &apply_automorphism(&rot(u2), &v)?)?;
        let rhs = apply_automorphism(&rot(u1 * u2), &v)?;
        record("rotation_composition", relative_residual(&lhs, &rhs, &v)?);

        // θ^rotat(U) u^(ζ) = u^(Uζ)
        let zeta = random_complex(&mut rng, 1.2);
        let u = unit(ZERO, zeta, horizon)?;
        let lhs = apply_automorphism(&rot(u1), &u)?;
        let rhs = unit(ZERO, u1 * zeta, horizon)?;
        record("rotation_on_units", relative_residual(&lhs, &rhs, &u)?);

        // θ^rotat(U) θ^shift(ξ) θ^rotat(U)^{-1} = θ^shift(Uξ)
        let lhs = apply_automorphism(
            &rot(u1),
            &apply_automorphism(&shift(xi), &apply_automorphism(&rot(u1.conj()), &v)?)?,
        )?;
        let rhs = apply_automorphism(&shift(u1 * xi), &v)?;
        record("rotation_conjugates_shift", relative_residual(&lhs, &rhs, &v)?);

        // θ^shift(iλ) θ^shift(iμ) = θ^shift(i(λ+μ)), and the real analogue
        let i = Complex64::new(0.0, 1.0);
        let lhs = apply_automorphism(&shift(i * lam), &apply_automorphism(&shift(i * mu), &v)?)?;
        let rhs = apply_automorphism(&shift(i * (lam + mu)), &v)?;
        record("imaginary_shift_composition", relative_residual(&lhs, &rhs, &v)?);
        let lhs = apply_automorphism(&shift(lam.into()), &apply_automorphism(&shift(mu.into()), &v)?)?;
        let rhs = apply_automorphism(&shift((lam + mu).into()), &v)?;
        record("real_shift_composition", relative_residual(&lhs, &rhs, &v)?);

        // θ^shift(iλ)_t u^(ζ)(t) = exp(−½λ²t + iλζt) u^(ζ+iλ)(t)
        let lhs = apply_automorphism(&shift(i * lam), &u)?;
        let factor = (Complex64::new(-0.5 * lam * lam * horizon, 0.0) + i * lam * zeta * horizon).exp();
        let rhs = unit(ZERO, zeta + i * lam, horizon)?.scaled(factor);
        record("imaginary_shift_on_units", relative_residual(&lhs, &rhs, &u)?);

        // multiplication by exp(iλB_T): term data, not just inner products
        let mapped = apply_automorphism(&shift(i * lam), &v)?;
        let mut defect: f64 = 0.0;
        for (before, after) in v.terms().iter().zip(mapped.terms()) {
            let expected = before.coeff
                * (Complex64::new(-0.5 * lam * lam * horizon, 0.0) + i * lam * before.f.integral()).exp();
            defect = defect.max((after.coeff - expected).norm() / expected.norm().max(f64::MIN_POSITIVE));
            let shifted = before.f.map_values(|z| z + i * lam);
            if !after.f.approx_eq(&shifted, 1e-15) {
                defect = f64::INFINITY;
            }
        }
        if mapped.len() != v.len() {
            defect = f64::INFINITY;
        }
        record("multiplication_identity", defect);

        record("ccr_phase", ccr_phase_residual(lam, mu, &v)?);

        let p = random_params(&mut rng);
        let q = random_params(&mut rng);
        let scale = v.norm() * w.norm();
        let before = span_inner(&v, &w)?;
        let after = span_inner(&apply_automorphism(&p, &v)?, &apply_automorphism(&p, &w)?)?;
        record("gram_preservation", (after - before).norm() / scale);

        let pv = apply_automorphism(&q, &apply_automorphism(&p, &v)?)?;
        let pw = apply_automorphism(&q, &apply_automorphism(&p, &w)?)?;
        record("composition_unitarity", (span_inner(&pv, &pw)? - before).norm() / scale);

        let a = apply_automorphism(&p, &v)?;
        let b = apply_automorphism_per_piece(&p, &v)?;
        record("per_piece_action", relative_residual(&a, &b, &v)?);
    }

    Ok(RelationReport {
        seed,
        rows: rows
            .into_iter()
            .map(|(relation, max_residual)| RelationResidual { relation, trials, max_residual })
            .collect(),
    })
}
