use serde::Serialize;

use super::forms::{estimate, ratio_estimate, simulate, McConfig};
use super::path::WarrenPath;
use super::profile::SuperchaosVector;
use super::psi::{AlignedPsi, PathFunctional, PsiSpec};
use crate::error::{invalid, Result};

/// Monte Carlo diagnostics that the CSV artifact does not carry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma43Diagnostics {
    /// `⟨𝒞_ψ⟩_f / ‖f‖²` on common paths.
    pub ratio: f64,
    pub ratio_stderr: f64,
    /// `μ_f(U_δ)` with `U_δ = {(t, ω) : B_{t+δ} > B_t}`.
    pub u_delta_mass: f64,
    pub u_delta_stderr: f64,
    /// `μ_f(U_δ) − μ_f(∁U_δ)`.
    pub u_delta_bound: f64,
    pub u_delta_bound_stderr: f64,
}

/// One `(n, δ)` cell of the `ψ_{n,δ}` study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma43Row {
    pub n: usize,
    pub delta: f64,
    pub m: usize,
    pub samples: usize,
    pub estimate: f64,
    pub stderr: f64,
    pub mass: f64,
    pub mass_stderr: f64,
    pub seed: u64,
    pub diagnostics: Option<Lemma43Diagnostics>,
}

impl Lemma43Row {
    /// `estimate / mass`.
    pub fn normalized(&self) -> f64 {
        self.diagnostics
            .map(|d| d.ratio)
            .unwrap_or(self.estimate / self.mass)
    }
}

/// Validates the profile and every `(n, δ)` against `m`, before any sampling.
pub fn validate_lemma43(f: &SuperchaosVector, n_list: &[usize], delta_list: &[f64], m: usize) -> Result<Vec<AlignedPsi>> {
    if n_list.is_empty() || delta_list.is_empty() {
        return Err(invalid("lists", "n and delta lists must be nonempty"));
    }
    if !f.weight.vanishes_on(0.5, 1.0) {
        return Err(invalid("f", "profile weight must vanish on [0.5, 1]"));
    }
    f.check_alignment(m)?;
    let mut cells = Vec::new();
    for &n in n_list {
        for &delta in delta_list {
            cells.push(PsiSpec::new(n, delta)?.aligned(m)?);
        }
    }
    Ok(cells)
}

/// `ψ_{n,δ}` forms for every `n` in `n_list` and `δ` in `delta_list`.
///
/// All cells share the same replicas, and the mass column is the same
/// estimate in every row. Rows come out with `n` varying slowest.
pub fn lemma43_table(f: &SuperchaosVector, n_list: &[usize], delta_list: &[f64], cfg: &McConfig) -> Result<Vec<Lemma43Row>> {
    let cells = validate_lemma43(f, n_list, delta_list, cfg.m)?;
    let per_path = simulate(cfg, |p| cell_values(f, &cells, p))?;
    let mass: Vec<f64> = per_path.iter().map(|v| v.0).collect();
    let mass_est = estimate(&mass, cfg.seed);
    let mut rows = Vec::with_capacity(cells.len());
    for (c, cell) in cells.iter().enumerate() {
        let x: Vec<f64> = per_path.iter().map(|v| v.1[c].0).collect();
        let u: Vec<f64> = per_path.iter().map(|v| v.1[c].1).collect();
        let bound: Vec<f64> = u.iter().zip(&mass).map(|(u, y)| 2.0 * u - y).collect();
        let pair = ratio_estimate(&x, &mass, cfg.seed)?;
        let u_est = estimate(&u, cfg.seed);
        let b_est = estimate(&bound, cfg.seed);
        rows.push(Lemma43Row {
            n: cell.spec.n,
            delta: cell.spec.delta,
            m: cfg.m,
            samples: cfg.samples,
            estimate: pair.form.mean,
            stderr: pair.form.stderr,
            mass: mass_est.mean,
            mass_stderr: mass_est.stderr,
            seed: cfg.seed,
            diagnostics: Some(Lemma43Diagnostics {
                ratio: pair.ratio,
                ratio_stderr: pair.ratio_stderr,
                u_delta_mass: u_est.mean,
                u_delta_stderr: u_est.stderr,
                u_delta_bound: b_est.mean,
                u_delta_bound_stderr: b_est.stderr,
            }),
        });
    }
    Ok(rows)
}

/// Per path: the mass, and per cell the form and the `U_δ` mass.
fn cell_values(f: &SuperchaosVector, cells: &[AlignedPsi], path: &WarrenPath) -> (f64, Vec<(f64, f64)>) {
    let factor = f.factor.eval(path);
    let f2 = factor * factor;
    let weights: Vec<(usize, f64)> = path
        .minima()
        .iter()
        .map(|&j| {
            let w = f.weight.eval(path.time(j));
            (j, w * w * f2)
        })
        .filter(|&(_, g2)| g2 != 0.0)
        .collect();
    let mass = weights.iter().map(|&(_, g2)| g2).sum();
    let per_cell = cells
        .iter()
        .map(|cell| {
            let mut form = 0.0;
            let mut u = 0.0;
            for &(j, g2) in &weights {
                form += g2 * cell.eval(j, path);
                let end = (j + cell.offset).min(path.m());
                if path.at(end) > path.at(j) {
                    u += g2;
                }
            }
            (form, u)
        })
        .collect();
    (mass, per_cell)
}
