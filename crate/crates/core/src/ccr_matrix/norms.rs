use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use faer::c64;
use serde::Serialize;

use super::hermitian::{sgn_op, HermitianMatrix};
use super::triple::{build_pair, symmetric_triple_in, Scheme};
use crate::error::{invalid, Result};

/// `sgn P + sgn Q + sgn R`, each sign by its own eigendecomposition.
pub fn sign_sum(scheme: Scheme, n: usize) -> Result<HermitianMatrix> {
    let triple = symmetric_triple_in(scheme, n)?;
    let sp = sgn_op(&triple.p)?;
    let sq = sgn_op(&triple.q)?;
    let sr = sgn_op(&triple.r)?;
    sp.add(&sq)?.add(&sr)
}

/// `‖sgn P + sgn Q + sgn R‖` for the symmetric triple at truncation `n`.
pub fn sign_sum_norm(scheme: Scheme, n: usize) -> Result<f64> {
    sign_sum(scheme, n)?.spectral_norm()
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > FRAC_PI_2 && alpha <= PI) {
        return Err(invalid("alpha", format!("{alpha} outside (π/2, π]")));
    }
    Ok(())
}

/// `diag(e^{i k θ})`: conjugation by it rotates the Fock-basis pair,
/// `D q D† = q cos θ + p sin θ`, exactly even after truncation.
pub fn fock_rotation_phases(n: usize, theta: f64) -> Vec<c64> {
    (0..n).map(|k| c64::from_polar(1.0, k as f64 * theta)).collect()
}

/// `sgn Q_t + sgn(Q_t cos α + P_t sin α) + sgn(Q_t cos α − P_t sin α)`.
///
/// In both schemes `Q_t` is real and `P_t` purely imaginary, so the third
/// sign is the complex conjugate of the second. The oscillator scheme also
/// obtains the second sign from `sgn Q_t` by the Fock-space rotation
/// [`fock_rotation_phases`]; the grid scheme diagonalizes the rotated matrix.
pub fn lemma23_operator(alpha: f64, t: f64, n: usize, scheme: Scheme) -> Result<HermitianMatrix> {
    check_alpha(alpha)?;
    let pair = build_pair(scheme, n, t, None)?;
    let sq = sgn_op(&pair.q)?;
    let rotated = match scheme {
        Scheme::Oscillator => sq.conjugate_by_phases(&fock_rotation_phases(n, alpha))?,
        Scheme::Grid => sgn_op(&pair.q.combine(alpha.cos(), &pair.p, alpha.sin())?)?,
    };
    sq.add(&rotated)?.add(&rotated.conj())
}

/// Operator norm of [`lemma23_operator`].
pub fn lemma23_value(alpha: f64, t: f64, n: usize, scheme: Scheme) -> Result<f64> {
    lemma23_operator(alpha, t, n, scheme)?.spectral_norm()
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub scheme: Scheme,
    pub n: usize,
    pub alpha: f64,
    pub t: f64,
    pub value: f64,
    pub seconds: f64,
    /// `value` minus the value at the previous `N` (same scheme and α).
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

/// Largest allowed gap between the two schemes at the top dimension.
pub const CROSS_SCHEME_TOL: f64 = 0.02;

impl ConvergenceTable {
    /// `|value_osc − value_grid|` at the largest `N` computed for both schemes.
    pub fn cross_scheme_gap(&self, alpha: f64) -> Option<f64> {
        let top = |s: Scheme| {
            self.rows
                .iter()
                .filter(|r| r.scheme == s && r.alpha == alpha)
                .max_by_key(|r| r.n)
        };
        let (a, b) = (top(Scheme::Oscillator)?, top(Scheme::Grid)?);
        (a.n == b.n).then(|| (a.value - b.value).abs())
    }

    /// Successive `|Δvalue|` for one scheme and α, in increasing `N`.
    pub fn successive_differences(&self, scheme: Scheme, alpha: f64) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.scheme == scheme && r.alpha == alpha)
            .filter_map(|r| r.delta.map(f64::abs))
            .collect()
    }

    pub fn max_value(&self) -> f64 {
        self.rows.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Evaluates [`lemma23_value`] on every `(scheme, N, α)` cell, in input order.
pub fn convergence_study(schemes: &[Scheme], dims: &[usize], alphas: &[f64], t: f64) -> Result<ConvergenceTable> {
    if dims.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("dims", "must be strictly ascending"));
    }
    let mut rows = Vec::new();
    for &scheme in schemes {
        for &alpha in alphas {
            let mut previous: Option<f64> = None;
            for &n in dims {
                let start = Instant::now();
                let value = lemma23_value(alpha, t, n, scheme)?;
                let seconds = start.elapsed().as_secs_f64();
                rows.push(ConvergenceRow {
                    scheme,
                    n,
                    alpha,
                    t,
                    value,
                    seconds,
                    delta: previous.map(|p| value - p),
                });
                previous = Some(value);
            }
        }
    }
    Ok(ConvergenceTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_range_is_enforced() {
        assert!(lemma23_value(FRAC_PI_2, 0.5, 8, Scheme::Oscillator).is_err());
        assert!(lemma23_value(3.2, 0.5, 8, Scheme::Oscillator).is_err());
        assert!(lemma23_value(PI, 0.5, 8, Scheme::Oscillator).is_ok());
    }

    #[test]
    fn fock_rotation_reproduces_rotated_pair() {
        let n = 10;
        let pair = build_pair(Scheme::Oscillator, n, 0.5, None).unwrap();
        let theta = 2.0;
        let rotated = pair.q.conjugate_by_phases(&fock_rotation_phases(n, theta)).unwrap();
        let direct = pair.q.combine(theta.cos(), &pair.p, theta.sin()).unwrap();
        for i in 0..n {
            for j in 0..n {
                assert!((rotated.as_mat()[(i, j)] - direct.as_mat()[(i, j)]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn shortcut_signs_match_direct_diagonalization() {
        let (n, t, alpha) = (24, 0.7, 2.4_f64);
        for scheme in Scheme::ALL {
            let n = if scheme == Scheme::Grid { 64 } else { n };
            let pair = build_pair(scheme, n, t, None).unwrap();
            let direct = sgn_op(&pair.q).unwrap()
                .add(&sgn_op(&pair.q.combine(alpha.cos(), &pair.p, alpha.sin()).unwrap()).unwrap()).unwrap()
                .add(&sgn_op(&pair.q.combine(alpha.cos(), &pair.p, -alpha.sin()).unwrap()).unwrap()).unwrap();
            let fast = lemma23_operator(alpha, t, n, scheme).unwrap();
            let diff = fast.combine(1.0, &direct, -1.0).unwrap();
            assert!(super::super::hermitian::max_abs(diff.as_mat()) < 1e-9, "{scheme}");
        }
    }

    #[test]
    fn dims_must_ascend() {
        assert!(convergence_study(&[Scheme::Oscillator], &[16, 8], &[2.0], 0.5).is_err());
    }
}
