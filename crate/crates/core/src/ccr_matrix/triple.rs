use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use faer::{c64, Mat};
use serde::{Deserialize, Serialize};

use super::hermitian::HermitianMatrix;
use crate::error::{invalid, Error, Result};

/// Relative tolerance of the grid vacuum-moment (tail aliasing) check.
pub const GRID_VACUUM_RTOL: f64 = 1e-6;

/// Discretization of the CCR pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Fock-basis truncation: `q = (a + a†)/√2`, `p = i(a† − a)/√2`.
    Oscillator,
    /// Uniform position grid with Fourier differentiation for `p`.
    Grid,
}

impl Scheme {
    pub const ALL: [Scheme; 2] = [Scheme::Oscillator, Scheme::Grid];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Oscillator => "oscillator",
            Scheme::Grid => "grid",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "oscillator" | "osc" => Ok(Scheme::Oscillator),
            "grid" => Ok(Scheme::Grid),
            other => Err(invalid("scheme", format!("unknown scheme `{other}`"))),
        }
    }
}

/// A CCR pair `Q, P` at time scale `t` together with `R = −(P + Q)`.
///
/// `[P, Q] = −2ti` holds away from the truncation boundary.
#[derive(Debug, Clone)]
pub struct CcrTriple {
    pub scheme: Scheme,
    pub n: usize,
    pub t: f64,
    /// Grid half-width in natural units; `None` for the oscillator scheme.
    pub half_width: Option<f64>,
    pub q: HermitianMatrix,
    pub p: HermitianMatrix,
    pub r: HermitianMatrix,
}

/// Position matrix `q = (a + a†)/√2` in the first `n` Fock states.
pub fn ladder_position(n: usize) -> HermitianMatrix {
    let m = Mat::from_fn(n, n, |i, j| {
        if j == i + 1 {
            c64::new((j as f64 / 2.0).sqrt(), 0.0)
        } else if i == j + 1 {
            c64::new((i as f64 / 2.0).sqrt(), 0.0)
        } else {
            c64::new(0.0, 0.0)
        }
    });
    HermitianMatrix::new(m).expect("symmetric by construction")
}

/// Momentum matrix `p = i(a† − a)/√2` in the first `n` Fock states.
pub fn ladder_momentum(n: usize) -> HermitianMatrix {
    let m = Mat::from_fn(n, n, |i, j| {
        if j == i + 1 {
            c64::new(0.0, -(j as f64 / 2.0).sqrt())
        } else if i == j + 1 {
            c64::new(0.0, (i as f64 / 2.0).sqrt())
        } else {
            c64::new(0.0, 0.0)
        }
    });
    HermitianMatrix::new(m).expect("Hermitian by construction")
}

/// Half-width `√(πN/2)` that gives equal position and momentum ranges.
pub fn default_half_width(n: usize) -> f64 {
    (PI * n as f64 / 2.0).sqrt()
}

/// Cell-centred grid points `x_j = (j − (N−1)/2)·h` with `h = 2L/N`.
pub fn grid_points(n: usize, half_width: f64) -> Vec<f64> {
    let h = 2.0 * half_width / n as f64;
    (0..n).map(|j| (j as f64 - (n as f64 - 1.0) / 2.0) * h).collect()
}

/// Wavenumbers `k_m = (m − (N−1)/2)·Δk`, `Δk = 2π/(N h)`, dual to [`grid_points`].
pub fn grid_wavenumbers(n: usize, half_width: f64) -> Vec<f64> {
    let h = 2.0 * half_width / n as f64;
    let dk = 2.0 * PI / (n as f64 * h);
    (0..n).map(|m| (m as f64 - (n as f64 - 1.0) / 2.0) * dk).collect()
}

/// `p = −i d/dx` on the grid: `F† diag(k) F` with `F_{mj} = e^{−i k_m x_j}/√N`.
///
/// The half-integer wavenumber lattice is symmetric about zero, so `p` is
/// purely imaginary and has no zero eigenvalue.
pub fn grid_momentum(n: usize, half_width: f64) -> HermitianMatrix {
    let h = 2.0 * half_width / n as f64;
    let ks = grid_wavenumbers(n, half_width);
    let positive: Vec<f64> = ks.into_iter().filter(|&k| k > 0.0).collect();
    // entry depends on j − l only: p_{jl} = (2i/N) Σ_{k>0} k sin(k (j−l) h)
    let toeplitz: Vec<f64> = (0..n)
        .map(|d| {
            let dist = d as f64 * h;
            2.0 / n as f64 * positive.iter().map(|&k| k * (k * dist).sin()).sum::<f64>()
        })
        .collect();
    let m = Mat::from_fn(n, n, |j, l| {
        if j >= l {
            c64::new(0.0, toeplitz[j - l])
        } else {
            c64::new(0.0, -toeplitz[l - j])
        }
    });
    HermitianMatrix::new(m).expect("Hermitian by construction")
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(invalid("N", format!("{n} < 2")));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(invalid("t", format!("{t} is not > 0")));
    }
    Ok(())
}

/// `(Q_t, P_t)` with `[P_t, Q_t] = −2ti`, plus `R_t = −(P_t + Q_t)`.
///
/// Oscillator: `Q_t = √(2t)·q`, `P_t = √(2t)·p` in the Fock basis.
/// Grid: `Q_t = √(2t)·diag(x)` on `N` points of `[−L, L]` (natural units),
/// `P_t = √(2t)·(−i d/dx)` by exact Fourier differentiation. `L` defaults to
/// [`default_half_width`]; the grid is rejected when it cannot resolve the
/// vacuum second moments to [`GRID_VACUUM_RTOL`].
pub fn build_pair(scheme: Scheme, n: usize, t: f64, half_width: Option<f64>) -> Result<CcrTriple> {
    check_dim(n)?;
    check_t(t)?;
    let scale = (2.0 * t).sqrt();
    let (q, p, half_width) = match scheme {
        Scheme::Oscillator => (ladder_position(n), ladder_momentum(n), None),
        Scheme::Grid => {
            let l = half_width.unwrap_or_else(|| default_half_width(n));
            if !(l > 0.0) || !l.is_finite() {
                return Err(invalid("L", format!("{l} is not > 0")));
            }
            (
                HermitianMatrix::from_real_diagonal(&grid_points(n, l)),
                grid_momentum(n, l),
                Some(l),
            )
        }
    };
    let q = q.scaled(scale);
    let p = p.scaled(scale);
    let r = q.combine(-1.0, &p, -1.0)?;
    let triple = CcrTriple { scheme, n, t, half_width, q, p, r };
    if scheme == Scheme::Grid {
        let (q2, p2) = triple.vacuum_moments()?;
        let err = ((q2 - t).abs()).max((p2 - t).abs()) / t;
        if err > GRID_VACUUM_RTOL {
            return Err(invalid(
                "L",
                format!("grid N = {n}, L = {:?} aliases the vacuum (moment error {err:.2e})", triple.half_width),
            ));
        }
    }
    Ok(triple)
}

/// The 2π/3-symmetric normalized triple in the oscillator scheme.
pub fn symmetric_triple(n: usize) -> Result<CcrTriple> {
    symmetric_triple_in(Scheme::Oscillator, n)
}

/// `Q = αq`, `P = α(q cos 2π/3 + p sin 2π/3)`, `R = −(P + Q)` with `α² = 2/√3`,
/// so that `[P,Q] = [Q,R] = [R,P] = −i` up to truncation.
pub fn symmetric_triple_in(scheme: Scheme, n: usize) -> Result<CcrTriple> {
    // t = 1/2 gives the natural-unit pair (√(2t) = 1)
    let base = build_pair(scheme, n, 0.5, None)?;
    let alpha = (2.0 / 3f64.sqrt()).sqrt();
    let (c, s) = ((2.0 * PI / 3.0).cos(), (2.0 * PI / 3.0).sin());
    let q = base.q.scaled(alpha);
    let p = base.q.combine(alpha * c, &base.p, alpha * s)?;
    let r = q.combine(-1.0, &p, -1.0)?;
    Ok(CcrTriple { q, p, r, ..base })
}

impl CcrTriple {
    /// `D = [P, Q] + 2ti·I`.
    pub fn commutator_defect(&self) -> Result<Mat<c64>> {
        let mut d = super::hermitian::commutator(&self.p, &self.q)?;
        for i in 0..self.n {
            d[(i, i)] += c64::new(0.0, 2.0 * self.t);
        }
        Ok(d)
    }

    /// Ground state of the discretized oscillator: `e₀` in the Fock basis,
    /// the sampled normalized Gaussian `e^{−x²/2}` on the grid.
    pub fn vacuum(&self) -> Vec<c64> {
        match self.scheme {
            Scheme::Oscillator => {
                let mut v = vec![c64::new(0.0, 0.0); self.n];
                v[0] = c64::new(1.0, 0.0);
                v
            }
            Scheme::Grid => {
                let xs = grid_points(self.n, self.half_width.expect("grid has a width"));
                let raw: Vec<f64> = xs.iter().map(|x| (-0.5 * x * x).exp()).collect();
                let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
                raw.iter().map(|v| c64::new(v / norm, 0.0)).collect()
            }
        }
    }

    /// `(⟨Q²⟩, ⟨P²⟩)` in [`Self::vacuum`]; both equal `t` in the continuum.
    pub fn vacuum_moments(&self) -> Result<(f64, f64)> {
        let v = self.vacuum();
        let qv = apply(&self.q, &v);
        let pv = apply(&self.p, &v);
        Ok((norm_sqr(&qv), norm_sqr(&pv)))
    }
}

pub(crate) fn apply(a: &HermitianMatrix, v: &[c64]) -> Vec<c64> {
    let m = a.as_mat();
    let n = a.dim();
    let mut out = vec![c64::new(0.0, 0.0); n];
    for j in 0..n {
        let vj = v[j];
        if vj == c64::new(0.0, 0.0) {
            continue;
        }
        for i in 0..n {
            out[i] += m[(i, j)] * vj;
        }
    }
    out
}

pub(crate) fn norm_sqr(v: &[c64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::super::hermitian::max_abs;
    use super::*;

    #[test]
    fn two_level_pair_by_hand() {
        let t = 0.8;
        let pair = build_pair(Scheme::Oscillator, 2, t, None).unwrap();
        let q = pair.q.as_mat();
        assert!((q[(0, 1)].re - t.sqrt()).abs() < 1e-15);
        assert!((q[(1, 0)].re - t.sqrt()).abs() < 1e-15);
        assert_eq!(q[(0, 0)], c64::new(0.0, 0.0));
    }

    #[test]
    fn oscillator_vacuum_moment_is_t() {
        for &t in &[0.25, 0.5, 3.0] {
            let pair = build_pair(Scheme::Oscillator, 16, t, None).unwrap();
            let (q2, p2) = pair.vacuum_moments().unwrap();
            assert!((q2 - t).abs() < 1e-12);
            assert!((p2 - t).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_vacuum_moment_is_t() {
        let pair = build_pair(Scheme::Grid, 128, 0.7, None).unwrap();
        let (q2, p2) = pair.vacuum_moments().unwrap();
        assert!((q2 - 0.7).abs() < 1e-6 * 0.7);
        assert!((p2 - 0.7).abs() < 1e-6 * 0.7);
    }

    #[test]
    fn aliasing_grid_is_rejected() {
        assert!(build_pair(Scheme::Grid, 64, 0.5, Some(2.0)).is_err());
        assert!(build_pair(Scheme::Grid, 64, 0.5, Some(-1.0)).is_err());
    }

    #[test]
    fn invalid_inputs() {
        assert!(build_pair(Scheme::Oscillator, 1, 0.5, None).is_err());
        assert!(build_pair(Scheme::Oscillator, 8, 0.0, None).is_err());
        assert!(symmetric_triple(1).is_err());
        assert!("fock".parse::<Scheme>().is_err());
        assert_eq!("Grid".parse::<Scheme>().unwrap(), Scheme::Grid);
    }

    #[test]
    fn oscillator_defect_is_rank_one_at_the_top() {
        let n = 12;
        let t = 0.6;
        let pair = build_pair(Scheme::Oscillator, n, t, None).unwrap();
        let d = pair.commutator_defect().unwrap();
        for j in 0..n - 1 {
            for i in 0..n {
                assert!(d[(i, j)].norm() <= 1e-10);
            }
        }
        assert!(d[(n - 1, n - 1)].norm() > 1.0);
    }

    #[test]
    fn symmetric_triple_sums_to_zero() {
        for scheme in Scheme::ALL {
            let tr = symmetric_triple_in(scheme, 32).unwrap();
            let sum = tr.p.add(&tr.q).unwrap().add(&tr.r).unwrap();
            assert_eq!(max_abs(sum.as_mat()), 0.0);
        }
    }

    #[test]
    fn grid_momentum_is_purely_imaginary_and_zero_free() {
        let p = grid_momentum(16, default_half_width(16));
        let m = p.as_mat();
        for i in 0..16 {
            for j in 0..16 {
                assert_eq!(m[(i, j)].re, 0.0);
            }
        }
        let eig = p.eigenvalues().unwrap();
        assert!(eig.iter().all(|v| v.abs() > 0.1));
    }
}
