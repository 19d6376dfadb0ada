use faer::c64;

use super::hermitian::{sgn_op, HermitianMatrix};
use crate::error::{Error, Result};

/// Largest admissible Poisson tail `e^{−|β|²} Σ_{n≥N} |β|^{2n}/n!`.
pub const COHERENT_TAIL_LIMIT: f64 = 1e-10;

/// Poisson(|β|²) mass beyond the first `n` Fock states.
pub fn coherent_tail_mass(beta_sqr: f64, n: usize) -> f64 {
    if beta_sqr == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let ln_b = beta_sqr.ln();
    let mut log_term = -beta_sqr;
    for k in 0..n {
        log_term += ln_b - ((k + 1) as f64).ln();
    }
    // log_term is now the log of the k = n term
    let mut tail = 0.0;
    let mut k = n;
    loop {
        let term = log_term.exp();
        tail += term;
        if (k as f64) > beta_sqr && term <= 1e-18 * tail.max(f64::MIN_POSITIVE) {
            break;
        }
        if term == 0.0 && (k as f64) > beta_sqr {
            break;
        }
        k += 1;
        log_term += ln_b - (k as f64).ln();
    }
    tail
}

/// Fock coefficients `βⁿ/√(n!)`, `β = ζ√t`, of `Exp(ζ·χ_(0,t))`.
///
/// Unnormalized: the squared norm is `e^{|ζ|²t}` up to the truncated tail.
pub fn coherent_vector(zeta: c64, t: f64, n: usize) -> Result<Vec<c64>> {
    if !(t > 0.0) {
        return Err(crate::error::invalid("t", format!("{t} is not > 0")));
    }
    if n == 0 {
        return Err(crate::error::invalid("N", "0"));
    }
    let beta = zeta * t.sqrt();
    let tail = coherent_tail_mass(beta.norm_sqr(), n);
    if tail > COHERENT_TAIL_LIMIT {
        return Err(Error::TailMass {
            tail,
            limit: COHERENT_TAIL_LIMIT,
            dim: n,
        });
    }
    let mut out = Vec::with_capacity(n);
    let mut c = c64::new(1.0, 0.0);
    for k in 0..n {
        out.push(c);
        c = c * beta / ((k + 1) as f64).sqrt();
    }
    Ok(out)
}

/// `v / ‖v‖`.
pub fn normalized(v: &[c64]) -> Result<Vec<c64>> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|z| z / norm).collect())
}

/// `⟨sgn(A) v, v⟩`, not normalized by `‖v‖²`.
pub fn sgn_expectation(a: &HermitianMatrix, v: &[c64]) -> Result<f64> {
    sign_expectation(&sgn_op(a)?, v)
}

/// `⟨S v, v⟩` for a precomputed sign matrix `S`.
pub fn sign_expectation(sign: &HermitianMatrix, v: &[c64]) -> Result<f64> {
    if v.len() != sign.dim() {
        return Err(Error::DimensionMismatch {
            expected: sign.dim(),
            actual: v.len(),
        });
    }
    if v.iter().all(|z| *z == c64::new(0.0, 0.0)) {
        return Err(Error::ZeroVector);
    }
    sign.expectation(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_zeta_is_vacuum() {
        let v = coherent_vector(c64::new(0.0, 0.0), 0.5, 6).unwrap();
        assert_eq!(v[0], c64::new(1.0, 0.0));
        assert!(v[1..].iter().all(|z| *z == c64::new(0.0, 0.0)));
    }

    #[test]
    fn tail_precondition() {
        assert!(matches!(
            coherent_vector(c64::new(3.0, 0.0), 1.0, 8),
            Err(Error::TailMass { .. })
        ));
        assert!(coherent_vector(c64::new(3.0, 0.0), 1.0, 64).is_ok());
    }

    #[test]
    fn tail_mass_matches_direct_sum() {
        let b2: f64 = 2.5;
        let direct: f64 = (0..10)
            .map(|k| (-b2).exp() * b2.powi(k) / (1..=k).map(|j| j as f64).product::<f64>())
            .sum();
        assert!((coherent_tail_mass(b2, 10) - (1.0 - direct)).abs() < 1e-14);
    }

    #[test]
    fn dimension_and_zero_checks() {
        let s = HermitianMatrix::from_real_diagonal(&[1.0, -1.0]);
        assert!(matches!(
            sign_expectation(&s, &[c64::new(1.0, 0.0)]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            sign_expectation(&s, &[c64::new(0.0, 0.0); 2]),
            Err(Error::ZeroVector)
        ));
    }
}
