use faer::{Mat, Side};
use num_complex::Complex64;

use super::step::{check_horizons, step_inner, StepFunction};
use crate::error::{Error, Result};

/// Two step functions closer than this (relative) are treated as the same exponential.
pub const DEDUP_TOL: f64 = 1e-14;

/// Gram matrices above this condition number trigger a warning.
pub const GRAM_CONDITION_WARN: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct ExpTerm {
    pub coeff: Complex64,
    pub f: StepFunction,
}

/// Finite linear combination `Σ cᵢ Exp(fᵢ)` of exponential vectors in `L₂(Ω_T)`.
///
/// Terms whose step functions agree (up to [`DEDUP_TOL`]) are merged on
/// construction, so a difference of two spans that agree term-by-term has
/// coefficients near zero instead of large cancelling Gram entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpSpan {
    horizon: f64,
    terms: Vec<ExpTerm>,
}

impl ExpSpan {
    pub fn new(horizon: f64, terms: impl IntoIterator<Item = ExpTerm>) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(crate::error::invalid("horizon", format!("{horizon} is not > 0")));
        }
        let mut span = Self {
            horizon,
            terms: Vec::new(),
        };
        for term in terms {
            span.push(term)?;
        }
        Ok(span)
    }

    /// `Exp(f)` with unit coefficient.
    pub fn exp(f: StepFunction) -> Self {
        Self {
            horizon: f.horizon(),
            terms: vec![ExpTerm {
                coeff: Complex64::new(1.0, 0.0),
                f,
            }],
        }
    }

    /// `Exp(0)`, the constant function 1 on `Ω_T`.
    pub fn vacuum(horizon: f64) -> Result<Self> {
        Ok(Self::exp(StepFunction::constant(horizon, Complex64::new(0.0, 0.0))?))
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn push(&mut self, term: ExpTerm) -> Result<()> {
        check_horizons(self.horizon, term.f.horizon())?;
        match self
            .terms
            .iter_mut()
            .find(|t| t.f.approx_eq(&term.f, DEDUP_TOL))
        {
            Some(existing) => existing.coeff += term.coeff,
            None => self.terms.push(term),
        }
        Ok(())
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            horizon: self.horizon,
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm {
                    coeff: t.coeff * factor,
                    f: t.f.clone(),
                })
                .collect(),
        }
    }

    /// `self + factor · other`, merging identical exponentials.
    pub fn add_scaled(&self, other: &Self, factor: Complex64) -> Result<Self> {
        check_horizons(self.horizon, other.horizon)?;
        let mut out = self.clone();
        for t in &other.terms {
            out.push(ExpTerm {
                coeff: t.coeff * factor,
                f: t.f.clone(),
            })?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, Complex64::new(-1.0, 0.0))
    }

    /// `[exp⟨fᵢ, fⱼ⟩]`, the Gram matrix of the exponentials (coefficients excluded).
    pub fn gram_matrix(&self) -> Mat<Complex64> {
        let k = self.terms.len();
        let mut g = Mat::<Complex64>::zeros(k, k);
        for i in 0..k {
            for j in 0..=i {
                let v = step_inner(&self.terms[i].f, &self.terms[j].f)
                    .expect("horizons checked on construction")
                    .exp();
                g[(i, j)] = v;
                g[(j, i)] = v.conj();
            }
        }
        g
    }

    /// Ratio of extreme eigenvalues of the Gram matrix.
    pub fn gram_condition(&self) -> Result<f64> {
        if self.terms.len() < 2 {
            return Ok(1.0);
        }
        let eig = self
            .gram_matrix()
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|_| Error::Eigen)?;
        let lo = eig.first().copied().unwrap_or(0.0);
        let hi = eig.last().copied().unwrap_or(0.0);
        Ok(if lo <= 0.0 { f64::INFINITY } else { hi / lo })
    }

    /// `‖v‖²` from the Gram matrix, clamped at zero against rounding.
    pub fn norm_sqr(&self) -> f64 {
        if self.terms.len() > 1 {
            if let Ok(cond) = self.gram_condition() {
                if cond > GRAM_CONDITION_WARN {
                    log::debug!(
                        "Gram matrix of {} exponentials is ill-conditioned ({cond:.3e})",
                        self.terms.len()
                    );
                }
            }
        }
        span_inner(self, self)
            .expect("same horizon")
            .re
            .max(0.0)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }
}

/// `⟨v, w⟩ = Σᵢⱼ cᵢ conj(dⱼ) exp⟨fᵢ, gⱼ⟩`.
pub fn span_inner(v: &ExpSpan, w: &ExpSpan) -> Result<Complex64> {
    check_horizons(v.horizon, w.horizon)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for a in &v.terms {
        for b in &w.terms {
            acc += a.coeff * b.coeff.conj() * step_inner(&a.f, &b.f)?.exp();
        }
    }
    Ok(acc)
}

/// The unit `u^(a,ζ)(t) = e^{at} Exp(ζ·χ_(0,t))` as a vector of `L₂(Ω_t)`.
pub fn unit(a: Complex64, zeta: Complex64, t: f64) -> Result<ExpSpan> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(crate::error::invalid("t", format!("{t} is not > 0")));
    }
    Ok(ExpSpan {
        horizon: t,
        terms: vec![ExpTerm {
            coeff: (a * t).exp(),
            f: StepFunction::constant(t, zeta)?,
        }],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vacuum_has_unit_norm() {
        let v = ExpSpan::vacuum(1.3).unwrap();
        assert_eq!(span_inner(&v, &v).unwrap(), c(1.0, 0.0));
        let u = unit(c(0.0, 0.0), c(0.0, 0.0), 2.0).unwrap();
        assert!((u.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exponential_norm() {
        let zeta = c(0.6, -0.8);
        let t = 1.7;
        let u = ExpSpan::exp(StepFunction::constant(t, zeta).unwrap());
        let v = span_inner(&u, &u).unwrap();
        assert!((v.re - (zeta.norm_sqr() * t).exp()).abs() < 1e-13);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn identical_terms_are_merged() {
        let f = StepFunction::constant(1.0, c(0.3, 0.1)).unwrap();
        let g = f.map_values(|v| v * c(1.0 + 1e-16, 0.0));
        let span = ExpSpan::new(
            1.0,
            [
                ExpTerm { coeff: c(1.0, 0.0), f: f.clone() },
                ExpTerm { coeff: c(-1.0, 0.0), f: g },
            ],
        )
        .unwrap();
        assert_eq!(span.len(), 1);
        assert_eq!(span.norm_sqr(), 0.0);
    }

    #[test]
    fn mixed_horizons_rejected() {
        let f = StepFunction::constant(1.0, c(0.3, 0.1)).unwrap();
        let g = StepFunction::constant(2.0, c(0.3, 0.1)).unwrap();
        let r = ExpSpan::new(
            1.0,
            [
                ExpTerm { coeff: c(1.0, 0.0), f },
                ExpTerm { coeff: c(1.0, 0.0), f: g },
            ],
        );
        assert!(matches!(r, Err(Error::HorizonMismatch { .. })));
    }

    #[test]
    fn unit_requires_positive_time() {
        assert!(unit(c(0.0, 0.0), c(1.0, 0.0), 0.0).is_err());
        assert!(unit(c(0.0, 0.0), c(1.0, 0.0), -1.0).is_err());
    }

    #[test]
    fn near_collinear_gram_is_flagged() {
        let f = StepFunction::constant(1.0, c(0.3, 0.0)).unwrap();
        let g = StepFunction::constant(1.0, c(0.3 + 1e-9, 0.0)).unwrap();
        let span = ExpSpan::new(
            1.0,
            [
                ExpTerm { coeff: c(1.0, 0.0), f },
                ExpTerm { coeff: c(1.0, 0.0), f: g },
            ],
        )
        .unwrap();
        assert!(span.gram_condition().unwrap() > GRAM_CONDITION_WARN);
    }
}
