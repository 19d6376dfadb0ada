use num_complex::Complex64;

use super::span::{ExpSpan, ExpTerm};
use crate::error::{invalid, Result};

/// `|U| = 1` is enforced to this tolerance.
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// Parameters `(λ, ξ, U)` of a type I₁ automorphism `θ^(λ,ξ,U)`.
///
/// `λ` contributes the overall phase `e^{iλt}`, `ξ` the shift and `U` the
/// rotation of the test function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AutomorphismParams {
    lambda: f64,
    xi: Complex64,
    u: Complex64,
}

impl AutomorphismParams {
    pub fn new(lambda: f64, xi: Complex64, u: Complex64) -> Result<Self> {
        if !lambda.is_finite() || !xi.re.is_finite() || !xi.im.is_finite() {
            return Err(invalid("params", "non-finite λ or ξ"));
        }
        if (u.norm() - 1.0).abs() > UNIMODULAR_TOL {
            return Err(invalid("U", format!("|U| = {} is not 1", u.norm())));
        }
        Ok(Self { lambda, xi, u })
    }

    pub fn identity() -> Self {
        Self {
            lambda: 0.0,
            xi: Complex64::new(0.0, 0.0),
            u: Complex64::new(1.0, 0.0),
        }
    }

    /// `θ^shift(ξ) = θ^(0,ξ,1)`.
    pub fn shift(xi: Complex64) -> Result<Self> {
        Self::new(0.0, xi, Complex64::new(1.0, 0.0))
    }

    /// `θ^rotat(U) = θ^(0,0,U)`.
    pub fn rotation(u: Complex64) -> Result<Self> {
        Self::new(0.0, Complex64::new(0.0, 0.0), u)
    }

    /// Rotation by angle `alpha`, `U = e^{iα}`.
    pub fn rotation_by(alpha: f64) -> Self {
        Self {
            lambda: 0.0,
            xi: Complex64::new(0.0, 0.0),
            u: Complex64::from_polar(1.0, alpha),
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn xi(&self) -> Complex64 {
        self.xi
    }

    pub fn u(&self) -> Complex64 {
        self.u
    }

    /// Image `(a', ζ')` of the unit `u^(a,ζ)`:
    /// `ζ' = Uζ + ξ`, `a' = a + iλ − ½|ξ|² − Uζ·conj(ξ)`.
    pub fn act_on_unit(&self, a: Complex64, zeta: Complex64) -> (Complex64, Complex64) {
        let uz = self.u * zeta;
        let a2 = a + Complex64::new(-0.5 * self.xi.norm_sqr(), self.lambda) - uz * self.xi.conj();
        (a2, uz + self.xi)
    }
}

/// Applies `θ^(λ,ξ,U)_T` to every term: `c·Exp(f) ↦ c'·Exp(Uf + ξ)` with
/// `c' = c·e^{iλT}·exp(−½|ξ|²T − conj(ξ)·∫₀ᵀ Uf)`.
pub fn apply_automorphism(p: &AutomorphismParams, v: &ExpSpan) -> Result<ExpSpan> {
    let horizon = v.horizon();
    let base = Complex64::new(-0.5 * p.xi.norm_sqr() * horizon, p.lambda * horizon);
    let terms = v.terms().iter().map(|t| {
        let uf = t.f.map_values(|z| p.u * z);
        let mult = (base - p.xi.conj() * uf.integral()).exp();
        ExpTerm {
            coeff: t.coeff * mult,
            f: uf.map_values(|z| z + p.xi),
        }
    });
    ExpSpan::new(horizon, terms.collect::<Vec<_>>())
}

/// Same map as [`apply_automorphism`], built by applying the unit formula on
/// every piece of the partition and multiplying the piecewise factors
/// (`θ_{s+t} = θ_s ⊗ θ_t`).
pub fn apply_automorphism_per_piece(p: &AutomorphismParams, v: &ExpSpan) -> Result<ExpSpan> {
    let horizon = v.horizon();
    let terms = v.terms().iter().map(|t| {
        let mut mult = Complex64::new(0.0, p.lambda * horizon).exp();
        for (len, zeta) in t.f.pieces() {
            let (a2, _) = p.act_on_unit(Complex64::new(0.0, 0.0), zeta);
            // a2 carries iλ per unit time; the global phase is already applied
            mult *= ((a2 - Complex64::new(0.0, p.lambda)) * len).exp();
        }
        ExpTerm {
            coeff: t.coeff * mult,
            f: t.f.map_values(|z| p.u * z + p.xi),
        }
    });
    ExpSpan::new(horizon, terms.collect::<Vec<_>>())
}

/// Applies `first`, then each following automorphism.
pub fn apply_sequence(ps: &[AutomorphismParams], v: &ExpSpan) -> Result<ExpSpan> {
    ps.iter()
        .try_fold(v.clone(), |acc, p| apply_automorphism(p, &acc))
}
