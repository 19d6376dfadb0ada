use std::sync::Arc;

use super::path::WarrenPath;
use super::profile::{PathFactor, SuperchaosVector, Weight};
use crate::error::{invalid, Error, Result};

/// `(𝒜_χ f)`: multiplies the profile by `χ` in its time argument.
pub fn op_A(chi: &Weight, f: &SuperchaosVector) -> SuperchaosVector {
    SuperchaosVector {
        weight: f.weight.multiply(chi),
        factor: f.factor,
    }
}

/// Function of a finite set of minimizer times.
pub trait SetFunction: Send + Sync {
    fn eval(&self, times: &[f64]) -> f64;
}

/// `φ ≡ c`.
#[derive(Debug, Clone, Copy)]
pub struct ConstantSet(pub f64);

impl SetFunction for ConstantSet {
    fn eval(&self, _times: &[f64]) -> f64 {
        self.0
    }
}

/// `φ(C) = 1` when `C ∩ (s, t) = ∅`, else `0`.
#[derive(Debug, Clone, Copy)]
pub struct AvoidsInterval {
    pub s: f64,
    pub t: f64,
}

impl SetFunction for AvoidsInterval {
    fn eval(&self, times: &[f64]) -> f64 {
        if times.iter().any(|&x| x > self.s && x < self.t) {
            0.0
        } else {
            1.0
        }
    }
}

/// `φφ′`.
pub struct ProductSet<A, B>(pub A, pub B);

impl<A: SetFunction, B: SetFunction> SetFunction for ProductSet<A, B> {
    fn eval(&self, times: &[f64]) -> f64 {
        self.0.eval(times) * self.1.eval(times)
    }
}

/// Any `Fn(&[f64]) -> f64`.
pub struct FnSet<F>(pub F);

impl<F: Fn(&[f64]) -> f64 + Send + Sync> SetFunction for FnSet<F> {
    fn eval(&self, times: &[f64]) -> f64 {
        (self.0)(times)
    }
}

/// Default chaos-order cap.
pub const DEFAULT_MAX_ORDER: usize = 2;

/// Order-`n` term `c·Σ_{k₁<…<kₙ} η_{k₁}…η_{kₙ}·sym(w₁⊗…⊗wₙ)(τ)·F(ω)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaosTerm {
    pub coeff: f64,
    pub weights: Vec<Weight>,
    pub factor: PathFactor,
}

impl ChaosTerm {
    pub fn order(&self) -> usize {
        self.weights.len()
    }

    /// `(1/n!) Σ_σ Π_i w_i(t_{σ(i)})`.
    fn symmetrized(&self, times: &[f64]) -> f64 {
        let n = times.len();
        if n == 0 {
            return 1.0;
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = 0.0;
        let mut count = 0usize;
        loop {
            total += self
                .weights
                .iter()
                .zip(&perm)
                .map(|(w, &i)| w.eval(times[i]))
                .product::<f64>();
            count += 1;
            if !next_permutation(&mut perm) {
                break;
            }
        }
        total / count as f64
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Truncated chaos vector with pending `ℰ_φ` multipliers.
#[derive(Clone)]
pub struct ChaosVector {
    max_order: usize,
    terms: Vec<ChaosTerm>,
    multipliers: Vec<Arc<dyn SetFunction>>,
}

impl ChaosVector {
    pub fn new(max_order: usize) -> Self {
        Self {
            max_order,
            terms: Vec::new(),
            multipliers: Vec::new(),
        }
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn terms(&self) -> &[ChaosTerm] {
        &self.terms
    }

    pub fn push(&mut self, term: ChaosTerm) -> Result<()> {
        if term.order() > self.max_order {
            return Err(Error::ChaosOrder {
                order: term.order(),
                max: self.max_order,
            });
        }
        if !term.coeff.is_finite() {
            return Err(invalid("coeff", "not finite"));
        }
        self.terms.push(term);
        Ok(())
    }

    /// Order-one vector equal to `f`.
    pub fn first_order(f: &SuperchaosVector) -> Self {
        let mut v = Self::new(DEFAULT_MAX_ORDER);
        v.terms.push(ChaosTerm {
            coeff: 1.0,
            weights: vec![f.weight.clone()],
            factor: f.factor,
        });
        v
    }

    /// `ℰ_φ` applied to this vector.
    pub fn apply(&self, phi: Arc<dyn SetFunction>) -> Self {
        let mut out = self.clone();
        out.multipliers.push(phi);
        out
    }

    /// Product of the pending multipliers at `times`.
    pub fn multiplier(&self, times: &[f64]) -> f64 {
        self.multipliers.iter().map(|m| m.eval(times)).product()
    }

    /// Value on one path.
    pub fn eval(&self, path: &WarrenPath) -> Result<f64> {
        let mut total = 0.0;
        for term in &self.terms {
            if term.order() > self.max_order {
                return Err(Error::ChaosOrder {
                    order: term.order(),
                    max: self.max_order,
                });
            }
            term.factor.check_alignment(path.m())?;
            let factor = term.coeff * term.factor.eval(path);
            let mut chosen = Vec::with_capacity(term.order());
            total += factor * self.subsets(term, path, 0, &mut chosen);
        }
        Ok(total)
    }

    fn subsets(&self, term: &ChaosTerm, path: &WarrenPath, start: usize, chosen: &mut Vec<usize>) -> f64 {
        if chosen.len() == term.order() {
            let times: Vec<f64> = chosen.iter().map(|&k| path.time(path.minima()[k])).collect();
            let eta: f64 = chosen.iter().map(|&k| path.signs()[k] as f64).product();
            return eta * term.symmetrized(&times) * self.multiplier(&times);
        }
        let mut sum = 0.0;
        for k in start..path.minima().len() {
            chosen.push(k);
            sum += self.subsets(term, path, k + 1, chosen);
            chosen.pop();
        }
        sum
    }
}

/// `(ℰ_φ F)(ω)`.
pub fn op_E(phi: Arc<dyn SetFunction>, f: &ChaosVector, path: &WarrenPath) -> Result<f64> {
    f.apply(phi).eval(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warren_sim::chaos_eval;

    fn path() -> WarrenPath {
        WarrenPath::new(
            vec![0.0, -1.0, 0.5, -0.5, 1.0, 0.2, 0.4, -2.0, 0.0],
            vec![1, -1, 1, 1],
        )
        .unwrap()
    }

    #[test]
    fn identity_multiplier_reproduces_chaos_eval() {
        let f = SuperchaosVector::ws(Weight::indicator(0.0, 0.7).unwrap(), 0.5, 1.0).unwrap();
        let v = ChaosVector::first_order(&f);
        let p = path();
        assert_eq!(op_E(Arc::new(ConstantSet(1.0)), &v, &p).unwrap(), chaos_eval(&f, &p).unwrap());
    }

    #[test]
    fn avoiding_interval_kills_terms() {
        let f = SuperchaosVector::w(Weight::constant(1.0));
        let v = ChaosVector::first_order(&f);
        let p = path();
        // the minimum at 3/8 (sign −1) is removed
        let got = op_E(Arc::new(AvoidsInterval { s: 0.3, t: 0.5 }), &v, &p).unwrap();
        assert_eq!(got, 3.0);
    }

    #[test]
    fn order_cap() {
        let mut v = ChaosVector::new(2);
        let term = ChaosTerm {
            coeff: 1.0,
            weights: vec![Weight::constant(1.0); 3],
            factor: PathFactor::One,
        };
        assert!(matches!(v.push(term), Err(Error::ChaosOrder { order: 3, max: 2 })));
    }

    #[test]
    fn second_order_term() {
        let mut v = ChaosVector::new(2);
        v.push(ChaosTerm {
            coeff: 2.0,
            weights: vec![Weight::indicator(0.0, 0.5).unwrap(), Weight::constant(1.0)],
            factor: PathFactor::One,
        })
        .unwrap();
        let p = path();
        // pairs: sym weight = (w₁(s)+w₁(t))/2 over pairs of minima times
        let times = [0.125, 0.375, 0.625, 0.875];
        let signs = [1.0, -1.0, 1.0, 1.0];
        let mut expected = 0.0;
        for a in 0..4 {
            for b in a + 1..4 {
                let w = |t: f64| if t < 0.5 { 1.0 } else { 0.0 };
                expected += 2.0 * signs[a] * signs[b] * (w(times[a]) + w(times[b])) / 2.0;
            }
        }
        assert!((v.eval(&p).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn permutations_are_enumerated() {
        let mut p = vec![0, 1, 2];
        let mut n = 1;
        while next_permutation(&mut p) {
            n += 1;
        }
        assert_eq!(n, 6);
    }
}
