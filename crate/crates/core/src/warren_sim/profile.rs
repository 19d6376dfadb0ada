use serde::Serialize;

use super::path::{grid_index, sign, WarrenPath};
use crate::error::{invalid, Error, Result};

/// Real piecewise-constant function on `[0, 1]`, constant on each `[t_{i−1}, t_i)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Weight {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl Weight {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || breakpoints.len() != values.len() + 1 {
            return Err(invalid("weight", "need one more breakpoint than values"));
        }
        if breakpoints[0] != 0.0 || *breakpoints.last().unwrap() != 1.0 {
            return Err(invalid("weight", "breakpoints must run from 0 to 1"));
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("weight", "breakpoints must be strictly increasing"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("weight", "values must be finite"));
        }
        Ok(Self { breakpoints, values })
    }

    pub fn constant(c: f64) -> Self {
        Self {
            breakpoints: vec![0.0, 1.0],
            values: vec![c],
        }
    }

    /// `1` on `[a, b)`, `0` elsewhere.
    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        if !(0.0 <= a && a < b && b <= 1.0) {
            return Err(invalid("indicator", format!("[{a}, {b}) is not inside [0, 1]")));
        }
        let mut bp = vec![0.0];
        let mut vals = Vec::new();
        if a > 0.0 {
            bp.push(a);
            vals.push(0.0);
        }
        bp.push(b);
        vals.push(1.0);
        if b < 1.0 {
            bp.push(1.0);
            vals.push(0.0);
        }
        Self::new(bp, vals)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t >= 1.0 {
            return *self.values.last().unwrap();
        }
        let i = self.breakpoints[1..].partition_point(|&b| b <= t);
        self.values[i.min(self.values.len() - 1)]
    }

    /// Pointwise product.
    pub fn multiply(&self, other: &Weight) -> Weight {
        let mut bp: Vec<f64> = self
            .breakpoints
            .iter()
            .chain(&other.breakpoints)
            .copied()
            .collect();
        bp.sort_by(f64::total_cmp);
        bp.dedup();
        let values = bp
            .windows(2)
            .map(|w| self.eval(w[0]) * other.eval(w[0]))
            .collect();
        Weight { breakpoints: bp, values }
    }

    /// True when the weight is zero on every piece meeting `[a, b)`.
    pub fn vanishes_on(&self, a: f64, b: f64) -> bool {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .all(|(w, &v)| v == 0.0 || w[1] <= a || w[0] >= b)
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

/// Path-dependent factor of a profile `g(t, ω) = w(t)·F(ω)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PathFactor {
    One,
    /// `sgn(B_b − B_a)`.
    Sign { a: f64, b: f64 },
    /// `exp(ζ(B_b − B_a) − ζ²(b − a)/2)`, the exponential vector of `ζχ_(a,b)`.
    Exp { zeta: f64, a: f64, b: f64 },
}

impl PathFactor {
    fn probes(&self) -> Option<(f64, f64)> {
        match *self {
            PathFactor::One => None,
            PathFactor::Sign { a, b } | PathFactor::Exp { a, b, .. } => Some((a, b)),
        }
    }

    /// Checks the probe times against a grid of size `m`.
    pub fn check_alignment(&self, m: usize) -> Result<()> {
        if let Some((a, b)) = self.probes() {
            if !(a < b) {
                return Err(invalid("profile", format!("probe times {a} ≥ {b}")));
            }
            for t in [a, b] {
                if grid_index(t, m).is_none() {
                    return Err(Error::Alignment(format!("probe time {t} is not a multiple of 1/{m}")));
                }
            }
        }
        Ok(())
    }

    /// `F(ω)`; the probe times must already be aligned with the path grid.
    pub fn eval(&self, path: &WarrenPath) -> f64 {
        let idx = |t: f64| grid_index(t, path.m()).expect("aligned probe time");
        match *self {
            PathFactor::One => 1.0,
            PathFactor::Sign { a, b } => sign(path.at(idx(b)) - path.at(idx(a))),
            PathFactor::Exp { zeta, a, b } => {
                (zeta * (path.at(idx(b)) - path.at(idx(a))) - 0.5 * zeta * zeta * (b - a)).exp()
            }
        }
    }
}

/// Catalog tag of a [`SuperchaosVector`] profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Profile {
    W,
    WS,
    WE,
}

/// First-superchaos element `f = Σ_k η(τ_k)·g(τ_k, ω)` with `g(t, ω) = w(t)·F(ω)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuperchaosVector {
    pub weight: Weight,
    pub factor: PathFactor,
}

impl SuperchaosVector {
    /// Deterministic profile `g = w`.
    pub fn w(weight: Weight) -> Self {
        Self {
            weight,
            factor: PathFactor::One,
        }
    }

    /// `g = w(t)·sgn(B_b − B_a)`.
    pub fn ws(weight: Weight, a: f64, b: f64) -> Result<Self> {
        check_probe_times(a, b)?;
        Ok(Self {
            weight,
            factor: PathFactor::Sign { a, b },
        })
    }

    /// `g = w(t)·exp(ζ(B_b − B_a) − ζ²(b − a)/2)`.
    pub fn we(weight: Weight, zeta: f64, a: f64, b: f64) -> Result<Self> {
        check_probe_times(a, b)?;
        if !zeta.is_finite() {
            return Err(invalid("zeta", "not finite"));
        }
        Ok(Self {
            weight,
            factor: PathFactor::Exp { zeta, a, b },
        })
    }

    pub fn profile(&self) -> Profile {
        match self.factor {
            PathFactor::One => Profile::W,
            PathFactor::Sign { .. } => Profile::WS,
            PathFactor::Exp { .. } => Profile::WE,
        }
    }

    pub fn check_alignment(&self, m: usize) -> Result<()> {
        self.factor.check_alignment(m)
    }

    /// `g(j/m, ω)`.
    pub fn coefficient(&self, j: usize, path: &WarrenPath) -> f64 {
        self.weight.eval(path.time(j)) * self.factor.eval(path)
    }
}

fn check_probe_times(a: f64, b: f64) -> Result<()> {
    if !(0.0 <= a && a < b && b <= 1.0) {
        return Err(invalid("profile", format!("probe times ({a}, {b}) not ordered in [0, 1]")));
    }
    Ok(())
}

/// `f(ω) = Σ_j η_j g(t_j, ω)` over the minima in ascending order.
pub fn chaos_eval(f: &SuperchaosVector, path: &WarrenPath) -> Result<f64> {
    let order: Vec<usize> = (0..path.minima().len()).collect();
    chaos_eval_enumerated(f, path, &order)
}

/// [`chaos_eval`] summing the minima in the order given by `order`, a
/// permutation of `0..minima.len()`.
pub fn chaos_eval_enumerated(f: &SuperchaosVector, path: &WarrenPath, order: &[usize]) -> Result<f64> {
    f.check_alignment(path.m())?;
    check_permutation(order, path.minima().len())?;
    let factor = f.factor.eval(path);
    Ok(order
        .iter()
        .map(|&k| {
            let j = path.minima()[k];
            path.signs()[k] as f64 * f.weight.eval(path.time(j)) * factor
        })
        .sum())
}

pub(crate) fn check_permutation(order: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    if order.len() != len {
        return Err(Error::DimensionMismatch {
            expected: len,
            actual: order.len(),
        });
    }
    for &k in order {
        if k >= len || std::mem::replace(&mut seen[k], true) {
            return Err(invalid("order", "not a permutation of the minima"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path() -> WarrenPath {
        // minima at j = 1, 3, 5, 7 (times 1/8, 3/8, 5/8, 7/8)
        WarrenPath::new(
            vec![0.0, -1.0, 0.5, -0.5, 1.0, 0.2, 0.4, -2.0, 0.0],
            vec![1, -1, 1, 1],
        )
        .unwrap()
    }

    #[test]
    fn weight_evaluation() {
        let w = Weight::indicator(0.25, 0.5).unwrap();
        assert_eq!(w.eval(0.0), 0.0);
        assert_eq!(w.eval(0.25), 1.0);
        assert_eq!(w.eval(0.4999), 1.0);
        assert_eq!(w.eval(0.5), 0.0);
        assert_eq!(w.eval(1.0), 0.0);
        assert!(w.vanishes_on(0.5, 1.0));
        assert!(!w.vanishes_on(0.0, 0.3));
        let prod = w.multiply(&Weight::new(vec![0.0, 0.3, 1.0], vec![2.0, 3.0]).unwrap());
        assert_eq!(prod.eval(0.26), 2.0);
        assert_eq!(prod.eval(0.35), 3.0);
        assert_eq!(prod.eval(0.6), 0.0);
    }

    #[test]
    fn chaos_eval_examples() {
        let p = path();
        let f = SuperchaosVector::w(Weight::constant(1.0));
        assert_eq!(chaos_eval(&f, &p).unwrap(), 2.0);
        assert_eq!(chaos_eval(&f, &p.flipped()).unwrap(), -2.0);
        let none = SuperchaosVector::w(Weight::indicator(0.15, 0.3).unwrap());
        assert_eq!(chaos_eval(&none, &p).unwrap(), 0.0);
        let single = SuperchaosVector::w(Weight::indicator(0.3, 0.4).unwrap());
        assert_eq!(chaos_eval(&single, &p).unwrap(), -1.0);
    }

    #[test]
    fn factors() {
        let p = path();
        let ws = SuperchaosVector::ws(Weight::constant(1.0), 0.5, 1.0).unwrap();
        assert_eq!(ws.factor.eval(&p), -1.0);
        let we = SuperchaosVector::we(Weight::constant(1.0), 0.5, 0.5, 1.0).unwrap();
        assert!((we.factor.eval(&p) - (0.5f64 * -1.0 - 0.0625).exp()).abs() < 1e-15);
        let bad = SuperchaosVector::ws(Weight::constant(1.0), 0.3, 1.0).unwrap();
        assert!(matches!(chaos_eval(&bad, &p), Err(Error::Alignment(_))));
    }

    #[test]
    fn enumeration_order_is_checked() {
        let p = path();
        let f = SuperchaosVector::w(Weight::constant(1.0));
        assert_eq!(chaos_eval_enumerated(&f, &p, &[3, 1, 0, 2]).unwrap(), 2.0);
        assert!(chaos_eval_enumerated(&f, &p, &[0, 0, 1, 2]).is_err());
        assert!(chaos_eval_enumerated(&f, &p, &[0, 1]).is_err());
    }
}
