use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance used when comparing horizons and breakpoints.
pub(crate) const HORIZON_RTOL: f64 = 1e-12;

/// Piecewise-constant complex function on `[0, T]`.
///
/// `values[j]` is the value on the open interval `(breakpoints[j], breakpoints[j + 1])`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<Complex64>,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidStepFunction("no pieces".into()));
        }
        if breakpoints.len() != values.len() + 1 {
            return Err(Error::InvalidStepFunction(format!(
                "{} breakpoints for {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints[0] != 0.0 {
            return Err(Error::InvalidStepFunction("first breakpoint must be 0".into()));
        }
        if !breakpoints.iter().all(|b| b.is_finite()) {
            return Err(Error::InvalidStepFunction("non-finite breakpoint".into()));
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidStepFunction(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        if !values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::InvalidStepFunction("non-finite value".into()));
        }
        Ok(Self { breakpoints, values })
    }

    /// The constant function `value` on `[0, horizon]`.
    pub fn constant(horizon: f64, value: Complex64) -> Result<Self> {
        Self::new(vec![0.0, horizon], vec![value])
    }

    /// `value · χ_(0,t)` on `[0, horizon]`, zero on `(t, horizon)`.
    pub fn initial_segment(horizon: f64, t: f64, value: Complex64) -> Result<Self> {
        if !(t > 0.0) || t > horizon {
            return Err(Error::InvalidStepFunction(format!(
                "segment end {t} outside (0, {horizon}]"
            )));
        }
        if t == horizon {
            Self::constant(horizon, value)
        } else {
            Self::new(vec![0.0, t, horizon], vec![value, Complex64::new(0.0, 0.0)])
        }
    }

    pub fn horizon(&self) -> f64 {
        *self.breakpoints.last().expect("non-empty")
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `(length, value)` for every piece.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, v)| (w[1] - w[0], *v))
    }

    /// `∫₀ᵀ f(s) ds`.
    pub fn integral(&self) -> Complex64 {
        self.pieces().map(|(len, v)| v * len).sum()
    }

    /// `‖f‖² = ∫ |f|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.pieces().map(|(len, v)| v.norm_sqr() * len).sum()
    }

    /// Applies `op` to every value, keeping the partition.
    pub fn map_values(&self, op: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|&v| op(v)).collect(),
        }
    }

    /// Values of `self` on the pieces of a refinement of its partition.
    pub(crate) fn values_on(&self, partition: &[f64]) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(partition.len().saturating_sub(1));
        let mut piece = 0;
        for w in partition.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            while piece + 1 < self.values.len() && self.breakpoints[piece + 1] <= mid {
                piece += 1;
            }
            out.push(self.values[piece]);
        }
        out
    }

    /// Same function up to `tol` on the merged partition (relative to the value scale).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if check_horizons(self.horizon(), other.horizon()).is_err() {
            return false;
        }
        let partition = merge_partitions(&self.breakpoints, &other.breakpoints);
        self.values_on(&partition)
            .iter()
            .zip(other.values_on(&partition))
            .all(|(a, b)| (a - b).norm() <= tol * 1f64.max(a.norm()).max(b.norm()))
    }
}

pub(crate) fn check_horizons(left: f64, right: f64) -> Result<()> {
    if (left - right).abs() <= HORIZON_RTOL * left.abs().max(right.abs()) {
        Ok(())
    } else {
        Err(Error::HorizonMismatch { left, right })
    }
}

/// Sorted union of two partitions of the same interval.
pub(crate) fn merge_partitions(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(&x), Some(&y)) if y < x => {
                j += 1;
                y
            }
            (Some(&x), Some(_)) => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
    // both partitions end at the common horizon; drop a near-duplicate last point
    if out.len() >= 3 {
        let last = out[out.len() - 1];
        let prev = out[out.len() - 2];
        if last - prev <= HORIZON_RTOL * last.abs() {
            out.remove(out.len() - 2);
        }
    }
    out
}

/// `⟨f, g⟩ = ∫₀ᵀ f(s) conj(g(s)) ds`, exact over the merged partition.
///
/// Linear in the first slot and conjugate-linear in the second; every inner
/// product in the crate uses this convention.
pub fn step_inner(f: &StepFunction, g: &StepFunction) -> Result<Complex64> {
    check_horizons(f.horizon(), g.horizon())?;
    let partition = merge_partitions(&f.breakpoints, &g.breakpoints);
    let fv = f.values_on(&partition);
    let gv = g.values_on(&partition);
    Ok(partition
        .windows(2)
        .zip(fv.iter().zip(&gv))
        .map(|(w, (a, b))| a * b.conj() * (w[1] - w[0]))
        .sum())
}
