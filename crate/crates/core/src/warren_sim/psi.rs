use serde::Serialize;

use super::path::{grid_index, sign, WarrenPath};
use crate::error::{invalid, Error, Result};

/// Bounded function `ψ(t_j, ω)` on grid times × paths.
pub trait PathFunctional: Sync {
    /// Rejects a grid size the functional cannot be evaluated on.
    fn check(&self, _m: usize) -> Result<()> {
        Ok(())
    }

    /// `ψ(j/m, ω)`.
    fn eval(&self, j: usize, path: &WarrenPath) -> f64;
}

/// `ψ ≡ c`.
#[derive(Debug, Clone, Copy)]
pub struct ConstantFunctional(pub f64);

impl PathFunctional for ConstantFunctional {
    fn eval(&self, _j: usize, _path: &WarrenPath) -> f64 {
        self.0
    }
}

/// `ψ(t, ω) = sgn(B_b − B_a)` for `t < split`, `0` afterwards.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SplitSignProbe {
    pub split: f64,
    pub a: f64,
    pub b: f64,
}

impl SplitSignProbe {
    /// `sgn(B_1 − B_{1/2})` before `1/2`.
    pub fn half() -> Self {
        Self { split: 0.5, a: 0.5, b: 1.0 }
    }
}

impl PathFunctional for SplitSignProbe {
    fn check(&self, m: usize) -> Result<()> {
        for t in [self.split, self.a, self.b] {
            if grid_index(t, m).is_none() {
                return Err(Error::Alignment(format!("probe time {t} is not a multiple of 1/{m}")));
            }
        }
        Ok(())
    }

    fn eval(&self, j: usize, path: &WarrenPath) -> f64 {
        if path.time(j) >= self.split {
            return 0.0;
        }
        let a = grid_index(self.a, path.m()).expect("aligned");
        let b = grid_index(self.b, path.m()).expect("aligned");
        sign(path.at(b) - path.at(a))
    }
}

/// Any `Fn(j, path) -> f64`.
pub struct FnFunctional<F>(pub F);

impl<F: Fn(usize, &WarrenPath) -> f64 + Sync> PathFunctional for FnFunctional<F> {
    fn eval(&self, j: usize, path: &WarrenPath) -> f64 {
        (self.0)(j, path)
    }
}

/// Parameters of `ψ_{n,δ}(t, ω) = Σ_k χ_{n,k}(t)·φ_{n,k,δ}(ω)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsiSpec {
    pub n: usize,
    pub delta: f64,
}

/// A [`PsiSpec`] resolved against a grid of size `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignedPsi {
    pub spec: PsiSpec,
    pub m: usize,
    /// Grid steps per bucket, `m/(2n)`.
    pub bucket: usize,
    /// Grid steps per probe, `δm`.
    pub offset: usize,
}

impl PsiSpec {
    pub fn new(n: usize, delta: f64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "must be ≥ 1"));
        }
        if !(delta > 0.0 && delta < 0.5) {
            return Err(invalid("delta", format!("{delta} outside (0, 0.5)")));
        }
        Ok(Self { n, delta })
    }

    /// Checks that every bucket boundary `k/2n` and probe end `k/2n + δ` is a grid point.
    pub fn aligned(&self, m: usize) -> Result<AlignedPsi> {
        Self::new(self.n, self.delta)?;
        if m % (2 * self.n) != 0 {
            return Err(Error::Alignment(format!("bucket width 1/{} is not a multiple of 1/{m}", 2 * self.n)));
        }
        let offset = grid_index(self.delta, m)
            .filter(|&o| o > 0)
            .ok_or_else(|| Error::Alignment(format!("delta {} is not a multiple of 1/{m}", self.delta)))?;
        Ok(AlignedPsi {
            spec: *self,
            m,
            bucket: m / (2 * self.n),
            offset,
        })
    }
}

impl AlignedPsi {
    fn check_path(&self, path: &WarrenPath) -> Result<()> {
        if path.m() != self.m {
            return Err(Error::Alignment(format!("spec aligned for m = {}, path has m = {}", self.m, path.m())));
        }
        Ok(())
    }

    /// `φ_{n,k,δ}(ω) = sgn(B_{k/2n+δ} − B_{k/2n})`, `k = 1..n`.
    pub fn phi(&self, k: usize, path: &WarrenPath) -> f64 {
        let left = k * self.bucket;
        sign(path.at(left + self.offset) - path.at(left))
    }

    /// Bucket `k` of grid index `j`, or `None` past `1/2`.
    pub fn bucket_of(&self, j: usize) -> Option<usize> {
        (2 * j < self.m).then(|| j / self.bucket + 1)
    }
}

impl PathFunctional for AlignedPsi {
    fn check(&self, m: usize) -> Result<()> {
        if m != self.m {
            return Err(Error::Alignment(format!("spec aligned for m = {}, run has m = {m}", self.m)));
        }
        Ok(())
    }

    fn eval(&self, j: usize, path: &WarrenPath) -> f64 {
        self.bucket_of(j).map_or(0.0, |k| self.phi(k, path))
    }
}

/// `χ_{n,k}(t) = 1` on `[(k−1)/2n, k/2n)`.
pub fn chi(n: usize, k: usize, t: f64) -> f64 {
    let lo = (k as f64 - 1.0) / (2 * n) as f64;
    let hi = k as f64 / (2 * n) as f64;
    if t >= lo && t < hi {
        1.0
    } else {
        0.0
    }
}

/// `φ_{n,k,δ}` on `path`, `1 ≤ k ≤ n`.
pub fn phi(spec: &PsiSpec, k: usize, path: &WarrenPath) -> Result<f64> {
    let aligned = spec.aligned(path.m())?;
    if k == 0 || k > spec.n {
        return Err(invalid("k", format!("{k} outside 1..={}", spec.n)));
    }
    Ok(aligned.phi(k, path))
}

/// `ψ_{n,δ}(t, ω)` for `t ∈ [0, 1]`: the probe of the bucket containing `t`,
/// `0` from `t = 1/2` on.
pub fn psi_eval(spec: &PsiSpec, t: f64, path: &WarrenPath) -> Result<f64> {
    let aligned = spec.aligned(path.m())?;
    aligned.check_path(path)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(invalid("t", format!("{t} outside [0, 1]")));
    }
    if t >= 0.5 {
        return Ok(0.0);
    }
    let k = ((t * (2 * spec.n) as f64).floor() as usize + 1).min(spec.n);
    Ok(aligned.phi(k, path))
}
