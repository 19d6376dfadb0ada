use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};

/// Sampled Brownian path on `{j/m}` with signs on its strict local minima.
#[derive(Debug, Clone, PartialEq)]
pub struct WarrenPath {
    m: usize,
    values: Vec<f64>,
    minima: Vec<usize>,
    signs: Vec<i8>,
}

/// Ascending interior indices `j` with `v[j−1] > v[j] < v[j+1]`.
pub fn local_minima(values: &[f64]) -> Result<Vec<usize>> {
    if values.len() < 3 {
        return Err(invalid("values", format!("length {} < 3", values.len())));
    }
    Ok((1..values.len() - 1)
        .filter(|&j| values[j - 1] > values[j] && values[j] < values[j + 1])
        .collect())
}

/// Brownian path with `N(0, 1/m)` increments and i.i.d. uniform signs.
///
/// All increments are drawn before any sign, so the path does not depend on
/// how many minima it has.
pub fn sample_path<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<WarrenPath> {
    if m < 4 {
        return Err(invalid("m", format!("{m} < 4")));
    }
    let sd = (1.0 / m as f64).sqrt();
    let mut values = Vec::with_capacity(m + 1);
    let mut b = 0.0;
    values.push(b);
    for _ in 0..m {
        let z: f64 = rng.sample(StandardNormal);
        b += sd * z;
        values.push(b);
    }
    let minima = local_minima(&values)?;
    let signs = minima
        .iter()
        .map(|_| if rng.random_bool(0.5) { 1 } else { -1 })
        .collect();
    Ok(WarrenPath { m, values, minima, signs })
}

impl WarrenPath {
    /// Path from explicit values `B_0..B_m` and one sign per strict minimum.
    pub fn new(values: Vec<f64>, signs: Vec<i8>) -> Result<Self> {
        if values.len() < 5 {
            return Err(invalid("values", format!("length {} < 5", values.len())));
        }
        if values[0] != 0.0 {
            return Err(invalid("values", "B_0 must be 0"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("values", "non-finite entry"));
        }
        let minima = local_minima(&values)?;
        if signs.len() != minima.len() {
            return Err(Error::DimensionMismatch {
                expected: minima.len(),
                actual: signs.len(),
            });
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(invalid("signs", "entries must be ±1"));
        }
        Ok(Self {
            m: values.len() - 1,
            values,
            minima,
            signs,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn minima(&self) -> &[usize] {
        &self.minima
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// `B_{j/m}`.
    pub fn at(&self, j: usize) -> f64 {
        self.values[j]
    }

    /// `j/m`.
    pub fn time(&self, j: usize) -> f64 {
        j as f64 / self.m as f64
    }

    /// Same path with every sign replaced.
    pub fn with_signs(&self, signs: Vec<i8>) -> Result<Self> {
        Self::new(self.values.clone(), signs)
    }

    pub fn flipped(&self) -> Self {
        Self {
            signs: self.signs.iter().map(|s| -s).collect(),
            ..self.clone()
        }
    }

    /// True when the stored minima are exactly the strict minima of the values.
    pub fn rescan_ok(&self) -> bool {
        local_minima(&self.values).map(|v| v == self.minima).unwrap_or(false)
    }

    /// Grid index of time `t`, if `t·m` is an integer within rounding.
    pub fn grid_index(&self, t: f64) -> Option<usize> {
        grid_index(t, self.m)
    }
}

/// Index `j` with `j/m = t`, allowing a relative rounding slack of `1e-9`.
pub fn grid_index(t: f64, m: usize) -> Option<usize> {
    let x = t * m as f64;
    let j = x.round();
    ((x - j).abs() <= 1e-9 * m as f64 && j >= 0.0 && j <= m as f64).then_some(j as usize)
}

/// `sgn(x)` with `sgn(0) = 0`.
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warren_sim::replica_rng;

    #[test]
    fn minima_examples() {
        assert_eq!(local_minima(&[0.0, -1.0, 1.0]).unwrap(), vec![1]);
        assert!(local_minima(&[0.0, 1.0, 2.0, 3.0]).unwrap().is_empty());
        assert!(local_minima(&[0.0, -1.0, -1.0, 0.0]).unwrap().is_empty());
        assert!(local_minima(&[0.0, 1.0]).is_err());
    }

    #[test]
    fn sampled_path_invariants() {
        let mut rng = replica_rng(1, 0);
        let p = sample_path(256, &mut rng).unwrap();
        assert_eq!(p.values().len(), 257);
        assert_eq!(p.at(0), 0.0);
        assert!(p.rescan_ok());
        assert_eq!(p.signs().len(), p.minima().len());
        assert!(sample_path(3, &mut rng).is_err());
    }

    #[test]
    fn explicit_path_validation() {
        assert!(WarrenPath::new(vec![0.0, -1.0, 0.0, -1.0, 0.0], vec![1, -1]).is_ok());
        assert!(WarrenPath::new(vec![0.0, -1.0, 0.0, -1.0, 0.0], vec![1]).is_err());
        assert!(WarrenPath::new(vec![0.0, -1.0, 0.0, -1.0, 0.0], vec![1, 2]).is_err());
        assert!(WarrenPath::new(vec![1.0, -1.0, 0.0, -1.0, 0.0], vec![1, 1]).is_err());
    }

    #[test]
    fn grid_alignment() {
        assert_eq!(grid_index(0.5, 64), Some(32));
        assert_eq!(grid_index(1.0 / 3.0, 64), None);
        assert_eq!(grid_index(1.5, 64), None);
    }
}
