use std::collections::BTreeMap;

use serde::Serialize;

use super::lemma43::Lemma43Row;
use crate::ccr_matrix::Scheme;
use crate::error::{invalid, Error, Result};

/// Sign-sum norm together with where it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormInput {
    pub value: f64,
    pub scheme: Scheme,
    pub n: usize,
}

/// Inputs and margin of the non-extension argument; fields serialize in declaration order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub norm_value: f64,
    pub scheme: Scheme,
    #[serde(rename = "N")]
    pub dim: usize,
    pub m_hat: f64,
    pub n: usize,
    pub delta: f64,
    pub grid_m: usize,
    pub samples: usize,
    pub margin: f64,
    pub master_seed: u64,
    pub versions: BTreeMap<String, String>,
}

/// The row with the smallest `δ` and, among those, the largest `n`.
pub fn select_lemma43_row(rows: &[Lemma43Row]) -> Option<&Lemma43Row> {
    rows.iter()
        .min_by(|a, b| a.delta.total_cmp(&b.delta).then(b.n.cmp(&a.n)))
}

/// `m̂` from [`select_lemma43_row`] normalized by `f_mass`;
/// `margin = 3m̂ − norm_value`.
pub fn obstruction_report(norm: NormInput, rows: &[Lemma43Row], f_mass: f64) -> Result<ObstructionReport> {
    if !norm.value.is_finite() {
        return Err(Error::MissingInput("norm value is not finite".into()));
    }
    if !(f_mass > 0.0) {
        return Err(invalid("f_mass", format!("{f_mass} is not > 0")));
    }
    let best = select_lemma43_row(rows)
        .ok_or_else(|| Error::MissingInput("no lemma43 rows".into()))?;
    let m_hat = best.estimate / f_mass;
    let mut versions = BTreeMap::new();
    versions.insert(env!("CARGO_PKG_NAME").to_string(), env!("CARGO_PKG_VERSION").to_string());
    Ok(ObstructionReport {
        norm_value: norm.value,
        scheme: norm.scheme,
        dim: norm.n,
        m_hat,
        n: best.n,
        delta: best.delta,
        grid_m: best.m,
        samples: best.samples,
        margin: 3.0 * m_hat - norm.value,
        master_seed: best.seed,
        versions,
    })
}

impl ObstructionReport {
    /// `3 − norm_value`.
    pub fn epsilon_hat(&self) -> f64 {
        3.0 - self.norm_value
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize, delta: f64, estimate: f64) -> Lemma43Row {
        Lemma43Row {
            n,
            delta,
            m: 1024,
            samples: 10,
            estimate,
            stderr: 0.0,
            mass: 1.0,
            mass_stderr: 0.0,
            seed: 4,
            diagnostics: None,
        }
    }

    #[test]
    fn arithmetic_example() {
        let norm = NormInput { value: 2.1, scheme: Scheme::Oscillator, n: 1024 };
        let rows = [row(8, 1.0 / 64.0, 0.5), row(64, 1.0 / 256.0, 0.9), row(8, 1.0 / 256.0, 0.7)];
        let r = obstruction_report(norm, &rows, 1.0).unwrap();
        assert_eq!((r.n, r.delta), (64, 1.0 / 256.0));
        assert!((r.margin - 0.6).abs() < 1e-12);
        assert!((r.epsilon_hat() - 0.9).abs() < 1e-12);
    }

    #[test]
    fn negative_control() {
        let norm = NormInput { value: 3.0, scheme: Scheme::Grid, n: 64 };
        let r = obstruction_report(norm, &[row(8, 0.01, 0.95)], 1.0).unwrap();
        assert!((r.margin - 3.0 * (0.95 - 1.0)).abs() < 1e-12);
        assert!(r.margin <= 0.0);
    }

    #[test]
    fn missing_inputs() {
        let norm = NormInput { value: 2.0, scheme: Scheme::Grid, n: 64 };
        assert!(matches!(obstruction_report(norm, &[], 1.0), Err(Error::MissingInput(_))));
        assert!(obstruction_report(norm, &[row(8, 0.01, 0.5)], 0.0).is_err());
    }
}
