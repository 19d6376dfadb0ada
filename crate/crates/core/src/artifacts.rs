//! On-disk artifacts: `norm_study.csv`, `lemma43.csv` and `obstruction.json`.
//!
//! Floating-point fields use 12 significant digits in C `%.12g` style, and
//! rows end in a bare line feed, so identical runs give identical bytes.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::ccr_matrix::{ConvergenceTable, Scheme};
use crate::error::{Error, Result};
use crate::warren_sim::{Lemma43Row, NormInput, ObstructionReport};

pub const NORM_STUDY_HEADER: [&str; 6] = ["scheme", "N", "alpha", "t", "value", "seconds"];
pub const LEMMA43_HEADER: [&str; 9] = [
    "n", "delta", "m", "samples", "estimate", "stderr", "mass", "mass_stderr", "seed",
];

/// `x` formatted like C's `%.12g`.
pub fn fmt_sig12(x: f64) -> String {
    fmt_g(x, 12)
}

fn fmt_g(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", precision - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= precision as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (precision as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn artifact_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Artifact(format!("{}: {e}", path.display()))
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

/// One row of `norm_study.csv`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct NormStudyRecord {
    pub scheme: Scheme,
    #[serde(rename = "N")]
    pub n: usize,
    pub alpha: f64,
    pub t: f64,
    pub value: f64,
    pub seconds: Option<f64>,
}

impl NormStudyRecord {
    pub fn from_table(table: &ConvergenceTable, timing: bool) -> Vec<Self> {
        table
            .rows
            .iter()
            .map(|r| NormStudyRecord {
                scheme: r.scheme,
                n: r.n,
                alpha: r.alpha,
                t: r.t,
                value: r.value,
                seconds: timing.then_some(r.seconds),
            })
            .collect()
    }
}

/// Serializes norm-study rows; `seconds` is left empty when absent.
pub fn norm_study_csv(rows: &[NormStudyRecord]) -> Result<Vec<u8>> {
    let mut w = csv_writer(Vec::new());
    let io = |e: csv::Error| Error::Artifact(e.to_string());
    w.write_record(NORM_STUDY_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.scheme.as_str().to_string(),
            r.n.to_string(),
            fmt_sig12(r.alpha),
            fmt_sig12(r.t),
            fmt_sig12(r.value),
            r.seconds.map(fmt_sig12).unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    w.into_inner().map_err(|e| Error::Artifact(e.to_string()))
}

pub fn write_norm_study(path: &Path, rows: &[NormStudyRecord]) -> Result<()> {
    fs::write(path, norm_study_csv(rows)?).map_err(|e| artifact_err(path, e))
}

fn check_header(path: &Path, reader: &mut csv::Reader<&[u8]>, expected: &[&str]) -> Result<()> {
    let header = reader.headers().map_err(|e| artifact_err(path, e))?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(artifact_err(path, format!("expected header {}", expected.join(","))));
    }
    Ok(())
}

fn field<T: std::str::FromStr>(path: &Path, rec: &csv::StringRecord, i: usize, name: &str) -> Result<T> {
    rec.get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| artifact_err(path, format!("line {}: bad {name}", rec.position().map_or(0, |p| p.line()))))
}

pub fn read_norm_study(path: &Path) -> Result<Vec<NormStudyRecord>> {
    let bytes = fs::read(path).map_err(|e| artifact_err(path, e))?;
    let mut reader = csv::Reader::from_reader(bytes.as_slice());
    check_header(path, &mut reader, &NORM_STUDY_HEADER)?;
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| artifact_err(path, e))?;
        let seconds = match rec.get(5) {
            Some("") | None => None,
            Some(_) => Some(field(path, &rec, 5, "seconds")?),
        };
        rows.push(NormStudyRecord {
            scheme: field(path, &rec, 0, "scheme")?,
            n: field(path, &rec, 1, "N")?,
            alpha: field(path, &rec, 2, "alpha")?,
            t: field(path, &rec, 3, "t")?,
            value: field(path, &rec, 4, "value")?,
            seconds,
        });
    }
    Ok(rows)
}

/// The sign-sum norm in a norm study: rows at `α = 2π/3` (within `1e-3`),
/// largest `N`, largest value across schemes at that `N`.
pub fn select_norm(rows: &[NormStudyRecord]) -> Result<NormInput> {
    let symmetric = rows.iter().filter(|r| (r.alpha - 2.0 * PI / 3.0).abs() < 1e-3);
    let top = symmetric.clone().map(|r| r.n).max().ok_or_else(|| {
        Error::MissingInput("norm study has no row at alpha = 2π/3".into())
    })?;
    let best = symmetric
        .filter(|r| r.n == top)
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .expect("nonempty");
    Ok(NormInput {
        value: best.value,
        scheme: best.scheme,
        n: best.n,
    })
}

pub fn lemma43_csv(rows: &[Lemma43Row]) -> Result<Vec<u8>> {
    let mut w = csv_writer(Vec::new());
    let io = |e: csv::Error| Error::Artifact(e.to_string());
    w.write_record(LEMMA43_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            fmt_sig12(r.delta),
            r.m.to_string(),
            r.samples.to_string(),
            fmt_sig12(r.estimate),
            fmt_sig12(r.stderr),
            fmt_sig12(r.mass),
            fmt_sig12(r.mass_stderr),
            r.seed.to_string(),
        ])
        .map_err(io)?;
    }
    w.into_inner().map_err(|e| Error::Artifact(e.to_string()))
}

pub fn write_lemma43(path: &Path, rows: &[Lemma43Row]) -> Result<()> {
    fs::write(path, lemma43_csv(rows)?).map_err(|e| artifact_err(path, e))
}

pub fn read_lemma43(path: &Path) -> Result<Vec<Lemma43Row>> {
    let bytes = fs::read(path).map_err(|e| artifact_err(path, e))?;
    let mut reader = csv::Reader::from_reader(bytes.as_slice());
    check_header(path, &mut reader, &LEMMA43_HEADER)?;
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| artifact_err(path, e))?;
        rows.push(Lemma43Row {
            n: field(path, &rec, 0, "n")?,
            delta: field(path, &rec, 1, "delta")?,
            m: field(path, &rec, 2, "m")?,
            samples: field(path, &rec, 3, "samples")?,
            estimate: field(path, &rec, 4, "estimate")?,
            stderr: field(path, &rec, 5, "stderr")?,
            mass: field(path, &rec, 6, "mass")?,
            mass_stderr: field(path, &rec, 7, "mass_stderr")?,
            seed: field(path, &rec, 8, "seed")?,
            diagnostics: None,
        });
    }
    Ok(rows)
}

/// Pretty JSON with a trailing newline.
pub fn to_json_bytes<T: serde::Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value).map_err(|e| Error::Artifact(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

pub fn write_obstruction(path: &Path, report: &ObstructionReport) -> Result<()> {
    fs::write(path, to_json_bytes(report)?).map_err(|e| artifact_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_matches_printf() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (-2.5, "-2.5"),
            (2.0 * PI / 3.0, "2.09439510239"),
            (1.0 / 4096.0, "0.000244140625"),
            (1e-5, "1e-05"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (0.1 + 0.2, "0.3"),
            (1.2560812345678, "1.25608123457"),
            (999999999999.9, "1e+12"),
        ];
        for (x, s) in cases {
            assert_eq!(fmt_sig12(x), s, "{x}");
        }
    }

    #[test]
    fn norm_study_roundtrip() {
        let rows = vec![
            NormStudyRecord { scheme: Scheme::Oscillator, n: 64, alpha: 2.0 * PI / 3.0, t: 0.5, value: 1.2618, seconds: None },
            NormStudyRecord { scheme: Scheme::Grid, n: 64, alpha: 2.0 * PI / 3.0, t: 0.5, value: 1.2517, seconds: Some(0.25) },
        ];
        let bytes = norm_study_csv(&rows).unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(text.starts_with("scheme,N,alpha,t,value,seconds\n"));
        assert!(!text.contains('\r'));
        assert!(text.contains("oscillator,64,2.09439510239,0.5,1.2618,\n"));
        let dir = std::env::temp_dir().join(format!("arveson-art-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("norm.csv");
        fs::write(&path, bytes).unwrap();
        let back = read_norm_study(&path).unwrap();
        assert_eq!(back[1].seconds, Some(0.25));
        assert_eq!(back[0].scheme, Scheme::Oscillator);
        let sel = select_norm(&back).unwrap();
        assert_eq!(sel.value, 1.2618);
        fs::remove_dir_all(dir).ok();
    }

    #[test]
    fn lemma43_header_is_exact() {
        let text = String::from_utf8(lemma43_csv(&[]).unwrap()).unwrap();
        assert_eq!(text, "n,delta,m,samples,estimate,stderr,mass,mass_stderr,seed\n");
    }
}
