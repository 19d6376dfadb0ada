use std::f64::consts::{FRAC_PI_2, PI};
use std::fs;
use std::path::{Path, PathBuf};

use arveson_core::artifacts::{
    fmt_sig12, lemma43_csv, norm_study_csv, read_lemma43, read_norm_study, select_norm,
    to_json_bytes, NormStudyRecord,
};
use arveson_core::ccr_matrix::{convergence_study, Scheme};
use arveson_core::gaussian_algebra::{relation_suite, RELATION_TOL};
use arveson_core::warren_sim::{
    lemma43_table, obstruction_report, quad_form_C, select_lemma43_row, validate_lemma43,
    ConstantFunctional, McConfig, SuperchaosVector, Weight,
};
use arveson_core::Error;
use serde::Serialize;

use crate::config::{parse_real, Format, Resolved, Settings};
use crate::CliError;

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

fn validation(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

fn mc_config(r: &Resolved) -> Result<McConfig, CliError> {
    let m = r.positive_usize("m")?;
    let samples = r.positive_usize("samples")?;
    let seed: u64 = r.get("seed")?;
    McConfig::new(m, samples, seed).map_err(validation)
}

/// The catalog profile on `[0, 1/2)`: `w` or `w·sgn(B_1 − B_{1/2})`.
fn profile(r: &Resolved) -> Result<SuperchaosVector, CliError> {
    let weight = Weight::indicator(0.0, 0.5).map_err(validation)?;
    match r.opt("profile").unwrap_or("w") {
        "w" => Ok(SuperchaosVector::w(weight)),
        "ws" => SuperchaosVector::ws(weight, 0.5, 1.0).map_err(validation),
        other => Err(CliError::Validation(format!("--profile: expected w or ws, got {other:?}"))),
    }
}

pub fn norm_study(s: &Settings) -> Result<String, CliError> {
    let r = Resolved(s);
    let schemes = r.schemes()?;
    let dims = r.list("dims", |x| x.parse::<usize>().ok().filter(|&n| n >= 2))?;
    if dims.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Validation("--dims must be strictly ascending".into()));
    }
    let alphas = r.list("alpha", parse_real)?;
    if let Some(a) = alphas.iter().find(|&&a| !(a > FRAC_PI_2 && a <= PI)) {
        return Err(CliError::Validation(format!("--alpha {a} outside (π/2, π]")));
    }
    let t = r.positive_f64("t")?;
    let timing = r.bool("timing")?;
    let format = r.format()?;
    let out = r.out_path("norm_study", format);

    let table = convergence_study(&schemes, &dims, &alphas, t).map_err(|e| match e {
        Error::InvalidParameter { .. } => validation(e),
        e => runtime(e),
    })?;
    let records = NormStudyRecord::from_table(&table, timing);
    let bytes = match format {
        Format::Csv => norm_study_csv(&records),
        Format::Json => to_json_bytes(&records),
    }
    .map_err(runtime)?;
    write(&out, &bytes)?;
    let top = records
        .iter()
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .expect("nonempty study");
    let mut summary = format!(
        "norm-study: {} rows, max value {} ({} N={} alpha={})",
        records.len(),
        fmt_sig12(top.value),
        top.scheme,
        top.n,
        fmt_sig12(top.alpha)
    );
    if schemes.contains(&Scheme::Oscillator) && schemes.contains(&Scheme::Grid) {
        if let Some(gap) = table.cross_scheme_gap(alphas[0]) {
            summary.push_str(&format!(", scheme gap {gap:.2e}"));
        }
    }
    Ok(format!("{summary} -> {}", out.display()))
}

pub fn weyl_suite(s: &Settings) -> Result<String, CliError> {
    let r = Resolved(s);
    let seed: u64 = r.get("seed")?;
    let format = r.format()?;
    let out = r.out_path("weyl_suite", format);
    let report = relation_suite(seed).map_err(runtime)?;
    let bytes = match format {
        Format::Json => to_json_bytes(&report).map_err(runtime)?,
        Format::Csv => {
            let mut text = String::from("relation,trials,max_residual\n");
            for row in &report.rows {
                text.push_str(&format!("{},{},{}\n", row.relation, row.trials, fmt_sig12(row.max_residual)));
            }
            text.into_bytes()
        }
    };
    write(&out, &bytes)?;
    let max = report.max_residual();
    if !report.all_within(RELATION_TOL) {
        return Err(runtime(format!(
            "weyl-suite: max residual {max:.3e} exceeds {RELATION_TOL:e} (report in {})",
            out.display()
        )));
    }
    Ok(format!("weyl-suite: max residual {max:.3e} <= {RELATION_TOL:e} -> {}", out.display()))
}

#[derive(Serialize)]
struct MassRecord {
    profile: String,
    m: usize,
    samples: usize,
    seed: u64,
    mass: f64,
    mass_stderr: f64,
    relative_stderr: f64,
}

pub fn warren_mass(s: &Settings) -> Result<String, CliError> {
    let r = Resolved(s);
    let cfg = mc_config(&r)?;
    let f = profile(&r)?;
    f.check_alignment(cfg.m).map_err(validation)?;
    let format = r.format()?;
    let out = r.out_path("warren_mass", format);
    let est = quad_form_C(&ConstantFunctional(1.0), &f, &cfg).map_err(runtime)?;
    let record = MassRecord {
        profile: r.opt("profile").unwrap_or("w").to_string(),
        m: cfg.m,
        samples: cfg.samples,
        seed: cfg.seed,
        mass: est.mean,
        mass_stderr: est.stderr,
        relative_stderr: est.stderr / est.mean,
    };
    let bytes = match format {
        Format::Json => to_json_bytes(&record).map_err(runtime)?,
        Format::Csv => format!(
            "profile,m,samples,seed,mass,mass_stderr,relative_stderr\n{},{},{},{},{},{},{}\n",
            record.profile,
            record.m,
            record.samples,
            record.seed,
            fmt_sig12(record.mass),
            fmt_sig12(record.mass_stderr),
            fmt_sig12(record.relative_stderr)
        )
        .into_bytes(),
    };
    write(&out, &bytes)?;
    Ok(format!(
        "warren-mass: mass {} ± {} -> {}",
        fmt_sig12(est.mean),
        fmt_sig12(est.stderr),
        out.display()
    ))
}

pub fn lemma43(s: &Settings) -> Result<String, CliError> {
    let r = Resolved(s);
    let cfg = mc_config(&r)?;
    let f = profile(&r)?;
    let n_list = r.list("n-list", |x| x.parse::<usize>().ok().filter(|&n| n > 0))?;
    let delta_list = r.list("delta-list", parse_real)?;
    let format = r.format()?;
    let out = r.out_path("lemma43", format);
    validate_lemma43(&f, &n_list, &delta_list, cfg.m).map_err(validation)?;

    let rows = lemma43_table(&f, &n_list, &delta_list, &cfg).map_err(runtime)?;
    let bytes = match format {
        Format::Csv => lemma43_csv(&rows),
        Format::Json => to_json_bytes(&rows),
    }
    .map_err(runtime)?;
    write(&out, &bytes)?;
    let best = select_lemma43_row(&rows).expect("nonempty table");
    Ok(format!(
        "lemma43: {} rows, normalized estimate {} at n={} delta={} -> {}",
        rows.len(),
        fmt_sig12(best.normalized()),
        best.n,
        fmt_sig12(best.delta),
        out.display()
    ))
}

pub fn obstruction(s: &Settings) -> Result<String, CliError> {
    let r = Resolved(s);
    let required = |key: &str| {
        r.opt(key)
            .map(PathBuf::from)
            .ok_or_else(|| CliError::Validation(format!("--{key} is required")))
    };
    let norm_path = required("norm-from")?;
    let lemma_path = required("lemma43-from")?;
    if r.format()? != Format::Json && r.opt("format").is_some() {
        return Err(CliError::Validation("obstruction writes JSON only".into()));
    }
    let out = r.out_path("obstruction", Format::Json);

    let norm = select_norm(&read_norm_study(&norm_path).map_err(runtime)?).map_err(runtime)?;
    let rows = read_lemma43(&lemma_path).map_err(runtime)?;
    let mass = select_lemma43_row(&rows)
        .ok_or_else(|| runtime(format!("{}: no rows", lemma_path.display())))?
        .mass;
    let report = obstruction_report(norm, &rows, mass).map_err(runtime)?;
    write(&out, &to_json_bytes(&report).map_err(runtime)?)?;
    Ok(format!(
        "obstruction: margin {} (m_hat {}, norm {}) -> {}",
        fmt_sig12(report.margin),
        fmt_sig12(report.m_hat),
        fmt_sig12(report.norm_value),
        out.display()
    ))
}
