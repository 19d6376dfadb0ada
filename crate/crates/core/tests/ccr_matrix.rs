use std::f64::consts::PI;

use arveson_core::ccr_matrix::*;
use arveson_core::gaussian_algebra::{span_inner, ExpSpan, StepFunction};
use arveson_core::warren_sim::replica_rng;
use arveson_core::Error;
use faer::{c64, Mat};
use rand::Rng;
use statrs::distribution::{ContinuousCDF, Normal};

fn phi(x: f64) -> f64 {
    Normal::standard().cdf(x)
}

#[test]
fn build_pair_rejects_bad_input() {
    assert!(build_pair(Scheme::Oscillator, 1, 0.5, None).is_err());
    assert!(build_pair(Scheme::Oscillator, 8, 0.0, None).is_err());
    assert!(build_pair(Scheme::Grid, 64, 0.5, Some(-1.0)).is_err());
    assert!(symmetric_triple(1).is_err());
}

#[test]
fn oscillator_defect_lives_on_top_vector() {
    let n = 24;
    let pair = build_pair(Scheme::Oscillator, n, 0.8, None).unwrap();
    let d = pair.commutator_defect().unwrap();
    // D e_k = 0 for k < N−1: every column but the last vanishes
    for k in 0..n - 1 {
        let col: f64 = (0..n).map(|i| d[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        assert!(col <= 1e-10, "column {k}: {col}");
    }
    assert!((d[(n - 1, n - 1)] - c64::new(0.0, 2.0 * 0.8 * n as f64)).norm() < 1e-9);
}

#[test]
fn vacuum_second_moments() {
    for t in [0.25, 0.5, 2.0] {
        let osc = build_pair(Scheme::Oscillator, 16, t, None).unwrap();
        let (q2, p2) = osc.vacuum_moments().unwrap();
        assert!((q2 - t).abs() <= 1e-12);
        assert!((p2 - t).abs() <= 1e-12);
        let grid = build_pair(Scheme::Grid, 128, t, None).unwrap();
        let (q2, p2) = grid.vacuum_moments().unwrap();
        assert!((q2 - t).abs() <= GRID_VACUUM_RTOL * t);
        assert!((p2 - t).abs() <= GRID_VACUUM_RTOL * t);
    }
}

#[test]
fn grid_rejects_aliasing() {
    assert!(build_pair(Scheme::Grid, 64, 0.5, Some(2.0)).is_err());
}

#[test]
fn symmetric_triple_structure() {
    for scheme in Scheme::ALL {
        let tr = symmetric_triple_in(scheme, 64).unwrap();
        let sum = tr.p.add(&tr.q).unwrap().add(&tr.r).unwrap();
        assert_eq!(max_abs(sum.as_mat()), 0.0, "{scheme}");
    }
    let tr = symmetric_triple(16).unwrap();
    let pq = commutator(&tr.p, &tr.q).unwrap();
    let qr = commutator(&tr.q, &tr.r).unwrap();
    for c in [&pq, &qr] {
        for i in 0..15 {
            for j in 0..15 {
                let expected = if i == j { c64::new(0.0, -1.0) } else { c64::new(0.0, 0.0) };
                assert!((c[(i, j)] - expected).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn sign_examples() {
    let s = sgn_op(&HermitianMatrix::from_real_diagonal(&[3.0, -2.0])).unwrap();
    assert_eq!(s.as_mat()[(0, 0)], c64::new(1.0, 0.0));
    assert_eq!(s.as_mat()[(1, 1)], c64::new(-1.0, 0.0));
    let mut bad = Mat::<c64>::zeros(2, 2);
    bad[(0, 1)] = c64::new(1.0, 0.0);
    assert!(matches!(sgn_of_matrix(bad), Err(Error::NotHermitian { .. })));
}

#[test]
fn sign_calculus_properties() {
    let pair = build_pair(Scheme::Oscillator, 40, 0.5, None).unwrap();
    let a = pair.q.combine(0.3, &pair.p, -1.7).unwrap();
    let s = sgn_op(&a).unwrap();
    for ev in s.eigenvalues().unwrap() {
        assert!([-1.0, 0.0, 1.0].iter().any(|x| (ev - x).abs() <= 1e-10), "{ev}");
    }
    let scaled = sgn_op(&a.scaled(7.5)).unwrap();
    assert!(max_abs(scaled.combine(1.0, &s, -1.0).unwrap().as_mat()) < 1e-10);
    let comm = commutator(&s, &a).unwrap();
    // Frobenius bounds the operator norm
    assert!(comm.norm_l2() <= 1e-8 * a.spectral_norm().unwrap());
}

fn random_unitary(n: usize, seed: u64) -> Mat<c64> {
    let mut rng = replica_rng(seed, 0);
    let z = Mat::from_fn(n, n, |_, _| c64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    z.qr().compute_Q()
}

#[test]
fn sign_sum_norm_is_unitarily_invariant() {
    let n = 48;
    let tr = symmetric_triple(n).unwrap();
    let u = random_unitary(n, 5);
    let conj = |a: &HermitianMatrix| a.conjugate_by(u.as_ref()).unwrap();
    let rotated = sgn_op(&conj(&tr.p)).unwrap()
        .add(&sgn_op(&conj(&tr.q)).unwrap()).unwrap()
        .add(&sgn_op(&conj(&tr.r)).unwrap()).unwrap();
    let direct = sign_sum_norm(Scheme::Oscillator, n).unwrap();
    assert!((rotated.spectral_norm().unwrap() - direct).abs() <= 1e-8);
}

#[test]
fn cyclic_relabelling_keeps_the_spectrum() {
    let tr = symmetric_triple(32).unwrap();
    let (sp, sq, sr) = (sgn_op(&tr.p).unwrap(), sgn_op(&tr.q).unwrap(), sgn_op(&tr.r).unwrap());
    let a = sp.add(&sq).unwrap().add(&sr).unwrap().eigenvalues().unwrap();
    let b = sq.add(&sr).unwrap().add(&sp).unwrap().eigenvalues().unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn asymmetric_triple_gives_the_same_norm() {
    // (p, q, −p−q) is a CCR triple with the same commutators up to scaling
    // of R; it is unitarily equivalent to the symmetric one in the limit
    let n = 256;
    let pair = build_pair(Scheme::Oscillator, n, 0.5, None).unwrap();
    let r = pair.p.combine(-1.0, &pair.q, -1.0).unwrap();
    let asym = sgn_op(&pair.p).unwrap()
        .add(&sgn_op(&pair.q).unwrap()).unwrap()
        .add(&sgn_op(&r).unwrap()).unwrap()
        .spectral_norm().unwrap();
    let sym = sign_sum_norm(Scheme::Oscillator, n).unwrap();
    assert!((asym - sym).abs() < 0.02, "{asym} vs {sym}");
}

#[test]
fn sign_sum_stays_below_three() {
    for scheme in Scheme::ALL {
        for n in [64, 128, 256] {
            let v = sign_sum_norm(scheme, n).unwrap();
            assert!(v < 3.0, "{scheme} {n}: {v}");
        }
    }
}

#[test]
fn lemma23_special_cases() {
    for scheme in Scheme::ALL {
        let n = 128;
        for t in [0.25, 0.5, 2.0] {
            assert!(lemma23_value(PI, t, n, scheme).unwrap() <= 1.0 + 1e-8);
        }
        let sym = lemma23_value(2.0 * PI / 3.0, 0.5, n, scheme).unwrap();
        assert!((sym - sign_sum_norm(scheme, n).unwrap()).abs() <= 1e-6, "{scheme}");
        let alpha = 2.3;
        let base = lemma23_value(alpha, 0.5, n, scheme).unwrap();
        for t in [0.25, 2.0] {
            assert!((lemma23_value(alpha, t, n, scheme).unwrap() - base).abs() <= 1e-8, "{scheme} {t}");
        }
    }
}

#[test]
fn convergence_study_shrinks_differences() {
    let alpha = 2.0 * PI / 3.0;
    let table = convergence_study(&Scheme::ALL, &[64, 128, 256, 512], &[alpha], 0.5).unwrap();
    assert_eq!(table.rows.len(), 8);
    assert!(table.max_value() < 3.0);
    for scheme in Scheme::ALL {
        let d = table.successive_differences(scheme, alpha);
        assert_eq!(d.len(), 3);
        assert!(d[2] < d[0], "{scheme}: {d:?}");
    }
    assert!(table.cross_scheme_gap(alpha).unwrap() < CROSS_SCHEME_TOL);
}

#[test]
fn coherent_vector_matches_exponential_norm() {
    let (zeta, t) = (c64::new(0.9, -0.4), 0.5);
    let v = coherent_vector(zeta, t, 64).unwrap();
    let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let e = ExpSpan::exp(StepFunction::initial_segment(t, t, zeta).unwrap());
    let oracle = span_inner(&e, &e).unwrap().re;
    assert!((norm2 - oracle).abs() <= 1e-9 * oracle);
}

#[test]
fn coherent_position_mean() {
    let t = 0.5;
    let pair = build_pair(Scheme::Oscillator, 96, t, None).unwrap();
    for zeta in [c64::new(0.0, 0.0), c64::new(0.7, 0.3), c64::new(-1.2, 0.5)] {
        let v = normalized(&coherent_vector(zeta, t, 96).unwrap()).unwrap();
        let mean = pair.q.expectation(&v).unwrap();
        assert!((mean - 2.0 * t * zeta.re).abs() <= 1e-8, "{zeta}: {mean}");
    }
}

#[test]
fn coherent_sign_expectation_matches_gaussian_cdf() {
    let t = 0.5;
    let pair = build_pair(Scheme::Oscillator, 512, t, None).unwrap();
    let sq = sgn_op(&pair.q).unwrap();
    let vac = pair.vacuum();
    assert!(sign_expectation(&sq, &vac).unwrap().abs() < 1e-12);
    for zeta in [0.25, 0.5, 1.0, 2.0] {
        let raw = coherent_vector(c64::new(zeta, 0.0), t, 512).unwrap();
        let norm2: f64 = raw.iter().map(|z| z.norm_sqr()).sum();
        let unnormalized = sign_expectation(&sq, &raw).unwrap();
        assert!(unnormalized.abs() <= norm2 * (1.0 + 1e-12));
        let got = unnormalized / norm2;
        let oracle = 2.0 * phi(2.0 * zeta * t.sqrt()) - 1.0;
        assert!((got - oracle).abs() <= 1e-3, "{zeta}: {got} vs {oracle}");
    }
}
