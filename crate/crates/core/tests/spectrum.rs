use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slocc_core::spectrum::spec_file::SpectrumSpec;
use slocc_core::spectrum::{AmplitudeMatrix, MomentResult};
use slocc_core::{DecayClass, SchmidtSpectrum, TailBudget};

fn zeta(s: f64) -> f64 {
    // partial sum plus Euler–Maclaurin correction
    let n = 100_000u32;
    let head: f64 = (1..n).map(|k| (k as f64).powf(-s)).sum();
    let x = n as f64;
    head + x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s) + s / 12.0 * x.powf(-s - 1.0)
}

#[test]
fn geometric_closed_forms() {
    let g = SchmidtSpectrum::geometric(0.5).unwrap();
    let b = TailBudget::default();
    for k in 1..40 {
        let t = g.rank_tail(k, &b);
        assert_eq!(t.lower, 0.25f64.powi(k as i32 - 1));
        assert_eq!(t.lower, t.upper);
        assert!((g.rank_coefficient(k) - 0.75 * 0.25f64.powi(k as i32 - 1)).abs() < 1e-16);
    }
}

#[test]
fn power_law_against_independent_zeta() {
    let p = SchmidtSpectrum::power_law(0.4).unwrap();
    let z = zeta(2.5);
    assert!((p.rank_coefficient(1) - 1.0 / z).abs() < 1e-12);
    let b = TailBudget::default();
    for k in [1usize, 2, 10, 1000, 1_000_000] {
        let direct = 1.0 - (1..k).map(|n| (n as f64).powf(-2.5)).sum::<f64>() / z;
        let t = p.rank_tail(k, &b);
        assert!(t.lower <= direct + 1e-11 && direct - 1e-11 <= t.upper, "k = {k}: {t:?} vs {direct}");
    }
}

#[test]
fn log_power_far_tails_are_certified_and_ordered() {
    let l = SchmidtSpectrum::log_power(2.0).unwrap();
    let b = TailBudget::default();
    let mut last = f64::INFINITY;
    for k in [10usize, 1000, 1_000_000, 1_000_000_000] {
        let (lo, hi) = l.ln_rank_tail(k, &b);
        assert!(lo <= hi && hi < last);
        last = lo;
    }
    assert!((l.rank_tail(1, &b).mid() - 1.0).abs() < 1e-9);
}

#[test]
fn tensor_product_matches_sorted_outer_product() {
    let a = SchmidtSpectrum::geometric(0.7).unwrap();
    let c = SchmidtSpectrum::power_law(0.5).unwrap();
    let t = SchmidtSpectrum::tensor(&a, &c);
    let mut brute: Vec<f64> = (1..=400)
        .flat_map(|i| {
            let ai = a.rank_coefficient(i);
            (1..=400).map(move |j| (ai, j))
        })
        .map(|(ai, j)| ai * c.rank_coefficient(j))
        .collect();
    brute.sort_by(|x, y| y.partial_cmp(x).unwrap());
    // the window only contains the true top entries down to ~coefficient(400)
    let head = t.head(200);
    for (k, (h, b)) in head.iter().zip(&brute).enumerate() {
        assert!((h - b).abs() <= 1e-15, "rank {}: {h} vs {b}", k + 1);
    }
    assert_eq!(t.decay_class(), DecayClass::Polynomial { exponent: 1.0 });
}

#[test]
fn tensor_power_of_finite_state() {
    let f = SchmidtSpectrum::finite(vec![0.75, 0.25]).unwrap();
    let t = SchmidtSpectrum::tensor_power(&f, 3).unwrap();
    assert_eq!(t.support(), Some(8));
    let h = t.head(8);
    let expect = [27.0, 9.0, 9.0, 9.0, 3.0, 3.0, 3.0, 1.0].map(|v| v / 64.0);
    for (a, b) in h.iter().zip(expect) {
        assert!((a - b).abs() < 1e-16);
    }
}

#[test]
fn truncation_renormalizes() {
    let g = SchmidtSpectrum::geometric(0.5).unwrap();
    let t = SchmidtSpectrum::truncated(&g, 3).unwrap();
    let h = t.head(4);
    let norm = 0.75 * (1.0 + 0.25 + 0.0625);
    assert!((h[0] - 0.75 / norm).abs() < 1e-15);
    assert_eq!(h[3], 0.0);
    assert_eq!(t.support(), Some(3));
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(SchmidtSpectrum::geometric(1.0).is_err());
    assert!(SchmidtSpectrum::geometric(0.0).is_err());
    assert!(SchmidtSpectrum::power_law(1.0).is_err());
    assert!(SchmidtSpectrum::log_power(1.0).is_err());
    assert!(SchmidtSpectrum::finite(vec![0.5, 0.6]).is_err());
    assert!(SchmidtSpectrum::finite(vec![1.5, -0.5]).is_err());
}

#[test]
fn moments() {
    let g = SchmidtSpectrum::geometric(0.5).unwrap();
    // Σ n λ_n for λ_n = (1-q²) q^{2(n-1)} is 1/(1-q²)
    match g.mean_moment(1).unwrap() {
        MomentResult::Finite { lower, upper, .. } => assert!(lower <= 4.0 / 3.0 + 1e-12 && 4.0 / 3.0 - 1e-12 <= upper),
        other => panic!("{other:?}"),
    }
    let p = SchmidtSpectrum::power_law(0.4).unwrap();
    match p.mean_moment(1).unwrap() {
        MomentResult::Finite { value, .. } => assert!((value - zeta(1.5) / zeta(2.5)).abs() < 1e-6),
        other => panic!("{other:?}"),
    }
    assert!(matches!(p.mean_moment(2).unwrap(), MomentResult::Divergent(_)));
}

#[test]
fn spec_json_round_trip() {
    let specs = [
        r#"{"kind":"geometric","q":0.5}"#,
        r#"{"kind":"power_law","r":0.3}"#,
        r#"{"kind":"tensor_power","base":{"kind":"geometric","q":0.6},"copies":2}"#,
        r#"{"kind":"concentrated","base":{"kind":"finite","values":[0.5,0.3,0.2]},"p":0.5}"#,
    ];
    for text in specs {
        let spec = SpectrumSpec::from_json(text).unwrap();
        assert_eq!(spec.to_json(), text);
        let s = spec.build().unwrap();
        assert_eq!(s.to_spec().unwrap(), spec);
    }
    let err = SpectrumSpec::from_json("{\"kind\":\"geometric\",\n \"q\":}").unwrap_err();
    assert!(matches!(err, slocc_core::Error::Parse { line: 2, .. }), "{err}");
    assert!(SpectrumSpec::from_json(r#"{"kind":"geometric","q":0.5,"extra":1}"#).is_err());
}

/// Eigenvalues of `ψ ψ†`, the reduced density matrix.
fn reduced_density_eigenvalues(rows: usize, cols: usize, data: &[Complex64]) -> Vec<f64> {
    let m = DMatrix::from_row_slice(rows, cols, data);
    let rho = &m * m.adjoint();
    let norm: f64 = rho.trace().re;
    let mut ev: Vec<f64> = rho.symmetric_eigenvalues().iter().map(|v| v / norm).collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ev
}

#[test]
fn svd_matches_reduced_density() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..25 {
        let (r, c) = (rng.gen_range(1..=9), rng.gen_range(1..=9));
        let data: Vec<Complex64> = (0..r * c)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let s = SchmidtSpectrum::from_amplitude_matrix(&AmplitudeMatrix::new(r, c, data.clone()).unwrap()).unwrap();
        let ev = reduced_density_eigenvalues(r, c, &data);
        let head = s.head(ev.len());
        for (a, b) in head.iter().zip(&ev) {
            assert!((a - b.max(0.0)).abs() < 1e-10, "{a} vs {b}");
        }
    }
}

#[test]
fn product_states_have_rank_one() {
    let u = [1.0, 2.0, -1.0];
    let v = [0.5, 0.5];
    let rows: Vec<Vec<f64>> = u.iter().map(|a| v.iter().map(|b| a * b).collect()).collect();
    let s = SchmidtSpectrum::from_amplitude_matrix(&AmplitudeMatrix::from_real(&rows).unwrap()).unwrap();
    assert_eq!(s.support(), Some(1));
    assert_eq!(s.rank_coefficient(1), 1.0);
}

#[test]
fn degenerate_matrices_are_rejected() {
    assert!(AmplitudeMatrix::from_real(&[]).is_err());
    assert!(AmplitudeMatrix::from_real(&[vec![1.0, 0.0], vec![1.0]]).is_err());
    assert!(AmplitudeMatrix::from_real(&[vec![f64::NAN]]).is_err());
    let zero = AmplitudeMatrix::from_real(&[vec![0.0, 0.0]]).unwrap();
    assert!(SchmidtSpectrum::from_amplitude_matrix(&zero).is_err());
}

proptest! {
    #[test]
    fn finite_spectra_are_sorted_and_normalized(w in prop::collection::vec(0.0f64..1.0, 1..30)) {
        prop_assume!(w.iter().any(|v| *v > 1e-6));
        let s = SchmidtSpectrum::from_weights(&w).unwrap();
        let n = s.support().unwrap();
        let h = s.head(n);
        prop_assert!(h.windows(2).all(|p| p[0] >= p[1]));
        prop_assert!((h.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let b = TailBudget::default();
        for k in 1..=n {
            let t = s.rank_tail(k, &b);
            let direct: f64 = h[k - 1..].iter().sum();
            prop_assert!((t.mid() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn tails_are_nonincreasing(q in 0.05f64..0.95, r in 0.05f64..0.95, k in 1usize..500) {
        let b = TailBudget::default();
        for s in [SchmidtSpectrum::geometric(q).unwrap(), SchmidtSpectrum::power_law(r).unwrap()] {
            let (a, c) = (s.rank_tail(k, &b), s.rank_tail(k + 1, &b));
            prop_assert!(c.lower <= a.upper);
            let gap = a.mid() - c.mid();
            prop_assert!((gap - s.rank_coefficient(k)).abs() <= 1e-12 + a.width() + c.width());
        }
    }
}
