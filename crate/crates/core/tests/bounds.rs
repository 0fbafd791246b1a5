use mlosc_core::bounds::{
    default_theorem4_families, fit_decay, log_grid, odd_pi_multiples, verify_corollary1, verify_lemma1, verify_lemma2,
    verify_prop1, verify_theorem1, verify_theorem2, verify_theorem3, verify_theorem4, BoundReport, CubicFamily,
    FamilyKind, TheoremId, Verdict, DEFAULT_TOL, THM3_SCALE,
};
use mlosc_core::polynomials::{BinaryCubic, MultiIndex, PolyPhase};
use mlosc_core::quadrature::Amplitude;
use mlosc_core::special::{gamma, MLParams};
use mlosc_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ml(a: f64, b: f64) -> MLParams {
    MLParams::new(a, b).unwrap()
}

fn check_invariants(r: &BoundReport) {
    assert!(!r.rows.is_empty());
    assert_eq!(r.c_fit, r.row_max());
    for row in &r.rows {
        assert_eq!(row.params.len(), r.param_names.len());
        assert_eq!(row.ratio, row.measured / row.rhs);
    }
}

#[test]
fn fit_recovers_noisy_power_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pts: Vec<(f64, f64)> = log_grid(1.0, 1e4, 10)
        .unwrap()
        .into_iter()
        .map(|t| (t, t.powf(-0.5) * (1.0 + 0.01 * rng.gen_range(-1.0..1.0))))
        .collect();
    let f = fit_decay(&pts).unwrap();
    assert!((-0.52..=-0.48).contains(&f.slope));
    assert!(f.r_squared > 0.99 && f.r_squared <= 1.0);
}

#[test]
fn prop1_sweep() {
    let r = verify_prop1(&[ml(0.5, 1.0), ml(0.9, 0.5)], 1.0, 1e6, 24).unwrap();
    check_invariants(&r);
    assert_eq!(r.verdict, Verdict::Bounded);
    assert!(r.c_fit.is_finite() && r.drift < 0.05);
    let zero = &r.rows[0];
    assert_eq!(zero.params[2], 0.0);
    assert!((zero.ratio - 1.0 / gamma(1.0).unwrap()).abs() < 1e-15);
    assert!(matches!(
        verify_prop1(&[ml(1.2, 1.0)], 1.0, 1e3, 8),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn theorem1_sweep() {
    let mus: Vec<f64> = log_grid(1e-4, 1e-1, 4).unwrap();
    let x3 = PolyPhase::monomial(1.0, vec![3]).unwrap();
    let r = verify_theorem1(&x3, &MultiIndex::single(3), &mus, 2048).unwrap();
    check_invariants(&r);
    assert_eq!(r.verdict, Verdict::Bounded);
    assert!((r.slope_fit.unwrap() - 1.0 / 3.0).abs() < 0.05);
}

#[test]
fn corollary1_matches_closed_form() {
    let r = verify_corollary1(40, 1e-9).unwrap();
    check_invariants(&r);
    for row in &r.rows {
        let mu = row.params[0];
        let exact = 2.0 * (0.5 * mu).sin().abs() / mu;
        assert!((row.measured - exact).abs() < 1e-8);
    }
    assert!((r.c_fit - 2.0).abs() < 0.1);
    assert_eq!(r.verdict, Verdict::Bounded);
}

#[test]
fn lemma1_slopes_and_preconditions() {
    let mus = log_grid(10.0, 1e5, 6).unwrap();
    for d in [2u32, 3] {
        let a0 = PolyPhase::monomial(1.0, vec![d]).unwrap();
        let r = verify_lemma1(&a0, &MultiIndex::single(d), ml(0.6, 1.0), &mus, DEFAULT_TOL).unwrap();
        check_invariants(&r);
        let s = r.slope_fit.unwrap();
        assert!(s <= -1.0 / d as f64 + 0.1, "d = {d}: slope {s}");
        assert_eq!(r.verdict, Verdict::Bounded, "d = {d}: {:?}", r.notes);
    }
    let big = PolyPhase::monomial(2.0, vec![2]).unwrap();
    assert!(matches!(
        verify_lemma1(&big, &MultiIndex::single(2), ml(0.6, 1.0), &mus, DEFAULT_TOL),
        Err(Error::Precondition(_))
    ));
    let lin = PolyPhase::monomial(1.0, vec![1]).unwrap();
    assert!(verify_lemma1(&lin, &MultiIndex::single(1), ml(0.6, 1.0), &mus, DEFAULT_TOL).is_err());
}

#[test]
fn theorem2_classical_ray() {
    let x = PolyPhase::monomial(1.0, vec![1]).unwrap();
    let mus = odd_pi_multiples(30);
    let r = verify_theorem2(MLParams::classical(), &Amplitude::one(), &[x], &mus, 1e-9).unwrap();
    check_invariants(&r.by_degree);
    assert!((r.by_degree.c_fit - 2.0).abs() < 0.1);
    assert_eq!(r.by_degree.verdict, Verdict::Bounded);
}

#[test]
fn theorem2_exponents() {
    let mus = log_grid(10.0, 1e5, 6).unwrap();
    let fams = [
        PolyPhase::monomial(1.0, vec![2]).unwrap(),
        PolyPhase::monomial(1.0, vec![3]).unwrap(),
    ];
    let r = verify_theorem2(ml(0.5, 1.0), &Amplitude::one(), &fams, &mus, DEFAULT_TOL).unwrap();
    assert_eq!(r.by_degree.verdict, Verdict::Bounded);
    assert_eq!(r.by_alpha.verdict, Verdict::Unstable);
    for (g, m) in r.alpha_growth.iter().zip(&r.alpha_monotone) {
        assert!(*g >= 10.0 && *m);
    }
    assert!(verify_theorem2(ml(1.5, 1.0), &Amplitude::one(), &fams, &mus, DEFAULT_TOL).is_err());
}

#[test]
fn theorem3_both_cases() {
    let r = verify_theorem3(0.45, 9, THM3_SCALE, DEFAULT_TOL).unwrap();
    check_invariants(&r);
    assert_eq!(r.theorem, TheoremId::Thm3Case1);
    assert_eq!(r.verdict, Verdict::Bounded, "{:?} drift {}", r.notes, r.drift);
    let r = verify_theorem3(0.75, 9, THM3_SCALE, DEFAULT_TOL).unwrap();
    check_invariants(&r);
    assert_eq!(r.theorem, TheoremId::Thm3Case2);
    assert_eq!(r.verdict, Verdict::Bounded, "{:?} drift {}", r.notes, r.drift);
    assert!(matches!(
        verify_theorem3(0.2, 9, 6.0, DEFAULT_TOL),
        Err(Error::CaseRouting(_))
    ));
}

#[test]
fn theorem4_defaults() {
    let r = verify_theorem4(
        &default_theorem4_families(),
        ml(0.5, 1.0),
        &Amplitude::one(),
        DEFAULT_TOL,
    )
    .unwrap();
    check_invariants(&r);
    assert_eq!(r.verdict, Verdict::Bounded, "{:?} drift {}", r.notes, r.drift);
    let degenerate = CubicFamily {
        name: "zero".into(),
        members: vec![
            (0.0, BinaryCubic::new(1.0, 1.0, 1.0, 1.0).unwrap()),
            (0.0, BinaryCubic::new(1.0, 0.0, 1.0, 0.0).unwrap()),
        ],
        kind: FamilyKind::Fixed,
    };
    let r = verify_theorem4(&[degenerate], ml(0.5, 1.0), &Amplitude::one(), DEFAULT_TOL).unwrap();
    assert_eq!(r.skipped, 1);
    assert_eq!(r.rows.len(), 1);
}

#[test]
fn lemma2_grid() {
    let r = verify_lemma2(9, 6.0, false, DEFAULT_TOL).unwrap();
    check_invariants(&r);
    assert_eq!(r.rows.len(), 80);
    let r = verify_lemma2(9, 6.0, true, DEFAULT_TOL).unwrap();
    assert_eq!(r.verdict, Verdict::Bounded, "{:?} drift {}", r.notes, r.drift);
    assert!(r.c_fit.is_finite());
}
