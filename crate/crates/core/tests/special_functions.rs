use mlosc_core::special::{gamma, mittag_leffler, ml_decay_ratio, MLParams, MittagLeffler};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Composite Simpson on [a, b] with n (even) intervals.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

/// Dawson's integral D(y) = e^{-y²} ∫₀^y e^{t²} dt.
fn dawson(y: f64) -> f64 {
    if y < 0.0 {
        return -dawson(-y);
    }
    if y > 10.0 {
        // 1/(2y) Σ (2k-1)!! / (2y²)^k
        let x2 = 2.0 * y * y;
        let (mut term, mut sum) = (1.0, 1.0);
        for k in 1..40 {
            term *= (2 * k - 1) as f64 / x2;
            sum += term;
        }
        return sum / (2.0 * y);
    }
    // ∫₀^y exp(-s(2y - s)) ds
    simpson(|s| (-s * (2.0 * y - s)).exp(), 0.0, y, 40_000)
}

/// E_{1/2,1}(iy) = e^{-y²} + (2i/√π) D(y).
fn ml_half_imag(y: f64) -> Complex64 {
    c((-y * y).exp(), 2.0 / std::f64::consts::PI.sqrt() * dawson(y))
}

/// Direct summation of Σ z^k / k! in extended steps (small |z| only).
fn brute_exp(z: Complex64) -> Complex64 {
    let mut term = c(1.0, 0.0);
    let mut sum = term;
    for k in 1..200 {
        term = term * z / k as f64;
        sum += term;
    }
    sum
}

#[test]
fn gamma_examples() {
    assert_eq!(gamma(1.0).unwrap(), 1.0);
    assert_eq!(gamma(5.0).unwrap(), 24.0);
    // Γ(1/2) = ∫₀^∞ t^{-1/2} e^{-t} dt = 2 ∫₀^∞ e^{-u²} du
    let oracle = 2.0 * simpson(|u| (-u * u).exp(), 0.0, 10.0, 1_000_000);
    let g = gamma(0.5).unwrap();
    assert!((g - oracle).abs() < 1e-12 * oracle, "{g} vs {oracle}");
    assert!((g - 1.77245385090552).abs() < 1e-13);
    assert!(gamma(0.0).is_err());
    assert!(gamma(-2.0).is_err());
    assert!(gamma(172.0).is_err());
}

#[test]
fn gamma_relative_error_on_integers() {
    let mut fact = 1.0f64;
    for n in 1..=170u32 {
        let g = gamma(n as f64).unwrap();
        assert!(((g - fact) / fact).abs() <= 1e-12, "Γ({n})");
        fact *= n as f64;
    }
}

#[test]
fn mittag_leffler_examples() {
    let e = mittag_leffler(MLParams::new(1.0, 1.0).unwrap(), c(1.0, 0.0)).unwrap();
    assert!((e.re - std::f64::consts::E).abs() < 1e-14 && e.im == 0.0);
    let e = mittag_leffler(MLParams::new(0.7, 1.3).unwrap(), c(0.0, 0.0)).unwrap();
    assert!((e.re - 1.0 / gamma(1.3).unwrap()).abs() < 1e-15);
    let e = mittag_leffler(MLParams::new(1.0, 2.0).unwrap(), c(2.0, 0.0)).unwrap();
    assert!((e.re - ((2f64).exp() - 1.0) / 2.0).abs() < 1e-13);
}

fn disc_grid() -> Vec<Complex64> {
    // 64 points with |z| <= 10
    let mut pts = Vec::new();
    for i in 0..8 {
        for j in 0..8 {
            let r = 10.0 * (i as f64 + 1.0) / 8.0;
            let th = 2.0 * std::f64::consts::PI * (j as f64 + 0.3) / 8.0;
            pts.push(Complex64::from_polar(r, th));
        }
    }
    pts
}

#[test]
fn exponential_identities_on_disc() {
    let e11 = MittagLeffler::new(MLParams::new(1.0, 1.0).unwrap());
    let e12 = MittagLeffler::new(MLParams::new(1.0, 2.0).unwrap());
    for z in disc_grid() {
        let want = z.exp();
        let got = e11.eval(z).unwrap();
        assert!((got - want).norm() <= 1e-10 * want.norm(), "E11({z})");
        let lhs = e12.eval(z).unwrap() * z;
        let rhs = want - 1.0;
        assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm(), "E12({z})");
    }
    // the exp oracle itself against direct summation
    for z in disc_grid().into_iter().filter(|z| z.norm() <= 5.0) {
        assert!((brute_exp(z) - z.exp()).norm() <= 1e-14 * z.exp().norm().max(1.0));
    }
}

#[test]
fn value_at_zero_is_reciprocal_gamma() {
    for &(a, b) in &[(0.1, 0.2), (0.5, 1.0), (0.9, 3.7), (1.5, 0.4), (1.99, 10.0)] {
        let e = mittag_leffler(MLParams::new(a, b).unwrap(), c(0.0, 0.0)).unwrap();
        assert!((e.re - 1.0 / gamma(b).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn half_order_on_imaginary_axis_matches_dawson() {
    let ml = MittagLeffler::new(MLParams::new(0.5, 1.0).unwrap());
    let mut y = 0.0;
    while y <= 200.0 {
        let want = ml_half_imag(y);
        let got = ml.eval_imag(y).unwrap();
        assert!((got - want).norm() <= 1e-10 * want.norm(), "y = {y}: {got} vs {want}");
        y += 0.173;
    }
    for &y in &[1e3, 1e4, 1e6] {
        let want = ml_half_imag(y);
        let got = ml.eval_imag(y).unwrap();
        assert!((got - want).norm() <= 1e-10 * want.norm(), "y = {y}");
    }
}

#[test]
fn decay_ratio_examples() {
    let p = MLParams::new(0.5, 1.0).unwrap();
    assert_eq!(ml_decay_ratio(p, c(0.0, 0.0)).unwrap(), 1.0);
    assert!(ml_decay_ratio(p, c(0.0, 1e4)).unwrap().is_finite());
    let z = Complex64::from_polar(1.0, std::f64::consts::PI * 0.5 / 4.0);
    assert!(ml_decay_ratio(p, z).is_err());
}

fn sup_ratio(ml: &MittagLeffler, points: usize) -> f64 {
    (0..points)
        .map(|i| {
            let t = 10f64.powf(6.0 * i as f64 / (points - 1) as f64);
            let v = ml.eval_imag(t).unwrap();
            v.norm() * (1.0 + t)
        })
        .fold(0.0, f64::max)
}

#[test]
fn decay_ratio_sup_is_stable() {
    let ml = MittagLeffler::new(MLParams::new(0.5, 1.0).unwrap());
    let coarse = sup_ratio(&ml, 100);
    let fine = sup_ratio(&ml, 199);
    assert!(coarse.is_finite());
    assert!(((fine - coarse) / coarse).abs() < 0.05, "{coarse} vs {fine}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn conjugation_symmetry(a in 0.05f64..1.95, b in 0.05f64..5.0, re in -30.0f64..30.0, im in -30.0f64..30.0) {
        let z = c(re, im);
        // keep e^{z^{1/α}} representable
        prop_assume!(z.norm().powf(1.0 / a) < 600.0);
        let ml = MittagLeffler::new(MLParams::new(a, b).unwrap());
        let v = ml.eval(z).unwrap();
        let w = ml.eval(z.conj()).unwrap();
        prop_assert_eq!(v.conj(), w);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn imaginary_axis_agrees_with_general_path(a in 0.05f64..0.99, b in 0.1f64..3.0, y in -60.0f64..60.0) {
        let ml = MittagLeffler::new(MLParams::new(a, b).unwrap());
        let v = ml.eval_imag(y).unwrap();
        let w = ml.eval(c(1e-300, y)).unwrap();
        prop_assert!((v - w).norm() <= 1e-9 * v.norm().max(1e-3), "{} vs {}", v, w);
    }
}
