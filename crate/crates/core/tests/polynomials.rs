use mlosc_core::polynomials::{
    binary_discriminant, depressed_cubic_roots, depressed_discriminant, reduce_homogeneous_cubic, BinaryCubic,
    MultiIndex, PolyPhase,
};
use proptest::prelude::*;

fn naive_eval(terms: &[(Vec<u32>, f64)], x: &[f64]) -> f64 {
    terms
        .iter()
        .map(|(e, c)| c * e.iter().zip(x).map(|(&k, &v)| v.powi(k as i32)).product::<f64>())
        .sum()
}

fn naive_abs_sum(terms: &[(Vec<u32>, f64)], x: &[f64]) -> f64 {
    terms
        .iter()
        .map(|(e, c)| (c * e.iter().zip(x).map(|(&k, &v)| v.powi(k as i32)).product::<f64>()).abs())
        .sum()
}

/// Random polynomial: dimension 1..=3, total degree <= 6.
fn poly_strategy() -> impl Strategy<Value = (usize, Vec<(Vec<u32>, f64)>)> {
    (1usize..=3).prop_flat_map(|n| {
        let term = (proptest::collection::vec(0u32..=6, n), -5.0f64..5.0)
            .prop_filter_map("degree", |(e, c)| (e.iter().sum::<u32>() <= 6).then_some((e, c)));
        (Just(n), proptest::collection::vec(term, 1..8))
    })
}

fn build(n: usize, terms: &[(Vec<u32>, f64)]) -> PolyPhase {
    PolyPhase::new(n, 6, terms.iter().map(|(e, c)| (MultiIndex::new(e.clone()), *c))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eval_matches_monomial_sum((n, terms) in poly_strategy(), x in proptest::collection::vec(-1.5f64..1.5, 3)) {
        let p = build(n, &terms);
        let x = &x[..n];
        let got = p.eval(x).unwrap();
        let want = naive_eval(&terms, x);
        // relative to the size of the summands, which bounds rounding in either form
        let scale = naive_abs_sum(&terms, x).max(1e-300);
        prop_assert!((got - want).abs() <= 1e-12 * scale.max(want.abs()), "{} vs {}", got, want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn derivative_matches_central_differences(
        (n, terms) in poly_strategy(),
        x in proptest::collection::vec(-1.0f64..1.0, 3),
        axis in 0usize..3,
    ) {
        let p = build(n, &terms);
        let axis = axis % n;
        let mut k = vec![0u32; n];
        k[axis] = 1;
        let d = p.partial_derivative(&MultiIndex::new(k)).unwrap();
        let x = &x[..n];
        let h = 1e-5;
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[axis] += h;
        xm[axis] -= h;
        let fd = (p.eval(&xp).unwrap() - p.eval(&xm).unwrap()) / (2.0 * h);
        let an = d.eval(x).unwrap();
        prop_assert!((an - fd).abs() <= 1e-6 * (1.0 + an.abs()), "{} vs {}", an, fd);
        prop_assert!(d.degree() < p.degree().max(1) || d.is_zero());
    }
}

/// Roots of x³ + px + q by sign changes on a fine grid plus bisection, and
/// repeated roots by minimising |f| + |f'| near critical points.
fn oracle_has_repeated_root(p: f64, q: f64) -> bool {
    let f = |x: f64| x * x * x + p * x + q;
    if p > 0.0 {
        return false;
    }
    if p == 0.0 {
        return q == 0.0;
    }
    // repeated roots sit at the critical points ±√(-p/3)
    let c = (-p / 3.0).sqrt();
    let scale = (p.abs() * c).max(q.abs()).max(1.0);
    f(c).abs() <= 1e-9 * scale || f(-c).abs() <= 1e-9 * scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn discriminant_zero_iff_repeated_root(t in -2.0f64..2.0, p in -10.0f64..10.0, q in -10.0f64..10.0, pick in 0u8..2) {
        let (p, q) = if pick == 0 { (-3.0 * t * t, 2.0 * t * t * t) } else { (p, q) };
        let d = depressed_discriminant(p, q);
        prop_assume!(pick == 0 || d.discriminant.abs() >= 1e-6);
        let repeated = oracle_has_repeated_root(p, q);
        prop_assert_eq!(d.is_degenerate(), repeated);
        prop_assert_eq!(pick == 0, repeated);
        let roots = depressed_cubic_roots(p, q);
        let count: u32 = roots.iter().map(|r| r.multiplicity).sum();
        prop_assert!(count == 1 || count == 3);
        prop_assert_eq!(roots.iter().any(|r| r.multiplicity > 1), repeated);
        for r in roots {
            let x = r.value;
            prop_assert!((x * x * x + p * x + q).abs() <= 1e-9 * (1.0 + x.abs().powi(3) + (p * x).abs() + q.abs()));
        }
    }

    #[test]
    fn reduction_bounds_and_invariance(a in proptest::collection::vec(-10.0f64..10.0, 4), theta in 0.0f64..6.3) {
        let c = BinaryCubic::new(a[0], a[1], a[2], a[3]).unwrap();
        let r = reduce_homogeneous_cubic(&c).unwrap();
        prop_assert!(r.p.abs() <= 6.0 + 1e-9, "p = {}", r.p);
        prop_assert!(r.q.abs() <= 6.0 + 1e-9, "q = {}", r.q);
        let m = r.rotated.coeffs().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!(r.lead.abs() >= m * (1.0 - 1e-9));

        let scale = c.max_abs_coeff().powi(4);
        let d0 = binary_discriminant(&c);
        let d1 = binary_discriminant(&c.rotated(theta));
        prop_assert!((d0 - d1).abs() <= 1e-9 * scale);
        let dep = depressed_discriminant(r.p, r.q).discriminant;
        prop_assert!((d0 - r.discriminant_scale * dep).abs() <= 1e-9 * scale);
    }
}

#[test]
fn text_round_trip_preserves_values() {
    let p = PolyPhase::from_text("3 0 1\n1 2 -0.5\n0 0 2.25\n").unwrap();
    let q = PolyPhase::from_text(&p.to_text()).unwrap();
    for x in [[0.1, 0.2], [-1.0, 3.0]] {
        assert_eq!(p.eval(&x).unwrap(), q.eval(&x).unwrap());
    }
}
