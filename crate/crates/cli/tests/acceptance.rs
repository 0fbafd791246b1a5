//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
//! with its measurements and runtime; the test fails if any criterion does.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mlosc_core::bounds::{
    default_theorem4_families, log_grid, verify_corollary1, verify_lemma1, verify_lemma2, verify_prop1,
    verify_theorem2, verify_theorem3, verify_theorem4, Verdict, DEFAULT_PER_DECADE, DEFAULT_TOL, LEM2_SCALE,
    THM3_SCALE,
};
use mlosc_core::polynomials::{MultiIndex, PolyPhase};
use mlosc_core::quadrature::{integrate_classical, Amplitude, Domain};
use mlosc_core::special::{mittag_leffler, MLParams};
use mlosc_core::sublevel::{sublevel_measure, verify_ccw, SublevelMethod};

type Check = Result<String, String>;

/// Bypasses the test harness's output capture so the lines always show.
fn report(line: &str) {
    let mut err = std::io::stderr();
    let _ = writeln!(err, "{line}");
}

fn criterion(id: u32, name: &str, limit: Duration, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = f();
    let took = start.elapsed();
    let (ok, detail) = match outcome {
        Ok(d) if took <= limit => (true, d),
        Ok(d) => (false, format!("{d}; too slow, limit {limit:?}")),
        Err(d) => (false, d),
    };
    let tag = if ok { "PASS" } else { "FAIL" };
    report(&format!("[{tag}] {id}. {name}: {detail} ({:.2} s)", took.as_secs_f64()));
    ok
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ml(a: f64, b: f64) -> MLParams {
    MLParams::new(a, b).unwrap()
}

/// ln Γ(x) for x ≥ 10 from the Stirling series.
fn ln_gamma_stirling(x: f64) -> f64 {
    const B: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
    ];
    let mut s = (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln();
    let mut p = x;
    for b in B {
        s += b / p;
        p *= x * x;
    }
    s
}

/// 1/Γ(x) for x > 0 by upward shifting into the Stirling range.
fn recip_gamma_oracle(x: f64) -> f64 {
    let mut prod = 1.0;
    let mut y = x;
    while y < 20.0 {
        prod *= y;
        y += 1.0;
    }
    prod * (-ln_gamma_stirling(y)).exp()
}

fn ml_identities() -> Check {
    let mut worst_exp = 0f64;
    let mut worst_e12 = 0f64;
    for i in 0..8 {
        for j in 0..8 {
            let r = 10.0 * (i + 1) as f64 / 8.0;
            let th = 2.0 * PI * (j as f64 + 0.5) / 8.0;
            let z = Complex64::from_polar(r, th);
            let e = z.exp();
            let v = mittag_leffler(ml(1.0, 1.0), z).map_err(|e| e.to_string())?;
            worst_exp = worst_exp.max((v - e).norm() / e.norm());
            let exact = (e - 1.0) / z;
            let v = mittag_leffler(ml(1.0, 2.0), z).map_err(|e| e.to_string())?;
            worst_e12 = worst_e12.max((v - exact).norm() / exact.norm());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst_zero = 0f64;
    for _ in 0..20 {
        let (a, b) = (rng.gen_range(0.05..2.0), rng.gen_range(0.05..5.0));
        let v = mittag_leffler(ml(a, b), Complex64::new(0.0, 0.0)).map_err(|e| e.to_string())?;
        let exact = recip_gamma_oracle(b);
        worst_zero = worst_zero.max((v.re - exact).abs() / exact.abs()).max(v.im.abs());
    }
    let detail = format!("E11 rel {worst_exp:.1e}, E12 rel {worst_e12:.1e}, E(0) {worst_zero:.1e}");
    ensure(worst_exp <= 1e-10 && worst_e12 <= 1e-9 && worst_zero <= 1e-12, || {
        detail.clone()
    })?;
    Ok(detail)
}

fn prop1() -> Check {
    let mut params = Vec::new();
    for a in [0.3, 0.5, 0.7, 0.9] {
        for b in [0.5, 1.0, 1.5] {
            params.push(ml(a, b));
        }
    }
    let r = verify_prop1(&params, 1.0, 1e6, DEFAULT_PER_DECADE).map_err(|e| e.to_string())?;
    let detail = format!("c_fit {:.4}, drift {:.2e}, verdict {}", r.c_fit, r.drift, r.verdict);
    ensure(r.c_fit.is_finite() && r.drift < 0.05, || detail.clone())?;
    Ok(detail)
}

fn theorem1() -> Check {
    let mus = log_grid(1e-4, 1e-1, 8).unwrap();
    let x2 = PolyPhase::monomial(1.0, vec![2]).unwrap();
    let x3 = PolyPhase::monomial(1.0, vec![3]).unwrap();
    let s2 = verify_ccw(&x2, &MultiIndex::single(2), &mus)
        .map_err(|e| e.to_string())?
        .slope;
    let s3 = verify_ccw(&x3, &MultiIndex::single(3), &mus)
        .map_err(|e| e.to_string())?
        .slope;
    ensure((s2 - 0.5).abs() <= 0.05 && (s3 - 1.0 / 3.0).abs() <= 0.05, || {
        format!("slopes {s2:.4}, {s3:.4}")
    })?;

    let x1x2 = PolyPhase::monomial(1.0, vec![1, 1]).unwrap();
    type Exact = fn(f64) -> f64;
    let cases: [(&PolyPhase, Exact); 3] = [(&x2, f64::sqrt), (&x3, f64::cbrt), (&x1x2, |m| m * (1.0 - m.ln()))];
    let mut worst_grid = 0f64;
    let mut worst_mc = 0f64;
    for (p, exact) in cases {
        let size = 2048;
        for mu in [1e-3, 1e-2, 0.1, 0.5] {
            let g = sublevel_measure(p, mu, SublevelMethod::Grid, size, 0).map_err(|e| e.to_string())?;
            let grid_tol = 2.0 * p.dim() as f64 / size as f64;
            let err = (g.measure - exact(mu)).abs();
            ensure(err <= grid_tol, || {
                format!("grid measure {} vs {} at mu {mu}", g.measure, exact(mu))
            })?;
            worst_grid = worst_grid.max(err / grid_tol);
            let m = sublevel_measure(p, mu, SublevelMethod::MonteCarlo, 1_000_000, 1).map_err(|e| e.to_string())?;
            let err = (m.measure - exact(mu)).abs();
            ensure(err <= 3.0 * m.ci_halfwidth, || {
                format!("MC measure {} vs {} at mu {mu}", m.measure, exact(mu))
            })?;
            worst_mc = worst_mc.max(err / m.ci_halfwidth);
        }
    }
    Ok(format!(
        "slopes {s2:.4} (1/2), {s3:.4} (1/3); closed forms within {worst_grid:.2} of grid tolerance and {worst_mc:.2} CI half-widths"
    ))
}

fn corollary1() -> Check {
    let domain = Domain::unit_cube(1).unwrap();
    let mut worst = 0f64;
    for mu in log_grid(0.1, 1e3, 24).unwrap() {
        let p = PolyPhase::monomial(mu, vec![1]).unwrap();
        let v = integrate_classical(&p, &domain, 1e-10)
            .map_err(|e| e.to_string())?
            .value
            .norm();
        let exact = ((Complex64::new(0.0, mu).exp() - 1.0) / Complex64::new(0.0, mu)).norm();
        worst = worst.max((v - exact).abs());
    }
    ensure(worst <= 1e-8, || format!("closed-form error {worst:.2e}"))?;
    // odd multiples of π up to 10³
    let count = (0..).take_while(|k| (2 * k + 1) as f64 * PI <= 1e3).count();
    let r = verify_corollary1(count, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let detail = format!("max closed-form error {worst:.2e}, c_fit {:.6}", r.c_fit);
    ensure((r.c_fit - 2.0).abs() <= 0.1, || detail.clone())?;
    Ok(detail)
}

fn lemma1() -> Check {
    let mus = log_grid(10.0, 1e5, DEFAULT_PER_DECADE).unwrap();
    let mut parts = Vec::new();
    for d in [2u32, 3] {
        for a in [0.5, 0.8] {
            let p = PolyPhase::monomial(1.0, vec![d]).unwrap();
            let r =
                verify_lemma1(&p, &MultiIndex::single(d), ml(a, 1.0), &mus, DEFAULT_TOL).map_err(|e| e.to_string())?;
            let s = r.slope_fit.ok_or("no slope")?;
            let bound = -1.0 / d as f64 + 0.1;
            ensure(s <= bound, || {
                format!("d = {d}, alpha = {a}: slope {s:.4} > {bound:.4}")
            })?;
            parts.push(format!("d={d} a={a}: {s:.3}"));
        }
    }
    Ok(format!("slopes {}", parts.join(", ")))
}

fn theorem3() -> Check {
    let mut parts = Vec::new();
    for delta in [0.45, 0.75] {
        let r = verify_theorem3(delta, 9, THM3_SCALE, DEFAULT_TOL).map_err(|e| e.to_string())?;
        let has_family = r.rows.iter().any(|row| row.params[0] >= 1.0);
        let detail = format!("delta {delta}: {} c_fit {:.3} drift {:.3}", r.verdict, r.c_fit, r.drift);
        ensure(r.verdict == Verdict::Bounded && has_family, || detail.clone())?;
        parts.push(detail);
    }
    Ok(parts.join("; "))
}

fn theorem4_lemma2() -> Check {
    let r4 = verify_theorem4(
        &default_theorem4_families(),
        ml(0.5, 1.0),
        &Amplitude::one(),
        DEFAULT_TOL,
    )
    .map_err(|e| e.to_string())?;
    let r2 = verify_lemma2(9, LEM2_SCALE, true, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let detail = format!(
        "thm4 {} c_fit {:.3} drift {:.3}; lem2 {} c_fit {:.3} drift {:.3}",
        r4.verdict, r4.c_fit, r4.drift, r2.verdict, r2.c_fit, r2.drift
    );
    ensure(r4.verdict == Verdict::Bounded && r2.verdict == Verdict::Bounded, || {
        detail.clone()
    })?;
    Ok(detail)
}

fn theorem2() -> Check {
    let mus = log_grid(10.0, 1e5, DEFAULT_PER_DECADE).unwrap();
    let fams = [
        PolyPhase::monomial(1.0, vec![2]).unwrap(),
        PolyPhase::monomial(1.0, vec![3]).unwrap(),
    ];
    let r = verify_theorem2(ml(0.5, 1.0), &Amplitude::one(), &fams, &mus, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let detail = format!(
        "1/d: {} (drift {:.3}); 1/alpha: growth {:?}, monotone {:?}",
        r.by_degree.verdict,
        r.by_degree.drift,
        r.alpha_growth.iter().map(|g| format!("{g:.3e}")).collect::<Vec<_>>(),
        r.alpha_monotone
    );
    let grows = r.alpha_growth.iter().all(|g| *g >= 10.0) && r.alpha_monotone.iter().all(|m| *m);
    ensure(r.by_degree.verdict == Verdict::Bounded && grows, || detail.clone())?;
    Ok(detail)
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut checked = 0;
    for t in ["prop1", "thm1", "cor1", "lem1", "thm2", "thm3", "thm4", "lem2"] {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("{t}-{run}.csv"));
            let code = mlosc::run(["mlosc", "verify", t, "--seed", "42", "--out", out.to_str().unwrap()]);
            ensure(code == 0, || format!("{t} exited with {code}"))?;
            outputs.push(fs::read(&out).map_err(|e| e.to_string())?);
        }
        ensure(!outputs[0].is_empty() && outputs[0] == outputs[1], || {
            format!("{t}: CSV differs between runs")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} sweeps byte-identical across repeated runs"))
}

#[test]
fn acceptance() {
    let results = [
        criterion(1, "Mittag-Leffler identities", Duration::from_secs(5), ml_identities),
        criterion(2, "imaginary-axis decay constant", Duration::from_secs(30), prop1),
        criterion(3, "sublevel-set exponent", Duration::from_secs(60), theorem1),
        criterion(4, "classical linear-phase anchor", Duration::from_secs(10), corollary1),
        criterion(5, "monomial ray slopes", Duration::from_secs(60), lemma1),
        criterion(6, "singular cubic integral", Duration::from_secs(120), theorem3),
        criterion(7, "binary cubic and angular integral", Duration::from_secs(180), theorem4_lemma2),
        criterion(8, "norm exponent report", Duration::from_secs(120), theorem2),
        criterion(9, "Deterministic CSV", Duration::from_secs(120), determinism),
    ];
    let passed = results.iter().filter(|r| **r).count();
    report(&format!("acceptance: {passed}/{} criteria passed", results.len()));
    assert_eq!(passed, results.len());
}
