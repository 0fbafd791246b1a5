//! Numerical integration of E_{α,β}(iP(x))ψ(x) and related integrals.

pub(crate) mod adaptive;
mod cubature;
mod domain;
mod polar;
pub(crate) mod rule;
mod singular;

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;

pub use domain::{Amplitude, Domain, IntegralSpec};
pub use singular::{angular_j2, integrate_singular};

use crate::error::{Error, Result};
use crate::polynomials::{BinaryCubic, MultiIndex, NormMode, PolyPhase};
use crate::special::{MLParams, MittagLeffler};
use adaptive::{Outcome, Tolerance};
use rule::Value;

/// Evaluation budget of a single integral.
pub const MAX_EVALS: usize = 2_000_000;
/// Smallest accepted tolerance.
pub const MIN_TOL: f64 = 1e-10;
/// Cap on the initial number of panels per axis.
pub const MAX_INITIAL_PANELS: usize = 4096;

/// Value of a quadrature together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels_used: usize,
}

/// Initial panels per axis: ⌈(1 + Σ_{|λ|>0} |a_λ|)^{1/d}⌉, so that each
/// panel sees about one oscillation.
pub fn initial_panels(phase: &PolyPhase) -> usize {
    let d = phase.degree().max(1) as f64;
    let norm = phase.coeff_norm(NormMode::L1NonConstant);
    ((1.0 + norm).powf(1.0 / d).ceil() as usize).clamp(1, MAX_INITIAL_PANELS)
}

enum Carrier<'a> {
    Exp,
    Ml(&'a MittagLeffler),
}

impl Carrier<'_> {
    /// E(iy).
    fn at(&self, y: f64) -> Result<Complex64> {
        match self {
            Carrier::Exp => Ok(Complex64::from_polar(1.0, y)),
            Carrier::Ml(ml) => ml.eval_imag(y),
        }
    }
}

/// Records the first failure inside an integrand that must return a value.
struct Failure(RefCell<Option<Error>>);

impl Failure {
    fn new() -> Self {
        Self(RefCell::new(None))
    }

    fn catch(&self, r: Result<Complex64>) -> Complex64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.borrow_mut().get_or_insert(e);
                Complex64::zero()
            }
        }
    }

    fn take(self) -> Option<Error> {
        self.0.into_inner()
    }
}

fn conclude(out: Outcome<Complex64>, failure: Failure) -> Result<QuadResult> {
    if let Some(e) = failure.take() {
        return Err(e);
    }
    if !out.finite {
        return Err(Error::NonFinite("integral"));
    }
    let res = QuadResult {
        value: out.value,
        error_estimate: out.error,
        panels_used: out.panels.max(1),
    };
    if !out.converged && out.evals + 2 * cubature::evals_per_cell(3) >= MAX_EVALS {
        return Err(Error::BudgetExceeded {
            evaluations: out.evals,
            best: Box::new(res),
        });
    }
    Ok(res)
}

/// I_{α,β}(a) = ∫ E_{α,β}(iP(a, x)) ψ(x) dx.
pub fn integrate_generalized(spec: &IntegralSpec, tol: f64) -> Result<QuadResult> {
    spec.ml.check_integral_range()?;
    if spec.ml.is_classical() {
        return run(spec, &Carrier::Exp, tol, &[]);
    }
    let ml = MittagLeffler::new(spec.ml);
    run(spec, &Carrier::Ml(&ml), tol, &[])
}

/// As [`integrate_generalized`], reusing a prepared evaluator (its
/// parameters must match the spec).
pub fn integrate_generalized_with(ml: &MittagLeffler, spec: &IntegralSpec, tol: f64) -> Result<QuadResult> {
    if ml.params() != spec.ml {
        return Err(Error::InvalidArgument(
            "evaluator parameters differ from the spec".into(),
        ));
    }
    spec.ml.check_integral_range()?;
    if spec.ml.is_classical() {
        return run(spec, &Carrier::Exp, tol, &[]);
    }
    run(spec, &Carrier::Ml(ml), tol, &[])
}

/// ∫ e^{iP(a, x)} dx.
pub fn integrate_classical(phase: &PolyPhase, domain: &Domain, tol: f64) -> Result<QuadResult> {
    let spec = IntegralSpec::new(MLParams::classical(), phase.clone(), Amplitude::one(), domain.clone())?;
    run(&spec, &Carrier::Exp, tol, &[])
}

/// x³ + px + q as a phase on ℝ.
pub fn depressed_cubic_phase(p: f64, q: f64) -> Result<PolyPhase> {
    PolyPhase::new(
        1,
        3,
        [
            (MultiIndex::single(3), 1.0),
            (MultiIndex::single(1), p),
            (MultiIndex::single(0), q),
        ],
    )
}

/// ∫₋₁¹ E_{α,β}(i(x³ + px + q)) dx.
pub fn integrate_cubic_j(p: f64, q: f64, ml: MLParams, tol: f64) -> Result<QuadResult> {
    let spec = IntegralSpec::new(
        ml,
        depressed_cubic_phase(p, q)?,
        Amplitude::one(),
        Domain::interval(-1.0, 1.0)?,
    )?;
    integrate_generalized(&spec, tol)
}

/// ∫_{|x|≤1} E_{α,β}(iP₃(x)) ψ(x) dx in polar coordinates, with the angular
/// mesh broken at the zeros of P₃(cos θ, sin θ).
pub fn integrate_homogeneous_cubic(
    c: &BinaryCubic,
    ml: MLParams,
    amplitude: &Amplitude,
    tol: f64,
) -> Result<QuadResult> {
    ml.check_integral_range()?;
    let spec = IntegralSpec::new(ml, c.to_phase(), amplitude.clone(), Domain::unit_disc())?;
    let breaks = angular_zeros(c);
    if ml.is_classical() {
        return run(&spec, &Carrier::Exp, tol, &breaks);
    }
    let evaluator = MittagLeffler::new(ml);
    run(&spec, &Carrier::Ml(&evaluator), tol, &breaks)
}

/// As [`integrate_homogeneous_cubic`] with a prepared evaluator.
pub fn integrate_homogeneous_cubic_with(
    ml: &MittagLeffler,
    c: &BinaryCubic,
    amplitude: &Amplitude,
    tol: f64,
) -> Result<QuadResult> {
    let params = ml.params();
    params.check_integral_range()?;
    let spec = IntegralSpec::new(params, c.to_phase(), amplitude.clone(), Domain::unit_disc())?;
    let breaks = angular_zeros(c);
    if params.is_classical() {
        return run(&spec, &Carrier::Exp, tol, &breaks);
    }
    run(&spec, &Carrier::Ml(ml), tol, &breaks)
}

/// Sign changes of θ ↦ P₃(cos θ, sin θ) on [0, 2π), located by scanning and
/// bisection.
fn angular_zeros(c: &BinaryCubic) -> Vec<f64> {
    const SCAN: usize = 720;
    let h = 2.0 * PI / SCAN as f64;
    let mut out = Vec::new();
    for k in 0..SCAN {
        let (mut a, mut b) = (k as f64 * h, (k + 1) as f64 * h);
        let (mut fa, fb) = (c.angular(a), c.angular(b));
        if fa == 0.0 {
            out.push(a);
            continue;
        }
        if fa * fb >= 0.0 {
            continue;
        }
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            let fm = c.angular(m);
            if fm == 0.0 {
                a = m;
                b = m;
                break;
            }
            if fa * fm < 0.0 {
                b = m;
            } else {
                a = m;
                fa = fm;
            }
        }
        out.push(0.5 * (a + b));
    }
    out.retain(|&t| t > 0.0 && t < 2.0 * PI);
    out
}

fn run(spec: &IntegralSpec, carrier: &Carrier, tol: f64, theta_breaks: &[f64]) -> Result<QuadResult> {
    singular::check_tol(tol)?;
    let phase = &spec.phase;
    let amp = &spec.amplitude;
    let failure = Failure::new();
    let m = initial_panels(phase);
    let out = match &spec.domain {
        Domain::Interval { .. } | Domain::UnitCube(1) => {
            let (lo, hi) = spec.domain.bounds()[0];
            let mut breaks = vec![lo, hi];
            if let Amplitude::Bump { center, radius } = amp {
                for e in [center[0] - radius, center[0] + radius] {
                    if e > lo && e < hi {
                        breaks.push(e);
                    }
                }
                breaks.sort_by(f64::total_cmp);
            }
            let per_segment = (m as f64 / (breaks.len() - 1) as f64).ceil() as usize;
            adaptive::integrate(
                |x: f64| {
                    let xs = [x];
                    let w = amp.eval(&xs);
                    if w == 0.0 {
                        return Complex64::zero();
                    }
                    failure.catch(carrier.at(phase.eval_unchecked(&xs))) * w
                },
                &breaks,
                per_segment,
                Tolerance::absolute(tol, MAX_EVALS),
            )
        }
        Domain::UnitCube(n) => {
            let cells = (MAX_EVALS / 4 / cubature::evals_per_cell(*n)) as f64;
            let cap = cells.powf(1.0 / *n as f64).floor().max(1.0) as usize;
            cubature::integrate_box(
                |x: &[f64]| {
                    let w = amp.eval(x);
                    if w == 0.0 {
                        return Complex64::zero();
                    }
                    failure.catch(carrier.at(phase.eval_unchecked(x))) * w
                },
                &spec.domain.bounds(),
                m.min(cap),
                Tolerance::absolute(tol, MAX_EVALS),
            )
        }
        Domain::UnitDisc => {
            let mut breaks: Vec<f64> = (0..=4).map(|k| 0.5 * PI * k as f64).collect();
            breaks.extend_from_slice(theta_breaks);
            breaks.sort_by(f64::total_cmp);
            breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
            polar::integrate_disc(
                |x, y| {
                    let xs = [x, y];
                    let w = amp.eval(&xs);
                    if w == 0.0 {
                        return Complex64::zero();
                    }
                    failure.catch(carrier.at(phase.eval_unchecked(&xs))) * w
                },
                m,
                &breaks,
                tol,
                MAX_EVALS,
            )
        }
    };
    conclude(out, failure)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear(mu: f64) -> PolyPhase {
        PolyPhase::monomial(mu, vec![1]).unwrap()
    }

    #[test]
    fn zero_phase_gives_volume() {
        let spec = IntegralSpec::new(
            MLParams::classical(),
            PolyPhase::zero(1),
            Amplitude::one(),
            Domain::unit_cube(1).unwrap(),
        )
        .unwrap();
        let r = integrate_generalized(&spec, 1e-10).unwrap();
        assert!((r.value - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        let r = integrate_classical(&PolyPhase::zero(2), &Domain::unit_cube(2).unwrap(), 1e-10).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn linear_phase_closed_form() {
        let spec = IntegralSpec::new(
            MLParams::classical(),
            linear(PI),
            Amplitude::one(),
            Domain::unit_cube(1).unwrap(),
        )
        .unwrap();
        let r = integrate_generalized(&spec, 1e-10).unwrap();
        assert!((r.value.norm() - 2.0 / PI).abs() < 1e-10);
        let r = integrate_classical(&linear(2.0 * PI), &Domain::unit_cube(1).unwrap(), 1e-10).unwrap();
        assert!(r.value.norm() < 1e-9);
    }

    #[test]
    fn two_dimensional_product() {
        let p = PolyPhase::from_terms(
            2,
            [(MultiIndex::new(vec![1, 0]), PI), (MultiIndex::new(vec![0, 1]), PI)],
        )
        .unwrap();
        let r = integrate_classical(&p, &Domain::unit_cube(2).unwrap(), 1e-10).unwrap();
        assert!((r.value.norm() - (2.0 / PI).powi(2)).abs() < 1e-10);
    }

    #[test]
    fn disc_area() {
        let c = BinaryCubic::new(0.0, 0.0, 0.0, 0.0).unwrap();
        let r = integrate_homogeneous_cubic(&c, MLParams::new(0.5, 1.0).unwrap(), &Amplitude::one(), 1e-10).unwrap();
        assert!((r.value.re - PI).abs() < 1e-10);
        assert!(r.value.im.abs() < 1e-12);
    }

    #[test]
    fn rejects_small_tolerance_and_bad_params() {
        let spec = IntegralSpec::new(
            MLParams::new(1.5, 1.0).unwrap(),
            linear(1.0),
            Amplitude::one(),
            Domain::unit_cube(1).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            integrate_generalized(&spec, 1e-7),
            Err(Error::InvalidParams { .. })
        ));
        let spec = IntegralSpec {
            ml: MLParams::classical(),
            ..spec
        };
        assert!(matches!(
            integrate_generalized(&spec, 1e-12),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn singular_closed_forms() {
        let v = integrate_singular(0.0, 0.0, 0.25, 1e-10).unwrap();
        assert!((v - 8.0).abs() < 1e-9, "{v}");
        assert!(matches!(
            integrate_singular(-3.0, 2.0, 0.6, 1e-8),
            Err(Error::DivergentIntegral { multiplicity: 2, .. })
        ));
        // double root at 1, simple root at -2: 2δ = 0.8 < 1
        let v = integrate_singular(-3.0, 2.0, 0.4, 1e-8).unwrap();
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn angular_divergence() {
        assert!(matches!(
            angular_j2(0.0, 0.0, 1e-8),
            Err(Error::DivergentIntegral { multiplicity: 3, .. })
        ));
        assert!(matches!(
            angular_j2(-3.0, 2.0, 1e-8),
            Err(Error::DivergentIntegral { multiplicity: 2, .. })
        ));
        assert!(angular_j2(1.0, 0.0, 1e-8).unwrap() > 2.0 * PI);
    }
}
