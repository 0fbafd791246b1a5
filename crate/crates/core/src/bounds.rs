//! Verification sweeps: measure an integral (or a special-function value,
//! or a sublevel measure) along a parameter family, divide by the
//! constant-free right-hand side of the corresponding bound, and decide
//! whether the ratio stays bounded.
//!
//! Every sweep is run on a grid and on the grid with doubled density. The
//! report rows are the base grid; the refined pass only feeds the stability
//! check.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polynomials::{binary_discriminant, depressed_discriminant, BinaryCubic, MultiIndex, NormMode, PolyPhase};
use crate::quadrature::{
    angular_j2, integrate_generalized_with, integrate_homogeneous_cubic_with, integrate_singular, Amplitude, Domain,
    IntegralSpec, QuadResult,
};
use crate::special::{recip_gamma, MLParams, MittagLeffler};
use crate::sublevel::{min_abs_derivative, verify_ccw_with, DERIVATIVE_TOL};

pub const DEFAULT_TOL: f64 = 1e-7;
pub const DEFAULT_PER_DECADE: usize = 24;
/// Relative change of c_fit under refinement above which a sweep is unstable.
pub const STABILITY_DRIFT: f64 = 0.2;
/// Largest admissible log-log slope of the ratio over the tail of a family.
pub const TAIL_SLOPE: f64 = 0.05;
/// Half-width of the (p, q) square for the singular integral: the smallest
/// one holding every cubic with all three roots in [−1, 1].
pub const THM3_SCALE: f64 = 3.0;
/// Half-width of the (p, q) square for the angular integral; reduced cubics
/// satisfy |p|, |q| ≤ 6.
pub const LEM2_SCALE: f64 = 6.0;
/// Tolerance on ‖a⁰‖ = 1.
pub const SPHERE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremId {
    Prop1,
    Thm1,
    Cor1,
    Lem1,
    Thm2,
    Thm3Case1,
    Thm3Case2,
    Thm4,
    Lem2,
}

impl TheoremId {
    pub const ALL: [TheoremId; 9] = [
        TheoremId::Prop1,
        TheoremId::Thm1,
        TheoremId::Cor1,
        TheoremId::Lem1,
        TheoremId::Thm2,
        TheoremId::Thm3Case1,
        TheoremId::Thm3Case2,
        TheoremId::Thm4,
        TheoremId::Lem2,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::Prop1 => "prop1",
            TheoremId::Thm1 => "thm1",
            TheoremId::Cor1 => "cor1",
            TheoremId::Lem1 => "lem1",
            TheoremId::Thm2 => "thm2",
            TheoremId::Thm3Case1 => "thm3_case1",
            TheoremId::Thm3Case2 => "thm3_case2",
            TheoremId::Thm4 => "thm4",
            TheoremId::Lem2 => "lem2",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown theorem id '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Bounded,
    Unstable,
    ViolatedPreconditions,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Bounded => "bounded",
            Verdict::Unstable => "unstable",
            Verdict::ViolatedPreconditions => "violated_preconditions",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Verdict::Bounded, Verdict::Unstable, Verdict::ViolatedPreconditions]
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown verdict '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    /// Values for the report's `param_names`, in order.
    pub params: Vec<f64>,
    pub measured: f64,
    /// Right-hand side of the bound without its constant.
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub param_names: Vec<String>,
    pub rows: Vec<BoundRow>,
    /// max ratio over `rows`.
    pub c_fit: f64,
    /// max ratio on the grid of doubled density.
    pub c_fit_refined: f64,
    /// |c_fit_refined − c_fit| / c_fit_refined.
    pub drift: f64,
    pub slope_fit: Option<f64>,
    pub verdict: Verdict,
    /// Rows left out because the bound does not apply there.
    pub skipped: usize,
    pub notes: Vec<(String, String)>,
}

impl BoundReport {
    /// Recomputes max ratio over the rows.
    pub fn row_max(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn note(&self, key: &str) -> Option<&str> {
        self.notes.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Least squares on (ln t, ln v).
pub fn fit_decay(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(Error::InsufficientPoints(points.len()));
    }
    if let Some(&(t, v)) = points
        .iter()
        .find(|(t, v)| !(*t > 0.0 && *v > 0.0) || !t.is_finite() || !v.is_finite())
    {
        return Err(Error::NonPositiveValue(t, v));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument(
            "fit needs at least two distinct abscissae".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        let res: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (y - intercept - slope * x).powi(2))
            .sum();
        (1.0 - res / syy).clamp(0.0, 1.0)
    };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
    })
}

/// `lo·10^{k/per_decade}` up to `hi` (both included when the range is a
/// whole number of steps).
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0) || !(hi > lo) || !hi.is_finite() || per_decade == 0 {
        return Err(Error::InvalidArgument(format!(
            "log grid needs 0 < lo < hi and a positive density, got [{lo}, {hi}] with {per_decade}"
        )));
    }
    let steps = ((hi / lo).log10() * per_decade as f64 - 1e-9).ceil() as usize;
    let (a, b) = (lo.log10(), hi.log10());
    Ok((0..=steps)
        .map(|k| 10f64.powf(a + (b - a) * k as f64 / steps as f64))
        .collect())
}

/// Doubles the density of a grid by inserting geometric midpoints; the
/// original points keep their even positions.
fn refine_geometric(base: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * base.len());
    for w in base.windows(2) {
        out.push(w[0]);
        out.push((w[0] * w[1]).sqrt());
    }
    out.extend(base.last());
    out
}

fn refine_linear(base: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * base.len());
    for w in base.windows(2) {
        out.push(w[0]);
        out.push(0.5 * (w[0] + w[1]));
    }
    out.extend(base.last());
    out
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Sweep {
    None,
    /// A growing size parameter (μ, t, ‖a‖): used for the slope fit and the
    /// tail check.
    Magnitude(f64),
    /// A parameter pushing toward a degenerate configuration; its tail slope
    /// is only reported.
    Approach(f64),
}

/// One evaluated point of a sweep.
#[derive(Debug, Clone)]
struct Sample {
    row: BoundRow,
    base: bool,
    family: usize,
    sweep: Sweep,
}

impl Sample {
    fn new(params: Vec<f64>, measured: f64, rhs: f64, base: bool, family: usize, sweep: Sweep) -> Self {
        Sample {
            row: BoundRow {
                params,
                measured,
                rhs,
                ratio: measured / rhs,
            },
            base,
            family,
            sweep,
        }
    }
}

/// Per-family slope of ln ratio over the last half of the family's base
/// points, for sweeps selected by `pick`; the largest one.
fn worst_tail_slope(samples: &[Sample], pick: fn(&Sweep) -> Option<f64>) -> Option<f64> {
    let mut families: Vec<usize> = samples.iter().map(|s| s.family).collect();
    families.sort_unstable();
    families.dedup();
    let mut worst: Option<f64> = None;
    for f in families {
        let mut pts: Vec<(f64, f64)> = samples
            .iter()
            .filter(|s| s.family == f && s.base)
            .filter_map(|s| pick(&s.sweep).map(|v| (v, s.row.ratio)))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let tail = &pts[pts.len() / 2..];
        if let Ok(fit) = fit_decay(tail) {
            worst = Some(worst.map_or(fit.slope, |w: f64| w.max(fit.slope)));
        }
    }
    worst
}

fn magnitude(s: &Sweep) -> Option<f64> {
    match s {
        Sweep::Magnitude(v) => Some(*v),
        _ => None,
    }
}

fn approach(s: &Sweep) -> Option<f64> {
    match s {
        Sweep::Approach(v) => Some(*v),
        _ => None,
    }
}

/// Largest per-family slope of ln measured against ln of a magnitude sweep.
fn worst_decay_slope(samples: &[Sample]) -> Option<f64> {
    let mut families: Vec<usize> = samples.iter().map(|s| s.family).collect();
    families.sort_unstable();
    families.dedup();
    let mut worst: Option<f64> = None;
    for f in families {
        let pts: Vec<(f64, f64)> = samples
            .iter()
            .filter(|s| s.family == f && s.base)
            .filter_map(|s| match s.sweep {
                Sweep::Magnitude(v) if s.row.measured > 0.0 => Some((v, s.row.measured)),
                _ => None,
            })
            .collect();
        if let Ok(fit) = fit_decay(&pts) {
            worst = Some(worst.map_or(fit.slope, |w: f64| w.max(fit.slope)));
        }
    }
    worst
}

struct Assembly {
    theorem: TheoremId,
    param_names: Vec<&'static str>,
    samples: Vec<Sample>,
    skipped: usize,
    notes: Vec<(String, String)>,
    /// c_fit of a refined run kept outside the rows (resolution refinement).
    refined_override: Option<f64>,
    slope_override: Option<f64>,
}

impl Assembly {
    fn new(theorem: TheoremId, param_names: &[&'static str], samples: Vec<Sample>) -> Self {
        Assembly {
            theorem,
            param_names: param_names.to_vec(),
            samples,
            skipped: 0,
            notes: Vec::new(),
            refined_override: None,
            slope_override: None,
        }
    }

    fn note(mut self, key: &str, value: impl ToString) -> Self {
        self.notes.push((key.to_string(), value.to_string()));
        self
    }

    fn finish(self) -> Result<BoundReport> {
        let rows: Vec<BoundRow> = self.samples.iter().filter(|s| s.base).map(|s| s.row.clone()).collect();
        if rows.is_empty() {
            return Err(Error::Precondition(format!(
                "{}: no admissible rows ({} skipped)",
                self.theorem, self.skipped
            )));
        }
        let c_fit = rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
        let all_max = self
            .samples
            .iter()
            .map(|s| s.row.ratio)
            .fold(f64::NEG_INFINITY, f64::max);
        let c_fit_refined = self.refined_override.unwrap_or(all_max);
        let drift = ((c_fit_refined - c_fit) / c_fit_refined).abs();
        let finite = self.samples.iter().all(|s| s.row.ratio.is_finite()) && c_fit_refined.is_finite();
        let tail = worst_tail_slope(&self.samples, magnitude);
        let approach_tail = worst_tail_slope(&self.samples, approach);
        let slope_fit = self.slope_override.or_else(|| worst_decay_slope(&self.samples));
        let stable = finite && drift < STABILITY_DRIFT && tail.is_none_or(|t| t <= TAIL_SLOPE);
        let mut notes = self.notes;
        if let Some(t) = tail {
            notes.push(("tail_slope".into(), format!("{t:.6}")));
        }
        if let Some(t) = approach_tail {
            notes.push(("approach_tail_slope".into(), format!("{t:.6}")));
        }
        Ok(BoundReport {
            theorem: self.theorem,
            param_names: self.param_names.iter().map(|s| s.to_string()).collect(),
            rows,
            c_fit,
            c_fit_refined,
            drift,
            slope_fit,
            verdict: if stable { Verdict::Bounded } else { Verdict::Unstable },
            skipped: self.skipped,
            notes,
        })
    }
}

/// Value of a quadrature, falling back on the best estimate when the budget
/// runs out (counted in `exhausted`).
fn value_or_best(r: Result<QuadResult>, exhausted: &mut usize) -> Result<QuadResult> {
    match r {
        Err(Error::BudgetExceeded { best, .. }) => {
            *exhausted += 1;
            Ok(*best)
        }
        other => other,
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol >= crate::quadrature::MIN_TOL) || !tol.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tol} is below the quadrature floor"
        )));
    }
    Ok(())
}

/// |E_{α,β}(it)|·(1 + t) over `t ∈ [t_lo, t_hi]` (log grid) plus t = 0, for
/// each parameter pair. Needs 0 < α < 1 so that the imaginary axis lies in
/// the decay sector.
pub fn verify_prop1(params: &[MLParams], t_lo: f64, t_hi: f64, per_decade: usize) -> Result<BoundReport> {
    if params.is_empty() {
        return Err(Error::InvalidArgument("no Mittag-Leffler parameters".into()));
    }
    for p in params {
        if !(p.alpha() < 1.0) {
            return Err(Error::Precondition(format!(
                "alpha = {} puts the imaginary axis outside the decay sector",
                p.alpha()
            )));
        }
    }
    let ts = refine_geometric(&log_grid(t_lo, t_hi, per_decade)?);
    let per_family: Vec<Result<Vec<Sample>>> = params
        .par_iter()
        .enumerate()
        .map(|(f, &p)| {
            let ml = MittagLeffler::new(p);
            let (a, b) = (p.alpha(), p.beta());
            let mut out = vec![Sample::new(
                vec![a, b, 0.0],
                recip_gamma(b).abs(),
                1.0,
                true,
                f,
                Sweep::None,
            )];
            for (i, &t) in ts.iter().enumerate() {
                let v = ml.eval_imag(t)?.norm();
                out.push(Sample::new(
                    vec![a, b, t],
                    v,
                    1.0 / (1.0 + t),
                    i % 2 == 0,
                    f,
                    Sweep::Magnitude(t),
                ));
            }
            Ok(out)
        })
        .collect();
    let samples = per_family.into_iter().collect::<Result<Vec<_>>>()?.concat();
    Assembly::new(TheoremId::Prop1, &["alpha", "beta", "t"], samples)
        .note("t_range", format!("{t_lo:e}..{t_hi:e}"))
        .note("per_decade", per_decade)
        .finish()
}

/// Sublevel measure of `p` against μ^{1/|κ|} on a grid of `size` cells per
/// axis, refined by running `2·size`.
pub fn verify_theorem1(p: &PolyPhase, kappa: &MultiIndex, mus: &[f64], size: usize) -> Result<BoundReport> {
    let coarse = verify_ccw_with(p, kappa, mus, size)?;
    let fine = verify_ccw_with(p, kappa, mus, 2 * size)?;
    let power = 1.0 / kappa.order() as f64;
    let samples = coarse
        .measures
        .iter()
        .map(|(mu, e)| Sample::new(vec![*mu], e.measure, mu.powf(power), true, 0, Sweep::None))
        .collect();
    let mut asm = Assembly::new(TheoremId::Thm1, &["mu"], samples)
        .note("kappa_order", kappa.order())
        .note("grid_size", size)
        .note("expected_slope", format!("{power:.6}"))
        .note("refined_slope", format!("{:.6}", fine.slope));
    asm.refined_override = Some(fine.constant);
    asm.slope_override = Some(coarse.slope);
    asm.finish()
}

/// μ_k = (2k + 1)π for k < `count` (2·`count` points on the refined pass).
pub fn odd_pi_multiples(count: usize) -> Vec<f64> {
    (0..count).map(|k| (2 * k + 1) as f64 * std::f64::consts::PI).collect()
}

/// |∫₀¹ e^{iμx} dx|·μ along μ = (2k + 1)π, k < `count`.
pub fn verify_corollary1(count: usize, tol: f64) -> Result<BoundReport> {
    check_tol(tol)?;
    if count < 3 {
        return Err(Error::InsufficientPoints(count));
    }
    let mus = odd_pi_multiples(2 * count);
    let domain = Domain::unit_cube(1)?;
    let ml = MittagLeffler::new(MLParams::classical());
    let samples = mus
        .par_iter()
        .enumerate()
        .map(|(k, &mu)| {
            let spec = IntegralSpec::new(
                MLParams::classical(),
                PolyPhase::monomial(mu, vec![1])?,
                Amplitude::one(),
                domain.clone(),
            )?;
            let r = integrate_generalized_with(&ml, &spec, tol)?;
            Ok(Sample::new(
                vec![mu],
                r.value.norm(),
                1.0 / mu,
                k % 2 == 0,
                0,
                Sweep::Magnitude(mu),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Assembly::new(TheoremId::Cor1, &["mu"], samples)
        .note("tol", tol)
        .finish()
}

/// Shared driver for rays μ ↦ I(μa): returns (μ, |I|, on base grid).
fn ray_integrals(
    ml: &MittagLeffler,
    direction: &PolyPhase,
    amplitude: &Amplitude,
    domain: &Domain,
    mus: &[f64],
    tol: f64,
    exhausted: &mut usize,
) -> Result<Vec<(f64, f64)>> {
    let results: Vec<Result<QuadResult>> = mus
        .par_iter()
        .map(|&mu| {
            let spec = IntegralSpec::new(ml.params(), direction.scaled(mu), amplitude.clone(), domain.clone())?;
            integrate_generalized_with(ml, &spec, tol)
        })
        .collect();
    let mut out = Vec::with_capacity(mus.len());
    for (r, &mu) in results.into_iter().zip(mus) {
        out.push((mu, value_or_best(r, exhausted)?.value.norm()));
    }
    Ok(out)
}

/// |I_{α,β}(μa⁰)|·μ^{1/|κ|} over `mus` for a⁰ on the unit sphere of the
/// coefficient ℓ¹ norm, with |D^κ P(a⁰, ·)| bounded below on [0, 1]ⁿ and
/// |κ| ≥ 2.
pub fn verify_lemma1(a0: &PolyPhase, kappa: &MultiIndex, ml: MLParams, mus: &[f64], tol: f64) -> Result<BoundReport> {
    check_tol(tol)?;
    ml.check_integral_range()?;
    let norm = a0.coeff_norm(NormMode::L1All);
    if (norm - 1.0).abs() > SPHERE_TOL {
        return Err(Error::Precondition(format!("coefficient norm {norm} is not 1")));
    }
    if kappa.order() < 2 {
        return Err(Error::Precondition(format!(
            "|kappa| = {} must be at least 2",
            kappa.order()
        )));
    }
    let min = min_abs_derivative(a0, kappa)?;
    if !(min > DERIVATIVE_TOL) {
        return Err(Error::DerivativeCondition {
            min_value: min,
            required: DERIVATIVE_TOL,
        });
    }
    if mus.len() < 3 {
        return Err(Error::InsufficientPoints(mus.len()));
    }
    let refined = refine_geometric(mus);
    let evaluator = MittagLeffler::new(ml);
    let domain = Domain::unit_cube(a0.dim())?;
    let mut exhausted = 0;
    let values = ray_integrals(
        &evaluator,
        a0,
        &Amplitude::one(),
        &domain,
        &refined,
        tol,
        &mut exhausted,
    )?;
    let power = 1.0 / kappa.order() as f64;
    let samples = values
        .iter()
        .enumerate()
        .map(|(i, &(mu, v))| Sample::new(vec![mu], v, mu.powf(-power), i % 2 == 0, 0, Sweep::Magnitude(mu)))
        .collect();
    Assembly::new(TheoremId::Lem1, &["mu"], samples)
        .note("alpha", ml.alpha())
        .note("beta", ml.beta())
        .note("kappa_order", kappa.order())
        .note("min_derivative", format!("{min:e}"))
        .note("budget_exhausted_rows", exhausted)
        .note("tol", tol)
        .finish()
}

/// Both candidate normalisations for rays P = μa: |I|·‖μa‖^{1/d} and
/// |I|·‖μa‖^{1/α}.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem2Report {
    /// Ratio with exponent 1/d.
    pub by_degree: BoundReport,
    /// Ratio with exponent 1/α.
    pub by_alpha: BoundReport,
    /// Per family: last over first ratio with exponent 1/α on the base grid.
    pub alpha_growth: Vec<f64>,
    /// Per family: whether that ratio is non-decreasing along the sweep.
    pub alpha_monotone: Vec<bool>,
}

/// Rays μ·a for each family direction a over `mus`, on the unit cube of the
/// family's dimension. ‖·‖ is the ℓ¹ norm over non-constant coefficients and
/// d the degree of the family.
pub fn verify_theorem2(
    ml: MLParams,
    amplitude: &Amplitude,
    families: &[PolyPhase],
    mus: &[f64],
    tol: f64,
) -> Result<Theorem2Report> {
    check_tol(tol)?;
    ml.check_integral_range()?;
    if families.is_empty() {
        return Err(Error::InvalidArgument("no ray families".into()));
    }
    if mus.len() < 3 {
        return Err(Error::InsufficientPoints(mus.len()));
    }
    let refined = refine_geometric(mus);
    let evaluator = MittagLeffler::new(ml);
    let inv_alpha = 1.0 / ml.alpha();
    let (mut by_d, mut by_a) = (Vec::new(), Vec::new());
    let mut exhausted = 0;
    let mut growth = Vec::new();
    let mut monotone = Vec::new();
    for (f, a) in families.iter().enumerate() {
        let d = a.degree();
        let norm = a.coeff_norm(NormMode::L1NonConstant);
        if d == 0 || norm == 0.0 {
            return Err(Error::Precondition(format!("family {f} has no non-constant terms")));
        }
        let domain = Domain::unit_cube(a.dim())?;
        let values = ray_integrals(&evaluator, a, amplitude, &domain, &refined, tol, &mut exhausted)?;
        let inv_d = 1.0 / d as f64;
        let mut base_alpha = Vec::new();
        for (i, &(mu, v)) in values.iter().enumerate() {
            let size = mu * norm;
            let params = vec![f as f64, d as f64, mu];
            by_d.push(Sample::new(
                params.clone(),
                v,
                size.powf(-inv_d),
                i % 2 == 0,
                f,
                Sweep::Magnitude(size),
            ));
            let s = Sample::new(params, v, size.powf(-inv_alpha), i % 2 == 0, f, Sweep::Magnitude(size));
            if s.base {
                base_alpha.push(s.row.ratio);
            }
            by_a.push(s);
        }
        growth.push(base_alpha.last().unwrap() / base_alpha[0]);
        monotone.push(base_alpha.windows(2).all(|w| w[1] >= w[0]));
    }
    let names = ["family", "degree", "mu"];
    let finish = |samples, exponent: &str| {
        Assembly::new(TheoremId::Thm2, &names, samples)
            .note("exponent", exponent)
            .note("alpha", ml.alpha())
            .note("beta", ml.beta())
            .note("budget_exhausted_rows", exhausted)
            .note("tol", tol)
            .finish()
    };
    Ok(Theorem2Report {
        by_degree: finish(by_d, "1/d")?,
        by_alpha: finish(by_a, "1/alpha")?,
        alpha_growth: growth,
        alpha_monotone: monotone,
    })
}

/// A (p, q) grid of `n × n` points on [−scale, scale]² and its refinement,
/// with the base flag.
fn pq_grid(n: usize, scale: f64) -> Result<Vec<(f64, f64, bool)>> {
    if n < 2 || !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "grid {n}x{n} on scale {scale} is not usable"
        )));
    }
    let axis = refine_linear(&linspace(-scale, scale, n));
    let mut out = Vec::with_capacity(axis.len() * axis.len());
    for (i, &p) in axis.iter().enumerate() {
        for (j, &q) in axis.iter().enumerate() {
            out.push((p, q, i % 2 == 0 && j % 2 == 0));
        }
    }
    Ok(out)
}

/// Approach to a double root: p = −3t², q = 2t³ + ε over t ∈ [0.1, 1]
/// (10 points) and ε = 10^{-1}, …, 10^{-6}, both refined. Each t is its own
/// family, swept in 1/ε.
fn degenerate_family() -> Vec<(f64, f64, f64, f64, bool)> {
    let ts = refine_linear(&linspace(0.1, 1.0, 10));
    let eps = refine_geometric(&(1..=6).map(|k| 10f64.powi(-k)).collect::<Vec<_>>());
    let mut out = Vec::new();
    for (i, &t) in ts.iter().enumerate() {
        for (j, &e) in eps.iter().enumerate() {
            out.push((t, e, -3.0 * t * t, 2.0 * t * t * t + e, i % 2 == 0 && j % 2 == 0));
        }
    }
    out
}

/// Which estimate applies to δ: case 1 for 1/3 < δ ≤ 1/2, case 2 for
/// 1/2 < δ < 1.
pub fn theorem3_case(delta: f64) -> Result<TheoremId> {
    if delta > 1.0 / 3.0 && delta <= 0.5 {
        Ok(TheoremId::Thm3Case1)
    } else if delta > 0.5 && delta < 1.0 {
        Ok(TheoremId::Thm3Case2)
    } else {
        Err(Error::CaseRouting(delta))
    }
}

/// ∫₋₁¹ |x³ + px + q|^{−δ} dx against
/// case 1: (|p|³/27 + q²/4)^{−(3δ−1)/6},
/// case 2: |D|^{−(δ−1/2)} (|p|³/27 + q²/4)^{−(2−3δ)/6},
/// over an `n × n` grid on [−scale, scale]² and the approach family
/// p = −3t², q = 2t³ + ε. Rows with p = q = 0, and in case 2 rows with
/// D = 0, are skipped.
pub fn verify_theorem3(delta: f64, n: usize, scale: f64, tol: f64) -> Result<BoundReport> {
    check_tol(tol)?;
    let case = theorem3_case(delta)?;
    let rhs = |p: f64, q: f64| -> Option<f64> {
        let inv = depressed_discriminant(p, q);
        let m = inv.magnitude();
        if m == 0.0 {
            return None;
        }
        match case {
            TheoremId::Thm3Case1 => Some(m.powf(-(3.0 * delta - 1.0) / 6.0)),
            _ if inv.is_degenerate() => None,
            _ => Some(inv.discriminant.abs().powf(-(delta - 0.5)) * m.powf(-(2.0 - 3.0 * delta) / 6.0)),
        }
    };
    let mut tasks: Vec<(Vec<f64>, f64, f64, bool, usize, Sweep)> = Vec::new();
    for (p, q, base) in pq_grid(n, scale)? {
        tasks.push((vec![0.0, p, q, 0.0], p, q, base, 0, Sweep::None));
    }
    for (k, (t, e, p, q, base)) in degenerate_family().into_iter().enumerate() {
        tasks.push((vec![1.0, p, q, e], p, q, base, 1 + k / 11, Sweep::Approach(1.0 / e)));
        if case == TheoremId::Thm3Case1 && k % 11 == 0 {
            // the limit ε = 0 itself, where the integral still converges
            let (p, q) = (-3.0 * t * t, 2.0 * t * t * t);
            tasks.push((vec![1.0, p, q, 0.0], p, q, base, 1 + k / 11, Sweep::None));
        }
    }
    let evaluated: Vec<Result<Option<Sample>>> = tasks
        .into_par_iter()
        .map(|(params, p, q, base, family, sweep)| {
            let Some(r) = rhs(p, q) else { return Ok(None) };
            match integrate_singular(p, q, delta, tol) {
                Ok(v) => Ok(Some(Sample::new(params, v, r, base, family, sweep))),
                Err(Error::DivergentIntegral { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut samples = Vec::new();
    let mut skipped = 0;
    for r in evaluated {
        match r? {
            Some(s) => samples.push(s),
            None => skipped += 1,
        }
    }
    let mut asm = Assembly::new(case, &["family", "p", "q", "eps"], samples)
        .note("delta", delta)
        .note("grid", format!("{n}x{n}"))
        .note("scale", scale)
        .note("tol", tol);
    asm.skipped = skipped;
    asm.finish()
}

/// A named, ordered list of cubics. `sweep` gives the magnitude or approach
/// parameter per member, if the family is a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicFamily {
    pub name: String,
    pub members: Vec<(f64, BinaryCubic)>,
    pub kind: FamilyKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// Isolated cubics; no refinement.
    Fixed,
    /// The parameter grows; odd members form the refinement.
    Magnitude,
    /// The parameter (1/ε) pushes toward D = 0; odd members form the
    /// refinement. The tail slope is reported but does not decide the
    /// verdict, since the ratio may approach a finite limit arbitrarily
    /// slowly.
    Approach,
}

/// A few non-degenerate cubics, the scaling ray t·(1, 0, 0, 1) for
/// t ∈ [1, 10³] and the approaches 3x²y ± εy³ to a double root.
pub fn default_theorem4_families() -> Vec<CubicFamily> {
    let fixed = [
        (1.0, 0.0, 1.0, 0.0),
        (1.0, 0.0, 0.0, 1.0),
        (1.0, 0.0, -1.0, 0.0),
        (0.5, -1.0, 0.25, 2.0),
        (-2.0, 0.5, 1.0, 0.75),
    ];
    let cubic = |a: (f64, f64, f64, f64)| BinaryCubic::new(a.0, a.1, a.2, a.3).unwrap();
    let ts = refine_geometric(&log_grid(1.0, 1e3, 4).unwrap());
    let eps = refine_geometric(&(0..=6).map(|k| 10f64.powi(-k)).collect::<Vec<_>>());
    vec![
        CubicFamily {
            name: "fixed".into(),
            members: fixed.iter().map(|&a| (0.0, cubic(a))).collect(),
            kind: FamilyKind::Fixed,
        },
        CubicFamily {
            name: "scaled".into(),
            members: ts.iter().map(|&t| (t, cubic((t, 0.0, 0.0, t)))).collect(),
            kind: FamilyKind::Magnitude,
        },
        CubicFamily {
            name: "double_root_complex".into(),
            members: eps.iter().map(|&e| (1.0 / e, cubic((0.0, 1.0, 0.0, e)))).collect(),
            kind: FamilyKind::Approach,
        },
        CubicFamily {
            name: "double_root_real".into(),
            members: eps.iter().map(|&e| (1.0 / e, cubic((0.0, 1.0, 0.0, -e)))).collect(),
            kind: FamilyKind::Approach,
        },
    ]
}

/// |∫_{|x|≤1} E_{α,β}(iP₃(x)) ψ(x) dx|·|D|^{1/6}/‖ψ‖∞ over the families.
/// Cubics with D = 0 are flagged and skipped.
pub fn verify_theorem4(families: &[CubicFamily], ml: MLParams, amplitude: &Amplitude, tol: f64) -> Result<BoundReport> {
    check_tol(tol)?;
    ml.check_integral_range()?;
    if let Some(n) = amplitude.dim() {
        if n != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: n });
        }
    }
    let sup = amplitude.sup_norm(&Domain::unit_disc());
    if !(sup > 0.0) {
        return Err(Error::Precondition("amplitude vanishes on the disc".into()));
    }
    let evaluator = MittagLeffler::new(ml);
    let mut tasks = Vec::new();
    for (f, fam) in families.iter().enumerate() {
        for (i, (s, c)) in fam.members.iter().enumerate() {
            let (base, sweep) = match fam.kind {
                FamilyKind::Fixed => (true, Sweep::None),
                FamilyKind::Magnitude => (i % 2 == 0, Sweep::Magnitude(*s)),
                FamilyKind::Approach => (i % 2 == 0, Sweep::Approach(*s)),
            };
            tasks.push((f, *s, *c, base, sweep));
        }
    }
    let evaluated: Vec<Result<Option<(Sample, bool)>>> = tasks
        .into_par_iter()
        .map(|(f, s, c, base, sweep)| {
            let d = binary_discriminant(&c);
            let scale = c.max_abs_coeff().powi(4);
            if d == 0.0 || d.abs() <= 1e-14 * scale {
                return Ok(None);
            }
            let r = integrate_homogeneous_cubic_with(&evaluator, &c, amplitude, tol);
            let exhausted = matches!(r, Err(Error::BudgetExceeded { .. }));
            let v = match r {
                Err(Error::BudgetExceeded { best, .. }) => *best,
                other => other?,
            };
            let params = vec![f as f64, s, c.a0, c.a1, c.a2, c.a3, d];
            Ok(Some((
                Sample::new(params, v.value.norm() / sup, d.abs().powf(-1.0 / 6.0), base, f, sweep),
                exhausted,
            )))
        })
        .collect();
    let mut samples = Vec::new();
    let (mut skipped, mut exhausted) = (0, 0);
    for r in evaluated {
        match r? {
            Some((s, e)) => {
                exhausted += e as usize;
                samples.push(s);
            }
            None => skipped += 1,
        }
    }
    let names: Vec<String> = families.iter().map(|f| f.name.clone()).collect();
    let mut asm = Assembly::new(
        TheoremId::Thm4,
        &["family", "sweep", "a0", "a1", "a2", "a3", "discriminant"],
        samples,
    )
    .note("families", names.join(" "))
    .note("alpha", ml.alpha())
    .note("beta", ml.beta())
    .note("amplitude_sup", sup)
    .note("budget_exhausted_rows", exhausted)
    .note("tol", tol);
    asm.skipped = skipped;
    asm.finish()
}

/// J₂(p, q)·|D(φ)|^{1/6}, D(φ) = p³/27 + q²/4, over an `n × n` grid on
/// [−scale, scale]² and, if `family`, the approach p = −3t², q = 2t³ + ε.
/// Rows with D(φ) = 0 are skipped.
pub fn verify_lemma2(n: usize, scale: f64, family: bool, tol: f64) -> Result<BoundReport> {
    check_tol(tol)?;
    let mut tasks: Vec<(Vec<f64>, f64, f64, bool, usize, Sweep)> = Vec::new();
    for (p, q, base) in pq_grid(n, scale)? {
        tasks.push((vec![0.0, p, q, 0.0], p, q, base, 0, Sweep::None));
    }
    if family {
        for (k, (_, e, p, q, base)) in degenerate_family().into_iter().enumerate() {
            tasks.push((vec![1.0, p, q, e], p, q, base, 1 + k / 11, Sweep::Approach(1.0 / e)));
        }
    }
    let evaluated: Vec<Result<Option<Sample>>> = tasks
        .into_par_iter()
        .map(|(params, p, q, base, f, sweep)| {
            let inv = depressed_discriminant(p, q);
            if inv.is_degenerate() {
                return Ok(None);
            }
            let j = angular_j2(p, q, tol)?;
            Ok(Some(Sample::new(
                params,
                j,
                inv.discriminant.abs().powf(-1.0 / 6.0),
                base,
                f,
                sweep,
            )))
        })
        .collect();
    let mut samples = Vec::new();
    let mut skipped = 0;
    for r in evaluated {
        match r? {
            Some(s) => samples.push(s),
            None => skipped += 1,
        }
    }
    let mut asm = Assembly::new(TheoremId::Lem2, &["family", "p", "q", "eps"], samples)
        .note("grid", format!("{n}x{n}"))
        .note("scale", scale)
        .note("tol", tol);
    asm.skipped = skipped;
    asm.finish()
}
