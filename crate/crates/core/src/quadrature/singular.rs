//! Integrals with algebraic endpoint singularities.
//!
//! A piece [a, b] whose endpoint a carries a factor |x − a|^{−e}, e < 1, is
//! cut into cells [a + w/2^{k+1}, a + w/2^k] down to width 1e-14; the last
//! cell [a, a + w_min] is mapped by x = a + w_min·u^γ with γ = 1/(1 − e),
//! which turns the singular factor into a bounded one.
//!
//! Integrands are called as `f(anchor, t)` with x = anchor + t, so factors
//! x − r can be formed as (anchor − r) + t without cancellation when the
//! anchor is the singular point itself.

use std::f64::consts::PI;

use super::adaptive::{integrate, pairwise_sum, Tolerance};
use super::QuadResult;
use crate::error::{Error, Result};
use crate::polynomials::{depressed_cubic_roots, depressed_discriminant};

pub(crate) const MIN_CELL: f64 = 1e-14;
const RATIO: f64 = 0.5;
const EDGE_SLACK: f64 = 1e-9;

/// One side of a piece: the singular point and its local exponent.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Endpoint {
    pub x: f64,
    pub exponent: Option<f64>,
}

#[derive(Debug, Default)]
pub(crate) struct Tally {
    pub value: Vec<f64>,
    pub error: f64,
    pub panels: usize,
    pub evals: usize,
    pub exhausted: bool,
}

impl Tally {
    fn into_result(self) -> QuadResult {
        QuadResult {
            value: pairwise_sum(&self.value).into(),
            error_estimate: self.error,
            panels_used: self.panels.max(1),
        }
    }
}

fn cell<F: Fn(f64, f64) -> f64>(f: &F, anchor: f64, t0: f64, t1: f64, tol: f64, budget: usize, tally: &mut Tally) {
    let (lo, hi) = if t0 < t1 { (t0, t1) } else { (t1, t0) };
    let out = integrate(
        |t| f(anchor, t),
        &[lo, hi],
        1,
        Tolerance::absolute(tol, budget.saturating_sub(tally.evals)),
    );
    tally.value.push(out.value);
    tally.error += out.error;
    tally.panels += out.panels;
    tally.evals += out.evals;
    if !out.converged && tally.evals + 30 > budget {
        tally.exhausted = true;
    }
}

/// Innermost cell with the power substitution; `dir` is +1 when the
/// singular point is the left end of the piece.
fn core_cell<F: Fn(f64, f64) -> f64>(
    f: &F,
    anchor: f64,
    width: f64,
    exponent: f64,
    dir: f64,
    tol: f64,
    budget: usize,
    tally: &mut Tally,
) {
    let gamma = 1.0 / (1.0 - exponent);
    let g = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let t = width * u.powf(gamma);
        f(anchor, dir * t) * width * gamma * u.powf(gamma - 1.0)
    };
    let out = integrate(
        g,
        &[0.0, 1.0],
        1,
        Tolerance::absolute(tol, budget.saturating_sub(tally.evals)),
    );
    tally.value.push(out.value);
    tally.error += out.error;
    tally.panels += out.panels;
    tally.evals += out.evals;
    if !out.converged && tally.evals + 30 > budget {
        tally.exhausted = true;
    }
}

/// Number of graded cells from width `w` down to [`MIN_CELL`].
fn levels(w: f64) -> usize {
    if w <= MIN_CELL {
        0
    } else {
        ((w / MIN_CELL).ln() / (1.0 / RATIO).ln()).ceil() as usize
    }
}

/// ∫ over [left.x, right.x] of f, with graded meshes toward singular ends.
pub(crate) fn integrate_piece<F: Fn(f64, f64) -> f64>(
    f: &F,
    left: Endpoint,
    right: Endpoint,
    tol: f64,
    budget: usize,
    tally: &mut Tally,
) {
    let (a, b) = (left.x, right.x);
    if !(b > a) {
        return;
    }
    match (left.exponent, right.exponent) {
        (None, None) => cell(f, a, 0.0, b - a, tol, budget, tally),
        (Some(_), Some(_)) => {
            let m = 0.5 * (a + b);
            let mid = Endpoint { x: m, exponent: None };
            integrate_piece(f, left, mid, 0.5 * tol, budget, tally);
            integrate_piece(f, mid, right, 0.5 * tol, budget, tally);
        }
        (Some(e), None) => graded(f, a, b - a, e, 1.0, tol, budget, tally),
        (None, Some(e)) => graded(f, b, b - a, e, -1.0, tol, budget, tally),
    }
}

fn graded<F: Fn(f64, f64) -> f64>(
    f: &F,
    anchor: f64,
    width: f64,
    exponent: f64,
    dir: f64,
    tol: f64,
    budget: usize,
    tally: &mut Tally,
) {
    let k = levels(width);
    let share = tol / (k + 1) as f64;
    let mut outer = width;
    for _ in 0..k {
        let inner = outer * RATIO;
        cell(f, anchor, dir * inner, dir * outer, share, budget, tally);
        if tally.exhausted {
            return;
        }
        outer = inner;
    }
    if exponent > 0.0 {
        core_cell(f, anchor, outer, exponent, dir, share, budget, tally);
    } else {
        cell(f, anchor, 0.0, dir * outer, share, budget, tally);
    }
}

fn finish(tally: Tally, budget: usize) -> Result<QuadResult> {
    let exhausted = tally.exhausted;
    let evals = tally.evals;
    let res = tally.into_result();
    if exhausted || evals > budget {
        return Err(Error::BudgetExceeded {
            evaluations: evals,
            best: Box::new(res),
        });
    }
    Ok(res)
}

/// A real zero of the cubic with its multiplicity.
#[derive(Debug, Clone, Copy)]
struct Zero {
    at: f64,
    multiplicity: u32,
}

/// x³ + px + q written through its roots so that values next to a root keep
/// full relative accuracy.
struct FactoredCubic {
    zeros: Vec<Zero>,
    /// Coefficients (b, c) of the irreducible factor x² + bx + c, if any.
    quadratic: Option<(f64, f64)>,
}

impl FactoredCubic {
    fn new(p: f64, q: f64) -> Self {
        let roots = depressed_cubic_roots(p, q);
        let zeros: Vec<Zero> = roots
            .iter()
            .map(|r| Zero {
                at: r.value,
                multiplicity: r.multiplicity,
            })
            .collect();
        let quadratic = if zeros.len() == 1 && zeros[0].multiplicity == 1 {
            let r = zeros[0].at;
            Some((r, r * r + p))
        } else {
            None
        };
        Self { zeros, quadratic }
    }

    /// |x³ + px + q| at x = anchor + t.
    fn abs_at(&self, anchor: f64, t: f64) -> f64 {
        let mut v = 1.0;
        for z in &self.zeros {
            let d = ((anchor - z.at) + t).abs();
            v *= d.powi(z.multiplicity as i32);
        }
        if let Some((b, c)) = self.quadratic {
            let x = anchor + t;
            v *= (x * x + b * x + c).abs();
        }
        v
    }
}

/// ∫₋₁¹ |x³ + px + q|^{−δ} dx.
pub fn integrate_singular(p: f64, q: f64, delta: f64, tol: f64) -> Result<f64> {
    if !p.is_finite() || !q.is_finite() {
        return Err(Error::NonFinite("cubic coefficient"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("delta = {delta} must lie in (0, 1)")));
    }
    check_tol(tol)?;
    let cubic = FactoredCubic::new(p, q);
    let mut near: Vec<Zero> = cubic
        .zeros
        .iter()
        .copied()
        .filter(|z| (-1.0 - EDGE_SLACK..=1.0 + EDGE_SLACK).contains(&z.at))
        .collect();
    near.sort_by(|a, b| a.at.total_cmp(&b.at));
    for z in near.iter().filter(|z| (-1.0..=1.0).contains(&z.at)) {
        let e = z.multiplicity as f64 * delta;
        if e >= 1.0 {
            return Err(Error::DivergentIntegral {
                location: z.at,
                multiplicity: z.multiplicity,
                exponent: e,
            });
        }
    }
    // roots just outside the interval still get a graded mesh at the edge
    let mut points = vec![Endpoint {
        x: -1.0,
        exponent: None,
    }];
    for z in &near {
        let ep = Endpoint {
            x: z.at.clamp(-1.0, 1.0),
            exponent: Some((z.multiplicity as f64 * delta).min(0.99)),
        };
        if ep.x == -1.0 {
            points[0] = ep;
        } else {
            points.push(ep);
        }
    }
    if points.last().map(|e| e.x) != Some(1.0) {
        points.push(Endpoint { x: 1.0, exponent: None });
    }
    let f = |anchor: f64, t: f64| cubic.abs_at(anchor, t).powf(-delta);
    let budget = super::MAX_EVALS;
    let mut tally = Tally::default();
    let share = tol / (points.len() - 1).max(1) as f64;
    for w in points.windows(2) {
        integrate_piece(&f, w[0], w[1], share, budget, &mut tally);
        if tally.exhausted {
            break;
        }
    }
    let res = finish(tally, budget)?;
    Ok(res.value.re)
}

/// ∫₀^{2π} |cos³θ + p cos θ sin²θ + q sin³θ|^{−2/3} dθ.
pub fn angular_j2(p: f64, q: f64, tol: f64) -> Result<f64> {
    if !p.is_finite() || !q.is_finite() {
        return Err(Error::NonFinite("cubic coefficient"));
    }
    check_tol(tol)?;
    // zeros sit where cot θ solves v³ + pv + q = 0
    let inv = depressed_discriminant(p, q);
    let roots = depressed_cubic_roots(p, q);
    let exponent = 2.0 / 3.0;
    if inv.is_degenerate() {
        let worst = roots.iter().max_by_key(|r| r.multiplicity).copied().unwrap();
        return Err(Error::DivergentIntegral {
            location: (1.0f64).atan2(worst.value),
            multiplicity: worst.multiplicity,
            exponent: exponent * worst.multiplicity as f64,
        });
    }
    let mut thetas: Vec<f64> = roots.iter().map(|r| 1.0f64.atan2(r.value)).collect();
    thetas.sort_by(f64::total_cmp);
    let quad = if roots.len() == 1 {
        let v = roots[0].value;
        Some((v, v * v + p))
    } else {
        None
    };
    let phi = |anchor: f64, t: f64| -> f64 {
        let theta = anchor + t;
        let mut v = 1.0;
        for &th in &thetas {
            v *= ((th - anchor) - t).sin() / th.sin();
        }
        if let Some((b, c)) = quad {
            let (s, co) = theta.sin_cos();
            v *= co * co + b * co * s + c * s * s;
        }
        v.abs().powf(-exponent)
    };
    let mut points = vec![Endpoint { x: 0.0, exponent: None }];
    for &th in &thetas {
        points.push(Endpoint {
            x: th,
            exponent: Some(exponent),
        });
    }
    points.push(Endpoint { x: PI, exponent: None });
    let budget = super::MAX_EVALS;
    let mut tally = Tally::default();
    let share = 0.5 * tol / (points.len() - 1) as f64;
    for w in points.windows(2) {
        integrate_piece(&phi, w[0], w[1], share, budget, &mut tally);
        if tally.exhausted {
            break;
        }
    }
    let res = finish(tally, budget)?;
    Ok(2.0 * res.value.re)
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if !(tol >= super::MIN_TOL) || !tol.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tol} must be at least {}",
            super::MIN_TOL
        )));
    }
    Ok(())
}
