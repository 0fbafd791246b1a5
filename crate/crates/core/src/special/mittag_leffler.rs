//! Two-parameter Mittag-Leffler function
//!
//! E_{α,β}(z) = Σ_{k≥0} z^k / Γ(αk + β).
//!
//! Three evaluation routes, tried in order:
//!
//! 1. the power series, for |z| ≤ 5 and only while the summation is free of
//!    cancellation (the sum of |terms| is tracked and compared against the
//!    result);
//! 2. the large-argument expansion
//!    E ≈ Σ_poles (1/α) s^{1-β} e^{s} - Σ_{k=1..K} z^{-k} / Γ(β - αk),
//!    truncated at its smallest term, accepted when that term is below the
//!    internal tolerance;
//! 3. the Laplace-inversion contour integral (see [`super::contour`]).
//!
//! On the imaginary axis route 3 is replaced by a Chebyshev table built
//! from it on first use.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::contour::{eval_contour, principal_poles};
use super::gamma::{ln_gamma, recip_gamma};
use super::imag_table::ImagAxisTable;
use crate::error::{Error, Result};

/// Default radius below which the power series is attempted.
pub const SERIES_RADIUS: f64 = 5.0;
const SERIES_MAX_TERMS: usize = 10_000;
/// Series is attempted only where Σ c_k r^k stays below this.
const SERIES_GATE: f64 = 1.0e3;
/// Relative accuracy demanded of the series and the expansion.
const INTERNAL_TOL: f64 = 1e-13;
const POLE_SKIP: f64 = 1e-8;
const TABLE_MAX_END: f64 = 400.0;

/// Parameters (α, β) of E_{α,β}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLParams {
    alpha: f64,
    beta: f64,
}

impl MLParams {
    /// Accepts 0 < α < 2 and β > 0.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParams {
                alpha,
                beta,
                reason: "parameters must be finite",
            });
        }
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::InvalidParams {
                alpha,
                beta,
                reason: "alpha must lie in (0, 2)",
            });
        }
        if !(beta > 0.0) {
            return Err(Error::InvalidParams {
                alpha,
                beta,
                reason: "beta must be positive",
            });
        }
        Ok(Self { alpha, beta })
    }

    /// The exponential carrier, α = β = 1.
    pub fn classical() -> Self {
        Self { alpha: 1.0, beta: 1.0 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_classical(&self) -> bool {
        self.alpha == 1.0 && self.beta == 1.0
    }

    /// Range admitted for generalized oscillatory integrals: 0 < α < 1, or the
    /// classical case α = β = 1.
    pub fn check_integral_range(&self) -> Result<()> {
        if (self.alpha > 0.0 && self.alpha < 1.0) || self.is_classical() {
            Ok(())
        } else {
            Err(Error::InvalidParams {
                alpha: self.alpha,
                beta: self.beta,
                reason: "integrals need 0 < alpha < 1 (or alpha = beta = 1)",
            })
        }
    }
}

/// Which route produced a value; exposed for diagnostics and tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Series,
    Asymptotic,
    Contour,
    Table,
}

/// Evaluator for E_{α,β} with precomputed coefficients. Cheap to share
/// across threads; the imaginary-axis table is built lazily once.
#[derive(Debug)]
pub struct MittagLeffler {
    params: MLParams,
    series_coeffs: Vec<f64>,
    asym_coeffs: Vec<f64>,
    series_radius: f64,
    imag: OnceLock<std::result::Result<ImagAxisTable, Error>>,
}

impl MittagLeffler {
    pub fn new(params: MLParams) -> Self {
        let (alpha, beta) = (params.alpha, params.beta);
        let mut series_coeffs = Vec::new();
        for k in 0..SERIES_MAX_TERMS {
            let c = recip_gamma(alpha * k as f64 + beta);
            if c == 0.0 || !c.is_finite() {
                break;
            }
            series_coeffs.push(c);
        }
        let mut asym_coeffs = Vec::new();
        let kmax = ((beta + 165.0) / alpha).floor().min(400.0) as usize;
        for k in 1..=kmax {
            let x = beta - alpha * k as f64;
            let nearest = x.round();
            let c = if nearest <= 0.0 && (x - nearest).abs() < POLE_SKIP {
                0.0
            } else {
                recip_gamma(x)
            };
            if !c.is_finite() {
                break;
            }
            asym_coeffs.push(c);
        }
        let series_radius = series_radius(alpha, beta);
        Self {
            params,
            series_coeffs,
            asym_coeffs,
            series_radius,
            imag: OnceLock::new(),
        }
    }

    pub fn params(&self) -> MLParams {
        self.params
    }

    /// E_{α,β}(z).
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.eval_routed(z).map(|(v, _)| v)
    }

    /// E_{α,β}(z) together with the route that produced it.
    pub fn eval_routed(&self, z: Complex64) -> Result<(Complex64, Route)> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFinite("Mittag-Leffler argument"));
        }
        if z.im < 0.0 {
            // real α, β: E(conj z) = conj E(z)
            return self.eval_routed(z.conj()).map(|(v, r)| (v.conj(), r));
        }
        if z.re == 0.0 {
            return self.eval_imag_routed(z.im);
        }
        if z.norm() <= self.series_radius {
            if let Some(v) = self.series(z) {
                return Ok((v, Route::Series));
            }
        }
        if let Some(v) = self.asymptotic(z) {
            return Ok((v, Route::Asymptotic));
        }
        eval_contour(self.params.alpha, self.params.beta, z).map(|v| (v, Route::Contour))
    }

    /// E_{α,β}(iy) for real y.
    pub fn eval_imag(&self, y: f64) -> Result<Complex64> {
        self.eval_imag_routed(y).map(|(v, _)| v)
    }

    fn eval_imag_routed(&self, y: f64) -> Result<(Complex64, Route)> {
        if !y.is_finite() {
            return Err(Error::NonFinite("Mittag-Leffler argument"));
        }
        if y < 0.0 {
            return self.eval_imag_routed(-y).map(|(v, r)| (v.conj(), r));
        }
        if y == 0.0 {
            return Ok((Complex64::new(self.series_coeffs[0], 0.0), Route::Series));
        }
        let z = Complex64::new(0.0, y);
        if y <= self.series_radius {
            if let Some(v) = self.series(z) {
                return Ok((v, Route::Series));
            }
        }
        let table = self.imag_table()?;
        if y <= table.end() {
            return Ok((table.eval(y), Route::Table));
        }
        if let Some(v) = self.asymptotic(z) {
            return Ok((v, Route::Asymptotic));
        }
        eval_contour(self.params.alpha, self.params.beta, z).map(|v| (v, Route::Contour))
    }

    fn imag_table(&self) -> Result<&ImagAxisTable> {
        self.imag
            .get_or_init(|| {
                let end = self.asymptotic_onset_imag();
                ImagAxisTable::build(end, |y| self.eval_imag_slow(y))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Accurate E(iy) without the table.
    fn eval_imag_slow(&self, y: f64) -> Result<Complex64> {
        let z = Complex64::new(0.0, y);
        if y == 0.0 {
            return Ok(Complex64::new(self.series_coeffs[0], 0.0));
        }
        if y <= self.series_radius {
            if let Some(v) = self.series(z) {
                return Ok(v);
            }
        }
        if let Some(v) = self.asymptotic(z) {
            return Ok(v);
        }
        eval_contour(self.params.alpha, self.params.beta, z)
    }

    /// Smallest y on a 0.25 grid from which the expansion is accepted for at
    /// least the following 10 units of y.
    fn asymptotic_onset_imag(&self) -> f64 {
        let step = 0.25;
        let run_needed = 40;
        let mut start: Option<f64> = None;
        let mut run = 0;
        let mut y = step;
        while y <= TABLE_MAX_END {
            if self.asymptotic(Complex64::new(0.0, y)).is_some() {
                if start.is_none() {
                    start = Some(y);
                }
                run += 1;
                if run >= run_needed {
                    return start.unwrap_or(y);
                }
            } else {
                start = None;
                run = 0;
            }
            y += step;
        }
        TABLE_MAX_END
    }

    /// Power series; `None` when cancellation would cost accuracy.
    pub(crate) fn series(&self, z: Complex64) -> Option<Complex64> {
        let mut w = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut abs_sum = 0.0;
        let mut terminated = false;
        for &c in &self.series_coeffs {
            let t = w * c;
            sum += t;
            let tm = t.norm();
            abs_sum += tm;
            if tm <= 1e-16 * sum.norm() {
                terminated = true;
                break;
            }
            w *= z;
            if !w.re.is_finite() || !w.im.is_finite() {
                return None;
            }
        }
        if !terminated && self.series_coeffs.len() == SERIES_MAX_TERMS {
            return None;
        }
        if 2.0 * f64::EPSILON * abs_sum > INTERNAL_TOL * sum.norm() {
            return None;
        }
        Some(sum)
    }

    /// Large-argument expansion truncated at its smallest term; `None` when
    /// that term exceeds the internal tolerance.
    pub(crate) fn asymptotic(&self, z: Complex64) -> Option<Complex64> {
        let (alpha, beta) = (self.params.alpha, self.params.beta);
        let mut exp_part = Complex64::new(0.0, 0.0);
        for (pole, weight) in principal_poles(alpha, z) {
            exp_part += pole.residue(alpha, beta) * weight;
        }
        if !exp_part.re.is_finite() || !exp_part.im.is_finite() {
            return None;
        }
        let zinv = z.inv();
        let mut w = zinv;
        let mut alg = Complex64::new(0.0, 0.0);
        let mut prev = f64::INFINITY;
        let mut omitted = 0.0;
        let mut last_nonzero = 0.0;
        let mut exhausted = true;
        for &c in &self.asym_coeffs {
            if c != 0.0 {
                let t = w * c;
                let m = t.norm();
                if m >= prev {
                    omitted = m;
                    exhausted = false;
                    break;
                }
                alg -= t;
                prev = m;
                last_nonzero = m;
                if m <= 1e-17 * (exp_part + alg).norm() {
                    omitted = m;
                    exhausted = false;
                    break;
                }
            }
            w *= zinv;
        }
        if exhausted {
            // either every remaining coefficient vanishes (α = 1, integer β)
            // or the table ran out while still decreasing
            omitted = if self.asym_tail_vanishes() { 0.0 } else { last_nonzero };
        }
        let total = exp_part + alg;
        if omitted <= INTERNAL_TOL * total.norm() && total.re.is_finite() && total.im.is_finite() {
            Some(total)
        } else {
            None
        }
    }

    fn asym_tail_vanishes(&self) -> bool {
        let n = self.asym_coeffs.len();
        n > 0 && self.asym_coeffs[n.saturating_sub(8)..].iter().all(|&c| c == 0.0)
    }

    /// Radius up to which the series is attempted.
    pub fn series_radius(&self) -> f64 {
        self.series_radius
    }
}

/// Largest r ≤ [`SERIES_RADIUS`] with Σ r^k / Γ(αk + β) ≤ [`SERIES_GATE`].
fn series_radius(alpha: f64, beta: f64) -> f64 {
    let log_sum = |r: f64| -> f64 {
        // log-sum-exp over k of k ln r - lnΓ(αk + β)
        let lr = r.ln();
        let mut best = f64::NEG_INFINITY;
        let mut terms = Vec::new();
        for k in 0..SERIES_MAX_TERMS {
            let l = k as f64 * lr - ln_gamma(alpha * k as f64 + beta).unwrap_or(f64::INFINITY);
            terms.push(l);
            best = best.max(l);
            if k > 10 && l < best - 60.0 {
                break;
            }
        }
        best + terms.iter().map(|t| (t - best).exp()).sum::<f64>().ln()
    };
    let gate = SERIES_GATE.ln();
    if log_sum(SERIES_RADIUS) <= gate {
        return SERIES_RADIUS;
    }
    let (mut lo, mut hi) = (1e-3, SERIES_RADIUS);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if log_sum(mid) <= gate {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// E_{α,β}(z) with a throwaway evaluator.
pub fn mittag_leffler(params: MLParams, z: Complex64) -> Result<Complex64> {
    MittagLeffler::new(params).eval(z)
}

/// |E_{α,β}(z)| (1 + |z|), defined where the algebraic decay holds:
/// |arg z| strictly above πα/2 (z = 0 is admitted).
pub fn ml_decay_ratio(params: MLParams, z: Complex64) -> Result<f64> {
    ml_decay_ratio_with(&MittagLeffler::new(params), z)
}

pub fn ml_decay_ratio_with(ml: &MittagLeffler, z: Complex64) -> Result<f64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite("Mittag-Leffler argument"));
    }
    if z.norm() > 0.0 {
        let arg = z.arg().abs();
        let bound = PI * ml.params.alpha / 2.0;
        if arg <= bound + 1e-12 {
            return Err(Error::SectorViolation { arg, bound });
        }
    }
    Ok(ml.eval(z)?.norm() * (1.0 + z.norm()))
}
