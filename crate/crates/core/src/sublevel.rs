//! Sublevel-set measures |{x ∈ [0, 1]ⁿ : |P(x)| ≤ μ}| by lattice counting or
//! Monte Carlo, and the power-law fit μ^{1/|κ|} against them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{fit_decay, FitResult};
use crate::error::{Error, Result};
use crate::polynomials::{MultiIndex, PolyPhase};

pub const MIN_SIZE: usize = 100;
pub const DEFAULT_MC_SAMPLES: usize = 1_000_000;
/// Tolerance on the derivative condition |D^κ P| ≥ 1.
pub const DERIVATIVE_TOL: f64 = 1e-9;

const MC_CHUNK: usize = 1 << 14;
/// Per-axis cap of the sampling grid used for the derivative condition.
const CHECK_PER_AXIS: usize = 4096;
const CHECK_CAP: usize = 1 << 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SublevelMethod {
    Grid,
    MonteCarlo,
}

impl SublevelMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            SublevelMethod::Grid => "grid",
            SublevelMethod::MonteCarlo => "monte_carlo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SublevelEstimate {
    /// Fraction of the unit cube.
    pub measure: f64,
    pub method: SublevelMethod,
    /// Cells per axis for the grid, number of samples for Monte Carlo.
    pub resolution_or_samples: usize,
    /// 95% half-width; zero for the grid.
    pub ci_halfwidth: f64,
}

/// Default size: 2048 cells per axis up to two dimensions, 512 in three, 10⁶
/// Monte Carlo samples.
pub fn default_size(method: SublevelMethod, dim: usize) -> usize {
    match method {
        SublevelMethod::Grid if dim <= 2 => 2048,
        SublevelMethod::Grid => 512,
        SublevelMethod::MonteCarlo => DEFAULT_MC_SAMPLES,
    }
}

pub fn sublevel_measure(
    p: &PolyPhase,
    mu: f64,
    method: SublevelMethod,
    size: usize,
    seed: u64,
) -> Result<SublevelEstimate> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidArgument(format!("mu = {mu} must be positive")));
    }
    if size < MIN_SIZE {
        return Err(Error::InvalidArgument(format!("size {size} below {MIN_SIZE}")));
    }
    let n = p.dim();
    if n > 3 {
        return Err(Error::InvalidDomain(format!("cube dimension {n} outside 1..=3")));
    }
    match method {
        SublevelMethod::Grid => {
            let cells = size
                .checked_pow(n as u32)
                .filter(|c| *c <= 1 << 34)
                .ok_or_else(|| Error::InvalidArgument(format!("grid of {size}^{n} cells is too large")))?;
            let hits = grid_count(p, mu, size);
            Ok(SublevelEstimate {
                measure: hits as f64 / cells as f64,
                method,
                resolution_or_samples: size,
                ci_halfwidth: 0.0,
            })
        }
        SublevelMethod::MonteCarlo => {
            let hits = mc_count(p, mu, size, seed);
            let m = hits as f64 / size as f64;
            Ok(SublevelEstimate {
                measure: m,
                method,
                resolution_or_samples: size,
                ci_halfwidth: 1.96 * (m * (1.0 - m) / size as f64).sqrt(),
            })
        }
    }
}

/// Cell centres with |P| ≤ μ; parallel over the first axis, summed as
/// integers so the count does not depend on scheduling.
fn grid_count(p: &PolyPhase, mu: f64, size: usize) -> u64 {
    let n = p.dim();
    let h = 1.0 / size as f64;
    let center = |i: usize| (i as f64 + 0.5) * h;
    (0..size)
        .into_par_iter()
        .map(|i| {
            let mut x = [center(i), 0.0, 0.0];
            let mut hits = 0u64;
            match n {
                1 => hits += (p.eval_unchecked(&x[..1]).abs() <= mu) as u64,
                2 => {
                    for j in 0..size {
                        x[1] = center(j);
                        hits += (p.eval_unchecked(&x[..2]).abs() <= mu) as u64;
                    }
                }
                _ => {
                    for j in 0..size {
                        x[1] = center(j);
                        for k in 0..size {
                            x[2] = center(k);
                            hits += (p.eval_unchecked(&x).abs() <= mu) as u64;
                        }
                    }
                }
            }
            hits
        })
        .sum()
}

/// Sample k uses the ChaCha8 stream of `seed` from word position 2nk, so each
/// sample is fixed by (seed, k) whatever the chunking.
fn mc_count(p: &PolyPhase, mu: f64, samples: usize, seed: u64) -> u64 {
    let n = p.dim();
    let chunks = samples.div_ceil(MC_CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * MC_CHUNK;
            let end = (start + MC_CHUNK).min(samples);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_word_pos((2 * n * start) as u128);
            let mut x = [0.0; 3];
            let mut hits = 0u64;
            for _ in start..end {
                for v in x.iter_mut().take(n) {
                    *v = rng.gen::<f64>();
                }
                hits += (p.eval_unchecked(&x[..n]).abs() <= mu) as u64;
            }
            hits
        })
        .sum()
}

/// Smallest |D^κ P| over a uniform grid on [0, 1]ⁿ (edges included).
pub fn min_abs_derivative(p: &PolyPhase, kappa: &MultiIndex) -> Result<f64> {
    let d = p.partial_derivative(kappa)?;
    let n = p.dim();
    let per_axis = CHECK_PER_AXIS.min((CHECK_CAP as f64).powf(1.0 / n as f64).floor() as usize);
    let points = (per_axis + 1).pow(n as u32);
    let min = (0..points)
        .into_par_iter()
        .map(|mut k| {
            let mut x = [0.0; 3];
            for v in x.iter_mut().take(n) {
                *v = (k % (per_axis + 1)) as f64 / per_axis as f64;
                k /= per_axis + 1;
            }
            d.eval_unchecked(&x[..n]).abs()
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(min)
}

/// Power-law fit of the sublevel measure.
#[derive(Debug, Clone, PartialEq)]
pub struct CcwFit {
    /// Slope of log measure against log μ.
    pub slope: f64,
    /// max over the μ grid of measure / μ^{1/|κ|}.
    pub constant: f64,
    pub fit: FitResult,
    pub measures: Vec<(f64, SublevelEstimate)>,
}

/// Grid measures over `mus` at the default resolution.
pub fn verify_ccw(p: &PolyPhase, kappa: &MultiIndex, mus: &[f64]) -> Result<CcwFit> {
    verify_ccw_with(p, kappa, mus, default_size(SublevelMethod::Grid, p.dim()))
}

pub fn verify_ccw_with(p: &PolyPhase, kappa: &MultiIndex, mus: &[f64], size: usize) -> Result<CcwFit> {
    if kappa.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: kappa.dim(),
        });
    }
    if kappa.order() == 0 {
        return Err(Error::InvalidArgument("kappa must have positive order".into()));
    }
    let min = min_abs_derivative(p, kappa)?;
    if min < 1.0 - DERIVATIVE_TOL {
        return Err(Error::DerivativeCondition {
            min_value: min,
            required: 1.0,
        });
    }
    let power = 1.0 / kappa.order() as f64;
    let mut measures = Vec::with_capacity(mus.len());
    for &mu in mus {
        measures.push((mu, sublevel_measure(p, mu, SublevelMethod::Grid, size, 0)?));
    }
    let points: Vec<(f64, f64)> = measures.iter().map(|(mu, e)| (*mu, e.measure)).collect();
    let fit = fit_decay(&points)?;
    let constant = measures
        .iter()
        .map(|(mu, e)| e.measure / mu.powf(power))
        .fold(0.0, f64::max);
    Ok(CcwFit {
        slope: fit.slope,
        constant,
        fit,
        measures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_and_square() {
        let x = PolyPhase::monomial(1.0, vec![1]).unwrap();
        let e = sublevel_measure(&x, 0.25, SublevelMethod::Grid, 1000, 0).unwrap();
        assert!((e.measure - 0.25).abs() <= 1.0 / 1000.0);
        let x2 = PolyPhase::monomial(1.0, vec![2]).unwrap();
        let e = sublevel_measure(&x2, 0.25, SublevelMethod::Grid, 2048, 0).unwrap();
        assert!((e.measure - 0.5).abs() <= 1.0 / 2048.0);
    }

    #[test]
    fn argument_checks() {
        let x = PolyPhase::monomial(1.0, vec![1]).unwrap();
        assert!(sublevel_measure(&x, 0.0, SublevelMethod::Grid, 1000, 0).is_err());
        assert!(sublevel_measure(&x, 0.1, SublevelMethod::Grid, 99, 0).is_err());
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let p = PolyPhase::monomial(1.0, vec![1, 1]).unwrap();
        let a = sublevel_measure(&p, 0.1, SublevelMethod::MonteCarlo, 50_000, 9).unwrap();
        let b = sublevel_measure(&p, 0.1, SublevelMethod::MonteCarlo, 50_000, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.ci_halfwidth > 0.0);
    }

    #[test]
    fn derivative_condition() {
        let x2 = PolyPhase::monomial(1.0, vec![2]).unwrap();
        let mus = [1e-4, 1e-3, 1e-2];
        assert!(matches!(
            verify_ccw(&x2, &MultiIndex::single(1), &mus),
            Err(Error::DerivativeCondition { .. })
        ));
        assert!(verify_ccw(&x2, &MultiIndex::single(2), &mus).is_ok());
    }
}
