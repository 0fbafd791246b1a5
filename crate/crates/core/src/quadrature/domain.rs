//! Integration domains, amplitudes and the integral specification.

use crate::error::{Error, Result};
use crate::polynomials::PolyPhase;
use crate::special::MLParams;

/// Largest number of points used when sampling an amplitude for its sup norm.
const SUP_SAMPLE_CAP: usize = 1 << 24;
const SUP_PER_AXIS: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    /// [0, 1]ⁿ.
    UnitCube(usize),
    Interval {
        lo: f64,
        hi: f64,
    },
    /// {x ∈ ℝ² : |x| ≤ 1}.
    UnitDisc,
}

impl Domain {
    pub fn unit_cube(n: usize) -> Result<Self> {
        if n == 0 || n > 3 {
            return Err(Error::InvalidDomain(format!("cube dimension {n} outside 1..=3")));
        }
        Ok(Domain::UnitCube(n))
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
            return Err(Error::InvalidDomain(format!(
                "interval [{lo}, {hi}] is empty or unbounded"
            )));
        }
        Ok(Domain::Interval { lo, hi })
    }

    pub fn unit_disc() -> Self {
        Domain::UnitDisc
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::UnitCube(n) => *n,
            Domain::Interval { .. } => 1,
            Domain::UnitDisc => 2,
        }
    }

    /// Bounding box, one (lo, hi) per axis.
    pub fn bounds(&self) -> Vec<(f64, f64)> {
        match self {
            Domain::UnitCube(n) => vec![(0.0, 1.0); *n],
            Domain::Interval { lo, hi } => vec![(*lo, *hi)],
            Domain::UnitDisc => vec![(-1.0, 1.0); 2],
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Domain::UnitDisc => x[0] * x[0] + x[1] * x[1] <= 1.0,
            _ => self.bounds().iter().zip(x).all(|((lo, hi), v)| lo <= v && v <= hi),
        }
    }

    /// Lebesgue measure.
    pub fn volume(&self) -> f64 {
        match self {
            Domain::UnitCube(_) => 1.0,
            Domain::Interval { lo, hi } => hi - lo,
            Domain::UnitDisc => std::f64::consts::PI,
        }
    }
}

/// The amplitude ψ.
#[derive(Debug, Clone, PartialEq)]
pub enum Amplitude {
    Constant(f64),
    Polynomial(PolyPhase),
    /// exp(1 − 1/(1 − |x − c|²/r²)) inside the ball, 0 outside; equals 1 at c.
    Bump {
        center: Vec<f64>,
        radius: f64,
    },
}

impl Amplitude {
    pub fn constant(c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidAmplitude("constant must be finite".into()));
        }
        Ok(Amplitude::Constant(c))
    }

    pub fn one() -> Self {
        Amplitude::Constant(1.0)
    }

    pub fn polynomial(p: PolyPhase) -> Self {
        Amplitude::Polynomial(p)
    }

    pub fn bump(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidAmplitude(format!(
                "bump radius {radius} must be positive"
            )));
        }
        if center.is_empty() || center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidAmplitude("bump center must be a finite point".into()));
        }
        Ok(Amplitude::Bump { center, radius })
    }

    /// Dimension the amplitude is tied to, if any.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Amplitude::Constant(_) => None,
            Amplitude::Polynomial(p) => Some(p.dim()),
            Amplitude::Bump { center, .. } => Some(center.len()),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Amplitude::Constant(c) => *c,
            Amplitude::Polynomial(p) => p.eval_unchecked(x),
            Amplitude::Bump { center, radius } => {
                let r2: f64 = center.iter().zip(x).map(|(c, v)| (v - c) * (v - c)).sum::<f64>() / (radius * radius);
                if r2 >= 1.0 {
                    0.0
                } else {
                    (1.0 - 1.0 / (1.0 - r2)).exp()
                }
            }
        }
    }

    /// c·ψ.
    pub fn scaled(&self, factor: f64) -> Result<Amplitude> {
        match self {
            Amplitude::Constant(c) => Amplitude::constant(c * factor),
            Amplitude::Polynomial(p) => Ok(Amplitude::Polynomial(p.scaled(factor))),
            Amplitude::Bump { .. } => Err(Error::InvalidAmplitude("a bump cannot be rescaled".into())),
        }
    }

    /// sup |ψ| over the domain, by sampling a uniform grid (4096 intervals per
    /// axis, fewer in three dimensions).
    pub fn sup_norm(&self, domain: &Domain) -> f64 {
        if let Amplitude::Constant(c) = self {
            return c.abs();
        }
        let bounds = domain.bounds();
        let n = bounds.len();
        let per_axis = SUP_PER_AXIS.min((SUP_SAMPLE_CAP as f64).powf(1.0 / n as f64).floor() as usize);
        let mut idx = vec![0usize; n];
        let mut x = vec![0.0; n];
        let mut best: f64 = 0.0;
        loop {
            for j in 0..n {
                let (lo, hi) = bounds[j];
                x[j] = lo + (hi - lo) * idx[j] as f64 / per_axis as f64;
            }
            if domain.contains(&x) {
                best = best.max(self.eval(&x).abs());
            }
            let mut j = 0;
            loop {
                if j == n {
                    return best;
                }
                idx[j] += 1;
                if idx[j] <= per_axis {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
    }
}

/// Everything that defines I_{α,β}(a) = ∫ E_{α,β}(iP(a, x)) ψ(x) dx.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralSpec {
    pub ml: MLParams,
    pub phase: PolyPhase,
    pub amplitude: Amplitude,
    pub domain: Domain,
}

impl IntegralSpec {
    pub fn new(ml: MLParams, phase: PolyPhase, amplitude: Amplitude, domain: Domain) -> Result<Self> {
        let n = domain.dim();
        if phase.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: phase.dim(),
            });
        }
        if let Some(m) = amplitude.dim() {
            if m != n {
                return Err(Error::DimensionMismatch { expected: n, found: m });
            }
        }
        Ok(Self {
            ml,
            phase,
            amplitude,
            domain,
        })
    }
}
