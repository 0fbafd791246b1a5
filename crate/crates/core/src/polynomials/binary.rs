//! Binary cubic forms a₀x³ + 3a₁x²y + 3a₂xy² + a₃y³ and their reduction to
//! depressed form a₀′(x³ + pxy² + qy³).

use std::f64::consts::PI;

use super::{MultiIndex, PolyPhase};
use crate::error::{Error, Result};

const SCAN_SAMPLES: usize = 256;
const REFINE_TOL: f64 = 1e-12;
const INVARIANCE_TOL: f64 = 1e-9;
const DEGENERATE_BELOW: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryCubic {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl BinaryCubic {
    pub fn new(a0: f64, a1: f64, a2: f64, a3: f64) -> Result<Self> {
        if [a0, a1, a2, a3].iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("binary cubic coefficient"));
        }
        Ok(Self { a0, a1, a2, a3 })
    }

    pub fn coeffs(&self) -> [f64; 4] {
        [self.a0, self.a1, self.a2, self.a3]
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        ((self.a0 * x + 3.0 * self.a1 * y) * x + 3.0 * self.a2 * y * y) * x + self.a3 * y * y * y
    }

    pub fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        let dx = 3.0 * self.a0 * x * x + 6.0 * self.a1 * x * y + 3.0 * self.a2 * y * y;
        let dy = 3.0 * self.a1 * x * x + 6.0 * self.a2 * x * y + 3.0 * self.a3 * y * y;
        (dx, dy)
    }

    /// P₃(cos θ, sin θ).
    pub fn angular(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.eval(c, s)
    }

    /// Coefficients in the frame whose first axis points along (cos θ, sin θ).
    pub fn rotated(&self, theta: f64) -> BinaryCubic {
        let (s, c) = theta.sin_cos();
        let (gx, gy) = self.gradient(c, s);
        let (hx, hy) = self.gradient(-s, c);
        BinaryCubic {
            a0: self.eval(c, s),
            a1: (-s * gx + c * gy) / 3.0,
            a2: (c * hx + s * hy) / 3.0,
            a3: self.eval(-s, c),
        }
    }

    pub fn scaled(&self, t: f64) -> BinaryCubic {
        BinaryCubic {
            a0: t * self.a0,
            a1: t * self.a1,
            a2: t * self.a2,
            a3: t * self.a3,
        }
    }

    /// The form as a phase on ℝ².
    pub fn to_phase(&self) -> PolyPhase {
        let terms = [
            (vec![3, 0], self.a0),
            (vec![2, 1], 3.0 * self.a1),
            (vec![1, 2], 3.0 * self.a2),
            (vec![0, 3], self.a3),
        ];
        PolyPhase::new(2, 3, terms.into_iter().map(|(e, c)| (MultiIndex::new(e), c)))
            .expect("finite coefficients of a two-variable cubic")
    }
}

/// 3a₁²a₂² + 6a₀a₁a₂a₃ − 4a₀a₂³ − 4a₁³a₃ − a₀²a₃².
pub fn binary_discriminant(c: &BinaryCubic) -> f64 {
    let BinaryCubic { a0, a1, a2, a3 } = *c;
    3.0 * a1 * a1 * a2 * a2 + 6.0 * a0 * a1 * a2 * a3
        - 4.0 * a0 * a2 * a2 * a2
        - 4.0 * a1 * a1 * a1 * a3
        - a0 * a0 * a3 * a3
}

/// Result of rotating a binary cubic so its leading coefficient dominates and
/// shearing away the x²y term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reduction {
    pub theta: f64,
    pub p: f64,
    pub q: f64,
    /// Leading coefficient a₀′ after rotation.
    pub lead: f64,
    pub rotated: BinaryCubic,
    /// −4·a₀′⁴: the binary discriminant equals this times p³/27 + q²/4.
    pub discriminant_scale: f64,
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > REFINE_TOL {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Angle θ ∈ [0, π) maximising |P₃(cos θ, sin θ)|.
fn dominant_direction(c: &BinaryCubic) -> f64 {
    let h = PI / SCAN_SAMPLES as f64;
    let mut best = 0;
    let mut best_val = c.angular(0.0).abs();
    for k in 1..SCAN_SAMPLES {
        let v = c.angular(k as f64 * h).abs();
        if v > best_val {
            best = k;
            best_val = v;
        }
    }
    let center = best as f64 * h;
    let theta = golden_max(|t| c.angular(t).abs(), center - h, center + h);
    if c.angular(theta).abs() >= best_val {
        theta.rem_euclid(PI)
    } else {
        center
    }
}

/// Rotate so that |a₀′| is the largest coefficient (no rotation when that
/// already holds), then shear x ↦ x + (a₁/a₀)y to reach a₀′(x³ + pxy² + qy³).
pub fn reduce_homogeneous_cubic(c: &BinaryCubic) -> Result<Reduction> {
    let scale = c.max_abs_coeff();
    if scale < DEGENERATE_BELOW {
        return Err(Error::Degenerate("all cubic coefficients vanish".into()));
    }
    let (theta, rotated) = if c.a0.abs() >= scale {
        (0.0, *c)
    } else {
        let theta = dominant_direction(c);
        (theta, c.rotated(theta))
    };
    let before = binary_discriminant(c);
    let after = binary_discriminant(&rotated);
    if (before - after).abs() > INVARIANCE_TOL * scale.powi(4) {
        return Err(Error::Degenerate(format!(
            "rotation changed the discriminant from {before} to {after}"
        )));
    }
    let BinaryCubic { a0, a1, a2, a3 } = rotated;
    let p = (3.0 * a0 * a2 - 3.0 * a1 * a1) / (a0 * a0);
    let q = (a0 * a0 * a3 + 2.0 * a1 * a1 * a1 - 3.0 * a0 * a1 * a2) / (a0 * a0 * a0);
    Ok(Reduction {
        theta,
        p,
        q,
        lead: a0,
        rotated,
        discriminant_scale: -4.0 * a0.powi(4),
    })
}
