//! Depressed cubic x³ + px + q: discriminant and real roots.

use std::f64::consts::PI;

/// Relative size of D against max(|p|³/27, q²/4) below which the cubic is
/// treated as having a repeated root.
pub const REPEATED_ROOT_TOL: f64 = 1e-10;

/// (p, q) together with D = p³/27 + q²/4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicInvariants {
    pub p: f64,
    pub q: f64,
    pub discriminant: f64,
}

impl CubicInvariants {
    /// |p|³/27 + q²/4, the size against which D is compared.
    pub fn magnitude(&self) -> f64 {
        self.p.abs().powi(3) / 27.0 + self.q * self.q / 4.0
    }

    /// Whether the cubic has a repeated real root (up to [`REPEATED_ROOT_TOL`]).
    pub fn is_degenerate(&self) -> bool {
        let scale = self.magnitude();
        scale == 0.0 || self.discriminant.abs() <= REPEATED_ROOT_TOL * scale
    }
}

pub fn depressed_discriminant(p: f64, q: f64) -> CubicInvariants {
    CubicInvariants {
        p,
        q,
        discriminant: p * p * p / 27.0 + q * q / 4.0,
    }
}

/// A real root with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicRoot {
    pub value: f64,
    pub multiplicity: u32,
}

fn polish(p: f64, q: f64, mut x: f64) -> f64 {
    for _ in 0..3 {
        let f = x * x * x + p * x + q;
        let df = 3.0 * x * x + p;
        if df == 0.0 {
            break;
        }
        let step = f / df;
        if !step.is_finite() {
            break;
        }
        x -= step;
    }
    x
}

/// Real roots of x³ + px + q in increasing order. Closed forms (Cardano for
/// D > 0, trigonometric for D < 0) followed by a Newton polish; a repeated
/// root is declared when D is within [`REPEATED_ROOT_TOL`] of zero relative
/// to the size of the coefficients.
pub fn depressed_cubic_roots(p: f64, q: f64) -> Vec<CubicRoot> {
    let inv = depressed_discriminant(p, q);
    if inv.magnitude() == 0.0 {
        return vec![CubicRoot {
            value: 0.0,
            multiplicity: 3,
        }];
    }
    if inv.is_degenerate() {
        // (x - r)²(x + 2r) with r = -3q/(2p)
        let double = -1.5 * q / p;
        let simple = 3.0 * q / p;
        let mut roots = vec![
            CubicRoot {
                value: double,
                multiplicity: 2,
            },
            CubicRoot {
                value: polish(p, q, simple),
                multiplicity: 1,
            },
        ];
        roots.sort_by(|a, b| a.value.total_cmp(&b.value));
        return roots;
    }
    let d = inv.discriminant;
    if d > 0.0 {
        let s = d.sqrt();
        // pick the sign that avoids cancellation
        let t = if q >= 0.0 { -0.5 * q - s } else { -0.5 * q + s };
        let u = t.cbrt();
        let x = u - p / (3.0 * u);
        return vec![CubicRoot {
            value: polish(p, q, x),
            multiplicity: 1,
        }];
    }
    // three distinct real roots, p < 0
    let r = 2.0 * (-p / 3.0).sqrt();
    let arg = ((3.0 * q) / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
    let phi = arg.acos() / 3.0;
    let mut roots: Vec<CubicRoot> = (0..3)
        .map(|k| CubicRoot {
            value: polish(p, q, r * (phi - 2.0 * PI * k as f64 / 3.0).cos()),
            multiplicity: 1,
        })
        .collect();
    roots.sort_by(|a, b| a.value.total_cmp(&b.value));
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminant_examples() {
        assert_eq!(depressed_discriminant(-3.0, 2.0).discriminant, 0.0);
        assert_eq!(depressed_discriminant(0.0, 2.0).discriminant, 1.0);
        assert!((depressed_discriminant(1.0, 0.0).discriminant - 1.0 / 27.0).abs() < 1e-17);
    }

    #[test]
    fn double_root_case() {
        let roots = depressed_cubic_roots(-3.0, 2.0);
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].value, -2.0);
        assert_eq!(roots[0].multiplicity, 1);
        assert_eq!(roots[1].value, 1.0);
        assert_eq!(roots[1].multiplicity, 2);
    }

    #[test]
    fn triple_root() {
        let roots = depressed_cubic_roots(0.0, 0.0);
        assert_eq!(
            roots,
            vec![CubicRoot {
                value: 0.0,
                multiplicity: 3
            }]
        );
    }

    #[test]
    fn three_and_one_real_roots() {
        // (x - 1)(x - 2)(x + 3) = x³ - 7x + 6
        let roots = depressed_cubic_roots(-7.0, 6.0);
        let vals: Vec<f64> = roots.iter().map(|r| r.value).collect();
        for (v, e) in vals.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((v - e).abs() < 1e-14);
        }
        let roots = depressed_cubic_roots(0.0, 2.0);
        assert_eq!(roots.len(), 1);
        assert!((roots[0].value + 2f64.cbrt()).abs() < 1e-15);
        let roots = depressed_cubic_roots(1.0, 0.0);
        assert_eq!(roots.len(), 1);
        assert!(roots[0].value.abs() < 1e-15);
    }
}
