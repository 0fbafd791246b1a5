//! Laplace-inversion representation of E_{α,β}.
//!
//! E_{α,β}(z) is the inverse Laplace transform of s^{α-β} / (s^α - z)
//! evaluated at t = 1. The Bromwich line is deformed onto the parabola
//! s(u) = σ(1 + iu)², which wraps the branch cut on the negative real axis;
//! poles s_k with s_k^α = z lying to the right of the parabola contribute
//! their residues (1/α) s_k^{1-β} e^{s_k}.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::adaptive::{integrate, Tolerance};

/// A pole of s^{α-β}/(s^α - z) on the principal sheet.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Pole {
    pub modulus: f64,
    pub arg: f64,
}

impl Pole {
    pub fn point(&self) -> Complex64 {
        Complex64::from_polar(self.modulus, self.arg)
    }

    /// (1/α) s^{1-β} e^{s}, with the power taken on this pole's own argument.
    pub fn residue(&self, alpha: f64, beta: f64) -> Complex64 {
        let s = self.point();
        let log_mag = (1.0 - beta) * self.modulus.ln() + s.re;
        let phase = (1.0 - beta) * self.arg + s.im;
        Complex64::from_polar(log_mag.exp(), phase) / alpha
    }
}

/// All solutions of s^α = z with arg s in [-π, π], paired with a weight:
/// 1 in the open sector, 1/2 on the cut (|arg s| = π).
pub(crate) fn principal_poles(alpha: f64, z: Complex64) -> Vec<(Pole, f64)> {
    let theta = z.arg();
    let modulus = z.norm().powf(1.0 / alpha);
    let mut out = Vec::new();
    let kmax = (alpha / 2.0).ceil() as i64 + 1;
    for k in -kmax..=kmax {
        let arg = (theta + 2.0 * PI * k as f64) / alpha;
        if arg.abs() > PI * (1.0 + 1e-14) {
            continue;
        }
        let on_cut = (arg.abs() - PI).abs() <= 1e-12 * PI;
        let weight = if on_cut { 0.5 } else { 1.0 };
        out.push((Pole { modulus, arg }, weight));
    }
    out
}

/// Re √s_k for each pole; the parabola with parameter σ passes through the
/// points with Re √s = √σ.
fn sqrt_real_parts(poles: &[(Pole, f64)]) -> Vec<f64> {
    poles
        .iter()
        .map(|(p, _)| p.modulus.sqrt() * (0.5 * p.arg).cos())
        .collect()
}

fn choose_sqrt_sigma(roots: &[f64]) -> f64 {
    let margin = |c: f64| roots.iter().map(|r| (r - c).abs() / c).fold(f64::INFINITY, f64::min);
    let candidates = (0..=18).map(|i| 0.6 + 0.1 * i as f64);
    // smallest σ with a comfortable distance to every pole, else the best one
    if let Some(c) = candidates.clone().find(|&c| margin(c) >= 0.25) {
        return c;
    }
    candidates
        .max_by(|a, b| margin(*a).total_cmp(&margin(*b)))
        .unwrap_or(1.0)
}

pub(crate) fn eval_contour(alpha: f64, beta: f64, z: Complex64) -> Result<Complex64> {
    let poles = principal_poles(alpha, z);
    let roots = sqrt_real_parts(&poles);
    let c = choose_sqrt_sigma(&roots);
    let sigma = c * c;

    let mut residues = Complex64::new(0.0, 0.0);
    for ((pole, _), r) in poles.iter().zip(&roots) {
        if *r > c {
            residues += pole.residue(alpha, beta);
        }
    }

    let pref = sigma / PI;
    let integrand = |u: f64| -> Complex64 {
        let w = Complex64::new(1.0, u);
        let s = w * w * sigma;
        let ln_s = s.ln();
        let s_alpha = (ln_s * alpha).exp();
        let num = (s + ln_s * (alpha - beta)).exp();
        num / (s_alpha - z) * w * pref
    };

    let scale = integrand(0.0).norm().max(residues.norm()).max(1e-300);
    let u_max = (1.0 + 45.0 / sigma).sqrt();
    let out = integrate(
        integrand,
        &[-u_max, 0.0, u_max],
        4,
        Tolerance {
            abs: 1e-15 * scale,
            rel: 1e-14,
            max_evals: 60_000,
        },
    );
    let value = out.value + residues;
    let ok = out.finite && (out.converged || out.error <= 1e-12 * value.norm().max(1e-3 * scale));
    if !ok || !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::NonConvergence { re: z.re, im: z.im });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_case() {
        for &z in &[
            Complex64::new(1.0, 0.0),
            Complex64::new(-3.0, 2.0),
            Complex64::new(0.0, 7.5),
            Complex64::new(6.0, -4.0),
        ] {
            let v = eval_contour(1.0, 1.0, z).unwrap();
            let e = z.exp();
            assert!((v - e).norm() < 1e-12 * e.norm().max(1.0), "z = {z}: {v} vs {e}");
        }
    }

    #[test]
    fn pole_weights() {
        let p = principal_poles(1.0, Complex64::new(-2.0, 0.0));
        assert_eq!(p.len(), 2);
        assert!(p.iter().all(|(_, w)| *w == 0.5));
        let p = principal_poles(0.5, Complex64::new(0.0, 3.0));
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].1, 0.5);
        let p = principal_poles(0.3, Complex64::new(0.0, 3.0));
        assert!(p.is_empty());
        let p = principal_poles(1.5, Complex64::new(0.0, 3.0));
        assert_eq!(p.len(), 2);
    }
}
