//! Iterated polar quadrature over the unit disc:
//! ∫₀^{2π} ∫₀¹ f(r cos θ, r sin θ) r dr dθ.

use std::cell::Cell;

use num_complex::Complex64;

use super::adaptive::{integrate, Outcome, Tolerance};
use super::rule::Value;

/// Fraction of the outer tolerance granted to each radial integral, per
/// unit of angle.
const INNER_SHARE: f64 = 0.02;

pub(crate) fn integrate_disc<F: FnMut(f64, f64) -> Complex64>(
    mut f: F,
    radial_init: usize,
    theta_breaks: &[f64],
    tol: f64,
    max_evals: usize,
) -> Outcome<Complex64> {
    let evals = Cell::new(0usize);
    let inner_panels = Cell::new(0usize);
    let starved = Cell::new(false);
    let inner_tol = INNER_SHARE * tol / (2.0 * std::f64::consts::PI);
    let outer = integrate(
        |theta: f64| {
            let used = evals.get();
            if used >= max_evals {
                starved.set(true);
                return Complex64::zero();
            }
            let (s, c) = theta.sin_cos();
            let out = integrate(
                |r: f64| f(r * c, r * s) * r,
                &[0.0, 1.0],
                radial_init,
                Tolerance::absolute(inner_tol, max_evals - used),
            );
            evals.set(used + out.evals);
            inner_panels.set(inner_panels.get() + out.panels);
            if !out.converged {
                starved.set(true);
            }
            out.value
        },
        theta_breaks,
        1,
        Tolerance::absolute(tol, max_evals / 15),
    );
    Outcome {
        value: outer.value,
        error: outer.error,
        abs_integral: outer.abs_integral,
        panels: outer.panels + inner_panels.get(),
        evals: evals.get(),
        converged: outer.converged && !starved.get(),
        finite: outer.finite,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_area_and_moment() {
        let pi = std::f64::consts::PI;
        let out = integrate_disc(|_, _| Complex64::new(1.0, 0.0), 1, &[0.0, 2.0 * pi], 1e-12, 1_000_000);
        assert!((out.value.re - pi).abs() < 1e-12);
        // ∫ x² over the disc = π/4
        let out = integrate_disc(
            |x, _| Complex64::new(x * x, 0.0),
            1,
            &[0.0, pi, 2.0 * pi],
            1e-12,
            1_000_000,
        );
        assert!((out.value.re - pi / 4.0).abs() < 1e-12);
        assert!(out.converged);
    }
}
