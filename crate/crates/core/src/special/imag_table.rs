//! Piecewise Chebyshev interpolant of y ↦ E_{α,β}(iy) on [0, end].
//!
//! Every integral in the crate evaluates E on the imaginary axis. Between
//! the radius where the power series is still cancellation-free and the
//! point where the asymptotic expansion becomes accurate, the only reliable
//! route is the contour integral, which costs a few hundred complex
//! exponentials per call. The table pays that cost once per (α, β).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;

const NODES: usize = 25;
const CHECK_POINTS: [f64; 2] = [-0.41, 0.63];
const REL_TOL: f64 = 1e-13;
const MIN_WIDTH: f64 = 1e-3;

#[derive(Debug, Clone)]
struct Panel {
    lo: f64,
    hi: f64,
    coeffs: Vec<Complex64>,
}

impl Panel {
    fn eval(&self, y: f64) -> Complex64 {
        let t = (2.0 * y - self.lo - self.hi) / (self.hi - self.lo);
        clenshaw(&self.coeffs, t)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct ImagAxisTable {
    starts: Vec<f64>,
    panels: Vec<Panel>,
    end: f64,
}

fn clenshaw(c: &[Complex64], t: f64) -> Complex64 {
    let mut b1 = Complex64::new(0.0, 0.0);
    let mut b2 = Complex64::new(0.0, 0.0);
    for ck in c.iter().skip(1).rev() {
        let b0 = *ck + b1 * (2.0 * t) - b2;
        b2 = b1;
        b1 = b0;
    }
    c[0] + b1 * t - b2
}

fn fit(lo: f64, hi: f64, f: &mut impl FnMut(f64) -> Result<Complex64>) -> Result<(Panel, f64)> {
    let n = NODES;
    let mut vals = Vec::with_capacity(n);
    let mut scale: f64 = 0.0;
    for j in 0..n {
        let t = (PI * (j as f64 + 0.5) / n as f64).cos();
        let y = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
        let v = f(y)?;
        scale = scale.max(v.norm());
        vals.push(v);
    }
    let mut coeffs = Vec::with_capacity(n);
    for m in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, v) in vals.iter().enumerate() {
            acc += v * (PI * m as f64 * (j as f64 + 0.5) / n as f64).cos();
        }
        let w = if m == 0 { 1.0 / n as f64 } else { 2.0 / n as f64 };
        coeffs.push(acc * w);
    }
    Ok((Panel { lo, hi, coeffs }, scale))
}

impl ImagAxisTable {
    /// Build on [0, end] from an accurate (slow) evaluator.
    pub fn build(end: f64, mut f: impl FnMut(f64) -> Result<Complex64>) -> Result<Self> {
        let mut pending: Vec<(f64, f64)> = Vec::new();
        let n0 = end.ceil().max(1.0) as usize;
        for i in (0..n0).rev() {
            let lo = end * i as f64 / n0 as f64;
            let hi = end * (i + 1) as f64 / n0 as f64;
            pending.push((lo, hi));
        }
        let mut panels = Vec::new();
        while let Some((lo, hi)) = pending.pop() {
            let (panel, scale) = fit(lo, hi, &mut f)?;
            let mut ok = true;
            for &t in &CHECK_POINTS {
                let y = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
                let exact = f(y)?;
                let err = (panel.eval(y) - exact).norm();
                if err > REL_TOL * scale.max(exact.norm()) {
                    ok = false;
                }
            }
            if ok || hi - lo < MIN_WIDTH {
                panels.push(panel);
            } else {
                let mid = 0.5 * (lo + hi);
                pending.push((mid, hi));
                pending.push((lo, mid));
            }
        }
        let starts = panels.iter().map(|p| p.lo).collect();
        Ok(Self { starts, panels, end })
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    /// E(iy) for 0 ≤ y ≤ end.
    pub fn eval(&self, y: f64) -> Complex64 {
        let idx = match self.starts.binary_search_by(|s| s.total_cmp(&y)) {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        self.panels[idx.min(self.panels.len() - 1)].eval(y)
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.panels.len()
    }
}
