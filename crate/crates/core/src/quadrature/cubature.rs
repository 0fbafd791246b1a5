//! Adaptive tensor-product cubature on boxes.
//!
//! Each box is integrated with the 15-point Kronrod rule along every axis.
//! Replacing the rule on one axis by its embedded 7-point Gauss rule gives
//! a per-axis error estimate at no extra cost; the box error is their sum
//! and the worst box is bisected along its worst axis.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use super::adaptive::{pairwise_sum, Outcome, Tolerance};
use super::rule::{aligned_weights, kronrod_nodes, Value};

#[derive(Debug, Clone)]
struct Cell {
    lo: Vec<f64>,
    hi: Vec<f64>,
    value: Complex64,
    error: f64,
    axis_error: Vec<f64>,
}

struct Ranked(Cell);

impl PartialEq for Ranked {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Ranked {}
impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.error.total_cmp(&other.0.error).then_with(|| {
            // prefer the lexicographically smaller box on ties
            for (a, b) in self.0.lo.iter().zip(&other.0.lo) {
                match b.total_cmp(a) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

pub(crate) fn evals_per_cell(n: usize) -> usize {
    15usize.pow(n as u32)
}

fn box_rule<F: FnMut(&[f64]) -> Complex64>(f: &mut F, lo: &[f64], hi: &[f64]) -> Cell {
    let n = lo.len();
    let (wk, wg) = aligned_weights();
    let nodes: Vec<[f64; 15]> = (0..n).map(|j| kronrod_nodes(lo[j], hi[j])).collect();
    let half: Vec<f64> = (0..n).map(|j| 0.5 * (hi[j] - lo[j])).collect();
    let vol: f64 = half.iter().product();

    let mut kron = Complex64::zero();
    let mut gauss_axis = vec![Complex64::zero(); n];
    let mut idx = vec![0usize; n];
    let mut x = vec![0.0; n];
    loop {
        for j in 0..n {
            x[j] = nodes[j][idx[j]];
        }
        let v = f(&x);
        let wprod: f64 = idx.iter().map(|&i| wk[i]).product();
        kron += v * wprod;
        for j in 0..n {
            let g = wg[idx[j]];
            if g != 0.0 {
                gauss_axis[j] += v * (wprod / wk[idx[j]] * g);
            }
        }
        let mut j = 0;
        loop {
            if j == n {
                let value = kron * vol;
                let axis_error: Vec<f64> = gauss_axis.iter().map(|g| (kron - *g).norm() * vol).collect();
                let finite = value.is_finite_value() && axis_error.iter().all(|e| e.is_finite());
                let error = if finite { axis_error.iter().sum() } else { f64::INFINITY };
                return Cell {
                    lo: lo.to_vec(),
                    hi: hi.to_vec(),
                    value,
                    error,
                    axis_error,
                };
            }
            idx[j] += 1;
            if idx[j] < 15 {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Integrate over the box `bounds`, starting from a uniform grid of
/// `init_per_axis` cells per axis.
pub(crate) fn integrate_box<F: FnMut(&[f64]) -> Complex64>(
    mut f: F,
    bounds: &[(f64, f64)],
    init_per_axis: usize,
    tol: Tolerance,
) -> Outcome<Complex64> {
    let n = bounds.len();
    let per_cell = evals_per_cell(n);
    let m = init_per_axis.max(1);
    let mut heap = BinaryHeap::new();
    let mut evals = 0;
    let mut idx = vec![0usize; n];
    'grid: loop {
        let lo: Vec<f64> = (0..n)
            .map(|j| bounds[j].0 + (bounds[j].1 - bounds[j].0) * idx[j] as f64 / m as f64)
            .collect();
        let hi: Vec<f64> = (0..n)
            .map(|j| {
                if idx[j] + 1 == m {
                    bounds[j].1
                } else {
                    bounds[j].0 + (bounds[j].1 - bounds[j].0) * (idx[j] + 1) as f64 / m as f64
                }
            })
            .collect();
        heap.push(Ranked(box_rule(&mut f, &lo, &hi)));
        evals += per_cell;
        let mut j = 0;
        loop {
            if j == n {
                break 'grid;
            }
            idx[j] += 1;
            if idx[j] < m {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }

    let mut done: Vec<Cell> = Vec::new();
    let mut converged = false;
    loop {
        let (value, error) = totals(&heap, &done);
        if error <= tol.abs.max(tol.rel * value.norm()) {
            converged = true;
            break;
        }
        if evals + 2 * per_cell > tol.max_evals {
            break;
        }
        let Some(Ranked(worst)) = heap.pop() else {
            break;
        };
        let axis = worst
            .axis_error
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(j, _)| j)
            .unwrap_or(0);
        let mid = 0.5 * (worst.lo[axis] + worst.hi[axis]);
        if !(mid > worst.lo[axis] && mid < worst.hi[axis]) {
            done.push(worst);
            continue;
        }
        let mut left_hi = worst.hi.clone();
        left_hi[axis] = mid;
        let mut right_lo = worst.lo.clone();
        right_lo[axis] = mid;
        heap.push(Ranked(box_rule(&mut f, &worst.lo, &left_hi)));
        heap.push(Ranked(box_rule(&mut f, &right_lo, &worst.hi)));
        evals += 2 * per_cell;
    }

    let mut cells: Vec<Cell> = heap.into_iter().map(|r| r.0).chain(done).collect();
    cells.sort_by(|a, b| {
        a.lo.iter()
            .zip(&b.lo)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    });
    let values: Vec<Complex64> = cells.iter().map(|c| c.value).collect();
    let value = pairwise_sum(&values);
    let error: f64 = cells.iter().map(|c| c.error).sum();
    Outcome {
        value,
        error,
        abs_integral: f64::NAN,
        panels: cells.len(),
        evals,
        converged: converged && value.is_finite_value(),
        finite: value.is_finite_value() && error.is_finite(),
    }
}

fn totals(heap: &BinaryHeap<Ranked>, done: &[Cell]) -> (Complex64, f64) {
    let mut v = Complex64::zero();
    let mut e = 0.0;
    for c in heap.iter().map(|r| &r.0).chain(done) {
        v += c.value;
        e += c.error;
    }
    (v, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separable_oscillatory() {
        let mu = 30.0;
        let out = integrate_box(
            |x| Complex64::new(0.0, mu * (x[0] + 2.0 * x[1])).exp(),
            &[(0.0, 1.0), (0.0, 1.0)],
            2,
            Tolerance::absolute(1e-11, 2_000_000),
        );
        let one = |m: f64| (Complex64::new(0.0, m).exp() - 1.0) / Complex64::new(0.0, m);
        let exact = one(mu) * one(2.0 * mu);
        assert!(out.converged);
        assert!((out.value - exact).norm() < 1e-11);
    }

    #[test]
    fn three_dimensional_polynomial() {
        let out = integrate_box(
            |x| Complex64::new(x[0] * x[1] * x[2] * x[2], 0.0),
            &[(0.0, 1.0), (0.0, 2.0), (-1.0, 1.0)],
            1,
            Tolerance::absolute(1e-12, 100_000),
        );
        // (1/2)(2)(2/3)
        assert!((out.value.re - 2.0 / 3.0).abs() < 1e-13);
    }
}
