//! Globally adaptive bisection on top of the 15-point panel rule.
//!
//! Panels live in a max-heap ordered by their error estimate
//! |K15 - G7|; the worst panel is bisected until the summed estimate
//! meets the tolerance or the evaluation budget runs out. Final values are
//! summed pairwise in panel order so the result does not depend on the
//! order in which panels were refined.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::rule::{gk15, Value};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_evals: usize,
}

impl Tolerance {
    pub fn absolute(abs: f64, max_evals: usize) -> Self {
        Self {
            abs,
            rel: 0.0,
            max_evals,
        }
    }

    fn target(&self, value_mag: f64) -> f64 {
        self.abs.max(self.rel * value_mag)
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Outcome<T> {
    pub value: T,
    pub error: f64,
    pub abs_integral: f64,
    pub panels: usize,
    pub evals: usize,
    pub converged: bool,
    pub finite: bool,
}

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    abs_integral: f64,
}

struct Ranked<T>(Panel<T>);

impl<T> PartialEq for Ranked<T> {
    fn eq(&self, other: &Self) -> bool {
        self.0.error.total_cmp(&other.0.error) == Ordering::Equal
    }
}
impl<T> Eq for Ranked<T> {}
impl<T> PartialOrd for Ranked<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Ranked<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .error
            .total_cmp(&other.0.error)
            // tie-break on position for determinism
            .then_with(|| other.0.a.total_cmp(&self.0.a))
    }
}

/// Sum in a fixed binary tree over the slice order.
pub(crate) fn pairwise_sum<T: Value>(xs: &[T]) -> T {
    match xs.len() {
        0 => T::zero(),
        1 => xs[0],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

fn make_panel<T: Value, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> Panel<T> {
    let est = gk15(f, a, b);
    let error = if est.kronrod.is_finite_value() && est.gauss.is_finite_value() {
        est.error()
    } else {
        f64::INFINITY
    };
    Panel {
        a,
        b,
        value: est.kronrod,
        error,
        abs_integral: est.abs_integral,
    }
}

fn splittable(a: f64, b: f64) -> bool {
    let m = 0.5 * (a + b);
    m > a && m < b && (b - a) > 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1e-300)
}

/// Integrate `f` over the segments defined by sorted `breaks`, starting with
/// `init_per_segment` equal panels on each segment.
pub(crate) fn integrate<T: Value, F: FnMut(f64) -> T>(
    mut f: F,
    breaks: &[f64],
    init_per_segment: usize,
    tol: Tolerance,
) -> Outcome<T> {
    let init = init_per_segment.max(1);
    let mut heap: BinaryHeap<Ranked<T>> = BinaryHeap::new();
    let mut done: Vec<Panel<T>> = Vec::new();
    let mut evals = 0usize;
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if !(hi > lo) {
            continue;
        }
        let h = (hi - lo) / init as f64;
        for i in 0..init {
            let a = lo + h * i as f64;
            let b = if i + 1 == init { hi } else { lo + h * (i + 1) as f64 };
            heap.push(Ranked(make_panel(&mut f, a, b)));
            evals += 15;
        }
    }

    let mut converged = false;
    let (mut run_value, mut run_error) = totals(&heap, &done);
    let mut iter = 0usize;
    loop {
        iter += 1;
        if iter.is_multiple_of(256) {
            (run_value, run_error) = totals(&heap, &done);
        }
        let (value, error) = (run_value, run_error);
        if error <= tol.target(value.magnitude()) {
            converged = error.is_finite();
            break;
        }
        if evals + 30 > tol.max_evals {
            break;
        }
        let Some(Ranked(worst)) = heap.pop() else {
            break;
        };
        if !worst.error.is_finite() && !splittable(worst.a, worst.b) {
            done.push(worst);
            break;
        }
        if !splittable(worst.a, worst.b) {
            done.push(worst);
            continue;
        }
        let m = 0.5 * (worst.a + worst.b);
        let left = make_panel(&mut f, worst.a, m);
        let right = make_panel(&mut f, m, worst.b);
        evals += 30;
        if worst.error.is_finite() {
            run_value = run_value - worst.value + left.value + right.value;
            run_error = run_error - worst.error + left.error + right.error;
        }
        heap.push(Ranked(left));
        heap.push(Ranked(right));
        if !worst.error.is_finite() {
            (run_value, run_error) = totals(&heap, &done);
        }
    }

    let mut panels: Vec<Panel<T>> = heap.into_iter().map(|r| r.0).chain(done).collect();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let values: Vec<T> = panels.iter().map(|p| p.value).collect();
    let value = pairwise_sum(&values);
    let error: f64 = panels.iter().map(|p| p.error).sum();
    let abs_integral: f64 = panels.iter().map(|p| p.abs_integral).sum();
    Outcome {
        value,
        error,
        abs_integral,
        panels: panels.len(),
        evals,
        converged: converged && value.is_finite_value(),
        finite: value.is_finite_value() && error.is_finite(),
    }
}

fn totals<T: Value>(heap: &BinaryHeap<Ranked<T>>, done: &[Panel<T>]) -> (T, f64) {
    let mut v = T::zero();
    let mut e = 0.0;
    for p in heap.iter().map(|r| &r.0).chain(done.iter()) {
        v = v + p.value;
        e += p.error;
    }
    (v, e)
}
