//! Minimal SVG 1.1 plots: axes, ticks, one point series and an optional
//! fitted power law. The y axis is logarithmic; the x axis may be linear.

use std::fmt::Write as _;

use mlosc_core::bounds::FitResult;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

#[derive(Debug, Clone)]
pub struct LogLogPlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
    pub fit: Option<FitResult>,
    pub linear_x: bool,
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    /// Decade-aligned range in log10 around the data.
    fn covering(values: impl Iterator<Item = f64>) -> Axis {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            lo = lo.min(v.log10());
            hi = hi.max(v.log10());
        }
        if !lo.is_finite() {
            return Axis {
                lo: 0.0,
                hi: 1.0,
                log: true,
            };
        }
        let (lo, hi) = (lo.floor(), hi.ceil());
        if hi > lo {
            Axis { lo, hi, log: true }
        } else {
            Axis {
                lo: lo - 1.0,
                hi: hi + 1.0,
                log: true,
            }
        }
    }

    fn linear(values: impl Iterator<Item = f64>) -> Axis {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            return Axis {
                lo: 0.0,
                hi: 1.0,
                log: false,
            };
        }
        if hi <= lo {
            (lo, hi) = (lo - 0.5, hi + 0.5);
        }
        Axis { lo, hi, log: false }
    }

    fn frac(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    /// Tick positions and labels: decades on a log axis (at most about ten),
    /// five even steps on a linear one.
    fn ticks(&self) -> Vec<(f64, String)> {
        if !self.log {
            return (0..=4)
                .map(|k| {
                    let v = self.lo + (self.hi - self.lo) * k as f64 / 4.0;
                    (v, format!("{v:.3}"))
                })
                .collect();
        }
        let (lo, hi) = (self.lo as i32, self.hi as i32);
        let step = ((hi - lo) as usize).div_ceil(10).max(1);
        (lo..=hi)
            .step_by(step)
            .map(|k| (10f64.powi(k), format!("1e{k}")))
            .collect()
    }

    fn start(&self) -> f64 {
        if self.log {
            10f64.powf(self.lo)
        } else {
            self.lo
        }
    }

    fn end(&self) -> f64 {
        if self.log {
            10f64.powf(self.hi)
        } else {
            self.hi
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl LogLogPlot {
    /// Points with a non-positive or non-finite coordinate are dropped.
    pub fn to_svg(&self) -> String {
        let pts: Vec<(f64, f64)> = self
            .points
            .iter()
            .copied()
            .filter(|(x, y)| (self.linear_x || *x > 0.0) && *y > 0.0 && x.is_finite() && y.is_finite())
            .collect();
        let xa = if self.linear_x {
            Axis::linear(pts.iter().map(|p| p.0))
        } else {
            Axis::covering(pts.iter().map(|p| p.0))
        };
        let ya = Axis::covering(pts.iter().map(|p| p.1));
        let pw = WIDTH - LEFT - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| LEFT + xa.frac(x) * pw;
        let sy = |y: f64| TOP + (1.0 - ya.frac(y)) * ph;

        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );
        for (v, label) in xa.ticks() {
            let x = sx(v);
            let _ = writeln!(
                s,
                r#"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="black"/><text x="{x:.2}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{label}</text>"#,
                TOP + ph,
                TOP + ph + 6.0,
                TOP + ph + 20.0
            );
        }
        for (v, label) in ya.ticks() {
            let y = sy(v);
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="12">{label}</text>"#,
                LEFT - 6.0,
                LEFT - 8.0,
                y + 4.0
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 16.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="20" y="{0}" text-anchor="middle" font-family="sans-serif" font-size="14" transform="rotate(-90 20 {0})">{1}</text>"#,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );
        for (x, y) in &pts {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="steelblue"/>"#,
                sx(*x),
                sy(*y)
            );
        }
        if let (Some(fit), false) = (&self.fit, self.linear_x) {
            let at = |x: f64| (fit.intercept + fit.slope * x.ln()).exp();
            let (x0, x1) = (xa.start(), xa.end());
            let (y0, y1) = (at(x0), at(x1));
            if y0 > 0.0 && y1 > 0.0 && y0.is_finite() && y1.is_finite() {
                let _ = writeln!(
                    s,
                    r#"<clipPath id="plot"><rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}"/></clipPath>"#
                );
                let _ = writeln!(
                    s,
                    r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="firebrick" stroke-dasharray="6,4" clip-path="url(#plot)"/>"#,
                    sx(x0),
                    sy(y0),
                    sx(x1),
                    sy(y1)
                );
                let _ = writeln!(
                    s,
                    r#"<text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="12" fill="firebrick">slope {:.4}</text>"#,
                    LEFT + pw - 8.0,
                    TOP + 18.0,
                    fit.slope
                );
            }
        }
        s.push_str("</svg>\n");
        s
    }
}
