//! Line format: one term per line, `λ₁ … λₙ coeff`, whitespace separated.
//! Blank lines and lines starting with `#` are ignored.

use super::{MultiIndex, PolyPhase};
use crate::error::{Error, Result};

pub(super) fn to_text(p: &PolyPhase) -> String {
    let mut out = String::new();
    for (idx, c) in p.terms() {
        for e in idx.entries() {
            out.push_str(&e.to_string());
            out.push(' ');
        }
        out.push_str(&c.to_string());
        out.push('\n');
    }
    out
}

pub(super) fn from_text(src: &str) -> Result<PolyPhase> {
    let mut dim = None;
    let mut terms = Vec::new();
    for (lineno, raw) in src.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = |what: &str| Error::InvalidPolynomial(format!("line {}: {what}", lineno + 1));
        if fields.len() < 2 {
            return Err(bad("expected exponents followed by a coefficient"));
        }
        let n = fields.len() - 1;
        match dim {
            None => dim = Some(n),
            Some(d) if d != n => return Err(bad("inconsistent number of exponents")),
            _ => {}
        }
        let exps = fields[..n]
            .iter()
            .map(|f| {
                f.parse::<u32>()
                    .map_err(|_| bad("exponent is not a non-negative integer"))
            })
            .collect::<Result<Vec<_>>>()?;
        let coeff: f64 = fields[n].parse().map_err(|_| bad("coefficient is not a number"))?;
        terms.push((MultiIndex::new(exps), coeff));
    }
    let dim = dim.ok_or_else(|| Error::InvalidPolynomial("no terms".into()))?;
    PolyPhase::from_terms(dim, terms)
}
