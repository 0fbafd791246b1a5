//! Inline polynomial syntax: monomials `c*x1^a*x2^b` joined by `+`/`-`.
//! `x` is shorthand for `x1`, `pi` may appear as a coefficient factor, and
//! factors may repeat (`x*x` = `x^2`).

use mlosc_core::polynomials::{MultiIndex, PolyPhase};

use crate::error::CliError;

const MAX_VARS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
struct Term {
    coeff: f64,
    exps: [u32; MAX_VARS],
}

fn bad(src: &str, why: impl Into<String>) -> CliError {
    CliError::Input(format!("cannot parse polynomial '{src}': {}", why.into()))
}

/// Splits at top-level `+`/`-`, keeping signs and leaving exponents of
/// numbers (`1e-3`) alone.
fn split_terms(src: &str) -> Result<Vec<(f64, String)>, CliError> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(bad(src, "empty expression"));
    }
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut sign = 1.0;
    let mut start = 0;
    let mut i = 0;
    if bytes[0] == b'+' || bytes[0] == b'-' {
        sign = if bytes[0] == b'-' { -1.0 } else { 1.0 };
        start = 1;
        i = 1;
    }
    while i < bytes.len() {
        let c = bytes[i];
        let after_exp =
            i > 0 && (bytes[i - 1] == b'e' || bytes[i - 1] == b'E') && i >= 2 && bytes[i - 2].is_ascii_digit();
        if (c == b'+' || c == b'-') && !after_exp {
            out.push((sign, s[start..i].to_string()));
            sign = if c == b'-' { -1.0 } else { 1.0 };
            start = i + 1;
        }
        i += 1;
    }
    out.push((sign, s[start..].to_string()));
    if out.iter().any(|(_, t)| t.is_empty()) {
        return Err(bad(src, "empty term"));
    }
    Ok(out)
}

fn parse_term(src: &str, sign: f64, body: &str) -> Result<Term, CliError> {
    let mut term = Term {
        coeff: sign,
        exps: [0; MAX_VARS],
    };
    for factor in body.split('*') {
        if factor.is_empty() {
            return Err(bad(src, "empty factor"));
        }
        let (base, power) = match factor.split_once('^') {
            Some((b, p)) => {
                let p: u32 = p.parse().map_err(|_| bad(src, format!("bad exponent in '{factor}'")))?;
                (b, p)
            }
            None => (factor, 1),
        };
        if let Some(rest) = base.strip_prefix('x') {
            let idx = if rest.is_empty() {
                1
            } else {
                rest.parse::<usize>()
                    .map_err(|_| bad(src, format!("bad variable '{base}'")))?
            };
            if idx == 0 || idx > MAX_VARS {
                return Err(bad(src, format!("variable '{base}' outside x1..x{MAX_VARS}")));
            }
            term.exps[idx - 1] += power;
        } else {
            let v = if base == "pi" {
                std::f64::consts::PI
            } else {
                base.parse::<f64>()
                    .map_err(|_| bad(src, format!("bad factor '{factor}'")))?
            };
            if !v.is_finite() {
                return Err(bad(src, format!("non-finite coefficient '{factor}'")));
            }
            term.coeff *= v.powi(power as i32);
        }
    }
    Ok(term)
}

/// Highest variable index used (at least 1).
pub fn inferred_dim(src: &str) -> Result<usize, CliError> {
    let terms = parse_terms(src)?;
    let used = terms
        .iter()
        .map(|t| t.exps.iter().rposition(|&e| e > 0).map_or(1, |i| i + 1))
        .max()
        .unwrap_or(1);
    Ok(used)
}

fn parse_terms(src: &str) -> Result<Vec<Term>, CliError> {
    split_terms(src)?
        .iter()
        .map(|(sign, body)| parse_term(src, *sign, body))
        .collect()
}

/// Parses `src` as a polynomial in `dim` variables.
pub fn parse_poly(src: &str, dim: usize) -> Result<PolyPhase, CliError> {
    let terms = parse_terms(src)?;
    let need = inferred_dim(src)?;
    if need > dim {
        return Err(bad(src, format!("uses x{need} but the domain has dimension {dim}")));
    }
    PolyPhase::from_terms(
        dim,
        terms
            .into_iter()
            .map(|t| (MultiIndex::new(t.exps[..dim].to_vec()), t.coeff)),
    )
    .map_err(|e| bad(src, e.to_string()))
}
