//! Polynomial phases P(a, x) = Σ a_λ x^λ on ℝⁿ.

mod binary;
mod cubic;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

pub use binary::{binary_discriminant, reduce_homogeneous_cubic, BinaryCubic, Reduction};
pub use cubic::{depressed_cubic_roots, depressed_discriminant, CubicInvariants, CubicRoot};

/// Exponent vector λ = (λ₁, …, λₙ).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    /// Index of total order `order` in a single variable.
    pub fn single(order: u32) -> Self {
        Self(vec![order])
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// |λ| = Σ λᵢ.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

/// Coefficient norm used by the decay estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMode {
    /// Σ over all |a_λ|.
    L1All,
    /// Σ over |a_λ| with |λ| > 0.
    L1NonConstant,
    /// max |a_λ|.
    Max,
}

/// Nested Horner form: a polynomial in x_i whose coefficients are
/// polynomials in x_{i+1}, …, x_n.
#[derive(Debug, Clone, PartialEq)]
enum Horner {
    Const(f64),
    Var(Vec<Horner>),
}

impl Horner {
    fn build(terms: &[(&[u32], f64)], level: usize, dim: usize) -> Horner {
        if level == dim {
            return Horner::Const(terms.iter().map(|(_, c)| c).sum());
        }
        let top = terms.iter().map(|(e, _)| e[level]).max().unwrap_or(0);
        let mut by_power: Vec<Vec<(&[u32], f64)>> = vec![Vec::new(); top as usize + 1];
        for &(e, c) in terms {
            by_power[e[level] as usize].push((e, c));
        }
        Horner::Var(
            by_power
                .iter()
                .map(|group| {
                    if group.is_empty() {
                        Horner::Const(0.0)
                    } else {
                        Horner::build(group, level + 1, dim)
                    }
                })
                .collect(),
        )
    }

    fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Horner::Const(c) => *c,
            Horner::Var(coeffs) => {
                let (xi, rest) = (x[0], &x[1..]);
                let mut acc = 0.0;
                for c in coeffs.iter().rev() {
                    acc = acc * xi + c.eval(rest);
                }
                acc
            }
        }
    }
}

/// Real polynomial of degree at most `degree_bound` in `dim` variables,
/// stored sparsely. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyPhase {
    dim: usize,
    degree_bound: u32,
    coeffs: BTreeMap<MultiIndex, f64>,
    horner: Horner,
}

impl PolyPhase {
    /// Duplicated indices are summed; exact zeros are dropped.
    pub fn new(dim: usize, degree_bound: u32, terms: impl IntoIterator<Item = (MultiIndex, f64)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidPolynomial("dimension must be at least 1".into()));
        }
        let mut coeffs: BTreeMap<MultiIndex, f64> = BTreeMap::new();
        for (idx, c) in terms {
            if idx.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: idx.dim(),
                });
            }
            if !c.is_finite() {
                return Err(Error::NonFinite("polynomial coefficient"));
            }
            if idx.order() > degree_bound {
                return Err(Error::InvalidPolynomial(format!(
                    "term {idx} exceeds degree bound {degree_bound}"
                )));
            }
            *coeffs.entry(idx).or_insert(0.0) += c;
        }
        coeffs.retain(|_, c| *c != 0.0);
        Ok(Self::from_map(dim, degree_bound, coeffs))
    }

    /// Degree bound taken from the terms themselves.
    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (MultiIndex, f64)>) -> Result<Self> {
        let terms: Vec<_> = terms.into_iter().collect();
        let d = terms.iter().map(|(i, _)| i.order()).max().unwrap_or(0);
        Self::new(dim, d, terms)
    }

    fn from_map(dim: usize, degree_bound: u32, coeffs: BTreeMap<MultiIndex, f64>) -> Self {
        let flat: Vec<(&[u32], f64)> = coeffs.iter().map(|(k, v)| (k.entries(), *v)).collect();
        let horner = if flat.is_empty() {
            Horner::Const(0.0)
        } else {
            Horner::build(&flat, 0, dim)
        };
        Self {
            dim,
            degree_bound,
            coeffs,
            horner,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_map(dim, 0, BTreeMap::new())
    }

    /// c·x^λ.
    pub fn monomial(coeff: f64, exponents: Vec<u32>) -> Result<Self> {
        let idx = MultiIndex::new(exponents);
        Self::from_terms(idx.dim(), [(idx, coeff)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    /// Largest |λ| actually present (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.coeffs.iter().map(|(k, v)| (k, *v))
    }

    pub fn coeff(&self, idx: &MultiIndex) -> f64 {
        self.coeffs.get(idx).copied().unwrap_or(0.0)
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(self.horner.eval(x))
    }

    /// Evaluation without the dimension check, for quadrature inner loops.
    #[inline]
    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        self.horner.eval(x)
    }

    /// D^κ P, computed on the coefficients.
    pub fn partial_derivative(&self, kappa: &MultiIndex) -> Result<PolyPhase> {
        if kappa.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: kappa.dim(),
            });
        }
        let mut out = BTreeMap::new();
        for (idx, &c) in &self.coeffs {
            let mut factor = c;
            let mut exps = Vec::with_capacity(self.dim);
            let mut vanishes = false;
            for (&e, &k) in idx.entries().iter().zip(kappa.entries()) {
                if k > e {
                    vanishes = true;
                    break;
                }
                // falling factorial e (e-1) ... (e-k+1)
                for j in 0..k {
                    factor *= (e - j) as f64;
                }
                exps.push(e - k);
            }
            if !vanishes && factor != 0.0 {
                *out.entry(MultiIndex::new(exps)).or_insert(0.0) += factor;
            }
        }
        out.retain(|_, c: &mut f64| *c != 0.0);
        let bound = self.degree_bound.saturating_sub(kappa.order());
        Ok(Self::from_map(self.dim, bound, out))
    }

    pub fn coeff_norm(&self, mode: NormMode) -> f64 {
        let it = self.coeffs.iter();
        match mode {
            NormMode::L1All => it.map(|(_, c)| c.abs()).sum(),
            NormMode::L1NonConstant => it.filter(|(k, _)| k.order() > 0).map(|(_, c)| c.abs()).sum(),
            NormMode::Max => it.map(|(_, c)| c.abs()).fold(0.0, f64::max),
        }
    }

    /// μ·P.
    pub fn scaled(&self, factor: f64) -> PolyPhase {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, v)| (k.clone(), v * factor))
            .filter(|(_, v)| *v != 0.0)
            .collect();
        Self::from_map(self.dim, self.degree_bound, coeffs)
    }

    pub fn to_text(&self) -> String {
        text::to_text(self)
    }

    pub fn from_text(src: &str) -> Result<Self> {
        text::from_text(src)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(dim: usize, terms: &[(&[u32], f64)]) -> PolyPhase {
        PolyPhase::from_terms(dim, terms.iter().map(|(e, c)| (MultiIndex::new(e.to_vec()), *c))).unwrap()
    }

    #[test]
    fn eval_examples() {
        let p = poly(2, &[(&[2, 0], 1.0), (&[0, 1], 2.0)]);
        assert_eq!(p.eval(&[0.0, 0.0]).unwrap(), 0.0);
        let p = poly(1, &[(&[3], 1.0), (&[1], -3.0), (&[0], 2.0)]);
        assert_eq!(p.eval(&[1.0]).unwrap(), 0.0);
        let p = poly(2, &[(&[2, 1], 3.0)]);
        assert_eq!(p.eval(&[2.0, 1.0]).unwrap(), 12.0);
        assert!(matches!(p.eval(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn derivative_examples() {
        let p = poly(1, &[(&[3], 1.0)]);
        assert_eq!(
            p.partial_derivative(&MultiIndex::single(2)).unwrap(),
            poly(1, &[(&[1], 6.0)])
        );
        let p = poly(2, &[(&[2, 1], 3.0)]);
        let d = p.partial_derivative(&MultiIndex::new(vec![1, 1])).unwrap();
        assert_eq!(d.coeff(&MultiIndex::new(vec![1, 0])), 6.0);
        assert_eq!(d.num_terms(), 1);
        let p = poly(1, &[(&[3], 1.0), (&[1], 0.7), (&[0], -1.1)]);
        let d = p.partial_derivative(&MultiIndex::single(3)).unwrap();
        assert_eq!(d.coeff(&MultiIndex::single(0)), 6.0);
        assert_eq!(d.num_terms(), 1);
        let d = p.partial_derivative(&MultiIndex::single(4)).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn norm_examples() {
        let p = poly(1, &[(&[3], 1.0), (&[1], 1.0), (&[0], -2.0)]);
        assert_eq!(p.coeff_norm(NormMode::L1All), 4.0);
        assert_eq!(p.coeff_norm(NormMode::L1NonConstant), 2.0);
        assert_eq!(p.coeff_norm(NormMode::Max), 2.0);
    }

    #[test]
    fn construction_rules() {
        let p = PolyPhase::new(
            1,
            3,
            [
                (MultiIndex::single(1), 2.0),
                (MultiIndex::single(1), -2.0),
                (MultiIndex::single(0), 0.0),
            ],
        )
        .unwrap();
        assert!(p.is_zero());
        assert!(PolyPhase::new(1, 2, [(MultiIndex::single(3), 1.0)]).is_err());
        assert!(PolyPhase::new(2, 2, [(MultiIndex::single(1), 1.0)]).is_err());
        assert!(PolyPhase::new(1, 2, [(MultiIndex::single(1), f64::NAN)]).is_err());
        // tiny coefficients are kept
        let p = PolyPhase::new(1, 2, [(MultiIndex::single(1), 1e-300)]).unwrap();
        assert_eq!(p.num_terms(), 1);
    }

    #[test]
    fn variables_skipped_at_a_level() {
        // x2 only, x1 and x3 absent
        let p = poly(3, &[(&[0, 2, 0], 1.5), (&[1, 0, 3], -1.0)]);
        let x = [0.3, -1.2, 0.7];
        let naive = 1.5 * 1.44 - 0.3 * 0.343;
        assert!((p.eval(&x).unwrap() - naive).abs() < 1e-15);
    }
}
