//! Homogeneous polynomials over a tower of exact and high-precision
//! coefficients.
//!
//! A polynomial stores its terms in a `BTreeMap` keyed by [`MultiIndex`], so
//! every reduction walks the terms in lexicographic exponent order and float
//! results are reproducible run to run.

mod arith;
mod coeff;
mod complex;
mod io;
mod norm;

use std::collections::BTreeMap;
use std::fmt;

use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::numeric::Precision;

pub use coeff::{CoeffKind, Coefficient};
pub use complex::ComplexPoly;
pub use norm::{coeff_lp_norm, lp_interpolation_bounds, lp_norm_direct, lp_norm_of, LpNormValue};

/// Exponent vector `α` of a monomial `x^α`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Box<[u32]>);

impl MultiIndex {
    pub fn new(exponents: impl Into<Box<[u32]>>) -> Self {
        MultiIndex(exponents.into())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|α|`
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// Multinomial coefficient `|α|! / (α₁!…α_n!)`.
    pub fn multinomial(&self) -> Integer {
        let mut acc = Integer::from(1);
        let mut running = 0u32;
        for &a in self.0.iter() {
            running += a;
            acc *= Integer::from(Integer::binomial_u(running, a));
        }
        acc
    }

    /// Place this index at `offset` inside a vector of `total` variables.
    pub fn embed(&self, total: usize, offset: usize) -> MultiIndex {
        let mut v = vec![0u32; total];
        v[offset..offset + self.0.len()].copy_from_slice(&self.0);
        MultiIndex(v.into())
    }

    /// Every index of length `n` and total `m`, in ascending lexicographic order.
    pub fn all(n: usize, m: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, m: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if n == 1 {
                prefix.push(m);
                out.push(MultiIndex(prefix.clone().into()));
                prefix.pop();
                return;
            }
            for first in 0..=m {
                prefix.push(first);
                rec(n - 1, m - first, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        rec(n, m, &mut Vec::with_capacity(n), &mut out);
        out
    }

    /// `x^α` in double precision.
    pub fn monomial_f64(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .filter(|(a, _)| **a > 0)
            .map(|(&a, &xi)| xi.powi(a as i32))
            .product()
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v.into())
    }
}

impl From<&[u32]> for MultiIndex {
    fn from(v: &[u32]) -> Self {
        MultiIndex(v.into())
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        MultiIndex(Box::new(v))
    }
}

/// An `n`-variable, degree-`m` homogeneous polynomial with no stored zeros.
///
/// All coefficients share one [`CoeffKind`]; mixing kinds at construction
/// promotes everything to the widest one. `precision` is the working
/// precision for `Dec` coefficients and for high-precision evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousPoly {
    n: usize,
    m: u32,
    kind: CoeffKind,
    precision: Precision,
    terms: BTreeMap<MultiIndex, Coefficient>,
}

impl HomogeneousPoly {
    /// Build from a term list: duplicates are summed and zeros dropped.
    pub fn new<I>(n: usize, m: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Coefficient)>,
    {
        Self::with_precision(n, m, terms, Precision::default())
    }

    pub fn with_precision<I>(n: usize, m: u32, terms: I, precision: Precision) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Coefficient)>,
    {
        let terms: Vec<(MultiIndex, Coefficient)> = terms.into_iter().collect();
        let mut kind = CoeffKind::Int;
        for (alpha, c) in &terms {
            if alpha.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: alpha.len(),
                });
            }
            if alpha.total() != m {
                return Err(Error::NotHomogeneous {
                    expected: m,
                    found: alpha.total(),
                });
            }
            kind = kind.max(c.kind());
        }
        let bits = precision.bits();
        let mut map: BTreeMap<MultiIndex, Coefficient> = BTreeMap::new();
        for (alpha, c) in terms {
            let c = c.promote(kind, bits);
            match map.get_mut(&alpha) {
                Some(existing) => existing.add_assign(&c),
                None => {
                    map.insert(alpha, c);
                }
            }
        }
        map.retain(|_, c| !c.is_zero());
        Ok(HomogeneousPoly {
            n,
            m,
            kind,
            precision,
            terms: map,
        })
    }

    /// Internal constructor for terms already known to be valid and nonzero.
    pub(crate) fn from_parts(
        n: usize,
        m: u32,
        kind: CoeffKind,
        precision: Precision,
        terms: BTreeMap<MultiIndex, Coefficient>,
    ) -> Self {
        debug_assert!(terms.iter().all(|(a, c)| a.len() == n && a.total() == m && !c.is_zero()));
        HomogeneousPoly {
            n,
            m,
            kind,
            precision,
            terms,
        }
    }

    pub fn monomial(exponents: impl Into<MultiIndex>, c: Coefficient) -> Result<Self> {
        let alpha = exponents.into();
        Self::new(alpha.len(), alpha.total(), [(alpha, c)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn kind(&self) -> CoeffKind {
        self.kind
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Option<&Coefficient> {
        self.terms.get(alpha)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &Coefficient> {
        self.terms.values()
    }

    /// Same terms at a different working precision (re-rounds `Dec` values).
    pub fn at_precision(&self, precision: Precision) -> Self {
        let bits = precision.bits();
        let terms = self
            .terms
            .iter()
            .map(|(a, c)| (a.clone(), c.promote(self.kind, bits)))
            .collect();
        HomogeneousPoly {
            precision,
            terms,
            ..self.clone_shape()
        }
    }

    fn clone_shape(&self) -> Self {
        HomogeneousPoly {
            n: self.n,
            m: self.m,
            kind: self.kind,
            precision: self.precision,
            terms: BTreeMap::new(),
        }
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(a, c)| (a.clone(), c.neg())).collect();
        HomogeneousPoly {
            terms,
            ..self.clone_shape()
        }
    }

    /// `self` placed on variables `offset..offset+self.n` of a `total`-variable space.
    pub fn embed(&self, total: usize, offset: usize) -> Result<Self> {
        if offset + self.n > total {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: offset + self.n,
            });
        }
        let terms = self
            .terms
            .iter()
            .map(|(a, c)| (a.embed(total, offset), c.clone()))
            .collect();
        Ok(HomogeneousPoly {
            n: total,
            terms,
            ..self.clone_shape()
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        if self.m != other.m {
            return Err(Error::NotHomogeneous {
                expected: self.m,
                found: other.m,
            });
        }
        let precision = self.precision.max(other.precision);
        Self::with_precision(
            self.n,
            self.m,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(a, c)| (a.clone(), c.clone())),
            precision,
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: len,
            });
        }
        Ok(())
    }

    /// Double-precision evaluation.
    pub fn eval_real(&self, x: &[f64]) -> Result<f64> {
        self.check_len(x.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(a, c)| c.to_f64() * a.monomial_f64(x))
            .sum())
    }

    /// Evaluation at the polynomial's working precision. The point is taken
    /// exactly (every `f64` is a dyadic rational).
    pub fn eval_precise(&self, x: &[f64]) -> Result<Float> {
        self.check_len(x.len())?;
        let bits = self.precision.bits();
        let xs: Vec<Float> = x.iter().map(|&v| Float::with_val(bits, v)).collect();
        self.eval_float(&xs)
    }

    pub fn eval_float(&self, x: &[Float]) -> Result<Float> {
        self.check_len(x.len())?;
        let bits = self.precision.bits();
        let mut acc = Float::with_val(bits, 0);
        // cache of x_i^e, filled lazily
        let mut powers: Vec<Vec<Float>> = x.iter().map(|xi| vec![Float::with_val(bits, 1), xi.clone()]).collect();
        for (alpha, c) in &self.terms {
            let mut mono = c.to_float(bits);
            for (i, &e) in alpha.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= e as usize {
                    let next = Float::with_val(bits, table.last().unwrap() * &x[i]);
                    table.push(next);
                }
                mono *= &table[e as usize];
            }
            acc += mono;
        }
        Ok(acc)
    }

    /// Dense coefficient vector of a bivariate polynomial: entry `k` is the
    /// coefficient of `x^(m-k) y^k`.
    pub fn dense_bivariate(&self) -> Result<Vec<Coefficient>> {
        if self.n != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.n,
            });
        }
        let mut out = vec![Coefficient::zero(self.kind, self.precision.bits()); self.m as usize + 1];
        for (alpha, c) in &self.terms {
            out[alpha.exponents()[1] as usize] = c.clone();
        }
        Ok(out)
    }

    /// Inverse of [`HomogeneousPoly::dense_bivariate`].
    pub fn from_dense_bivariate(coeffs: Vec<Coefficient>, precision: Precision) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("dense vector needs at least one entry"));
        }
        let m = (coeffs.len() - 1) as u32;
        Self::with_precision(
            2,
            m,
            coeffs
                .into_iter()
                .enumerate()
                .map(|(k, c)| (MultiIndex::from([m - k as u32, k as u32]), c)),
            precision,
        )
    }

    /// Double-precision dense univariate restriction `t ↦ P(1, t)`
    /// (index = power of `t`).
    pub fn dense_f64(&self) -> Result<Vec<f64>> {
        Ok(self.dense_bivariate()?.iter().map(Coefficient::to_f64).collect())
    }
}

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let digits = self.precision.literal_digits();
        for (i, (alpha, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", c.literal(digits))?;
            for (j, &e) in alpha.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "·x{}", j + 1)?,
                    _ => write!(f, "·x{}^{}", j + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p4() -> HomogeneousPoly {
        HomogeneousPoly::new(
            2,
            4,
            [
                (MultiIndex::from([3, 1]), Coefficient::from(1)),
                (MultiIndex::from([1, 3]), Coefficient::from(-1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn construct_p4() {
        let p = p4();
        assert_eq!(p.len(), 2);
        assert_eq!(p.kind(), CoeffKind::Int);
        assert_eq!(p.coefficient(&MultiIndex::from([3, 1])), Some(&Coefficient::from(1)));
    }

    #[test]
    fn single_monomial() {
        let p = HomogeneousPoly::new(1, 3, [(MultiIndex::from([3]), Coefficient::from(5))]).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.eval_real(&[2.0]).unwrap(), 40.0);
    }

    #[test]
    fn rejects_inhomogeneous_and_bad_length() {
        let err = HomogeneousPoly::new(2, 2, [(MultiIndex::from([1, 0]), Coefficient::from(1))]).unwrap_err();
        assert!(matches!(err, Error::NotHomogeneous { expected: 2, found: 1 }));
        let err = HomogeneousPoly::new(2, 2, [(MultiIndex::from([2]), Coefficient::from(1))]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn duplicates_summed_and_zeros_dropped() {
        let p = HomogeneousPoly::new(
            2,
            2,
            [
                (MultiIndex::from([1, 1]), Coefficient::from(2)),
                (MultiIndex::from([1, 1]), Coefficient::from(-2)),
                (MultiIndex::from([2, 0]), Coefficient::from(3)),
                (MultiIndex::from([0, 2]), Coefficient::from(0)),
            ],
        )
        .unwrap();
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn mixed_kinds_promote() {
        let p = HomogeneousPoly::new(
            2,
            1,
            [
                (MultiIndex::from([1, 0]), Coefficient::from(1)),
                (MultiIndex::from([0, 1]), Coefficient::Rat(rug::Rational::from((1, 3)))),
            ],
        )
        .unwrap();
        assert_eq!(p.kind(), CoeffKind::Rat);
        assert!(p.coefficients().all(|c| c.kind() == CoeffKind::Rat));
    }

    #[test]
    fn eval_p4_at_norming_point() {
        let p = p4();
        let s = 1.0 / 3f64.sqrt();
        let v = p.eval_real(&[1.0, s]).unwrap();
        assert!((v - 2.0 * 3f64.sqrt() / 9.0).abs() < 1e-15);
        assert_eq!(p.eval_real(&[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(p.eval_real(&[2.0, 2.0]).unwrap(), 0.0);
        let t = 1.7;
        let scaled = p.eval_real(&[t, t * s]).unwrap();
        assert!((scaled - t.powi(4) * v).abs() < 1e-14);
        let precise = p.eval_precise(&[1.0, s]).unwrap();
        assert!((precise.to_f64() - v).abs() < 1e-16);
        assert!(p.eval_real(&[1.0]).is_err());
    }

    #[test]
    fn multi_index_enumeration() {
        let all = MultiIndex::all(2, 2);
        assert_eq!(all, vec![MultiIndex::from([0, 2]), MultiIndex::from([1, 1]), MultiIndex::from([2, 0])]);
        assert_eq!(MultiIndex::all(10, 3).len(), 220);
        assert_eq!(MultiIndex::from([2, 1, 1]).multinomial(), 12);
    }

    #[test]
    fn dense_view_round_trip() {
        let p = p4();
        let dense = p.dense_bivariate().unwrap();
        assert_eq!(dense.len(), 5);
        assert_eq!(dense[1], Coefficient::from(1));
        assert_eq!(dense[3], Coefficient::from(-1));
        let back = HomogeneousPoly::from_dense_bivariate(dense, p.precision()).unwrap();
        assert_eq!(back, p);
    }
}
