use num_complex::Complex64;

use super::{HomogeneousPoly, MultiIndex};
use crate::error::{Error, Result};

/// Homogeneous polynomial with double-precision complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoly {
    n: usize,
    m: u32,
    terms: Vec<(MultiIndex, Complex64)>,
}

impl ComplexPoly {
    pub fn new<I>(n: usize, m: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut map = std::collections::BTreeMap::<MultiIndex, Complex64>::new();
        for (alpha, c) in terms {
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
            *map.entry(alpha).or_default() += c;
        }
        let terms = map.into_iter().filter(|(_, c)| *c != Complex64::new(0.0, 0.0)).collect();
        Ok(ComplexPoly { n, m, terms })
    }

    pub fn from_real(p: &HomogeneousPoly) -> Self {
        ComplexPoly {
            n: p.n(),
            m: p.degree(),
            terms: p
                .terms()
                .map(|(a, c)| (a.clone(), Complex64::new(c.to_f64(), 0.0)))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn terms(&self) -> &[(MultiIndex, Complex64)] {
        &self.terms
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: z.len(),
            });
        }
        Ok(self.terms.iter().map(|(a, c)| c * monomial(a, z)).sum())
    }

    /// `|P|_2`, which equals the L² norm of `P` on the torus.
    pub fn l2_norm(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

fn monomial(alpha: &MultiIndex, z: &[Complex64]) -> Complex64 {
    alpha
        .exponents()
        .iter()
        .zip(z)
        .filter(|(e, _)| **e > 0)
        .map(|(&e, zi)| zi.powu(e))
        .product()
}

impl HomogeneousPoly {
    /// Complex evaluation in double precision.
    pub fn eval_complex(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: z.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(a, c)| c.to_f64() * monomial(a, z))
            .sum())
    }
}
