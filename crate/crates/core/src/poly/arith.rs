//! Products and powers.
//!
//! Exact inputs are multiplied as integers: a rational polynomial is written
//! as `(integer polynomial) / L` with `L` the lcm of its denominators, so every
//! convolution step is pure big-integer work. Bivariate products take a dense
//! convolution over the `y` exponent.

use std::collections::{BTreeMap, HashMap};

use rug::{Float, Integer, Rational};

use super::{CoeffKind, Coefficient, HomogeneousPoly, MultiIndex};
use crate::error::{Error, Result};
use crate::numeric::Precision;

trait Ring: Clone {
    fn zero_like(&self) -> Self;
    fn fma(acc: &mut Self, a: &Self, b: &Self);
    fn is_zero(&self) -> bool;
}

impl Ring for Integer {
    fn zero_like(&self) -> Self {
        Integer::new()
    }
    fn fma(acc: &mut Self, a: &Self, b: &Self) {
        *acc += a * b;
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
}

impl Ring for Float {
    fn zero_like(&self) -> Self {
        Float::new(self.prec())
    }
    fn fma(acc: &mut Self, a: &Self, b: &Self) {
        *acc += a * b;
    }
    fn is_zero(&self) -> bool {
        Float::is_zero(self)
    }
}

type Terms<R> = Vec<(MultiIndex, R)>;

enum Work {
    Exact { terms: Terms<Integer>, denom: Integer },
    Approx { terms: Terms<Float> },
}

fn to_work(p: &HomogeneousPoly, kind: CoeffKind, bits: u32) -> Work {
    match kind {
        CoeffKind::Int | CoeffKind::Rat => {
            let mut denom = Integer::from(1);
            for c in p.coefficients() {
                if let Coefficient::Rat(r) = c {
                    denom.lcm_mut(r.denom());
                }
            }
            let terms = p
                .terms()
                .map(|(a, c)| {
                    let v = match c {
                        Coefficient::Int(v) => Integer::from(v * &denom),
                        Coefficient::Rat(r) => r.numer() * Integer::from(&denom / r.denom()),
                        Coefficient::Float(_) => unreachable!("exact work from a float polynomial"),
                    };
                    (a.clone(), v)
                })
                .collect();
            Work::Exact { terms, denom }
        }
        CoeffKind::Dec => Work::Approx {
            terms: p.terms().map(|(a, c)| (a.clone(), c.to_float(bits))).collect(),
        },
    }
}

fn from_work(work: Work, n: usize, m: u32, kind: CoeffKind, precision: Precision) -> HomogeneousPoly {
    let terms: BTreeMap<MultiIndex, Coefficient> = match work {
        Work::Exact { terms, denom } => terms
            .into_iter()
            .filter(|(_, v)| *v != 0)
            .map(|(a, v)| {
                let c = if kind == CoeffKind::Int {
                    debug_assert!(denom == 1);
                    Coefficient::Int(v)
                } else {
                    Coefficient::Rat(Rational::from((v, denom.clone())))
                };
                (a, c)
            })
            .collect(),
        Work::Approx { terms } => terms
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(a, v)| (a, Coefficient::Float(v)))
            .collect(),
    };
    HomogeneousPoly::from_parts(n, m, kind, precision, terms)
}

fn convolve<R: Ring>(a: &[R], b: &[R]) -> Vec<R> {
    let zero = a[0].zero_like();
    let mut out = vec![zero; a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            R::fma(&mut out[i + j], ai, bj);
        }
    }
    out
}

fn dense<R: Ring>(terms: &Terms<R>, m: u32) -> Vec<R> {
    let zero = terms[0].1.zero_like();
    let mut v = vec![zero; m as usize + 1];
    for (a, c) in terms {
        v[a.exponents()[1] as usize] = c.clone();
    }
    v
}

fn mul_terms<R: Ring>(n: usize, a: &Terms<R>, ma: u32, b: &Terms<R>, mb: u32) -> Terms<R> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let m = ma + mb;
    if n == 2 {
        return convolve(&dense(a, ma), &dense(b, mb))
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (MultiIndex::from([m - k as u32, k as u32]), c))
            .collect();
    }
    let mut acc: HashMap<MultiIndex, R> = HashMap::with_capacity(a.len() * b.len() / 2 + 1);
    let zero = a[0].1.zero_like();
    for (ia, ca) in a {
        for (ib, cb) in b {
            let slot = acc.entry(ia.add(ib)).or_insert_with(|| zero.clone());
            R::fma(slot, ca, cb);
        }
    }
    let mut out: Terms<R> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    out.sort_unstable_by(|x, y| x.0.cmp(&y.0));
    out
}

fn mul_work(n: usize, a: &Work, ma: u32, b: &Work, mb: u32) -> Work {
    match (a, b) {
        (Work::Exact { terms: ta, denom: da }, Work::Exact { terms: tb, denom: db }) => Work::Exact {
            terms: mul_terms(n, ta, ma, tb, mb),
            denom: Integer::from(da * db),
        },
        (Work::Approx { terms: ta }, Work::Approx { terms: tb }) => Work::Approx {
            terms: mul_terms(n, ta, ma, tb, mb),
        },
        _ => unreachable!("operands promoted to a common kind"),
    }
}

impl HomogeneousPoly {
    /// Exact product when both factors are exact.
    pub fn mul(&self, other: &HomogeneousPoly) -> Result<HomogeneousPoly> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let kind = self.kind.max(other.kind);
        let precision = self.precision.max(other.precision);
        let bits = precision.bits();
        let a = to_work(self, kind, bits);
        let b = to_work(other, kind, bits);
        let m = self.m + other.m;
        Ok(from_work(mul_work(self.n, &a, self.m, &b, other.m), self.n, m, kind, precision))
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, k: u32) -> Result<HomogeneousPoly> {
        if k == 0 {
            return Err(Error::invalid("power must be at least 1"));
        }
        let bits = self.precision.bits();
        let mut base = to_work(self, self.kind, bits);
        let mut base_m = self.m;
        let mut acc: Option<(Work, u32)> = None;
        let mut e = k;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => (clone_work(&base), base_m),
                    Some((w, wm)) => (mul_work(self.n, &w, wm, &base, base_m), wm + base_m),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = mul_work(self.n, &base, base_m, &base, base_m);
            base_m *= 2;
        }
        let (w, m) = acc.expect("k >= 1");
        Ok(from_work(w, self.n, m, self.kind, self.precision))
    }
}

fn clone_work(w: &Work) -> Work {
    match w {
        Work::Exact { terms, denom } => Work::Exact {
            terms: terms.clone(),
            denom: denom.clone(),
        },
        Work::Approx { terms } => Work::Approx { terms: terms.clone() },
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
    fn p4_squared_by_hand() {
        let sq = p4().mul(&p4()).unwrap();
        let expect = HomogeneousPoly::new(
            2,
            8,
            [
                (MultiIndex::from([6, 2]), Coefficient::from(1)),
                (MultiIndex::from([4, 4]), Coefficient::from(-2)),
                (MultiIndex::from([2, 6]), Coefficient::from(1)),
            ],
        )
        .unwrap();
        assert_eq!(sq, expect);
        assert_eq!(p4().pow(2).unwrap(), expect);
    }

    #[test]
    fn p4_cubed_binomial() {
        let c = p4().pow(3).unwrap();
        let signs = [(9u32, 3u32, -1i32), (7, 5, 3), (5, 7, -3), (3, 9, 1)];
        assert_eq!(c.len(), 4);
        for (x, y, v) in signs {
            assert_eq!(c.coefficient(&MultiIndex::from([x, y])), Some(&Coefficient::from(-v)));
        }
    }

    #[test]
    fn monomial_shift_and_identity_power() {
        let mono = HomogeneousPoly::monomial([2u32, 0], Coefficient::from(1)).unwrap();
        let shifted = p4().mul(&mono).unwrap();
        assert_eq!(shifted.coefficient(&MultiIndex::from([5, 1])), Some(&Coefficient::from(1)));
        assert_eq!(shifted.coefficient(&MultiIndex::from([3, 3])), Some(&Coefficient::from(-1)));
        assert_eq!(p4().pow(1).unwrap(), p4());
        assert!(p4().pow(0).is_err());
    }

    #[test]
    fn sparse_matches_dense_route() {
        // the same bivariate product computed on 3 variables (sparse path)
        let a3 = p4().embed(3, 0).unwrap();
        let sparse = a3.pow(5).unwrap();
        let dense = p4().pow(5).unwrap().embed(3, 0).unwrap();
        assert_eq!(sparse, dense);
    }

    #[test]
    fn rational_powers_exact() {
        let p = HomogeneousPoly::new(
            2,
            1,
            [
                (MultiIndex::from([1, 0]), Coefficient::Rat(Rational::from((1, 2)))),
                (MultiIndex::from([0, 1]), Coefficient::Rat(Rational::from((1, 3)))),
            ],
        )
        .unwrap();
        let p3 = p.pow(3).unwrap();
        assert_eq!(
            p3.coefficient(&MultiIndex::from([1, 2])),
            Some(&Coefficient::Rat(Rational::from((1, 6))))
        );
        assert_eq!(p3.kind(), CoeffKind::Rat);
    }

    #[test]
    fn mismatched_dimensions() {
        let q = HomogeneousPoly::monomial([1u32, 1, 1], Coefficient::from(1)).unwrap();
        assert!(matches!(p4().mul(&q), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn float_powers_track_exact() {
        let f = p4().at_precision(Precision::default());
        let approx = HomogeneousPoly::new(
            2,
            4,
            f.terms().map(|(a, c)| (a.clone(), c.promote(CoeffKind::Dec, 200))),
        )
        .unwrap();
        let e = p4().pow(6).unwrap();
        let a = approx.pow(6).unwrap();
        assert_eq!(a.kind(), CoeffKind::Dec);
        for (idx, c) in e.terms() {
            assert_eq!(a.coefficient(idx).unwrap().to_f64(), c.to_f64());
        }
    }
}
