//! Multilinear forms on `(ℓ∞ⁿ)^m`.
//!
//! A form is affine in each slot, so its sup over the product of cubes is
//! attained at sign vectors. Indices are 0-based throughout.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::numeric::Precision;
use crate::poly::{lp_norm_of, CoeffKind, Coefficient, HomogeneousPoly, LpNormValue, MultiIndex};
use crate::supnorm::{sup_norm_auto, Method, OptimizerConfig, SupNormResult};

/// Largest number of enumerated sign bits, `n·(m−1)`, for exhaustive vertex
/// enumeration; the last slot is solved in closed form.
pub const BRUTE_FORCE_CAP: usize = 26;
const SIGN_RESTARTS: usize = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct MultilinearForm {
    m: usize,
    n: usize,
    coeffs: BTreeMap<Vec<usize>, Coefficient>,
}

impl MultilinearForm {
    pub fn new<I>(m: usize, n: usize, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Coefficient)>,
    {
        if m == 0 || n == 0 {
            return Err(Error::invalid("multilinear form needs m, n >= 1"));
        }
        let raw: Vec<(Vec<usize>, Coefficient)> = coeffs.into_iter().collect();
        let kind = raw.iter().map(|(_, c)| c.kind()).max().unwrap_or(CoeffKind::Int);
        let bits = Precision::default().bits();
        let mut map: BTreeMap<Vec<usize>, Coefficient> = BTreeMap::new();
        for (idx, c) in raw {
            if idx.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: idx.len(),
                });
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
                return Err(Error::invalid(format!("index {bad} outside 0..{n}")));
            }
            let c = c.promote(kind, bits);
            match map.get_mut(&idx) {
                Some(e) => e.add_assign(&c),
                None => {
                    map.insert(idx, c);
                }
            }
        }
        map.retain(|_, c| !c.is_zero());
        Ok(MultilinearForm { m, n, coeffs: map })
    }

    pub fn arity(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&Vec<usize>, &Coefficient)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, idx: &[usize]) -> Option<&Coefficient> {
        self.coeffs.get(idx)
    }

    /// `T(x¹, …, x^m)` with the slot vectors concatenated in `x`.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x.len())?;
        Ok(self
            .coeffs
            .iter()
            .map(|(idx, c)| c.to_f64() * idx.iter().enumerate().map(|(s, &i)| x[s * self.n + i]).product::<f64>())
            .sum())
    }

    pub fn eval_precise(&self, x: &[f64], bits: u32) -> Result<Float> {
        self.check_point(x.len())?;
        let mut acc = Float::new(bits);
        for (idx, c) in &self.coeffs {
            let mut t = c.to_float(bits);
            for (s, &i) in idx.iter().enumerate() {
                t *= x[s * self.n + i];
            }
            acc += t;
        }
        Ok(acc)
    }

    fn check_point(&self, len: usize) -> Result<()> {
        if len != self.m * self.n {
            return Err(Error::DimensionMismatch {
                expected: self.m * self.n,
                found: len,
            });
        }
        Ok(())
    }

    /// Dense row-major tensor, slot 0 most significant.
    fn dense(&self) -> Vec<f64> {
        let mut t = vec![0.0; self.n.pow(self.m as u32)];
        for (idx, c) in &self.coeffs {
            let flat = idx.iter().fold(0usize, |acc, &i| acc * self.n + i);
            t[flat] = c.to_f64();
        }
        t
    }

    /// Whether the form is invariant under every permutation of its slots.
    pub fn is_symmetric(&self) -> bool {
        self.coeffs.iter().all(|(idx, c)| {
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            self.coeffs.get(&sorted) == Some(c)
        })
    }
}

fn contract_first(t: &[f64], n: usize, signs: &[f64]) -> Vec<f64> {
    let stride = t.len() / n;
    let mut out = vec![0.0; stride];
    for (i, &s) in signs.iter().enumerate() {
        for (o, v) in out.iter_mut().zip(&t[i * stride..(i + 1) * stride]) {
            *o += s * v;
        }
    }
    out
}

fn sign_vector(bits: usize, n: usize) -> Vec<f64> {
    (0..n).map(|i| if bits >> i & 1 == 1 { -1.0 } else { 1.0 }).collect()
}

fn signs_of(c: &[f64]) -> Vec<f64> {
    c.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect()
}

/// Best value and slot signs for a dense tensor with `slots` remaining.
fn enumerate(t: &[f64], n: usize, slots: usize) -> (f64, Vec<f64>) {
    if slots == 1 {
        return (t.iter().map(|v| v.abs()).sum(), signs_of(t));
    }
    let mut best = (-1.0, Vec::new());
    for pattern in 0..(1usize << n) {
        let s = sign_vector(pattern, n);
        let (v, mut rest) = enumerate(&contract_first(t, n, &s), n, slots - 1);
        if v > best.0 {
            let mut x = s;
            x.append(&mut rest);
            best = (v, x);
        }
    }
    best
}

fn exhaustive(form: &MultilinearForm) -> (f64, Vec<f64>) {
    let n = form.n;
    let t = form.dense();
    if form.m == 1 {
        return enumerate(&t, n, 1);
    }
    // the first slot's first sign can be fixed: flipping a whole slot only
    // flips the sign of T
    let results: Vec<(f64, Vec<f64>)> = (0..(1usize << (n - 1)))
        .into_par_iter()
        .map(|half| {
            let s = sign_vector(half << 1, n);
            let (v, mut rest) = enumerate(&contract_first(&t, n, &s), n, form.m - 1);
            let mut x = s;
            x.append(&mut rest);
            (v, x)
        })
        .collect();
    results
        .into_iter()
        .fold((-1.0, Vec::new()), |best, c| if c.0 > best.0 { c } else { best })
}

/// Contract every slot except `skip` against the current slot vectors.
fn slot_gradient(form: &MultilinearForm, x: &[Vec<f64>], skip: usize) -> Vec<f64> {
    let mut g = vec![0.0; form.n];
    for (idx, c) in &form.coeffs {
        let w: f64 = idx
            .iter()
            .enumerate()
            .filter(|(s, _)| *s != skip)
            .map(|(s, &i)| x[s][i])
            .product();
        g[idx[skip]] += c.to_f64() * w;
    }
    g
}

fn alternating(form: &MultilinearForm, seed: u64) -> (f64, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = (-1.0, Vec::new());
    for _ in 0..SIGN_RESTARTS {
        let mut x: Vec<Vec<f64>> = (0..form.m)
            .map(|_| (0..form.n).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect())
            .collect();
        let mut value = f64::NEG_INFINITY;
        for _ in 0..1000 {
            let mut changed = false;
            for s in 0..form.m {
                let g = slot_gradient(form, &x, s);
                let next = signs_of(&g);
                if next != x[s] {
                    x[s] = next;
                    changed = true;
                }
                value = g.iter().map(|v| v.abs()).sum();
            }
            if !changed {
                break;
            }
        }
        if value > best.0 {
            best = (value, x.concat());
        }
    }
    best
}

/// `‖T‖` over the product of cubes. Exhaustive when `n·(m−1) <= BRUTE_FORCE_CAP`; above that
/// an alternating per-slot sign optimization (heuristic) if `iterative`.
pub fn ml_sup_norm_bruteforce(form: &MultilinearForm, iterative: bool) -> Result<SupNormResult> {
    let bits = Precision::default().bits();
    let size = form.n * (form.m - 1);
    let (estimate, x, method) = if size <= BRUTE_FORCE_CAP {
        let (v, x) = exhaustive(form);
        (v, x, Method::VertexEnumeration)
    } else if iterative {
        let (v, x) = alternating(form, 0);
        (v, x, Method::MultiStart)
    } else {
        return Err(Error::invalid(format!(
            "n·(m−1) = {size} exceeds the exhaustive cap {BRUTE_FORCE_CAP}; enable the iterative search"
        )));
    };
    // the ±1 point is exact, so the precise evaluation is the true value
    SupNormResult::certify(Float::with_val(bits, estimate), x, method, |p| form.eval_precise(p, bits))
}

/// ℓ_q norm of the full coefficient tensor.
pub fn ml_coeff_lq_norm(form: &MultilinearForm, q: &Rational) -> Result<LpNormValue> {
    lp_norm_of(form.coeffs.values(), q, Precision::default().bits())
}

/// The symmetric `m`-linear form with `T(x, …, x) = P(x)`:
/// `T(e_{i₁}, …, e_{i_m}) = a_α / binom(m, α)` where `α` counts the indices.
pub fn polar_form(p: &HomogeneousPoly) -> Result<MultilinearForm> {
    let (m, n) = (p.degree() as usize, p.n());
    if m > 6 || n > 4 || m == 0 {
        return Err(Error::invalid(format!("polar form limited to 1 <= m <= 6, n <= 4 (got m={m}, n={n})")));
    }
    let bits = p.precision().bits();
    let mut coeffs = Vec::new();
    for flat in 0..n.pow(m as u32) {
        let mut idx = vec![0usize; m];
        let mut rest = flat;
        for slot in (0..m).rev() {
            idx[slot] = rest % n;
            rest /= n;
        }
        let mut alpha = vec![0u32; n];
        for &i in &idx {
            alpha[i] += 1;
        }
        let alpha = MultiIndex::from(alpha);
        if let Some(a) = p.coefficient(&alpha) {
            let mult = alpha.multinomial();
            let c = match a {
                Coefficient::Int(v) => Coefficient::Rat(Rational::from((v.clone(), mult))),
                Coefficient::Rat(v) => Coefficient::Rat(v / Rational::from(mult)),
                Coefficient::Float(v) => Coefficient::Float(Float::with_val(bits, v / &mult)),
            };
            coeffs.push((idx, c));
        }
    }
    MultilinearForm::new(m, n, coeffs)
}

/// `(‖T‖, (m^m/m!)·‖P‖)` for the polar form `T` of `P`.
pub fn polarization_norm_check(p: &HomogeneousPoly, cfg: &OptimizerConfig) -> Result<(Float, Float)> {
    let t = polar_form(p)?;
    let t_norm = ml_sup_norm_bruteforce(&t, true)?;
    let p_norm = sup_norm_auto(p, cfg)?;
    let m = p.degree();
    let bits = p.precision().bits();
    let factor = Rational::from((Integer::from(Integer::u_pow_u(m, m)), Integer::from(Integer::factorial(m))));
    let bound = Float::with_val(bits, &factor) * &p_norm.value;
    Ok((t_norm.value, bound))
}

/// `(4^{m−1})^{1/q} / 2^{m−1} = 2^{(m−1)(2/q − 1)}`.
pub fn cm_lower_bound(m: u32, q: &Rational) -> Result<Float> {
    if m < 2 {
        return Err(Error::invalid(format!("cm_lower_bound needs m >= 2, got {m}")));
    }
    if *q < 1 {
        return Err(Error::invalid(format!("q must be >= 1, got {q}")));
    }
    let bits = Precision::default().bits();
    let exponent = (Rational::from(2) / q.clone() - 1u32) * (m - 1);
    let e = Float::with_val(bits, &exponent);
    Ok(Float::with_val(bits, 2).pow(&e))
}
