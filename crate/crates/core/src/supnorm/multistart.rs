//! General-`n` fallback: coordinate ascent from random starts on each face
//! `x_j = 1` of the cube. By homogeneity `|P(−x)| = |P(x)|`, so these faces
//! cover the whole boundary. The result is a certified lower bound only.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Float;

use super::univariate::{horner_f64, max_abs_quick};
use super::{better, Method, OptimizerConfig, SupNormResult};
use crate::error::{Error, Result};
use crate::poly::HomogeneousPoly;

const MAX_SWEEPS: usize = 200;
const LINE_GRID: usize = 33;

struct Term {
    coeff: f64,
    vars: Vec<(usize, u32)>,
}

pub(crate) struct Compiled {
    n: usize,
    terms: Vec<Term>,
    by_var: Vec<Vec<(usize, u32)>>,
    var_degree: Vec<u32>,
}

impl Compiled {
    pub(crate) fn new(p: &HomogeneousPoly) -> Self {
        let n = p.n();
        let mut by_var = vec![Vec::new(); n];
        let mut var_degree = vec![0u32; n];
        let terms: Vec<Term> = p
            .terms()
            .enumerate()
            .map(|(t, (alpha, c))| {
                let vars: Vec<(usize, u32)> = alpha
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .map(|(i, &e)| (i, e))
                    .collect();
                for &(i, e) in &vars {
                    by_var[i].push((t, e));
                    var_degree[i] = var_degree[i].max(e);
                }
                Term {
                    coeff: c.to_f64(),
                    vars,
                }
            })
            .collect();
        Compiled {
            n,
            terms,
            by_var,
            var_degree,
        }
    }

    pub(crate) fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff * t.vars.iter().map(|&(i, e)| x[i].powi(e as i32)).product::<f64>())
            .sum()
    }

    /// Coefficients of `P` as a polynomial in `x_i`, other coordinates fixed.
    fn line(&self, x: &[f64], i: usize, value: f64) -> Vec<f64> {
        let mut c = vec![0.0; self.var_degree[i] as usize + 1];
        let mut through = 0.0;
        for &(t, e) in &self.by_var[i] {
            let term = &self.terms[t];
            let w: f64 = term.coeff
                * term
                    .vars
                    .iter()
                    .filter(|(j, _)| *j != i)
                    .map(|&(j, f)| x[j].powi(f as i32))
                    .product::<f64>();
            c[e as usize] += w;
            through += w * x[i].powi(e as i32);
        }
        c[0] += value - through;
        c
    }

    /// Coordinate ascent on `|P|` with coordinate `fixed` held at 1.
    pub(crate) fn ascend(&self, x: &mut [f64], fixed: Option<usize>) -> f64 {
        let mut value = self.eval(x);
        for _ in 0..MAX_SWEEPS {
            value = self.eval(x);
            let start = value.abs();
            for i in 0..self.n {
                if Some(i) == fixed || self.by_var[i].is_empty() {
                    continue;
                }
                let c = self.line(x, i, value);
                let (t, v) = max_abs_quick(&c, -1.0, 1.0, LINE_GRID);
                if v > value.abs() {
                    x[i] = t;
                    value = horner_f64(&c, t);
                }
            }
            if value.abs() <= start * (1.0 + 1e-15) {
                break;
            }
        }
        value.abs()
    }
}

pub fn sup_norm_multistart(p: &HomogeneousPoly, cfg: &OptimizerConfig) -> Result<SupNormResult> {
    cfg.validate()?;
    let n = p.n();
    if n < 2 {
        return Err(Error::invalid("multistart needs at least two variables"));
    }
    let compiled = Compiled::new(p);
    let per_face: Vec<Option<(f64, Vec<f64>)>> = (0..n)
        .into_par_iter()
        .map(|face| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(face as u64);
            let mut best: Option<(f64, Vec<f64>)> = None;
            for restart in 0..cfg.restarts {
                let mut x: Vec<f64> = if restart == 0 {
                    vec![1.0; n]
                } else {
                    (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()
                };
                x[face] = 1.0;
                let v = compiled.ascend(&mut x, Some(face));
                if !v.is_finite() {
                    continue;
                }
                let cand = (v, x);
                if best.as_ref().is_none_or(|b| better(&cand, b)) {
                    best = Some(cand);
                }
            }
            best
        })
        .collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for cand in per_face.into_iter().flatten() {
        if best.as_ref().is_none_or(|b| better(&cand, b)) {
            best = Some(cand);
        }
    }
    let (v, x) = best.ok_or_else(|| Error::ConvergenceFailure("every restart produced a non-finite value".into()))?;
    let bits = p.precision().bits();
    SupNormResult::for_poly(p, Float::with_val(bits, v), x, Method::MultiStart)
}
