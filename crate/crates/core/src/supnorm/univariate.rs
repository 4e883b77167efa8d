use rug::Float;

use super::{Method, OptimizerConfig, SupNormResult};
use crate::error::{Error, Result};
use crate::numeric::polish_root;
use crate::poly::HomogeneousPoly;

/// `Σ c[k] x^k`.
pub fn horner_f64(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

fn horner_float(c: &[Float], x: f64, bits: u32) -> Float {
    let mut acc = Float::new(bits);
    for a in c.iter().rev() {
        acc *= x;
        acc += a;
    }
    acc
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, &a)| k as f64 * a).collect()
}

/// Endpoints, every polished sign change of `p'` on the grid, and the best grid
/// sample of `|p|`.
pub(crate) fn critical_candidates(c: &[f64], lo: f64, hi: f64, grid: usize, tol: f64) -> Result<Vec<f64>> {
    let mut out = vec![lo, hi];
    let d = derivative(c);
    if d.iter().all(|&v| v == 0.0) || hi <= lo {
        return Ok(out);
    }
    let dd = derivative(&d);
    let xs: Vec<f64> = (0..grid)
        .map(|i| if i + 1 == grid { hi } else { lo + (hi - lo) * i as f64 / (grid - 1) as f64 })
        .collect();
    let ds: Vec<f64> = xs.iter().map(|&x| horner_f64(&d, x)).collect();

    let mut best = (0usize, -1.0f64);
    for (i, &x) in xs.iter().enumerate() {
        let v = horner_f64(c, x).abs();
        if v > best.1 {
            best = (i, v);
        }
    }
    out.push(xs[best.0]);

    let changes: Vec<bool> = (0..grid - 1)
        .map(|i| ds[i] != 0.0 && ds[i + 1] != 0.0 && (ds[i] < 0.0) != (ds[i + 1] < 0.0))
        .collect();
    for i in 0..grid {
        if ds[i] == 0.0 {
            out.push(xs[i]);
        }
        if i + 1 < grid && changes[i] {
            let clustered = (i > 0 && changes[i - 1]) || (i + 2 < grid && changes[i + 1]);
            let root = polish_root(
                |x| horner_f64(&d, x),
                |x| horner_f64(&dd, x),
                xs[i],
                xs[i + 1],
                tol,
                clustered,
            )?;
            out.push(root);
        }
    }
    Ok(out)
}

fn pick_best(c: &[Float], candidates: &[f64], bits: u32) -> (f64, Float) {
    let mut best: Option<(f64, Float)> = None;
    for &x in candidates {
        let v = horner_float(c, x, bits).abs();
        let replace = match &best {
            None => true,
            Some((bx, bv)) => v > *bv || (v == *bv && x < *bx),
        };
        if replace {
            best = Some((x, v));
        }
    }
    best.expect("endpoints are always candidates")
}

/// `max |Σ c[k] x^k|` over `[lo, hi]`, with candidates evaluated at the
/// coefficients' precision.
pub fn univariate_max_abs(c: &[Float], lo: f64, hi: f64, cfg: &OptimizerConfig) -> Result<SupNormResult> {
    cfg.validate()?;
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::invalid(format!("empty interval [{lo}, {hi}]")));
    }
    let bits = c.iter().map(Float::prec).max().unwrap_or(64);
    let c64: Vec<f64> = c.iter().map(Float::to_f64).collect();
    let candidates = critical_candidates(&c64, lo, hi, cfg.grid_points, cfg.newton_tol)?;
    let (x, v) = pick_best(c, &candidates, bits);
    let coeffs = c.to_vec();
    SupNormResult::certify(v, vec![x], Method::UnivariateCritical, move |p| {
        Ok(horner_float(&coeffs, p[0], bits))
    })
}

pub fn univariate_max_abs_f64(c: &[f64], lo: f64, hi: f64, cfg: &OptimizerConfig) -> Result<SupNormResult> {
    let cf: Vec<Float> = c.iter().map(|&v| Float::with_val(53, v)).collect();
    univariate_max_abs(&cf, lo, hi, cfg)
}

/// Cheap double-precision `(argmax, max)` of `|p|` on `[lo, hi]`.
pub(crate) fn max_abs_quick(c: &[f64], lo: f64, hi: f64, grid: usize) -> (f64, f64) {
    let candidates = match c.len() {
        0..=2 => vec![lo, hi],
        3 => {
            let mut v = vec![lo, hi];
            if c[2] != 0.0 {
                let t = -c[1] / (2.0 * c[2]);
                if t > lo && t < hi {
                    v.push(t);
                }
            }
            v
        }
        _ => critical_candidates(c, lo, hi, grid, 1e-13).unwrap_or_else(|_| {
            (0..grid).map(|i| lo + (hi - lo) * i as f64 / (grid - 1) as f64).collect()
        }),
    };
    let mut best = (lo, -1.0);
    for x in candidates {
        let v = horner_f64(c, x).abs();
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// `‖P‖` for bivariate `P`, by homogeneity the larger of the maxima of
/// `|P(1, y)|` and `|P(x, 1)|` over `[-1, 1]`.
pub fn sup_norm_bivariate(p: &HomogeneousPoly, cfg: &OptimizerConfig) -> Result<SupNormResult> {
    if p.n() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: p.n(),
        });
    }
    let bits = p.precision().bits();
    // coefficient of x^(m-k) y^k
    let dense: Vec<Float> = p.dense_bivariate()?.iter().map(|c| c.to_float(bits)).collect();
    let reversed: Vec<Float> = dense.iter().rev().cloned().collect();
    let face_y = univariate_max_abs(&dense, -1.0, 1.0, cfg)?;
    let face_x = univariate_max_abs(&reversed, -1.0, 1.0, cfg)?;
    let (value, point) = if face_x.value > face_y.value {
        (face_x.value, vec![face_x.maximizer[0], 1.0])
    } else {
        (face_y.value, vec![1.0, face_y.maximizer[0]])
    };
    SupNormResult::for_poly(p, value, point, Method::UnivariateCritical)
}
