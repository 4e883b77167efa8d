//! Lower estimate of the complex sup norm over the polydisc. By the maximum
//! modulus principle the sup is attained on the torus, and since
//! `|P(e^{iθ}z)| = |P(z)|` for homogeneous `P` the first angle can be fixed
//! at zero.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;

pub const DEFAULT_TORUS_GRID: usize = 4096;
const TOP_K: usize = 16;
const REFINE_ROUNDS: u32 = 3;
const MAX_GRID_POINTS: usize = 1 << 26;

fn modulus(p: &ComplexPoly, angles: &[f64]) -> f64 {
    let mut z = Vec::with_capacity(angles.len() + 1);
    z.push(Complex64::new(1.0, 0.0));
    z.extend(angles.iter().map(|&t| Complex64::from_polar(1.0, t)));
    p.eval(&z).map(|v| v.norm()).unwrap_or(f64::NAN)
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Max of `|P|` over a uniform torus grid with `grid_per_dim` angles per free
/// coordinate, then refined by coordinate golden-section ascent around the
/// best grid points. Every figure returned is an attained value of `|P|`.
pub fn complex_torus_sup_estimate(p: &ComplexPoly, grid_per_dim: usize) -> Result<f64> {
    if grid_per_dim < 8 {
        return Err(Error::invalid(format!("torus grid must have at least 8 points, got {grid_per_dim}")));
    }
    let free = p.n().saturating_sub(1);
    if free == 0 {
        return Ok(modulus(p, &[]));
    }
    let total = (grid_per_dim as f64).powi(free as i32);
    if total > MAX_GRID_POINTS as f64 {
        return Err(Error::invalid(format!(
            "torus grid of {grid_per_dim}^{free} points is too large"
        )));
    }
    let total = total as usize;
    let step = std::f64::consts::TAU / grid_per_dim as f64;
    let angles_of = |idx: usize| -> Vec<f64> {
        let mut rest = idx;
        (0..free)
            .map(|_| {
                let k = rest % grid_per_dim;
                rest /= grid_per_dim;
                k as f64 * step
            })
            .collect()
    };

    let chunk = grid_per_dim.max(1024);
    let mut tops: Vec<(f64, usize)> = (0..total.div_ceil(chunk))
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut local: Vec<(f64, usize)> = (c * chunk..((c + 1) * chunk).min(total))
                .map(|idx| (modulus(p, &angles_of(idx)), idx))
                .collect();
            local.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
            local.truncate(TOP_K);
            local
        })
        .collect();
    tops.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    tops.truncate(TOP_K);

    let refined: Vec<f64> = tops
        .par_iter()
        .map(|&(v0, idx)| {
            let mut t = angles_of(idx);
            let mut best = v0;
            for round in 0..REFINE_ROUNDS {
                let h = step / 4f64.powi(round as i32);
                for j in 0..free {
                    let centre = t[j];
                    let (tj, v) = golden_max(
                        |s| {
                            let mut u = t.clone();
                            u[j] = s;
                            modulus(p, &u)
                        },
                        centre - h,
                        centre + h,
                        60,
                    );
                    if v > best {
                        best = v;
                        t[j] = tj;
                    }
                }
            }
            best
        })
        .collect();
    Ok(refined.into_iter().fold(tops.first().map_or(0.0, |t| t.0), f64::max))
}
