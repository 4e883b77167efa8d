//! Norms of the extremal families in closed form.

use rug::Float;

use super::{Method, SupNormResult};
use crate::constants::{b1_closed, pab_branch_upper, pab_interior_value, q_lambda};
use crate::error::{Error, Result};
use crate::numeric::Precision;
use crate::poly::{Coefficient, HomogeneousPoly};

fn bivariate(dense: Vec<Float>, bits: u32) -> Result<HomogeneousPoly> {
    HomogeneousPoly::from_dense_bivariate(
        dense.into_iter().map(Coefficient::Float).collect(),
        Precision::for_bits(bits),
    )
}

/// `‖a x³ + b x²y + b xy² + a y³‖` from the two-branch formula: with
/// `r = b/a`, the interior critical value when `b₁ < r < 3 − 2√3`, and
/// `|2a + 2b|` otherwise.
pub fn sup_norm_pab_closed(a: &Float, b: &Float) -> Result<SupNormResult> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::invalid("P_{a,b} needs (a, b) != (0, 0)"));
    }
    let bits = a.prec().max(b.prec()).max(64);
    let a = Float::with_val(bits, a);
    let b = Float::with_val(bits, b);
    let p = bivariate(vec![a.clone(), b.clone(), b.clone(), a.clone()], bits)?;
    let boundary = Float::with_val(bits, &a + &b).abs() * 2u32;

    if !a.is_zero() {
        let r = Float::with_val(bits, &b / &a);
        if r > b1_closed(bits) && r < pab_branch_upper(bits) {
            let value = pab_interior_value(&r) * a.clone().abs();
            // interior maximizer t = (−r − √(r² − 3r))/3 on the face x = 1
            let disc = Float::with_val(bits, &r * &r) - Float::with_val(bits, &r * 3u32);
            let t = (Float::with_val(bits, -&r) - disc.sqrt()) / 3u32;
            return SupNormResult::for_poly(&p, value, vec![1.0, t.to_f64()], Method::ClosedForm);
        }
    }
    SupNormResult::for_poly(&p, boundary, vec![1.0, 1.0], Method::ClosedForm)
}

/// `‖a x⁵y + b x³y³ + a xy⁵‖ = |a| · max |q_λ|` on `[0, 1]` with `λ = b/a`,
/// taken over `x = 1` and the real critical points
/// `x² = (−3λ ± √(9λ² − 20))/10` inside the interval.
pub fn sup_norm_qab(a: &Float, b: &Float) -> Result<SupNormResult> {
    let bits = a.prec().max(b.prec()).max(64);
    let a = Float::with_val(bits, a);
    let b = Float::with_val(bits, b);
    let zero = Float::new(bits);
    let p = bivariate(
        vec![zero.clone(), a.clone(), zero.clone(), b.clone(), zero.clone(), a.clone(), zero],
        bits,
    )?;
    if a.is_zero() {
        if b.is_zero() {
            return Err(Error::invalid("Q_{a,b} needs (a, b) != (0, 0)"));
        }
        return SupNormResult::for_poly(&p, b.abs(), vec![1.0, 1.0], Method::ClosedForm);
    }
    let lambda = Float::with_val(bits, &b / &a);
    let one = Float::with_val(bits, 1);
    let mut best = (q_lambda(&lambda, &one).abs(), one.clone());
    let disc = Float::with_val(bits, &lambda * &lambda) * 9u32 - 20u32;
    if disc >= 0 {
        let s = disc.sqrt();
        let base = Float::with_val(bits, &lambda * -3i32);
        for x2 in [
            Float::with_val(bits, &base - &s) / 10u32,
            Float::with_val(bits, &base + &s) / 10u32,
        ] {
            if (0..=1).contains(&x2) {
                let x = x2.sqrt();
                let v = q_lambda(&lambda, &x).abs();
                if v > best.0 {
                    best = (v, x);
                }
            }
        }
    }
    let value = best.0 * a.abs();
    SupNormResult::for_poly(&p, value, vec![best.1.to_f64(), 1.0], Method::ClosedForm)
}

/// `P_{2^k}` on `x` (length `2^k`): `x` itself for `k = 0`, else
/// `P_{2^{k-1}}(first half)² − P_{2^{k-1}}(second half)²`.
pub fn p2k_eval(k: u32, x: &[Float]) -> Result<Float> {
    if x.len() != 1usize << k {
        return Err(Error::DimensionMismatch {
            expected: 1usize << k,
            found: x.len(),
        });
    }
    fn rec(x: &[Float]) -> Float {
        if x.len() == 1 {
            return x[0].clone();
        }
        let (l, r) = x.split_at(x.len() / 2);
        let a = rec(l);
        let b = rec(r);
        Float::with_val(a.prec(), &a * &a) - Float::with_val(b.prec(), &b * &b)
    }
    Ok(rec(x))
}

/// `‖P_{2^k}‖ = 1`, attained at `e₁`. With `A`, `B` the two half-blocks,
/// `|A² − B²| ≤ max(A², B²) ≤ 1` on the cube, and `B(0) = 0`.
pub fn sup_norm_p2k_analytic(k: u32) -> Result<SupNormResult> {
    if k == 0 || k > 20 {
        return Err(Error::invalid(format!("k must lie in 1..=20, got {k}")));
    }
    let n = 1usize << k;
    let bits = Precision::default().bits();
    let mut e1 = vec![0.0; n];
    e1[0] = 1.0;
    SupNormResult::certify(Float::with_val(bits, 1), e1, Method::Analytic, |x| {
        let xs: Vec<Float> = x.iter().map(|&v| Float::with_val(bits, v)).collect();
        p2k_eval(k, &xs)
    })
}
