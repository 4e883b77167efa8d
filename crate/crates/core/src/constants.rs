//! Distinguished parameters of the extremal cubic and sextic families,
//! computed at a requested precision and cached.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::Float;

use crate::error::{Error, Result};
use crate::numeric::bisect_float;

/// `b₁ = (3/7)(3 − 2∛9/∛(7√3 − 12) + 2∛(21√3 − 36))`, the ratio `b/a` at which
/// the two branches of the `P_{a,b}` norm formula meet.
pub fn b1_closed(bits: u32) -> Float {
    let sqrt3 = Float::with_val(bits, 3).sqrt();
    let inner1 = Float::with_val(bits, &sqrt3 * 7u32) - 12u32;
    let inner2 = Float::with_val(bits, &sqrt3 * 21u32) - 36u32;
    let cbrt9 = Float::with_val(bits, 9).cbrt();
    let term1 = Float::with_val(bits, &cbrt9 * 2u32) / inner1.cbrt();
    let term2 = inner2.cbrt() * 2u32;
    let sum = Float::with_val(bits, 3) - term1 + term2;
    sum * 3u32 / 7u32
}

/// Upper end `3 − 2√3` of the interior branch of the `P_{a,b}` formula.
pub fn pab_branch_upper(bits: u32) -> Float {
    Float::with_val(bits, 3) - Float::with_val(bits, 3).sqrt() * 2u32
}

/// Interior-branch value `|1 − r²/3 + 2r³/27 + (2/27)(r² − 3r)^{3/2}|` of
/// `‖P_{1,r}‖`.
pub fn pab_interior_value(r: &Float) -> Float {
    let bits = r.prec();
    let r2 = Float::with_val(bits, r * r);
    let r3 = Float::with_val(bits, &r2 * r);
    let disc = Float::with_val(bits, &r2 - Float::with_val(bits, r * 3u32));
    let root = disc.sqrt();
    let pow32 = Float::with_val(bits, &root * &root) * &root;
    let v = Float::with_val(bits, 1) - Float::with_val(bits, &r2 / 3u32) + r3 * 2u32 / 27u32
        + pow32 * 2u32 / 27u32;
    v.abs()
}

/// `b₁` as the root of the branch-matching equation
/// `interior(r) = |2 + 2r|` on `[-1.8, -1.5]`.
pub fn b1_numeric(bits: u32) -> Result<Float> {
    let tol = Float::with_val(bits, Float::i_exp(1, -(bits as i32) + 8));
    bisect_float(
        |r| {
            let boundary = Float::with_val(bits, r * 2u32) + 2u32;
            pab_interior_value(r) - boundary.abs()
        },
        &Float::with_val(bits, -1.8),
        &Float::with_val(bits, -1.5),
        &tol,
    )
}

/// `q_λ(x) = x⁵ + λx³ + x`.
pub fn q_lambda(lambda: &Float, x: &Float) -> Float {
    let bits = lambda.prec().max(x.prec());
    let x2 = Float::with_val(bits, x * x);
    let inner = Float::with_val(bits, &x2 * &x2) + Float::with_val(bits, lambda * &x2) + 1u32;
    inner * x
}

/// Smaller critical point `x₀ = √((−3λ − √(9λ² − 20))/10)` of `q_λ`, defined
/// for `λ ≤ −2√5/3`.
pub fn q_lambda_x0(lambda: &Float) -> Option<Float> {
    let bits = lambda.prec();
    let disc = Float::with_val(bits, lambda * lambda) * 9u32 - 20u32;
    if disc < 0 {
        return None;
    }
    let x2 = (Float::with_val(bits, lambda * -3i32) - disc.sqrt()) / 10u32;
    if x2 < 0 {
        return None;
    }
    Some(x2.sqrt())
}

/// `−2√5/3`, the largest `λ` for which `q_λ` has critical points.
pub fn lambda_critical_limit(bits: u32) -> Float {
    -(Float::with_val(bits, 5).sqrt() * 2u32 / 3u32)
}

/// `|q_λ(x₀)| − |2 + λ|`, whose zeros are `λ₀ < λ₁`.
pub fn lambda_gap(lambda: &Float) -> Float {
    let bits = lambda.prec();
    let x0 = q_lambda_x0(lambda).unwrap_or_else(|| Float::new(bits));
    let boundary = Float::with_val(bits, lambda + 2u32).abs();
    q_lambda(lambda, &x0).abs() - boundary
}

fn root_in(lo: f64, hi: f64, bits: u32) -> Result<Float> {
    let tol = Float::with_val(bits, Float::i_exp(1, -(bits as i32) + 8));
    let limit = lambda_critical_limit(bits);
    let attempt = |lo: f64, hi: f64| {
        let lo = Float::with_val(bits, lo);
        let mut hi = Float::with_val(bits, hi);
        if hi > limit {
            hi = limit.clone();
        }
        bisect_float(lambda_gap, &lo, &hi, &tol)
    };
    attempt(lo, hi).or_else(|_| attempt(lo - 0.2, hi + 0.2)).map_err(|_| {
        Error::ConvergenceFailure(format!(
            "no sign change of the λ equation on [{lo}, {hi}] or its 0.2-widening"
        ))
    })
}

/// `(λ₀, λ₁)`, roots of `|q_λ(x₀)| = |2 + λ|` bracketed in `[−2.4, −2.1]`
/// and `[−1.8, −1.55]`.
pub fn lambda_roots(bits: u32) -> Result<(Float, Float)> {
    static CACHE: OnceLock<Mutex<HashMap<u32, (Float, Float)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&bits) {
        return Ok(hit.clone());
    }
    let roots = (root_in(-2.4, -2.1, bits)?, root_in(-1.8, -1.55, bits)?);
    cache.lock().unwrap().insert(bits, roots.clone());
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_roots_match_reference() {
        let (l0, l1) = lambda_roots(200).unwrap();
        assert!((l0.to_f64() + 2.265_448_789_446_007).abs() < 1e-14, "{l0}");
        assert!((l1.to_f64() + 1.677_901_903_799_248).abs() < 1e-14, "{l1}");
        assert!(lambda_gap(&l0).abs() < 1e-55);
        // [-2.26, -2.2] has no sign change; the widened retry finds λ0
        let r = root_in(-2.26, -2.2, 200).unwrap();
        assert!(Float::with_val(200, &r - &l0).abs() < 1e-50);
        assert!(root_in(-1.45, -1.40, 200).is_err());
    }

    #[test]
    fn x0_is_critical() {
        let l = Float::with_val(200, -2.0);
        let x0 = q_lambda_x0(&l).unwrap();
        assert!((x0.to_f64() - 0.2f64.sqrt()).abs() < 1e-15);
        assert!(q_lambda_x0(&Float::with_val(200, -1.0)).is_none());
    }

    #[test]
    fn closed_form_and_root_agree() {
        let closed = b1_closed(200);
        let numeric = b1_numeric(200).unwrap();
        let diff = Float::with_val(200, &closed - &numeric).abs();
        assert!(diff < 1e-50, "{closed} vs {numeric}");
        assert!((closed.to_f64() + 1.669_248_842_882_212).abs() < 1e-14);
    }

    #[test]
    fn branch_upper_value() {
        assert!((pab_branch_upper(64).to_f64() - (3.0 - 2.0 * 3f64.sqrt())).abs() < 1e-15);
    }
}
