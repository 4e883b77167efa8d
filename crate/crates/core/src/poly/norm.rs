use rug::{Float, Rational};

use super::{Coefficient, HomogeneousPoly};
use crate::error::{Error, Result};

/// An ℓ_p norm held as its natural log, plus the exponentiated value.
#[derive(Clone, Debug, PartialEq)]
pub struct LpNormValue {
    pub log_value: Float,
    pub value: Float,
}

impl LpNormValue {
    pub fn from_log(log_value: Float) -> Self {
        let value = Float::with_val(log_value.prec(), log_value.exp_ref());
        LpNormValue { log_value, value }
    }
}

fn check_exponent(p: &Rational) -> Result<()> {
    if *p < 1 {
        return Err(Error::invalid(format!("ℓ_p exponent must be >= 1, got {p}")));
    }
    Ok(())
}

/// ℓ_p norm of a coefficient sequence via log-sum-exp over `p·ln|a|`.
pub fn lp_norm_of<'a, I>(coeffs: I, p: &Rational, bits: u32) -> Result<LpNormValue>
where
    I: IntoIterator<Item = &'a Coefficient>,
{
    check_exponent(p)?;
    let pf = Float::with_val(bits, p);
    let scaled: Vec<Float> = coeffs
        .into_iter()
        .filter(|c| !c.is_zero())
        .map(|c| Float::with_val(bits, c.ln_abs(bits) * &pf))
        .collect();
    if scaled.is_empty() {
        return Ok(LpNormValue {
            log_value: Float::with_val(bits, rug::float::Special::NegInfinity),
            value: Float::new(bits),
        });
    }
    let top = scaled.iter().max_by(|a, b| a.partial_cmp(b).unwrap()).unwrap().clone();
    let mut sum = Float::new(bits);
    for s in &scaled {
        sum += Float::with_val(bits, s - &top).exp();
    }
    let log_value = (top + sum.ln()) / pf;
    Ok(LpNormValue::from_log(log_value))
}

/// `|P|_p = (Σ |a_α|^p)^{1/p}` at the polynomial's working precision.
pub fn coeff_lp_norm(p: &HomogeneousPoly, exponent: &Rational) -> Result<LpNormValue> {
    lp_norm_of(p.coefficients(), exponent, p.precision().bits())
}

/// Plain double-precision ℓ_p norm, `p >= 1` or `p = ∞`.
pub fn lp_norm_direct(v: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return v.iter().fold(0.0, |m, x| m.max(x.abs()));
    }
    v.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

/// `(|v|_q, d^{1/p - 1/q} |v|_q)`, the interval holding `|v|_p` for `1 <= p <= q`.
pub fn lp_interpolation_bounds(v: &[f64], p: f64, q: f64) -> Result<(f64, f64)> {
    if !(p >= 1.0) || !(q >= p) {
        return Err(Error::invalid(format!("need 1 <= p <= q, got p={p}, q={q}")));
    }
    let lower = lp_norm_direct(v, q);
    let d = v.len() as f64;
    let factor = if q.is_infinite() { d.powf(1.0 / p) } else { d.powf(1.0 / p - 1.0 / q) };
    Ok((lower, factor * lower))
}
