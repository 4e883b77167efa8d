//! Working precision, high-precision float helpers and the scalar search
//! routines (golden section, bracketed bisection, safeguarded Newton) shared by
//! the sup-norm and bound modules.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};

/// High-precision binary float; carries its own precision in bits.
pub type BigFloat = Float;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision, expressed in significant decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const MIN_DIGITS: u32 = 30;
    pub const DEFAULT_DIGITS: u32 = 60;

    pub fn from_digits(digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::invalid(format!(
                "precision must be at least {} digits, got {digits}",
                Self::MIN_DIGITS
            )));
        }
        Ok(Precision { digits })
    }

    /// Largest digit count representable in `bits`, clamped to the minimum.
    pub fn for_bits(bits: u32) -> Self {
        let digits = ((f64::from(bits) / LOG2_10).floor() as u32).max(Self::MIN_DIGITS);
        Precision { digits }
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    pub fn bits(self) -> u32 {
        (f64::from(self.digits) * LOG2_10).ceil() as u32
    }

    /// Number of significant digits written for a value at this precision.
    /// Two guard digits make the decimal rendering read back to the identical
    /// binary value.
    pub fn literal_digits(self) -> usize {
        self.digits as usize + 2
    }

    /// Inverse of [`Precision::literal_digits`], clamped to the minimum.
    pub fn from_literal_digits(count: usize) -> Self {
        let digits = (count.saturating_sub(2) as u32).max(Self::MIN_DIGITS);
        Precision { digits }
    }

    pub fn max(self, other: Self) -> Self {
        if other.digits > self.digits {
            other
        } else {
            self
        }
    }

    pub fn float(self, value: f64) -> Float {
        Float::with_val(self.bits(), value)
    }

    pub fn rational(self, value: &Rational) -> Float {
        Float::with_val(self.bits(), value)
    }

    pub fn pi(self) -> Float {
        Float::with_val(self.bits(), Constant::Pi)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            digits: Self::DEFAULT_DIGITS,
        }
    }
}

/// `num/den` as an exact rational.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::from((num, den))
}

/// The Bohnenblust-Hille exponent 2m/(m+1).
pub fn bh_exponent(m: u32) -> Rational {
    Rational::from((2 * u64::from(m), u64::from(m) + 1))
}

/// `x^(num/den)` for `x >= 0`.
pub fn pow_ratio(x: &Float, exponent: &Rational) -> Float {
    let e = Float::with_val(x.prec(), exponent);
    x.clone().pow(&e)
}

/// Principal real cube root (odd, so defined for negative arguments).
pub fn real_cbrt(x: Float) -> Float {
    x.cbrt()
}

/// Render with `digits` significant decimal digits, `d.ddd…e±x` style.
pub fn format_sig(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits))
}

/// Count significant digits of a decimal literal (mantissa digits without
/// sign, point, exponent or leading zeros).
pub fn significant_digits(literal: &str) -> usize {
    let mantissa = literal
        .split(['e', 'E', '@'])
        .next()
        .unwrap_or("");
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let trimmed = digits.trim_start_matches('0');
    trimmed.len().max(1)
}

pub fn parse_float(literal: &str, prec: Precision) -> Option<Float> {
    Float::parse(literal)
        .ok()
        .map(|p| Float::with_val(prec.bits(), p))
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`,
/// carried out at the precision of `lo`. Stops once the bracket is narrower
/// than `tol`. Returns `(argmax, max)`.
pub fn golden_section_max<F>(f: F, lo: &Float, hi: &Float, tol: &Float) -> Result<(Float, Float)>
where
    F: Fn(&Float) -> Float,
{
    let prec = lo.prec().max(hi.prec());
    let mut a = Float::with_val(prec, lo);
    let mut b = Float::with_val(prec, hi);
    if a >= b {
        return Err(Error::invalid("golden section needs lo < hi"));
    }
    // 1/phi
    let five = Float::with_val(prec, 5);
    let inv_phi = (five.sqrt() - 1u32) / 2u32;

    let span = |a: &Float, b: &Float| Float::with_val(prec, b - a);
    let mut x1 = Float::with_val(prec, &b - Float::with_val(prec, span(&a, &b) * &inv_phi));
    let mut x2 = Float::with_val(prec, &a + Float::with_val(prec, span(&a, &b) * &inv_phi));
    let mut f1 = f(&x1);
    let mut f2 = f(&x2);

    for _ in 0..10_000 {
        if span(&a, &b) <= *tol {
            let (x, fx) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
            return Ok((x, fx));
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = Float::with_val(prec, &b - Float::with_val(prec, span(&a, &b) * &inv_phi));
            f1 = f(&x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = Float::with_val(prec, &a + Float::with_val(prec, span(&a, &b) * &inv_phi));
            f2 = f(&x2);
        }
    }
    Err(Error::ConvergenceFailure(
        "golden section did not reach the tolerance".into(),
    ))
}

/// Bisection for a root of `g` on `[lo, hi]`, which must bracket a sign change.
pub fn bisect_float<G>(g: G, lo: &Float, hi: &Float, tol: &Float) -> Result<Float>
where
    G: Fn(&Float) -> Float,
{
    let prec = lo.prec().max(hi.prec());
    let mut a = Float::with_val(prec, lo);
    let mut b = Float::with_val(prec, hi);
    let ga = g(&a);
    let gb = g(&b);
    if ga.is_zero() {
        return Ok(a);
    }
    if gb.is_zero() {
        return Ok(b);
    }
    if ga.is_sign_negative() == gb.is_sign_negative() {
        return Err(Error::ConvergenceFailure(format!(
            "no sign change on [{}, {}]",
            a.to_f64(),
            b.to_f64()
        )));
    }
    let a_negative = ga.is_sign_negative();
    for _ in 0..(4 * prec as usize + 64) {
        let mid = Float::with_val(prec, &a + &b) / 2u32;
        if Float::with_val(prec, &b - &a) <= *tol || mid == a || mid == b {
            return Ok(mid);
        }
        let gm = g(&mid);
        if gm.is_zero() {
            return Ok(mid);
        }
        if gm.is_sign_negative() == a_negative {
            a = mid;
        } else {
            b = mid;
        }
    }
    Err(Error::ConvergenceFailure("bisection iteration cap".into()))
}

/// Safeguarded Newton iteration for a root of `f` inside `[a, b]`, where
/// `f(a)` and `f(b)` have opposite signs. Falls back to bisection whenever the
/// Newton step leaves the bracket or fails to halve it; `bisect_only` forces
/// pure bisection.
pub fn polish_root<F, D>(f: F, df: D, a: f64, b: f64, tol: f64, bisect_only: bool) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut flo = f(lo);
    let fhi = f(hi);
    if !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::ConvergenceFailure("non-finite bracket value".into()));
    }
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::ConvergenceFailure(format!(
            "bracket [{lo}, {hi}] has no sign change"
        )));
    }
    let mut x = 0.5 * (lo + hi);
    let mut last_width = hi - lo;
    for _ in 0..500 {
        let fx = f(x);
        if !fx.is_finite() {
            return Err(Error::ConvergenceFailure(format!("non-finite value at {x}")));
        }
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        let width = hi - lo;
        if width <= tol * x.abs().max(1.0) {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // adjacent floats
            return Ok(mid);
        }
        let mut next = mid;
        if !bisect_only {
            let d = df(x);
            if d != 0.0 && d.is_finite() {
                let newton = x - fx / d;
                if newton > lo && newton < hi && (width < 0.5 * last_width || (newton - x).abs() < 0.25 * width) {
                    next = newton;
                }
            }
        }
        if (next - x).abs() <= f64::EPSILON * x.abs().max(1.0) {
            return Ok(next);
        }
        last_width = width;
        x = next;
    }
    Err(Error::ConvergenceFailure(format!(
        "root in [{a}, {b}] did not polish"
    )))
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
