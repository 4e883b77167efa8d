use std::fmt;

use rug::{Float, Integer, Rational};

use crate::numeric::format_sig;

/// Storage class of a polynomial's coefficients, ordered by generality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoeffKind {
    Int,
    Rat,
    Dec,
}

impl CoeffKind {
    pub fn tag(self) -> &'static str {
        match self {
            CoeffKind::Int => "int",
            CoeffKind::Rat => "rat",
            CoeffKind::Dec => "dec",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "int" => Some(CoeffKind::Int),
            "rat" => Some(CoeffKind::Rat),
            "dec" => Some(CoeffKind::Dec),
            _ => None,
        }
    }
}

impl fmt::Display for CoeffKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A single coefficient `a_α`.
#[derive(Clone, Debug, PartialEq)]
pub enum Coefficient {
    Int(Integer),
    Rat(Rational),
    /// Binary float; its own precision is the working precision.
    Float(Float),
}

impl Coefficient {
    pub fn kind(&self) -> CoeffKind {
        match self {
            Coefficient::Int(_) => CoeffKind::Int,
            Coefficient::Rat(_) => CoeffKind::Rat,
            Coefficient::Float(_) => CoeffKind::Dec,
        }
    }

    pub fn zero(kind: CoeffKind, bits: u32) -> Self {
        match kind {
            CoeffKind::Int => Coefficient::Int(Integer::new()),
            CoeffKind::Rat => Coefficient::Rat(Rational::new()),
            CoeffKind::Dec => Coefficient::Float(Float::new(bits)),
        }
    }

    /// Exact decimal literal such as `"0.194627836350"` as a rational.
    pub fn decimal_rational(literal: &str) -> Option<Self> {
        let (neg, body) = match literal.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, literal),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let digits = format!("{int_part}{frac_part}");
        if !digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let mut num = Integer::from_str_radix(&digits, 10).ok()?;
        if neg {
            num = -num;
        }
        let den = Integer::from(Integer::u_pow_u(10, frac_part.len() as u32));
        Some(Coefficient::Rat(Rational::from((num, den))))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Int(v) => *v == 0,
            Coefficient::Rat(v) => *v == 0,
            Coefficient::Float(v) => v.is_zero(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coefficient::Int(v) => Float::with_val(53, v).to_f64(),
            Coefficient::Rat(v) => Float::with_val(53, v).to_f64(),
            Coefficient::Float(v) => v.to_f64(),
        }
    }

    /// Value as a float of at least `bits` precision; exact kinds are rounded
    /// once, floats are never narrowed.
    pub fn to_float(&self, bits: u32) -> Float {
        match self {
            Coefficient::Int(v) => Float::with_val(bits, v),
            Coefficient::Rat(v) => Float::with_val(bits, v),
            Coefficient::Float(v) => Float::with_val(bits.max(v.prec()), v),
        }
    }

    /// Convert to `kind`, which must not be narrower than the current kind.
    pub fn promote(&self, kind: CoeffKind, bits: u32) -> Self {
        match (self, kind) {
            (Coefficient::Int(v), CoeffKind::Int) => Coefficient::Int(v.clone()),
            (Coefficient::Int(v), CoeffKind::Rat) => Coefficient::Rat(Rational::from(v)),
            (Coefficient::Rat(v), CoeffKind::Rat) => Coefficient::Rat(v.clone()),
            (Coefficient::Float(v), CoeffKind::Dec) => Coefficient::Float(Float::with_val(bits.max(v.prec()), v)),
            (c, CoeffKind::Dec) => Coefficient::Float(c.to_float(bits)),
            (c, k) => panic!("cannot narrow a {} coefficient to {k}", c.kind()),
        }
    }

    /// `self += other`, both of the same kind.
    pub fn add_assign(&mut self, other: &Coefficient) {
        match (self, other) {
            (Coefficient::Int(a), Coefficient::Int(b)) => *a += b,
            (Coefficient::Rat(a), Coefficient::Rat(b)) => *a += b,
            (Coefficient::Float(a), Coefficient::Float(b)) => *a += b,
            (a, b) => panic!("kind mismatch: {} += {}", a.kind(), b.kind()),
        }
    }

    pub fn neg(&self) -> Coefficient {
        match self {
            Coefficient::Int(v) => Coefficient::Int(Integer::from(-v)),
            Coefficient::Rat(v) => Coefficient::Rat(Rational::from(-v)),
            Coefficient::Float(v) => Coefficient::Float(Float::with_val(v.prec(), -v)),
        }
    }

    /// `ln |a|` at `bits` precision (−∞ for zero).
    pub fn ln_abs(&self, bits: u32) -> Float {
        match self {
            // big integers/rationals: ln(num) - ln(den) avoids overflowing the
            // float exponent range
            Coefficient::Int(v) => Float::with_val(bits, v).abs().ln(),
            Coefficient::Rat(v) => {
                let num = Float::with_val(bits, v.numer()).abs().ln();
                let den = Float::with_val(bits, v.denom()).ln();
                num - den
            }
            Coefficient::Float(v) => Float::with_val(bits.max(v.prec()), v).abs().ln(),
        }
    }

    /// Literal text: integers and `p/q` exactly, floats with `digits`
    /// significant digits.
    pub fn literal(&self, digits: usize) -> String {
        match self {
            Coefficient::Int(v) => v.to_string(),
            Coefficient::Rat(v) => {
                if *v.denom() == 1 {
                    v.numer().to_string()
                } else {
                    format!("{}/{}", v.numer(), v.denom())
                }
            }
            Coefficient::Float(v) => format_sig(v, digits),
        }
    }
}

impl From<i32> for Coefficient {
    fn from(v: i32) -> Self {
        Coefficient::Int(Integer::from(v))
    }
}

impl From<i64> for Coefficient {
    fn from(v: i64) -> Self {
        Coefficient::Int(Integer::from(v))
    }
}

impl From<Integer> for Coefficient {
    fn from(v: Integer) -> Self {
        Coefficient::Int(v)
    }
}

impl From<Rational> for Coefficient {
    fn from(v: Rational) -> Self {
        Coefficient::Rat(v)
    }
}

impl From<Float> for Coefficient {
    fn from(v: Float) -> Self {
        Coefficient::Float(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_literals_are_exact() {
        let c = Coefficient::decimal_rational("0.194627836350").unwrap();
        assert_eq!(c, Coefficient::Rat(Rational::from((19462783635i64, 100000000000i64))));
        let c = Coefficient::decimal_rational("-2.5").unwrap();
        assert_eq!(c, Coefficient::Rat(Rational::from((-5, 2))));
        assert!(Coefficient::decimal_rational("1e5").is_none());
    }

    #[test]
    fn promotion_keeps_value() {
        let c = Coefficient::from(-3);
        assert_eq!(c.promote(CoeffKind::Rat, 64), Coefficient::Rat(Rational::from(-3)));
        assert_eq!(c.promote(CoeffKind::Dec, 64).to_f64(), -3.0);
    }

    #[test]
    fn ln_abs_of_huge_integer() {
        let big = Coefficient::Int(Integer::from(Integer::u_pow_u(10, 5000)));
        let l = big.ln_abs(200).to_f64();
        assert!((l - 5000.0 * std::f64::consts::LN_10).abs() < 1e-9);
        let r = Coefficient::Rat(Rational::from((1, 8)));
        assert!((r.ln_abs(200).to_f64() + 8f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn float_precision_never_narrows() {
        let c = Coefficient::Float(Float::with_val(300, 1.5));
        assert_eq!(c.to_float(100).prec(), 300);
        match c.promote(CoeffKind::Dec, 100) {
            Coefficient::Float(f) => assert_eq!(f.prec(), 300),
            _ => unreachable!(),
        }
    }
}
