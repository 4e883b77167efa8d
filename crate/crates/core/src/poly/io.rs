//! Plain-text polynomial files.
//!
//! ```text
//! BHPOLY 1 n=2 m=4 terms=2 coeff=int
//! 1 3 -1
//! 3 1 1
//! ```
//!
//! Decimal literals are written with two guard digits beyond the working
//! precision, and the precision is recovered from the longest literal.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rug::{Integer, Rational};

use super::{CoeffKind, Coefficient, HomogeneousPoly, MultiIndex};
use crate::error::{Error, Result};
use crate::numeric::{parse_float, significant_digits, Precision};

const MAGIC: &str = "BHPOLY";
const VERSION: &str = "1";

impl HomogeneousPoly {
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{MAGIC} {VERSION} n={} m={} terms={} coeff={}",
            self.n,
            self.m,
            self.terms.len(),
            self.kind.tag()
        );
        let digits = self.precision.literal_digits();
        for (alpha, c) in &self.terms {
            for e in alpha.exponents() {
                let _ = write!(out, "{e} ");
            }
            let _ = writeln!(out, "{}", c.literal(digits));
        }
        out
    }

    pub fn deserialize(text: &str) -> Result<HomogeneousPoly> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
        let (n, m, count, kind) = parse_header(header)?;

        let mut raw: Vec<(usize, MultiIndex, String)> = Vec::with_capacity(count);
        let mut last_line = 1;
        for (line_no, line) in lines {
            last_line = line_no;
            if line.is_empty() {
                continue;
            }
            if raw.len() == count {
                return Err(Error::parse(line_no, format!("more than the declared {count} terms")));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != n + 1 {
                return Err(Error::parse(
                    line_no,
                    format!("expected {} fields, found {}", n + 1, fields.len()),
                ));
            }
            let mut exps = Vec::with_capacity(n);
            for f in &fields[..n] {
                exps.push(
                    f.parse::<u32>()
                        .map_err(|_| Error::parse(line_no, format!("bad exponent {f:?}")))?,
                );
            }
            let alpha = MultiIndex::from(exps);
            if alpha.total() != m {
                return Err(Error::parse(
                    line_no,
                    format!("term degree {} does not match m={m}", alpha.total()),
                ));
            }
            raw.push((line_no, alpha, fields[n].to_string()));
        }
        if raw.len() != count {
            return Err(Error::parse(
                last_line + 1,
                format!("header declares {count} terms, found {}", raw.len()),
            ));
        }

        let precision = match kind {
            CoeffKind::Dec => Precision::from_literal_digits(
                raw.iter().map(|(_, _, s)| significant_digits(s)).max().unwrap_or(0),
            ),
            _ => Precision::default(),
        };
        let mut terms: BTreeMap<MultiIndex, Coefficient> = BTreeMap::new();
        for (line_no, alpha, lit) in raw {
            let c = parse_literal(&lit, kind, precision)
                .ok_or_else(|| Error::parse(line_no, format!("bad {kind} literal {lit:?}")))?;
            match terms.get_mut(&alpha) {
                Some(existing) => existing.add_assign(&c),
                None => {
                    terms.insert(alpha, c);
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(HomogeneousPoly::from_parts(n, m, kind, precision, terms))
    }
}

fn parse_header(header: &str) -> Result<(usize, u32, usize, CoeffKind)> {
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 6 || fields[0] != MAGIC {
        return Err(Error::parse(1, "expected `BHPOLY 1 n=<n> m=<m> terms=<k> coeff=<kind>`"));
    }
    if fields[1] != VERSION {
        return Err(Error::parse(1, format!("unsupported version {}", fields[1])));
    }
    let value = |field: &str, key: &str| -> Result<String> {
        field
            .strip_prefix(key)
            .and_then(|s| s.strip_prefix('='))
            .map(str::to_string)
            .ok_or_else(|| Error::parse(1, format!("expected {key}=…, found {field:?}")))
    };
    let num = |field: &str, key: &str| -> Result<usize> {
        let v = value(field, key)?;
        v.parse()
            .map_err(|_| Error::parse(1, format!("{key} is not a count: {v:?}")))
    };
    let n = num(fields[2], "n")?;
    let m = num(fields[3], "m")? as u32;
    let count = num(fields[4], "terms")?;
    let tag = value(fields[5], "coeff")?;
    let kind = CoeffKind::from_tag(&tag).ok_or_else(|| Error::parse(1, format!("unknown coeff tag {tag:?}")))?;
    if n == 0 {
        return Err(Error::parse(1, "n must be positive"));
    }
    Ok((n, m, count, kind))
}

fn parse_literal(lit: &str, kind: CoeffKind, precision: Precision) -> Option<Coefficient> {
    match kind {
        CoeffKind::Int => Integer::from_str_radix(lit, 10).ok().map(Coefficient::Int),
        CoeffKind::Rat => {
            let r = match lit.split_once('/') {
                Some((p, q)) => {
                    let p = Integer::from_str_radix(p, 10).ok()?;
                    let q = Integer::from_str_radix(q, 10).ok()?;
                    if q == 0 {
                        return None;
                    }
                    Rational::from((p, q))
                }
                None => Rational::from(Integer::from_str_radix(lit, 10).ok()?),
            };
            Some(Coefficient::Rat(r))
        }
        CoeffKind::Dec => parse_float(lit, precision).map(Coefficient::Float),
    }
}
