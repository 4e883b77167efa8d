//! Named polynomial and multilinear families, and random Bernoulli
//! polynomials.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Integer, Rational};

use crate::constants::{b1_closed, lambda_roots};
use crate::error::{Error, Result};
use crate::multilinear::MultilinearForm;
use crate::numeric::{parse_float, Precision};
use crate::poly::{Coefficient, HomogeneousPoly, MultiIndex};
use crate::supnorm::{
    sup_norm_auto, sup_norm_bivariate, sup_norm_p2k_analytic, sup_norm_pab_closed, sup_norm_qab, OptimizerConfig,
    SupNormResult,
};

/// `λ` used for `P₆ = Q_{1,λ}` unless `lambda=root` asks for the computed root.
pub const P6_LAMBDA: &str = "-2.2654";

pub const P5_COEFFS: [&str; 3] = ["0.194627836350", "0.660089997037", "0.978333058512"];

pub const BERNOULLI_MAX_TERMS: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyId {
    Pab,
    Qab,
    P3,
    P4,
    P5,
    P6,
    P2k,
    Bernoulli,
    T2,
    Tm,
    /// `t x² + 2√(t(1−t)) xy − t y²`, an extreme point of the unit ball of
    /// real 2-homogeneous polynomials on the square for `t ∈ [1/2, 1]`.
    ChoiKim,
}

impl FamilyId {
    pub const ALL: [FamilyId; 11] = [
        FamilyId::Pab,
        FamilyId::Qab,
        FamilyId::P3,
        FamilyId::P4,
        FamilyId::P5,
        FamilyId::P6,
        FamilyId::P2k,
        FamilyId::Bernoulli,
        FamilyId::T2,
        FamilyId::Tm,
        FamilyId::ChoiKim,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::Pab => "pab",
            FamilyId::Qab => "qab",
            FamilyId::P3 => "p3",
            FamilyId::P4 => "p4",
            FamilyId::P5 => "p5",
            FamilyId::P6 => "p6",
            FamilyId::P2k => "p2k",
            FamilyId::Bernoulli => "bernoulli",
            FamilyId::T2 => "t2",
            FamilyId::Tm => "tm",
            FamilyId::ChoiKim => "choikim",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.name() == name.to_ascii_lowercase())
            .ok_or_else(|| Error::invalid(format!("unknown family {name:?}")))
    }

    pub fn required(self) -> &'static [&'static str] {
        match self {
            FamilyId::Pab | FamilyId::Qab => &["a", "b"],
            FamilyId::P2k => &["k"],
            FamilyId::Bernoulli => &["m", "n", "seed"],
            FamilyId::Tm => &["m"],
            FamilyId::ChoiKim => &["t"],
            _ => &[],
        }
    }

    pub fn optional(self) -> &'static [&'static str] {
        match self {
            FamilyId::P6 => &["lambda"],
            _ => &[],
        }
    }

    pub fn is_multilinear(self) -> bool {
        matches!(self, FamilyId::T2 | FamilyId::Tm)
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub id: FamilyId,
    pub params: BTreeMap<String, String>,
}

impl FamilySpec {
    pub fn new(id: FamilyId) -> Self {
        FamilySpec {
            id,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// From a family name and `key=value` strings.
    pub fn parse<S: AsRef<str>>(name: &str, params: &[S]) -> Result<Self> {
        let mut spec = FamilySpec::new(FamilyId::from_name(name)?);
        for kv in params {
            let kv = kv.as_ref();
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("parameter {kv:?} is not key=value")))?;
            spec.params.insert(k.trim().to_string(), v.trim().to_string());
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for key in self.id.required() {
            if !self.params.contains_key(*key) {
                return Err(Error::invalid(format!("family {} needs parameter {key}", self.id)));
            }
        }
        for key in self.params.keys() {
            if !self.id.required().contains(&key.as_str()) && !self.id.optional().contains(&key.as_str()) {
                return Err(Error::invalid(format!("family {} has no parameter {key}", self.id)));
            }
        }
        Ok(())
    }

    fn raw(&self, key: &str) -> Result<&str> {
        self.params
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::invalid(format!("missing parameter {key}")))
    }

    pub fn get_u32(&self, key: &str) -> Result<u32> {
        let v = self.raw(key)?;
        v.parse()
            .map_err(|_| Error::invalid(format!("parameter {key}={v:?} is not a non-negative integer")))
    }

    pub fn get_u64(&self, key: &str) -> Result<u64> {
        let v = self.raw(key)?;
        v.parse()
            .map_err(|_| Error::invalid(format!("parameter {key}={v:?} is not a non-negative integer")))
    }

    /// A real parameter: exact rational for plain decimals, float otherwise.
    pub fn get_real(&self, key: &str, prec: Precision) -> Result<Coefficient> {
        let v = self.raw(key)?;
        real_literal(v, prec).ok_or_else(|| Error::invalid(format!("parameter {key}={v:?} is not a real number")))
    }

    /// Parameters rendered as `k=v;k=v`.
    pub fn param_string(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.params.is_empty() {
            write!(f, "{}", self.id)
        } else {
            write!(f, "{}({})", self.id, self.param_string())
        }
    }
}

fn real_literal(v: &str, prec: Precision) -> Option<Coefficient> {
    if let Some(c) = Coefficient::decimal_rational(v) {
        return Some(c);
    }
    if let Some((p, q)) = v.split_once('/') {
        let p = Integer::from_str_radix(p.trim(), 10).ok()?;
        let q = Integer::from_str_radix(q.trim(), 10).ok()?;
        if q == 0 {
            return None;
        }
        return Some(Coefficient::Rat(Rational::from((p, q))));
    }
    parse_float(v, prec).filter(|f| f.is_finite()).map(Coefficient::Float)
}

/// Extremal parameter found by a search together with the bound it yields.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyExtremum {
    pub family: FamilySpec,
    pub parameter: Float,
    pub bound: Float,
}

fn bivariate(dense: Vec<Coefficient>, prec: Precision) -> Result<HomogeneousPoly> {
    HomogeneousPoly::from_dense_bivariate(dense, prec)
}

/// `λ` of `P₆` at the given precision.
pub fn p6_lambda(spec: &FamilySpec, prec: Precision) -> Result<Coefficient> {
    match spec.params.get("lambda").map(String::as_str) {
        None => Ok(Coefficient::decimal_rational(P6_LAMBDA).expect("valid literal")),
        Some("root") => Ok(Coefficient::Float(lambda_roots(prec.bits())?.0)),
        Some(v) => real_literal(v, prec).ok_or_else(|| Error::invalid(format!("lambda={v:?} is not a real number"))),
    }
}

fn p2k_poly(k: u32) -> Result<HomogeneousPoly> {
    let mut p = HomogeneousPoly::monomial([1u32], Coefficient::from(1))?;
    for level in 1..=k {
        let half = 1usize << (level - 1);
        let sq = p.pow(2)?;
        p = sq.embed(2 * half, 0)?.sub(&sq.embed(2 * half, half)?)?;
    }
    Ok(p)
}

/// The polynomial of a family.
pub fn make_family(spec: &FamilySpec, prec: Precision) -> Result<HomogeneousPoly> {
    spec.validate()?;
    let zero = || Coefficient::from(0);
    match spec.id {
        FamilyId::Pab => {
            let (a, b) = (spec.get_real("a", prec)?, spec.get_real("b", prec)?);
            bivariate(vec![a.clone(), b.clone(), b, a], prec)
        }
        FamilyId::Qab => {
            let (a, b) = (spec.get_real("a", prec)?, spec.get_real("b", prec)?);
            bivariate(vec![zero(), a.clone(), zero(), b, zero(), a, zero()], prec)
        }
        FamilyId::P3 => {
            let b1 = Coefficient::Float(b1_closed(prec.bits()));
            let one = Coefficient::Float(Float::with_val(prec.bits(), 1));
            bivariate(vec![one.clone(), b1.clone(), b1, one], prec)
        }
        FamilyId::P4 => bivariate(
            vec![zero(), Coefficient::from(1), zero(), Coefficient::from(-1), zero()],
            prec,
        ),
        FamilyId::P5 => {
            let [a, b, c] = P5_COEFFS.map(|s| Coefficient::decimal_rational(s).expect("valid literal"));
            bivariate(vec![a.clone(), b.neg(), c.neg(), c, b, a.neg()], prec)
        }
        FamilyId::P6 => {
            let one = Coefficient::from(1);
            bivariate(vec![zero(), one.clone(), zero(), p6_lambda(spec, prec)?, zero(), one, zero()], prec)
        }
        FamilyId::P2k => {
            let k = spec.get_u32("k")?;
            if !(1..=5).contains(&k) {
                return Err(Error::invalid(format!("p2k expansion supports 1 <= k <= 5, got {k}")));
            }
            Ok(p2k_poly(k)?.at_precision(prec))
        }
        FamilyId::Bernoulli => {
            let p = bernoulli_random(spec.get_u32("n")? as usize, spec.get_u32("m")?, spec.get_u64("seed")?)?;
            Ok(p.at_precision(prec))
        }
        FamilyId::ChoiKim => {
            let bits = prec.bits();
            let t = spec.get_real("t", prec)?.to_float(bits);
            if t < 0.5 || t > 1 {
                return Err(Error::invalid(format!("choikim needs t in [1/2, 1], got {t}")));
            }
            let one_minus = Float::with_val(bits, 1 - &t);
            let cross = Float::with_val(bits, &t * &one_minus).sqrt() * 2u32;
            let neg_t = Float::with_val(bits, -&t);
            bivariate(
                vec![Coefficient::Float(t), Coefficient::Float(cross), Coefficient::Float(neg_t)],
                prec,
            )
        }
        FamilyId::T2 | FamilyId::Tm => Err(Error::invalid(format!(
            "{} is a multilinear family; use make_form",
            spec.id
        ))),
    }
}

/// The multilinear form of a family.
pub fn make_form(spec: &FamilySpec) -> Result<MultilinearForm> {
    spec.validate()?;
    match spec.id {
        FamilyId::T2 => tm_form(2),
        FamilyId::Tm => tm_form(spec.get_u32("m")?),
        other => Err(Error::invalid(format!("{other} is a polynomial family; use make_family"))),
    }
}

/// Certified `‖P‖` of a family member, by the most specific method known.
pub fn family_sup_norm(spec: &FamilySpec, p: &HomogeneousPoly, cfg: &OptimizerConfig) -> Result<SupNormResult> {
    let bits = p.precision().bits();
    let dense = || -> Result<Vec<Float>> { Ok(p.dense_bivariate()?.iter().map(|c| c.to_float(bits)).collect()) };
    match spec.id {
        FamilyId::Pab | FamilyId::P3 => {
            let d = dense()?;
            sup_norm_pab_closed(&d[0], &d[1])
        }
        FamilyId::Qab | FamilyId::P6 => {
            let d = dense()?;
            sup_norm_qab(&d[1], &d[3])
        }
        FamilyId::P4 | FamilyId::P5 | FamilyId::ChoiKim => sup_norm_bivariate(p, cfg),
        FamilyId::P2k => sup_norm_p2k_analytic(spec.get_u32("k")?),
        FamilyId::Bernoulli => sup_norm_auto(p, cfg),
        FamilyId::T2 | FamilyId::Tm => Err(Error::invalid("multilinear family has no polynomial norm")),
    }
}

/// Every degree-`m` monomial in `n` variables with an independent ±1
/// coefficient, drawn in lexicographic index order from a seeded ChaCha
/// stream.
pub fn bernoulli_random(n: usize, m: u32, seed: u64) -> Result<HomogeneousPoly> {
    if n == 0 || m == 0 {
        return Err(Error::invalid("bernoulli polynomial needs n, m >= 1"));
    }
    let count = Integer::from(Integer::binomial_u((m as usize + n - 1) as u32, (n - 1) as u32));
    if count > BERNOULLI_MAX_TERMS {
        return Err(Error::invalid(format!(
            "{count} terms exceeds the cap of {BERNOULLI_MAX_TERMS}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<(MultiIndex, Coefficient)> = MultiIndex::all(n, m)
        .into_iter()
        .map(|alpha| (alpha, Coefficient::from(if rng.gen::<bool>() { 1 } else { -1 })))
        .collect();
    HomogeneousPoly::new(n, m, terms)
}

/// `T_m` on `2^{m−1}` coordinates per slot, by doubling from `T₁(x) = x₁`:
/// `T_m(x¹,…,x^m) = (x^m₁ + x^m₂)·T_{m−1}(low halves) + (x^m₁ − x^m₂)·T_{m−1}(high halves)`.
/// All `4^{m−1}` coefficients are ±1 and `‖T_m‖ = 2^{m−1}`.
pub fn tm_form(m: u32) -> Result<MultilinearForm> {
    if !(2..=6).contains(&m) {
        return Err(Error::invalid(format!("tm_form supports 2 <= m <= 6, got {m}")));
    }
    // (index tuple, sign) for T_1 on one coordinate
    let mut terms: Vec<(Vec<usize>, i32)> = vec![(vec![0], 1)];
    let mut dim = 1usize;
    for _ in 2..=m {
        let mut next = Vec::with_capacity(terms.len() * 4);
        for (idx, s) in &terms {
            // low halves, new slot (x₁ + x₂)
            for (last, sign) in [(0usize, 1), (1, 1)] {
                let mut i = idx.clone();
                i.push(last);
                next.push((i, s * sign));
            }
            // high halves, new slot (x₁ − x₂)
            for (last, sign) in [(0usize, 1), (1, -1)] {
                let mut i: Vec<usize> = idx.iter().map(|&j| j + dim).collect();
                i.push(last);
                next.push((i, s * sign));
            }
        }
        terms = next;
        dim *= 2;
    }
    MultilinearForm::new(
        m as usize,
        dim,
        terms.into_iter().map(|(i, s)| (i, Coefficient::from(s))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::ml_sup_norm_bruteforce;

    fn prec() -> Precision {
        Precision::default()
    }

    #[test]
    fn spec_validation() {
        assert!(FamilySpec::parse("pab", &["a=1"]).is_err());
        assert!(FamilySpec::parse("pab", &["a=1", "b=2", "c=3"]).is_err());
        assert!(FamilySpec::parse("nope", &[] as &[&str]).is_err());
        let s = FamilySpec::parse("PAB", &["b=2", "a=1"]).unwrap();
        assert_eq!(s.param_string(), "a=1;b=2");
        assert!(FamilySpec::parse("p4", &["x"]).is_err());
    }

    #[test]
    fn p5_signs_and_literals() {
        let p = make_family(&FamilySpec::new(FamilyId::P5), prec()).unwrap();
        assert_eq!(p.len(), 6);
        let signs: Vec<bool> = p.dense_bivariate().unwrap().iter().map(|c| c.to_f64() > 0.0).collect();
        assert_eq!(signs, vec![true, false, false, true, true, false]);
        assert_eq!(
            p.coefficient(&MultiIndex::from([5, 0])),
            Coefficient::decimal_rational("0.194627836350").as_ref()
        );
    }

    #[test]
    fn p2k_shapes() {
        let p = make_family(&FamilySpec::new(FamilyId::P2k).with("k", 1), prec()).unwrap();
        let expect = HomogeneousPoly::new(
            2,
            2,
            [
                (MultiIndex::from([2, 0]), Coefficient::from(1)),
                (MultiIndex::from([0, 2]), Coefficient::from(-1)),
            ],
        )
        .unwrap();
        assert_eq!(p, expect);
        let p = make_family(&FamilySpec::new(FamilyId::P2k).with("k", 3), prec()).unwrap();
        assert_eq!((p.n(), p.degree()), (8, 8));
        assert_eq!(p.len(), 38);
        assert!(p.coefficients().all(|c| matches!(c, Coefficient::Int(_))));
    }

    #[test]
    fn p6_default_and_root() {
        let p = make_family(&FamilySpec::new(FamilyId::P6), prec()).unwrap();
        assert_eq!(p.coefficient(&MultiIndex::from([3, 3])).unwrap().to_f64(), -2.2654);
        let r = make_family(&FamilySpec::new(FamilyId::P6).with("lambda", "root"), prec()).unwrap();
        assert!((r.coefficient(&MultiIndex::from([3, 3])).unwrap().to_f64() + 2.2654).abs() < 5e-5);
    }

    #[test]
    fn choikim_extreme_points_have_norm_one() {
        for t in ["0.5", "0.8678352808", "1"] {
            let spec = FamilySpec::new(FamilyId::ChoiKim).with("t", t);
            let p = make_family(&spec, prec()).unwrap();
            let r = family_sup_norm(&spec, &p, &OptimizerConfig::default()).unwrap();
            assert!((r.value.to_f64() - 1.0).abs() < 1e-12, "t={t}: {}", r.value);
        }
        assert!(make_family(&FamilySpec::new(FamilyId::ChoiKim).with("t", "0.3"), prec()).is_err());
    }

    #[test]
    fn bernoulli_examples() {
        let p = bernoulli_random(1, 3, 5).unwrap();
        assert_eq!(p.len(), 1);
        let p = bernoulli_random(2, 2, 7).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(bernoulli_random(10, 3, 1).unwrap().len(), 220);
        assert_eq!(bernoulli_random(10, 3, 1).unwrap(), bernoulli_random(10, 3, 1).unwrap());
        assert!(bernoulli_random(100, 6, 1).is_err());
    }

    #[test]
    fn t2_matches_pattern() {
        let t = tm_form(2).unwrap();
        let coeffs: Vec<(Vec<usize>, f64)> = t.coefficients().map(|(i, c)| (i.clone(), c.to_f64())).collect();
        assert_eq!(
            coeffs,
            vec![(vec![0, 0], 1.0), (vec![0, 1], 1.0), (vec![1, 0], 1.0), (vec![1, 1], -1.0)]
        );
    }

    #[test]
    fn tm_invariants() {
        for m in 2..=3u32 {
            let t = tm_form(m).unwrap();
            assert_eq!(t.len(), 4usize.pow(m - 1));
            assert!(t.coefficients().all(|(_, c)| c.to_f64().abs() == 1.0));
            assert_eq!(ml_sup_norm_bruteforce(&t, false).unwrap().value, 1u32 << (m - 1));
        }
        assert!(tm_form(7).is_err());
        assert!(tm_form(1).is_err());
    }

    #[test]
    fn multilinear_dispatch() {
        assert!(make_family(&FamilySpec::new(FamilyId::T2), prec()).is_err());
        assert!(make_form(&FamilySpec::new(FamilyId::P4)).is_err());
        assert_eq!(make_form(&FamilySpec::new(FamilyId::Tm).with("m", 3)).unwrap().len(), 16);
    }
}
