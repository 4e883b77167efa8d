//! Lower bounds for `D_{ℝ,m}` from the quotient `|P|_{2m/(m+1)} / ‖P‖`,
//! the extremal-parameter searches behind the small-degree values, closed
//! forms for the `P₄ⁿ` family, and hypercontractivity aggregates.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use rug::{Float, Integer, Rational};

use crate::constants::{b1_closed, b1_numeric, lambda_roots, pab_branch_upper};
use crate::error::{Error, Result};
use crate::families::{bernoulli_random, family_sup_norm, make_family, FamilyExtremum, FamilyId, FamilySpec};
use crate::multilinear::{ml_coeff_lq_norm, ml_sup_norm_bruteforce, MultilinearForm};
use crate::numeric::{bh_exponent, format_sig, golden_section_max, ls_slope, pow_ratio, Precision};
use crate::poly::{coeff_lp_norm, lp_norm_of, Coefficient, HomogeneousPoly};
use crate::supnorm::{sup_norm_multistart, sup_norm_pab_closed, sup_norm_qab, OptimizerConfig, SupNormResult};

/// Records with `m` at least this large count as tail evidence for `H_∞`.
pub const TAIL_THRESHOLD: u32 = 16;

/// Significant digits of a searched parameter written into a family spec.
pub const PARAM_DIGITS: usize = 20;

pub const KSZ_RESTARTS: usize = 4;
pub const KSZ_MAX_TERMS: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundKind {
    PolyReal,
    PolyComplex,
    Multilinear,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::PolyReal => "poly-real",
            BoundKind::PolyComplex => "poly-complex",
            BoundKind::Multilinear => "multilinear",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "poly-real" => Ok(BoundKind::PolyReal),
            "poly-complex" => Ok(BoundKind::PolyComplex),
            "multilinear" => Ok(BoundKind::Multilinear),
            _ => Err(Error::invalid(format!("unknown bound kind {name:?}"))),
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A lower bound `value ≤ D_m` (or `C_m`) with provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundRecord {
    pub kind: BoundKind,
    pub m: u32,
    pub value: Float,
    pub mth_root: Float,
    /// `None` for polynomials that did not come from a named family.
    pub family: Option<FamilySpec>,
    pub power: u32,
    pub method: String,
}

impl BoundRecord {
    /// Record from `ln(value)`, which keeps huge bounds exact in exponent.
    pub fn from_log(
        kind: BoundKind,
        m: u32,
        log_value: Float,
        family: Option<FamilySpec>,
        power: u32,
        method: impl Into<String>,
    ) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("bound record needs m >= 1"));
        }
        if !log_value.is_finite() {
            return Err(Error::invalid("bound is not a finite positive number"));
        }
        let bits = log_value.prec();
        let value = Float::with_val(bits, log_value.exp_ref());
        let mth_root = (log_value / m).exp();
        Ok(BoundRecord {
            kind,
            m,
            value,
            mth_root,
            family,
            power,
            method: method.into(),
        })
    }

    pub fn new(
        kind: BoundKind,
        m: u32,
        value: Float,
        family: Option<FamilySpec>,
        power: u32,
        method: impl Into<String>,
    ) -> Result<Self> {
        if value <= 0 {
            return Err(Error::invalid("bound must be positive"));
        }
        Self::from_log(kind, m, value.ln(), family, power, method)
    }

    pub fn family_name(&self) -> String {
        self.family.as_ref().map_or_else(|| "-".to_string(), |f| f.id.name().to_string())
    }

    pub fn params(&self) -> String {
        self.family.as_ref().map(FamilySpec::param_string).unwrap_or_default()
    }

    pub fn value_string(&self, digits: usize) -> String {
        format_sig(&self.value, digits)
    }

    pub fn mth_root_string(&self, digits: usize) -> String {
        format_sig(&self.mth_root, digits)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HyperEstimate {
    /// Proven: `H_{a,ℝ} ≥ h_a_lower`.
    pub h_a_lower: Float,
    /// Max m-th root over the tail `m ≥ TAIL_THRESHOLD`. Finite evidence
    /// about a limsup, not a value of `H_∞`.
    pub h_inf_lower_evidence: Option<Float>,
    pub source_records: Vec<BoundRecord>,
}

/// `‖P₄‖ = 2√3/9` for `P₄ = x³y − xy³`.
pub fn p4_norm(bits: u32) -> Float {
    Float::with_val(bits, 3).sqrt() * 2u32 / 9u32
}

/// `|P|_{2m/(m+1)} / ‖P‖`, evaluated as a difference of logarithms.
pub fn bh_lower_bound(p: &HomogeneousPoly, norm: &SupNormResult) -> Result<BoundRecord> {
    if p.is_zero() {
        return Err(Error::invalid("zero polynomial has no bound"));
    }
    if norm.value <= 0 {
        return Err(Error::invalid("sup norm must be positive"));
    }
    let bits = p.precision().bits();
    let lp = coeff_lp_norm(p, &bh_exponent(p.degree()))?;
    let log = lp.log_value - Float::with_val(bits, norm.value.ln_ref());
    BoundRecord::from_log(BoundKind::PolyReal, p.degree(), log, None, 1, norm.method.name())
}

/// On-disk cache of expanded powers, one serialized polynomial per file.
#[derive(Clone, Debug)]
pub struct PowerCache {
    dir: PathBuf,
}

impl PowerCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(PowerCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, spec: &FamilySpec, power: u32, prec: Precision) -> PathBuf {
        let params: String = spec
            .param_string()
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
            .collect();
        self.dir
            .join(format!("{}_{}_n{}_d{}.bhpoly", spec.id, params, power, prec.digits()))
    }

    /// Cached `P^power`, computing and storing it on a miss.
    pub fn get_or_compute<F>(&self, spec: &FamilySpec, power: u32, prec: Precision, compute: F) -> Result<HomogeneousPoly>
    where
        F: FnOnce() -> Result<HomogeneousPoly>,
    {
        let path = self.path_for(spec, power, prec);
        if let Ok(text) = fs::read_to_string(&path) {
            return HomogeneousPoly::deserialize(&text);
        }
        let p = compute()?;
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, p.serialize())?;
        fs::rename(&tmp, &path)?;
        Ok(p)
    }
}

/// `|a_n|_{2m/(m+1)} / ‖P‖ⁿ` for the `n`-th power of a family member, with
/// `m = n·deg P`.
pub fn power_bound(
    spec: &FamilySpec,
    power: u32,
    prec: Precision,
    cfg: &OptimizerConfig,
    cache: Option<&PowerCache>,
) -> Result<BoundRecord> {
    if power == 0 {
        return Err(Error::invalid("power must be >= 1"));
    }
    let p = make_family(spec, prec)?;
    let norm = family_sup_norm(spec, &p, cfg)?;
    let expand = || if power == 1 { Ok(p.clone()) } else { p.pow(power) };
    let pn = match cache {
        Some(c) => c.get_or_compute(spec, power, prec, expand)?,
        None => expand()?,
    };
    let bits = prec.bits();
    let m = pn.degree();
    let lp = coeff_lp_norm(&pn, &bh_exponent(m))?;
    let log_norm = Float::with_val(bits, norm.value.ln_ref()) * power;
    BoundRecord::from_log(
        BoundKind::PolyReal,
        m,
        lp.log_value - log_norm,
        Some(spec.clone()),
        power,
        norm.method.name(),
    )
}

/// The `P₄ⁿ` bound `[Σₖ binom(n,k)^{8n/(4n+1)}]^{(4n+1)/8n} / (2√3/9)ⁿ` and
/// its relaxation `√binom(2n,n) / (2√3/9)ⁿ`.
pub fn estimate_4n(n: u32, prec: Precision) -> Result<(BoundRecord, Float)> {
    if n == 0 {
        return Err(Error::invalid("estimate_4n needs n >= 1"));
    }
    let bits = prec.bits();
    let m = 4 * n;
    let binoms: Vec<Coefficient> = (0..=n).map(|k| Coefficient::Int(Integer::from(Integer::binomial_u(n, k)))).collect();
    let lp = lp_norm_of(&binoms, &bh_exponent(m), bits)?;
    let log_denom = p4_norm(bits).ln() * n;
    let central = Integer::from(Integer::binomial_u(2 * n, n));
    let log_relaxed = Float::with_val(bits, &central).ln() / 2u32 - &log_denom;
    let log_sharp = lp.log_value - log_denom;
    if log_sharp < log_relaxed {
        return Err(Error::InvariantViolated(format!(
            "sharp P4^{n} bound fell below its l2 relaxation"
        )));
    }
    let record = BoundRecord::from_log(
        BoundKind::PolyReal,
        m,
        log_sharp,
        Some(FamilySpec::new(FamilyId::P4)),
        n,
        "binomial-closed-form",
    )?;
    Ok((record, log_relaxed.exp()))
}

/// `Σₖ binom(n,k)² = binom(2n,n)` in exact integers.
pub fn binomial_identity_holds(n: u32) -> bool {
    let mut sum = Integer::new();
    for k in 0..=n {
        let b = Integer::from(Integer::binomial_u(n, k));
        sum += Integer::from(&b * &b);
    }
    sum == Integer::from(Integer::binomial_u(2 * n, n))
}

/// `⁴√(4/(mπ)) · (⁸√27)^m` for `m ≡ 0 mod 4`.
pub fn stirling_lower(m: u32, prec: Precision) -> Result<Float> {
    if m == 0 || !m.is_multiple_of(4) {
        return Err(Error::invalid(format!("stirling_lower needs a positive multiple of 4, got {m}")));
    }
    let bits = prec.bits();
    let pi = prec.pi();
    let front = (Float::with_val(bits, 4u32) / (pi * m)).sqrt().sqrt();
    let log_growth = Float::with_val(bits, 27).ln() * m / 8u32;
    Ok(front * log_growth.exp())
}

/// `⁸√27`, the proved floor for `H_{∞,ℝ}`.
pub fn eighth_root_27(prec: Precision) -> Float {
    Float::with_val(prec.bits(), 27).sqrt().sqrt().sqrt()
}

/// `f(t) = [2t^{4/3} + (2√(t(1−t)))^{4/3}]^{3/4}`, the `ℓ_{4/3}` norm of the
/// coefficients of `t x² + 2√(t(1−t)) xy − t y²`.
pub fn quotient_m2(t: &Float) -> Float {
    let bits = t.prec();
    let p = Rational::from((4, 3));
    let cross = (Float::with_val(bits, t * Float::with_val(bits, 1 - t))).sqrt() * 2u32;
    let sum = pow_ratio(&t.clone().abs(), &p) * 2u32 + pow_ratio(&cross, &p);
    pow_ratio(&sum, &Rational::from((3, 4)))
}

/// Maximize `quotient_m2` over `[1/2, 1]`; the maximum bounds `D_{ℝ,2}`.
pub fn search_m2(prec: Precision) -> Result<FamilyExtremum> {
    let bits = prec.bits();
    let tol = Float::with_val(bits, 1e-12);
    let (t, bound) = golden_section_max(quotient_m2, &Float::with_val(bits, 0.5), &Float::with_val(bits, 1), &tol)?;
    let family = FamilySpec::new(FamilyId::ChoiKim).with("t", format_sig(&t, PARAM_DIGITS));
    Ok(FamilyExtremum {
        family,
        parameter: t,
        bound,
    })
}

/// `(2 + 2|r|^{3/2})^{2/3} / ‖P_{1,r}‖`.
pub fn quotient_m3(r: &Float) -> Result<Float> {
    let bits = r.prec();
    let lp = pow_ratio(&r.clone().abs(), &Rational::from((3, 2))) * 2u32 + 2u32;
    let num = pow_ratio(&lp, &Rational::from((2, 3)));
    let norm = sup_norm_pab_closed(&Float::with_val(bits, 1), r)?;
    Ok(num / norm.value)
}

/// `(2 + |λ|^{12/7})^{7/12} / ‖Q_{1,λ}‖`.
pub fn quotient_m6(lambda: &Float) -> Result<Float> {
    let bits = lambda.prec();
    let lp = pow_ratio(&lambda.clone().abs(), &Rational::from((12, 7))) + 2u32;
    let num = pow_ratio(&lp, &Rational::from((7, 12)));
    let norm = sup_norm_qab(&Float::with_val(bits, 1), lambda)?;
    Ok(num / norm.value)
}

fn confirm_grid_max<F>(q: F, best: &Float, lo: f64, hi: f64, steps: usize, what: &str) -> Result<()>
where
    F: Fn(&Float) -> Result<Float> + Sync,
{
    let bits = best.prec();
    let slack = Float::with_val(bits, best * 1e-12);
    let ceiling = Float::with_val(bits, best + &slack);
    let worst = (0..=steps)
        .into_par_iter()
        .map(|i| {
            let x = Float::with_val(bits, lo + (hi - lo) * i as f64 / steps as f64);
            q(&x).map(|v| (v, x))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .find(|(v, _)| *v > ceiling);
    match worst {
        Some((v, x)) => Err(Error::InvariantViolated(format!(
            "{what} quotient {v} at {x} exceeds the extremum {best}"
        ))),
        None => Ok(()),
    }
}

/// `b₁` from its closed form, cross-checked against the numeric root of the
/// branch-matching equation.
pub fn find_b1(prec: Precision) -> Result<Float> {
    let bits = prec.bits();
    let closed = b1_closed(bits);
    let numeric = b1_numeric(bits)?;
    let diff = Float::with_val(bits, &closed - &numeric).abs();
    if diff > Float::with_val(bits, Float::i_exp(1, -(bits as i32) + 16)) {
        return Err(Error::InvariantViolated(format!(
            "closed-form b1 {closed} and numeric root {numeric} disagree"
        )));
    }
    Ok(closed)
}

/// The cubic extremum: `quotient_m3` at `r = b₁`, confirmed as the maximum
/// over a grid on `[−4, 1]`.
pub fn search_m3(prec: Precision) -> Result<FamilyExtremum> {
    let b1 = find_b1(prec)?;
    let bound = quotient_m3(&b1)?;
    confirm_grid_max(quotient_m3, &bound, -4.0, 1.0, 5000, "cubic")?;
    debug_assert!(b1 < pab_branch_upper(prec.bits()));
    Ok(FamilyExtremum {
        family: FamilySpec::new(FamilyId::P3),
        parameter: b1,
        bound,
    })
}

/// `(λ₀, λ₁)`.
pub fn find_lambda01(prec: Precision) -> Result<(Float, Float)> {
    lambda_roots(prec.bits())
}

/// The sextic extremum: `quotient_m6` at `λ = λ₀`, confirmed as the maximum
/// over a grid on `[−4, 0]`.
pub fn search_m6(prec: Precision) -> Result<FamilyExtremum> {
    let (l0, _) = find_lambda01(prec)?;
    let bound = quotient_m6(&l0)?;
    confirm_grid_max(quotient_m6, &bound, -4.0, 0.0, 4000, "sextic")?;
    Ok(FamilyExtremum {
        family: FamilySpec::new(FamilyId::P6).with("lambda", "root"),
        parameter: l0,
        bound,
    })
}

/// Bound from `P_{2^k}`, whose sup norm is 1.
pub fn p2k_bounds(k: u32, prec: Precision) -> Result<BoundRecord> {
    if !(1..=5).contains(&k) {
        return Err(Error::invalid(format!("p2k_bounds supports 1 <= k <= 5, got {k}")));
    }
    let spec = FamilySpec::new(FamilyId::P2k).with("k", k);
    let p = make_family(&spec, prec)?;
    let norm = family_sup_norm(&spec, &p, &OptimizerConfig::default())?;
    let mut record = bh_lower_bound(&p, &norm)?;
    record.family = Some(spec);
    Ok(record)
}

/// `|T|_{2m/(m+1)} / ‖T‖` for a multilinear form, with the norm by vertex
/// enumeration.
pub fn multilinear_bound(form: &MultilinearForm, family: Option<FamilySpec>, prec: Precision) -> Result<BoundRecord> {
    let m = form.arity() as u32;
    let norm = ml_sup_norm_bruteforce(form, false)?;
    if norm.value <= 0 {
        return Err(Error::invalid("zero multilinear form has no bound"));
    }
    let lq = ml_coeff_lq_norm(form, &bh_exponent(m))?;
    let bits = prec.bits();
    let log = Float::with_val(bits, &lq.log_value) - Float::with_val(bits, norm.value.ln_ref());
    BoundRecord::from_log(BoundKind::Multilinear, m, log, family, 1, norm.method.name())
}

/// `binom(m+n−1, n−1)^{1/(2m)}`.
pub fn contractivity_dm(n: u32, m: u32, prec: Precision) -> Result<Float> {
    if n == 0 || m == 0 {
        return Err(Error::invalid("contractivity_dm needs n, m >= 1"));
    }
    let bits = prec.bits();
    let count = Integer::from(Integer::binomial_u(m + n - 1, n - 1));
    Ok((Float::with_val(bits, &count).ln() / (2 * m)).exp())
}

/// `(2 + 2^m)^{(m+1)/2m} / √(4 + 2^{m+1})`. The excess over 1 is of order
/// `2^{−m}/m`, so the working precision grows with `m`.
pub fn complex_lower_nunez(m: u32, prec: Precision) -> Result<Float> {
    if m < 2 {
        return Err(Error::invalid(format!("complex_lower_nunez needs m >= 2, got {m}")));
    }
    let bits = prec.bits() + m + 32;
    let two_m = Float::with_val(bits, Float::i_exp(1, m as i32));
    let base = Float::with_val(bits, &two_m + 2u32);
    let e = Float::with_val(bits, Rational::from((m + 1, 2 * m)));
    let den = (two_m * 2u32 + 4u32).sqrt();
    let log = base.ln() * e - den.ln();
    Ok(log.exp())
}

pub fn hyper_aggregate(records: &[BoundRecord]) -> Result<HyperEstimate> {
    hyper_aggregate_with(records, TAIL_THRESHOLD)
}

pub fn hyper_aggregate_with(records: &[BoundRecord], tail_threshold: u32) -> Result<HyperEstimate> {
    if records.is_empty() {
        return Err(Error::invalid("hyper_aggregate needs at least one record"));
    }
    if let Some(r) = records.iter().find(|r| r.kind != BoundKind::PolyReal) {
        return Err(Error::invalid(format!("hyper_aggregate takes poly-real records, got {}", r.kind)));
    }
    let max_root = |it: &mut dyn Iterator<Item = &BoundRecord>| {
        it.map(|r| r.mth_root.clone()).max_by(|a, b| a.partial_cmp(b).unwrap())
    };
    let h_a_lower = max_root(&mut records.iter()).expect("nonempty");
    let h_inf_lower_evidence = max_root(&mut records.iter().filter(|r| r.m >= tail_threshold));
    Ok(HyperEstimate {
        h_a_lower,
        h_inf_lower_evidence,
        source_records: records.to_vec(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct KszPoint {
    pub n: usize,
    /// Mean over trials of `ln(|P|_r / ‖P‖)`.
    pub mean_log_ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KszReport {
    pub m: u32,
    pub r: Rational,
    /// `m/r − (m+1)/2`.
    pub theoretical_slope: f64,
    pub fitted_slope: f64,
    pub points: Vec<KszPoint>,
}

/// Growth of `|P|_r / ‖P‖` in `n` for random ±1 polynomials, fitted as a
/// slope in log-log coordinates. The sup norm is a multistart estimate, so
/// each ratio is an upper estimate of the true one.
pub fn ksz_experiment(m: u32, r: &Rational, n_list: &[usize], trials: usize, seed: u64) -> Result<KszReport> {
    if m == 0 {
        return Err(Error::invalid("ksz_experiment needs m >= 1"));
    }
    if *r < 1 || *r > bh_exponent(m) {
        return Err(Error::invalid(format!("r must lie in [1, 2m/(m+1)], got {r}")));
    }
    if trials == 0 || n_list.len() < 2 {
        return Err(Error::invalid("ksz_experiment needs trials >= 1 and at least two values of n"));
    }
    for &n in n_list {
        let count = Integer::from(Integer::binomial_u((m as usize + n.max(1) - 1) as u32, (n.max(1) - 1) as u32));
        if n == 0 || count > KSZ_MAX_TERMS {
            return Err(Error::invalid(format!("n = {n} is out of range for m = {m}")));
        }
    }
    let bits = Precision::default().bits();
    let cfg = OptimizerConfig {
        restarts: KSZ_RESTARTS,
        seed,
        ..OptimizerConfig::default()
    };
    let mut points = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let logs = (0..trials)
            .into_par_iter()
            .map(|t| {
                let trial_seed = seed.wrapping_add((n as u64) << 32).wrapping_add(t as u64);
                let p = bernoulli_random(n, m, trial_seed)?;
                let lr = coeff_lp_norm(&p, r)?;
                let sup = sup_norm_multistart(&p, &cfg)?;
                Ok((lr.log_value - Float::with_val(bits, sup.value.ln_ref())).to_f64())
            })
            .collect::<Result<Vec<f64>>>()?;
        points.push(KszPoint {
            n,
            mean_log_ratio: logs.iter().sum::<f64>() / trials as f64,
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.mean_log_ratio).collect();
    let theoretical = Rational::from((m, 1)) / r.clone() - Rational::from((m + 1, 2));
    Ok(KszReport {
        m,
        r: r.clone(),
        theoretical_slope: theoretical.to_f64(),
        fitted_slope: ls_slope(&xs, &ys),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::default()
    }

    fn rel(a: &Float, b: f64) -> f64 {
        (a.to_f64() / b - 1.0).abs()
    }

    #[test]
    fn p4_bound() {
        let spec = FamilySpec::new(FamilyId::P4);
        let r = power_bound(&spec, 1, prec(), &OptimizerConfig::default(), None).unwrap();
        assert!(rel(&r.value, 4.006) < 5e-4, "{}", r.value);
        let (e, relaxed) = estimate_4n(1, prec()).unwrap();
        assert!(rel(&e.value, r.value.to_f64()) < 1e-12);
        assert!(relaxed <= e.value);
    }

    #[test]
    fn monomial_bound_is_one() {
        let p = HomogeneousPoly::monomial([0u32, 5, 0], Coefficient::from(1)).unwrap();
        let norm = crate::supnorm::sup_norm_auto(&p, &OptimizerConfig::default()).unwrap();
        let b = bh_lower_bound(&p, &norm).unwrap();
        assert!((b.value.to_f64() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn table1_endpoints() {
        let (r8, _) = estimate_4n(2, prec()).unwrap();
        assert!(rel(&r8.value, 17.4817) < 5e-4);
        let (r400, _) = estimate_4n(100, prec()).unwrap();
        assert!(rel(&r400.value, 8.8123e70) < 5e-4);
        assert!((1..=200).all(binomial_identity_holds));
        let mth = |v: &BoundRecord| v.mth_root.to_f64();
        let roots: Vec<f64> = (1..=100).map(|n| mth(&estimate_4n(n, prec()).unwrap().0)).collect();
        assert!(roots.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn stirling_values() {
        let s = stirling_lower(400, prec()).unwrap();
        let root = (s.clone().ln() / 400u32).exp().to_f64();
        assert!((root - 1.5044).abs() < 1e-3, "{root}");
        let (e, _) = estimate_4n(100, prec()).unwrap();
        let ratio = (e.value / s).to_f64();
        assert!((1.0..=1.05).contains(&ratio), "{ratio}");
        assert!(stirling_lower(6, prec()).is_err());
        assert!((eighth_root_27(prec()).to_f64() - 1.5098).abs() < 1e-4);
    }

    #[test]
    fn searches() {
        let m2 = search_m2(prec()).unwrap();
        assert!((m2.parameter.to_f64() - 0.8678352808).abs() < 1e-8, "{}", m2.parameter);
        assert!(rel(&m2.bound, 1.8374) < 5e-4);
        let m3 = search_m3(prec()).unwrap();
        assert!((m3.parameter.to_f64() + 1.6692).abs() < 5e-4);
        assert!(rel(&m3.bound, 2.5525) < 5e-4);
        let m6 = search_m6(prec()).unwrap();
        assert!(rel(&m6.bound, 10.7809) < 5e-4, "{}", m6.bound);
    }

    #[test]
    fn p2k_roots() {
        let r2 = p2k_bounds(2, prec()).unwrap();
        assert!(rel(&r2.mth_root, 1.4344) < 1e-4);
        assert!(rel(&r2.value, 4.2335) < 1e-4);
        let r3 = p2k_bounds(3, prec()).unwrap();
        assert!(rel(&r3.mth_root, 1.5241) < 1e-4);
        assert!(p2k_bounds(6, prec()).is_err());
    }

    #[test]
    fn contractivity_and_nunez() {
        assert!((contractivity_dm(2, 3, prec()).unwrap().to_f64() - 4f64.powf(1.0 / 6.0)).abs() < 1e-15);
        assert_eq!(contractivity_dm(1, 7, prec()).unwrap(), 1);
        assert!((complex_lower_nunez(2, prec()).unwrap().to_f64() - 6f64.powf(0.75) / 12f64.sqrt()).abs() < 1e-15);
        assert!((complex_lower_nunez(3, prec()).unwrap().to_f64() - 10f64.powf(2.0 / 3.0) / 20f64.sqrt()).abs() < 1e-15);
        assert!(complex_lower_nunez(5000, prec()).unwrap() > 1);
        assert!(complex_lower_nunez(1, prec()).is_err());
    }

    #[test]
    fn hyper_cases() {
        let r = BoundRecord::new(BoundKind::PolyReal, 2, Float::with_val(200, 1.8374), None, 1, "x").unwrap();
        let h = hyper_aggregate(std::slice::from_ref(&r)).unwrap();
        assert!((h.h_a_lower.to_f64() - 1.3555).abs() < 1e-4);
        assert!(h.h_inf_lower_evidence.is_none());
        assert!(hyper_aggregate(&[]).is_err());
        let mut c = r.clone();
        c.kind = BoundKind::PolyComplex;
        assert!(hyper_aggregate(&[c]).is_err());
    }

    #[test]
    fn t2_quotient() {
        let t = crate::families::tm_form(2).unwrap();
        let b = multilinear_bound(&t, None, prec()).unwrap();
        assert!((b.value.to_f64() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = PowerCache::new(dir.path()).unwrap();
        let spec = FamilySpec::new(FamilyId::P5);
        let cfg = OptimizerConfig::default();
        let a = power_bound(&spec, 3, prec(), &cfg, Some(&cache)).unwrap();
        let b = power_bound(&spec, 3, prec(), &cfg, Some(&cache)).unwrap();
        assert_eq!(a, b);
        let stored = fs::read_to_string(cache.path_for(&spec, 3, prec())).unwrap();
        let fresh = make_family(&spec, prec()).unwrap().pow(3).unwrap();
        assert_eq!(HomogeneousPoly::deserialize(&stored).unwrap(), fresh);
    }
}
