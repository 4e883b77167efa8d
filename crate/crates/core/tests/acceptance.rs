//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `BLOCKED` are evaluated exactly as stated and still
//! print FAIL when they fail; they do not change the exit status. Any other
//! failure, or a blocked criterion that unexpectedly passes, exits nonzero.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Rational};

use bh_core::bounds::{
    binomial_identity_holds, contractivity_dm, eighth_root_27, estimate_4n, find_b1, find_lambda01, hyper_aggregate,
    ksz_experiment, multilinear_bound, p2k_bounds, p4_norm, power_bound, search_m2, search_m3, search_m6,
    stirling_lower, BoundRecord,
};
use bh_core::constants::{b1_closed, b1_numeric};
use bh_core::families::{make_family, tm_form, FamilyId, FamilySpec};
use bh_core::multilinear::{cm_lower_bound, ml_sup_norm_bruteforce};
use bh_core::numeric::{bh_exponent, Precision};
use bh_core::poly::{lp_interpolation_bounds, lp_norm_direct, Coefficient, ComplexPoly, HomogeneousPoly, MultiIndex};
use bh_core::report::{table_records, RunConfig, TableId};
use bh_core::supnorm::{
    complex_torus_sup_estimate, sup_norm_auto, sup_norm_bivariate, sup_norm_multistart, sup_norm_pab_closed,
    sup_norm_qab, OptimizerConfig,
};

/// binom(258, 2)^(1/512) = 1.02054 > 1.02; for n = 3 the value first drops to 1.02 at m = 265.
const BLOCKED: &[u32] = &[10];

#[derive(Default)]
struct Checks {
    total: usize,
    failed: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn holds(&mut self, name: &str, ok: bool, detail: impl std::fmt::Display) {
        self.total += 1;
        if !ok {
            self.failed.push(format!("{name}: {detail}"));
        }
    }

    fn abs(&mut self, name: &str, got: f64, want: f64, tol: f64) {
        let err = (got - want).abs();
        self.holds(name, err <= tol, format!("got {got:.12e}, want {want} (abs err {err:.2e} > {tol:e})"));
    }

    fn rel(&mut self, name: &str, got: f64, want: f64, tol: f64) {
        let err = (got / want - 1.0).abs();
        self.holds(name, err <= tol, format!("got {got:.12e}, want {want} (rel err {err:.2e} > {tol:e})"));
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

type Res<T> = Result<T, bh_core::Error>;

struct Ctx {
    prec: Precision,
    cfg: RunConfig,
    opt: OptimizerConfig,
    records: Vec<BoundRecord>,
}

fn f(x: &Float) -> f64 {
    x.to_f64()
}

fn pab(a: f64, b: f64) -> FamilySpec {
    FamilySpec::new(FamilyId::Pab).with("a", format!("{a:.6}")).with("b", format!("{b:.6}"))
}

fn qab(a: f64, b: f64) -> FamilySpec {
    FamilySpec::new(FamilyId::Qab).with("a", format!("{a:.6}")).with("b", format!("{b:.6}"))
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, m: u32) -> HomogeneousPoly {
    let terms = MultiIndex::all(n, m).into_iter().map(|a| (a, Coefficient::from(rng.gen_range(-5i32..=5)))).collect::<Vec<_>>();
    let p = HomogeneousPoly::new(n, m, terms).expect("homogeneous by construction");
    if p.is_zero() {
        HomogeneousPoly::new(n, m, [(MultiIndex::all(n, m).remove(0), Coefficient::from(1))]).unwrap()
    } else {
        p
    }
}

fn table_check(c: &mut Checks, ctx: &mut Ctx, id: TableId) -> Res<Vec<BoundRecord>> {
    let report = table_records(id, &ctx.cfg)?;
    for d in &report.diffs {
        if d.is_failure() {
            c.holds(&format!("table {id:?} m={}", d.m), false, d.line());
        } else {
            c.total += 1;
        }
    }
    let skipped: Vec<String> = report.diffs.iter().filter(|d| !d.is_failure() && !d.within).map(|d| d.line()).collect();
    for s in skipped {
        c.note(s);
    }
    ctx.records.extend(report.records.iter().cloned());
    Ok(report.records)
}

fn record_at(records: &[BoundRecord], m: u32) -> f64 {
    records.iter().find(|r| r.m == m).map(|r| f(&r.value)).unwrap_or(f64::NAN)
}

fn c1(c: &mut Checks, ctx: &mut Ctx) -> Res<()> {
    let e = search_m2(ctx.prec)?;
    c.abs("t*", f(&e.parameter), 0.8678352808, 1e-8);
    c.rel("D_2", f(&e.bound), 1.8374, 5e-4);
    Ok(())
}

fn c2(c: &mut Checks, ctx: &mut Ctx) -> Res<()> {
    let bits = ctx.prec.bits();
    c.abs("b1 closed form", f(&b1_closed(bits)), -1.6692, 5e-4);
    c.abs("b1 branch root", f(&b1_numeric(bits)?), -1.6692, 5e-4);
    c.abs("find_b1", f(&find_b1(ctx.prec)?), -1.6692, 5e-4);
    c.rel("D_3", f(&search_m3(ctx.prec)?.bound), 2.5525, 5e-4);
    Ok(())
}

fn c3(c: &mut Checks, ctx: &mut Ctx) -> Res<()> {
    let p4 = make_family(&FamilySpec::new(FamilyId::P4), ctx.prec)?;
    let n4 = sup_norm_bivariate(&p4, &ctx.opt)?;
    c.rel("||P4||", f(&n4.value), f(&p4_norm(ctx.prec.bits())), 1e-10);
    let p5 = make_family(&FamilySpec::new(FamilyId::P5), ctx.prec)?;
    c.abs("||P5||", f(&sup_norm_bivariate(&p5, &ctx.opt)?.value), 0.286170950359, 1e-9);
    Ok(())
}

fn c4(c: &mut Checks, ctx: &mut Ctx) -> Res<()> {
    let recs = table_check(c, ctx, TableId::One)?;
    c.rel("m=8", record_at(&recs, 8), 17.4817, 5e-4);
    c.rel("m=400", record_at(&recs, 400), 8.8123e70, 5e-4);
    for n in [2, 10, 100] {
        let (sharp, relaxed) = estimate_4n(n, ctx.prec)?;
        c.holds(&format!("sharp >= relaxed n={n}"), sharp.value >= relaxed, "relaxation exceeds sharp bound");
    }
    let bad: Vec<u32> = (0..=200).filter(|&n| !binomial_identity_holds(n)).collect();
    c.holds("binomial identity n<=200", bad.is_empty(), format!("fails at {bad:?}"));
    Ok(())
}

fn c5(c: &mut Checks, ctx: &mut Ctx) -> Res<()> {
    let recs = table_check(c, ctx, TableId::Two)?;
    c.rel("m=10", record_at(&recs, 10), 48.03065, 5e-4);
    c.rel("m=400", record_at(&recs, 400), 8.23785e75, 5e-4);
    let d5 = power_bound(&FamilySpec::new(FamilyId::P5), 1, ctx.prec, &ctx.opt, None)?;
    c.abs("D_5", f(&d5.value), 6.835918785877, 1e-6);
    Ok(())
}

fn c6(c: &mut Checks, ctx: &mut Ctx) -> Res<()> {
    let (l0, l1) = find_lambda01(ctx.prec)?;
    c.abs("lambda0", f(&l0), -2.2654, 5e-4);
    c.abs("lambda1", f(&l1), -1.6779, 5e-4);
    let recs = table_check(c, ctx, TableId::Three)?;
    c.rel("m=12", record_at(&recs, 12), 144.057, 5e-4);
    c.rel("m=420", record_at(&recs, 420), 5.82897e83, 5e-4);
    Ok(())
}

fn c7(c: &mut Checks, ctx: &mut Ctx) -> Res<()> {
    for (k, want, tol) in [(2, 1.4344, 1e-4), (3, 1.5241, 1e-4), (4, 1.59527998, 1e-6), (5, 1.65617484, 1e-6)] {
        let r = p2k_bounds(k, ctx.prec)?;
        c.rel(&format!("root k={k}"), f(&r.mth_root), want, tol);
        ctx.records.push(r);
    }
    let p34 = power_bound(&FamilySpec::new(FamilyId::P3), 4, ctx.prec, &ctx.opt, None)?;
    c.holds("P3^4 degree", p34.m == 12, format!("m = {}", p34.m));
    c.rel("P3^4", f(&p34.value), 38.1, 1e-2);
    ctx.records.push(p34);
    Ok(())
}

fn c8(c: &mut Checks, ctx: &mut Ctx) -> Res<()> {
    for (m, e) in [(2, search_m2(ctx.prec)?), (3, search_m3(ctx.prec)?), (6, search_m6(ctx.prec)?)] {
        ctx.records.push(BoundRecord::new(
            bh_core::bounds::BoundKind::PolyReal,
            m,
            e.bound,
            Some(e.family),
            1,
            "search",
        )?);
    }
    let h = hyper_aggregate(&ctx.records)?;
    // compared at the eight decimals the target carries
    let h_a: f64 = format!("{:.8}", f(&h.h_a_lower)).parse().unwrap();
    c.holds("h_a_lower", h_a >= 1.65617484, format!("{h_a} < 1.65617484"));
    c.note(format!("h_a_lower = {:.10} over {} records", f(&h.h_a_lower), h.source_records.len()));
    let floor = eighth_root_27(ctx.prec);
    c.abs("27^(1/8)", f(&floor), 1.5098, 1e-4);
    // stirling_lower is a lower bound for the P4^n bound and its m-th root
    // rises to the floor without crossing it
    let mut prev = 0.0;
    for n in [1u32, 2, 5, 10, 25, 50, 100, 250, 1000] {
        let m = 4 * n;
        let s = stirling_lower(m, ctx.prec)?;
        let (sharp, _) = estimate_4n(n, ctx.prec)?;
        c.holds(&format!("stirling <= P4^{n}"), s <= sharp.value, format!("{} > {}", f(&s), f(&sharp.value)));
        let root = f(&(Float::with_val(ctx.prec.bits(), s.ln_ref()) / m).exp());
        c.holds(&format!("stirling root m={m}"), root > prev && root < f(&floor), format!("root {root}"));
        prev = root;
    }
    c.abs("stirling root m=4000", prev, f(&floor), 2e-3);
    Ok(())
}

fn c9(c: &mut Checks, ctx: &mut Ctx) -> Res<()> {
    let t2 = multilinear_bound(&tm_form(2)?, Some(FamilySpec::new(FamilyId::T2)), ctx.prec)?;
    c.abs("T2 quotient", f(&t2.value), 2f64.sqrt(), 1e-12);
    for m in [2u32, 3] {
        let t = tm_form(m)?;
        let count = t.coefficients().count();
        c.holds(&format!("T{m} count"), count == 4usize.pow(m - 1), format!("{count} coefficients"));
        let unit = t.coefficients().all(|(_, a)| matches!(a, Coefficient::Int(v) if *v == 1 || *v == -1));
        c.holds(&format!("T{m} signs"), unit, "coefficient outside {-1, 1}");
        c.abs(&format!("T{m} norm"), f(&ml_sup_norm_bruteforce(&t, false)?.value), 2f64.powi(m as i32 - 1), 1e-12);
    }
    for m in 2..=10u32 {
        let got = f(&cm_lower_bound(m, &bh_exponent(m))?);
        c.abs(&format!("cm_lower_bound m={m}"), got, 2f64.powf(1.0 - 1.0 / m as f64), 1e-12);
    }
    Ok(())
}

fn c10(c: &mut Checks, ctx: &mut Ctx) -> Res<()> {
    let vals: Vec<Float> = (1..=512).map(|m| contractivity_dm(3, m, ctx.prec)).collect::<Res<_>>()?;
    let rises: Vec<usize> = vals.windows(2).enumerate().filter(|(_, w)| w[1] >= w[0]).map(|(i, _)| i + 2).collect();
    c.holds("decreasing on [1, 512]", rises.is_empty(), format!("not decreasing at m = {rises:?}"));
    let at256 = f(&vals[255]);
    c.holds("<= 1.02 at m=256 (n=3)", at256 <= 1.02, format!("binom(258,2)^(1/512) = {at256:.7}"));
    let first = vals.iter().position(|v| *v <= 1.02).map(|i| i + 1);
    c.note(format!("m=256: {at256:.7}; m=512: {:.7}; first m with value <= 1.02: {first:?}", f(&vals[511])));

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = f64::INFINITY;
    for _ in 0..50 {
        let m = rng.gen_range(1..=8u32);
        let terms: Vec<_> = MultiIndex::all(2, m)
            .into_iter()
            .map(|a| (a, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect();
        let p = ComplexPoly::new(2, m, terms)?;
        let est = complex_torus_sup_estimate(&p, 512)?;
        worst = worst.min(est + 1e-8 - p.l2_norm());
    }
    c.holds("Parseval on 50 polynomials", worst >= 0.0, format!("margin {worst:e}"));
    Ok(())
}

fn c11(c: &mut Checks, ctx: &mut Ctx) -> Res<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);

    let mut bad = 0;
    for _ in 0..200 {
        let (n, m) = (rng.gen_range(1..=4usize), rng.gen_range(1..=6u32));
        let p = random_poly(&mut rng, n, m);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let t: f64 = rng.gen_range(-2.0..2.0);
        let tx: Vec<f64> = x.iter().map(|v| v * t).collect();
        let lhs = f(&p.eval_precise(&tx)?);
        let rhs = t.powi(m as i32) * f(&p.eval_precise(&x)?);
        if (lhs - rhs).abs() > 1e-10 * (1.0 + rhs.abs()) {
            bad += 1;
        }
    }
    c.holds("homogeneity", bad == 0, format!("{bad} of 200 violate P(tx) = t^m P(x)"));

    let mut bad = 0;
    for _ in 0..200 {
        let v: Vec<f64> = (0..rng.gen_range(1..40)).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let p = rng.gen_range(1.0..4.0);
        let q = p + rng.gen_range(0.0..4.0);
        let (lo, hi) = lp_interpolation_bounds(&v, p, q)?;
        let mid = lp_norm_direct(&v, p);
        if !(lo <= mid * (1.0 + 1e-12) && mid <= hi * (1.0 + 1e-12)) {
            bad += 1;
        }
    }
    c.holds("lp sandwich", bad == 0, format!("{bad} of 200 outside [|v|_q, d^(1/p-1/q)|v|_q]"));

    let mut bad = Vec::new();
    for i in 0..60 {
        let n = if i < 40 { 2 } else { 3 };
        let m = rng.gen_range(2..=5u32);
        let p = random_poly(&mut rng, n, m);
        let r = if n == 2 {
            sup_norm_bivariate(&p, &ctx.opt)?
        } else {
            sup_norm_multistart(&p, &OptimizerConfig { restarts: 16, ..ctx.opt.clone() })?
        };
        let at = f(&p.eval_precise(&r.maximizer)?).abs();
        let mut ok = r.certified_lower <= r.value && (at - f(&r.certified_lower)).abs() <= 1e-12 * (1.0 + at);
        ok &= r.maximizer.iter().all(|x| x.abs() <= 1.0);
        if !r.method.is_heuristic() {
            for _ in 0..100 {
                let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                ok &= p.eval_real(&x)?.abs() <= f(&r.value) * (1.0 + 1e-9);
            }
        }
        if !ok {
            bad.push(i);
        }
    }
    c.holds("certification", bad.is_empty(), format!("violations at samples {bad:?}"));

    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let (a, b) = (rng.gen_range(-3.0..3.0f64), rng.gen_range(-3.0..3.0f64));
        let (a, b) = (if a.abs() < 1e-3 { 1.0 } else { a }, b);
        for spec in [pab(a, b), qab(a, b)] {
            let p = make_family(&spec, ctx.prec)?;
            let (fa, fb) = (spec.get_real("a", ctx.prec)?, spec.get_real("b", ctx.prec)?);
            let (fa, fb) = (fa.to_float(ctx.prec.bits()), fb.to_float(ctx.prec.bits()));
            let closed = if spec.id == FamilyId::Pab { sup_norm_pab_closed(&fa, &fb)? } else { sup_norm_qab(&fa, &fb)? };
            let brute = sup_norm_bivariate(&p, &ctx.opt)?;
            worst = worst.max((f(&closed.value) / f(&brute.value) - 1.0).abs());
        }
    }
    c.holds("closed form vs brute force (200 pairs)", worst <= 1e-9, format!("max rel diff {worst:e}"));

    let mut bad = 0;
    for _ in 0..40 {
        let n = rng.gen_range(2..=3usize);
        let m = rng.gen_range(1..=5u32);
        let p = random_poly(&mut rng, n, m);
        let real = f(&sup_norm_auto(&p, &ctx.opt)?.value);
        let est = complex_torus_sup_estimate(&ComplexPoly::from_real(&p), if n == 2 { 1024 } else { 128 })?;
        if est > 2f64.powi(m as i32 - 1) * real * (1.0 + 1e-9) {
            bad += 1;
        }
    }
    c.holds("complexification factor", bad == 0, format!("{bad} of 40 exceed 2^(m-1)||P||"));
    Ok(())
}

fn c12(c: &mut Checks, _ctx: &mut Ctx) -> Res<()> {
    for r in [Rational::from(1), Rational::from((4, 3))] {
        let rep = ksz_experiment(2, &r, &[4, 8, 16, 32], 32, 0)?;
        c.abs(&format!("slope r={r}"), rep.fitted_slope, rep.theoretical_slope, 0.2);
        c.note(format!("r={r}: fitted {:.4}, theory {:.4}", rep.fitted_slope, rep.theoretical_slope));
    }
    Ok(())
}

type Criterion = (u32, &'static str, u64, fn(&mut Checks, &mut Ctx) -> Res<()>);

const CRITERIA: &[Criterion] = &[
    (1, "m=2 extremum", 1, c1),
    (2, "m=3 extremum and b1", 1, c2),
    (3, "bivariate sup norms of P4 and P5", 1, c3),
    (4, "P4^n table", 5, c4),
    (5, "P5^n table", 30, c5),
    (6, "P6^n table and lambda roots", 30, c6),
    (7, "P2k roots and P3^4", 120, c7),
    (8, "hypercontractivity aggregate", 60, c8),
    (9, "multilinear forms", 10, c9),
    (10, "contractivity and Parseval", 10, c10),
    (11, "property suites", 120, c11),
    (12, "random polynomial growth", 120, c12),
];

fn main() -> ExitCode {
    let cfg = RunConfig::default();
    let mut ctx = Ctx {
        prec: cfg.precision,
        opt: cfg.optimizer(),
        cfg,
        records: Vec::new(),
    };
    let mut unexpected = 0;
    for &(id, name, budget, run) in CRITERIA {
        let mut c = Checks::default();
        let start = Instant::now();
        let res = run(&mut c, &mut ctx);
        let elapsed = start.elapsed();
        if let Err(e) = &res {
            c.holds("run", false, format!("{}: {e}", e.name()));
        }
        c.holds("runtime", elapsed <= Duration::from_secs(budget), format!("{elapsed:.2?} > {budget} s"));
        let pass = c.failed.is_empty();
        let blocked = BLOCKED.contains(&id);
        let tag = match (pass, blocked) {
            (true, false) => "PASS",
            (false, false) => "FAIL",
            (false, true) => "FAIL (known)",
            (true, true) => "PASS (expected FAIL)",
        };
        println!("{tag:<20} {id:>2}  {name}  [{} checks, {elapsed:.2?}]", c.total);
        for line in &c.failed {
            println!("      - {line}");
        }
        for line in &c.notes {
            println!("        {line}");
        }
        if pass == blocked {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criterion result(s) differ from expectation");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
