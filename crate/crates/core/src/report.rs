//! Run configuration, table reproduction, CSV/markdown rendering and the
//! command implementations behind the `bh` binary.

use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use rug::{Float, Rational};

use crate::bounds::{
    binomial_identity_holds, bh_lower_bound, complex_lower_nunez, contractivity_dm, eighth_root_27, estimate_4n,
    find_b1, find_lambda01, hyper_aggregate, ksz_experiment, multilinear_bound, p2k_bounds, p4_norm, power_bound,
    search_m2, search_m3, search_m6, stirling_lower, BoundKind, BoundRecord, HyperEstimate, KszReport, PowerCache,
};
use crate::constants::lambda_gap;
use crate::error::{Error, Result};
use crate::families::{make_family, make_form, tm_form, FamilyExtremum, FamilyId, FamilySpec};
use crate::multilinear::{cm_lower_bound, ml_sup_norm_bruteforce};
use crate::numeric::{bh_exponent, format_sig, parse_float, Precision};
use crate::poly::HomogeneousPoly;
use crate::supnorm::{sup_norm_auto, sup_norm_bivariate, OptimizerConfig, SupNormResult};

/// Significant digits of `value` and `mth_root` in CSV output.
pub const CSV_DIGITS: usize = 12;
pub const CSV_HEADER: [&str; 8] = ["kind", "m", "family", "params", "power", "value", "mth_root", "method"];
pub const CACHE_ENV: &str = "BH_CACHE_DIR";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            _ => Err(Error::invalid(format!("unknown output format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub precision: Precision,
    pub tolerance: f64,
    /// `None` lets the thread pool pick.
    pub threads: Option<usize>,
    pub format: OutputFormat,
    pub cache_dir: Option<PathBuf>,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: Precision::default(),
            tolerance: 5e-4,
            threads: None,
            format: OutputFormat::Csv,
            cache_dir: None,
            seed: 0,
            out: None,
        }
    }
}

impl RunConfig {
    /// Apply one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = || Error::invalid(format!("bad value {value:?} for {key}"));
        match key {
            "precision" => self.precision = Precision::from_digits(value.parse().map_err(|_| bad())?)?,
            "tolerance" => {
                let t: f64 = value.parse().map_err(|_| bad())?;
                if !(t > 0.0 && t.is_finite()) {
                    return Err(bad());
                }
                self.tolerance = t;
            }
            "threads" => {
                let t: usize = value.parse().map_err(|_| bad())?;
                self.threads = (t > 0).then_some(t);
            }
            "format" => self.format = value.parse()?,
            "cache" | "cache_dir" => self.cache_dir = Some(PathBuf::from(value)),
            "seed" => self.seed = value.parse().map_err(|_| bad())?,
            "out" => self.out = Some(PathBuf::from(value)),
            _ => return Err(Error::invalid(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Flat `key=value` lines; blank lines and `#` comments are skipped.
    pub fn apply_config_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(i + 1, format!("expected key=value, got {line:?}")))?;
            self.set(k.trim(), v.trim()).map_err(|e| match e {
                Error::InvalidParameter(m) => Error::InvalidParameter(format!("line {}: {m}", i + 1)),
                other => other,
            })?;
        }
        Ok(())
    }

    /// The cache directory, falling back to `BH_CACHE_DIR`.
    pub fn resolved_cache_dir(&self) -> Option<PathBuf> {
        self.cache_dir
            .clone()
            .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
    }

    pub fn cache(&self) -> Result<Option<PowerCache>> {
        self.resolved_cache_dir().map(PowerCache::new).transpose()
    }

    pub fn optimizer(&self) -> OptimizerConfig {
        OptimizerConfig {
            seed: self.seed,
            ..OptimizerConfig::default()
        }
    }
}

pub fn records_to_csv(records: &[BoundRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.kind.name().to_string(),
            r.m.to_string(),
            r.family_name(),
            r.params(),
            r.power.to_string(),
            r.value_string(CSV_DIGITS),
            r.mth_root_string(CSV_DIGITS),
            r.method.clone(),
        ])?;
    }
    finish_csv(w)
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    finish_csv(w)
}

/// Parse records written by `records_to_csv`.
pub fn records_from_csv(text: &str, prec: Precision) -> Result<Vec<BoundRecord>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(Error::parse(1, format!("expected header {}", CSV_HEADER.join(","))));
    }
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let line = i + 2;
        let row = row?;
        let field = |k: usize| row.get(k).unwrap_or("");
        let kind = BoundKind::from_name(field(0)).map_err(|e| Error::parse(line, e.to_string()))?;
        let m: u32 = field(1).parse().map_err(|_| Error::parse(line, "bad m"))?;
        let family = match field(2) {
            "-" | "" => None,
            name => {
                let params: Vec<&str> = field(3).split(';').filter(|s| !s.is_empty()).collect();
                Some(FamilySpec::parse(name, &params).map_err(|e| Error::parse(line, e.to_string()))?)
            }
        };
        let power: u32 = field(4).parse().map_err(|_| Error::parse(line, "bad power"))?;
        let value = parse_float(field(5), prec).ok_or_else(|| Error::parse(line, "bad value"))?;
        let mth_root = parse_float(field(6), prec).ok_or_else(|| Error::parse(line, "bad mth_root"))?;
        out.push(BoundRecord {
            kind,
            m,
            value,
            mth_root,
            family,
            power,
            method: field(7).to_string(),
        });
    }
    Ok(out)
}

/// Markdown table derived from CSV text.
pub fn csv_to_markdown(csv_text: &str) -> Result<String> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(csv_text.as_bytes());
    let rows: Vec<Vec<String>> = rdr
        .records()
        .map(|r| r.map(|r| r.iter().map(|c| c.replace('|', "\\|")).collect()))
        .collect::<std::result::Result<_, _>>()?;
    let mut out = String::new();
    if let Some((head, body)) = rows.split_first() {
        out.push_str(&format!("| {} |\n", head.join(" | ")));
        out.push_str(&format!("|{}\n", "---|".repeat(head.len())));
        for row in body {
            out.push_str(&format!("| {} |\n", row.join(" | ")));
        }
    }
    Ok(out)
}

pub fn render(csv_text: &str, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => Ok(csv_text.to_string()),
        OutputFormat::Markdown => csv_to_markdown(csv_text),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableId {
    One,
    Two,
    Three,
    Summary,
    Comparative,
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(TableId::One),
            "2" => Ok(TableId::Two),
            "3" => Ok(TableId::Three),
            "summary" => Ok(TableId::Summary),
            "comparative" => Ok(TableId::Comparative),
            _ => Err(Error::invalid(format!("unknown table {s:?}; expected 1, 2, 3, summary or comparative"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Assert,
    /// Recomputed and reported; a suspected misprint, so never a failure.
    ReportOnly,
}

/// A printed table entry. `value` is the bound, `root` its m-th root.
#[derive(Clone, Copy, Debug)]
pub struct Printed {
    pub m: u32,
    pub value: Option<&'static str>,
    pub root: Option<&'static str>,
    pub check: Check,
}

const fn val(m: u32, value: &'static str) -> Printed {
    Printed {
        m,
        value: Some(value),
        root: None,
        check: Check::Assert,
    }
}

const fn report_only(m: u32, value: &'static str) -> Printed {
    Printed {
        m,
        value: Some(value),
        root: None,
        check: Check::ReportOnly,
    }
}

const fn both(m: u32, value: Option<&'static str>, root: &'static str) -> Printed {
    Printed {
        m,
        value,
        root: Some(root),
        check: Check::Assert,
    }
}

/// `m = 4n` bounds from `P₄ⁿ`. The `m = 28` entry breaks the monotone trend
/// and is report-only.
pub const TABLE1: &[Printed] = &[
    val(8, "17.4817"),
    val(12, "81.8865"),
    val(16, "395.1718"),
    val(20, "1938.6"),
    val(24, "9610.8"),
    report_only(28, "4799.2"),
    val(32, "2.4093e5"),
    val(36, "1.2145e6"),
    val(40, "6.1418e6"),
    val(80, "7.3769e13"),
    val(120, "9.5448e20"),
    val(160, "1.2730e28"),
    val(200, "1.7261e35"),
    val(240, "2.3650e42"),
    val(280, "3.2638e49"),
    val(320, "4.5279e56"),
    val(360, "6.3068e63"),
    val(400, "8.8123e70"),
];

/// `m = 5n` bounds from `P₅ⁿ`. The `m = 80` and `m = 320` entries disagree
/// with the recomputation by factors of about 700 and exactly 10 and are
/// report-only.
pub const TABLE2: &[Printed] = &[
    val(10, "48.03065"),
    val(15, "399.007"),
    val(20, "3271.54"),
    val(25, "28308.7"),
    val(30, "2.41034e5"),
    val(35, "2.11695e6"),
    val(40, "1.83355e7"),
    val(45, "1.62275e8"),
    val(50, "1.41925e9"),
    report_only(80, "9.90603e11"),
    val(120, "2.83620e22"),
    val(160, "1.19496e30"),
    val(200, "5.11958e37"),
    val(240, "2.21659e45"),
    val(280, "9.66672e52"),
    report_only(320, "4.23805e59"),
    val(360, "1.86553e68"),
    val(400, "8.23785e75"),
];

/// `m = 6n` bounds from `P₆ⁿ`.
pub const TABLE3: &[Printed] = &[
    val(12, "144.057"),
    val(18, "2078.73"),
    val(24, "30958.8"),
    val(30, "4.69119e5"),
    val(36, "7.18661e6"),
    val(42, "1.10924e8"),
    val(48, "1.72150e9"),
    val(54, "2.68289e10"),
    val(60, "4.19492e11"),
    val(120, "4.02749e23"),
    val(150, "4.07526e29"),
    val(180, "4.16733e35"),
    val(210, "4.29250e41"),
    val(240, "4.44489e47"),
    val(270, "4.62131e53"),
    val(300, "4.82001e59"),
    val(360, "5.28156e71"),
    val(420, "5.82897e83"),
];

/// Best bound per small degree.
pub const SUMMARY: &[Printed] = &[
    both(2, Some("1.8374"), "1.3555"),
    both(3, Some("2.5525"), "1.3666"),
    both(4, Some("4.2335"), "1.4344"),
    both(5, Some("6.8359"), "1.4688"),
    both(6, Some("10.7809"), "1.4863"),
    both(8, Some("29.1209"), "1.5241"),
    both(16, None, "1.59527998"),
    both(32, None, "1.65617484"),
];

pub fn printed_values(id: TableId) -> &'static [Printed] {
    match id {
        TableId::One => TABLE1,
        TableId::Two => TABLE2,
        TableId::Three => TABLE3,
        TableId::Summary => SUMMARY,
        TableId::Comparative => &[],
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RowDiff {
    pub m: u32,
    pub quantity: &'static str,
    pub printed: &'static str,
    pub computed: String,
    pub rel_err: f64,
    pub check: Check,
    pub within: bool,
}

impl RowDiff {
    pub fn is_failure(&self) -> bool {
        self.check == Check::Assert && !self.within
    }

    pub fn line(&self) -> String {
        let status = match (self.check, self.within) {
            (Check::ReportOnly, _) => "report-only",
            (Check::Assert, true) => "ok",
            (Check::Assert, false) => "FAIL",
        };
        format!(
            "m={} {} printed={} computed={} rel_err={:.3e} {}",
            self.m, self.quantity, self.printed, self.computed, self.rel_err, status
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableReport {
    pub id: TableId,
    pub records: Vec<BoundRecord>,
    pub diffs: Vec<RowDiff>,
}

impl TableReport {
    pub fn failures(&self) -> usize {
        self.diffs.iter().filter(|d| d.is_failure()).count()
    }
}

fn compare(m: u32, quantity: &'static str, printed: &'static str, computed: &Float, check: Check, tol: f64) -> RowDiff {
    let expect: f64 = printed.parse().expect("embedded literal");
    let got = computed.to_f64();
    let rel_err = (got / expect - 1.0).abs();
    RowDiff {
        m,
        quantity,
        printed,
        computed: format_sig(computed, 8),
        rel_err,
        check,
        within: rel_err <= tol,
    }
}

fn extremum_record(m: u32, e: &FamilyExtremum, method: &str) -> Result<BoundRecord> {
    BoundRecord::new(BoundKind::PolyReal, m, e.bound.clone(), Some(e.family.clone()), 1, method)
}

fn summary_row(m: u32, cfg: &RunConfig) -> Result<BoundRecord> {
    let prec = cfg.precision;
    match m {
        2 => extremum_record(2, &search_m2(prec)?, "golden-section"),
        3 => extremum_record(3, &search_m3(prec)?, "closed-form"),
        4 => p2k_bounds(2, prec),
        5 => power_bound(&FamilySpec::new(FamilyId::P5), 1, prec, &cfg.optimizer(), None),
        6 => extremum_record(6, &search_m6(prec)?, "closed-form"),
        8 => p2k_bounds(3, prec),
        16 => p2k_bounds(4, prec),
        32 => p2k_bounds(5, prec),
        _ => Err(Error::invalid(format!("no summary row for m = {m}"))),
    }
}

/// Compute every row of a numeric table, in parallel, in row order.
pub fn table_records(id: TableId, cfg: &RunConfig) -> Result<TableReport> {
    let printed = printed_values(id);
    if printed.is_empty() {
        return Err(Error::invalid("the comparative tables have no numeric rows"));
    }
    let cache = cfg.cache()?;
    let opt = cfg.optimizer();
    let prec = cfg.precision;
    let records = printed
        .par_iter()
        .map(|row| match id {
            TableId::One => estimate_4n(row.m / 4, prec).map(|r| r.0),
            TableId::Two => power_bound(&FamilySpec::new(FamilyId::P5), row.m / 5, prec, &opt, cache.as_ref()),
            TableId::Three => power_bound(&FamilySpec::new(FamilyId::P6), row.m / 6, prec, &opt, cache.as_ref()),
            TableId::Summary => summary_row(row.m, cfg),
            TableId::Comparative => unreachable!(),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut diffs = Vec::new();
    for (row, rec) in printed.iter().zip(&records) {
        if let Some(v) = row.value {
            diffs.push(compare(row.m, "value", v, &rec.value, row.check, cfg.tolerance));
        }
        if let Some(r) = row.root {
            diffs.push(compare(row.m, "mth_root", r, &rec.mth_root, row.check, cfg.tolerance));
        }
    }
    Ok(TableReport { id, records, diffs })
}

/// The two comparative tables, as `table,property,real,complex,note` rows.
/// Cited constants appear as printed; rows this crate recomputes say so in
/// the note.
pub fn comparative_rows(prec: Precision) -> Result<Vec<Vec<String>>> {
    let floor = format_sig(&eighth_root_27(prec), 6);
    let t2 = multilinear_bound(&tm_form(2)?, Some(FamilySpec::new(FamilyId::T2)), prec)?;
    let row = |t: &str, p: &str, r: &str, c: &str, note: String| {
        vec![t.to_string(), p.to_string(), r.to_string(), c.to_string(), note]
    };
    Ok(vec![
        row("polynomials", "optimal exponent", "2m/(m+1)", "2m/(m+1)", "cited".into()),
        row(
            "polynomials",
            "optimal extra factor for r in [1, 2m/(m+1)]",
            "n^(m/r-(m+1)/2)",
            "n^(m/r-(m+1)/2)",
            "cited; slope checked by the ksz experiment".into(),
        ),
        row("polynomials", "hypercontractivity", "yes", "yes", "cited".into()),
        row("polynomials", "optimality of the hypercontractivity", "yes", "?", "cited".into()),
        row("polynomials", "contractivity in K^n", "no", "yes", "cited; complex side checked by contractivity".into()),
        row(
            "polynomials",
            "H_inf",
            "in [1.50, 2.83]",
            "<= sqrt(2)",
            format!("cited; real lower end recomputed as 27^(1/8) = {floor}"),
        ),
        row("polynomials", "rho_K", "inf", "2", "cited definitional constant".into()),
        row("multilinear forms", "optimal exponent", "2m/(m+1)", "2m/(m+1)", "cited".into()),
        row(
            "multilinear forms",
            "optimal extra factor for r in [1, 2m/(m+1)]",
            "n^(m/r-(m+1)/2)",
            "n^(m/r-(m+1)/2)",
            "cited".into(),
        ),
        row("multilinear forms", "mu_K", "2", "<= 2", "cited definitional constant".into()),
        row(
            "multilinear forms",
            "C_K,m upper",
            "< 1.65(n-1)^0.53 + 0.13",
            "< 1.41(n-1)^0.31 - 0.04",
            "cited".into(),
        ),
        row(
            "multilinear forms",
            "C_K,m lower",
            ">= 2^(1-1/m)",
            ">= 1",
            "real side recomputed from T_m".into(),
        ),
        row(
            "multilinear forms",
            "C_K,2",
            "sqrt(2)",
            "<= 2/sqrt(pi)",
            format!("real side recomputed from T_2 = {}", t2.value_string(12)),
        ),
    ])
}

/// Output of one command: a CSV payload, human-readable notes, and the
/// number of failed checks.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CommandOutput {
    pub csv: String,
    pub notes: Vec<String>,
    pub failures: usize,
}

pub fn cmd_table(id: TableId, cfg: &RunConfig) -> Result<CommandOutput> {
    if id == TableId::Comparative {
        let rows = comparative_rows(cfg.precision)?;
        return Ok(CommandOutput {
            csv: csv_table(&["table", "property", "real", "complex", "note"], &rows)?,
            ..CommandOutput::default()
        });
    }
    let report = table_records(id, cfg)?;
    Ok(CommandOutput {
        csv: records_to_csv(&report.records)?,
        notes: report.diffs.iter().map(RowDiff::line).collect(),
        failures: report.failures(),
    })
}

fn describe(r: &BoundRecord) -> String {
    let what = match r.kind {
        BoundKind::PolyReal => "D_R",
        BoundKind::PolyComplex => "D_C",
        BoundKind::Multilinear => "C_R",
    };
    format!("{what},{} >= {} = ({})^{}", r.m, r.value_string(8), r.mth_root_string(8), r.m)
}

pub fn cmd_bound(spec: &FamilySpec, power: u32, cfg: &RunConfig) -> Result<CommandOutput> {
    let record = if spec.id.is_multilinear() {
        if power != 1 {
            return Err(Error::invalid("multilinear families take power 1"));
        }
        multilinear_bound(&make_form(spec)?, Some(spec.clone()), cfg.precision)?
    } else {
        power_bound(spec, power, cfg.precision, &cfg.optimizer(), cfg.cache()?.as_ref())?
    };
    Ok(CommandOutput {
        csv: records_to_csv(std::slice::from_ref(&record))?,
        notes: vec![describe(&record)],
        failures: 0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchTarget {
    M2,
    M3,
    M6,
}

impl FromStr for SearchTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "m2" => Ok(SearchTarget::M2),
            "m3" => Ok(SearchTarget::M3),
            "m6" => Ok(SearchTarget::M6),
            _ => Err(Error::invalid(format!("unknown search target {s:?}; expected m2, m3 or m6"))),
        }
    }
}

pub fn cmd_search(target: SearchTarget, cfg: &RunConfig) -> Result<CommandOutput> {
    let prec = cfg.precision;
    let (record, e, name) = match target {
        SearchTarget::M2 => {
            let e = search_m2(prec)?;
            (extremum_record(2, &e, "golden-section")?, e, "t*")
        }
        SearchTarget::M3 => {
            let e = search_m3(prec)?;
            (extremum_record(3, &e, "closed-form")?, e, "b1")
        }
        SearchTarget::M6 => {
            let e = search_m6(prec)?;
            (extremum_record(6, &e, "closed-form")?, e, "lambda0")
        }
    };
    let mut notes = vec![format!("{name} = {}", format_sig(&e.parameter, 16)), describe(&record)];
    if target == SearchTarget::M6 {
        let (_, l1) = find_lambda01(prec)?;
        notes.insert(1, format!("lambda1 = {}", format_sig(&l1, 16)));
    }
    Ok(CommandOutput {
        csv: records_to_csv(std::slice::from_ref(&record))?,
        notes,
        failures: 0,
    })
}

/// Sup norm of a serialized polynomial.
pub fn cmd_supnorm(text: &str, cfg: &RunConfig) -> Result<CommandOutput> {
    let p = HomogeneousPoly::deserialize(text)?;
    let norm = sup_norm_auto(&p, &cfg.optimizer())?;
    let point = norm
        .maximizer
        .iter()
        .map(|x| format!("{x:.17e}"))
        .collect::<Vec<_>>()
        .join(";");
    let csv = csv_table(
        &["n", "m", "value", "certified_lower", "method", "maximizer"],
        &[vec![
            p.n().to_string(),
            p.degree().to_string(),
            format_sig(&norm.value, CSV_DIGITS),
            format_sig(&norm.certified_lower, CSV_DIGITS),
            norm.method.name().to_string(),
            point,
        ]],
    )?;
    let mut notes = vec![format!("||P|| = {}", format_sig(&norm.value, 12))];
    if norm.method.is_heuristic() {
        notes.push("multistart estimate: a certified lower value, not a proven maximum".into());
    }
    if !p.is_zero() {
        notes.push(describe(&bh_lower_bound(&p, &norm)?));
    }
    Ok(CommandOutput { csv, notes, failures: 0 })
}

pub fn cmd_hyper(csv_text: &str, cfg: &RunConfig) -> Result<CommandOutput> {
    let records = records_from_csv(csv_text, cfg.precision)?;
    let h: HyperEstimate = hyper_aggregate(&records)?;
    let evidence = h
        .h_inf_lower_evidence
        .as_ref()
        .map_or_else(|| "none".to_string(), |v| format_sig(v, CSV_DIGITS));
    let csv = csv_table(
        &["quantity", "value", "records"],
        &[
            vec!["h_a_lower".into(), format_sig(&h.h_a_lower, CSV_DIGITS), records.len().to_string()],
            vec!["h_inf_lower_evidence".into(), evidence, records.len().to_string()],
            vec![
                "h_inf_proved_floor".into(),
                format_sig(&eighth_root_27(cfg.precision), CSV_DIGITS),
                "0".into(),
            ],
        ],
    )?;
    Ok(CommandOutput {
        csv,
        notes: vec!["h_inf_lower_evidence is the largest tail m-th root, evidence for a limsup only".into()],
        failures: 0,
    })
}

pub fn cmd_multilinear(m: u32, cfg: &RunConfig) -> Result<CommandOutput> {
    let spec = FamilySpec::new(FamilyId::Tm).with("m", m);
    let record = multilinear_bound(&make_form(&spec)?, Some(spec), cfg.precision)?;
    let expect = cm_lower_bound(m, &bh_exponent(m))?;
    Ok(CommandOutput {
        csv: records_to_csv(std::slice::from_ref(&record))?,
        notes: vec![describe(&record), format!("2^(1-1/m) = {}", format_sig(&expect, 12))],
        failures: 0,
    })
}

pub fn cmd_contractivity(n: u32, m: u32, cfg: &RunConfig) -> Result<CommandOutput> {
    let v = contractivity_dm(n, m, cfg.precision)?;
    let csv = csv_table(&["n", "m", "d_m"], &[vec![n.to_string(), m.to_string(), format_sig(&v, CSV_DIGITS)]])?;
    Ok(CommandOutput {
        csv,
        notes: vec![format!("binom({},{})^(1/{}) = {}", m + n - 1, n - 1, 2 * m, format_sig(&v, 12))],
        failures: 0,
    })
}

/// Parse `4/3`, `1.5` or `1` as an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::invalid(format!("{s:?} is not a rational number"));
    if let Some(crate::poly::Coefficient::Rat(r)) = crate::poly::Coefficient::decimal_rational(s) {
        return Ok(r);
    }
    Rational::from_str_radix(s.trim(), 10).map_err(|_| bad())
}

pub fn cmd_ksz(m: u32, r: &Rational, n_list: &[usize], trials: usize, cfg: &RunConfig) -> Result<CommandOutput> {
    let rep: KszReport = ksz_experiment(m, r, n_list, trials, cfg.seed)?;
    let rows: Vec<Vec<String>> = rep
        .points
        .iter()
        .map(|p| vec![p.n.to_string(), format!("{:.12e}", p.mean_log_ratio)])
        .collect();
    Ok(CommandOutput {
        csv: csv_table(&["n", "mean_log_ratio"], &rows)?,
        notes: vec![format!(
            "m={} r={} fitted slope = {:.6} theoretical m/r-(m+1)/2 = {:.6}",
            rep.m, rep.r, rep.fitted_slope, rep.theoretical_slope
        )],
        failures: 0,
    })
}

/// One named invariant check.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> VerifyCheck {
    match f() {
        Ok((passed, detail)) => VerifyCheck { name, passed, detail },
        Err(e) => VerifyCheck {
            name,
            passed: false,
            detail: format!("{}: {e}", e.name()),
        },
    }
}

/// The invariant suite run by `bh verify`.
pub fn verify_suite(cfg: &RunConfig) -> Vec<VerifyCheck> {
    let prec = cfg.precision;
    let bits = prec.bits();
    let opt = cfg.optimizer();
    vec![
        check("binomial-identity", || {
            Ok(((0..=200).all(binomial_identity_holds), "n <= 200".into()))
        }),
        check("estimate-4n-monotone", || {
            let roots = (1..=100)
                .map(|n| estimate_4n(n, prec).map(|r| r.0.mth_root))
                .collect::<Result<Vec<_>>>()?;
            Ok((roots.windows(2).all(|w| w[0] < w[1]), "n in 1..=100".into()))
        }),
        check("b1-closed-vs-root", || {
            let b1 = find_b1(prec)?;
            Ok(((b1.to_f64() + 1.6692).abs() < 5e-4, format_sig(&b1, 16)))
        }),
        check("lambda-roots", || {
            let (l0, l1) = find_lambda01(prec)?;
            let tiny = Float::with_val(bits, Float::i_exp(1, -(bits as i32) / 2));
            let ok = lambda_gap(&l0).abs() < tiny && lambda_gap(&l1).abs() < tiny;
            Ok((ok, format!("{} {}", format_sig(&l0, 12), format_sig(&l1, 12))))
        }),
        check("p4-norm", || {
            let p = make_family(&FamilySpec::new(FamilyId::P4), prec)?;
            let n = sup_norm_bivariate(&p, &opt)?;
            let rel = (n.value.to_f64() / p4_norm(bits).to_f64() - 1.0).abs();
            Ok((rel < 1e-10, format!("rel err {rel:.2e}")))
        }),
        check("pipeline-power-one", || {
            let spec = FamilySpec::new(FamilyId::P5);
            let p = make_family(&spec, prec)?;
            let direct = bh_lower_bound(&p, &crate::families::family_sup_norm(&spec, &p, &opt)?)?;
            let piped = power_bound(&spec, 1, prec, &opt, None)?;
            Ok((direct.value == piped.value, direct.value_string(12)))
        }),
        check("tm-invariants", || {
            for m in 2..=3u32 {
                let t = tm_form(m)?;
                let ones = t.coefficients().all(|(_, c)| c.to_f64().abs() == 1.0);
                let norm: SupNormResult = ml_sup_norm_bruteforce(&t, false)?;
                if !ones || t.len() != 4usize.pow(m - 1) || norm.value != (1u32 << (m - 1)) {
                    return Ok((false, format!("m = {m}")));
                }
            }
            Ok((true, "m = 2, 3".into()))
        }),
        check("cm-lower-bound", || {
            let mut worst = 0f64;
            for m in 2..=10u32 {
                let v = cm_lower_bound(m, &bh_exponent(m))?.to_f64();
                worst = worst.max((v - 2f64.powf(1.0 - 1.0 / m as f64)).abs());
            }
            Ok((worst < 1e-12, format!("max err {worst:.2e}")))
        }),
        check("contractivity-decreasing", || {
            let mut dec = true;
            for n in 2..=4u32 {
                let vals = (2..=512u32).map(|m| contractivity_dm(n, m, prec)).collect::<Result<Vec<_>>>()?;
                dec &= vals.windows(2).all(|w| w[1] < w[0]) && vals.iter().all(|v| *v > 1);
            }
            let at256 = contractivity_dm(3, 256, prec)?;
            let at512 = contractivity_dm(3, 512, prec)?;
            Ok((dec, format!("n=3: {} at m=256, {} at m=512", format_sig(&at256, 8), format_sig(&at512, 8))))
        }),
        check("nunez-above-one", || {
            let ok = [2u32, 3, 10, 100, 1000, 10_000]
                .iter()
                .map(|&m| complex_lower_nunez(m, prec))
                .collect::<Result<Vec<_>>>()?
                .iter()
                .all(|v| *v > 1);
            Ok((ok, "m up to 10^4".into()))
        }),
        check("stirling-floor", || {
            let s = stirling_lower(400, prec)?;
            let (e, _) = estimate_4n(100, prec)?;
            let ratio = Float::with_val(bits, &e.value / &s).to_f64();
            Ok(((1.0..=1.05).contains(&ratio), format!("ratio {ratio:.6}")))
        }),
    ]
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<CommandOutput> {
    let checks = verify_suite(cfg);
    let rows: Vec<Vec<String>> = checks
        .iter()
        .map(|c| {
            vec![
                c.name.to_string(),
                if c.passed { "pass" } else { "fail" }.to_string(),
                c.detail.clone(),
            ]
        })
        .collect();
    Ok(CommandOutput {
        csv: csv_table(&["check", "status", "detail"], &rows)?,
        notes: Vec::new(),
        failures: checks.iter().filter(|c| !c.passed).count(),
    })
}

/// Read a whole file, mapping I/O failures to the crate error.
pub fn read_input(path: &std::path::Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}
