//! Subcommand implementations. Each returns the full stdout text and an exit
//! code, so output can be compared byte for byte.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use normsym::allornothing::{
    dichotomy_scan_with_budget, verify_b_full_rank, BCase, DichotomyReport, ScanMode,
};
use normsym::ff::{lemma_factor_split, negacyclic_modulus, EllClass, PrimeField};
use normsym::fixtures::{self, ComparisonReport, PredictedTable};
use normsym::galois::PrimeCase;
use normsym::heuristics::{
    ambiguous_rank_distribution, chevalley_order, decimal4, iwasawa_compatibility,
    monte_carlo_counts, stabilization_tail_bound, string_form, ChevalleyInput, DistributionReport,
    IwasawaSequence, IwasawaVerdict, RamificationProfile, Rational, TailBound,
};
use normsym::Error;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let message = match &e {
            Error::BudgetExceeded { needed, budget } => format!(
                "exhaustive scan needs {needed} rank computations but the budget is {budget}; \
                 rerun with --sampled N or raise --budget"
            ),
            other => other.to_string(),
        };
        let code = match e {
            Error::NonIntegralChevalley(_) => EXIT_FAILED,
            _ => EXIT_USAGE,
        };
        Self { code, message }
    }
}

pub type CmdResult = Result<Outcome, CliError>;

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn emit<T: Serialize>(
    format: Format,
    value: &T,
    text: impl FnOnce() -> String,
    code: u8,
) -> Outcome {
    let stdout = match format {
        Format::Json => json(value),
        Format::Text => text(),
    };
    Outcome { stdout, code }
}

/// `p/q (0.dddd)`.
pub fn fmt_rational(r: &Rational) -> String {
    format!("{r} ({})", decimal4(r))
}

fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c + 1 == row.len() {
                line.push_str(cell);
            } else {
                let pad = widths[c] - cell.chars().count();
                line.push_str(cell);
                line.push_str(&" ".repeat(pad + 2));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------- lemmas

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub ell: u64,
    pub n: u32,
    pub split: bool,
    pub b_fixed: bool,
    pub b_shifted: bool,
}

impl LemmaCheck {
    fn passed(&self) -> bool {
        self.split && self.b_fixed && self.b_shifted
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub checks: Vec<LemmaCheck>,
    /// Primes not congruent to 3 or 5 mod 8.
    pub skipped: Vec<u64>,
    pub failures: usize,
}

pub fn lemmas(ells: &[u64], levels: &[u32], format: Format) -> CmdResult {
    if let Some(&n) = levels.iter().find(|&&n| !(3..=16).contains(&n)) {
        return Err(CliError::usage(format!("--n: level {n} outside 3..16")));
    }
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    for &ell in ells {
        if EllClass::of(ell).is_err() {
            skipped.push(ell);
            continue;
        }
        let field = PrimeField::new(ell)?;
        for &n in levels {
            let (a, b) = lemma_factor_split(ell, n)?;
            let split = a.mul(&b) == negacyclic_modulus(field, 1 << (n - 1));
            let b_fixed = verify_b_full_rank(ell, n, BCase::for_ell(ell, PrimeCase::Fixed)?)?;
            let b_shifted = verify_b_full_rank(ell, n, BCase::for_ell(ell, PrimeCase::Shifted)?)?;
            checks.push(LemmaCheck {
                ell,
                n,
                split,
                b_fixed,
                b_shifted,
            });
        }
    }
    let failures = checks.iter().filter(|c| !c.passed()).count();
    let report = LemmaReport {
        checks,
        skipped,
        failures,
    };
    let code = if failures == 0 { EXIT_OK } else { EXIT_FAILED };
    Ok(emit(format, &report, || render_lemmas(&report), code))
}

fn render_lemmas(report: &LemmaReport) -> String {
    let ok = |b: bool| if b { "ok" } else { "FAILED" };
    let mut out = String::new();
    for c in &report.checks {
        writeln!(
            out,
            "ell={} n={}: split {}, B fixed {}, B shifted {}",
            c.ell,
            c.n,
            ok(c.split),
            ok(c.b_fixed),
            ok(c.b_shifted)
        )
        .unwrap();
    }
    for ell in &report.skipped {
        writeln!(
            out,
            "ell={ell}: out of theorem scope ({} mod 8), skipped",
            ell % 8
        )
        .unwrap();
    }
    if let Some(first) = report.checks.iter().find(|c| !c.passed()) {
        let what = if !first.split {
            "split"
        } else if !first.b_fixed {
            "B fixed"
        } else {
            "B shifted"
        };
        writeln!(out, "first failure: ell={} n={} {what}", first.ell, first.n).unwrap();
    }
    writeln!(
        out,
        "summary: {} passed, {} failed, {} skipped",
        report.checks.len() - report.failures,
        report.failures,
        report.skipped.len()
    )
    .unwrap();
    out
}

// ---------------------------------------------------------- all-or-nothing

const SHOWN_VIOLATIONS: usize = 5;

pub fn all_or_nothing(
    ells: &[u64],
    levels: &[u32],
    cases: &[PrimeCase],
    mode: ScanMode,
    budget: u64,
    format: Format,
) -> CmdResult {
    if let Some(&n) = levels.iter().find(|&&n| n < 2) {
        return Err(CliError::usage(format!("--n: level {n} is below 2")));
    }
    let mut reports = Vec::new();
    for &ell in ells {
        for &n in levels {
            for &case in cases {
                reports.push(dichotomy_scan_with_budget(ell, n, case, mode, budget)?);
            }
        }
    }
    let failed = reports
        .iter()
        .any(|r| r.in_theorem_scope() && !r.violations.is_empty());
    let code = if failed { EXIT_FAILED } else { EXIT_OK };
    Ok(emit(format, &reports, || render_scans(&reports), code))
}

fn render_scans(reports: &[DichotomyReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let mode = match r.seed {
            Some(seed) => format!("{} seed={seed}", r.mode),
            None => r.mode.clone(),
        };
        writeln!(
            out,
            "ell={} n={} case={} mode={}: total {}, rank 0: {}, full rank ({}): {}, violations: {}",
            r.ell,
            r.n,
            r.case,
            mode,
            r.total,
            r.rank_zero,
            r.full_rank_target(),
            r.full_rank,
            r.violations.len()
        )
        .unwrap();
        if r.violations.is_empty() {
            continue;
        }
        if r.in_theorem_scope() {
            writeln!(
                out,
                "  VIOLATION: intermediate ranks for ell = {} mod 8",
                r.ell % 8
            )
            .unwrap();
        } else {
            writeln!(
                out,
                "  boundary case: ell = {} mod 8 is outside the dichotomy, intermediate ranks are expected",
                r.ell % 8
            )
            .unwrap();
        }
        for v in r.violations.iter().take(SHOWN_VIOLATIONS) {
            writeln!(out, "  a = {:?} has rank {}", v.assignment, v.rank).unwrap();
        }
        if r.violations.len() > SHOWN_VIOLATIONS {
            writeln!(out, "  ... {} more", r.violations.len() - SHOWN_VIOLATIONS).unwrap();
        }
    }
    out
}

// ---------------------------------------------------------------- predict

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceCheck {
    pub table: u32,
    pub matches: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mismatched_levels: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictReport {
    pub profile: RamificationProfile,
    pub distributions: Vec<DistributionReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceCheck>,
}

/// Compares rendered rationals with a reference row, string for string.
fn matches_reference(row: &[String], report: &DistributionReport) -> bool {
    let dist = match report.distribution() {
        Ok(d) => d,
        Err(_) => return false,
    };
    let beyond = dist.support().iter().any(|&r| r as usize >= row.len());
    !beyond
        && row
            .iter()
            .enumerate()
            .all(|(rank, expected)| dist.get(rank as u64).to_string() == *expected)
}

fn reference_check(
    reference: &PredictedTable,
    distributions: &[DistributionReport],
) -> Option<ReferenceCheck> {
    let mut compared = false;
    let mut mismatched_levels = Vec::new();
    for d in distributions {
        if let Some(row) = reference.rows.iter().find(|r| r.n == d.n) {
            compared = true;
            if !matches_reference(&row.probs, d) {
                mismatched_levels.push(d.n);
            }
        }
    }
    compared.then_some(ReferenceCheck {
        table: reference.table,
        matches: mismatched_levels.is_empty(),
        mismatched_levels,
    })
}

pub fn predict(profile: RamificationProfile, levels: &[u32], format: Format) -> CmdResult {
    if let Some(&n) = levels.iter().find(|&&n| n > 20) {
        return Err(CliError::usage(format!("--n: level {n} is above 20")));
    }
    let distributions: Vec<_> = levels
        .iter()
        .map(|&n| DistributionReport::new(profile, n, &ambiguous_rank_distribution(n, &profile)))
        .collect();
    let reference = fixtures::tables()
        .predicted_for(&profile)
        .and_then(|t| reference_check(t, &distributions));
    let code = match &reference {
        Some(r) if !r.matches => EXIT_FAILED,
        _ => EXIT_OK,
    };
    let report = PredictReport {
        profile,
        distributions,
        reference,
    };
    Ok(emit(format, &report, || render_predict(&report), code))
}

fn render_predict(report: &PredictReport) -> String {
    let p = &report.profile;
    let mut out = format!("P(rank A_n^Δ = r) for ell={} t={} s={}\n", p.ell, p.t, p.s);
    let max_n = report.distributions.iter().map(|d| d.n).max().unwrap_or(0);
    let max_rank = p.max_rank(max_n);
    let mut rows = vec![std::iter::once("n".to_string())
        .chain((0..=max_rank).map(|r| format!("rank {r}")))
        .collect::<Vec<_>>()];
    for d in &report.distributions {
        let dist = d.distribution().expect("entries were built from rationals");
        let mut row = vec![d.n.to_string()];
        row.extend((0..=max_rank).map(|r| fmt_rational(&dist.get(r))));
        rows.push(row);
    }
    out.push_str(&table(&rows));
    if let Some(r) = &report.reference {
        if r.matches {
            writeln!(out, "reference table {}: match", r.table).unwrap();
        } else {
            writeln!(
                out,
                "reference table {}: MISMATCH at n = {:?}",
                r.table, r.mismatched_levels
            )
            .unwrap();
        }
    }
    out
}

// ---------------------------------------------------------------- compare

pub fn compare(table_id: u32, format: Format) -> CmdResult {
    let report = fixtures::compare(table_id).map_err(|e| CliError::usage(e.to_string()))?;
    Ok(emit(format, &report, || render_compare(&report), EXIT_OK))
}

fn render_compare(report: &ComparisonReport) -> String {
    let p = &report.profile;
    let mut out = format!(
        "table {}: {}\nprofile: ell={} t={} s={}\n",
        report.table, report.caption, p.ell, p.t, p.s
    );
    let mut rows = vec![vec![
        "n".to_string(),
        "fields".to_string(),
        "rank".to_string(),
        "predicted A_n^Δ".to_string(),
        "observed A_n".to_string(),
        "deviation".to_string(),
    ]];
    for row in &report.rows {
        for e in &row.entries {
            rows.push(vec![
                row.n.to_string(),
                row.fields.to_string(),
                e.rank.to_string(),
                fmt_rational(&e.predicted),
                format!("{} ({})", e.observed_count, e.observed_printed),
                decimal4(&e.deviation),
            ]);
        }
    }
    out.push_str(&table(&rows));
    for note in &report.notes {
        writeln!(out, "{note}").unwrap();
    }
    out
}

// --------------------------------------------------------------- simulate

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCount {
    pub rank: u64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub profile: RamificationProfile,
    pub n: u32,
    pub samples: u64,
    pub seed: u64,
    pub counts: Vec<RankCount>,
    pub exact: DistributionReport,
}

pub fn simulate(
    profile: RamificationProfile,
    n: u32,
    samples: u64,
    seed: u64,
    format: Format,
) -> CmdResult {
    if n > 12 {
        return Err(CliError::usage(format!("--n: level {n} is above 12")));
    }
    let counts = monte_carlo_counts(n, &profile, samples, seed)?;
    let exact = ambiguous_rank_distribution(n, &profile);
    let report = SimulationReport {
        profile,
        n,
        samples,
        seed,
        counts: counts
            .iter()
            .map(|(&rank, &count)| RankCount { rank, count })
            .collect(),
        exact: DistributionReport::new(profile, n, &exact),
    };
    Ok(emit(format, &report, || render_simulate(&report), EXIT_OK))
}

fn render_simulate(report: &SimulationReport) -> String {
    let p = &report.profile;
    let mut out = format!(
        "ell={} t={} s={} n={} samples={} seed={}\n",
        p.ell, p.t, p.s, report.n, report.samples, report.seed
    );
    let exact = report
        .exact
        .distribution()
        .expect("entries were built from rationals");
    let ranks: BTreeSet<u64> = report
        .counts
        .iter()
        .map(|c| c.rank)
        .chain(exact.support())
        .collect();
    let mut rows = vec![vec![
        "rank".to_string(),
        "count".to_string(),
        "empirical".to_string(),
        "exact".to_string(),
    ]];
    for rank in ranks {
        let count = report
            .counts
            .iter()
            .find(|c| c.rank == rank)
            .map_or(0, |c| c.count);
        let freq = Rational::new(count.into(), report.samples.into());
        rows.push(vec![
            rank.to_string(),
            count.to_string(),
            decimal4(&freq),
            fmt_rational(&exact.get(rank)),
        ]);
    }
    out.push_str(&table(&rows));
    out
}

// ------------------------------------------------------------------- tail

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailReport {
    pub ell: u64,
    pub t: u32,
    pub start: u32,
    pub terms: u32,
    pub bound: TailBound,
}

pub fn tail(ell: u64, t: u32, start: u32, terms: u32, format: Format) -> CmdResult {
    let bound = stabilization_tail_bound(start, ell, t, terms)?;
    let report = TailReport {
        ell,
        t,
        start,
        terms,
        bound,
    };
    Ok(emit(
        format,
        &report,
        || {
            format!(
                "ell={} t={} levels {}..{}\npartial sum: {}\nremainder bound: {}\n",
                report.ell,
                report.t,
                report.start,
                report.start + report.terms - 1,
                fmt_rational(&report.bound.partial_sum),
                fmt_rational(&report.bound.remainder_bound)
            )
        },
        EXIT_OK,
    ))
}

// -------------------------------------------------------------- chevalley

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChevalleyReport {
    pub input: ChevalleyInput,
    #[serde(with = "string_form")]
    pub order: BigUint,
}

pub fn chevalley(input: ChevalleyInput, format: Format) -> CmdResult {
    let order = chevalley_order(&input)?;
    let report = ChevalleyReport { input, order };
    Ok(emit(
        format,
        &report,
        || {
            format!(
                "ambiguous class number ({}-part): {}\n",
                report.input.ell, report.order
            )
        },
        EXIT_OK,
    ))
}

// ---------------------------------------------------------------- iwasawa

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IwasawaReport {
    pub sequence: IwasawaSequence,
    pub result: IwasawaVerdict,
}

pub fn iwasawa(sequence: IwasawaSequence, format: Format) -> CmdResult {
    let result = iwasawa_compatibility(&sequence)?;
    let code = match result {
        IwasawaVerdict::Compatible { .. } => EXIT_OK,
        IwasawaVerdict::Incompatible { .. } => EXIT_FAILED,
    };
    let report = IwasawaReport { sequence, result };
    Ok(emit(
        format,
        &report,
        || match &report.result {
            IwasawaVerdict::Compatible { mu_min, mu_max } if mu_min == mu_max => {
                format!("compatible: mu = {mu_min}\n")
            }
            IwasawaVerdict::Compatible { mu_min, mu_max } => {
                format!("compatible: {mu_min} <= mu <= {mu_max}\n")
            }
            IwasawaVerdict::Incompatible { reason } => format!("incompatible: {reason}\n"),
        },
        code,
    ))
}
