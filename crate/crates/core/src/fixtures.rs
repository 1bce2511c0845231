//! Embedded reference tables and the predicted-versus-observed comparison.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heuristics::{
    ambiguous_rank_distribution, parse_decimal, rational, string_form, RamificationProfile,
    Rational,
};

const TABLES_TOML: &str = include_str!("../data/tables.toml");

/// Printed proportions may be off by this much in total after rounding.
const ROUNDING_SLACK: (i64, i64) = (1, 1000);

pub const NOTE: &str = "NOTE: predicted probabilities concern rank A_n^Δ, the ambiguous \
part of the class group; observed counts are for rank A_n itself. The gap between them \
is attributed to heuristics for ambiguous and strongly ambiguous ideals, which are out \
of scope here.";

pub const THREE_MOD_8_NOTE: &str = "NOTE: for a ramified prime congruent to 3 mod 8 the \
model does not claim to explain the observed ranks of A_n for n >= 1; only A_n^Δ is \
modelled.";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedRow {
    pub n: u32,
    pub probs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedTable {
    pub table: u32,
    pub caption: String,
    pub ell: u64,
    pub t: u32,
    pub s: u32,
    pub rows: Vec<PredictedRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservedRow {
    pub n: u32,
    pub fields: u64,
    pub counts: Vec<u64>,
    pub proportions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservedTable {
    pub table: u32,
    pub caption: String,
    pub ell: u64,
    pub t: u32,
    pub s: u32,
    pub rows: Vec<ObservedRow>,
}

impl PredictedTable {
    pub fn profile(&self) -> Result<RamificationProfile> {
        RamificationProfile::new(self.ell, self.t, self.s)
    }
}

impl ObservedTable {
    pub fn profile(&self) -> Result<RamificationProfile> {
        RamificationProfile::new(self.ell, self.t, self.s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tables {
    pub predicted: Vec<PredictedTable>,
    pub observed: Vec<ObservedTable>,
}

impl Tables {
    pub fn parse(src: &str) -> Result<Self> {
        let tables: Tables = toml::from_str(src).map_err(|e| Error::Fixture(e.to_string()))?;
        tables.validate()?;
        Ok(tables)
    }

    fn validate(&self) -> Result<()> {
        for table in &self.predicted {
            for row in &table.rows {
                let mut sum = Rational::zero();
                for p in &row.probs {
                    sum += p.parse::<Rational>().map_err(|_| {
                        Error::Fixture(format!("table {}: bad rational {p:?}", table.table))
                    })?;
                }
                if sum != rational(1, 1) {
                    return Err(Error::Fixture(format!(
                        "table {} row n={} sums to {sum}",
                        table.table, row.n
                    )));
                }
            }
        }
        let slack = rational(ROUNDING_SLACK.0, ROUNDING_SLACK.1);
        for table in &self.observed {
            for row in &table.rows {
                if row.counts.len() != row.proportions.len() {
                    return Err(Error::Fixture(format!(
                        "table {} row n={}: {} counts but {} proportions",
                        table.table,
                        row.n,
                        row.counts.len(),
                        row.proportions.len()
                    )));
                }
                if row.counts.iter().sum::<u64>() != row.fields {
                    return Err(Error::Fixture(format!(
                        "table {} row n={}: counts do not add up to {}",
                        table.table, row.n, row.fields
                    )));
                }
                let mut sum = Rational::zero();
                for p in &row.proportions {
                    sum += parse_decimal(p)?;
                }
                if (sum - rational(1, 1)).abs() > slack {
                    return Err(Error::Fixture(format!(
                        "table {} row n={}: proportions do not sum to 1",
                        table.table, row.n
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn predicted(&self, table: u32) -> Result<&PredictedTable> {
        self.predicted
            .iter()
            .find(|t| t.table == table)
            .ok_or_else(|| Error::Fixture(format!("no predicted table {table}")))
    }

    pub fn observed(&self, table: u32) -> Result<&ObservedTable> {
        self.observed
            .iter()
            .find(|t| t.table == table)
            .ok_or_else(|| Error::Fixture(format!("no observed table {table}")))
    }

    /// The predicted table whose profile matches `profile`, if any.
    pub fn predicted_for(&self, profile: &RamificationProfile) -> Option<&PredictedTable> {
        self.predicted
            .iter()
            .find(|t| t.ell == profile.ell && t.t == profile.t && t.s == profile.s)
    }
}

/// The tables compiled into the library.
pub fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| Tables::parse(TABLES_TOML).expect("embedded tables are valid"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonEntry {
    pub rank: u64,
    #[serde(with = "string_form")]
    pub predicted: Rational,
    pub observed_count: u64,
    /// Proportion as printed in the source table.
    pub observed_printed: String,
    #[serde(with = "string_form")]
    pub observed: Rational,
    /// `|predicted − count/fields|`.
    #[serde(with = "string_form")]
    pub deviation: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub n: u32,
    pub fields: u64,
    pub entries: Vec<ComparisonEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub table: u32,
    pub caption: String,
    pub profile: RamificationProfile,
    pub rows: Vec<ComparisonRow>,
    pub notes: Vec<String>,
}

impl ComparisonReport {
    pub fn entry(&self, n: u32, rank: u64) -> Option<&ComparisonEntry> {
        self.rows
            .iter()
            .find(|r| r.n == n)?
            .entries
            .iter()
            .find(|e| e.rank == rank)
    }
}

/// Lines up the model's `A_n^Δ` prediction against an observed table.
pub fn compare(table: u32) -> Result<ComparisonReport> {
    compare_with(tables(), table)
}

pub fn compare_with(tables: &Tables, table: u32) -> Result<ComparisonReport> {
    let observed = tables.observed(table)?;
    let profile = observed.profile()?;
    let mut rows = Vec::new();
    for row in &observed.rows {
        let predicted = ambiguous_rank_distribution(row.n, &profile);
        let entries = row
            .counts
            .iter()
            .zip(&row.proportions)
            .enumerate()
            .map(|(rank, (&count, printed))| {
                let rank = rank as u64;
                let p = predicted.get(rank);
                let obs = Rational::new(BigInt::from(count), BigInt::from(row.fields));
                ComparisonEntry {
                    rank,
                    deviation: (&p - &obs).abs(),
                    predicted: p,
                    observed_count: count,
                    observed_printed: printed.clone(),
                    observed: obs,
                }
            })
            .collect();
        rows.push(ComparisonRow {
            n: row.n,
            fields: row.fields,
            entries,
        });
    }
    let mut notes = vec![NOTE.to_string()];
    if profile.s < profile.t {
        notes.push(THREE_MOD_8_NOTE.to_string());
    }
    Ok(ComparisonReport {
        table,
        caption: observed.caption.clone(),
        profile,
        rows,
        notes,
    })
}
