//! Descriptive corpus statistics and rank correlation.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};
use std::collections::BTreeMap;

use crate::wos::{DocType, DocumentRecord};

/// `round(1000 * num / den)` half away from zero, as integer tenths of a percent.
pub fn percent_tenths(num: u64, den: u64) -> u64 {
    assert!(den > 0);
    let (num, den) = (num as u128, den as u128);
    ((2000 * num + den) / (2 * den)) as u64
}

/// `num / den` rounded half away from zero to tenths.
pub fn ratio_tenths(num: u64, den: u64) -> u64 {
    assert!(den > 0);
    let (num, den) = (num as u128, den as u128);
    ((20 * num + den) / (2 * den)) as u64
}

/// Format tenths as `12.3`.
pub fn format_tenths(t: u64) -> String {
    format!("{}.{}", t / 10, t % 10)
}

/// `48290` -> `48,290`.
pub fn group_thousands(n: u64) -> String {
    let s = n.to_string();
    let mut out = String::new();
    for (i, c) in s.chars().enumerate() {
        if i > 0 && (s.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub labels: Vec<String>,
    pub counts: Vec<u64>,
    /// Percent of the total, rounded to one decimal.
    pub percents: Vec<f64>,
    /// Records without a recognised category; not part of the total.
    pub unknown: u64,
}

impl Distribution {
    pub fn from_counts(labels: Vec<String>, counts: Vec<u64>, unknown: u64) -> Self {
        assert_eq!(labels.len(), counts.len());
        let total: u64 = counts.iter().sum();
        let percents = counts
            .iter()
            .map(|&c| {
                if total > 0 {
                    percent_tenths(c, total) as f64 / 10.0
                } else {
                    0.0
                }
            })
            .collect();
        Distribution {
            labels,
            counts,
            percents,
            unknown,
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn presentable(&self) -> bool {
        self.total() > 0
    }

    pub fn count_of(&self, label: &str) -> Option<u64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.counts[i])
    }

    pub fn percent_of(&self, label: &str) -> Option<f64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.percents[i])
    }

    /// Two-column text table with a total line.
    pub fn render(&self, title: &str) -> String {
        let width = self
            .labels
            .iter()
            .map(|l| l.chars().count())
            .max()
            .unwrap_or(0)
            .max(5);
        let mut out = format!("{title}\n");
        for ((l, &c), &p) in self.labels.iter().zip(&self.counts).zip(&self.percents) {
            out.push_str(&format!(
                "{l:<width$}  {:>9}  {p:>5.1}\n",
                group_thousands(c)
            ));
        }
        out.push_str(&format!(
            "{:<width$}  {:>9}\n",
            "Total",
            group_thousands(self.total())
        ));
        if self.unknown > 0 {
            out.push_str(&format!(
                "{:<width$}  {:>9}\n",
                "Unknown",
                group_thousands(self.unknown)
            ));
        }
        out
    }
}

/// Counts per document type in table order; unrecognised types go to `unknown`.
pub fn doc_type_distribution(records: &[DocumentRecord]) -> Distribution {
    let mut counts = BTreeMap::new();
    let mut unknown = 0;
    for r in records {
        match r.doc_type {
            DocType::Unknown => unknown += 1,
            t => *counts.entry(t).or_insert(0u64) += 1,
        }
    }
    Distribution::from_counts(
        DocType::ALL.iter().map(|t| t.name().to_string()).collect(),
        DocType::ALL
            .iter()
            .map(|t| counts.get(t).copied().unwrap_or(0))
            .collect(),
        unknown,
    )
}

/// Counts per language, largest first; records without a language go to `unknown`.
pub fn language_distribution(records: &[DocumentRecord]) -> Distribution {
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    let mut unknown = 0;
    for r in records {
        match r.language.trim() {
            "" => unknown += 1,
            l => *counts.entry(l).or_insert(0) += 1,
        }
    }
    let mut rows: Vec<(&str, u64)> = counts.into_iter().collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    Distribution::from_counts(
        rows.iter().map(|r| r.0.to_string()).collect(),
        rows.iter().map(|r| r.1).collect(),
        unknown,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearRow {
    pub year: i32,
    pub documents: u64,
    pub cited_references: u64,
    pub citing_documents: u64,
    pub citing_references: u64,
    /// `citing_references / citing_documents` to one decimal.
    pub ratio: Option<f64>,
}

impl YearRow {
    pub fn from_counts(
        year: i32,
        documents: u64,
        cited_references: u64,
        citing_documents: u64,
        citing_references: u64,
    ) -> Self {
        YearRow {
            year,
            documents,
            cited_references,
            citing_documents,
            citing_references,
            ratio: (citing_documents > 0)
                .then(|| ratio_tenths(citing_references, citing_documents) as f64 / 10.0),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct YearTable {
    pub rows: Vec<YearRow>,
    /// Records of either set without a publication year.
    pub undated: u64,
}

impl YearTable {
    pub fn totals(&self) -> [u64; 4] {
        self.rows.iter().fold([0; 4], |t, r| {
            [
                t[0] + r.documents,
                t[1] + r.cited_references,
                t[2] + r.citing_documents,
                t[3] + r.citing_references,
            ]
        })
    }

    pub fn row(&self, year: i32) -> Option<&YearRow> {
        self.rows.iter().find(|r| r.year == year)
    }

    pub fn render(&self) -> String {
        let mut out = String::from("Year  Documents  CitedRefs  CitingDocs  CitingRefs   Ratio\n");
        for r in &self.rows {
            let ratio = r.ratio.map(|v| format!("{v:.1}")).unwrap_or_default();
            out.push_str(&format!(
                "{:<4}  {:>9}  {:>9}  {:>10}  {:>10}  {:>6}\n",
                r.year,
                group_thousands(r.documents),
                group_thousands(r.cited_references),
                group_thousands(r.citing_documents),
                group_thousands(r.citing_references),
                ratio
            ));
        }
        let t = self.totals();
        out.push_str(&format!(
            "{:<4}  {:>9}  {:>9}  {:>10}  {:>10}\n",
            "N",
            group_thousands(t[0]),
            group_thousands(t[1]),
            group_thousands(t[2]),
            group_thousands(t[3])
        ));
        out
    }
}

/// Number of cited references of a record: the CR list, or NR when CR is absent.
pub fn reference_count(r: &DocumentRecord) -> u64 {
    if r.cited_refs.is_empty() {
        r.reported_ref_count.unwrap_or(0) as u64
    } else {
        r.cited_refs.len() as u64
    }
}

pub fn year_table(corpus: &[DocumentRecord], citing: &[DocumentRecord]) -> YearTable {
    let mut acc: BTreeMap<i32, [u64; 4]> = BTreeMap::new();
    let mut undated = 0;
    for (set, offset) in [(corpus, 0), (citing, 2)] {
        for r in set {
            match r.pub_year {
                Some(y) => {
                    let e = acc.entry(y).or_default();
                    e[offset] += 1;
                    e[offset + 1] += reference_count(r);
                }
                None => undated += 1,
            }
        }
    }
    YearTable {
        rows: acc
            .into_iter()
            .map(|(y, c)| YearRow::from_counts(y, c[0], c[1], c[2], c[3]))
            .collect(),
        undated,
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum StatsError {
    #[error("cited items ({cited}) exceed items ({items})")]
    CitedExceedsItems { items: u64, cited: u64 },
    #[error("no items")]
    NoItems,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("at least 3 observations needed, got {0}")]
    TooShort(usize),
    #[error("rank correlation undefined: all values tied in one input")]
    Undefined,
}

/// Fraction of items never cited.
pub fn never_cited_share(items: u64, cited_items: u64) -> Result<f64, StatsError> {
    if items == 0 {
        return Err(StatsError::NoItems);
    }
    if cited_items > items {
        return Err(StatsError::CitedExceedsItems {
            items,
            cited: cited_items,
        });
    }
    Ok((items - cited_items) as f64 / items as f64)
}

/// Average ranks (1-based), ties sharing the mean rank.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spearman {
    pub rho: f64,
    pub t: f64,
    /// Two-sided, from Student's t with n - 2 degrees of freedom.
    pub p_value: f64,
    pub n: usize,
}

pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<Spearman, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 3 {
        return Err(StatsError::TooShort(n));
    }
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let mean = (n as f64 + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mean) * (b - mean);
        sxx += (a - mean) * (a - mean);
        syy += (b - mean) * (b - mean);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::Undefined);
    }
    let rho = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    let df = (n - 2) as f64;
    let (t, p_value) = if rho.abs() >= 1.0 {
        (f64::INFINITY.copysign(rho), 0.0)
    } else {
        let t = rho * (df / (1.0 - rho * rho)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 1");
        (t, 2.0 * (1.0 - dist.cdf(t.abs())))
    };
    Ok(Spearman { rho, t, p_value, n })
}

/// Which rows of two count columns enter the correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowPolicy {
    /// Every row, blanks counted as zero.
    AllRows,
    /// Only rows nonzero in both columns.
    SharedNonzero,
}

pub fn spearman_counts(x: &[u64], y: &[u64], policy: RowPolicy) -> Result<Spearman, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = x
        .iter()
        .zip(y)
        .filter(|(a, b)| policy == RowPolicy::AllRows || (**a > 0 && **b > 0))
        .map(|(&a, &b)| (a as f64, b as f64))
        .unzip();
    spearman_rho(&xs, &ys)
}
