//! Aggregation of cited references into journal-level matrices.

mod doc_journal;
mod environment;
mod reports;

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

use crate::registry::{Resolver, SourceList};
use crate::wos::DocumentRecord;

pub use doc_journal::{doc_journal_matrix, doc_journal_matrix_with, DocJournalMatrix};
pub use environment::{
    cited_environment, citing_environment, min_count_for_inclusion, topic_environment,
    CitationEnvironment, Direction, EnvError, ProfileKind,
};
pub use reports::{fuzzy_gain, sparsity_report, FuzzyGain, SparsityReport};

#[derive(Debug, Error, PartialEq)]
pub enum MatrixError {
    #[error("matrix invariant violated: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    pub fuzzy: bool,
    pub citable_only: bool,
    /// Only references carrying author, year and source are aggregated.
    pub complete_only: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            fuzzy: true,
            citable_only: false,
            complete_only: true,
        }
    }
}

/// Aggregated journal-journal citations: the quasi journal citation report.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CitationMatrix {
    pub year_label: String,
    /// (citing, cited) -> count, nonzero cells only.
    pub cells: BTreeMap<(String, String), u64>,
    pub citing_totals: BTreeMap<String, u64>,
    pub cited_totals: BTreeMap<String, u64>,
    pub self_citations: BTreeMap<String, u64>,
    /// Preferred abbreviation per key.
    pub displays: BTreeMap<String, String>,
    pub total_relations: u64,
    pub unique_pairs: u64,
    pub unresolved_refs: u64,
    pub incomplete_refs: u64,
    /// Records whose own journal did not resolve, or filtered by type.
    pub skipped_records: u64,
}

/// Marginals and counts written next to the matrix CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixSummary {
    pub year_label: String,
    pub total_relations: u64,
    pub unique_pairs: u64,
    pub unresolved_refs: u64,
    pub incomplete_refs: u64,
    pub skipped_records: u64,
    pub citing_totals: BTreeMap<String, u64>,
    pub cited_totals: BTreeMap<String, u64>,
    pub self_citations: BTreeMap<String, u64>,
    pub displays: BTreeMap<String, String>,
}

fn year_label(records: &[DocumentRecord]) -> String {
    let years = records.iter().filter_map(|r| r.pub_year);
    match (years.clone().min(), years.max()) {
        (Some(a), Some(b)) if a == b => a.to_string(),
        (Some(a), Some(b)) => format!("{a}-{b}"),
        _ => String::new(),
    }
}

fn note_display(displays: &mut BTreeMap<String, String>, key: &str, display: &str) {
    match displays.get(key) {
        Some(d) if d.chars().count() > display.chars().count() => {}
        Some(d) if d.chars().count() == display.chars().count() && d.as_str() <= display => {}
        _ => {
            displays.insert(key.to_string(), display.to_string());
        }
    }
}

impl CitationMatrix {
    /// Build from cells, deriving marginals and counts.
    pub fn from_cells(
        year_label: impl Into<String>,
        cells: BTreeMap<(String, String), u64>,
        displays: BTreeMap<String, String>,
    ) -> Self {
        let mut m = CitationMatrix {
            year_label: year_label.into(),
            cells: cells.into_iter().filter(|(_, v)| *v > 0).collect(),
            displays,
            ..Default::default()
        };
        m.recompute();
        m
    }

    fn recompute(&mut self) {
        self.citing_totals.clear();
        self.cited_totals.clear();
        self.self_citations.clear();
        for ((from, to), &n) in &self.cells {
            *self.citing_totals.entry(from.clone()).or_default() += n;
            *self.cited_totals.entry(to.clone()).or_default() += n;
            if from == to {
                self.self_citations.insert(from.clone(), n);
            }
        }
        self.total_relations = self.cells.values().sum();
        self.unique_pairs = self.cells.len() as u64;
        for key in self.citing_totals.keys().chain(self.cited_totals.keys()) {
            if !self.displays.contains_key(key) {
                self.displays.insert(key.clone(), key.clone());
            }
        }
    }

    pub fn get(&self, citing: &str, cited: &str) -> u64 {
        self.cells
            .get(&(citing.to_string(), cited.to_string()))
            .copied()
            .unwrap_or(0)
    }

    pub fn self_citations_of(&self, key: &str) -> u64 {
        self.self_citations.get(key).copied().unwrap_or(0)
    }

    pub fn cited_total(&self, key: &str) -> u64 {
        self.cited_totals.get(key).copied().unwrap_or(0)
    }

    pub fn citing_total(&self, key: &str) -> u64 {
        self.citing_totals.get(key).copied().unwrap_or(0)
    }

    pub fn display(&self, key: &str) -> String {
        self.displays
            .get(key)
            .cloned()
            .unwrap_or_else(|| key.to_string())
    }

    /// All journals that cite or are cited.
    pub fn journals(&self) -> Vec<String> {
        let mut keys: Vec<String> = self
            .citing_totals
            .keys()
            .chain(self.cited_totals.keys())
            .cloned()
            .collect();
        keys.sort();
        keys.dedup();
        keys
    }

    /// Merge another partial matrix; aggregation is commutative and associative.
    pub fn merge(mut self, other: CitationMatrix) -> CitationMatrix {
        for (k, v) in other.cells {
            *self.cells.entry(k).or_default() += v;
        }
        for (k, d) in &other.displays {
            note_display(&mut self.displays, k, d);
        }
        self.unresolved_refs += other.unresolved_refs;
        self.incomplete_refs += other.incomplete_refs;
        self.skipped_records += other.skipped_records;
        self.year_label = merge_labels(&self.year_label, &other.year_label);
        self.recompute();
        self
    }

    pub fn check_invariants(&self) -> Result<(), MatrixError> {
        let fail = |m: String| Err(MatrixError::Inconsistent(m));
        if self.total_relations != self.cells.values().sum::<u64>() {
            return fail("total_relations differs from cell sum".into());
        }
        if self.unique_pairs != self.cells.values().filter(|&&v| v > 0).count() as u64 {
            return fail("unique_pairs differs from nonzero cells".into());
        }
        let mut citing: BTreeMap<&str, u64> = BTreeMap::new();
        let mut cited: BTreeMap<&str, u64> = BTreeMap::new();
        for ((a, b), &n) in &self.cells {
            *citing.entry(a).or_default() += n;
            *cited.entry(b).or_default() += n;
            if a == b && self.self_citations_of(a) != n {
                return fail(format!("self-citations of {a}"));
            }
        }
        for (k, &n) in &self.self_citations {
            if self.get(k, k) != n {
                return fail(format!("self-citations of {k}"));
            }
        }
        let same = |x: &BTreeMap<&str, u64>, y: &BTreeMap<String, u64>| {
            x.len() == y.len() && x.iter().all(|(k, v)| y.get(*k) == Some(v))
        };
        if !same(&citing, &self.citing_totals) {
            return fail("citing totals".into());
        }
        if !same(&cited, &self.cited_totals) {
            return fail("cited totals".into());
        }
        Ok(())
    }

    pub fn summary(&self) -> MatrixSummary {
        MatrixSummary {
            year_label: self.year_label.clone(),
            total_relations: self.total_relations,
            unique_pairs: self.unique_pairs,
            unresolved_refs: self.unresolved_refs,
            incomplete_refs: self.incomplete_refs,
            skipped_records: self.skipped_records,
            citing_totals: self.citing_totals.clone(),
            cited_totals: self.cited_totals.clone(),
            self_citations: self.self_citations.clone(),
            displays: self.displays.clone(),
        }
    }

    /// Restore counters and labels from a persisted summary.
    pub fn apply_summary(&mut self, s: &MatrixSummary) {
        self.year_label = s.year_label.clone();
        self.unresolved_refs = s.unresolved_refs;
        self.incomplete_refs = s.incomplete_refs;
        self.skipped_records = s.skipped_records;
        for (k, d) in &s.displays {
            self.displays.insert(k.clone(), d.clone());
        }
    }
}

fn merge_labels(a: &str, b: &str) -> String {
    let parse = |s: &str| -> Option<(i32, i32)> {
        let mut it = s.splitn(2, '-');
        let lo: i32 = it.next()?.parse().ok()?;
        let hi: i32 = it.next().map_or(Some(lo), |h| h.parse().ok())?;
        Some((lo, hi))
    };
    match (parse(a), parse(b)) {
        (Some((a0, a1)), Some((b0, b1))) => {
            let (lo, hi) = (a0.min(b0), a1.max(b1));
            if lo == hi {
                lo.to_string()
            } else {
                format!("{lo}-{hi}")
            }
        }
        (Some(_), None) => a.to_string(),
        (None, _) => b.to_string(),
    }
}

pub fn build_quasi_jcr(
    records: &[DocumentRecord],
    list: &SourceList,
    fuzzy: bool,
) -> CitationMatrix {
    build_quasi_jcr_with(
        records,
        list,
        &BuildOptions {
            fuzzy,
            ..Default::default()
        },
    )
}

/// Count, for every record whose journal is a list member, each cited
/// reference whose source abbreviation resolves against the same list.
pub fn build_quasi_jcr_with(
    records: &[DocumentRecord],
    list: &SourceList,
    opts: &BuildOptions,
) -> CitationMatrix {
    let resolver = Resolver::List {
        list,
        fuzzy: opts.fuzzy,
    };
    let mut cells: BTreeMap<(String, String), u64> = BTreeMap::new();
    let mut displays = BTreeMap::new();
    let (mut unresolved, mut incomplete, mut skipped) = (0, 0, 0);

    for rec in records {
        if opts.citable_only && !rec.doc_type.is_citable() {
            skipped += 1;
            continue;
        }
        let citing = match resolver.resolve(&rec.source_abbrev) {
            Some(k) => k,
            None => {
                skipped += 1;
                continue;
            }
        };
        note_display(&mut displays, &citing.key, &citing.display);
        for r in &rec.cited_refs {
            if opts.complete_only && !r.complete3 {
                incomplete += 1;
                continue;
            }
            match r.source_abbrev.as_deref().and_then(|a| resolver.resolve(a)) {
                Some(cited) => {
                    note_display(&mut displays, &cited.key, &cited.display);
                    *cells.entry((citing.key.clone(), cited.key)).or_default() += 1;
                }
                None => unresolved += 1,
            }
        }
    }

    let mut m = CitationMatrix::from_cells(year_label(records), cells, displays);
    m.unresolved_refs = unresolved;
    m.incomplete_refs = incomplete;
    m.skipped_records = skipped;
    m
}

/// Records published in `year`.
pub fn slice_by_year(records: &[DocumentRecord], year: i32) -> Vec<DocumentRecord> {
    records
        .iter()
        .filter(|r| r.pub_year == Some(year))
        .cloned()
        .collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::wos::parse_cited_reference;
    use proptest::prelude::*;

    pub(crate) fn rec(id: &str, journal: &str, year: i32, refs: &[&str]) -> DocumentRecord {
        let mut r = DocumentRecord::new(id);
        r.source_abbrev = journal.to_string();
        r.pub_year = Some(year);
        r.cited_refs = refs
            .iter()
            .map(|j| parse_cited_reference(&format!("AUTHOR X, 2000, {j}")))
            .collect();
        r
    }

    fn list() -> SourceList {
        SourceList::from_abbrevs("AHCI", ["JOURNAL A", "JOURNAL B"])
            .unwrap()
            .0
    }

    #[test]
    fn hand_enumerated_fixture() {
        // A cites {A, B}; A cites {B, X}; B cites {} -> pairs (A,A), (A,B)
        let records = vec![
            rec("1", "JOURNAL A", 2008, &["JOURNAL A", "JOURNAL B"]),
            rec("2", "JOURNAL A", 2008, &["JOURNAL B", "JOURNAL X"]),
            rec("3", "JOURNAL B", 2008, &[]),
        ];
        let m = build_quasi_jcr(&records, &list(), false);
        assert_eq!(m.total_relations, 3);
        assert_eq!(m.unique_pairs, 2);
        assert_eq!(m.unresolved_refs, 1);
        assert_eq!(m.get("JO-A", "JO-B"), 2);
        assert_eq!(m.self_citations_of("JO-A"), 1);
        assert_eq!(m.cited_total("JO-B"), 2);
        assert_eq!(m.citing_total("JO-A"), 3);
        assert_eq!(m.year_label, "2008");
        m.check_invariants().unwrap();
    }

    #[test]
    fn empty_corpus() {
        let m = build_quasi_jcr(&[], &list(), true);
        assert_eq!(m.total_relations, 0);
        assert_eq!(m.unique_pairs, 0);
        assert_eq!(m.year_label, "");
        m.check_invariants().unwrap();
    }

    #[test]
    fn only_non_source_references() {
        let records = vec![rec(
            "1",
            "JOURNAL A",
            2008,
            &["NY TIMES", "NEWSWEEK", "WASH POST"],
        )];
        let m = build_quasi_jcr(&records, &list(), true);
        assert_eq!(m.total_relations, 0);
        assert_eq!(m.unresolved_refs, 3);
    }

    #[test]
    fn incomplete_refs_and_citable_filter() {
        let mut r = rec("1", "JOURNAL A", 2008, &["JOURNAL B"]);
        r.cited_refs.push(parse_cited_reference("1999, JOURNAL B"));
        r.doc_type = crate::wos::DocType::BookReview;
        let m = build_quasi_jcr(std::slice::from_ref(&r), &list(), true);
        assert_eq!(m.total_relations, 1);
        assert_eq!(m.incomplete_refs, 1);
        let opts = BuildOptions {
            citable_only: true,
            ..Default::default()
        };
        let m = build_quasi_jcr_with(&[r], &list(), &opts);
        assert_eq!(m.total_relations, 0);
        assert_eq!(m.skipped_records, 1);
    }

    #[test]
    fn year_slices_partition() {
        let records: Vec<_> = (0..30)
            .map(|i| rec(&i.to_string(), "JOURNAL A", 1974 + (i % 7), &[]))
            .collect();
        assert_eq!(slice_by_year(&records, 1974).len(), 5);
        assert!(slice_by_year(&records, 1990).is_empty());
        let total: usize = (1974..=2008)
            .map(|y| slice_by_year(&records, y).len())
            .sum();
        assert_eq!(total, records.len());
    }

    fn arb_records() -> impl Strategy<Value = Vec<DocumentRecord>> {
        let journals = ["JOURNAL A", "JOURNAL B", "JOUR A LONG", "OTHER"];
        proptest::collection::vec(
            (
                0usize..4,
                proptest::collection::vec(0usize..4, 0..6),
                2000i32..2010,
            ),
            0..15,
        )
        .prop_map(move |rows| {
            rows.into_iter()
                .enumerate()
                .map(|(i, (j, refs, y))| {
                    let refs: Vec<&str> = refs.iter().map(|&k| journals[k]).collect();
                    rec(&i.to_string(), journals[j], y, &refs)
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn order_and_partition_independent(records in arb_records(), split in 0usize..15, fuzzy in proptest::bool::ANY) {
            let l = list();
            let whole = build_quasi_jcr(&records, &l, fuzzy);
            whole.check_invariants().unwrap();
            let mut rev = records.clone();
            rev.reverse();
            prop_assert_eq!(&build_quasi_jcr(&rev, &l, fuzzy).cells, &whole.cells);
            let split = split.min(records.len());
            let merged = build_quasi_jcr(&records[..split], &l, fuzzy).merge(build_quasi_jcr(&records[split..], &l, fuzzy));
            prop_assert_eq!(&merged.cells, &whole.cells);
            prop_assert_eq!(merged.total_relations, whole.total_relations);
            prop_assert_eq!(merged.unresolved_refs, whole.unresolved_refs);
            prop_assert_eq!(&merged.year_label, &whole.year_label);
            merged.check_invariants().unwrap();
        }

        #[test]
        fn conservation(records in arb_records(), fuzzy in proptest::bool::ANY) {
            let l = list();
            let m = build_quasi_jcr(&records, &l, fuzzy);
            let processed: u64 = records
                .iter()
                .filter(|r| l.lookup(&r.source_abbrev, fuzzy).is_some())
                .map(|r| r.cited_refs.len() as u64)
                .sum();
            prop_assert_eq!(m.total_relations + m.unresolved_refs, processed);
        }
    }
}
