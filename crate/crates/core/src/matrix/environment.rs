use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

use super::{doc_journal_matrix, CitationMatrix};
use crate::params::AnalysisParams;
use crate::registry::make_match_key;
use crate::wos::DocumentRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Journals citing the seed (its citation impact environment).
    Cited,
    /// Journals cited by the seed (its knowledge base).
    Citing,
}

impl std::str::FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cited" => Ok(Direction::Cited),
            "citing" => Ok(Direction::Citing),
            other => Err(format!(
                "unknown direction `{other}` (expected cited or citing)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileKind {
    /// Square matrix, rows citing and columns cited.
    JournalByJournal,
    /// Documents as rows, journals as columns.
    DocumentByJournal,
}

#[derive(Debug, Error, PartialEq)]
pub enum EnvError {
    #[error("unknown seed journal `{seed}`; nearest keys: {}", .nearest.join(", "))]
    UnknownSeed { seed: String, nearest: Vec<String> },
    #[error("environment of `{0}` is empty")]
    Empty(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CitationEnvironment {
    pub seed: String,
    pub direction: Direction,
    pub kind: ProfileKind,
    pub journals: Vec<String>,
    pub displays: Vec<String>,
    /// Row labels of `profile`: journals, or document ids.
    pub row_labels: Vec<String>,
    pub profile: Vec<Vec<u64>>,
    /// Within-environment citation frequency per journal.
    pub totals: Vec<u64>,
    /// The count the contribution threshold was applied to.
    pub contributions: Vec<u64>,
    pub self_citations: Vec<u64>,
    /// Journals with a nonzero contribution before thresholding.
    pub candidate_count: usize,
    pub environment_total: u64,
    pub min_count: u64,
    pub params: AnalysisParams,
}

impl CitationEnvironment {
    pub fn len(&self) -> usize {
        self.journals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.journals.is_empty()
    }

    pub fn index_of(&self, key: &str) -> Option<usize> {
        self.journals.iter().position(|j| j == key)
    }

    /// Profile vector of journal `j`: a column for cited environments and
    /// document sets, a row for citing environments.
    pub fn profile_of(&self, j: usize) -> Vec<f64> {
        match (self.kind, self.direction) {
            (ProfileKind::JournalByJournal, Direction::Citing) => {
                self.profile[j].iter().map(|&v| v as f64).collect()
            }
            _ => self.profile.iter().map(|row| row[j] as f64).collect(),
        }
    }

    /// Whether position `i` of journal `j`'s profile is its own diagonal cell.
    pub fn has_diagonal(&self) -> bool {
        self.kind == ProfileKind::JournalByJournal
    }
}

/// Smallest count strictly above `fraction * total`.
pub fn min_count_for_inclusion(total: u64, fraction: f64) -> u64 {
    let bound = fraction * total as f64;
    let nearest = bound.round();
    if (bound - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as u64 + 1
    } else {
        bound.floor() as u64 + 1
    }
}

fn resolve_seed(matrix: &CitationMatrix, seed: &str) -> Result<String, EnvError> {
    let known =
        |k: &str| matrix.citing_totals.contains_key(k) || matrix.cited_totals.contains_key(k);
    if known(seed) {
        return Ok(seed.to_string());
    }
    if let Ok(jk) = make_match_key(seed) {
        if known(&jk.key) {
            return Ok(jk.key);
        }
    }
    let upper = seed.to_uppercase();
    let mut scored: Vec<(usize, String)> = matrix
        .journals()
        .into_iter()
        .map(|k| {
            let d = strsim::levenshtein(&upper, &k)
                .min(strsim::levenshtein(&upper, &matrix.display(&k)));
            (d, k)
        })
        .collect();
    scored.sort();
    Err(EnvError::UnknownSeed {
        seed: seed.to_string(),
        nearest: scored.into_iter().take(3).map(|(_, k)| k).collect(),
    })
}

fn journal_environment(
    matrix: &CitationMatrix,
    seed: &str,
    direction: Direction,
    params: &AnalysisParams,
) -> Result<CitationEnvironment, EnvError> {
    let seed = resolve_seed(matrix, seed)?;
    let contribution = |j: &str| match direction {
        Direction::Cited => matrix.get(j, &seed),
        Direction::Citing => matrix.get(&seed, j),
    };
    let candidates: Vec<(String, u64)> = matrix
        .journals()
        .into_iter()
        .map(|j| {
            let c = contribution(&j);
            (j, c)
        })
        .filter(|(_, c)| *c > 0)
        .collect();
    if candidates.is_empty() {
        return Err(EnvError::Empty(seed));
    }
    let total: u64 = candidates.iter().map(|(_, c)| c).sum();
    let min_count = min_count_for_inclusion(total, params.contribution_fraction);
    let mut selected: BTreeMap<String, u64> = candidates
        .iter()
        .filter(|(j, c)| *c >= min_count || *j == seed)
        .cloned()
        .collect();
    selected.entry(seed.clone()).or_insert(0);

    let journals: Vec<String> = selected.keys().cloned().collect();
    let profile: Vec<Vec<u64>> = journals
        .iter()
        .map(|a| journals.iter().map(|b| matrix.get(a, b)).collect())
        .collect();
    let n = journals.len();
    let totals: Vec<u64> = (0..n)
        .map(|j| match direction {
            Direction::Cited => profile.iter().map(|row| row[j]).sum(),
            Direction::Citing => profile[j].iter().sum(),
        })
        .collect();
    Ok(CitationEnvironment {
        displays: journals.iter().map(|k| matrix.display(k)).collect(),
        row_labels: journals.clone(),
        contributions: journals.iter().map(|k| selected[k]).collect(),
        self_citations: journals
            .iter()
            .map(|k| matrix.self_citations_of(k))
            .collect(),
        journals,
        profile,
        totals,
        seed,
        direction,
        kind: ProfileKind::JournalByJournal,
        candidate_count: candidates.len(),
        environment_total: total,
        min_count,
        params: params.clone(),
    })
}

/// Journals citing `seed`, kept when they contribute more than the
/// contribution fraction of the seed's citations.
pub fn cited_environment(
    matrix: &CitationMatrix,
    seed: &str,
    params: &AnalysisParams,
) -> Result<CitationEnvironment, EnvError> {
    journal_environment(matrix, seed, Direction::Cited, params)
}

/// Journals cited by `seed`, thresholded on the seed's references.
pub fn citing_environment(
    matrix: &CitationMatrix,
    seed: &str,
    params: &AnalysisParams,
) -> Result<CitationEnvironment, EnvError> {
    journal_environment(matrix, seed, Direction::Citing, params)
}

/// Environment of a document set treated as a quasi-journal.
///
/// The citing direction maps the set's own references; the cited direction
/// maps the references of the documents citing the set.
pub fn topic_environment(
    label: &str,
    doc_set: &[DocumentRecord],
    citing_docs: &[DocumentRecord],
    direction: Direction,
    params: &AnalysisParams,
) -> Result<CitationEnvironment, EnvError> {
    let docs = match direction {
        Direction::Citing => doc_set,
        Direction::Cited => citing_docs,
    };
    let docs: Vec<DocumentRecord> = docs
        .iter()
        .filter(|d| !params.citable_only || d.doc_type.is_citable())
        .cloned()
        .collect();
    let dj = doc_journal_matrix(&docs);
    let col_totals = dj.column_totals();
    let total: u64 = col_totals.iter().sum();
    if total == 0 {
        return Err(EnvError::Empty(label.to_string()));
    }
    let min_count = min_count_for_inclusion(total, params.contribution_fraction);
    let keep: Vec<usize> = (0..dj.cols.len())
        .filter(|&c| col_totals[c] >= min_count)
        .collect();
    let profile: Vec<Vec<u64>> = (0..dj.rows.len())
        .map(|r| keep.iter().map(|&c| dj.get(r, c)).collect())
        .collect();
    let contributions: Vec<u64> = keep.iter().map(|&c| col_totals[c]).collect();
    Ok(CitationEnvironment {
        seed: label.to_string(),
        direction,
        kind: ProfileKind::DocumentByJournal,
        journals: keep.iter().map(|&c| dj.cols[c].clone()).collect(),
        displays: keep.iter().map(|&c| dj.displays[c].clone()).collect(),
        row_labels: dj.rows.clone(),
        profile,
        totals: contributions.clone(),
        self_citations: vec![0; keep.len()],
        contributions,
        candidate_count: dj.cols.len(),
        environment_total: total,
        min_count,
        params: params.clone(),
    })
}
