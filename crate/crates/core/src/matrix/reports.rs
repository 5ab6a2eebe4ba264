use serde::{Deserialize, Serialize};

use super::{build_quasi_jcr_with, BuildOptions, CitationMatrix};
use crate::registry::SourceList;
use crate::wos::DocumentRecord;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzyGain {
    pub exact_relations: u64,
    pub exact_pairs: u64,
    pub fuzzy_relations: u64,
    pub fuzzy_pairs: u64,
    /// Percentage gains; `None` when the exact count is zero but the fuzzy one is not.
    pub relations_gain_pct: Option<f64>,
    pub pairs_gain_pct: Option<f64>,
}

fn gain(exact: u64, fuzzy: u64) -> Option<f64> {
    match (exact, fuzzy) {
        (0, 0) => Some(0.0),
        (0, _) => None,
        (e, f) => Some(100.0 * (f as f64 - e as f64) / e as f64),
    }
}

impl FuzzyGain {
    pub fn from_counts(
        exact_relations: u64,
        exact_pairs: u64,
        fuzzy_relations: u64,
        fuzzy_pairs: u64,
    ) -> Self {
        FuzzyGain {
            exact_relations,
            exact_pairs,
            fuzzy_relations,
            fuzzy_pairs,
            relations_gain_pct: gain(exact_relations, fuzzy_relations),
            pairs_gain_pct: gain(exact_pairs, fuzzy_pairs),
        }
    }
}

/// Build the matrix with and without key matching and compare.
pub fn fuzzy_gain(records: &[DocumentRecord], list: &SourceList, opts: &BuildOptions) -> FuzzyGain {
    let exact = build_quasi_jcr_with(
        records,
        list,
        &BuildOptions {
            fuzzy: false,
            ..*opts
        },
    );
    let fuzzy = build_quasi_jcr_with(
        records,
        list,
        &BuildOptions {
            fuzzy: true,
            ..*opts
        },
    );
    FuzzyGain::from_counts(
        exact.total_relations,
        exact.unique_pairs,
        fuzzy.total_relations,
        fuzzy.unique_pairs,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SparsityReport {
    pub cutoff: u64,
    pub below: u64,
    pub unique_pairs: u64,
    /// `None` for an empty matrix.
    pub fraction: Option<f64>,
}

impl SparsityReport {
    pub fn from_counts(cutoff: u64, below: u64, unique_pairs: u64) -> Self {
        SparsityReport {
            cutoff,
            below,
            unique_pairs,
            fraction: (unique_pairs > 0).then(|| below as f64 / unique_pairs as f64),
        }
    }
}

/// Share of nonzero cells holding a value below `cutoff`.
pub fn sparsity_report(matrix: &CitationMatrix, cutoff: u64) -> SparsityReport {
    let below = matrix
        .cells
        .values()
        .filter(|&&v| v > 0 && v < cutoff)
        .count() as u64;
    SparsityReport::from_counts(cutoff, below, matrix.unique_pairs)
}
