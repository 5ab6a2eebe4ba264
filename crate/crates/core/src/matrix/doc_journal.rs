use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::registry::Resolver;
use crate::wos::DocumentRecord;

/// Documents (rows) versus cited journals (columns).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocJournalMatrix {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub displays: Vec<String>,
    /// (row index, column index) -> references from the document to the journal.
    pub cells: BTreeMap<(usize, usize), u64>,
    /// Documents without a single resolvable reference.
    pub zero_rows: Vec<String>,
}

impl DocJournalMatrix {
    pub fn column_totals(&self) -> Vec<u64> {
        let mut totals = vec![0; self.cols.len()];
        for (&(_, c), &n) in &self.cells {
            totals[c] += n;
        }
        totals
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.cells.get(&(row, col)).copied().unwrap_or(0)
    }
}

/// Build the document x journal matrix, keying references by match key.
pub fn doc_journal_matrix(records: &[DocumentRecord]) -> DocJournalMatrix {
    doc_journal_matrix_with(records, Resolver::MatchKey)
}

pub fn doc_journal_matrix_with(
    records: &[DocumentRecord],
    resolver: Resolver<'_>,
) -> DocJournalMatrix {
    let mut per_doc: Vec<BTreeMap<String, u64>> = Vec::with_capacity(records.len());
    let mut displays: BTreeMap<String, String> = BTreeMap::new();
    for rec in records {
        let mut counts = BTreeMap::new();
        for r in &rec.cited_refs {
            if let Some(jk) = r.source_abbrev.as_deref().and_then(|a| resolver.resolve(a)) {
                super::note_display(&mut displays, &jk.key, &jk.display);
                *counts.entry(jk.key).or_default() += 1;
            }
        }
        per_doc.push(counts);
    }
    let cols: Vec<String> = displays.keys().cloned().collect();
    let index: BTreeMap<&str, usize> = cols
        .iter()
        .enumerate()
        .map(|(i, k)| (k.as_str(), i))
        .collect();
    let mut cells = BTreeMap::new();
    let mut zero_rows = Vec::new();
    for (row, counts) in per_doc.iter().enumerate() {
        if counts.is_empty() {
            zero_rows.push(records[row].accession_id.clone());
        }
        for (k, &n) in counts {
            cells.insert((row, index[k.as_str()]), n);
        }
    }
    DocJournalMatrix {
        rows: records.iter().map(|r| r.accession_id.clone()).collect(),
        displays: cols.iter().map(|k| displays[k].clone()).collect(),
        cols,
        cells,
        zero_rows,
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::rec;
    use super::*;

    #[test]
    fn hand_enumerated_cells() {
        let docs = vec![
            rec("d1", "X", 2008, &["ISIS", "ISIS", "ART J"]),
            rec("d2", "X", 2008, &["ART J"]),
        ];
        let m = doc_journal_matrix(&docs);
        assert_eq!(m.cols, vec!["AR-J", "ISIS"]);
        let expected: BTreeMap<(usize, usize), u64> = [((0, 1), 2), ((0, 0), 1), ((1, 0), 1)]
            .into_iter()
            .collect();
        assert_eq!(m.cells, expected);
        assert!(m.zero_rows.is_empty());
    }

    #[test]
    fn document_without_references_is_a_zero_row() {
        let docs = vec![rec("d1", "X", 2008, &[]), rec("d2", "X", 2008, &["ISIS"])];
        let m = doc_journal_matrix(&docs);
        assert_eq!(m.rows.len(), 2);
        assert_eq!(m.zero_rows, vec!["d1"]);
        assert_eq!(m.get(0, 0), 0);
    }

    #[test]
    fn column_sums_equal_cited_counts() {
        let docs = vec![
            rec("d1", "X", 2008, &["ISIS", "ISIS", "ART J", "LEONARDO"]),
            rec("d2", "X", 2008, &["ART J", "LEONARDO"]),
            rec("d3", "X", 2008, &["ISIS"]),
        ];
        let m = doc_journal_matrix(&docs);
        let totals = m.column_totals();
        for (c, key) in m.cols.iter().enumerate() {
            let direct = docs
                .iter()
                .flat_map(|d| &d.cited_refs)
                .filter(|r| {
                    crate::registry::make_match_key(r.source_abbrev.as_ref().unwrap())
                        .unwrap()
                        .key
                        == *key
                })
                .count() as u64;
            assert_eq!(totals[c], direct);
        }
    }
}
