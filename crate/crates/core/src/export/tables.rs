use std::collections::BTreeMap;

use super::ExportError;
use crate::matrix::{CitationEnvironment, CitationMatrix};
use crate::network::FactorSolution;
use crate::registry::CollisionEntry;
use crate::stats::{Distribution, YearTable};

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 fields")
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

/// Sparse `citing,cited,count` listing in key order.
pub fn matrix_csv(m: &CitationMatrix) -> String {
    let mut w = writer();
    w.write_record(["citing", "cited", "count"]).unwrap();
    for ((from, to), n) in &m.cells {
        w.write_record([from.as_str(), to.as_str(), &n.to_string()])
            .unwrap();
    }
    finish(w)
}

pub fn read_matrix_csv(text: &str, year_label: &str) -> Result<CitationMatrix, ExportError> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let mut cells = BTreeMap::new();
    for (i, row) in r.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| ExportError::Parse {
            line,
            message: e.to_string(),
        })?;
        if row.len() != 3 {
            return Err(ExportError::Parse {
                line,
                message: format!("expected 3 fields, found {}", row.len()),
            });
        }
        let n: u64 = row[2].parse().map_err(|_| ExportError::Parse {
            line,
            message: format!("bad count '{}'", &row[2]),
        })?;
        *cells
            .entry((row[0].to_string(), row[1].to_string()))
            .or_insert(0) += n;
    }
    Ok(CitationMatrix::from_cells(
        year_label,
        cells,
        BTreeMap::new(),
    ))
}

/// `label,count[,...]` rows; blank counts read as zero, thousands separators allowed.
pub fn read_label_counts(text: &str) -> Result<Vec<(String, u64)>, ExportError> {
    let mut r = csv::ReaderBuilder::new()
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let line = i + 2;
        let bad = |message: String| ExportError::Parse { line, message };
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let label = rec
            .get(0)
            .ok_or_else(|| bad("missing label".into()))?
            .to_string();
        let count = rec.get(1).unwrap_or("").trim().replace(',', "");
        let count = if count.is_empty() {
            0
        } else {
            count
                .parse()
                .map_err(|_| bad(format!("bad count '{count}'")))?
        };
        rows.push((label, count));
    }
    Ok(rows)
}

/// Dense profile matrix: one row per profile row, one column per journal.
pub fn environment_csv(env: &CitationEnvironment) -> String {
    let mut w = writer();
    let mut header = vec!["row".to_string()];
    header.extend(env.journals.iter().cloned());
    w.write_record(&header).unwrap();
    for (label, row) in env.row_labels.iter().zip(&env.profile) {
        let mut rec = vec![label.clone()];
        rec.extend(row.iter().map(u64::to_string));
        w.write_record(&rec).unwrap();
    }
    let mut totals = vec!["total".to_string()];
    totals.extend(env.totals.iter().map(u64::to_string));
    w.write_record(&totals).unwrap();
    finish(w)
}

/// `journal,loading_1..k,assignment` with 1-based factor numbers.
pub fn factor_csv(sol: &FactorSolution) -> String {
    let mut w = writer();
    let k = sol.explained_variance.len();
    let mut header = vec!["journal".to_string()];
    header.extend((1..=k).map(|f| format!("loading_{f}")));
    header.push("assignment".into());
    w.write_record(&header).unwrap();
    for (j, row) in sol.journals.iter().zip(&sol.loadings) {
        let mut rec = vec![j.clone()];
        rec.extend(row.iter().map(|v| format!("{v:.6}")));
        rec.push((sol.assignment[j] + 1).to_string());
        w.write_record(&rec).unwrap();
    }
    finish(w)
}

pub fn collision_csv(entries: &[CollisionEntry]) -> String {
    let mut w = writer();
    w.write_record(["key", "alias_count", "aliases"]).unwrap();
    for e in entries {
        w.write_record([
            e.key.as_str(),
            &e.alias_count.to_string(),
            &e.aliases.join("; "),
        ])
        .unwrap();
    }
    finish(w)
}

pub fn distribution_csv(d: &Distribution) -> String {
    let mut w = writer();
    w.write_record(["label", "count", "percent"]).unwrap();
    for ((l, c), p) in d.labels.iter().zip(&d.counts).zip(&d.percents) {
        w.write_record([l.as_str(), &c.to_string(), &format!("{p:.1}")])
            .unwrap();
    }
    finish(w)
}

pub fn year_table_csv(t: &YearTable) -> String {
    let mut w = writer();
    w.write_record([
        "year",
        "documents",
        "cited_references",
        "citing_documents",
        "citing_references",
        "ratio",
    ])
    .unwrap();
    for r in &t.rows {
        w.write_record([
            r.year.to_string(),
            r.documents.to_string(),
            r.cited_references.to_string(),
            r.citing_documents.to_string(),
            r.citing_references.to_string(),
            r.ratio.map(|v| format!("{v:.1}")).unwrap_or_default(),
        ])
        .unwrap();
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let mut cells = BTreeMap::new();
        cells.insert(("A, B".to_string(), "C".to_string()), 4);
        cells.insert(("C".to_string(), "C".to_string()), 2);
        let m = CitationMatrix::from_cells("2008", cells, BTreeMap::new());
        let text = matrix_csv(&m);
        assert_eq!(text, "citing,cited,count\n\"A, B\",C,4\nC,C,2\n");
        assert_eq!(read_matrix_csv(&text, "2008").unwrap(), m);
        assert!(matches!(
            read_matrix_csv("citing,cited,count\nA,B,x\n", ""),
            Err(ExportError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn label_counts() {
        let rows = read_label_counts("label,count\nBook Review,\"48,290\"\nPoetry,\n").unwrap();
        assert_eq!(
            rows,
            vec![
                ("Book Review".to_string(), 48_290),
                ("Poetry".to_string(), 0)
            ]
        );
        assert!(read_label_counts("label,count\nA,x\n").is_err());
    }

    #[test]
    fn year_csv() {
        let t = YearTable {
            rows: vec![
                crate::stats::YearRow::from_counts(1974, 218, 652, 14, 46),
                crate::stats::YearRow::from_counts(1975, 1, 0, 0, 0),
            ],
            undated: 0,
        };
        assert_eq!(
            year_table_csv(&t),
            "year,documents,cited_references,citing_documents,citing_references,ratio\n1974,218,652,14,46,3.3\n1975,1,0,0,0,\n"
        );
    }
}
