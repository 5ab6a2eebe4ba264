use std::fmt::Write;

use super::{DocType, DocumentRecord};

fn field(out: &mut String, tag: &str, lines: &[&str]) {
    for (i, line) in lines.iter().enumerate() {
        let prefix = if i == 0 { tag } else { "  " };
        let _ = writeln!(out, "{prefix} {line}");
    }
}

fn single(out: &mut String, tag: &str, value: &str) {
    if !value.is_empty() {
        field(out, tag, &[value]);
    }
}

/// Serialize one record as a `PT` ... `ER` block.
pub fn write_record(out: &mut String, rec: &DocumentRecord) {
    field(out, "PT", &[rec.pub_type.as_str()]);
    let authors: Vec<&str> = rec.authors.iter().map(String::as_str).collect();
    if !authors.is_empty() {
        field(out, "AU", &authors);
    }
    single(out, "TI", &rec.title);
    single(out, "SO", &rec.source_journal);
    single(out, "J9", &rec.source_abbrev);
    single(out, "LA", &rec.language);
    if rec.doc_type != DocType::Unknown {
        single(out, "DT", rec.doc_type.name());
    }
    for (tag, lines) in &rec.extra {
        let lines: Vec<&str> = lines.iter().map(String::as_str).collect();
        field(out, tag, &lines);
    }
    let refs: Vec<&str> = rec.cited_refs.iter().map(|r| r.raw.as_str()).collect();
    if !refs.is_empty() {
        field(out, "CR", &refs);
    }
    if let Some(nr) = rec.reported_ref_count {
        single(out, "NR", &nr.to_string());
    }
    if let Some(y) = rec.pub_year {
        single(out, "PY", &y.to_string());
    }
    single(out, "UT", &rec.accession_id);
    out.push_str("ER\n\n");
}

/// Serialize a full export file, terminated by `EF`.
pub fn write_records(records: &[DocumentRecord]) -> String {
    let mut out = String::from("FN Clarivate Analytics Web of Science\nVR 1.0\n");
    for rec in records {
        write_record(&mut out, rec);
    }
    out.push_str("EF\n");
    out
}
