//! Field-tagged bibliographic export files.
//!
//! Records are blocks of two-letter tagged lines (`PT` ... `ER`) with
//! indented continuation lines; the file ends with `EF`.

mod doc_type;
mod reader;
mod reference;
mod writer;

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

pub use doc_type::DocType;
pub use reader::{
    parse_export, parse_export_str, Encoding, ExportFormat, ParseError, ParseOptions, ParseReport,
    ParsedExport,
};
pub use reference::{
    parse_cited_reference, CitedReference, MAX_REFERENCE_YEAR, MIN_REFERENCE_YEAR,
};
pub use writer::{write_record, write_records};

pub const MIN_PUB_YEAR: i32 = 1900;
pub const MAX_PUB_YEAR: i32 = 2100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Database {
    #[serde(rename = "AHCI")]
    Ahci,
    #[serde(rename = "SCI")]
    Sci,
    #[serde(rename = "SSCI")]
    Ssci,
}

impl std::str::FromStr for Database {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "AHCI" | "A&HCI" => Ok(Database::Ahci),
            "SCI" => Ok(Database::Sci),
            "SSCI" => Ok(Database::Ssci),
            other => Err(format!("unknown database `{other}`")),
        }
    }
}

/// One parsed bibliographic record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentRecord {
    pub accession_id: String,
    pub pub_type: String,
    pub authors: Vec<String>,
    pub title: String,
    pub source_journal: String,
    pub source_abbrev: String,
    /// `None` when absent or outside [1900, 2100].
    pub pub_year: Option<i32>,
    pub doc_type: DocType,
    pub language: String,
    pub cited_refs: Vec<CitedReference>,
    /// Value of the `NR` field, which need not agree with `cited_refs.len()`.
    pub reported_ref_count: Option<u32>,
    pub origin_databases: BTreeSet<Database>,
    /// Unrecognized tags, kept verbatim in file order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra: Vec<(String, Vec<String>)>,
}

impl DocumentRecord {
    pub fn new(accession_id: impl Into<String>) -> Self {
        DocumentRecord {
            accession_id: accession_id.into(),
            pub_type: "J".to_string(),
            authors: Vec::new(),
            title: String::new(),
            source_journal: String::new(),
            source_abbrev: String::new(),
            pub_year: None,
            doc_type: DocType::Unknown,
            language: String::new(),
            cited_refs: Vec::new(),
            reported_ref_count: None,
            origin_databases: BTreeSet::new(),
            extra: Vec::new(),
        }
    }
}

/// Share of cited references carrying author, year and source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompletenessShare {
    pub complete: u64,
    pub total: u64,
    pub fraction: f64,
    /// No references at all; `fraction` is reported as 0.
    pub empty: bool,
}

pub fn completeness_share(records: &[DocumentRecord]) -> CompletenessShare {
    let (complete, total) = records
        .iter()
        .flat_map(|r| r.cited_refs.iter())
        .fold((0u64, 0u64), |(c, t), r| (c + r.complete3 as u64, t + 1));
    CompletenessShare::from_counts(complete, total)
}

impl CompletenessShare {
    pub fn from_counts(complete: u64, total: u64) -> Self {
        CompletenessShare {
            complete,
            total,
            fraction: if total == 0 {
                0.0
            } else {
                complete as f64 / total as f64
            },
            empty: total == 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record_with(refs: &[&str]) -> DocumentRecord {
        let mut r = DocumentRecord::new("X");
        r.cited_refs = refs.iter().map(|s| parse_cited_reference(s)).collect();
        r
    }

    #[test]
    fn completeness_empty_pool() {
        let s = completeness_share(&[]);
        assert!(s.empty);
        assert_eq!(s.fraction, 0.0);
    }

    #[test]
    fn completeness_all_complete() {
        let refs = vec!["A B, 2001, ISIS"; 10];
        assert_eq!(completeness_share(&[record_with(&refs)]).fraction, 1.0);
    }

    #[test]
    fn completeness_published_pool() {
        let s = CompletenessShare::from_counts(1_093_005, 1_126_810);
        assert_eq!(format!("{:.3}", s.fraction), "0.970");
    }
}
