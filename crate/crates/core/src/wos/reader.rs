use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::Read;
use thiserror::Error;

use super::{parse_cited_reference, Database, DocType, DocumentRecord, MAX_PUB_YEAR, MIN_PUB_YEAR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ExportFormat {
    #[default]
    FieldTagged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    Utf8,
    Latin1,
}

#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    pub format: ExportFormat,
    /// Database the download came from; copied into every record.
    pub origin: Option<Database>,
}

/// Per-file summary accompanying parsed records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParseReport {
    pub encoding: Encoding,
    pub records_read: usize,
    pub records_returned: usize,
    pub records_dropped: usize,
    pub drop_reasons: BTreeMap<String, usize>,
    pub unknown_tags: BTreeMap<String, usize>,
    pub unknown_doc_types: BTreeMap<String, usize>,
    pub replaced_bytes: usize,
    pub terminated: bool,
}

impl ParseReport {
    fn new(encoding: Encoding, replaced_bytes: usize) -> Self {
        ParseReport {
            encoding,
            records_read: 0,
            records_returned: 0,
            records_dropped: 0,
            drop_reasons: BTreeMap::new(),
            unknown_tags: BTreeMap::new(),
            unknown_doc_types: BTreeMap::new(),
            replaced_bytes,
            terminated: false,
        }
    }

    fn drop_record(&mut self, reason: &str) {
        self.records_dropped += 1;
        *self.drop_reasons.entry(reason.to_string()).or_default() += 1;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedExport {
    pub records: Vec<DocumentRecord>,
    pub report: ParseReport,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    /// The stream ended before `EF`; all complete records are kept.
    #[error("export truncated before EF after {} complete records", .partial.records.len())]
    Truncated { partial: Box<ParsedExport> },
}

const FILE_TAGS: [&str; 2] = ["FN", "VR"];

/// Decode as UTF-8 when the bytes look like UTF-8, Latin-1 otherwise.
fn decode(bytes: &[u8]) -> (String, Encoding, usize) {
    let bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes);
    match std::str::from_utf8(bytes) {
        Ok(s) => (s.to_string(), Encoding::Utf8, 0),
        Err(_) => {
            let lossy = String::from_utf8_lossy(bytes);
            let has_multibyte = lossy.chars().any(|c| c != '\u{FFFD}' && !c.is_ascii());
            if has_multibyte {
                let replaced = invalid_byte_count(bytes);
                (lossy.into_owned(), Encoding::Utf8, replaced)
            } else {
                (
                    bytes.iter().map(|&b| b as char).collect(),
                    Encoding::Latin1,
                    0,
                )
            }
        }
    }
}

fn invalid_byte_count(mut bytes: &[u8]) -> usize {
    let mut bad = 0;
    loop {
        match std::str::from_utf8(bytes) {
            Ok(_) => return bad,
            Err(e) => {
                let skip = e.error_len().unwrap_or(bytes.len() - e.valid_up_to());
                bad += skip;
                bytes = &bytes[e.valid_up_to() + skip..];
            }
        }
    }
}

#[derive(Default)]
struct Pending {
    fields: Vec<(String, Vec<String>)>,
}

impl Pending {
    fn push_tag(&mut self, tag: &str, value: &str) {
        self.fields.push((tag.to_string(), vec![value.to_string()]));
    }

    fn push_continuation(&mut self, value: &str) {
        if let Some((_, lines)) = self.fields.last_mut() {
            lines.push(value.to_string());
        }
    }
}

fn join(lines: &[String]) -> String {
    lines
        .iter()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

fn build_record(pending: Pending, opts: &ParseOptions, report: &mut ParseReport) -> DocumentRecord {
    let mut rec = DocumentRecord::new(String::new());
    rec.origin_databases = opts.origin.into_iter().collect::<BTreeSet<_>>();
    for (tag, lines) in pending.fields {
        match tag.as_str() {
            "PT" => rec.pub_type = join(&lines),
            "AU" => rec.authors.extend(
                lines
                    .iter()
                    .map(|l| l.trim().to_string())
                    .filter(|l| !l.is_empty()),
            ),
            "TI" => rec.title = join(&lines),
            "SO" => rec.source_journal = join(&lines),
            "J9" => rec.source_abbrev = join(&lines).to_uppercase(),
            "LA" => rec.language = join(&lines),
            "DT" => {
                let raw = join(&lines);
                rec.doc_type = DocType::from_label(&raw);
                if rec.doc_type == DocType::Unknown {
                    *report.unknown_doc_types.entry(raw).or_default() += 1;
                }
            }
            "PY" => {
                rec.pub_year = join(&lines)
                    .parse::<i32>()
                    .ok()
                    .filter(|y| (MIN_PUB_YEAR..=MAX_PUB_YEAR).contains(y))
            }
            "UT" => rec.accession_id = join(&lines),
            "CR" => rec.cited_refs.extend(
                lines
                    .iter()
                    .map(|l| l.trim())
                    .filter(|l| !l.is_empty())
                    .map(parse_cited_reference),
            ),
            "NR" => rec.reported_ref_count = join(&lines).parse().ok(),
            _ => {
                *report.unknown_tags.entry(tag.clone()).or_default() += 1;
                rec.extra.push((tag, lines));
            }
        }
    }
    rec
}

/// Parse a field-tagged export from a byte stream.
pub fn parse_export<R: Read>(
    mut input: R,
    opts: &ParseOptions,
) -> Result<ParsedExport, ParseError> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let (text, encoding, replaced) = decode(&bytes);
    let mut report = ParseReport::new(encoding, replaced);
    parse_text(&text, opts, &mut report).map_err(ParseError::from_partial)
}

pub fn parse_export_str(text: &str, opts: &ParseOptions) -> Result<ParsedExport, ParseError> {
    parse_export(text.as_bytes(), opts)
}

impl ParseError {
    fn from_partial(partial: ParsedExport) -> Self {
        ParseError::Truncated {
            partial: Box::new(partial),
        }
    }
}

#[allow(clippy::result_large_err)]
fn parse_text(
    text: &str,
    opts: &ParseOptions,
    report: &mut ParseReport,
) -> Result<ParsedExport, ParsedExport> {
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    let mut current: Option<Pending> = None;
    let mut saw_content = false;

    let mut finish =
        |pending: Pending, report: &mut ParseReport, records: &mut Vec<DocumentRecord>| {
            let rec = build_record(pending, opts, report);
            if rec.accession_id.is_empty() {
                report.drop_record("missing_accession");
            } else if !seen.insert(rec.accession_id.clone()) {
                report.drop_record("duplicate_accession");
            } else {
                records.push(rec);
            }
        };

    for line in text.lines() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        saw_content = true;
        let first = line.chars().next().unwrap_or(' ');
        if first.is_whitespace() {
            if let Some(p) = current.as_mut() {
                p.push_continuation(line.trim());
            }
            continue;
        }
        let (tag, value) = match line.char_indices().nth(2) {
            Some((i, _)) => (&line[..i], line[i..].trim()),
            None => (line, ""),
        };
        match tag {
            "PT" => {
                if current.take().is_some() {
                    report.drop_record("missing_er");
                }
                report.records_read += 1;
                let mut p = Pending::default();
                p.push_tag(tag, value);
                current = Some(p);
            }
            "ER" => {
                if let Some(p) = current.take() {
                    finish(p, report, &mut records);
                }
            }
            "EF" => {
                if current.take().is_some() {
                    report.drop_record("missing_er");
                }
                report.terminated = true;
                break;
            }
            _ => match current.as_mut() {
                Some(p) => p.push_tag(tag, value),
                None if FILE_TAGS.contains(&tag) => {}
                None => *report.unknown_tags.entry(tag.to_string()).or_default() += 1,
            },
        }
    }

    if current.take().is_some() {
        report.drop_record("missing_er");
    }
    report.records_returned = records.len();
    let parsed = ParsedExport {
        records,
        report: report.clone(),
    };
    if saw_content && !report.terminated {
        Err(parsed)
    } else {
        Ok(parsed)
    }
}
