//! Journal abbreviation keys and source-journal lists.
//!
//! Cited references abbreviate long journal names differently from the
//! citing records, e.g. `CONT FRENCH FRANCOPH` against
//! `CONTEMP FR FRANCOPH STUD`. A match key built from two-character word
//! prefixes lets both resolve to the same journal.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("empty journal abbreviation {0:?} cannot be resolved")]
    EmptyAbbreviation(String),
    #[error("cannot read source list {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("source list {0} has no entries")]
    EmptyList(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct JournalKey {
    /// Upper-case match key, e.g. `CO-FR-FR`.
    pub key: String,
    /// Preferred abbreviation for the key.
    pub display: String,
}

/// Upper-case and collapse whitespace; the form used for exact matching.
pub fn normalize_abbrev(abbrev: &str) -> String {
    abbrev
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_uppercase()
}

pub fn make_match_key(abbrev: &str) -> Result<JournalKey, RegistryError> {
    let display = normalize_abbrev(abbrev);
    let stripped: String = display
        .chars()
        .filter(|c| c.is_alphanumeric() || c.is_whitespace())
        .collect();
    let words: Vec<&str> = stripped.split_whitespace().collect();
    let prefix = |w: &str, n: usize| w.chars().take(n).collect::<String>();
    let key = match words.len() {
        0 => return Err(RegistryError::EmptyAbbreviation(abbrev.to_string())),
        1 => prefix(words[0], 4),
        _ => words
            .iter()
            .take(3)
            .map(|w| prefix(w, 2))
            .collect::<Vec<_>>()
            .join("-"),
    };
    Ok(JournalKey { key, display })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    pub key: JournalKey,
    /// Every distinct abbreviation seen for this key.
    pub aliases: BTreeSet<String>,
}

/// Counts from loading a source list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadReport {
    pub entries: usize,
    pub members: usize,
    /// Entries folded into an existing key.
    pub collapses: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionEntry {
    pub key: String,
    pub alias_count: usize,
    pub aliases: Vec<String>,
}

/// A named set of source journals. Immutable once built.
#[derive(Debug, Clone)]
pub struct SourceList {
    pub name: String,
    members: BTreeMap<String, Member>,
    exact: HashMap<String, String>,
}

fn prefer(current: &str, candidate: &str) -> bool {
    candidate.chars().count() > current.chars().count()
        || (candidate.chars().count() == current.chars().count() && candidate < current)
}

impl SourceList {
    pub fn from_abbrevs<I, S>(
        name: &str,
        abbrevs: I,
    ) -> Result<(SourceList, LoadReport), RegistryError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut members: BTreeMap<String, Member> = BTreeMap::new();
        let mut exact = HashMap::new();
        let mut entries = 0;
        for abbrev in abbrevs {
            let jk = make_match_key(abbrev.as_ref())?;
            entries += 1;
            exact.insert(jk.display.clone(), jk.key.clone());
            members
                .entry(jk.key.clone())
                .and_modify(|m| {
                    if prefer(&m.key.display, &jk.display) {
                        m.key.display = jk.display.clone();
                    }
                    m.aliases.insert(jk.display.clone());
                })
                .or_insert_with(|| Member {
                    aliases: BTreeSet::from([jk.display.clone()]),
                    key: jk,
                });
        }
        if members.is_empty() {
            return Err(RegistryError::EmptyList(name.to_string()));
        }
        let report = LoadReport {
            entries,
            members: members.len(),
            collapses: entries - members.len(),
        };
        Ok((
            SourceList {
                name: name.to_string(),
                members,
                exact,
            },
            report,
        ))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> impl Iterator<Item = &Member> {
        self.members.values()
    }

    pub fn get(&self, key: &str) -> Option<&Member> {
        self.members.get(key)
    }

    /// Exact lookup matches a recorded abbreviation; fuzzy lookup matches keys.
    pub fn lookup(&self, abbrev: &str, fuzzy: bool) -> Option<&Member> {
        if let Some(key) = self.exact.get(&normalize_abbrev(abbrev)) {
            return self.members.get(key);
        }
        if fuzzy {
            let jk = make_match_key(abbrev).ok()?;
            return self.members.get(&jk.key);
        }
        None
    }

    /// Keys carrying more than one distinct abbreviation.
    pub fn collisions(&self) -> Vec<CollisionEntry> {
        self.members
            .values()
            .filter(|m| m.aliases.len() > 1)
            .map(|m| CollisionEntry {
                key: m.key.key.clone(),
                alias_count: m.aliases.len(),
                aliases: m.aliases.iter().cloned().collect(),
            })
            .collect()
    }
}

/// Read one abbreviation per line; text after `#` is a comment.
pub fn load_source_list(
    path: impl AsRef<Path>,
    name: &str,
) -> Result<(SourceList, LoadReport), RegistryError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| RegistryError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    SourceList::from_abbrevs(name, lines)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Resolution {
    Matched { lists: Vec<String>, key: JournalKey },
    Unmatched,
}

impl Resolution {
    pub fn is_matched(&self) -> bool {
        matches!(self, Resolution::Matched { .. })
    }
}

pub fn resolve(abbrev: &str, lists: &[SourceList], fuzzy: bool) -> Resolution {
    let mut names = Vec::new();
    let mut found: Option<JournalKey> = None;
    for list in lists {
        if let Some(m) = list.lookup(abbrev, fuzzy) {
            names.push(list.name.clone());
            found.get_or_insert_with(|| m.key.clone());
        }
    }
    match found {
        Some(key) => Resolution::Matched { lists: names, key },
        None => Resolution::Unmatched,
    }
}

/// How cited abbreviations are mapped onto journal keys during aggregation.
#[derive(Debug, Clone, Copy)]
pub enum Resolver<'a> {
    /// Every abbreviation is its own journal under the match key.
    MatchKey,
    /// Only members of the list count.
    List { list: &'a SourceList, fuzzy: bool },
}

impl Resolver<'_> {
    pub fn resolve(&self, abbrev: &str) -> Option<JournalKey> {
        match self {
            Resolver::MatchKey => make_match_key(abbrev).ok(),
            Resolver::List { list, fuzzy } => list.lookup(abbrev, *fuzzy).map(|m| m.key.clone()),
        }
    }
}
