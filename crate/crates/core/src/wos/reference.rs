use serde::{Deserialize, Serialize};

/// One entry of a record's reference list.
///
/// ISI cited references follow `AUTHOR INITIALS, year, SOURCE, Vvolume, Ppage`
/// with volume and page frequently missing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CitedReference {
    pub raw: String,
    pub author: Option<String>,
    pub year: Option<i32>,
    pub source_abbrev: Option<String>,
    pub volume: Option<u32>,
    pub page: Option<String>,
    /// Author, year and source are all present.
    pub complete3: bool,
}

pub const MIN_REFERENCE_YEAR: i32 = 1400;
pub const MAX_REFERENCE_YEAR: i32 = 2100;

pub(crate) fn is_year_token(tok: &str) -> Option<i32> {
    if tok.len() != 4 || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let y: i32 = tok.parse().ok()?;
    (MIN_REFERENCE_YEAR..=MAX_REFERENCE_YEAR)
        .contains(&y)
        .then_some(y)
}

fn volume_token(tok: &str) -> Option<u32> {
    let rest = tok.strip_prefix('V')?;
    if tok.contains(char::is_whitespace) {
        return None;
    }
    let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
    if digits.is_empty() {
        return None;
    }
    digits.parse().ok()
}

fn page_token(tok: &str) -> Option<&str> {
    let rest = tok.strip_prefix('P')?;
    if rest.is_empty()
        || tok.contains(char::is_whitespace)
        || !rest.bytes().any(|b| b.is_ascii_digit())
    {
        return None;
    }
    Some(rest)
}

fn is_locator(tok: &str) -> bool {
    is_year_token(tok).is_some() || volume_token(tok).is_some() || page_token(tok).is_some()
}

/// Split a cited-reference string into its subfields.
///
/// The first comma-separated token is the author, the first later token that
/// is a plausible 4-digit year is the year, and the token right after the year
/// is the source. Volume and page are only taken from `V`/`P` tokens after
/// that. Anything that does not fit is left absent.
pub fn parse_cited_reference(raw: &str) -> CitedReference {
    let trimmed = raw.trim();
    let tokens: Vec<&str> = trimmed.split(',').map(str::trim).collect();

    let mut author = None;
    let year_pos = if tokens.first().and_then(|t| is_year_token(t)).is_some() {
        Some(0)
    } else if tokens.len() >= 2 {
        if !tokens[0].is_empty() {
            author = Some(tokens[0].to_string());
        }
        tokens[1..]
            .iter()
            .position(|t| is_year_token(t).is_some())
            .map(|p| p + 1)
    } else {
        None
    };

    let year = year_pos.and_then(|p| is_year_token(tokens[p]));
    let mut next = year_pos.map_or(1, |p| p + 1);

    let mut source_abbrev = None;
    if year_pos.is_some() {
        if let Some(tok) = tokens.get(next) {
            if !tok.is_empty() && !is_locator(tok) {
                source_abbrev = Some(tok.to_uppercase());
                next += 1;
            }
        }
    }

    let rest = tokens.get(next..).unwrap_or(&[]);
    let volume = rest.iter().find_map(|t| volume_token(t));
    let page = rest.iter().find_map(|t| page_token(t)).map(str::to_string);

    let complete3 = author.is_some() && year.is_some() && source_abbrev.is_some();
    CitedReference {
        raw: trimmed.to_string(),
        author,
        year,
        source_abbrev,
        volume,
        page,
        complete3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_reference() {
        let r = parse_cited_reference("NEU J, 1985, ISIS, V76, P5");
        assert_eq!(r.author.as_deref(), Some("NEU J"));
        assert_eq!(r.year, Some(1985));
        assert_eq!(r.source_abbrev.as_deref(), Some("ISIS"));
        assert_eq!(r.volume, Some(76));
        assert_eq!(r.page.as_deref(), Some("5"));
        assert!(r.complete3);
    }

    #[test]
    fn book_without_volume_or_page() {
        let r = parse_cited_reference("GARFIELD E, 1979, CITATION INDEXING");
        assert_eq!(r.author.as_deref(), Some("GARFIELD E"));
        assert_eq!(r.year, Some(1979));
        assert_eq!(r.source_abbrev.as_deref(), Some("CITATION INDEXING"));
        assert_eq!(r.volume, None);
        assert_eq!(r.page, None);
        assert!(r.complete3);
    }

    #[test]
    fn unparseable_keeps_raw_only() {
        let r = parse_cited_reference("UNTITLED MANUSCRIPT");
        assert_eq!(r.raw, "UNTITLED MANUSCRIPT");
        assert_eq!(r.author, None);
        assert_eq!(r.year, None);
        assert_eq!(r.source_abbrev, None);
        assert!(!r.complete3);
    }

    #[test]
    fn source_is_upper_cased() {
        let r = parse_cited_reference("Arnheim R, 1954, Art Visual Perception");
        assert_eq!(r.source_abbrev.as_deref(), Some("ART VISUAL PERCEPTION"));
    }

    #[test]
    fn old_works_and_bad_years() {
        assert_eq!(
            parse_cited_reference("VASARI G, 1550, VITE").year,
            Some(1550)
        );
        let r = parse_cited_reference("HOMER, 0800, ILIAD");
        assert_eq!(r.year, None);
        assert_eq!(r.source_abbrev, None);
        assert!(!r.complete3);
        assert_eq!(parse_cited_reference("X Y, 19851, Z").year, None);
    }

    #[test]
    fn author_with_inner_commas() {
        let r = parse_cited_reference("SMITH, J, 1990, ART BULL, V72, P10");
        assert_eq!(r.author.as_deref(), Some("SMITH"));
        assert_eq!(r.year, Some(1990));
        assert_eq!(r.source_abbrev.as_deref(), Some("ART BULL"));
        assert_eq!(r.volume, Some(72));
    }

    #[test]
    fn locator_after_year_is_not_a_source() {
        let r = parse_cited_reference("SMITH J, 1990, V12, P3");
        assert_eq!(r.source_abbrev, None);
        assert_eq!(r.volume, Some(12));
        assert_eq!(r.page.as_deref(), Some("3"));
        let r = parse_cited_reference("SMITH J, 1990, 1991");
        assert_eq!(r.source_abbrev, None);
    }

    #[test]
    fn journals_starting_with_p_or_v_are_sources() {
        let r = parse_cited_reference("LEE T, 2001, PHYS REV LETT, V86, P1");
        assert_eq!(r.source_abbrev.as_deref(), Some("PHYS REV LETT"));
        let r = parse_cited_reference("LEE T, 2001, VISION RES, V41, P1");
        assert_eq!(r.source_abbrev.as_deref(), Some("VISION RES"));
    }

    #[test]
    fn anonymous_reference_starts_with_year() {
        let r = parse_cited_reference("1985, ISIS, V76");
        assert_eq!(r.author, None);
        assert_eq!(r.year, Some(1985));
        assert_eq!(r.source_abbrev.as_deref(), Some("ISIS"));
        assert!(!r.complete3);
    }
}
