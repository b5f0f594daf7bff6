//! Canonical citations (`Eneide, IV, 337-396`) to CTS URNs, and the plain
//! `Author, Title` references that sit next to them.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::SourceType;

pub const PERSEUS_CITATIONS: &str = "http://data.perseus.org/citations/";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CitationError {
    #[error("unknown work in citation {0:?}")]
    UnknownWork(String),
    #[error("malformed citation {raw:?}: {reason}")]
    Malformed { raw: String, reason: String },
    #[error("invalid Roman numeral {0:?}")]
    Roman(String),
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("registry entry {name:?}: {reason}")]
    Entry { name: String, reason: String },
}

const ROMAN: [(u32, &str); 13] = [
    (1000, "M"),
    (900, "CM"),
    (500, "D"),
    (400, "CD"),
    (100, "C"),
    (90, "XC"),
    (50, "L"),
    (40, "XL"),
    (10, "X"),
    (9, "IX"),
    (5, "V"),
    (4, "IV"),
    (1, "I"),
];

pub fn int_to_roman(mut n: u32) -> Result<String, CitationError> {
    if !(1..=3999).contains(&n) {
        return Err(CitationError::Roman(n.to_string()));
    }
    let mut out = String::new();
    for (value, symbol) in ROMAN {
        while n >= value {
            out.push_str(symbol);
            n -= value;
        }
    }
    Ok(out)
}

/// Canonical subtractive notation only: `IIII` or `VX` are rejected.
pub fn roman_to_int(s: &str) -> Result<u32, CitationError> {
    let upper = s.trim().to_ascii_uppercase();
    let digit = |c: char| match c {
        'I' => Some(1),
        'V' => Some(5),
        'X' => Some(10),
        'L' => Some(50),
        'C' => Some(100),
        'D' => Some(500),
        'M' => Some(1000),
        _ => None,
    };
    let values: Option<Vec<u32>> = upper.chars().map(digit).collect();
    let values = values
        .filter(|v| !v.is_empty())
        .ok_or_else(|| CitationError::Roman(s.to_string()))?;
    let mut total = 0u32;
    for (i, &v) in values.iter().enumerate() {
        match values.get(i + 1) {
            Some(&next) if next > v => total = total.wrapping_sub(v),
            _ => total = total.wrapping_add(v),
        }
    }
    match int_to_roman(total) {
        Ok(canonical) if canonical == upper => Ok(total),
        _ => Err(CitationError::Roman(s.to_string())),
    }
}

/// One classical work known to the citation parser.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkEntry {
    /// Name as written in the source collection, e.g. `Eneide`.
    pub name: String,
    #[serde(default)]
    pub aliases: Vec<String>,
    pub cts_base_urn: String,
    pub author_label: String,
    pub author_slug: String,
    pub work_slug: String,
    #[serde(default)]
    pub viaf_id: Option<String>,
}

/// Works addressable by canonical citations, keyed case-insensitively.
#[derive(Debug, Clone, Default)]
pub struct WorkRegistry {
    by_name: HashMap<String, usize>,
    entries: Vec<WorkEntry>,
}

fn registry_key(name: &str) -> String {
    name.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

fn valid_cts_base(urn: &str) -> bool {
    let parts: Vec<&str> = urn.split(':').collect();
    let simple = |s: &str| {
        !s.is_empty()
            && s.chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
    };
    parts.len() == 4
        && parts[0] == "urn"
        && parts[1] == "cts"
        && simple(parts[2])
        && {
            let work: Vec<&str> = parts[3].split('.').collect();
            work.len() == 3 && work.iter().all(|s| simple(s))
        }
}

impl WorkRegistry {
    pub fn new(entries: Vec<WorkEntry>) -> Result<Self, RegistryError> {
        let mut registry = WorkRegistry::default();
        for entry in entries {
            if !valid_cts_base(&entry.cts_base_urn) {
                return Err(RegistryError::Entry {
                    name: entry.name,
                    reason: format!("bad CTS base URN {:?}", entry.cts_base_urn),
                });
            }
            let idx = registry.entries.len();
            for name in std::iter::once(&entry.name).chain(&entry.aliases) {
                if registry.by_name.insert(registry_key(name), idx).is_some() {
                    return Err(RegistryError::Entry {
                        name: name.clone(),
                        reason: "name registered twice".into(),
                    });
                }
            }
            registry.entries.push(entry);
        }
        Ok(registry)
    }

    pub fn load(path: &Path) -> Result<Self, RegistryError> {
        let text = std::fs::read_to_string(path).map_err(|source| RegistryError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let entries = serde_json::from_str(&text).map_err(|source| RegistryError::Json {
            path: path.display().to_string(),
            source,
        })?;
        WorkRegistry::new(entries)
    }

    pub fn lookup(&self, name: &str) -> Option<&WorkEntry> {
        self.by_name
            .get(&registry_key(name))
            .map(|&i| &self.entries[i])
    }

    pub fn by_slug(&self, work_slug: &str) -> Option<&WorkEntry> {
        self.entries.iter().find(|e| e.work_slug == work_slug)
    }

    pub fn entries(&self) -> &[WorkEntry] {
        &self.entries
    }
}

/// A canonical citation resolved to a CTS URN.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalCitationRef {
    pub raw_label: String,
    pub work_key: String,
    pub book: Option<u32>,
    pub line_start: Option<u32>,
    pub line_end: Option<u32>,
    pub urn: String,
    pub perseus_url: String,
    pub content_slug: String,
}

impl CanonicalCitationRef {
    /// Re-renders as `Work, <Roman book>, <start>-<end>`.
    pub fn render(&self, work_label: &str) -> String {
        let mut out = work_label.to_string();
        if let Some(book) = self.book {
            out.push_str(", ");
            out.push_str(&int_to_roman(book).expect("books are positive"));
        }
        if let Some(start) = self.line_start {
            out.push_str(&format!(", {start}"));
            if let Some(end) = self.line_end.filter(|&e| e != start) {
                out.push_str(&format!("-{end}"));
            }
        }
        out
    }
}

/// The passage component of a CTS URN: book, optional line range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Passage {
    pub book: Option<u32>,
    pub start: Option<u32>,
    pub end: Option<u32>,
}

impl Passage {
    /// Reads the passage back out of a full URN (the part after the work).
    pub fn from_urn(urn: &str) -> Option<Self> {
        let parts: Vec<&str> = urn.splitn(5, ':').collect();
        if parts.len() < 5 {
            return Some(Passage { book: None, start: None, end: None });
        }
        Self::parse(parts[4])
    }

    /// Reads the `book.line-book.line` form written by `Display`.
    pub fn parse(passage: &str) -> Option<Self> {
        if passage.is_empty() {
            return Some(Passage { book: None, start: None, end: None });
        }
        let point = |p: &str| -> Option<(Option<u32>, u32)> {
            match p.split_once('.') {
                Some((b, l)) => Some((Some(b.parse().ok()?), l.parse().ok()?)),
                None => Some((None, p.parse().ok()?)),
            }
        };
        match passage.split_once('-') {
            Some((a, b)) => {
                let (book_a, start) = point(a)?;
                let (book_b, end) = point(b)?;
                if book_a != book_b {
                    return None;
                }
                Some(Passage { book: book_a, start: Some(start), end: Some(end) })
            }
            None => {
                if passage.contains('.') {
                    let (book, line) = point(passage)?;
                    Some(Passage { book, start: Some(line), end: Some(line) })
                } else {
                    Some(Passage { book: Some(passage.parse().ok()?), start: None, end: None })
                }
            }
        }
    }
}

impl fmt::Display for Passage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let point = |f: &mut fmt::Formatter<'_>, line: u32| match self.book {
            Some(book) => write!(f, "{book}.{line}"),
            None => write!(f, "{line}"),
        };
        match (self.start, self.end) {
            (Some(start), Some(end)) if end != start => {
                point(f, start)?;
                f.write_str("-")?;
                point(f, end)
            }
            (Some(start), _) => point(f, start),
            _ => match self.book {
                Some(book) => write!(f, "{book}"),
                None => Ok(()),
            },
        }
    }
}

fn parse_range(raw: &str, segment: &str) -> Result<(u32, u32), CitationError> {
    let malformed = |reason: &str| CitationError::Malformed {
        raw: raw.to_string(),
        reason: reason.to_string(),
    };
    let lower = segment.to_ascii_lowercase();
    let body = lower
        .strip_prefix("vv.")
        .or_else(|| lower.strip_prefix("v."))
        .unwrap_or(&lower)
        .trim();
    let number = |s: &str| -> Result<u32, CitationError> {
        let s = s.trim();
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed("line numbers must be decimal"));
        }
        s.parse::<u32>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| malformed("line numbers must be positive"))
    };
    let (start, end) = match body.split_once('-') {
        Some((a, b)) => (number(a)?, number(b)?),
        None => {
            let n = number(body)?;
            (n, n)
        }
    };
    if end < start {
        return Err(malformed("range ends before it starts"));
    }
    Ok((start, end))
}

/// Parses `Work[, Book][, [vv.|v.] N[-M]]` against the registry.
pub fn parse_canonical_citation(
    raw: &str,
    registry: &WorkRegistry,
) -> Result<CanonicalCitationRef, CitationError> {
    let label = raw.trim();
    let segments: Vec<&str> = label.split(',').map(str::trim).collect();
    let work = registry
        .lookup(segments[0])
        .ok_or_else(|| CitationError::UnknownWork(label.to_string()))?;
    let malformed = |reason: &str| CitationError::Malformed {
        raw: label.to_string(),
        reason: reason.to_string(),
    };
    let is_roman = |s: &str| roman_to_int(s).is_ok();
    let (book, range) = match &segments[1..] {
        [] => (None, None),
        [one] if is_roman(one) => (Some(roman_to_int(one)?), None),
        [one] => (None, Some(parse_range(label, one)?)),
        [book, range] => {
            let book = roman_to_int(book)?;
            (Some(book), Some(parse_range(label, range)?))
        }
        _ => return Err(malformed("too many components")),
    };
    if segments.iter().any(|s| s.is_empty()) {
        return Err(malformed("empty component"));
    }
    let passage = Passage {
        book,
        start: range.map(|r| r.0),
        end: range.map(|r| r.1),
    };
    let passage_text = passage.to_string();
    let urn = if passage_text.is_empty() {
        work.cts_base_urn.clone()
    } else {
        format!("{}:{}", work.cts_base_urn, passage_text)
    };
    let mut slug_parts = Vec::new();
    if let Some(book) = book {
        slug_parts.push(int_to_roman(book)?);
    }
    if let Some((start, end)) = range {
        slug_parts.push(start.to_string());
        if end != start {
            slug_parts.push(end.to_string());
        }
    }
    Ok(CanonicalCitationRef {
        raw_label: label.to_string(),
        work_key: work.work_slug.clone(),
        book,
        line_start: range.map(|r| r.0),
        line_end: range.map(|r| r.1),
        perseus_url: format!("{PERSEUS_CITATIONS}{urn}"),
        urn,
        content_slug: slug_parts.join("-"),
    })
}

/// A non-canonical `Author, Title` source reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralReference {
    pub raw: String,
    pub author_raw: String,
    pub work_title: String,
    pub type_tag: SourceType,
}

/// Known problem strings mapped to their (author, title) split.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ReferenceOverrides(HashMap<String, (String, String)>);

impl ReferenceOverrides {
    pub fn load(path: &Path) -> Result<Self, RegistryError> {
        let text = std::fs::read_to_string(path).map_err(|source| RegistryError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| RegistryError::Json {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn insert(&mut self, raw: &str, author: &str, title: &str) {
        self.0
            .insert(raw.trim().to_string(), (author.to_string(), title.to_string()));
    }

    fn get(&self, raw: &str) -> Option<&(String, String)> {
        self.0.get(raw.trim())
    }
}

/// Splits at the first comma unless the override table knows better.
pub fn parse_general_reference(
    raw: &str,
    type_tag: SourceType,
    overrides: &ReferenceOverrides,
) -> GeneralReference {
    let trimmed = raw.trim();
    let (author, title) = match overrides.get(trimmed) {
        Some((a, t)) => (a.clone(), t.clone()),
        None => match trimmed.split_once(',') {
            Some((a, t)) => (a.trim().to_string(), t.trim().to_string()),
            None => (String::new(), trimmed.to_string()),
        },
    };
    GeneralReference {
        raw: raw.to_string(),
        author_raw: author,
        work_title: title,
        type_tag,
    }
}
