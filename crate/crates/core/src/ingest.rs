//! Reading the tabular source collection into [`RawRecord`]s.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("row {row}: {reason}")]
    Row { row: usize, reason: String },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot parse column mapping {path}: {source}")]
    Mapping {
        path: String,
        source: serde_json::Error,
    },
}

/// Category of a literary source attached to an object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SourceType {
    RiscritturaLetteraria,
    FonteClassica,
    FonteMedievaleOModerna,
    RiscritturaCinematografica,
}

impl SourceType {
    pub const ALL: [SourceType; 4] = [
        SourceType::RiscritturaLetteraria,
        SourceType::FonteClassica,
        SourceType::FonteMedievaleOModerna,
        SourceType::RiscritturaCinematografica,
    ];

    /// Local name of the type node, e.g. `fonteClassica`.
    pub fn type_slug(self) -> &'static str {
        match self {
            SourceType::RiscritturaLetteraria => "riscritturaLetteraria",
            SourceType::FonteClassica => "fonteClassica",
            SourceType::FonteMedievaleOModerna => "fonteMedievaleOModerna",
            SourceType::RiscritturaCinematografica => "riscritturaCinematografica",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SourceType::RiscritturaLetteraria => "Riscrittura Letteraria",
            SourceType::FonteClassica => "Fonte Classica",
            SourceType::FonteMedievaleOModerna => "Fonte Medievale o Moderna",
            SourceType::RiscritturaCinematografica => "Riscrittura Cinematografica",
        }
    }
}

impl fmt::Display for SourceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SourceType::RiscritturaLetteraria => "RiscritturaLetteraria",
            SourceType::FonteClassica => "FonteClassica",
            SourceType::FonteMedievaleOModerna => "FonteMedievaleOModerna",
            SourceType::RiscritturaCinematografica => "RiscritturaCinematografica",
        })
    }
}

impl FromStr for SourceType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SourceType::ALL
            .into_iter()
            .find(|t| t.to_string() == s)
            .ok_or_else(|| format!("unknown source type {s:?}"))
    }
}

/// One unprocessed row of the source table. Cells are kept verbatim apart
/// from outer whitespace.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawRecord {
    pub item_id: Option<String>,
    pub title: String,
    pub typology_raw: String,
    pub theme_raw: String,
    pub artwork_author_raw: String,
    pub interpreter_raw: String,
    pub century_raw: String,
    pub year_raw: String,
    pub interpretation_date_raw: String,
    pub location_raw: String,
    pub classical_sources_raw: Vec<String>,
    pub other_sources_raw: Vec<(SourceType, String)>,
    pub keywords_raw: String,
    pub description: String,
    pub image_url: String,
    pub see_also: String,
}

/// Source column headers for each record field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Columns {
    #[serde(default)]
    pub item_id: Option<String>,
    pub title: String,
    pub typology_raw: String,
    pub theme_raw: String,
    pub artwork_author_raw: String,
    pub interpreter_raw: String,
    pub century_raw: String,
    pub year_raw: String,
    pub interpretation_date_raw: String,
    pub location_raw: String,
    pub classical_sources_raw: String,
    pub keywords_raw: String,
    pub description: String,
    pub image_url: String,
    pub see_also: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColumnMapping {
    pub columns: Columns,
    /// One list-valued column per source category.
    pub other_sources: BTreeMap<SourceType, String>,
    #[serde(default = "default_delimiter")]
    pub delimiter: String,
}

fn default_delimiter() -> String {
    ";".to_string()
}

impl ColumnMapping {
    pub fn load(path: &Path) -> Result<Self, IngestError> {
        let text = std::fs::read_to_string(path).map_err(|source| IngestError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| IngestError::Mapping {
            path: path.display().to_string(),
            source,
        })
    }

    fn headers(&self) -> Vec<(&'static str, &str)> {
        let c = &self.columns;
        let mut out = vec![
            ("title", c.title.as_str()),
            ("typology_raw", &c.typology_raw),
            ("theme_raw", &c.theme_raw),
            ("artwork_author_raw", &c.artwork_author_raw),
            ("interpreter_raw", &c.interpreter_raw),
            ("century_raw", &c.century_raw),
            ("year_raw", &c.year_raw),
            ("interpretation_date_raw", &c.interpretation_date_raw),
            ("location_raw", &c.location_raw),
            ("classical_sources_raw", &c.classical_sources_raw),
            ("keywords_raw", &c.keywords_raw),
            ("description", &c.description),
            ("image_url", &c.image_url),
            ("see_also", &c.see_also),
        ];
        if let Some(id) = &c.item_id {
            out.insert(0, ("item_id", id));
        }
        for header in self.other_sources.values() {
            out.push(("other_sources_raw", header));
        }
        out
    }

    fn validate(&self) -> Result<(), IngestError> {
        if self.delimiter.is_empty() {
            return Err(IngestError::Schema("list delimiter must not be empty".into()));
        }
        let mut seen = HashSet::new();
        for (field, header) in self.headers() {
            if !seen.insert(header) {
                return Err(IngestError::Schema(format!(
                    "column {header:?} is mapped twice (again by {field})"
                )));
            }
        }
        Ok(())
    }
}

struct ColumnIndex {
    item_id: Option<usize>,
    fields: Vec<usize>,
    other: Vec<(SourceType, usize)>,
}

fn locate(headers: &csv::StringRecord, mapping: &ColumnMapping) -> Result<ColumnIndex, IngestError> {
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| IngestError::Schema(format!("missing mapped column {name:?}")))
    };
    let c = &mapping.columns;
    let item_id = c.item_id.as_deref().map(find).transpose()?;
    let fields = [
        &c.title,
        &c.typology_raw,
        &c.theme_raw,
        &c.artwork_author_raw,
        &c.interpreter_raw,
        &c.century_raw,
        &c.year_raw,
        &c.interpretation_date_raw,
        &c.location_raw,
        &c.classical_sources_raw,
        &c.keywords_raw,
        &c.description,
        &c.image_url,
        &c.see_also,
    ]
    .iter()
    .map(|h| find(h))
    .collect::<Result<Vec<_>, _>>()?;
    let other = mapping
        .other_sources
        .iter()
        .map(|(t, h)| Ok((*t, find(h)?)))
        .collect::<Result<Vec<_>, IngestError>>()?;
    Ok(ColumnIndex { item_id, fields, other })
}

fn split_list(cell: &str, delimiter: &str) -> Vec<String> {
    cell.split(delimiter)
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

/// Reads a UTF-8 CSV with a header row. Row numbers in errors are 1-based
/// data-row indexes.
pub fn parse_table(path: &Path, mapping: &ColumnMapping) -> Result<Vec<RawRecord>, IngestError> {
    let file = std::fs::File::open(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_reader(file, mapping)
}

pub fn parse_reader<R: std::io::Read>(
    reader: R,
    mapping: &ColumnMapping,
) -> Result<Vec<RawRecord>, IngestError> {
    mapping.validate()?;
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let headers = csv.headers()?.clone();
    let index = locate(&headers, mapping)?;
    let mut records = Vec::new();
    for (i, row) in csv.records().enumerate() {
        let row_number = i + 1;
        let row = row.map_err(|e| IngestError::Row {
            row: row_number,
            reason: e.to_string(),
        })?;
        if row.len() != headers.len() {
            return Err(IngestError::Row {
                row: row_number,
                reason: format!("expected {} cells, found {}", headers.len(), row.len()),
            });
        }
        let cell = |idx: usize| row.get(idx).unwrap_or("").trim().to_string();
        let f: Vec<String> = index.fields.iter().map(|&i| cell(i)).collect();
        let item_id = index.item_id.map(cell).filter(|s| !s.is_empty());
        let mut other_sources_raw = Vec::new();
        for &(tag, col) in &index.other {
            for value in split_list(&cell(col), &mapping.delimiter) {
                other_sources_raw.push((tag, value));
            }
        }
        records.push(RawRecord {
            item_id,
            title: f[0].clone(),
            typology_raw: f[1].clone(),
            theme_raw: f[2].clone(),
            artwork_author_raw: f[3].clone(),
            interpreter_raw: f[4].clone(),
            century_raw: f[5].clone(),
            year_raw: f[6].clone(),
            interpretation_date_raw: f[7].clone(),
            location_raw: f[8].clone(),
            classical_sources_raw: split_list(&f[9], &mapping.delimiter),
            other_sources_raw,
            keywords_raw: f[10].clone(),
            description: f[11].clone(),
            image_url: f[12].clone(),
            see_also: f[13].clone(),
        });
    }
    Ok(records)
}

/// Writes records back out using the same mapping.
pub fn write_table<W: std::io::Write>(
    writer: W,
    records: &[RawRecord],
    mapping: &ColumnMapping,
) -> Result<(), IngestError> {
    mapping.validate()?;
    let mut csv = csv::Writer::from_writer(writer);
    let headers: Vec<&str> = mapping.headers().into_iter().map(|(_, h)| h).collect();
    csv.write_record(&headers)?;
    let joiner = format!("{} ", mapping.delimiter);
    for r in records {
        let mut row: Vec<String> = Vec::with_capacity(headers.len());
        if mapping.columns.item_id.is_some() {
            row.push(r.item_id.clone().unwrap_or_default());
        }
        row.extend([
            r.title.clone(),
            r.typology_raw.clone(),
            r.theme_raw.clone(),
            r.artwork_author_raw.clone(),
            r.interpreter_raw.clone(),
            r.century_raw.clone(),
            r.year_raw.clone(),
            r.interpretation_date_raw.clone(),
            r.location_raw.clone(),
            r.classical_sources_raw.join(&joiner),
            r.keywords_raw.clone(),
            r.description.clone(),
            r.image_url.clone(),
            r.see_also.clone(),
        ]);
        for tag in mapping.other_sources.keys() {
            let values: Vec<&str> = r
                .other_sources_raw
                .iter()
                .filter(|(t, _)| t == tag)
                .map(|(_, v)| v.as_str())
                .collect();
            row.push(values.join(&joiner));
        }
        csv.write_record(&row)?;
    }
    csv.flush().map_err(|source| IngestError::Io {
        path: "<writer>".into(),
        source,
    })?;
    Ok(())
}

/// The record's own id, or its 1-based row index.
pub fn assign_item_id(record: &RawRecord, row_index: usize) -> String {
    match record.item_id.as_deref().map(str::trim) {
        Some(id) if !id.is_empty() => id.to_string(),
        _ => row_index.to_string(),
    }
}
