//! Field-level normalization of one raw row into a prepared record.
//!
//! Bad cells never abort the row: the field is dropped and an issue is
//! recorded for the build report.

use serde::Serialize;

use crate::citeparse::{
    parse_canonical_citation, parse_general_reference, CanonicalCitationRef, CitationError,
    GeneralReference, ReferenceOverrides, WorkRegistry,
};
use crate::ingest::{assign_item_id, RawRecord, SourceType};
use crate::normalize::{
    normalize_person, parse_interpretation_datetime, parse_timespan, slugify, split_keywords,
    split_location, split_theme, strip_serialization_noise, NameOrder, PersonRef, PlaceRef,
    ThemeRef, TimeSpan,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueClass {
    Normalize,
    Citation,
    Duplicate,
    Integrity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecordIssue {
    pub item_id: String,
    pub field: String,
    pub class: IssueClass,
    pub message: String,
}

/// Name order per person-bearing column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Deserialize, Serialize)]
#[serde(default)]
pub struct NameOrders {
    pub interpreter: NameOrder,
    pub artwork_author: NameOrder,
    pub reference_author: NameOrder,
}

impl Default for NameOrders {
    fn default() -> Self {
        NameOrders {
            interpreter: NameOrder::SurnameFirst,
            artwork_author: NameOrder::GivenFirst,
            reference_author: NameOrder::SurnameFirst,
        }
    }
}

pub struct PrepareContext<'a> {
    pub registry: &'a WorkRegistry,
    pub overrides: &'a ReferenceOverrides,
    pub name_orders: NameOrders,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeRef {
    pub slug: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreparedRecord {
    pub item_id: String,
    pub title: String,
    pub typologies: Vec<TypeRef>,
    pub theme: Option<ThemeRef>,
    pub author: Option<PersonRef>,
    pub interpreter: Option<PersonRef>,
    pub century: Option<TimeSpan>,
    pub year: Option<TimeSpan>,
    pub interpreted_at: Option<String>,
    pub location: Option<PlaceRef>,
    pub citations: Vec<CanonicalCitationRef>,
    pub references: Vec<GeneralReference>,
    pub keywords: Vec<String>,
    pub description: String,
    pub image_url: String,
    pub see_also: String,
}

struct Issues<'a> {
    item_id: &'a str,
    list: Vec<RecordIssue>,
}

impl Issues<'_> {
    fn push(&mut self, field: &str, class: IssueClass, message: impl ToString) {
        self.list.push(RecordIssue {
            item_id: self.item_id.to_string(),
            field: field.to_string(),
            class,
            message: message.to_string(),
        });
    }

    fn clean(&mut self, field: &str, raw: &str) -> String {
        strip_serialization_noise(raw).unwrap_or_else(|e| {
            self.push(field, IssueClass::Normalize, e);
            raw.trim().to_string()
        })
    }
}

fn non_empty(s: &str) -> Option<&str> {
    let s = s.trim();
    (!s.is_empty()).then_some(s)
}

pub fn prepare_record(
    raw: &RawRecord,
    row_index: usize,
    ctx: &PrepareContext<'_>,
) -> (PreparedRecord, Vec<RecordIssue>) {
    let item_id = assign_item_id(raw, row_index);
    let mut issues = Issues {
        item_id: &item_id,
        list: Vec::new(),
    };

    let title = issues.clean("title", &raw.title);

    let mut typologies = Vec::new();
    let typology = issues.clean("typology", &raw.typology_raw);
    for label in typology.split(';').filter_map(non_empty) {
        match slugify(label) {
            Ok(slug) => {
                let t = TypeRef {
                    slug,
                    label: label.to_string(),
                };
                if !typologies.contains(&t) {
                    typologies.push(t);
                }
            }
            Err(e) => issues.push("typology", IssueClass::Normalize, e),
        }
    }

    let theme_raw = issues.clean("theme", &raw.theme_raw);
    let theme = non_empty(&theme_raw).and_then(|t| {
        split_theme(t)
            .map_err(|e| issues.push("theme", IssueClass::Normalize, e))
            .ok()
    });

    let mut person = |field: &str, raw: &str, order: NameOrder| {
        non_empty(raw).and_then(|r| {
            normalize_person(r, order)
                .map_err(|e| issues.push(field, IssueClass::Normalize, e))
                .ok()
        })
    };
    let author = person("artwork_author", &raw.artwork_author_raw, ctx.name_orders.artwork_author);
    let interpreter = person("interpreter", &raw.interpreter_raw, ctx.name_orders.interpreter);

    let mut span = |field: &str, raw: &str| {
        non_empty(raw).and_then(|r| {
            parse_timespan(r)
                .map_err(|e| issues.push(field, IssueClass::Normalize, e))
                .ok()
        })
    };
    let century = span("century", &raw.century_raw);
    let year = span("year", &raw.year_raw);

    let interpreted_at = non_empty(&raw.interpretation_date_raw).and_then(|r| {
        parse_interpretation_datetime(r)
            .map_err(|e| issues.push("interpretation_date", IssueClass::Normalize, e))
            .ok()
    });

    let location = non_empty(&raw.location_raw).and_then(|r| {
        split_location(r)
            .map_err(|e| issues.push("location", IssueClass::Normalize, e))
            .ok()
    });

    let mut citations: Vec<CanonicalCitationRef> = Vec::new();
    let mut references: Vec<GeneralReference> = Vec::new();
    for cell in &raw.classical_sources_raw {
        let cell = issues.clean("classical_sources", cell);
        let Some(cell) = non_empty(&cell) else {
            continue;
        };
        match parse_canonical_citation(cell, ctx.registry) {
            Ok(c) => {
                if !citations.iter().any(|x| x.urn == c.urn) {
                    citations.push(c);
                }
            }
            Err(e) => {
                // Not a known canonical text: keep it as a plain reference.
                if !matches!(e, CitationError::UnknownWork(_)) {
                    issues.push("classical_sources", IssueClass::Citation, &e);
                }
                log::debug!("{item_id}: {cell:?} kept as general reference ({e})");
                references.push(parse_general_reference(
                    cell,
                    SourceType::FonteClassica,
                    ctx.overrides,
                ));
            }
        }
    }
    for (source_type, cell) in &raw.other_sources_raw {
        let cell = issues.clean("other_sources", cell);
        if let Some(cell) = non_empty(&cell) {
            let r = parse_general_reference(cell, *source_type, ctx.overrides);
            if !references.iter().any(|x| x.raw == r.raw && x.type_tag == r.type_tag) {
                references.push(r);
            }
        }
    }

    let keywords_raw = issues.clean("keywords", &raw.keywords_raw);
    let mut keywords: Vec<String> = Vec::new();
    for k in split_keywords(&keywords_raw) {
        if !keywords.contains(&k) {
            keywords.push(k);
        }
    }

    let record = PreparedRecord {
        item_id: item_id.clone(),
        title,
        typologies,
        theme,
        author,
        interpreter,
        century,
        year,
        interpreted_at,
        location,
        citations,
        references,
        keywords,
        description: raw.description.trim().to_string(),
        image_url: raw.image_url.trim().to_string(),
        see_also: raw.see_also.trim().to_string(),
    };
    (record, issues.list)
}
