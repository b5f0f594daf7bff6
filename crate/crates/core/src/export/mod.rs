//! JSON bundles for the catalog and storytelling front ends.
//!
//! Every file carries `"schema": 1` next to its body fields.

mod catalog;
mod storytelling;
mod view;

use serde::Serialize;
use thiserror::Error;

pub use catalog::{
    export_catalog, AgentRef, AssertionGroup, Catalog, CatalogCard, CitationEntry, Collocation,
    FacetIndex, FacetLevel, FacetValue, FactualGroup, Period, ProvenanceGroup, ReferenceEntry,
    FACET_LEVELS,
};
pub use storytelling::{
    buckets, export_storytelling, theme_counts, HeatCell, KeywordCount, MapPoint, NetEdge, NetNode,
    Network, Omissions, StorytellingBundle, ThemeCount, TimelineEntry, WorkInfo,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_BUCKET_WIDTH: u32 = 50;
pub const DEFAULT_WORK: &str = "virgil-aeneis";

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("unknown work {0:?}")]
    UnknownWork(String),
}

#[derive(Serialize)]
struct Versioned<'a, T: Serialize> {
    schema: u32,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON with the schema field first.
pub fn to_bundle_json<T: Serialize>(body: &T) -> String {
    let mut s = serde_json::to_string_pretty(&Versioned {
        schema: SCHEMA_VERSION,
        body,
    })
    .expect("bundle types serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct Cards<'a> {
    cards: &'a [CatalogCard],
}

pub fn catalog_json(catalog: &Catalog) -> String {
    to_bundle_json(&Cards {
        cards: &catalog.cards,
    })
}

pub fn facets_json(catalog: &Catalog) -> String {
    to_bundle_json(&catalog.facets)
}

pub fn storytelling_json(bundle: &StorytellingBundle) -> String {
    to_bundle_json(bundle)
}
