//! Authority control: alias resolution, offline authority fixtures and the
//! optional online reconciliation services.

mod client;

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::normalize::{slugify, Coordinates};

pub use client::{
    OnlineConfig, OnlineResolver, RateLimiterHandle, ReconciliationClient, Transport,
    TransportError, UreqTransport,
    ViafClient,
};

/// Candidates at or above this score are accepted without review.
pub const DEFAULT_ACCEPT_THRESHOLD: f64 = 0.9;

#[derive(Debug, Error)]
pub enum ReconcileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {reason}")]
    Parse { path: String, reason: String },
    #[error("alias {key:?} maps to both {first:?} and {second:?}")]
    AliasConflict {
        key: String,
        first: String,
        second: String,
    },
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error("unexpected response from {service}: {reason}")]
    Response { service: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityKind {
    Person,
    Work,
    Place,
}

impl EntityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EntityKind::Person => "person",
            EntityKind::Work => "work",
            EntityKind::Place => "place",
        }
    }
}

/// Authority sources, declared in tie-break priority order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AuthoritySource {
    #[serde(rename = "VIAF")]
    Viaf,
    Wikidata,
    #[serde(rename = "HuCitKB")]
    HuCitKb,
}

impl AuthoritySource {
    pub fn as_str(self) -> &'static str {
        match self {
            AuthoritySource::Viaf => "VIAF",
            AuthoritySource::Wikidata => "Wikidata",
            AuthoritySource::HuCitKb => "HuCitKB",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "VIAF" => Some(AuthoritySource::Viaf),
            "Wikidata" => Some(AuthoritySource::Wikidata),
            "HuCitKB" => Some(AuthoritySource::HuCitKb),
            _ => None,
        }
    }

    /// The dereferenceable IRI for an identifier of this source.
    pub fn entity_iri(self, id: &str) -> Option<String> {
        if id.starts_with("http://") || id.starts_with("https://") {
            return Some(id.to_string());
        }
        match self {
            AuthoritySource::Viaf => Some(format!("http://viaf.org/viaf/{id}")),
            AuthoritySource::Wikidata => Some(format!("http://www.wikidata.org/entity/{id}")),
            AuthoritySource::HuCitKb => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuthorityLink {
    pub source: AuthoritySource,
    pub external_id: String,
    pub controlled_label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Coordinates>,
    /// Country label for place entities.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub country: Option<String>,
    pub score: f64,
}

/// Best-first: score descending, then VIAF > Wikidata > HuCitKB, then id.
pub fn sort_links(links: &mut [AuthorityLink]) {
    links.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then(a.source.cmp(&b.source))
            .then_with(|| a.external_id.cmp(&b.external_id))
    });
}

/// Variant spellings mapped to one canonical slug. Keys are slugified.
#[derive(Debug, Clone, Default)]
pub struct AliasTable {
    map: HashMap<String, String>,
}

impl AliasTable {
    /// Builds the table from `canonical slug -> [variants]`.
    pub fn from_variants(
        groups: &BTreeMap<String, Vec<String>>,
    ) -> Result<Self, ReconcileError> {
        let mut table = AliasTable::default();
        for (canonical, variants) in groups {
            table.add(canonical, canonical)?;
            for variant in variants {
                table.add(variant, canonical)?;
            }
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self, ReconcileError> {
        let text = read(path)?;
        let groups: BTreeMap<String, Vec<String>> =
            serde_json::from_str(&text).map_err(|e| ReconcileError::Parse {
                path: path.display().to_string(),
                reason: e.to_string(),
            })?;
        AliasTable::from_variants(&groups)
    }

    pub fn add(&mut self, variant: &str, canonical: &str) -> Result<(), ReconcileError> {
        let Ok(key) = slugify(variant) else {
            return Ok(());
        };
        match self.map.get(&key) {
            Some(existing) if existing != canonical => Err(ReconcileError::AliasConflict {
                key,
                first: existing.clone(),
                second: canonical.to_string(),
            }),
            _ => {
                self.map.insert(key, canonical.to_string());
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Exact lookup on the slugified form; no fuzzy matching.
pub fn resolve_alias<'a>(raw: &str, table: &'a AliasTable) -> Option<&'a str> {
    let key = slugify(raw).ok()?;
    table.map.get(&key).map(String::as_str)
}

#[derive(Debug, Clone, Deserialize)]
struct FixtureCoordinates {
    lat: serde_json::Number,
    lon: serde_json::Number,
}

#[derive(Debug, Clone, Deserialize)]
struct FixtureEntry {
    kind: EntityKind,
    key: String,
    source: AuthoritySource,
    external_id: String,
    controlled_label: String,
    #[serde(default)]
    coordinates: Option<FixtureCoordinates>,
    #[serde(default)]
    country: Option<String>,
    #[serde(default = "full_score")]
    score: f64,
}

fn full_score() -> f64 {
    1.0
}

/// Local authority data keyed by (kind, slug).
#[derive(Debug, Clone, Default)]
pub struct AuthorityFixture {
    entries: HashMap<(EntityKind, String), Vec<AuthorityLink>>,
}

impl AuthorityFixture {
    pub fn load(path: &Path) -> Result<Self, ReconcileError> {
        let text = read(path)?;
        let perr = |reason: String| ReconcileError::Parse {
            path: path.display().to_string(),
            reason,
        };
        let raw: Vec<FixtureEntry> = serde_json::from_str(&text).map_err(|e| perr(e.to_string()))?;
        let mut fixture = AuthorityFixture::default();
        for entry in raw {
            if entry.external_id.trim().is_empty() {
                return Err(perr(format!("entry {:?} has an empty external_id", entry.key)));
            }
            if !(0.0..=1.0).contains(&entry.score) {
                return Err(perr(format!("entry {:?} score outside [0,1]", entry.key)));
            }
            let coordinates = match entry.coordinates {
                Some(c) if entry.kind == EntityKind::Place => Some(
                    Coordinates::new(c.lat.to_string(), c.lon.to_string())
                        .map_err(|e| perr(e.to_string()))?,
                ),
                Some(_) => return Err(perr(format!("coordinates on non-place {:?}", entry.key))),
                None => None,
            };
            fixture.insert(
                entry.kind,
                &entry.key,
                AuthorityLink {
                    source: entry.source,
                    external_id: entry.external_id,
                    controlled_label: entry.controlled_label,
                    coordinates,
                    country: entry.country,
                    score: entry.score,
                },
            );
        }
        Ok(fixture)
    }

    pub fn insert(&mut self, kind: EntityKind, key: &str, link: AuthorityLink) {
        let links = self.entries.entry((kind, key.to_string())).or_default();
        links.retain(|l| !(l.source == link.source && l.external_id == link.external_id));
        links.push(link);
    }

    pub fn get(&self, kind: EntityKind, key: &str) -> &[AuthorityLink] {
        self.entries
            .get(&(kind, key.to_string()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Offline,
    Online,
}

/// A normalized entity with its stable slug and current display label.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedEntity {
    pub kind: EntityKind,
    pub slug: String,
    pub label: String,
    pub links: Vec<AuthorityLink>,
}

impl ResolvedEntity {
    pub fn new(kind: EntityKind, slug: impl Into<String>, label: impl Into<String>) -> Self {
        ResolvedEntity {
            kind,
            slug: slug.into(),
            label: label.into(),
            links: Vec::new(),
        }
    }

    pub fn coordinates(&self) -> Option<&Coordinates> {
        self.links.iter().find_map(|l| l.coordinates.as_ref())
    }

    pub fn country(&self) -> Option<&str> {
        self.links.iter().find_map(|l| l.country.as_deref())
    }
}

/// Top link's label replaces the display label; every link is kept. The
/// slug never changes.
pub fn apply_links(mut entity: ResolvedEntity, links: Vec<AuthorityLink>) -> ResolvedEntity {
    if let Some(top) = links.first() {
        entity.label = top.controlled_label.clone();
    }
    for link in links {
        if !entity
            .links
            .iter()
            .any(|l| l.source == link.source && l.external_id == link.external_id)
        {
            entity.links.push(link);
        }
    }
    entity
}

/// One candidate row for human review.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReviewRow {
    pub kind: EntityKind,
    pub raw: String,
    pub candidate_source: String,
    pub candidate_id: String,
    pub candidate_label: String,
    pub score: f64,
    pub accepted: bool,
}

pub fn write_review<W: std::io::Write>(writer: W, rows: &[ReviewRow]) -> Result<(), csv::Error> {
    let mut csv = csv::Writer::from_writer(writer);
    for row in rows {
        csv.serialize(row)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn read_review<R: std::io::Read>(reader: R) -> Result<Vec<ReviewRow>, csv::Error> {
    csv::Reader::from_reader(reader).deserialize().collect()
}

/// Resolves labels to authority links, offline first.
pub struct Reconciler {
    aliases: AliasTable,
    fixture: AuthorityFixture,
    online: Option<OnlineResolver>,
    online_cache: HashMap<(EntityKind, String), Vec<AuthorityLink>>,
    threshold: f64,
    review: Vec<ReviewRow>,
}

impl Reconciler {
    pub fn new(aliases: AliasTable, fixture: AuthorityFixture) -> Self {
        Reconciler {
            aliases,
            fixture,
            online: None,
            online_cache: HashMap::new(),
            threshold: DEFAULT_ACCEPT_THRESHOLD,
            review: Vec::new(),
        }
    }

    pub fn with_online(mut self, online: OnlineResolver) -> Self {
        self.online = Some(online);
        self
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn aliases(&self) -> &AliasTable {
        &self.aliases
    }

    /// The canonical slug for a raw label: alias hit, else its slug.
    pub fn canonical_slug(&self, raw: &str) -> Option<String> {
        resolve_alias(raw, &self.aliases)
            .map(str::to_string)
            .or_else(|| slugify(raw).ok())
    }

    /// Feeds accepted review rows back in as authority entries.
    pub fn ingest_review(&mut self, rows: &[ReviewRow]) {
        for row in rows.iter().filter(|r| r.accepted) {
            let Some(source) = AuthoritySource::parse(&row.candidate_source) else {
                continue;
            };
            if let Some(key) = self.canonical_slug(&row.raw) {
                self.fixture.insert(
                    row.kind,
                    &key,
                    AuthorityLink {
                        source,
                        external_id: row.candidate_id.clone(),
                        controlled_label: row.candidate_label.clone(),
                        coordinates: None,
                        country: None,
                        score: 1.0,
                    },
                );
            }
        }
    }

    /// Issues all online lookups up front, concurrently; failures are
    /// logged and leave the offline result in place.
    pub fn prefetch(&mut self, queries: &[(EntityKind, String)]) {
        let Some(online) = &self.online else {
            return;
        };
        let mut pending: Vec<(EntityKind, String)> = queries
            .iter()
            .filter(|q| !self.online_cache.contains_key(*q))
            .cloned()
            .collect();
        pending.sort();
        pending.dedup();
        for (query, result) in online.lookup_many(&pending) {
            match result {
                Ok(links) => {
                    self.online_cache.insert(query, links);
                }
                Err(e) => log::warn!(
                    "online reconciliation of {} {:?} failed, using offline data: {e}",
                    query.0.as_str(),
                    query.1
                ),
            }
        }
    }

    /// All candidate links for a label, best first.
    pub fn reconcile_entity(&mut self, kind: EntityKind, label: &str, mode: Mode) -> Vec<AuthorityLink> {
        match self.canonical_slug(label) {
            Some(key) => self.candidates(kind, &[key], label, mode),
            None => Vec::new(),
        }
    }

    fn candidates(&mut self, kind: EntityKind, keys: &[String], label: &str, mode: Mode) -> Vec<AuthorityLink> {
        let mut links: Vec<AuthorityLink> = Vec::new();
        for key in keys {
            merge_links(&mut links, self.fixture.get(kind, key));
        }
        if mode == Mode::Online && self.online.is_some() {
            let query = (kind, label.to_string());
            if !self.online_cache.contains_key(&query) {
                self.prefetch(std::slice::from_ref(&query));
            }
            if let Some(online) = self.online_cache.get(&query) {
                merge_links(&mut links, online);
            }
        }
        sort_links(&mut links);
        links
    }

    /// Reconciles and splits candidates at the threshold. Rejected ones are
    /// queued for the review file.
    /// The fixture is keyed by the entity slug first, then by the slug of
    /// the raw label.
    pub fn resolve(&mut self, entity: ResolvedEntity, raw: &str, mode: Mode) -> ResolvedEntity {
        let mut keys = vec![entity.slug.clone()];
        if let Some(key) = self.canonical_slug(raw).filter(|k| *k != entity.slug) {
            keys.push(key);
        }
        let links = self.candidates(entity.kind, &keys, raw, mode);
        let (accepted, rejected): (Vec<_>, Vec<_>) =
            links.into_iter().partition(|l| l.score >= self.threshold);
        for link in rejected {
            let row = ReviewRow {
                kind: entity.kind,
                raw: raw.to_string(),
                candidate_source: link.source.as_str().to_string(),
                candidate_id: link.external_id,
                candidate_label: link.controlled_label,
                score: link.score,
                accepted: false,
            };
            if !self.review.contains(&row) {
                self.review.push(row);
            }
        }
        apply_links(entity, accepted)
    }

    pub fn review_rows(&self) -> &[ReviewRow] {
        &self.review
    }
}

/// Merges by (source, external_id), keeping the higher score and any
/// coordinates either side has.
fn merge_links(into: &mut Vec<AuthorityLink>, from: &[AuthorityLink]) {
    for link in from {
        match into
            .iter_mut()
            .find(|l| l.source == link.source && l.external_id == link.external_id)
        {
            Some(existing) => {
                if link.score > existing.score {
                    existing.score = link.score;
                }
                if existing.coordinates.is_none() {
                    existing.coordinates = link.coordinates.clone();
                }
                if existing.country.is_none() {
                    existing.country = link.country.clone();
                }
            }
            None => into.push(link.clone()),
        }
    }
}

fn read(path: &Path) -> Result<String, ReconcileError> {
    std::fs::read_to_string(path).map_err(|source| ReconcileError::Io {
        path: path.display().to_string(),
        source,
    })
}
