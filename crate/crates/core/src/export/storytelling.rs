//! Storytelling bundle for one focus work: timeline, map, theme and
//! keyword counts, passage heatmap and the two networks.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::view::{date_key, natural_key, View};
use super::ExportError;
use crate::citeparse::Passage;
use crate::model::{Dataset, Iri};
use crate::normalize::Coordinates;
use crate::vocab::{crm, dct, ecrm, efrbroo, hucit, schema, wdt};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkInfo {
    pub slug: String,
    pub iri: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimelineEntry {
    pub item_id: String,
    pub title: String,
    pub begin: String,
    pub end: String,
    pub image: Option<String>,
    pub author: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapPoint {
    pub item_id: String,
    pub lat: f64,
    pub lon: f64,
    pub institution: String,
    pub title: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThemeCount {
    pub theme: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeywordCount {
    pub keyword: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeatCell {
    pub book: u32,
    pub bucket_start: u32,
    pub bucket_end: u32,
    pub count: usize,
    pub themes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NetNode {
    pub id: String,
    pub label: String,
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NetEdge {
    pub source: String,
    pub target: String,
    pub weight: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Network {
    pub nodes: Vec<NetNode>,
    pub edges: Vec<NetEdge>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Omissions {
    /// Items with no time-span.
    pub timeline: Vec<String>,
    /// Items with no coordinates.
    pub map: Vec<String>,
    /// Citations of the work without book and line numbers, as `item: label`.
    pub heatmap: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StorytellingBundle {
    pub work: WorkInfo,
    pub bucket_width: u32,
    pub items: Vec<String>,
    pub timeline: Vec<TimelineEntry>,
    pub map_points: Vec<MapPoint>,
    pub themes: Vec<ThemeCount>,
    pub keywords: Vec<KeywordCount>,
    pub top10_themes: Vec<ThemeCount>,
    pub top10_keywords: Vec<KeywordCount>,
    pub heatmap: Vec<HeatCell>,
    pub work_network: Network,
    pub artist_network: Network,
    pub omissions: Omissions,
}

/// 1-aligned buckets of `width` lines overlapped by `start..=end`.
pub fn buckets(start: u32, end: u32, width: u32) -> Vec<(u32, u32)> {
    let (lo, hi) = (start.min(end).max(1), start.max(end).max(1));
    let first = (lo - 1) / width;
    let last = (hi - 1) / width;
    (first..=last).map(|k| (k * width + 1, (k + 1) * width)).collect()
}

/// Count-descending, ties broken by name.
fn ranked(counts: BTreeMap<String, usize>) -> Vec<(String, usize)> {
    let mut v: Vec<(String, usize)> = counts.into_iter().collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    v
}

/// Distinct (expression, theme) pairs per theme label, over the given
/// items or all of them.
pub fn theme_counts(d: &Dataset, base: &Iri, items: Option<&BTreeSet<String>>) -> Vec<ThemeCount> {
    let v = View::new(d, base);
    count_themes(&v, items)
}

fn count_themes(v: &View<'_>, items: Option<&BTreeSet<String>>) -> Vec<ThemeCount> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for item in v.items() {
        if items.is_some_and(|set| !set.contains(&item.id)) {
            continue;
        }
        if let Some(expr) = item.expression {
            for t in v.themes_of(expr) {
                *counts.entry(v.label_or_iri(t)).or_default() += 1;
            }
        }
    }
    ranked(counts)
        .into_iter()
        .map(|(theme, count)| ThemeCount { theme, count })
        .collect()
}

pub fn export_storytelling(
    d: &Dataset,
    base: &Iri,
    work_slug: &str,
    bucket_width: u32,
) -> Result<StorytellingBundle, ExportError> {
    let unknown = || ExportError::UnknownWork(work_slug.to_string());
    let work = base.join(&format!("work/{work_slug}")).map_err(|_| unknown())?;
    let v = View::new(d, base);
    if !v.has_type(work.as_str(), efrbroo::F1_WORK) {
        return Err(unknown());
    }
    let width = bucket_width.max(1);

    let focus_themes: BTreeSet<&Iri> = v
        .all_refers()
        .filter(|(_, s, _)| **s == work)
        .map(|(_, _, t)| t)
        .collect();

    let all_items = v.items();
    let restricted: Vec<_> = all_items
        .iter()
        .filter(|it| {
            it.expression
                .is_some_and(|e| v.themes_of(e).iter().any(|t| focus_themes.contains(t)))
        })
        .collect();
    let ids: BTreeSet<String> = restricted.iter().map(|it| it.id.clone()).collect();

    let mut omissions = Omissions::default();
    let mut timeline = Vec::new();
    let mut map_points = Vec::new();
    let mut keyword_counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut heat: BTreeMap<(u32, u32), (usize, BTreeSet<String>)> = BTreeMap::new();
    let mut work_edges: BTreeMap<(String, String), usize> = BTreeMap::new();
    let mut artist_edges: BTreeMap<(String, String), usize> = BTreeMap::new();
    let mut nodes: BTreeSet<NetNode> = BTreeSet::new();
    let mut artist_nodes: BTreeSet<NetNode> = BTreeSet::new();
    let node = |iri: &Iri, kind: &str| NetNode {
        id: iri.to_string(),
        label: v.label_or_iri(iri),
        kind: kind.to_string(),
    };

    for item in &restricted {
        let s = item.iri.as_str();
        let title = v.first_literal(s, dct::TITLE).unwrap_or_default().to_string();
        let author = v.creator(s);

        let spans = v.iris(s, ecrm::P4_HAS_TIME_SPAN);
        let begin = spans
            .iter()
            .flat_map(|t| v.literals(t.as_str(), crm::P82A_BEGIN_OF_THE_BEGIN))
            .map(|l| l.lexical())
            .min_by_key(|d| date_key(d));
        let end = spans
            .iter()
            .flat_map(|t| v.literals(t.as_str(), crm::P82B_END_OF_THE_END))
            .map(|l| l.lexical())
            .max_by_key(|d| date_key(d));
        match (begin, end) {
            (Some(b), Some(e)) => timeline.push(TimelineEntry {
                item_id: item.id.clone(),
                title: title.clone(),
                begin: b.to_string(),
                end: e.to_string(),
                image: v.first_literal(s, schema::IMAGE).filter(|i| !i.is_empty()).map(str::to_string),
                author: author.map(|a| v.label_or_iri(a)),
            }),
            _ => omissions.timeline.push(item.id.clone()),
        }

        let place = v.iris(s, ecrm::P55_HAS_CURRENT_LOCATION).into_iter().min();
        let coords = place.and_then(|p| {
            v.first_literal(p.as_str(), wdt::P625_COORDINATES)
                .and_then(|c| Coordinates::parse(c).ok())
        });
        match (place, coords) {
            (Some(p), Some(c)) => map_points.push(MapPoint {
                item_id: item.id.clone(),
                lat: c.lat(),
                lon: c.lon(),
                institution: v.label_or_iri(p),
                title: title.clone(),
            }),
            _ => omissions.map.push(item.id.clone()),
        }

        for k in v.literals(s, dct::SUBJECT) {
            *keyword_counts.entry(k.lexical().to_string()).or_default() += 1;
        }

        let expr = item.expression.expect("restricted items have an expression");
        let themes = v.themes_of(expr);
        if let Some(a) = author {
            artist_nodes.insert(node(a, "artist"));
            for t in &themes {
                artist_nodes.insert(node(t, "theme"));
                *artist_edges.entry((a.to_string(), t.to_string())).or_default() += 1;
            }
        }

        let mut seen_citations = BTreeSet::new();
        for g in v.assertion_graphs(expr) {
            for (cited, cited_themes) in v.cited_in(g, expr) {
                let cs = cited.as_str();
                if v.has_type(cs, efrbroo::F1_WORK) {
                    for t in cited_themes.iter().filter(|t| focus_themes.contains(*t)) {
                        nodes.insert(node(cited, "work"));
                        nodes.insert(node(t, "theme"));
                        *work_edges.entry((cited.to_string(), t.to_string())).or_default() += 1;
                    }
                }
                let of_work = v.has_type(cs, hucit::CANONICAL_CITATION)
                    && v.iris(cs, dct::IS_PART_OF).iter().any(|w| **w == work);
                if !of_work || !seen_citations.insert(cited) {
                    continue;
                }
                let passage = v
                    .iris(cs, hucit::HAS_CONTENT)
                    .into_iter()
                    .min()
                    .and_then(|c| v.label(c.as_str()))
                    .and_then(Passage::parse);
                let Some(Passage {
                    book: Some(book),
                    start: Some(start),
                    end: Some(end),
                }) = passage
                else {
                    omissions.heatmap.push(format!("{}: {}", item.id, v.label_or_iri(cited)));
                    continue;
                };
                for (lo, _) in buckets(start, end, width) {
                    let cell = heat.entry((book, lo)).or_default();
                    cell.0 += 1;
                    cell.1.extend(cited_themes.iter().map(|t| v.label_or_iri(t)));
                }
            }
        }
    }

    timeline.sort_by(|a, b| {
        (date_key(&a.begin), natural_key(&a.item_id)).cmp(&(date_key(&b.begin), natural_key(&b.item_id)))
    });
    let themes = count_themes(&v, Some(&ids));
    let keywords: Vec<KeywordCount> = ranked(keyword_counts)
        .into_iter()
        .map(|(keyword, count)| KeywordCount { keyword, count })
        .collect();
    let heatmap = heat
        .into_iter()
        .map(|((book, lo), (count, themes))| HeatCell {
            book,
            bucket_start: lo,
            bucket_end: lo + width - 1,
            count,
            themes: themes.into_iter().collect(),
        })
        .collect();
    let network = |nodes: BTreeSet<NetNode>, edges: BTreeMap<(String, String), usize>| Network {
        nodes: nodes.into_iter().collect(),
        edges: edges
            .into_iter()
            .map(|((source, target), weight)| NetEdge { source, target, weight })
            .collect(),
    };

    Ok(StorytellingBundle {
        work: WorkInfo {
            slug: work_slug.to_string(),
            label: v.label_or_iri(&work),
            iri: work.to_string(),
        },
        bucket_width: width,
        items: restricted.iter().map(|it| it.id.clone()).collect(),
        timeline,
        map_points,
        top10_themes: themes.iter().take(10).cloned().collect(),
        themes,
        top10_keywords: keywords.iter().take(10).cloned().collect(),
        keywords,
        heatmap,
        work_network: network(nodes, work_edges),
        artist_network: network(artist_nodes, artist_edges),
        omissions,
    })
}
