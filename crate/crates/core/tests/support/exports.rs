//! Independent oracles for the export bundles, recomputed from cards or
//! straight from quads.

use std::collections::{BTreeMap, BTreeSet};

use mythforge_core::export::{export_storytelling, Catalog, CatalogCard, FACET_LEVELS};
use mythforge_core::vocab::{dct, ecrm, hucit, rdf, rdfs};
use mythforge_core::{Dataset, Iri};
use rand::seq::IndexedRandom;
use rand::Rng;

/// Labels a card exposes for one facet.
pub fn card_values(card: &CatalogCard, facet: &str) -> BTreeSet<String> {
    let f = &card.factual;
    let a = &card.assertion;
    let values: Vec<Option<String>> = match facet {
        "Collection" => vec![f.collocation.as_ref().map(|c| c.institution.clone())],
        "Typology" => f.typology.iter().cloned().map(Some).collect(),
        "Period" => f
            .period
            .iter()
            .flat_map(|p| [p.century.clone(), p.art_period.clone()])
            .collect(),
        "Category" => a.categories.iter().cloned().map(Some).collect(),
        "Source-Type" => a
            .canonical_citations
            .iter()
            .map(|c| c.kind.clone())
            .chain(a.general_references.iter().map(|r| r.kind.clone()))
            .collect(),
        "Interpreter" => vec![card.provenance.as_ref().and_then(|p| p.performer.clone())],
        other => panic!("unknown facet {other}"),
    };
    values.into_iter().flatten().collect()
}

pub fn group_by(cards: &[CatalogCard], facet: &str) -> BTreeMap<String, BTreeSet<String>> {
    let mut out: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for c in cards {
        for v in card_values(c, facet) {
            out.entry(v).or_default().insert(c.item_id.clone());
        }
    }
    out
}

/// Every facet value's count and ids equal the group-by over cards.
pub fn check_facets(catalog: &Catalog) -> Result<(), String> {
    let ids: BTreeSet<&String> = catalog.cards.iter().map(|c| &c.item_id).collect();
    if catalog.facets.items.iter().collect::<BTreeSet<_>>() != ids {
        return Err("facet item list differs from the cards".into());
    }
    for (_, names) in FACET_LEVELS {
        for name in names.iter() {
            let values = catalog
                .facets
                .facets
                .get(*name)
                .ok_or_else(|| format!("facet {name} missing"))?;
            let mut from_facets: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
            for v in values {
                if v.count != v.item_ids.len() {
                    return Err(format!("{name}/{}: count {} for {} ids", v.value_label, v.count, v.item_ids.len()));
                }
                if let Some(i) = v.item_ids.iter().find(|i| !ids.contains(i)) {
                    return Err(format!("{name}/{}: phantom id {i}", v.value_label));
                }
                if from_facets.insert(v.value_label.clone(), v.item_ids.iter().cloned().collect()).is_some() {
                    return Err(format!("{name}: duplicate label {}", v.value_label));
                }
            }
            let expected = group_by(&catalog.cards, name);
            if from_facets != expected {
                return Err(format!("{name}: facets {from_facets:?} != group-by {expected:?}"));
            }
        }
    }
    Ok(())
}

/// `FacetIndex::filter` against a scan of the cards on `states` random
/// selections.
pub fn check_filter(catalog: &Catalog, rng: &mut impl Rng, states: usize) -> Result<(), String> {
    for _ in 0..states {
        let mut selections: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (name, values) in &catalog.facets.facets {
            if values.is_empty() || rng.random_bool(0.6) {
                continue;
            }
            let k = rng.random_range(1..=values.len().min(3));
            let chosen = values.choose_multiple(rng, k).map(|v| v.value_id.clone()).collect();
            selections.insert(name.clone(), chosen);
        }
        let expected: BTreeSet<String> = catalog
            .cards
            .iter()
            .filter(|card| {
                selections.iter().all(|(name, chosen)| {
                    let labels: BTreeSet<&String> = catalog.facets.facets[name]
                        .iter()
                        .filter(|v| chosen.contains(&v.value_id))
                        .map(|v| &v.value_label)
                        .collect();
                    card_values(card, name).iter().any(|l| labels.contains(l))
                })
            })
            .map(|c| c.item_id.clone())
            .collect();
        let got = catalog.facets.filter(&selections);
        if got != expected {
            return Err(format!("selection {selections:?}: got {got:?}, expected {expected:?}"));
        }
    }
    Ok(())
}

pub fn label_of(d: &Dataset, node: &Iri) -> String {
    d.iter()
        .find(|q| q.subject == *node && q.predicate.as_str() == rdfs::LABEL)
        .and_then(|q| q.object.as_literal())
        .map_or_else(|| node.to_string(), |l| l.lexical().to_string())
}

fn iri_objects<'a>(d: &'a Dataset, s: &'a Iri, p: &'a str) -> impl Iterator<Item = &'a Iri> + 'a {
    d.iter()
        .filter(move |q| q.subject == *s && q.predicate.as_str() == p)
        .filter_map(|q| q.object.as_iri())
}

/// `"4.337-4.396"` or `"4.337"` as (book, start, end).
fn parse_span(label: &str) -> Option<(u32, u32, u32)> {
    let (a, b) = label.split_once('-').unwrap_or((label, label));
    let (book, start) = a.split_once('.')?;
    let (book_b, end) = b.split_once('.')?;
    let book: u32 = book.parse().ok()?;
    (book_b.parse::<u32>().ok()? == book).then_some(())?;
    Some((book, start.parse().ok()?, end.parse().ok()?))
}

/// Total heatmap weight from raw quads: every (item, citation of the work)
/// pair adds the number of width-aligned buckets its span touches.
pub fn heat_total(d: &Dataset, base: &Iri, work_slug: &str, width: u32) -> usize {
    let work = base.join(&format!("work/{work_slug}")).unwrap();
    let p67: Vec<(&Iri, &Iri, &Iri)> = d
        .iter()
        .filter(|q| q.predicate.as_str() == ecrm::P67_REFERS_TO)
        .filter_map(|q| q.object.as_iri().map(|o| (&q.graph, &q.subject, o)))
        .collect();
    let focus: BTreeSet<&Iri> = p67.iter().filter(|(_, s, _)| **s == work).map(|t| t.2).collect();
    let is_expr = |s: &Iri| s.as_str().ends_with("-expression");
    let selected: BTreeSet<&Iri> = p67
        .iter()
        .filter(|(_, s, t)| is_expr(s) && focus.contains(*t))
        .map(|t| t.1)
        .collect();
    let mut pairs: BTreeSet<(&Iri, &Iri)> = BTreeSet::new();
    for (g, s, _) in &p67 {
        if !selected.contains(*s) {
            continue;
        }
        for (g2, c, _) in &p67 {
            if g2 != g || c == s {
                continue;
            }
            let canonical = iri_objects(d, c, rdf::TYPE).any(|t| t.as_str() == hucit::CANONICAL_CITATION);
            let of_work = iri_objects(d, c, dct::IS_PART_OF).any(|w| *w == work);
            if canonical && of_work {
                pairs.insert((*s, *c));
            }
        }
    }
    let mut total = 0usize;
    for (_, c) in pairs {
        let content = iri_objects(d, c, hucit::HAS_CONTENT).min();
        if let Some((_, s, e)) = content.and_then(|n| parse_span(&label_of(d, n))) {
            let (s, e) = (s.min(e).max(1), s.max(e).max(1));
            total += ((e - 1) / width - (s - 1) / width + 1) as usize;
        }
    }
    total
}

/// Heatmap cell weights sum to the bucket-overlap total; an unknown work
/// counts as an empty heatmap.
pub fn check_heatmap(d: &Dataset, base: &Iri, work_slug: &str, width: u32) -> Result<usize, String> {
    let got: usize = match export_storytelling(d, base, work_slug, width) {
        Ok(bundle) => {
            for cell in &bundle.heatmap {
                if (cell.bucket_start - 1) % width != 0 || cell.bucket_end != cell.bucket_start + width - 1 {
                    return Err(format!("misaligned cell {}..{}", cell.bucket_start, cell.bucket_end));
                }
            }
            bundle.heatmap.iter().map(|c| c.count).sum()
        }
        Err(_) => 0,
    };
    let expected = heat_total(d, base, work_slug, width);
    if got == expected {
        Ok(got)
    } else {
        Err(format!("heatmap total {got}, bucket-overlap sum {expected}"))
    }
}

/// Distinct (expression, theme) P67 pairs counted per theme label.
pub fn theme_oracle(d: &Dataset) -> BTreeMap<String, usize> {
    let pairs: BTreeSet<(&Iri, &Iri)> = d
        .iter()
        .filter(|q| q.predicate.as_str() == ecrm::P67_REFERS_TO && q.subject.as_str().ends_with("-expression"))
        .filter_map(|q| q.object.as_iri().map(|o| (&q.subject, o)))
        .collect();
    let mut out = BTreeMap::new();
    for (_, t) in pairs {
        *out.entry(label_of(d, t)).or_default() += 1;
    }
    out
}
