//! Catalog cards grouped by model level, and the facet index.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::view::{date_key, natural_key, View};
use crate::model::{Dataset, Iri};
use crate::normalize::Coordinates;
use crate::vocab::{crm, dct, ecrm, efrbroo, hucit, rdfs, schema, wdt};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentRef {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub viaf: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Collocation {
    /// `Institution, City (Country)`.
    pub label: String,
    pub institution: String,
    pub city: Option<String>,
    pub country: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Coordinates>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Period {
    /// `Art period, century (years)`, parts present only.
    pub label: String,
    pub years: Option<String>,
    pub century: Option<String>,
    pub art_period: Option<String>,
    pub begin: Option<String>,
    pub end: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactualGroup {
    pub title: String,
    pub author: Option<AgentRef>,
    pub keywords: Vec<String>,
    pub typology: Vec<String>,
    pub collocation: Option<Collocation>,
    pub period: Option<Period>,
    pub description: Option<String>,
    pub image: Option<String>,
    pub see_also: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CitationEntry {
    pub label: String,
    pub perseus_url: Option<String>,
    pub passage: Option<String>,
    pub work: Option<String>,
    #[serde(rename = "type")]
    pub kind: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceEntry {
    pub label: String,
    #[serde(rename = "type")]
    pub kind: Option<String>,
    pub author: Option<AgentRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub related_work: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssertionGroup {
    pub categories: Vec<String>,
    pub canonical_citations: Vec<CitationEntry>,
    pub general_references: Vec<ReferenceEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceGroup {
    pub interpretation_type: Option<String>,
    pub interpretation_criterion: Option<String>,
    pub performer: Option<String>,
    pub interpreted_at: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogCard {
    pub item_id: String,
    pub iri: String,
    pub factual: FactualGroup,
    pub assertion: AssertionGroup,
    pub provenance: Option<ProvenanceGroup>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetValue {
    pub value_label: String,
    pub value_id: String,
    pub count: usize,
    pub item_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetLevel {
    pub level: String,
    pub facets: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetIndex {
    pub levels: Vec<FacetLevel>,
    pub facets: BTreeMap<String, Vec<FacetValue>>,
    /// Every item id, the result of an empty selection.
    pub items: Vec<String>,
}

/// Facet names in sidebar order, under their model level.
pub const FACET_LEVELS: [(&str, &[&str]); 3] = [
    ("factual", &["Collection", "Typology", "Period"]),
    ("assertion", &["Category", "Source-Type"]),
    ("provenance", &["Interpreter"]),
];

impl FacetIndex {
    /// Items matching every facet with a selection, where a facet matches
    /// when the item carries any of its selected values.
    pub fn filter(&self, selections: &BTreeMap<String, BTreeSet<String>>) -> BTreeSet<String> {
        let mut result: BTreeSet<String> = self.items.iter().cloned().collect();
        for (facet, chosen) in selections {
            if chosen.is_empty() {
                continue;
            }
            let values = self.facets.get(facet).map(Vec::as_slice).unwrap_or(&[]);
            let matching: BTreeSet<&String> = values
                .iter()
                .filter(|v| chosen.contains(&v.value_id))
                .flat_map(|v| &v.item_ids)
                .collect();
            result.retain(|id| matching.contains(id));
        }
        result
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub cards: Vec<CatalogCard>,
    pub facets: FacetIndex,
}

type FacetAcc = BTreeMap<&'static str, BTreeMap<String, (String, BTreeSet<String>)>>;

fn agent(v: &View<'_>, node: &Iri) -> AgentRef {
    AgentRef {
        label: v.label_or_iri(node),
        viaf: v.viaf(node.as_str()),
    }
}

pub fn export_catalog(d: &Dataset, base: &Iri) -> Catalog {
    let v = View::new(d, base);
    let mut facets: FacetAcc = BTreeMap::new();
    let mut add = |facet: &'static str, id: &Iri, label: String, item: &str| {
        facets
            .entry(facet)
            .or_default()
            .entry(id.to_string())
            .or_insert_with(|| (label, BTreeSet::new()))
            .1
            .insert(item.to_string());
    };

    let mut cards = Vec::new();
    for item in v.items() {
        let s = item.iri.as_str();
        let id = item.id.as_str();

        let mut typology: Vec<(String, &Iri)> = v
            .iris(s, ecrm::P2_HAS_TYPE)
            .into_iter()
            .map(|t| (v.label_or_iri(t), t))
            .collect();
        typology.sort();
        for (label, t) in &typology {
            add("Typology", t, label.clone(), id);
        }

        let collocation = v.iris(s, ecrm::P55_HAS_CURRENT_LOCATION).into_iter().min().map(|inst| {
            add("Collection", inst, v.label_or_iri(inst), id);
            let within = v.iris(inst.as_str(), ecrm::P89_FALLS_WITHIN);
            let of_type = |slug: &str| {
                within
                    .iter()
                    .find(|w| {
                        v.iris(w.as_str(), ecrm::P2_HAS_TYPE)
                            .iter()
                            .any(|t| t.as_str().ends_with(&format!("/type/{slug}")))
                    })
                    .map(|w| v.label_or_iri(w))
            };
            let institution = v.label_or_iri(inst);
            let (city, country) = (of_type("citta"), of_type("nazione"));
            let mut label = institution.clone();
            if let Some(c) = &city {
                label.push_str(&format!(", {c}"));
            }
            if let Some(c) = &country {
                label.push_str(&format!(" ({c})"));
            }
            Collocation {
                label,
                institution,
                city,
                country,
                coordinates: v
                    .first_literal(inst.as_str(), wdt::P625_COORDINATES)
                    .and_then(|c| Coordinates::parse(c).ok()),
            }
        });

        let period = period_of(&v, s, id, &mut add);

        let mut assertion = AssertionGroup::default();
        let mut provenance = None;
        if let Some(expr) = item.expression {
            for theme in v.themes_of(expr) {
                add("Category", theme, v.label_or_iri(theme), id);
                assertion.categories.push(v.label_or_iri(theme));
            }
            assertion.categories.sort();
            let graphs = v.assertion_graphs(expr);
            let mut cited: BTreeSet<&Iri> = BTreeSet::new();
            for g in &graphs {
                cited.extend(v.cited_in(g, expr).into_keys());
            }
            let citations: Vec<&Iri> = cited
                .iter()
                .copied()
                .filter(|c| v.has_type(c.as_str(), hucit::CANONICAL_CITATION))
                .collect();
            let cited_works: BTreeSet<&Iri> = citations
                .iter()
                .flat_map(|c| v.iris(c.as_str(), dct::IS_PART_OF))
                .collect();
            let related_work = cited_works.iter().next().map(|w| v.label_or_iri(w));
            for c in &citations {
                let work = v.iris(c.as_str(), dct::IS_PART_OF).into_iter().min();
                let kind = v.iris(c.as_str(), ecrm::P2_HAS_TYPE).into_iter().min();
                if let Some(k) = kind {
                    add("Source-Type", k, v.label_or_iri(k), id);
                }
                assertion.canonical_citations.push(CitationEntry {
                    label: v.label_or_iri(c),
                    perseus_url: v.first_literal(c.as_str(), rdfs::SEE_ALSO).map(str::to_string),
                    passage: v
                        .iris(c.as_str(), hucit::HAS_CONTENT)
                        .into_iter()
                        .min()
                        .and_then(|p| v.label(p.as_str()))
                        .map(str::to_string),
                    work: work.map(|w| v.label_or_iri(w)),
                    kind: kind.map(|k| v.label_or_iri(k)),
                });
            }
            for w in cited.iter().filter(|w| {
                v.has_type(w.as_str(), efrbroo::F1_WORK) && !cited_works.contains(*w)
            }) {
                let kind = v.iris(w.as_str(), ecrm::P2_HAS_TYPE).into_iter().min();
                if let Some(k) = kind {
                    add("Source-Type", k, v.label_or_iri(k), id);
                }
                assertion.general_references.push(ReferenceEntry {
                    label: v.label_or_iri(w),
                    kind: kind.map(|k| v.label_or_iri(k)),
                    author: v.creator(w.as_str()).map(|a| agent(&v, a)),
                    related_work: related_work.clone(),
                });
            }
            assertion.canonical_citations.sort_by(|a, b| a.label.cmp(&b.label));
            assertion.general_references.sort_by(|a, b| a.label.cmp(&b.label));

            provenance = graphs.iter().find_map(|g| v.interpretation(g)).map(|i| {
                if let Some(p) = i.performer {
                    add("Interpreter", p, v.label_or_iri(p), id);
                }
                ProvenanceGroup {
                    interpretation_type: i.interpretation_type.map(|t| v.label_or_iri(t)),
                    interpretation_criterion: i.criterion.map(|t| v.label_or_iri(t)),
                    performer: i.performer.map(|t| v.label_or_iri(t)),
                    interpreted_at: i.generated_at,
                }
            });
        }

        let mut keywords: Vec<String> = v
            .literals(s, dct::SUBJECT)
            .into_iter()
            .map(|l| l.lexical().to_string())
            .collect();
        keywords.sort();
        let non_empty = |x: Option<&str>| x.filter(|t| !t.is_empty()).map(str::to_string);
        cards.push(CatalogCard {
            item_id: item.id.clone(),
            iri: s.to_string(),
            factual: FactualGroup {
                title: v.first_literal(s, dct::TITLE).unwrap_or_default().to_string(),
                author: v.creator(s).map(|a| agent(&v, a)),
                keywords,
                typology: typology.into_iter().map(|(l, _)| l).collect(),
                collocation,
                period,
                description: non_empty(v.first_literal(s, dct::DESCRIPTION)),
                image: non_empty(v.first_literal(s, schema::IMAGE)),
                see_also: non_empty(v.first_literal(s, rdfs::SEE_ALSO)),
            },
            assertion,
            provenance,
        });
    }

    let mut facet_map = BTreeMap::new();
    for (_, names) in FACET_LEVELS {
        for name in names {
            let mut values: Vec<FacetValue> = facets
                .remove(name)
                .unwrap_or_default()
                .into_iter()
                .map(|(value_id, (value_label, items))| {
                    let mut item_ids: Vec<String> = items.into_iter().collect();
                    item_ids.sort_by(|a, b| natural_key(a).cmp(&natural_key(b)));
                    FacetValue {
                        value_label,
                        value_id,
                        count: item_ids.len(),
                        item_ids,
                    }
                })
                .collect();
            values.sort_by(|a, b| {
                b.count
                    .cmp(&a.count)
                    .then_with(|| a.value_label.cmp(&b.value_label))
                    .then_with(|| a.value_id.cmp(&b.value_id))
            });
            facet_map.insert(name.to_string(), values);
        }
    }
    let items = cards.iter().map(|c| c.item_id.clone()).collect();
    Catalog {
        cards,
        facets: FacetIndex {
            levels: FACET_LEVELS
                .iter()
                .map(|(level, names)| FacetLevel {
                    level: level.to_string(),
                    facets: names.iter().map(|n| n.to_string()).collect(),
                })
                .collect(),
            facets: facet_map,
            items,
        },
    }
}

/// Century and art period of the item, plus the year span when present.
fn period_of(
    v: &View<'_>,
    item: &str,
    id: &str,
    add: &mut impl FnMut(&'static str, &Iri, String, &str),
) -> Option<Period> {
    let spans = v.iris(item, ecrm::P4_HAS_TIME_SPAN);
    if spans.is_empty() {
        return None;
    }
    let kind_of = |s: &Iri, slug: &str| {
        v.iris(s.as_str(), ecrm::P2_HAS_TYPE)
            .iter()
            .any(|t| t.as_str().ends_with(&format!("/type/{slug}")))
    };
    let century = spans.iter().copied().filter(|s| kind_of(s, "secolo")).min();
    let year = spans.iter().copied().filter(|s| kind_of(s, "anno")).min();
    let art_period = century
        .or(year)
        .and_then(|s| v.iris(s.as_str(), ecrm::P10_FALLS_WITHIN).into_iter().min());
    if let Some(c) = century {
        add("Period", c, v.label_or_iri(c), id);
    }
    if let Some(p) = art_period {
        add("Period", p, v.label_or_iri(p), id);
    }
    let date = |pred: &str, pick_max: bool| {
        let dates = spans
            .iter()
            .flat_map(|s| v.literals(s.as_str(), pred))
            .map(|l| l.lexical());
        if pick_max {
            dates.max_by_key(|d| date_key(d)).map(str::to_string)
        } else {
            dates.min_by_key(|d| date_key(d)).map(str::to_string)
        }
    };
    let century_label = century.map(|c| v.label_or_iri(c));
    let art_label = art_period.map(|p| v.label_or_iri(p));
    let years = year.map(|y| v.label_or_iri(y));
    let mut label = [art_label.clone(), century_label.clone()]
        .into_iter()
        .flatten()
        .collect::<Vec<_>>()
        .join(", ");
    if let Some(y) = &years {
        label = if label.is_empty() { y.clone() } else { format!("{label} ({y})") };
    }
    Some(Period {
        label,
        years,
        century: century_label,
        art_period: art_label,
        begin: date(crm::P82A_BEGIN_OF_THE_BEGIN, false),
        end: date(crm::P82B_END_OF_THE_END, true),
    })
}
