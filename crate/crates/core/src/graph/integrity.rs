//! Structural checks over a built dataset: the four-level partition, head
//! graph arity and referential integrity of linking predicates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::error::ModelError;
use crate::model::{Dataset, Iri, Term};
use crate::vocab::{ecrm, efrbroo, np, rdf, rdfs};

/// Predicates whose IRI objects must be described in the factual graph.
pub const LINKING_PREDICATES: [&str; 5] = [
    ecrm::P67_REFERS_TO,
    ecrm::P2_HAS_TYPE,
    ecrm::P55_HAS_CURRENT_LOCATION,
    ecrm::P89_FALLS_WITHIN,
    efrbroo::R42_REPRESENTATIVE_FOR,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// A graph that is neither factual nor part of exactly one nanopublication.
    Partition,
    /// A head graph without exactly the four expected quads.
    HeadArity,
    /// A head points at a payload graph with no quads.
    MissingGraph,
    /// A linking predicate points at an undescribed IRI.
    Dangling,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub iri: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} <{}>: {}", self.kind, self.iri, self.detail)
    }
}

#[derive(Debug, Error)]
pub enum IntegrityError {
    #[error("{} integrity violation(s), first: {}", .0.len(), .0[0])]
    Violations(Vec<Violation>),
    #[error("item {0} has a theme but no interpreter")]
    MissingInterpreter(String),
    #[error("item {item_id}: {source}")]
    Model { item_id: String, source: ModelError },
}

fn head_predicates() -> [&'static str; 3] {
    [np::HAS_ASSERTION, np::HAS_PROVENANCE, np::HAS_PUBLICATION_INFO]
}

/// Partition and head-arity violations.
pub fn check_partition(d: &Dataset, factual: &Iri) -> Vec<Violation> {
    let mut out = Vec::new();
    let graphs = d.graphs();
    let mut heads: BTreeSet<&Iri> = BTreeSet::new();
    let mut owner: BTreeMap<&Iri, Vec<&Iri>> = BTreeMap::new();

    for (g, quads) in &graphs {
        let is_head = quads.iter().any(|q| {
            q.predicate.as_str() == rdf::TYPE
                && q.object.as_iri().map(Iri::as_str) == Some(np::NANOPUBLICATION)
        });
        if !is_head {
            continue;
        }
        heads.insert(g);
        let subjects: BTreeSet<&Iri> = quads.iter().map(|q| &q.subject).collect();
        let mut wanted: Vec<&str> = head_predicates().to_vec();
        wanted.push(rdf::TYPE);
        let mut seen: Vec<&str> = quads.iter().map(|q| q.predicate.as_str()).collect();
        seen.sort();
        wanted.sort();
        if quads.len() != 4 || subjects.len() != 1 || seen != wanted {
            out.push(Violation {
                kind: ViolationKind::HeadArity,
                iri: g.to_string(),
                detail: format!("head graph has {} quads over {} subjects", quads.len(), subjects.len()),
            });
        }
        for q in quads {
            if head_predicates().contains(&q.predicate.as_str()) {
                if let Term::Iri(payload) = &q.object {
                    owner.entry(payload).or_default().push(g);
                    if !graphs.contains_key(payload) {
                        out.push(Violation {
                            kind: ViolationKind::MissingGraph,
                            iri: payload.to_string(),
                            detail: format!("referenced by head <{g}> but empty"),
                        });
                    }
                }
            }
        }
    }

    for g in graphs.keys() {
        if *g == factual || heads.contains(g) {
            continue;
        }
        match owner.get(g).map(Vec::len) {
            Some(1) => {}
            Some(n) => out.push(Violation {
                kind: ViolationKind::Partition,
                iri: g.to_string(),
                detail: format!("claimed by {n} nanopublications"),
            }),
            None => out.push(Violation {
                kind: ViolationKind::Partition,
                iri: g.to_string(),
                detail: "graph belongs to no nanopublication".into(),
            }),
        }
    }
    for (g, heads_of) in &owner {
        if heads.contains(g) || *g == factual {
            out.push(Violation {
                kind: ViolationKind::Partition,
                iri: g.to_string(),
                detail: format!("payload graph reused as head or factual graph by <{}>", heads_of[0]),
            });
        }
    }
    out
}

/// IRIs used as objects of linking predicates that have no type or label
/// quad in the factual graph.
pub fn check_references(d: &Dataset, factual: &Iri) -> Vec<Violation> {
    let described: BTreeSet<&Iri> = d
        .in_graph(factual)
        .filter(|q| matches!(q.predicate.as_str(), rdf::TYPE | rdfs::LABEL))
        .map(|q| &q.subject)
        .collect();
    let mut dangling: BTreeMap<&Iri, BTreeSet<&str>> = BTreeMap::new();
    for q in d.iter() {
        if !LINKING_PREDICATES.contains(&q.predicate.as_str()) {
            continue;
        }
        if let Term::Iri(o) = &q.object {
            if !described.contains(o) {
                dangling.entry(o).or_default().insert(q.predicate.as_str());
            }
        }
    }
    dangling
        .into_iter()
        .map(|(iri, preds)| Violation {
            kind: ViolationKind::Dangling,
            iri: iri.to_string(),
            detail: format!(
                "object of {} with no type or label in the factual graph",
                preds.into_iter().collect::<Vec<_>>().join(", ")
            ),
        })
        .collect()
}

/// All checks; violations come back sorted.
pub fn integrity_violations(d: &Dataset, factual: &Iri) -> Vec<Violation> {
    let mut v = check_partition(d, factual);
    v.extend(check_references(d, factual));
    v.sort();
    v
}

pub fn check_integrity(d: &Dataset, factual: &Iri) -> Result<(), IntegrityError> {
    let v = integrity_violations(d, factual);
    if v.is_empty() {
        Ok(())
    } else {
        Err(IntegrityError::Violations(v))
    }
}
