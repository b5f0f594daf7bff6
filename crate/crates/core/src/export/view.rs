//! Read-only index over a built dataset, shaped for the export queries.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::model::{Dataset, Iri, Literal, Term};
use crate::vocab::{dct, ecrm, efrbroo, hico, np, owl, prov, rdf, rdfs};

pub(crate) struct View<'a> {
    base: &'a str,
    /// Factual subjects by IRI text.
    subjects: HashMap<&'a str, &'a Iri>,
    /// Factual graph: subject -> predicate -> objects.
    facts: HashMap<&'a str, BTreeMap<&'a str, Vec<&'a Term>>>,
    /// Assertion graph -> (subject, theme) pairs of P67.
    refers: BTreeMap<&'a Iri, Vec<(&'a Iri, &'a Iri)>>,
    /// Expression -> assertion graphs mentioning it.
    expression_graphs: HashMap<&'a Iri, BTreeSet<&'a Iri>>,
    /// Assertion graph -> provenance graph.
    provenance_of: HashMap<&'a Iri, &'a Iri>,
    /// Non-factual graph -> subject -> predicate -> objects.
    graph_facts: HashMap<&'a Iri, HashMap<&'a str, BTreeMap<&'a str, Vec<&'a Term>>>>,
}

pub(crate) struct Item<'a> {
    pub id: String,
    pub iri: &'a Iri,
    pub expression: Option<&'a Iri>,
}

impl<'a> View<'a> {
    pub fn new(d: &'a Dataset, base: &'a Iri) -> Self {
        let factual = format!("{}{}", base.as_str(), crate::graph::FACTUAL_GRAPH);
        let mut facts: HashMap<&str, BTreeMap<&str, Vec<&Term>>> = HashMap::new();
        let mut refers: BTreeMap<&Iri, Vec<(&Iri, &Iri)>> = BTreeMap::new();
        let mut graph_facts: HashMap<&Iri, HashMap<&str, BTreeMap<&str, Vec<&Term>>>> = HashMap::new();
        let mut np_parts: HashMap<&Iri, (Option<&Iri>, Option<&Iri>)> = HashMap::new();
        let mut subjects = HashMap::new();
        for q in d.iter() {
            if q.graph.as_str() == factual {
                subjects.insert(q.subject.as_str(), &q.subject);
                facts
                    .entry(q.subject.as_str())
                    .or_default()
                    .entry(q.predicate.as_str())
                    .or_default()
                    .push(&q.object);
                continue;
            }
            graph_facts
                .entry(&q.graph)
                .or_default()
                .entry(q.subject.as_str())
                .or_default()
                .entry(q.predicate.as_str())
                .or_default()
                .push(&q.object);
            match (q.predicate.as_str(), &q.object) {
                (ecrm::P67_REFERS_TO, Term::Iri(theme)) => {
                    refers.entry(&q.graph).or_default().push((&q.subject, theme));
                }
                (np::HAS_ASSERTION, Term::Iri(a)) => np_parts.entry(&q.subject).or_default().0 = Some(a),
                (np::HAS_PROVENANCE, Term::Iri(p)) => np_parts.entry(&q.subject).or_default().1 = Some(p),
                _ => {}
            }
        }
        for pairs in refers.values_mut() {
            pairs.sort();
            pairs.dedup();
        }
        let mut expression_graphs: HashMap<&Iri, BTreeSet<&Iri>> = HashMap::new();
        for (g, pairs) in &refers {
            for (s, _) in pairs {
                expression_graphs.entry(s).or_default().insert(g);
            }
        }
        let provenance_of = np_parts
            .into_values()
            .filter_map(|(a, p)| Some((a?, p?)))
            .collect();
        View {
            base: base.as_str(),
            subjects,
            facts,
            refers,
            expression_graphs,
            provenance_of,
            graph_facts,
        }
    }

    pub fn objects(&self, s: &str, p: &str) -> &[&'a Term] {
        self.facts
            .get(s)
            .and_then(|m| m.get(p))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn iris(&self, s: &str, p: &str) -> Vec<&'a Iri> {
        self.objects(s, p).iter().filter_map(|t| t.as_iri()).collect()
    }

    pub fn literals(&self, s: &str, p: &str) -> Vec<&'a Literal> {
        self.objects(s, p).iter().filter_map(|t| t.as_literal()).collect()
    }

    pub fn first_literal(&self, s: &str, p: &str) -> Option<&'a str> {
        self.literals(s, p).into_iter().map(Literal::lexical).min()
    }

    pub fn label(&self, s: &str) -> Option<&'a str> {
        self.first_literal(s, rdfs::LABEL)
    }

    /// Label, or the IRI itself when the node has none.
    pub fn label_or_iri(&self, s: &Iri) -> String {
        self.label(s.as_str()).map_or_else(|| s.to_string(), str::to_string)
    }

    pub fn has_type(&self, s: &str, class: &str) -> bool {
        self.iris(s, rdf::TYPE).iter().any(|t| t.as_str() == class)
    }

    /// Subjects typed `class` in the factual graph.
    pub fn instances(&self, class: &str) -> Vec<&'a str> {
        let mut out: Vec<&str> = self
            .facts
            .iter()
            .filter(|(_, preds)| {
                preds
                    .get(rdf::TYPE)
                    .is_some_and(|ts| ts.iter().any(|t| t.as_iri().map(Iri::as_str) == Some(class)))
            })
            .map(|(s, _)| *s)
            .collect();
        out.sort();
        out
    }

    pub fn items(&self) -> Vec<Item<'a>> {
        let mut out: Vec<Item<'a>> = self
            .instances(efrbroo::F4_MANIFESTATION_SINGLETON)
            .into_iter()
            .filter_map(|s| self.subjects.get(s).copied())
            .map(|iri| Item {
                id: self.item_id(iri),
                iri,
                expression: self.iris(iri.as_str(), efrbroo::R42_REPRESENTATIVE_FOR).into_iter().min(),
            })
            .collect();
        out.sort_by(|a, b| natural_key(&a.id).cmp(&natural_key(&b.id)));
        out
    }

    pub fn item_id(&self, iri: &Iri) -> String {
        let s = iri.as_str();
        s.strip_prefix(self.base)
            .and_then(|r| r.strip_prefix("item/"))
            .or_else(|| s.rsplit_once('/').map(|(_, id)| id))
            .unwrap_or(s)
            .to_string()
    }

    pub fn assertion_graphs(&self, expression: &Iri) -> Vec<&'a Iri> {
        self.expression_graphs
            .get(expression)
            .map(|g| g.iter().copied().collect())
            .unwrap_or_default()
    }

    /// Themes the expression refers to, over all its assertion graphs.
    pub fn themes_of(&self, expression: &Iri) -> BTreeSet<&'a Iri> {
        let mut out = BTreeSet::new();
        for g in self.assertion_graphs(expression) {
            for (s, t) in &self.refers[g] {
                if *s == expression {
                    out.insert(*t);
                }
            }
        }
        out
    }

    /// Non-expression subjects of P67 in the given graph, with their themes.
    pub fn cited_in(&self, graph: &Iri, expression: &Iri) -> BTreeMap<&'a Iri, BTreeSet<&'a Iri>> {
        let mut out: BTreeMap<&Iri, BTreeSet<&Iri>> = BTreeMap::new();
        if let Some(pairs) = self.refers.get(graph) {
            for (s, t) in pairs {
                if *s != expression {
                    out.entry(*s).or_default().insert(*t);
                }
            }
        }
        out
    }

    pub fn all_refers(&self) -> impl Iterator<Item = (&'a Iri, &'a Iri, &'a Iri)> + '_ {
        self.refers
            .iter()
            .flat_map(|(g, pairs)| pairs.iter().map(move |(s, t)| (*g, *s, *t)))
    }

    pub fn provenance_graph(&self, assertion: &Iri) -> Option<&'a Iri> {
        self.provenance_of.get(assertion).copied()
    }

    pub fn graph_objects(&self, g: &Iri, s: &str, p: &str) -> Vec<&'a Term> {
        self.graph_facts
            .get(g)
            .and_then(|m| m.get(s))
            .and_then(|m| m.get(p))
            .cloned()
            .unwrap_or_default()
    }

    /// VIAF URL among the node's `owl:sameAs` links.
    pub fn viaf(&self, s: &str) -> Option<String> {
        self.iris(s, owl::SAME_AS)
            .into_iter()
            .map(Iri::as_str)
            .filter(|u| u.contains("://viaf.org/viaf/"))
            .min()
            .map(str::to_string)
    }

    pub fn creator(&self, s: &str) -> Option<&'a Iri> {
        self.iris(s, dct::CREATOR).into_iter().min()
    }

    pub fn interpretation(&self, assertion: &Iri) -> Option<Interpretation<'a>> {
        let p = self.provenance_graph(assertion)?;
        let act = self
            .graph_objects(p, assertion.as_str(), prov::WAS_GENERATED_BY)
            .into_iter()
            .filter_map(Term::as_iri)
            .min()?;
        let one = |pred: &str| {
            self.graph_objects(p, act.as_str(), pred)
                .into_iter()
                .filter_map(Term::as_iri)
                .min()
        };
        Some(Interpretation {
            interpretation_type: one(hico::HAS_INTERPRETATION_TYPE),
            criterion: one(hico::HAS_INTERPRETATION_CRITERION),
            performer: one(prov::WAS_ATTRIBUTED_TO),
            generated_at: self
                .graph_objects(p, assertion.as_str(), prov::WAS_GENERATED_AT_TIME)
                .into_iter()
                .filter_map(Term::as_literal)
                .map(|l| l.lexical().to_string())
                .min(),
        })
    }
}

pub(crate) struct Interpretation<'a> {
    pub interpretation_type: Option<&'a Iri>,
    pub criterion: Option<&'a Iri>,
    pub performer: Option<&'a Iri>,
    pub generated_at: Option<String>,
}

/// Numeric ids sort by value before other ids, which sort as strings.
pub(crate) fn natural_key(id: &str) -> (bool, u128, &str) {
    match id.parse::<u128>() {
        Ok(n) => (false, n, id),
        Err(_) => (true, 0, id),
    }
}

/// Chronological key for xsd:date lexical forms, negative years included.
pub(crate) fn date_key(date: &str) -> (i64, &str) {
    let (sign, body) = match date.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, date),
    };
    let (year, rest) = body.split_once('-').unwrap_or((body, ""));
    // A negative year's month-day still runs forward.
    (sign * year.parse::<i64>().unwrap_or(0), rest)
}
