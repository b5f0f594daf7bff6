//! Deterministic TriG writer.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::model::{compress, write_escaped_string, Dataset, Iri, PrefixMap, Quad, Term};
use crate::vocab::rdf;

fn object(term: &Term, prefixes: &PrefixMap, out: &mut String) {
    match term {
        Term::Iri(iri) => out.push_str(&compress(iri, prefixes)),
        Term::Literal(lit) => {
            out.push('"');
            write_escaped_string(out, lit.lexical()).expect("writing to a String");
            out.push('"');
            match lit.langtag() {
                Some(tag) => {
                    out.push('@');
                    out.push_str(tag);
                }
                None => {
                    out.push_str("^^");
                    out.push_str(&compress(lit.datatype(), prefixes));
                }
            }
        }
    }
}

/// Prefix block, then one block per graph sorted by IRI. Subjects are
/// sorted, `rdf:type` comes first as `a`, other predicates by IRI.
pub fn serialize_trig(d: &Dataset) -> String {
    let prefixes = d.prefixes();
    let mut out = String::new();
    for (label, ns) in prefixes.iter() {
        out.push_str("@prefix ");
        out.push_str(label);
        out.push_str(": ");
        out.push_str(&compress(ns, &PrefixMap::new()));
        out.push_str(" .\n");
    }
    for (graph, quads) in d.graphs() {
        out.push('\n');
        write_graph(&mut out, graph, &quads, prefixes);
    }
    out
}

fn write_graph(out: &mut String, graph: &Iri, quads: &[&Quad], prefixes: &PrefixMap) {
    let mut subjects: BTreeMap<&Iri, BTreeMap<(bool, &Iri), Vec<&Term>>> = BTreeMap::new();
    for q in quads {
        let not_type = q.predicate.as_str() != rdf::TYPE;
        subjects
            .entry(&q.subject)
            .or_default()
            .entry((not_type, &q.predicate))
            .or_default()
            .push(&q.object);
    }
    writeln!(out, "{} {{", compress(graph, prefixes)).expect("writing to a String");
    for (subject, predicates) in subjects {
        let count = predicates.len();
        for (i, ((not_type, predicate), objects)) in predicates.into_iter().enumerate() {
            out.push_str("  ");
            if i == 0 {
                out.push_str(&compress(subject, prefixes));
                out.push(' ');
            }
            if not_type {
                out.push_str(&compress(predicate, prefixes));
            } else {
                out.push('a');
            }
            out.push(' ');
            for (j, o) in objects.into_iter().enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                object(o, prefixes, out);
            }
            out.push_str(if i + 1 == count { " .\n" } else { " ;\n" });
        }
    }
    out.push_str("}\n");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Literal;
    use crate::vocab::{np, DEFAULT_BASE};

    fn m(s: &str) -> Iri {
        Iri::new(format!("{DEFAULT_BASE}{s}")).unwrap()
    }

    fn v(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    fn head_dataset() -> Dataset {
        let mut d = Dataset::new(PrefixMap::standard(&m("")));
        let h = m("head284");
        d.insert(Quad::new(m("np-284"), v(rdf::TYPE), v(np::NANOPUBLICATION), h.clone()));
        d.insert(Quad::new(m("np-284"), v(np::HAS_ASSERTION), m("assertion284"), h.clone()));
        d.insert(Quad::new(m("np-284"), v(np::HAS_PROVENANCE), m("provenance284"), h.clone()));
        d.insert(Quad::new(m("np-284"), v(np::HAS_PUBLICATION_INFO), m("pubInfo284"), h));
        d
    }

    #[test]
    fn head_block_layout() {
        let text = serialize_trig(&head_dataset());
        let expected = "myth:head284 {\n  myth:np-284 a np:Nanopublication ;\n  np:hasAssertion myth:assertion284 ;\n  np:hasProvenance myth:provenance284 ;\n  np:hasPublicationInfo myth:pubInfo284 .\n}\n";
        assert!(text.ends_with(expected), "{text}");
        assert!(text.lines().any(|l| l.trim() == "myth:np-284 a np:Nanopublication ;"));
    }

    #[test]
    fn empty_dataset_is_prefix_block() {
        let d = Dataset::new(PrefixMap::standard(&m("")));
        let text = serialize_trig(&d);
        assert_eq!(text.lines().count(), 15);
        assert!(text.lines().all(|l| l.starts_with("@prefix ")));
        assert!(text.starts_with("@prefix dct: <http://purl.org/dc/terms/> .\n"));
    }

    #[test]
    fn literals_and_object_lists() {
        let mut d = Dataset::new(PrefixMap::standard(&m("")));
        let g = m("factual_data");
        for k in ["addio", "didone"] {
            d.insert(Quad::new(m("item/284"), v("http://purl.org/dc/terms/subject"), Literal::string(k), g.clone()));
        }
        d.insert(Quad::new(m("item/284"), v("http://schema.org/image"), Literal::any_uri("").unwrap(), g));
        let text = serialize_trig(&d);
        assert!(text.contains("myth:factual_data {\n"));
        assert!(text.contains("<https://purl.org/vpq/mythlod/data/item/284> dct:subject \"addio\"^^xsd:string, \"didone\"^^xsd:string ;\n"));
        assert!(text.contains("  schema:image \"\"^^xsd:anyURI .\n"));
    }

    #[test]
    fn deterministic() {
        let a = serialize_trig(&head_dataset());
        let b = serialize_trig(&head_dataset().quad_set().iter().rev().cloned().collect::<Dataset>().with_standard());
        assert_eq!(a, b);
    }

    trait WithStandard {
        fn with_standard(self) -> Dataset;
    }

    impl WithStandard for Dataset {
        fn with_standard(mut self) -> Dataset {
            self.set_prefixes(PrefixMap::standard(&m("")));
            self
        }
    }
}
