//! A restricted SPARQL subset: PREFIX, SELECT [DISTINCT], basic graph
//! patterns inside GRAPH blocks, and top-level patterns.

mod eval;
mod parser;
mod suite;

use std::fmt;

use crate::model::{Iri, Literal, PrefixMap, Term};

pub use eval::{evaluate, evaluate_in_order, BindingTable};
pub use parser::{parse_query, QueryError};
pub use suite::{
    load_suite, run_cq_suite, CqOutcome, CqResult, CqSpec, Expectation, SuiteError, SuiteReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternTerm {
    Var(String),
    Iri(Iri),
    Literal(Literal),
}

impl PatternTerm {
    pub fn var(&self) -> Option<&str> {
        match self {
            PatternTerm::Var(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Var(v) => write!(f, "?{v}"),
            PatternTerm::Iri(i) => write!(f, "{}", Term::Iri(i.clone())),
            PatternTerm::Literal(l) => write!(f, "{}", Term::Literal(l.clone())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphTerm {
    Var(String),
    Iri(Iri),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplePattern {
    pub s: PatternTerm,
    pub p: PatternTerm,
    pub o: PatternTerm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphBlock {
    pub graph: GraphTerm,
    pub patterns: Vec<TriplePattern>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub prefixes: PrefixMap,
    pub select_vars: Vec<String>,
    pub distinct: bool,
    pub blocks: Vec<GraphBlock>,
}

/// Names given to the graph variable of top-level pattern groups. The `#`
/// cannot occur in a SPARQL variable name, so these never clash.
pub fn fresh_graph_var(n: usize) -> String {
    format!("#g{n}")
}

/// Compact rendering for tables: `prefix:rest` whenever the remainder has
/// no characters that would make it ambiguous, else the N-Triples form.
pub fn display_term(term: &Term, prefixes: &PrefixMap) -> String {
    if let Term::Iri(iri) = term {
        let best = prefixes
            .iter()
            .filter_map(|(label, ns)| {
                let rest = iri.as_str().strip_prefix(ns.as_str())?;
                let ok = !rest.is_empty()
                    && rest
                        .chars()
                        .all(|c| c.is_alphanumeric() || "_-./#%~".contains(c));
                ok.then_some((ns.as_str().len(), label, rest))
            })
            .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(a.1)));
        if let Some((_, label, rest)) = best {
            return format!("{label}:{rest}");
        }
    }
    term.to_string()
}
