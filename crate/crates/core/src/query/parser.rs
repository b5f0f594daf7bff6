//! Recursive-descent parser for the supported SPARQL subset.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{fresh_graph_var, GraphBlock, GraphTerm, PatternTerm, Query, TriplePattern};
use crate::model::{Iri, Literal, PrefixMap};
use crate::vocab::{rdf, xsd};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("syntax error at byte {position}: expected one of {}, found {found}", .expected.join(", "))]
    Parse {
        position: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("unknown prefix {prefix:?} at byte {position}")]
    Prefix { position: usize, prefix: String },
    #[error("invalid term at byte {position}: {reason}")]
    Term { position: usize, reason: String },
    #[error("selected variable ?{0} does not occur in any pattern")]
    UnboundVariable(String),
}

pub fn parse_query(text: &str) -> Result<Query, QueryError> {
    let mut p = Parser {
        src: text,
        pos: 0,
        prefixes: PrefixMap::new(),
        fresh: 0,
    };
    p.query()
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    prefixes: PrefixMap,
    fresh: usize,
}

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || (c as u32) >= 0xC0
}

fn is_name_char(c: char) -> bool {
    is_name_start(c) || c.is_ascii_digit() || c == '-' || c == '\u{B7}'
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        loop {
            let rest = self.rest();
            let skipped = rest.len() - rest.trim_start().len();
            self.pos += skipped;
            if self.rest().starts_with('#') {
                self.pos += self.rest().find('\n').unwrap_or(self.rest().len());
            } else {
                break;
            }
        }
    }

    fn found(&self) -> String {
        match self.rest().split_whitespace().next() {
            None => "end of input".into(),
            Some(tok) => format!("{:?}", tok.chars().take(20).collect::<String>()),
        }
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, QueryError> {
        Err(QueryError::Parse {
            position: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.found(),
        })
    }

    /// Case-insensitive keyword followed by a non-name character.
    fn at_keyword(&self, kw: &str) -> bool {
        let rest = self.rest();
        rest.len() >= kw.len()
            && rest.is_char_boundary(kw.len())
            && rest[..kw.len()].eq_ignore_ascii_case(kw)
            && !rest[kw.len()..].chars().next().is_some_and(|c| is_name_char(c) || c == ':')
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.at_keyword(kw) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn punct(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn query(&mut self) -> Result<Query, QueryError> {
        while self.keyword("PREFIX") {
            self.prefix_decl()?;
        }
        if !self.keyword("SELECT") {
            return self.fail(&["PREFIX", "SELECT"]);
        }
        let distinct = self.keyword("DISTINCT");
        let mut select_vars = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some('?' | '$') => select_vars.push(self.var()?),
                _ => break,
            }
        }
        if select_vars.is_empty() {
            return self.fail(&["variable"]);
        }
        self.keyword("WHERE");
        if !self.punct('{') {
            return self.fail(&["WHERE", "{"]);
        }
        let blocks = self.group_body()?;
        self.skip_ws();
        if self.pos < self.src.len() {
            return self.fail(&["end of query"]);
        }
        let used: BTreeSet<&str> = blocks
            .iter()
            .flat_map(|b| {
                let g = match &b.graph {
                    GraphTerm::Var(v) => Some(v.as_str()),
                    GraphTerm::Iri(_) => None,
                };
                b.patterns
                    .iter()
                    .flat_map(|t| [&t.s, &t.p, &t.o])
                    .filter_map(PatternTerm::var)
                    .chain(g)
            })
            .collect();
        if let Some(v) = select_vars.iter().find(|v| !used.contains(v.as_str())) {
            return Err(QueryError::UnboundVariable(v.clone()));
        }
        Ok(Query {
            prefixes: self.prefixes.clone(),
            select_vars,
            distinct,
            blocks,
        })
    }

    fn prefix_decl(&mut self) -> Result<(), QueryError> {
        self.skip_ws();
        let start = self.pos;
        let label_len = self
            .rest()
            .find(|c: char| !(is_name_char(c) || c == '.'))
            .unwrap_or(self.rest().len());
        let label = self.rest()[..label_len].to_string();
        self.pos += label_len;
        if !self.punct(':') {
            self.pos = start;
            return self.fail(&["prefix label followed by ':'"]);
        }
        self.skip_ws();
        let iri = self.iriref()?;
        if self.prefixes.get(&label).is_some() {
            // Later declarations win, as in SPARQL.
            let mut rebuilt = PrefixMap::new();
            for (l, ns) in self.prefixes.iter() {
                let ns = if l == label { iri.clone() } else { ns.clone() };
                rebuilt.bind(l, ns).expect("labels already validated");
            }
            self.prefixes = rebuilt;
        } else {
            self.prefixes
                .bind(&label, iri)
                .map_err(|e| QueryError::Term {
                    position: start,
                    reason: e.to_string(),
                })?;
        }
        Ok(())
    }

    fn iriref(&mut self) -> Result<Iri, QueryError> {
        let start = self.pos;
        if self.peek() != Some('<') {
            return self.fail(&["IRI"]);
        }
        let Some(end) = self.rest().find('>') else {
            return self.fail(&["'>'"]);
        };
        let text = self.rest()[1..end].to_string();
        self.pos += end + 1;
        Iri::new(text).map_err(|e| QueryError::Term {
            position: start,
            reason: e.to_string(),
        })
    }

    fn var(&mut self) -> Result<String, QueryError> {
        self.skip_ws();
        let start = self.pos;
        self.pos += 1;
        let len = self
            .rest()
            .find(|c: char| !is_name_char(c))
            .unwrap_or(self.rest().len());
        if len == 0 {
            self.pos = start;
            return self.fail(&["variable name"]);
        }
        let name = self.rest()[..len].to_string();
        self.pos += len;
        Ok(name)
    }

    fn group_body(&mut self) -> Result<Vec<GraphBlock>, QueryError> {
        let mut blocks = Vec::new();
        let mut loose: Vec<TriplePattern> = Vec::new();
        loop {
            self.skip_ws();
            if self.punct('}') {
                break;
            }
            if self.keyword("GRAPH") {
                self.flush(&mut loose, &mut blocks);
                self.skip_ws();
                let graph = match self.peek() {
                    Some('?' | '$') => GraphTerm::Var(self.var()?),
                    _ => match self.term(true)? {
                        PatternTerm::Iri(i) => GraphTerm::Iri(i),
                        _ => return self.fail(&["graph IRI or variable"]),
                    },
                };
                if !self.punct('{') {
                    return self.fail(&["{"]);
                }
                let patterns = self.triples_until_close()?;
                if patterns.is_empty() {
                    return self.fail(&["triple pattern"]);
                }
                blocks.push(GraphBlock { graph, patterns });
                self.punct('.');
                continue;
            }
            if self.peek().is_none() {
                return self.fail(&["}"]);
            }
            self.triples_same_subject(&mut loose)?;
            if !self.punct('.') {
                self.skip_ws();
                if self.peek() != Some('}') && !self.at_keyword("GRAPH") {
                    return self.fail(&[".", "}", "GRAPH"]);
                }
            }
        }
        self.flush(&mut loose, &mut blocks);
        if blocks.is_empty() {
            return self.fail(&["triple pattern", "GRAPH"]);
        }
        Ok(blocks)
    }

    fn flush(&mut self, loose: &mut Vec<TriplePattern>, blocks: &mut Vec<GraphBlock>) {
        if !loose.is_empty() {
            blocks.push(GraphBlock {
                graph: GraphTerm::Var(fresh_graph_var(self.fresh)),
                patterns: std::mem::take(loose),
            });
            self.fresh += 1;
        }
    }

    fn triples_until_close(&mut self) -> Result<Vec<TriplePattern>, QueryError> {
        let mut out = Vec::new();
        loop {
            if self.punct('}') {
                return Ok(out);
            }
            self.triples_same_subject(&mut out)?;
            if !self.punct('.') {
                if self.punct('}') {
                    return Ok(out);
                }
                return self.fail(&[".", "}"]);
            }
        }
    }

    fn triples_same_subject(&mut self, out: &mut Vec<TriplePattern>) -> Result<(), QueryError> {
        let s = self.term(false)?;
        if matches!(s, PatternTerm::Literal(_)) {
            return self.fail(&["subject IRI or variable"]);
        }
        loop {
            let p = self.verb()?;
            loop {
                let o = self.term(false)?;
                out.push(TriplePattern {
                    s: s.clone(),
                    p: p.clone(),
                    o,
                });
                if !self.punct(',') {
                    break;
                }
            }
            if !self.punct(';') {
                return Ok(());
            }
            // A trailing ';' before '.' or '}' is allowed.
            while self.punct(';') {}
            self.skip_ws();
            if matches!(self.peek(), Some('.' | '}')) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<PatternTerm, QueryError> {
        self.skip_ws();
        if self.rest().starts_with('a')
            && !self.rest()[1..].chars().next().is_some_and(|c| is_name_char(c) || c == ':')
        {
            self.pos += 1;
            return Ok(PatternTerm::Iri(Iri::new(rdf::TYPE).expect("static")));
        }
        match self.term(false)? {
            PatternTerm::Literal(_) => self.fail(&["predicate IRI, variable or 'a'"]),
            t => Ok(t),
        }
    }

    fn term(&mut self, graph_position: bool) -> Result<PatternTerm, QueryError> {
        self.skip_ws();
        let start = self.pos;
        let expected: &[&str] = if graph_position {
            &["IRI", "prefixed name", "variable"]
        } else {
            &["IRI", "prefixed name", "variable", "literal"]
        };
        match self.peek() {
            Some('?' | '$') => Ok(PatternTerm::Var(self.var()?)),
            Some('<') => Ok(PatternTerm::Iri(self.iriref()?)),
            Some('"' | '\'') if !graph_position => self.literal(),
            Some(c) if !graph_position && (c.is_ascii_digit() || c == '-' || c == '+') => self.number(),
            Some(c) if is_name_start(c) || c == ':' => self.prefixed_name(expected),
            _ => {
                self.pos = start;
                self.fail(expected)
            }
        }
    }

    fn prefixed_name(&mut self, expected: &[&str]) -> Result<PatternTerm, QueryError> {
        let start = self.pos;
        let label_len = self.rest().find(|c: char| !(is_name_char(c) || c == '.')).unwrap_or(0);
        let label = self.rest()[..label_len].to_string();
        if !self.rest()[label_len..].starts_with(':') {
            return self.fail(expected);
        }
        self.pos += label_len + 1;
        let mut local = String::new();
        loop {
            match self.peek() {
                Some('\\') => {
                    let esc = self.rest()[1..].chars().next();
                    match esc {
                        Some(c) if "_~.-!$&'()*+,;=/?#@%".contains(c) => {
                            local.push(c);
                            self.pos += 1 + c.len_utf8();
                        }
                        _ => return self.fail(&["local-name escape"]),
                    }
                }
                Some('%') => {
                    let hex = self.rest().get(1..3).unwrap_or("");
                    if hex.len() == 2 && hex.chars().all(|c| c.is_ascii_hexdigit()) {
                        local.push('%');
                        local.push_str(hex);
                        self.pos += 3;
                    } else {
                        return self.fail(&["percent escape"]);
                    }
                }
                Some(c) if is_name_char(c) || c == ':' => {
                    local.push(c);
                    self.pos += c.len_utf8();
                }
                Some('.') => {
                    // A dot only belongs to the name when more name follows.
                    let next = self.rest()[1..].chars().next();
                    if next.is_some_and(|c| is_name_char(c) || c == ':' || c == '%' || c == '\\') {
                        local.push('.');
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                _ => break,
            }
        }
        let Some(ns) = self.prefixes.get(&label) else {
            return Err(QueryError::Prefix {
                position: start,
                prefix: label,
            });
        };
        Iri::new(format!("{}{local}", ns.as_str()))
            .map(PatternTerm::Iri)
            .map_err(|e| QueryError::Term {
                position: start,
                reason: e.to_string(),
            })
    }

    fn literal(&mut self) -> Result<PatternTerm, QueryError> {
        let start = self.pos;
        let quote = self.peek().expect("checked by caller");
        self.pos += 1;
        let mut lex = String::new();
        loop {
            let Some(c) = self.peek() else {
                return self.fail(&["closing quote"]);
            };
            self.pos += c.len_utf8();
            match c {
                '\n' | '\r' => return self.fail(&["closing quote"]),
                c if c == quote => break,
                '\\' => {
                    let Some(e) = self.peek() else {
                        return self.fail(&["escape"]);
                    };
                    self.pos += 1;
                    lex.push(match e {
                        't' => '\t',
                        'n' => '\n',
                        'r' => '\r',
                        'b' => '\u{8}',
                        'f' => '\u{c}',
                        '"' => '"',
                        '\'' => '\'',
                        '\\' => '\\',
                        'u' | 'U' => {
                            let len = if e == 'u' { 4 } else { 8 };
                            let hex = self.rest().get(..len).unwrap_or("");
                            let Some(ch) = u32::from_str_radix(hex, 16).ok().and_then(char::from_u32) else {
                                return self.fail(&["unicode escape"]);
                            };
                            self.pos += len;
                            ch
                        }
                        _ => return self.fail(&["escape"]),
                    });
                }
                c => lex.push(c),
            }
        }
        let term_err = |e: crate::error::ModelError| QueryError::Term {
            position: start,
            reason: e.to_string(),
        };
        if self.peek() == Some('@') {
            self.pos += 1;
            let len = self
                .rest()
                .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-'))
                .unwrap_or(self.rest().len());
            let tag = self.rest()[..len].to_string();
            self.pos += len;
            return Literal::lang(lex, &tag).map(PatternTerm::Literal).map_err(term_err);
        }
        if self.rest().starts_with("^^") {
            self.pos += 2;
            let dt = match self.term(true)? {
                PatternTerm::Iri(i) => i,
                _ => return self.fail(&["datatype IRI"]),
            };
            return Literal::typed(lex, dt).map(PatternTerm::Literal).map_err(term_err);
        }
        Ok(PatternTerm::Literal(Literal::string(lex)))
    }

    fn number(&mut self) -> Result<PatternTerm, QueryError> {
        let start = self.pos;
        let mut end = 0;
        let bytes = self.rest().as_bytes();
        if matches!(bytes.first(), Some(b'+' | b'-')) {
            end = 1;
        }
        let digits_start = end;
        while bytes.get(end).is_some_and(u8::is_ascii_digit) {
            end += 1;
        }
        let mut datatype = xsd::INTEGER;
        if bytes.get(end) == Some(&b'.') && bytes.get(end + 1).is_some_and(u8::is_ascii_digit) {
            datatype = xsd::DECIMAL;
            end += 1;
            while bytes.get(end).is_some_and(u8::is_ascii_digit) {
                end += 1;
            }
        }
        if end == digits_start {
            return self.fail(&["number"]);
        }
        let lex = self.rest()[..end].to_string();
        self.pos += end;
        Literal::typed(lex, Iri::new(datatype).expect("static"))
            .map(PatternTerm::Literal)
            .map_err(|e| QueryError::Term {
                position: start,
                reason: e.to_string(),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const FIGURE_QUERY: &str = "
PREFIX myth: <https://purl.org/vpq/mythlod/data/>
PREFIX myth-categ: <https://purl.org/vpq/mythlod/data/categ/>
PREFIX efrbroo: <http://erlangen-crm.org/efrbroo/>
PREFIX ecrm: <http://erlangen-crm.org/current/>

SELECT DISTINCT ?work ?type
WHERE {
  GRAPH ?assertion {
    ?work ecrm:P67_refers_to myth-categ:didone }
  GRAPH myth:factual_data {
    ?work a efrbroo:F1_Work ;
    ecrm:P2_has_type ?type }
}
";

    #[test]
    fn didone_query_shape() {
        let q = parse_query(FIGURE_QUERY).unwrap();
        assert!(q.distinct);
        assert_eq!(q.select_vars, ["work", "type"]);
        assert_eq!(q.blocks.len(), 2);
        assert_eq!(q.blocks[0].graph, GraphTerm::Var("assertion".into()));
        assert_eq!(
            q.blocks[1].graph,
            GraphTerm::Iri(Iri::new("https://purl.org/vpq/mythlod/data/factual_data").unwrap())
        );
        assert_eq!(q.blocks[1].patterns.len(), 2);
        assert_eq!(
            q.blocks[1].patterns[0].p,
            PatternTerm::Iri(Iri::new(rdf::TYPE).unwrap())
        );
        assert_eq!(
            q.blocks[0].patterns[0].o,
            PatternTerm::Iri(Iri::new("https://purl.org/vpq/mythlod/data/categ/didone").unwrap())
        );
    }

    #[test]
    fn top_level_patterns_get_fresh_graph() {
        let q = parse_query("SELECT ?s WHERE { ?s ?p ?o }").unwrap();
        assert_eq!(q.blocks.len(), 1);
        assert_eq!(q.blocks[0].graph, GraphTerm::Var(fresh_graph_var(0)));
        assert!(!q.distinct);
    }

    #[test]
    fn rejected_constructs() {
        for text in [
            "SELECT ?s WHERE { FILTER(?s) }",
            "SELECT ?s WHERE { ?s ?p ?o } LIMIT 1",
            "SELECT * WHERE { ?s ?p ?o }",
            "SELECT ?s WHERE { OPTIONAL { ?s ?p ?o } }",
            "SELECT ?s WHERE { ?s ?p ?o ",
            "SELECT ?s WHERE { }",
            "SELECT ?s WHERE { GRAPH ?g { } }",
            "SELECT ?s WHERE { \"lit\" ?p ?o }",
        ] {
            assert!(
                matches!(parse_query(text), Err(QueryError::Parse { .. })),
                "{text}: {:?}",
                parse_query(text)
            );
        }
    }

    #[test]
    fn parse_error_reports_position() {
        let Err(QueryError::Parse { position, expected, .. }) = parse_query("SELECT ?s WHERE { FILTER(?s) }") else {
            panic!()
        };
        assert_eq!(position, 18);
        assert!(expected.contains(&"variable".to_string()));
    }

    #[test]
    fn unknown_prefix() {
        assert!(matches!(
            parse_query("SELECT ?s WHERE { ?s a foo:Bar }"),
            Err(QueryError::Prefix { prefix, .. }) if prefix == "foo"
        ));
    }

    #[test]
    fn unbound_select_var() {
        assert_eq!(
            parse_query("SELECT ?x WHERE { ?s ?p ?o }"),
            Err(QueryError::UnboundVariable("x".into()))
        );
    }

    #[test]
    fn literals_lists_and_escapes() {
        let q = parse_query(
            r#"PREFIX ex: <http://e.org/>
            select ?s where {
              ?s ex:p "a\"b"@EN, 'c', "2019-05-03"^^<http://www.w3.org/2001/XMLSchema#date>, 42 ;
                 ex:q ex:a\/b ;
                 ex:r ex:x.y .
              ?s ex:n -1.5 .
              GRAPH <http://e.org/g> { ?s a ex:T }
            }"#,
        )
        .unwrap();
        assert_eq!(q.blocks.len(), 2);
        let pats = &q.blocks[0].patterns;
        assert_eq!(pats.len(), 7);
        assert_eq!(pats[0].o, PatternTerm::Literal(Literal::lang("a\"b", "en").unwrap()));
        assert_eq!(pats[1].o, PatternTerm::Literal(Literal::string("c")));
        assert_eq!(pats[4].o, PatternTerm::Iri(Iri::new("http://e.org/a/b").unwrap()));
        assert_eq!(pats[5].o, PatternTerm::Iri(Iri::new("http://e.org/x.y").unwrap()));
        assert!(matches!(&pats[6].o, PatternTerm::Literal(l) if l.lexical() == "-1.5"));
    }
}
