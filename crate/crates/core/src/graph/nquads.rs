//! N-Quads output (sorted, one quad per line) and a line-based parser.
//!
//! The parser accepts N-Quads with IRIs and literals in named graphs.
//! Blank nodes and default-graph triples are rejected because the data
//! model has neither.

use thiserror::Error;

use crate::model::{Dataset, Iri, Literal, Quad, Term};
use crate::vocab::xsd;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

pub fn serialize_nquads(d: &Dataset) -> String {
    let mut lines: Vec<String> = d.iter().map(|q| q.to_string()).collect();
    lines.sort();
    let mut out = lines.join("\n");
    if !out.is_empty() {
        out.push('\n');
    }
    out
}

pub fn parse_nquads(text: &str) -> Result<Dataset, ParseError> {
    let mut d = Dataset::default();
    for (idx, line) in text.split('\n').enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        let mut cur = Cursor {
            s: line,
            pos: 0,
            line: idx + 1,
        };
        cur.skip_ws();
        if cur.done() || cur.peek() == Some('#') {
            continue;
        }
        d.insert(cur.quad()?);
    }
    Ok(d)
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
    line: usize,
}

impl Cursor<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            line: self.line,
            message: format!("{} (column {})", message.into(), self.pos + 1),
        })
    }

    fn peek(&self) -> Option<char> {
        self.s[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn done(&self) -> bool {
        self.pos >= self.s.len()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.pos += 1;
        }
    }

    fn quad(&mut self) -> Result<Quad, ParseError> {
        let subject = self.iri_term("subject")?;
        self.skip_ws();
        let predicate = self.iri_term("predicate")?;
        self.skip_ws();
        let object = match self.peek() {
            Some('"') => Term::Literal(self.literal()?),
            _ => Term::Iri(self.iri_term("object")?),
        };
        self.skip_ws();
        if self.peek() == Some('.') {
            return self.err("default-graph triples are not supported; expected a graph IRI");
        }
        let graph = self.iri_term("graph")?;
        self.skip_ws();
        if self.bump() != Some('.') {
            return self.err("expected terminating '.'");
        }
        self.skip_ws();
        if !self.done() && self.peek() != Some('#') {
            return self.err("unexpected content after '.'");
        }
        Ok(Quad::new(subject, predicate, object, graph))
    }

    fn iri_term(&mut self, role: &str) -> Result<Iri, ParseError> {
        match self.peek() {
            Some('<') => {}
            Some('_') => return self.err(format!("blank node as {role} is not supported")),
            _ => return self.err(format!("expected IRI as {role}")),
        }
        self.pos += 1;
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return self.err("unterminated IRI"),
                Some('>') => break,
                Some('\\') => out.push(self.unicode_escape()?),
                Some(c) => out.push(c),
            }
        }
        Iri::new(&out).or_else(|e| self.err(e.to_string()))
    }

    fn unicode_escape(&mut self) -> Result<char, ParseError> {
        let len = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return self.err("invalid escape in IRI"),
        };
        self.hex(len)
    }

    fn hex(&mut self, len: usize) -> Result<char, ParseError> {
        let Some(digits) = self.s.get(self.pos..self.pos + len) else {
            return self.err("truncated \\u escape");
        };
        let Some(c) = u32::from_str_radix(digits, 16).ok().and_then(char::from_u32) else {
            return self.err(format!("bad code point {digits:?}"));
        };
        self.pos += len;
        Ok(c)
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        self.pos += 1;
        let mut lex = String::new();
        loop {
            match self.bump() {
                None => return self.err("unterminated string"),
                Some('"') => break,
                Some('\\') => {
                    let c = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex(4)?,
                        Some('U') => self.hex(8)?,
                        _ => return self.err("invalid string escape"),
                    };
                    lex.push(c);
                }
                Some(c) => lex.push(c),
            }
        }
        match self.peek() {
            Some('@') => {
                self.pos += 1;
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '-') {
                    self.pos += 1;
                }
                let tag = &self.s[start..self.pos];
                Literal::lang(lex, tag).or_else(|e| self.err(e.to_string()))
            }
            Some('^') => {
                if !self.s[self.pos..].starts_with("^^") {
                    return self.err("expected '^^'");
                }
                self.pos += 2;
                let dt = self.iri_term("datatype")?;
                Literal::typed(lex, dt).or_else(|e| self.err(e.to_string()))
            }
            _ => Literal::typed(lex, Iri::new(xsd::STRING).expect("static")).or_else(|e| self.err(e.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    #[test]
    fn one_quad_one_line() {
        let q = Quad::new(iri("http://e.org/s"), iri("http://e.org/p"), iri("http://e.org/o"), iri("http://e.org/g"));
        let d: Dataset = [q].into_iter().collect();
        let text = serialize_nquads(&d);
        assert_eq!(text, "<http://e.org/s> <http://e.org/p> <http://e.org/o> <http://e.org/g> .\n");
        assert_eq!(text.lines().count(), 1);
        assert!(text.trim_end().ends_with("<http://e.org/g> ."));
    }

    #[test]
    fn missing_dot_is_error() {
        let text = "<http://e.org/s> <http://e.org/p> <http://e.org/o> <http://e.org/g> .\n<http://e.org/s> <http://e.org/p> <http://e.org/o> <http://e.org/g>\n";
        assert_eq!(parse_nquads(text).unwrap_err().line, 2);
    }

    #[test]
    fn foreign_syntax_accepted() {
        let text = concat!(
            "# comment\n",
            "\n",
            "<http://e.org/s>\t<http://e.org/p>   \"caf\\u00E9\\n\"@it-IT <http://e.org/g> . # trailing\r\n",
            "<http://e.org/s> <http://e.org/p> \"1\"^^<http://www.w3.org/2001/XMLSchema#integer> <http://e.org/g>.\n",
            "<http://e.org/\\u0073> <http://e.org/p> \"x\"^^<http://www.w3.org/2001/XMLSchema#string> <http://e.org/g> .\n",
        );
        let d = parse_nquads(text).unwrap();
        assert_eq!(d.len(), 3);
        let lits: Vec<_> = d.iter().filter_map(|q| q.object.as_literal()).collect();
        assert!(lits.iter().any(|l| l.lexical() == "café\n" && l.langtag() == Some("it-it")
            || l.lexical() == "café\n" && l.langtag() == Some("it-IT")));
        assert!(lits.iter().any(|l| l.lexical() == "x" && l.datatype().as_str() == xsd::STRING));
    }

    #[test]
    fn unsupported_constructs() {
        for bad in [
            "_:b0 <http://e.org/p> <http://e.org/o> <http://e.org/g> .",
            "<http://e.org/s> <http://e.org/p> <http://e.org/o> .",
            "<http://e.org/s> <http://e.org/p> \"x <http://e.org/g> .",
            "<http://e.org/s> <http://e.org/p> \"2019-13-01\"^^<http://www.w3.org/2001/XMLSchema#date> <http://e.org/g> .",
            "<http://e.org/s> <http://e.org/p> <http://e.org/o> <http://e.org/g> . junk",
        ] {
            assert!(parse_nquads(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn empty_dataset() {
        assert_eq!(serialize_nquads(&Dataset::default()), "");
        assert!(parse_nquads("").unwrap().is_empty());
    }

    fn term_text() -> impl Strategy<Value = String> {
        prop::string::string_regex("[a-zA-Z0-9 \"\\\\\t\n\r\u{e9}\u{1F600}'{}|^`]{0,12}").unwrap()
    }

    fn arb_quad() -> impl Strategy<Value = Quad> {
        let node = || prop::string::string_regex("[a-z]{1,3}(/[a-z0-9{}|^`]{1,3})?").unwrap();
        (node(), node(), prop_oneof![
            node().prop_map(|n| Term::Iri(iri(&format!("http://e.org/{n}")))),
            term_text().prop_map(|t| Term::Literal(Literal::string(t))),
            (term_text(), prop::sample::select(vec!["en", "it", "en-GB"])).prop_map(|(t, l)| Term::Literal(Literal::lang(t, l).unwrap())),
            (0u32..5000).prop_map(|n| Term::Literal(Literal::typed(n.to_string(), iri(xsd::INTEGER)).unwrap())),
        ], node())
            .prop_map(|(s, p, o, g)| {
                Quad::new(
                    iri(&format!("http://e.org/{s}")),
                    iri(&format!("http://e.org/{p}")),
                    o,
                    iri(&format!("http://e.org/g/{g}")),
                )
            })
    }

    proptest! {
        #[test]
        fn round_trip(quads in prop::collection::vec(arb_quad(), 0..40)) {
            let d: Dataset = quads.into_iter().collect();
            let text = serialize_nquads(&d);
            let back = parse_nquads(&text).unwrap();
            prop_assert_eq!(back.quad_set(), d.quad_set());
            prop_assert_eq!(serialize_nquads(&back), text);
        }
    }
}
