//! RDF term, quad and dataset model.
//!
//! There are no blank nodes: every resource is a minted IRI, and every quad
//! lives in a named graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fmt::Write as _;

use unicode_normalization::UnicodeNormalization;

use crate::error::ModelError;
use crate::vocab::{rdf, xsd};

/// An absolute IRI, NFC-normalized.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    /// Normalizes `value` to NFC and validates it against the IRI grammar.
    pub fn new(value: impl AsRef<str>) -> Result<Self, ModelError> {
        let value: String = value.as_ref().nfc().collect();
        validate_iri(&value)?;
        Ok(Iri(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// Appends a raw suffix, validating the result.
    pub fn join(&self, suffix: &str) -> Result<Self, ModelError> {
        Iri::new(format!("{}{}", self.0, suffix))
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

fn validate_iri(value: &str) -> Result<(), ModelError> {
    let invalid = |reason: &str| ModelError::InvalidIri {
        iri: value.to_string(),
        reason: reason.to_string(),
    };
    let colon = value.find(':').ok_or_else(|| invalid("missing scheme"))?;
    let scheme = &value[..colon];
    let mut chars = scheme.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return Err(invalid("scheme must start with a letter")),
    }
    if !chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.')) {
        return Err(invalid("bad scheme character"));
    }
    if let Some(c) = value
        .chars()
        .find(|&c| (c as u32) <= 0x20 || c == '\u{7f}' || matches!(c, '<' | '>' | '"'))
    {
        return Err(invalid(&format!("forbidden character {c:?}")));
    }
    Ok(())
}

/// A literal with an explicit datatype.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Iri,
    langtag: Option<String>,
}

impl Literal {
    /// Builds a typed literal, validating the lexical form of `xsd:date`,
    /// `xsd:dateTime` and `xsd:anyURI`.
    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Result<Self, ModelError> {
        let lexical = lexical.into();
        if datatype.as_str() == rdf::LANG_STRING {
            return Err(ModelError::InvalidLiteral {
                lexical,
                reason: "rdf:langString requires a language tag".into(),
            });
        }
        validate_lexical(&lexical, datatype.as_str())?;
        Ok(Literal {
            lexical,
            datatype,
            langtag: None,
        })
    }

    pub fn string(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: Iri(xsd::STRING.to_string()),
            langtag: None,
        }
    }

    pub fn lang(lexical: impl Into<String>, tag: &str) -> Result<Self, ModelError> {
        let lexical = lexical.into();
        let valid = !tag.is_empty()
            && tag.split('-').enumerate().all(|(i, part)| {
                !part.is_empty()
                    && part.len() <= 8
                    && part
                        .chars()
                        .all(|c| c.is_ascii_alphabetic() || (i > 0 && c.is_ascii_digit()))
            });
        if !valid {
            return Err(ModelError::InvalidLiteral {
                lexical,
                reason: format!("bad language tag {tag:?}"),
            });
        }
        Ok(Literal {
            lexical,
            datatype: Iri(rdf::LANG_STRING.to_string()),
            langtag: Some(tag.to_ascii_lowercase()),
        })
    }

    pub fn date(lexical: impl Into<String>) -> Result<Self, ModelError> {
        Literal::typed(lexical, Iri(xsd::DATE.to_string()))
    }

    pub fn date_time(lexical: impl Into<String>) -> Result<Self, ModelError> {
        Literal::typed(lexical, Iri(xsd::DATE_TIME.to_string()))
    }

    pub fn any_uri(lexical: impl Into<String>) -> Result<Self, ModelError> {
        Literal::typed(lexical, Iri(xsd::ANY_URI.to_string()))
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn langtag(&self) -> Option<&str> {
        self.langtag.as_deref()
    }
}

fn validate_lexical(lexical: &str, datatype: &str) -> Result<(), ModelError> {
    let bad = |reason: &str| ModelError::InvalidLiteral {
        lexical: lexical.to_string(),
        reason: reason.to_string(),
    };
    match datatype {
        xsd::DATE => {
            parse_xsd_date(lexical).ok_or_else(|| bad("not an xsd:date"))?;
        }
        xsd::DATE_TIME => {
            let (date, time) = lexical
                .split_once('T')
                .ok_or_else(|| bad("not an xsd:dateTime"))?;
            parse_xsd_date(date).ok_or_else(|| bad("bad date part"))?;
            if !valid_time(time) {
                return Err(bad("bad time part"));
            }
        }
        xsd::ANY_URI if lexical.chars().any(|c| c.is_whitespace() || c.is_control()) => {
            return Err(bad("whitespace in xsd:anyURI"));
        }
        _ => {}
    }
    Ok(())
}

/// Parses `[-]YYYY-MM-DD` (year of at least four digits).
pub(crate) fn parse_xsd_date(s: &str) -> Option<(i32, u32, u32)> {
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let mut parts = body.split('-');
    let (y, m, d) = (parts.next()?, parts.next()?, parts.next()?);
    if parts.next().is_some()
        || y.len() < 4
        || m.len() != 2
        || d.len() != 2
        || ![y, m, d].iter().all(|p| p.bytes().all(|b| b.is_ascii_digit()))
    {
        return None;
    }
    let year: i32 = y.parse().ok()?;
    let year = if negative { -year } else { year };
    let (month, day) = (m.parse().ok()?, d.parse().ok()?);
    chrono::NaiveDate::from_ymd_opt(year, month, day)?;
    Some((year, month, day))
}

fn valid_time(time: &str) -> bool {
    if !time.is_ascii() {
        return false;
    }
    // Strip a timezone designator if present.
    let core = if let Some(stripped) = time.strip_suffix('Z') {
        stripped
    } else if time.len() > 6 && matches!(&time[time.len() - 6..time.len() - 5], "+" | "-") {
        let tz = &time[time.len() - 5..];
        let ok = tz.len() == 5
            && tz.as_bytes()[2] == b':'
            && tz[..2].parse::<u32>().is_ok_and(|h| h <= 14)
            && tz[3..].parse::<u32>().is_ok_and(|m| m < 60);
        if !ok {
            return false;
        }
        &time[..time.len() - 6]
    } else {
        time
    };
    let (hms, frac) = match core.split_once('.') {
        Some((hms, frac)) => (hms, Some(frac)),
        None => (core, None),
    };
    if frac.is_some_and(|f| f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit())) {
        return false;
    }
    let parts: Vec<&str> = hms.split(':').collect();
    if parts.len() != 3 || parts.iter().any(|p| p.len() != 2 || !p.bytes().all(|b| b.is_ascii_digit())) {
        return false;
    }
    let (h, m, s): (u32, u32, u32) = (
        parts[0].parse().unwrap_or(99),
        parts[1].parse().unwrap_or(99),
        parts[2].parse().unwrap_or(99),
    );
    (h < 24 && m < 60 && s < 60) || (h == 24 && m == 0 && s == 0)
}

/// An RDF term. Blank nodes are not part of the model.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            Term::Literal(_) => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            Term::Iri(_) => None,
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

/// Writes the N-Triples form of a term (`<iri>`, `"lex"^^<dt>`, `"lex"@tag`).
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write_iriref(f, iri.as_str()),
            Term::Literal(lit) => {
                f.write_str("\"")?;
                write_escaped_string(f, lit.lexical())?;
                f.write_str("\"")?;
                match lit.langtag() {
                    Some(tag) => write!(f, "@{tag}"),
                    None if lit.datatype().as_str() == xsd::STRING => Ok(()),
                    None => {
                        f.write_str("^^")?;
                        write_iriref(f, lit.datatype().as_str())
                    }
                }
            }
        }
    }
}

pub(crate) fn write_iriref(out: &mut impl fmt::Write, iri: &str) -> fmt::Result {
    out.write_char('<')?;
    for c in iri.chars() {
        match c {
            '{' | '}' | '|' | '^' | '`' | '\\' => write!(out, "\\u{:04X}", c as u32)?,
            _ => out.write_char(c)?,
        }
    }
    out.write_char('>')
}

pub(crate) fn write_escaped_string(out: &mut impl fmt::Write, s: &str) -> fmt::Result {
    for c in s.chars() {
        match c {
            '"' => out.write_str("\\\"")?,
            '\\' => out.write_str("\\\\")?,
            '\n' => out.write_str("\\n")?,
            '\r' => out.write_str("\\r")?,
            '\t' => out.write_str("\\t")?,
            c if c.is_control() => write!(out, "\\u{:04X}", c as u32)?,
            c => out.write_char(c)?,
        }
    }
    Ok(())
}

/// A statement in a named graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quad {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
    pub graph: Iri,
}

impl Quad {
    pub fn new(subject: Iri, predicate: Iri, object: impl Into<Term>, graph: Iri) -> Self {
        Quad {
            subject,
            predicate,
            object: object.into(),
            graph,
        }
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_iriref(f, self.subject.as_str())?;
        f.write_char(' ')?;
        write_iriref(f, self.predicate.as_str())?;
        write!(f, " {} ", self.object)?;
        write_iriref(f, self.graph.as_str())?;
        f.write_str(" .")
    }
}

/// Ordered prefix bindings. Insertion order is kept for output.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixMap {
    bindings: Vec<(String, Iri)>,
}

/// The fifteen bindings of the published dataset, in their printed order.
pub const STANDARD_PREFIXES: [(&str, &str); 15] = [
    ("dct", "http://purl.org/dc/terms/"),
    ("ecrm", "http://erlangen-crm.org/current/"),
    ("efrbroo", "http://erlangen-crm.org/efrbroo/"),
    ("crm", "http://www.cidoc-crm.org/cidoc-crm/"),
    ("hico", "http://purl.org/emmedi/hico/"),
    ("hucit", "http://purl.org/net/hucit#"),
    ("myth", "https://purl.org/vpq/mythlod/data/"),
    ("np", "http://www.nanopub.org/nschema#"),
    ("owl", "http://www.w3.org/2002/07/owl#"),
    ("prov", "http://www.w3.org/ns/prov#"),
    ("rdfs", "http://www.w3.org/2000/01/rdf-schema#"),
    ("schema", "http://schema.org/"),
    ("xsd", "http://www.w3.org/2001/XMLSchema#"),
    ("co", "http://purl.org/co/"),
    ("wdt", "http://www.wikidata.org/prop/direct/"),
];

impl PrefixMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// The standard bindings, with `myth` pointing at `base`.
    pub fn standard(base: &Iri) -> Self {
        let mut map = PrefixMap::new();
        for (label, ns) in STANDARD_PREFIXES {
            let ns = if label == "myth" {
                base.clone()
            } else {
                Iri(ns.to_string())
            };
            map.bind(label, ns).expect("standard labels are unique");
        }
        map
    }

    /// Adds a binding. Rebinding an existing label is an error.
    pub fn bind(&mut self, label: &str, namespace: Iri) -> Result<(), ModelError> {
        if !is_pn_prefix(label) {
            return Err(ModelError::InvalidPrefix(label.to_string()));
        }
        if self.bindings.iter().any(|(l, _)| l == label) {
            return Err(ModelError::DuplicatePrefix(label.to_string()));
        }
        self.bindings.push((label.to_string(), namespace));
        Ok(())
    }

    pub fn get(&self, label: &str) -> Option<&Iri> {
        self.bindings.iter().find(|(l, _)| l == label).map(|(_, ns)| ns)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Iri)> {
        self.bindings.iter().map(|(l, ns)| (l.as_str(), ns))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Expands `label:local` into a full IRI.
    pub fn expand(&self, prefixed: &str) -> Result<Iri, ModelError> {
        let (label, local) = prefixed
            .split_once(':')
            .ok_or_else(|| ModelError::UnknownPrefix(prefixed.to_string()))?;
        let ns = self
            .get(label)
            .ok_or_else(|| ModelError::UnknownPrefix(label.to_string()))?;
        ns.join(local)
    }
}

/// Compresses `iri` to `label:local` using the longest namespace whose
/// remainder is a valid Turtle local name; otherwise returns `<iri>`.
pub fn compress(iri: &Iri, prefixes: &PrefixMap) -> String {
    prefixes
        .iter()
        .filter_map(|(label, ns)| {
            let local = iri.as_str().strip_prefix(ns.as_str())?;
            is_pn_local(local).then_some((ns.as_str().len(), label, local))
        })
        .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(a.1)))
        .map(|(_, label, local)| format!("{label}:{local}"))
        .unwrap_or_else(|| {
            let mut out = String::new();
            write_iriref(&mut out, iri.as_str()).expect("writing to a String");
            out
        })
}

fn is_pn_chars_base(c: char) -> bool {
    c.is_ascii_alphabetic()
        || matches!(c as u32,
            0xC0..=0xD6 | 0xD8..=0xF6 | 0xF8..=0x2FF | 0x370..=0x37D | 0x37F..=0x1FFF
            | 0x200C..=0x200D | 0x2070..=0x218F | 0x2C00..=0x2FEF | 0x3001..=0xD7FF
            | 0xF900..=0xFDCF | 0xFDF0..=0xFFFD | 0x10000..=0xEFFFF)
}

fn is_pn_chars_u(c: char) -> bool {
    is_pn_chars_base(c) || c == '_'
}

fn is_pn_chars(c: char) -> bool {
    is_pn_chars_u(c)
        || c == '-'
        || c.is_ascii_digit()
        || matches!(c as u32, 0xB7 | 0x300..=0x36F | 0x203F..=0x2040)
}

fn is_pn_prefix(label: &str) -> bool {
    let chars: Vec<char> = label.chars().collect();
    match chars.as_slice() {
        [] => true,
        [first, rest @ ..] => {
            is_pn_chars_base(*first)
                && rest.iter().all(|&c| is_pn_chars(c) || c == '.')
                && rest.last() != Some(&'.')
        }
    }
}

/// Turtle PN_LOCAL without backslash escapes (percent escapes allowed).
pub(crate) fn is_pn_local(local: &str) -> bool {
    let bytes = local.as_bytes();
    let chars: Vec<(usize, char)> = local.char_indices().collect();
    let mut i = 0;
    let mut last = None;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c == '%' {
            let hex = |k: usize| bytes.get(k).is_some_and(|b| b.is_ascii_hexdigit());
            if !(hex(pos + 1) && hex(pos + 2)) {
                return false;
            }
            i += 3;
            last = Some('0');
            continue;
        }
        let ok = if i == 0 {
            is_pn_chars_u(c) || c == ':' || c.is_ascii_digit()
        } else {
            is_pn_chars(c) || c == '.' || c == ':'
        };
        if !ok {
            return false;
        }
        last = Some(c);
        i += 1;
    }
    last != Some('.')
}

/// Mints `base` + segments joined by `/`. Each segment must be a slug or a
/// numeric id.
pub fn mint_iri<S: AsRef<str>>(base: &Iri, segments: &[S]) -> Result<Iri, ModelError> {
    if !base.as_str().ends_with('/') {
        return Err(ModelError::InvalidBase(base.to_string()));
    }
    if segments.is_empty() {
        return Err(ModelError::InvalidSegment(String::new()));
    }
    let mut out = base.as_str().to_string();
    for (i, segment) in segments.iter().enumerate() {
        let segment = segment.as_ref();
        let valid = !segment.is_empty()
            && segment
                .split('-')
                .all(|run| !run.is_empty() && run.chars().all(|c| c.is_ascii_alphanumeric()));
        if !valid {
            return Err(ModelError::InvalidSegment(segment.to_string()));
        }
        if i > 0 {
            out.push('/');
        }
        out.push_str(segment);
    }
    Iri::new(out)
}

/// A set of quads with its prefix bindings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    quads: BTreeSet<Quad>,
    prefixes: PrefixMap,
}

impl Dataset {
    pub fn new(prefixes: PrefixMap) -> Self {
        Dataset {
            quads: BTreeSet::new(),
            prefixes,
        }
    }

    /// Inserts a quad; returns false when it was already present.
    pub fn insert(&mut self, quad: Quad) -> bool {
        self.quads.insert(quad)
    }

    pub fn extend(&mut self, quads: impl IntoIterator<Item = Quad>) {
        self.quads.extend(quads);
    }

    pub fn contains(&self, quad: &Quad) -> bool {
        self.quads.contains(quad)
    }

    pub fn len(&self) -> usize {
        self.quads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quads.is_empty()
    }

    /// Quads in (subject, predicate, object, graph) order.
    pub fn iter(&self) -> impl Iterator<Item = &Quad> {
        self.quads.iter()
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    pub fn set_prefixes(&mut self, prefixes: PrefixMap) {
        self.prefixes = prefixes;
    }

    /// Each named graph with its quads, sorted by graph IRI.
    pub fn graphs(&self) -> BTreeMap<&Iri, Vec<&Quad>> {
        let mut graphs: BTreeMap<&Iri, Vec<&Quad>> = BTreeMap::new();
        for quad in &self.quads {
            graphs.entry(&quad.graph).or_default().push(quad);
        }
        graphs
    }

    pub fn graph_names(&self) -> BTreeSet<&Iri> {
        self.quads.iter().map(|q| &q.graph).collect()
    }

    pub fn in_graph<'a>(&'a self, graph: &'a Iri) -> impl Iterator<Item = &'a Quad> + 'a {
        self.quads.iter().filter(move |q| &q.graph == graph)
    }

    /// Objects of `subject predicate ?o`, in any graph.
    pub fn objects<'a>(
        &'a self,
        subject: &'a Iri,
        predicate: &'a str,
    ) -> impl Iterator<Item = &'a Term> + 'a {
        self.quads
            .range(subject_floor(subject)..)
            .take_while(move |q| &q.subject == subject)
            .filter(move |q| q.predicate.as_str() == predicate)
            .map(|q| &q.object)
    }

    pub fn quad_set(&self) -> &BTreeSet<Quad> {
        &self.quads
    }
}

fn subject_floor(subject: &Iri) -> Quad {
    Quad {
        subject: subject.clone(),
        predicate: Iri(String::new()),
        object: Term::Iri(Iri(String::new())),
        graph: Iri(String::new()),
    }
}

impl FromIterator<Quad> for Dataset {
    fn from_iter<T: IntoIterator<Item = Quad>>(iter: T) -> Self {
        Dataset {
            quads: iter.into_iter().collect(),
            prefixes: PrefixMap::new(),
        }
    }
}
