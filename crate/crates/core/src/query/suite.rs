//! Competency-question suites: named queries with expected rows or a
//! minimum row count, run against a dataset.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{display_term, evaluate, parse_query};
use crate::graph::parse_nquads;
use crate::model::{Dataset, Iri, PrefixMap, Term};

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid suite {path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Expectation {
    Rows { rows: Vec<Vec<String>> },
    MinCount { min_count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CqSpec {
    pub name: String,
    /// Query text, or a path relative to the suite file.
    pub query: String,
    pub expect: Expectation,
}

/// Reads a JSON array of questions and inlines queries given as paths.
pub fn load_suite(path: &Path) -> Result<Vec<CqSpec>, SuiteError> {
    let io = |p: &Path| {
        let p = p.to_path_buf();
        move |source| SuiteError::Io { path: p, source }
    };
    let text = fs::read_to_string(path).map_err(io(path))?;
    let mut specs: Vec<CqSpec> = serde_json::from_str(&text).map_err(|source| SuiteError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    let dir = path.parent().unwrap_or(Path::new("."));
    for spec in &mut specs {
        if !spec.query.contains('{') {
            let qp = dir.join(spec.query.trim());
            spec.query = fs::read_to_string(&qp).map_err(io(&qp))?;
        }
    }
    Ok(specs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CqOutcome {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct CqResult {
    pub name: String,
    pub outcome: CqOutcome,
    pub row_count: usize,
    pub rows: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub missing: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub unexpected: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub results: Vec<CqResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.errors == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let tag = match r.outcome {
                CqOutcome::Pass => "PASS",
                CqOutcome::Fail => "FAIL",
                CqOutcome::Error => "ERROR",
            };
            out.push_str(&format!("{tag} {} ({} rows, {:.1} ms)\n", r.name, r.row_count, r.elapsed_ms));
            if let Some(m) = &r.message {
                out.push_str(&format!("  {m}\n"));
            }
            for row in &r.missing {
                out.push_str(&format!("  missing: {}\n", row.join(" | ")));
            }
            for row in &r.unexpected {
                out.push_str(&format!("  unexpected: {}\n", row.join(" | ")));
            }
        }
        out.push_str(&format!(
            "{} passed, {} failed, {} errors\n",
            self.passed, self.failed, self.errors
        ));
        out
    }
}

/// Canonical N-Triples form of an expected cell: `<iri>`, a literal in
/// N-Triples syntax, or `prefix:local` where the local part may contain
/// `/`.
fn canonical_cell(cell: &str, prefixes: &[&PrefixMap]) -> Result<String, String> {
    let cell = cell.trim();
    if cell.starts_with('"') {
        let line = format!("<urn:x:s> <urn:x:p> {cell} <urn:x:g> .");
        let d = parse_nquads(&line).map_err(|e| format!("bad literal {cell:?}: {e}"))?;
        let q = d.iter().next().expect("one quad parsed");
        return Ok(q.object.to_string());
    }
    let iri = if let Some(inner) = cell.strip_prefix('<').and_then(|c| c.strip_suffix('>')) {
        Iri::new(inner).map_err(|e| e.to_string())?
    } else {
        let (label, local) = cell.split_once(':').ok_or_else(|| format!("cannot read cell {cell:?}"))?;
        let ns = prefixes
            .iter()
            .find_map(|p| p.get(label))
            .ok_or_else(|| format!("unknown prefix {label:?} in {cell:?}"))?;
        ns.join(local).map_err(|e| e.to_string())?
    };
    Ok(Term::Iri(iri).to_string())
}

pub fn run_cq_suite(specs: &[CqSpec], d: &Dataset) -> SuiteReport {
    let mut results = Vec::with_capacity(specs.len());
    for spec in specs {
        results.push(run_one(spec, d));
    }
    let count = |o| results.iter().filter(|r: &&CqResult| r.outcome == o).count();
    SuiteReport {
        passed: count(CqOutcome::Pass),
        failed: count(CqOutcome::Fail),
        errors: count(CqOutcome::Error),
        results,
    }
}

fn run_one(spec: &CqSpec, d: &Dataset) -> CqResult {
    let start = Instant::now();
    let mut result = CqResult {
        name: spec.name.clone(),
        outcome: CqOutcome::Error,
        row_count: 0,
        rows: Vec::new(),
        missing: Vec::new(),
        unexpected: Vec::new(),
        message: None,
        elapsed_ms: 0.0,
    };
    let query = match parse_query(&spec.query) {
        Ok(q) => q,
        Err(e) => {
            result.message = Some(e.to_string());
            return result;
        }
    };
    let table = evaluate(&query, d);
    result.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    result.row_count = table.len();

    let mut display = query.prefixes.clone();
    for (label, ns) in d.prefixes().iter() {
        if display.get(label).is_none() {
            display.bind(label, ns.clone()).expect("label comes from a valid map");
        }
    }
    result.rows = table
        .rows
        .iter()
        .map(|r| r.iter().map(|t| display_term(t, &display)).collect())
        .collect();

    match &spec.expect {
        Expectation::MinCount { min_count } => {
            result.outcome = if table.len() >= *min_count {
                CqOutcome::Pass
            } else {
                result.message = Some(format!("expected at least {min_count} rows"));
                CqOutcome::Fail
            };
        }
        Expectation::Rows { rows } => {
            let maps = [&query.prefixes, d.prefixes()];
            let expected: Result<BTreeSet<Vec<String>>, String> = rows
                .iter()
                .map(|r| r.iter().map(|c| canonical_cell(c, &maps)).collect())
                .collect();
            let expected = match expected {
                Ok(e) => e,
                Err(m) => {
                    result.message = Some(m);
                    return result;
                }
            };
            let actual: BTreeSet<Vec<String>> = table
                .rows
                .iter()
                .map(|r| r.iter().map(Term::to_string).collect())
                .collect();
            result.missing = expected.difference(&actual).cloned().collect();
            result.unexpected = actual.difference(&expected).cloned().collect();
            result.outcome = if result.missing.is_empty() && result.unexpected.is_empty() {
                CqOutcome::Pass
            } else {
                CqOutcome::Fail
            };
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Literal, Quad};

    fn i(s: &str) -> Iri {
        Iri::new(format!("http://e.org/{s}")).unwrap()
    }

    fn data() -> Dataset {
        let mut p = PrefixMap::new();
        p.bind("e", i("")).unwrap();
        let mut d = Dataset::new(p);
        d.insert(Quad::new(i("w/1"), i("refers"), i("didone"), i("a1")));
        d.insert(Quad::new(i("w/1"), i("label"), Literal::string("Didone"), i("fd")));
        d
    }

    fn spec(name: &str, query: &str, expect: Expectation) -> CqSpec {
        CqSpec {
            name: name.into(),
            query: query.into(),
            expect,
        }
    }

    #[test]
    fn outcomes() {
        let specs = vec![
            spec(
                "rows",
                "PREFIX e: <http://e.org/> SELECT ?w WHERE { GRAPH ?g { ?w e:refers e:didone } }",
                Expectation::Rows { rows: vec![vec!["e:w/1".into()]] },
            ),
            spec(
                "literal",
                "PREFIX e: <http://e.org/> SELECT ?l WHERE { ?w e:label ?l }",
                Expectation::Rows { rows: vec![vec!["\"Didone\"".into()]] },
            ),
            spec(
                "short",
                "PREFIX e: <http://e.org/> SELECT ?w WHERE { ?w e:refers ?x }",
                Expectation::MinCount { min_count: 2 },
            ),
            spec("broken", "SELECT ?w WHERE { ?w", Expectation::MinCount { min_count: 0 }),
        ];
        let report = run_cq_suite(&specs, &data());
        let outcomes: Vec<CqOutcome> = report.results.iter().map(|r| r.outcome).collect();
        assert_eq!(outcomes, [CqOutcome::Pass, CqOutcome::Pass, CqOutcome::Fail, CqOutcome::Error]);
        assert_eq!((report.passed, report.failed, report.errors), (2, 1, 1));
        assert_eq!(report.results[0].rows, vec![vec!["e:w/1".to_string()]]);
        let text = report.render_text();
        assert!(text.starts_with("PASS rows"));
        assert!(text.contains("ERROR broken"));
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["results"][2]["outcome"], "FAIL");
    }

    #[test]
    fn mismatch_lists_missing_and_unexpected() {
        let s = spec(
            "x",
            "PREFIX e: <http://e.org/> SELECT ?w WHERE { ?w e:refers ?x }",
            Expectation::Rows { rows: vec![vec!["<http://e.org/w/2>".into()]] },
        );
        let r = &run_cq_suite(&[s], &data()).results[0];
        assert_eq!(r.missing, vec![vec!["<http://e.org/w/2>".to_string()]]);
        assert_eq!(r.unexpected, vec![vec!["<http://e.org/w/1>".to_string()]]);
    }

    #[test]
    fn suite_file_with_query_path() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("q.rq"), "PREFIX e: <http://e.org/> SELECT ?w WHERE { ?w e:refers ?x }").unwrap();
        fs::write(
            dir.path().join("suite.json"),
            r#"[{"name": "q", "query": "q.rq", "expect": {"min_count": 1}}]"#,
        )
        .unwrap();
        let specs = load_suite(&dir.path().join("suite.json")).unwrap();
        assert!(specs[0].query.contains("SELECT"));
        assert!(run_cq_suite(&specs, &data()).all_passed());
    }
}
