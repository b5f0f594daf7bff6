//! Pipeline configuration and the build, validate, query and export runs.
//!
//! Every path in a config file is resolved against the directory holding
//! that file. Runs never read the wall clock, so the same inputs and config
//! give byte-identical outputs.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::citeparse::{ReferenceOverrides, RegistryError, WorkRegistry};
use crate::error::ModelError;
use crate::export::{
    catalog_json, export_catalog, export_storytelling, facets_json, storytelling_json, ExportError,
    DEFAULT_BUCKET_WIDTH, DEFAULT_WORK,
};
use crate::graph::{
    integrity_violations, parse_nquads, prepare_record, serialize_nquads, serialize_trig, BuildOptions,
    BuildOutput, GraphBuilder, IntegrityError, IssueClass, NameOrders, ParseError, PrepareContext,
    RecordIssue, Violation,
};
use crate::ingest::{parse_table, ColumnMapping, IngestError, RawRecord};
use crate::model::{Dataset, Iri, Literal, PrefixMap};
use crate::query::{load_suite, parse_query, run_cq_suite, BindingTable, QueryError, SuiteError, SuiteReport};
use crate::reconcile::{
    read_review, write_review, AliasTable, AuthorityFixture, Mode, OnlineConfig, OnlineResolver,
    ReconcileError, Reconciler, ReviewRow, DEFAULT_ACCEPT_THRESHOLD,
};
use crate::vocab::{hico, prov, DEFAULT_BASE};

pub const ENV_CONFIG: &str = "MYTHFORGE_CONFIG";
pub const ENV_RECON_URL: &str = "MYTHFORGE_RECON_URL";
pub const ENV_VIAF_URL: &str = "MYTHFORGE_VIAF_URL";

pub const DATASET_TRIG: &str = "dataset.trig";
pub const DATASET_NQ: &str = "dataset.nq";
pub const BUILD_REPORT: &str = "build-report.json";
pub const REVIEW_CSV: &str = "review.csv";
pub const VALIDATION_REPORT: &str = "validation-report.json";
pub const CATALOG_JSON: &str = "catalog.json";
pub const FACETS_JSON: &str = "facets.json";

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config {path}: {reason}")]
    Config { path: PathBuf, reason: String },
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Reconcile(#[from] ReconcileError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{path}: {source}")]
    Dataset { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Suite(#[from] SuiteError),
    #[error("{path}: {source}")]
    Query { path: PathBuf, source: QueryError },
    #[error(transparent)]
    Export(#[from] ExportError),
    #[error("review file {path}: {source}")]
    Review { path: PathBuf, source: csv::Error },
}

/// Class of the interpretation act node in provenance graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActClassNamespace {
    #[default]
    Prov,
    Hico,
}

impl ActClassNamespace {
    pub fn class_iri(self) -> Iri {
        let ns = match self {
            ActClassNamespace::Prov => prov::NS,
            ActClassNamespace::Hico => hico::NS,
        };
        Iri::new(format!("{ns}InterpretationAct")).expect("static IRI")
    }
}

fn default_base() -> String {
    DEFAULT_BASE.to_string()
}

fn default_bucket_width() -> u32 {
    DEFAULT_BUCKET_WIDTH
}

fn default_threshold() -> f64 {
    DEFAULT_ACCEPT_THRESHOLD
}

fn default_work() -> String {
    DEFAULT_WORK.to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default = "default_base")]
    pub base_iri: String,
    pub column_mapping: PathBuf,
    pub work_registry: PathBuf,
    pub alias_table: PathBuf,
    pub authority_fixture: PathBuf,
    #[serde(default)]
    pub reference_overrides: Option<PathBuf>,
    /// A review file whose accepted rows count as authority entries.
    #[serde(default)]
    pub accepted_review: Option<PathBuf>,
    #[serde(default)]
    pub name_order: NameOrders,
    pub publisher: String,
    /// xsd:dateTime stamped on every publication-info graph.
    pub build_time: String,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub endpoints: Option<OnlineConfig>,
    #[serde(default = "default_bucket_width")]
    pub bucket_width: u32,
    #[serde(default)]
    pub skip_empty_literals: bool,
    #[serde(default)]
    pub interpretation_act_class: ActClassNamespace,
    /// Century label to art-period label.
    #[serde(default)]
    pub period_names: BTreeMap<String, String>,
    #[serde(default = "default_threshold")]
    pub accept_threshold: f64,
    #[serde(default = "default_work")]
    pub default_work: String,
    /// Where the config was read from; not part of the file.
    #[serde(skip)]
    pub source: PathBuf,
}

impl PipelineConfig {
    /// Reads, resolves and validates a config, applying env overrides.
    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        Self::load_with_env(path, |k| std::env::var(k).ok())
    }

    pub fn load_with_env(path: &Path, env: impl Fn(&str) -> Option<String>) -> Result<Self, PipelineError> {
        let text = fs::read_to_string(path).map_err(|source| PipelineError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let mut config: PipelineConfig = serde_json::from_str(&text).map_err(|e| PipelineError::Config {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        config.source = path.to_path_buf();
        let dir = path.parent().unwrap_or(Path::new("."));
        config.resolve_paths(dir);
        config.apply_env(env);
        config.validate()?;
        Ok(config)
    }

    fn resolve_paths(&mut self, dir: &Path) {
        let join = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        join(&mut self.column_mapping);
        join(&mut self.work_registry);
        join(&mut self.alias_table);
        join(&mut self.authority_fixture);
        self.reference_overrides.iter_mut().for_each(join);
        self.accepted_review.iter_mut().for_each(join);
    }

    /// Endpoint URLs from the environment win over the file.
    pub fn apply_env(&mut self, env: impl Fn(&str) -> Option<String>) {
        let recon = env(ENV_RECON_URL).filter(|s| !s.is_empty());
        let viaf = env(ENV_VIAF_URL).filter(|s| !s.is_empty());
        if recon.is_none() && viaf.is_none() {
            return;
        }
        let endpoints = self.endpoints.get_or_insert_with(|| OnlineConfig {
            recon_url: None,
            viaf_url: None,
            ..OnlineConfig::default()
        });
        if recon.is_some() {
            endpoints.recon_url = recon;
        }
        if viaf.is_some() {
            endpoints.viaf_url = viaf;
        }
    }

    fn err(&self, reason: impl Into<String>) -> PipelineError {
        PipelineError::Config {
            path: self.source.clone(),
            reason: reason.into(),
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let base = Iri::new(&self.base_iri).map_err(|e| self.err(format!("base_iri: {e}")))?;
        if !base.as_str().ends_with('/') {
            return Err(self.err(format!("base_iri {:?} must end with '/'", self.base_iri)));
        }
        Iri::new(&self.publisher).map_err(|e| self.err(format!("publisher: {e}")))?;
        Literal::date_time(self.build_time.as_str()).map_err(|e| self.err(format!("build_time: {e}")))?;
        let required = [
            ("column_mapping", Some(&self.column_mapping)),
            ("work_registry", Some(&self.work_registry)),
            ("alias_table", Some(&self.alias_table)),
            ("authority_fixture", Some(&self.authority_fixture)),
            ("reference_overrides", self.reference_overrides.as_ref()),
            ("accepted_review", self.accepted_review.as_ref()),
        ];
        for (key, path) in required {
            if let Some(p) = path {
                if !p.is_file() {
                    return Err(self.err(format!("{key}: no such file {}", p.display())));
                }
            }
        }
        if self.bucket_width == 0 {
            return Err(self.err("bucket_width must be positive"));
        }
        if !(0.0..=1.0).contains(&self.accept_threshold) {
            return Err(self.err("accept_threshold must lie in [0, 1]"));
        }
        if self.mode == Mode::Online {
            let has_url = self
                .endpoints
                .as_ref()
                .is_some_and(|e| e.recon_url.is_some() || e.viaf_url.is_some());
            if !has_url {
                return Err(self.err("online mode needs at least one endpoint URL"));
            }
        }
        Ok(())
    }

    pub fn base(&self) -> Iri {
        Iri::new(&self.base_iri).expect("validated")
    }

    pub fn build_options(&self) -> BuildOptions {
        let mut options = BuildOptions::new(
            self.base(),
            Iri::new(&self.publisher).expect("validated"),
            self.build_time.clone(),
        );
        options.mode = self.mode;
        options.skip_empty_literals = self.skip_empty_literals;
        options.interpretation_act_class = self.interpretation_act_class.class_iri();
        options.period_names = self.period_names.clone();
        options
    }

    /// Loads the registry, override table and a ready reconciler.
    pub fn resources(&self) -> Result<Resources, PipelineError> {
        let mapping = ColumnMapping::load(&self.column_mapping)?;
        let registry = WorkRegistry::load(&self.work_registry)?;
        let overrides = match &self.reference_overrides {
            Some(p) => ReferenceOverrides::load(p)?,
            None => ReferenceOverrides::default(),
        };
        let aliases = AliasTable::load(&self.alias_table)?;
        let fixture = AuthorityFixture::load(&self.authority_fixture)?;
        let mut reconciler = Reconciler::new(aliases, fixture).with_threshold(self.accept_threshold);
        if self.mode == Mode::Online {
            if let Some(endpoints) = &self.endpoints {
                reconciler = reconciler.with_online(OnlineResolver::with_ureq(endpoints));
            }
        }
        if let Some(path) = &self.accepted_review {
            let file = fs::File::open(path).map_err(|source| PipelineError::Read {
                path: path.clone(),
                source,
            })?;
            let rows = read_review(file).map_err(|source| PipelineError::Review {
                path: path.clone(),
                source,
            })?;
            reconciler.ingest_review(&rows);
        }
        Ok(Resources {
            mapping,
            registry,
            overrides,
            reconciler,
        })
    }
}

pub struct Resources {
    pub mapping: ColumnMapping,
    pub registry: WorkRegistry,
    pub overrides: ReferenceOverrides,
    pub reconciler: Reconciler,
}

#[derive(Debug, Clone, Serialize)]
pub struct BuildReport {
    pub records: usize,
    pub quads: usize,
    pub nanopubs: usize,
    pub errors_by_class: BTreeMap<IssueClass, usize>,
    pub review_candidates: usize,
    /// Record-level failures that stop the build from being published.
    pub fatal: Vec<String>,
    pub integrity_violations: Vec<Violation>,
    pub issues: Vec<RecordIssue>,
}

impl BuildReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn passed(&self) -> bool {
        self.fatal.is_empty() && self.integrity_violations.is_empty()
    }
}

#[derive(Debug)]
pub struct BuildRun {
    pub output: BuildOutput,
    pub report: BuildReport,
    pub review: Vec<ReviewRow>,
}

/// Ingest, normalize, reconcile and assemble the graph in memory.
pub fn build_dataset(config: &PipelineConfig, input: &Path) -> Result<BuildRun, PipelineError> {
    let resources = config.resources()?;
    let raws = parse_table(input, &resources.mapping)?;
    log::info!("read {} records from {}", raws.len(), input.display());
    Ok(build_records(config, resources, &raws))
}

/// The in-memory build over records already read from a table.
pub fn build_records(config: &PipelineConfig, resources: Resources, raws: &[RawRecord]) -> BuildRun {
    let Resources {
        registry,
        overrides,
        mut reconciler,
        ..
    } = resources;
    let ctx = PrepareContext {
        registry: &registry,
        overrides: &overrides,
        name_orders: config.name_order,
    };
    let mut issues = Vec::new();
    let prepared: Vec<_> = raws
        .iter()
        .enumerate()
        .map(|(i, raw)| {
            let (record, record_issues) = prepare_record(raw, i, &ctx);
            issues.extend(record_issues);
            record
        })
        .collect();
    log::info!("prepared {} records, {} issues", prepared.len(), issues.len());
    if config.mode == Mode::Online {
        reconciler.prefetch(&GraphBuilder::lookup_queries(&prepared, &registry));
    }

    let mut builder = GraphBuilder::new(config.build_options());
    let mut fatal = Vec::new();
    for record in &prepared {
        if let Err(e) = builder.add_record(record, &mut reconciler, &registry, config.name_order.reference_author) {
            log::error!("{e}");
            fatal.push(e.to_string());
        }
    }
    let (output, violations) = match builder.finish() {
        Ok(out) => (out, Vec::new()),
        Err((IntegrityError::Violations(v), out)) => (out, v),
        Err((e, out)) => {
            fatal.push(e.to_string());
            (out, Vec::new())
        }
    };
    issues.extend(output.issues.iter().cloned());
    let mut errors_by_class = BTreeMap::new();
    for issue in &issues {
        *errors_by_class.entry(issue.class).or_insert(0) += 1;
    }
    let review = reconciler.review_rows().to_vec();
    let report = BuildReport {
        records: raws.len(),
        quads: output.dataset.len(),
        nanopubs: output.nanopubs.len(),
        errors_by_class,
        review_candidates: review.len(),
        fatal,
        integrity_violations: violations,
        issues,
    };
    log::info!(
        "built {} quads in {} nanopublications, {} integrity violations",
        report.quads,
        report.nanopubs,
        report.integrity_violations.len()
    );
    BuildRun { output, report, review }
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), PipelineError> {
    fs::write(path, contents).map_err(|source| PipelineError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn create_dir(dir: &Path) -> Result<(), PipelineError> {
    fs::create_dir_all(dir).map_err(|source| PipelineError::Write {
        path: dir.to_path_buf(),
        source,
    })
}

/// Builds and writes the dataset, the report and, when candidates were set
/// aside, the review file. Outputs are written even when the build fails
/// its integrity checks; callers inspect `report.passed()`.
pub fn run_build(config: &PipelineConfig, input: &Path, out_dir: &Path) -> Result<BuildRun, PipelineError> {
    let run = build_dataset(config, input)?;
    create_dir(out_dir)?;
    write(&out_dir.join(DATASET_TRIG), serialize_trig(&run.output.dataset))?;
    write(&out_dir.join(DATASET_NQ), serialize_nquads(&run.output.dataset))?;
    write(&out_dir.join(BUILD_REPORT), run.report.to_json())?;
    let review_path = out_dir.join(REVIEW_CSV);
    if run.review.is_empty() {
        if review_path.exists() {
            fs::remove_file(&review_path).map_err(|source| PipelineError::Write {
                path: review_path.clone(),
                source,
            })?;
        }
    } else {
        let mut buf = Vec::new();
        write_review(&mut buf, &run.review).map_err(|source| PipelineError::Review {
            path: review_path.clone(),
            source,
        })?;
        write(&review_path, buf)?;
    }
    Ok(run)
}

/// Reads an N-Quads file and binds the standard prefixes under `base`.
pub fn load_dataset(path: &Path, base: &Iri) -> Result<Dataset, PipelineError> {
    let text = fs::read_to_string(path).map_err(|source| PipelineError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let mut d = parse_nquads(&text).map_err(|source| PipelineError::Dataset {
        path: path.to_path_buf(),
        source,
    })?;
    d.set_prefixes(PrefixMap::standard(base));
    Ok(d)
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub quads: usize,
    pub integrity_violations: Vec<Violation>,
    pub competency_questions: SuiteReport,
}

impl ValidationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Integrity checks plus the CQ suite over a dataset already in memory.
pub fn validate_dataset(d: &Dataset, base: &Iri, suite: &Path) -> Result<ValidationReport, PipelineError> {
    let specs = load_suite(suite)?;
    let factual = base.join(crate::graph::FACTUAL_GRAPH)?;
    let violations = integrity_violations(d, &factual);
    let cq = run_cq_suite(&specs, d);
    Ok(ValidationReport {
        passed: violations.is_empty() && cq.all_passed(),
        quads: d.len(),
        integrity_violations: violations,
        competency_questions: cq,
    })
}

/// Validates `dataset` and writes the report into `out_dir`.
pub fn run_validate(
    base: &Iri,
    dataset: &Path,
    suite: &Path,
    out_dir: &Path,
) -> Result<ValidationReport, PipelineError> {
    let d = load_dataset(dataset, base)?;
    log::info!("loaded {} quads from {}", d.len(), dataset.display());
    let report = validate_dataset(&d, base, suite)?;
    create_dir(out_dir)?;
    write(&out_dir.join(VALIDATION_REPORT), report.to_json())?;
    Ok(report)
}

/// Evaluates a query file; the prefix map is the one used for display.
pub fn run_query(base: &Iri, dataset: &Path, query: &Path) -> Result<(BindingTable, PrefixMap), PipelineError> {
    let text = fs::read_to_string(query).map_err(|source| PipelineError::Read {
        path: query.to_path_buf(),
        source,
    })?;
    let q = parse_query(&text).map_err(|source| PipelineError::Query {
        path: query.to_path_buf(),
        source,
    })?;
    let d = load_dataset(dataset, base)?;
    let table = crate::query::evaluate(&q, &d);
    Ok((table, d.prefixes().clone()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExportFiles {
    pub catalog: PathBuf,
    pub facets: PathBuf,
    pub storytelling: PathBuf,
}

pub fn storytelling_file(work_slug: &str) -> String {
    format!("storytelling-{work_slug}.json")
}

/// Writes the catalog, facet and storytelling bundles.
pub fn run_export(
    base: &Iri,
    dataset: &Path,
    out_dir: &Path,
    work_slug: &str,
    bucket_width: u32,
) -> Result<ExportFiles, PipelineError> {
    let d = load_dataset(dataset, base)?;
    let story = export_storytelling(&d, base, work_slug, bucket_width)?;
    let catalog = export_catalog(&d, base);
    log::info!("{} catalog cards, {} storytelling items", catalog.cards.len(), story.items.len());
    create_dir(out_dir)?;
    let files = ExportFiles {
        catalog: out_dir.join(CATALOG_JSON),
        facets: out_dir.join(FACETS_JSON),
        storytelling: out_dir.join(storytelling_file(work_slug)),
    };
    write(&files.catalog, catalog_json(&catalog))?;
    write(&files.facets, facets_json(&catalog))?;
    write(&files.storytelling, storytelling_json(&story))?;
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_config(dir: &Path, body: &str) -> PathBuf {
        for name in ["columns.json", "works.json", "aliases.json", "authorities.json"] {
            fs::write(dir.join(name), "{}").unwrap();
        }
        let path = dir.join("config.json");
        fs::write(&path, body).unwrap();
        path
    }

    const MINIMAL: &str = r#"{
        "column_mapping": "columns.json",
        "work_registry": "works.json",
        "alias_table": "aliases.json",
        "authority_fixture": "authorities.json",
        "publisher": "https://purl.org/vpq/mythlod/data/person/dharc",
        "build_time": "2020-08-24T09:00:00"
    }"#;

    #[test]
    fn paths_resolve_against_config_dir() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(dir.path(), MINIMAL);
        let c = PipelineConfig::load_with_env(&path, |_| None).unwrap();
        assert_eq!(c.column_mapping, dir.path().join("columns.json"));
        assert_eq!(c.base_iri, DEFAULT_BASE);
        assert_eq!(c.bucket_width, DEFAULT_BUCKET_WIDTH);
        assert_eq!(c.mode, Mode::Offline);
        assert!(c.endpoints.is_none());
    }

    #[test]
    fn missing_file_is_named() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(dir.path(), MINIMAL);
        fs::remove_file(dir.path().join("aliases.json")).unwrap();
        let err = PipelineConfig::load_with_env(&path, |_| None).unwrap_err().to_string();
        assert!(err.contains("alias_table") && err.contains("aliases.json"), "{err}");
    }

    #[test]
    fn online_mode_needs_an_endpoint() {
        let dir = tempfile::tempdir().unwrap();
        let body = MINIMAL.replace("\"build_time\"", "\"mode\": \"online\", \"build_time\"");
        let path = write_config(dir.path(), &body);
        assert!(PipelineConfig::load_with_env(&path, |_| None).is_err());
        let c = PipelineConfig::load_with_env(&path, |k| {
            (k == ENV_VIAF_URL).then(|| "http://127.0.0.1:9/viaf".to_string())
        })
        .unwrap();
        let e = c.endpoints.unwrap();
        assert_eq!(e.viaf_url.as_deref(), Some("http://127.0.0.1:9/viaf"));
        assert_eq!(e.recon_url, None);
    }

    #[test]
    fn bad_values_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        for (from, to) in [
            ("2020-08-24T09:00:00", "24/08/2020"),
            ("\"build_time\"", "\"bucket_width\": 0, \"build_time\""),
            ("\"build_time\"", "\"colour\": 1, \"build_time\""),
            ("\"build_time\"", "\"base_iri\": \"https://x.org/no-slash\", \"build_time\""),
        ] {
            let path = write_config(dir.path(), &MINIMAL.replace(from, to));
            assert!(PipelineConfig::load_with_env(&path, |_| None).is_err(), "{to}");
        }
    }

    #[test]
    fn act_class_switch() {
        assert_eq!(ActClassNamespace::Prov.class_iri().as_str(), "http://www.w3.org/ns/prov#InterpretationAct");
        assert_eq!(ActClassNamespace::Hico.class_iri().as_str(), "http://purl.org/emmedi/hico/InterpretationAct");
    }
}
