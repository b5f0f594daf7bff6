//! Synthetic workloads for benchmarks.
//!
//! Records cycle through the vocabulary of the bundled fixtures, so every
//! one reconciles offline and the build stays free of issues.

use std::path::PathBuf;

use mythforge_core::ingest::{RawRecord, SourceType};
use mythforge_core::pipeline::{build_records, PipelineConfig};
use mythforge_core::Dataset;

const TYPOLOGIES: [&str; 4] = ["Pittura", "Disegno", "Scultura", "a:1:{i:0;s:17:\"Pittura vascolare\";}"];
const THEMES: [&str; 4] = [
    "didone:Didone",
    "enea-abbandona-didone:Enea abbandona Didone",
    "enea-racconta-la-caduta-di-troia:Enea racconta la caduta di Troia",
    "odisseo-torna-ad-itaca:Odisseo torna ad Itaca",
];
const ARTISTS: [&str; 3] = ["Francesco Allegrini", "Romare Bearden", "Joseph Mallord William Turner"];
const INTERPRETERS: [&str; 2] = ["Gamba Hubert", "Morelli Martina"];
const CENTURIES: [&str; 3] = ["XVII secolo", "XIX secolo", "XX secolo"];
const PLACES: [&str; 3] = [
    "Metropolitan Museum of Art, New York",
    "Art Institute of Chicago, Chicago",
    "National Gallery, Londra",
];
const REFERENCES: [(SourceType, &str); 3] = [
    (SourceType::RiscritturaLetteraria, "Giacomo Leopardi, Canti"),
    (SourceType::FonteMedievaleOModerna, "Dante Alighieri, Divina Commedia"),
    (SourceType::FonteMedievaleOModerna, "Francesco Petrarca, Trionfi"),
];
const ROMAN: [&str; 12] = ["I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI", "XII"];

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_config() -> PipelineConfig {
    PipelineConfig::load_with_env(&fixtures_dir().join("config.json"), |_| None).expect("fixture config")
}

/// `n` deterministic records with one or two Aeneid citations each.
pub fn synthetic_records(n: usize) -> Vec<RawRecord> {
    (0..n)
        .map(|i| {
            let pick = |len: usize, salt: usize| (i * 7 + salt * 13 + i / len) % len;
            let book = ROMAN[pick(ROMAN.len(), 1)];
            let start = 1 + (i * 37) % 700;
            let mut citations = vec![format!("Eneide, {book}, {start}-{}", start + 10 + i % 60)];
            if i % 3 == 0 {
                citations.push(format!("Odissea, {}, vv. {}-{}", ROMAN[pick(ROMAN.len(), 2)], start, start + 25));
            }
            RawRecord {
                item_id: Some((i + 1).to_string()),
                title: format!("Opera {}", i + 1),
                typology_raw: TYPOLOGIES[pick(TYPOLOGIES.len(), 3)].to_string(),
                theme_raw: THEMES[pick(THEMES.len(), 4)].to_string(),
                artwork_author_raw: ARTISTS[pick(ARTISTS.len(), 5)].to_string(),
                interpreter_raw: INTERPRETERS[pick(INTERPRETERS.len(), 6)].to_string(),
                century_raw: CENTURIES[pick(CENTURIES.len(), 7)].to_string(),
                year_raw: format!("{}", 1600 + i % 380),
                interpretation_date_raw: format!("{:02}/05/2019 07:57", 1 + i % 28),
                location_raw: PLACES[pick(PLACES.len(), 8)].to_string(),
                classical_sources_raw: citations,
                other_sources_raw: vec![{
                    let (t, r) = REFERENCES[pick(REFERENCES.len(), 9)];
                    (t, r.to_string())
                }],
                keywords_raw: "didone, enea".to_string(),
                ..RawRecord::default()
            }
        })
        .collect()
}

/// Builds `records` through the fixture configuration.
pub fn build(config: &PipelineConfig, records: &[RawRecord]) -> Dataset {
    let resources = config.resources().expect("fixture resources");
    let run = build_records(config, resources, records);
    assert!(run.report.passed(), "{:?}", run.report.fatal);
    run.output.dataset
}
