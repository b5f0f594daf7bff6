//! Random collections built through the fixture config, for properties of
//! the built dataset and its exports.

use std::path::PathBuf;

use mythforge_core::ingest::{RawRecord, SourceType};
use mythforge_core::pipeline::{build_records, BuildRun, PipelineConfig};
use rand::seq::IndexedRandom;
use rand::Rng;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_config() -> PipelineConfig {
    PipelineConfig::load_with_env(&fixtures_dir().join("config.json"), |_| None).expect("fixture config")
}

const TYPOLOGIES: [&str; 4] = ["Pittura", "Disegno", "Scultura", "Pittura vascolare"];
const THEMES: [&str; 5] = [
    "didone:Didone",
    "enea-abbandona-didone:Enea abbandona Didone",
    "medea-figlicida:Medea figlicida",
    "odisseo-torna-ad-itaca:Odisseo torna ad Itaca",
    "Caduta di Troia",
];
const ARTISTS: [&str; 4] = ["Francesco Allegrini", "Romare Bearden", "Joseph Mallord William Turner", "Anna Rossi"];
const INTERPRETERS: [&str; 3] = ["Gamba Hubert", "Morelli Martina", "Verdi Paola"];
const CENTURIES: [&str; 5] = ["XVII secolo", "XX secolo", "XIX secolo", "V secolo a.C.", ""];
const PLACES: [&str; 5] = [
    "Metropolitan Museum of Art, New York",
    "Art Institute of Chicago, Chicago",
    "National Gallery, Londra",
    "Museo Civico",
    "",
];
const KEYWORDS: [&str; 6] = ["didone", "enea", "addio", "troia", "itaca", "mare"];
const WORKS: [&str; 2] = ["Eneide", "Odissea"];
const ROMAN: [&str; 12] = ["I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI", "XII"];
const REFERENCES: [(SourceType, &str); 5] = [
    (SourceType::RiscritturaLetteraria, "Giacomo Leopardi, Canti"),
    (SourceType::RiscritturaLetteraria, "Giuseppe Ungaretti, Vita d'un uomo"),
    (SourceType::FonteMedievaleOModerna, "Dante Alighieri, Divina Commedia"),
    (SourceType::FonteMedievaleOModerna, "Francesco Petrarca, Trionfi"),
    (SourceType::RiscritturaCinematografica, "Sergio Leone, Didone"),
];

fn citation(rng: &mut impl Rng) -> String {
    let work = *WORKS.choose(rng).unwrap();
    let book = *ROMAN.choose(rng).unwrap();
    let start = rng.random_range(1..=700u32);
    let end = start + rng.random_range(0..=120u32);
    if rng.random_bool(0.3) {
        format!("{work}, {book}, vv. {start}-{end}")
    } else {
        format!("{work}, {book}, {start}-{end}")
    }
}

pub fn random_record(rng: &mut impl Rng, id: usize) -> RawRecord {
    let themed = rng.random_bool(0.85);
    let n_refs = rng.random_range(0..=2);
    let n_keywords = rng.random_range(0..=3);
    let mut keywords: Vec<&str> = KEYWORDS.choose_multiple(rng, n_keywords).copied().collect();
    keywords.sort();
    RawRecord {
        item_id: Some(id.to_string()),
        title: format!("Opera {id}"),
        typology_raw: TYPOLOGIES.choose(rng).unwrap().to_string(),
        theme_raw: if themed { THEMES.choose(rng).unwrap().to_string() } else { String::new() },
        artwork_author_raw: if rng.random_bool(0.7) { ARTISTS.choose(rng).unwrap().to_string() } else { String::new() },
        interpreter_raw: if themed { INTERPRETERS.choose(rng).unwrap().to_string() } else { String::new() },
        century_raw: CENTURIES.choose(rng).unwrap().to_string(),
        year_raw: if rng.random_bool(0.5) { format!("{}", rng.random_range(1500..1990)) } else { String::new() },
        interpretation_date_raw: format!("{:02}/0{}/2019 10:00", rng.random_range(1..=28), rng.random_range(1..=9)),
        location_raw: PLACES.choose(rng).unwrap().to_string(),
        classical_sources_raw: (0..rng.random_range(0..=3)).map(|_| citation(rng)).collect(),
        other_sources_raw: REFERENCES
            .choose_multiple(rng, n_refs)
            .map(|(t, r)| (*t, r.to_string()))
            .collect(),
        keywords_raw: keywords.join(", "),
        ..RawRecord::default()
    }
}

pub fn random_records(rng: &mut impl Rng, max: usize) -> Vec<RawRecord> {
    let n = rng.random_range(0..=max);
    (0..n).map(|i| random_record(rng, 1 + i * 7)).collect()
}

pub fn build(config: &PipelineConfig, raws: &[RawRecord]) -> BuildRun {
    build_records(config, config.resources().expect("fixture resources"), raws)
}
