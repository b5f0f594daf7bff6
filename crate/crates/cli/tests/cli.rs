use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_mythforge");

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn mythforge(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("MYTHFORGE_CONFIG")
        .env_remove("MYTHFORGE_RECON_URL")
        .env_remove("MYTHFORGE_VIAF_URL")
        .output()
        .expect("run mythforge")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Builds the fixture collection into `dir` and returns the N-Quads path.
fn build_collection(dir: &Path) -> PathBuf {
    let config = fixtures().join("config.json");
    let input = fixtures().join("collection.csv");
    let o = mythforge(&["--config", s(&config), "build", s(&input), "-o", s(dir)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    dir.join("dataset.nq")
}

#[test]
fn build_writes_every_output() {
    let dir = tempfile::tempdir().unwrap();
    build_collection(dir.path());
    for f in ["dataset.trig", "dataset.nq", "build-report.json", "review.csv"] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("build-report.json")).unwrap()).unwrap();
    assert_eq!(report["records"], 7);
    assert_eq!(report["nanopubs"], 6);
}

#[test]
fn missing_config_exits_1_naming_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.json");
    let input = fixtures().join("collection.csv");
    let o = mythforge(&["--config", s(&missing), "build", s(&input)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("absent.json"), "{}", stderr(&o));
}

#[test]
fn build_without_config_exits_1() {
    let input = fixtures().join("collection.csv");
    let o = mythforge(&["build", s(&input)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("MYTHFORGE_CONFIG"), "{}", stderr(&o));
}

#[test]
fn config_can_come_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixtures().join("item-284-conversion.csv");
    let o = Command::new(BIN)
        .args(["build", s(&input), "-o", s(dir.path())])
        .env("MYTHFORGE_CONFIG", fixtures().join("config.json"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("dataset.nq").is_file());
}

#[test]
fn online_mode_without_endpoints_exits_1() {
    let config = fixtures().join("config.json");
    let input = fixtures().join("collection.csv");
    let o = mythforge(&["--config", s(&config), "--mode", "online", "build", s(&input)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("endpoint"), "{}", stderr(&o));
}

#[test]
fn unparseable_arguments_exit_1() {
    assert_eq!(mythforge(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(mythforge(&["--help"]).status.code(), Some(0));
}

#[test]
fn fixture_suite_validates() {
    let dir = tempfile::tempdir().unwrap();
    let nq = build_collection(dir.path());
    let suite = fixtures().join("cq-suite.json");
    let o = mythforge(&["validate", s(&nq), s(&suite)]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert_eq!(stdout(&o).matches("PASS").count(), 3, "{}", stdout(&o));
    assert!(dir.path().join("validation-report.json").is_file());
}

#[test]
fn dangling_refers_to_fails_validation_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let nq = build_collection(dir.path());
    let mut text = fs::read_to_string(&nq).unwrap();
    text.push_str(
        "<https://purl.org/vpq/mythlod/data/item/284-expression> \
         <http://erlangen-crm.org/current/P67_refers_to> \
         <https://purl.org/vpq/mythlod/data/categ/undescribed> \
         <https://purl.org/vpq/mythlod/data/assertion284> .\n",
    );
    fs::write(&nq, text).unwrap();
    let suite = fixtures().join("cq-suite.json");
    let o = mythforge(&["validate", s(&nq), s(&suite)]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    assert!(stdout(&o).contains("categ/undescribed"), "{}", stdout(&o));
}

#[test]
fn empty_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let nq = build_collection(dir.path());
    let suite = dir.path().join("empty.json");
    fs::write(&suite, "[]").unwrap();
    let o = mythforge(&["validate", s(&nq), s(&suite)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn query_prints_tsv() {
    let dir = tempfile::tempdir().unwrap();
    let nq = build_collection(dir.path());
    let q = fixtures().join("didone-sources.rq");
    let o = mythforge(&["query", s(&nq), s(&q)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 8, "{out}");
    assert!(lines[0].starts_with('?'), "{out}");
    assert!(out.contains("myth:work/virgil-aeneis\tmyth:type/fonteClassica"), "{out}");
}

#[test]
fn query_over_empty_dataset_prints_only_the_header() {
    let dir = tempfile::tempdir().unwrap();
    let nq = dir.path().join("empty.nq");
    fs::write(&nq, "").unwrap();
    let q = fixtures().join("didone-sources.rq");
    let o = mythforge(&["query", s(&nq), s(&q)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 1, "{}", stdout(&o));
}

#[test]
fn malformed_query_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let nq = build_collection(dir.path());
    let q = dir.path().join("bad.rq");
    fs::write(&q, "SELECT ?x WHERE { ?x").unwrap();
    let o = mythforge(&["query", s(&nq), s(&q)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.rq"), "{}", stderr(&o));
}

#[test]
fn export_writes_the_three_bundles() {
    let dir = tempfile::tempdir().unwrap();
    let nq = build_collection(dir.path());
    let out = dir.path().join("web");
    let config = fixtures().join("config.json");
    let o = mythforge(&["--config", s(&config), "export", s(&nq), "-o", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let facets: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("facets.json")).unwrap()).unwrap();
    assert!(facets.to_string().contains("XVII secolo"));
    assert!(out.join("catalog.json").is_file());
    let story: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("storytelling-virgil-aeneis.json")).unwrap()).unwrap();
    assert!(story.to_string().contains("heatmap"));
}

#[test]
fn export_of_unknown_work_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let nq = build_collection(dir.path());
    let o = mythforge(&["export", s(&nq), "-o", s(dir.path()), "--work", "nobody-nothing"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("nobody-nothing"), "{}", stderr(&o));
}

#[test]
fn zero_bucket_width_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let nq = build_collection(dir.path());
    let o = mythforge(&["export", s(&nq), "-o", s(dir.path()), "--bucket-width", "0"]);
    assert_eq!(o.status.code(), Some(1));
}
