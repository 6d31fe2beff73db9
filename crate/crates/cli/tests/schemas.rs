use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use lps_cli::reports::{DimsReport, FreyReport, ReproReport, SearchReport, ThueReport};
use lps_core::bounds::BoundReport;
use lps_core::sieve::{ScanReport, SieveReport};

fn schema_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas/v1")
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = schema_dir().join(format!("{name}.schema.json"));
    let raw = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    jsonschema::validator_for(&serde_json::from_str(&raw).unwrap()).unwrap()
}

fn call(argv: &[&str]) -> (i32, Value, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("lps")
        .chain(argv.iter().copied())
        .chain(["--format", "json"]);
    let code = lps_cli::run(argv, &mut out, &mut err);
    let out = String::from_utf8(out).unwrap();
    let value = if out.is_empty() {
        Value::Null
    } else {
        serde_json::from_str(&out).unwrap()
    };
    (code, value, String::from_utf8(err).unwrap())
}

/// Validates against the schema, then parses into `T` and back.
fn round_trip<T: Serialize + DeserializeOwned>(name: &str, argv: &[&str]) {
    let (code, value, err) = call(argv);
    assert!(code == 0 || code == 1, "{argv:?}: exit {code}, {err}");
    let v = schema(name);
    let problems: Vec<String> = v.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(problems.is_empty(), "{name}: {problems:?}");
    let typed: T = serde_json::from_value(value.clone()).unwrap();
    assert_eq!(serde_json::to_value(&typed).unwrap(), value, "{name}");
}

#[test]
fn scan() {
    round_trip::<ScanReport>("scan-report", &["scan", "-b", "1", "-c", "1", "--n-max", "500"]);
    round_trip::<ScanReport>("scan-report", &["scan", "-b", "-1", "-c", "2", "--n-max", "50"]);
}

#[test]
fn sieve() {
    round_trip::<SieveReport>(
        "sieve-report",
        &["sieve", "-b", "2", "-c", "1", "-p", "2", "-B", "1000"],
    );
    round_trip::<SieveReport>(
        "sieve-report",
        &["sieve", "-b", "3", "-c", "1", "-p", "7", "-B", "1e50"],
    );
    let partial = [
        "sieve",
        "-b",
        "3",
        "-c",
        "1",
        "-p",
        "7",
        "-B",
        "1e60",
        "--max-rounds",
        "1",
        "--initial-m",
        "2^2",
    ];
    round_trip::<SieveReport>("sieve-report", &partial);
}

#[test]
fn bound() {
    round_trip::<BoundReport>("bound-report", &["bound", "-b", "3", "-c", "-2"]);
    // AV term too large to expand
    round_trip::<BoundReport>("bound-report", &["bound", "-b", "1000", "-c", "999"]);
}

#[test]
fn frey() {
    round_trip::<FreyReport>("frey-report", &["frey", "-b", "1", "-c", "1", "-n", "10"]);
    round_trip::<FreyReport>("frey-report", &["frey", "-b", "1", "-c", "1", "-n", "9"]);
    round_trip::<FreyReport>("frey-report", &["frey", "-b", "2", "-c", "4", "-n", "8"]);
}

#[test]
fn dims_search_thue() {
    round_trip::<DimsReport>("dims-report", &["dims", "-N", "5040"]);
    round_trip::<SearchReport>("search-report", &["search", "--bound", "1000"]);
    round_trip::<ThueReport>("thue-report", &["thue", "-b", "3", "-c", "-2", "-p", "7", "-B", "1e30"]);
    round_trip::<ThueReport>("thue-report", &["thue", "-b", "1", "-c", "1", "-p", "3"]);
}

#[test]
fn repro() {
    let small = ["repro", "-B", "1e12", "--max-rounds", "60"];
    round_trip::<ReproReport>("repro-report", &small);
}

#[test]
fn errors() {
    let (code, value, err) = call(&["scan", "-b", "0", "-c", "1"]);
    assert_eq!((code, value), (2, Value::Null));
    let err: Value = serde_json::from_str(&err).unwrap();
    assert!(schema("error").is_valid(&err));
}

#[test]
fn every_schema_is_well_formed_and_versioned() {
    let mut names = Vec::new();
    for entry in std::fs::read_dir(schema_dir()).unwrap() {
        let path = entry.unwrap().path();
        let raw: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(raw["version"], 1, "{}", path.display());
        assert!(raw["$id"].as_str().unwrap().contains("/v1/"));
        jsonschema::validator_for(&raw).unwrap();
        names.push(path.file_name().unwrap().to_string_lossy().into_owned());
    }
    names.sort();
    let expected = [
        "bound-report",
        "dims-report",
        "error",
        "frey-report",
        "repro-report",
        "scan-report",
        "search-report",
        "sieve-report",
        "thue-report",
    ]
    .map(|n| format!("{n}.schema.json"));
    assert_eq!(names, expected);
}
