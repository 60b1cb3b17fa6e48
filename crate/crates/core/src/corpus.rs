//! Known intersection arrays with their spectra, and JSON persistence.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::array::IntersectionArray;
use crate::exact::Surd;
use crate::spectral::spectrum;

/// Float tolerance when matching computed eigenvalues to expected ones.
pub const EIGENVALUE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    pub array: IntersectionArray,
    /// (eigenvalue, multiplicity), decreasing eigenvalues.
    pub spectrum: Option<Vec<(Surd, i64)>>,
    pub tags: BTreeSet<String>,
    /// Fields this crate does not interpret, kept for round-trips.
    pub extra: Map<String, Value>,
}

impl CorpusEntry {
    /// The row number from a `table1-row-N` tag.
    pub fn table_row(&self) -> Option<usize> {
        self.tags.iter().find_map(|t| t.strip_prefix("table1-row-")?.parse().ok())
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.contains(tag)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: invalid JSON at line {line}, column {column}: {message}")]
    Json { path: PathBuf, line: usize, column: usize, message: String },
    #[error("{path}: entry {index} ({name}): {message}")]
    Schema { path: PathBuf, index: usize, name: String, message: String },
}

#[derive(Serialize, Deserialize)]
struct RawEntry {
    name: String,
    b: Vec<i64>,
    c: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    spectrum: Option<Vec<(String, i64)>>,
    #[serde(default)]
    tags: Vec<String>,
    #[serde(flatten)]
    extra: Map<String, Value>,
}

impl From<&CorpusEntry> for RawEntry {
    fn from(e: &CorpusEntry) -> Self {
        RawEntry {
            name: e.name.clone(),
            b: e.array.b_list().to_vec(),
            c: e.array.c_list().to_vec(),
            spectrum: e
                .spectrum
                .as_ref()
                .map(|s| s.iter().map(|(x, m)| (x.to_string(), *m)).collect()),
            tags: e.tags.iter().cloned().collect(),
            extra: e.extra.clone(),
        }
    }
}

fn entry_from_raw(raw: RawEntry) -> Result<CorpusEntry, String> {
    let array = IntersectionArray::new(raw.b, raw.c).map_err(|e| e.to_string())?;
    let spectrum = match raw.spectrum {
        None => None,
        Some(items) => {
            let parsed: Vec<(Surd, i64)> = items
                .into_iter()
                .map(|(s, m)| s.parse::<Surd>().map(|x| (x, m)).map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
            validate_spectrum(&array, &parsed)?;
            Some(parsed)
        }
    };
    Ok(CorpusEntry {
        name: raw.name,
        array,
        spectrum,
        tags: raw.tags.into_iter().collect(),
        extra: raw.extra,
    })
}

fn validate_spectrum(arr: &IntersectionArray, spec: &[(Surd, i64)]) -> Result<(), String> {
    let d = arr.diameter();
    if spec.len() != d + 1 {
        return Err(format!("spectrum has {} eigenvalues, expected D+1 = {}", spec.len(), d + 1));
    }
    if let Some((x, m)) = spec.iter().find(|(_, m)| *m < 1) {
        return Err(format!("multiplicity {m} of {x} is not positive"));
    }
    let total: i64 = spec.iter().map(|(_, m)| m).sum();
    let v = arr.derive().v;
    let v_int = v.is_integer().then(|| v.to_integer().to_i64()).flatten();
    if v_int != Some(total) {
        return Err(format!(
            "multiplicities sum to {total} but v = {}",
            crate::array::rational_string(&v)
        ));
    }
    Ok(())
}

pub fn parse_corpus(text: &str, path: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    let json_err = |e: serde_json::Error| CorpusError::Json {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    };
    let values: Vec<Value> = serde_json::from_str(text).map_err(json_err)?;
    values
        .into_iter()
        .enumerate()
        .map(|(index, value)| {
            let name = value.get("name").and_then(Value::as_str).unwrap_or("<unnamed>").to_string();
            let schema = |message: String| CorpusError::Schema {
                path: path.to_path_buf(),
                index,
                name: name.clone(),
                message,
            };
            let raw: RawEntry = serde_json::from_value(value).map_err(|e| schema(e.to_string()))?;
            entry_from_raw(raw).map_err(schema)
        })
        .collect()
}

pub fn load_corpus(path: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    let text = fs::read_to_string(path)
        .map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })?;
    parse_corpus(&text, path)
}

pub fn corpus_to_json(entries: &[CorpusEntry]) -> String {
    let raw: Vec<RawEntry> = entries.iter().map(RawEntry::from).collect();
    serde_json::to_string_pretty(&raw).expect("corpus serializes")
}

pub fn save_corpus(entries: &[CorpusEntry], path: &Path) -> Result<(), CorpusError> {
    fs::write(path, corpus_to_json(entries) + "\n")
        .map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })
}

// (row, graphs, array, spectrum, tags)
const TABLE_ONE: &[(usize, u32, &str, &[(&str, i64)], &[&str])] = &[
    (1, 1, "{3,2,2;1,1,3}", &[("3", 1), ("sqrt(2)", 6), ("-sqrt(2)", 6), ("-3", 1)], &["bipartite"]),
    (2, 1, "{4,3,2;1,2,4}", &[("4", 1), ("sqrt(2)", 6), ("-sqrt(2)", 6), ("-4", 1)], &["bipartite"]),
    (3, 1, "{4,3,3;1,1,4}", &[("4", 1), ("sqrt(3)", 12), ("-sqrt(3)", 12), ("-4", 1)], &["bipartite"]),
    (4, 1, "{5,4,3;1,2,5}", &[("5", 1), ("sqrt(3)", 10), ("-sqrt(3)", 10), ("-5", 1)], &["bipartite"]),
    (5, 1, "{5,4,4;1,1,5}", &[("5", 1), ("2", 20), ("-2", 20), ("-5", 1)], &["bipartite"]),
    (6, 1, "{6,5,3;1,3,6}", &[("6", 1), ("sqrt(3)", 10), ("-sqrt(3)", 10), ("-6", 1)], &["bipartite"]),
    (7, 3, "{6,5,4;1,2,6}", &[("6", 1), ("2", 15), ("-2", 15), ("-6", 1)], &["bipartite"]),
    (8, 5, "{7,6,4;1,3,7}", &[("7", 1), ("2", 14), ("-2", 14), ("-7", 1)], &["bipartite"]),
    (9, 5, "{8,7,4;1,4,8}", &[("8", 1), ("2", 14), ("-2", 14), ("-8", 1)], &["bipartite"]),
    (10, 1, "{9,8,3;1,6,9}", &[("9", 1), ("sqrt(3)", 12), ("-sqrt(3)", 12), ("-9", 1)], &["bipartite"]),
    (11, 3, "{10,9,4;1,6,10}", &[("10", 1), ("2", 15), ("-2", 15), ("-10", 1)], &["bipartite"]),
    (12, 1, "{16,15,4;1,12,16}", &[("16", 1), ("2", 20), ("-2", 20), ("-16", 1)], &["bipartite"]),
    (
        13,
        1,
        "{3,2,2,1;1,1,2,3}",
        &[("3", 1), ("sqrt(3)", 6), ("0", 4), ("-sqrt(3)", 6), ("-3", 1)],
        &["bipartite", "antipodal"],
    ),
    (
        14,
        1,
        "{3,2,2,2;1,1,1,3}",
        &[("3", 1), ("2", 9), ("0", 10), ("-2", 9), ("-3", 1)],
        &["bipartite"],
    ),
    (
        15,
        1,
        "{4,3,2,1;1,2,3,4}",
        &[("4", 1), ("2", 4), ("0", 6), ("-2", 4), ("-4", 1)],
        &["bipartite", "antipodal"],
    ),
    (
        16,
        1,
        "{4,3,3,1;1,1,3,4}",
        &[("4", 1), ("2", 12), ("0", 6), ("-2", 12), ("-4", 1)],
        &["bipartite", "antipodal"],
    ),
    (
        17,
        1,
        "{3,2,2,1,1;1,1,2,2,3}",
        &[("3", 1), ("2", 4), ("1", 5), ("-1", 5), ("-2", 4), ("-3", 1)],
        &["bipartite", "antipodal"],
    ),
    (18, 1, "{4,2,1;1,1,4}", &[("4", 1), ("2", 5), ("-1", 4), ("-2", 5)], &["antipodal"]),
    (19, 1, "{4,3,3;1,1,2}", &[("4", 1), ("2", 14), ("-1", 14), ("-3", 6)], &[]),
    (20, 1, "{5,4,2;1,1,4}", &[("5", 1), ("2", 16), ("-1", 10), ("-3", 9)], &[]),
    (21, 1, "{6,5,1;1,1,6}", &[("6", 1), ("2", 21), ("-1", 6), ("-3", 14)], &["antipodal"]),
    (22, 2, "{8,6,1;1,3,8}", &[("8", 1), ("2", 12), ("-1", 8), ("-4", 6)], &["antipodal"]),
    (
        23,
        1,
        "{3,2,2,1;1,1,1,2}",
        &[("3", 1), ("2", 8), ("-1+sqrt(2)", 6), ("-1", 7), ("-1-sqrt(2)", 6)],
        &[],
    ),
];

// (name, array, spectrum, tags)
const SANITY: &[(&str, &str, &[(&str, i64)], &[&str])] = &[
    ("petersen", "{3,2;1,1}", &[("3", 1), ("1", 5), ("-2", 4)], &["D2"]),
    ("3-cube", "{3,2,1;1,2,3}", &[("3", 1), ("1", 3), ("-1", 3), ("-3", 1)], &["bipartite", "antipodal"]),
    ("H(3,3)", "{6,4,2;1,2,3}", &[("6", 1), ("3", 6), ("0", 12), ("-3", 8)], &["shilla"]),
    ("dcmm-t2", "{15,14,1;1,2,15}", &[("15", 1), ("3", 70), ("-1", 15), ("-5", 42)], &["antipodal"]),
];

fn make_entry(name: String, array: &str, spectrum: &[(&str, i64)], tags: impl Iterator<Item = String>) -> CorpusEntry {
    CorpusEntry {
        name,
        array: array.parse().expect("builtin array parses"),
        spectrum: Some(
            spectrum
                .iter()
                .map(|(x, m)| (x.parse().expect("builtin eigenvalue parses"), *m))
                .collect(),
        ),
        tags: tags.collect(),
        extra: Map::new(),
    }
}

/// The 23 rows of the classification of diameter ≥ 3 arrays with
/// 1 < θ_1 ≤ 2, in table order.
pub fn table_one() -> Vec<CorpusEntry> {
    TABLE_ONE
        .iter()
        .map(|(row, graphs, array, spectrum, tags)| {
            let tags = tags
                .iter()
                .map(|t| t.to_string())
                .chain([format!("table1-row-{row}"), format!("graphs:{graphs}")]);
            make_entry(format!("row {row}"), array, spectrum, tags)
        })
        .collect()
}

/// Table rows followed by classical sanity arrays.
pub fn builtin_corpus() -> Vec<CorpusEntry> {
    let mut out = table_one();
    out.extend(SANITY.iter().map(|(name, array, spectrum, tags)| {
        make_entry(name.to_string(), array, spectrum, tags.iter().map(|t| t.to_string()))
    }));
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryVerification {
    pub name: String,
    pub array: IntersectionArray,
    pub ok: bool,
    pub mismatches: Vec<String>,
}

/// Compares the computed spectrum with the expected one: exact equality of
/// every eigenvalue, float agreement within [`EIGENVALUE_TOLERANCE`], and
/// equal multiplicities.
pub fn verify_entry(entry: &CorpusEntry) -> EntryVerification {
    let mut mismatches = Vec::new();
    match (&entry.spectrum, spectrum(&entry.array)) {
        (None, _) => {}
        (Some(_), Err(e)) => mismatches.push(format!("no spectrum: {e}")),
        (Some(expected), Ok(spec)) => {
            if expected.len() != spec.eigenvalues.len() {
                mismatches.push(format!(
                    "expected {} eigenvalues, computed {}",
                    expected.len(),
                    spec.eigenvalues.len()
                ));
            }
            for (i, ((want, want_m), (got, got_m))) in expected
                .iter()
                .zip(spec.eigenvalues.iter().zip(&spec.multiplicities))
                .enumerate()
            {
                if want.to_exact() != *got {
                    mismatches.push(format!("theta{i}: expected {want}, computed {got}"));
                }
                if (want.to_f64() - got.approx()).abs() > EIGENVALUE_TOLERANCE {
                    mismatches.push(format!(
                        "theta{i}: float {} differs from {}",
                        got.approx(),
                        want.to_f64()
                    ));
                }
                if got_m.as_integer() != Some(*want_m) {
                    mismatches.push(format!("m{i}: expected {want_m}, computed {}", got_m.display()));
                }
            }
        }
    }
    EntryVerification {
        name: entry.name.clone(),
        array: entry.array.clone(),
        ok: mismatches.is_empty(),
        mismatches,
    }
}

pub fn verify_corpus(entries: &[CorpusEntry]) -> Vec<EntryVerification> {
    entries.iter().map(verify_entry).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_sizes_and_rows() {
        let table = table_one();
        assert_eq!(table.len(), 23);
        for (i, e) in table.iter().enumerate() {
            assert_eq!(e.table_row(), Some(i + 1));
        }
        assert_eq!(builtin_corpus().len(), 27);
        let row7 = &table[6];
        assert_eq!(row7.array.to_string(), "{6,5,4;1,2,6}");
        assert_eq!(row7.array.derive().v, num_rational::BigRational::from_integer(32.into()));
    }

    #[test]
    fn structural_tags_match_the_arrays() {
        for e in builtin_corpus() {
            assert_eq!(e.has_tag("bipartite"), e.array.is_bipartite(), "{}", e.name);
            assert_eq!(e.has_tag("antipodal"), e.array.is_antipodal(), "{}", e.name);
            assert_eq!(e.has_tag("D2"), e.array.diameter() == 2, "{}", e.name);
        }
    }

    #[test]
    fn every_builtin_entry_verifies() {
        for v in verify_corpus(&builtin_corpus()) {
            assert!(v.ok, "{}: {:?}", v.name, v.mismatches);
        }
    }

    #[test]
    fn wrong_expectation_is_reported() {
        let mut e = builtin_corpus().remove(0);
        e.spectrum.as_mut().unwrap()[1].1 = 5;
        e.spectrum.as_mut().unwrap()[2].1 = 7;
        let v = verify_entry(&e);
        assert!(!v.ok);
        assert_eq!(v.mismatches.len(), 2);
    }

    #[test]
    fn json_round_trip_keeps_unknown_fields() {
        let text = r#"[{"name":"x","b":[3,2],"c":[1,1],"spectrum":[["3",1],["1",5],["-2",4]],"tags":["D2"],"source":{"note":"kept"}}]"#;
        let entries = parse_corpus(text, Path::new("mem")).unwrap();
        assert_eq!(entries[0].extra["source"]["note"], "kept");
        let again = parse_corpus(&corpus_to_json(&entries), Path::new("mem")).unwrap();
        assert_eq!(again, entries);
    }

    #[test]
    fn schema_errors_name_the_entry() {
        let text = r#"[{"name":"ok","b":[3,2],"c":[1,1]},{"name":"bad","b":[3,2],"c":[1,1],"spectrum":[["3",1],["1",5],["-2",3]]}]"#;
        let err = parse_corpus(text, Path::new("f.json")).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("entry 1 (bad)"), "{msg}");
        assert!(msg.contains("sum to 9"), "{msg}");

        let err = parse_corpus(r#"[{"name":"q","b":[3],"c":[1,1]}]"#, Path::new("f.json")).unwrap_err();
        assert!(err.to_string().contains("(q)"));

        let err = parse_corpus("[{", Path::new("f.json")).unwrap_err();
        assert!(matches!(err, CorpusError::Json { line: 1, .. }));
    }

    #[test]
    fn empty_corpus() {
        assert!(parse_corpus("[]", Path::new("e.json")).unwrap().is_empty());
    }
}
