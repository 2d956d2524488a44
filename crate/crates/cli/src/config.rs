//! Config-file merging and small value parsers.

use std::path::Path;

use num_complex::Complex64;
use serde::{de::DeserializeOwned, Serialize};
use serde_json::{Map, Value};

use crate::CliError;

/// Loads a TOML file as a JSON object; absent path gives an empty table.
pub fn load_table(path: Option<&Path>) -> Result<Map<String, Value>, CliError> {
    let Some(path) = path else {
        return Ok(Map::new());
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let table: toml::Table = toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    match serde_json::to_value(table) {
        Ok(Value::Object(map)) => Ok(map),
        _ => Err(CliError::Usage(format!("{}: expected a table", path.display()))),
    }
}

/// Overlays the flags that were given on the file values. Flags are
/// serialized with `None` fields skipped, so only explicit flags win.
pub fn merge<T: Serialize + DeserializeOwned>(flags: &T, file: &Map<String, Value>) -> Result<T, CliError> {
    let mut merged = file.clone();
    if let Value::Object(given) = serde_json::to_value(flags).expect("flag structs serialize") {
        for (k, v) in given {
            if !v.is_null() {
                merged.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::Usage(format!("config: {e}")))
}

pub fn required<T: Clone>(value: &Option<T>, name: &str) -> Result<T, CliError> {
    value.clone().ok_or_else(|| CliError::Usage(format!("missing required option --{name}")))
}

/// Parses `a`, `a+bi`, `a-bi`, `bi`, `i` and `-i` (also `j` for `i`).
pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Usage(format!("cannot parse complex number {s:?}"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not an exponent sign or the leading sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re.parse::<f64>().map_err(|_| bad())?, im))
}

pub fn parse_complex_list(s: &str) -> Result<Vec<Complex64>, CliError> {
    s.split(',').map(parse_complex).collect()
}

pub fn parse_floats<const N: usize>(s: &str, what: &str) -> Result<[f64; N], CliError> {
    let vals: Vec<f64> = s
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("{what}: cannot parse {s:?}")))?;
    vals.try_into()
        .map_err(|_| CliError::Usage(format!("{what}: expected {N} comma-separated numbers, got {s:?}")))
}

/// `64` or `64x32` (columns x rows).
pub fn parse_resolution(s: &str) -> Result<[usize; 2], CliError> {
    let bad = || CliError::Usage(format!("resolution: cannot parse {s:?}"));
    match s.split_once('x') {
        Some((a, b)) => Ok([a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?]),
        None => {
            let n = s.parse().map_err(|_| bad())?;
            Ok([n, n])
        }
    }
}

/// Coordinate names: `z, w` in two variables, and `x1..xn` always.
pub fn coordinate_index(name: &str, n: usize) -> Result<usize, CliError> {
    let idx = match (name, n) {
        ("z", 2) => Some(0),
        ("w", 2) => Some(1),
        _ => name.strip_prefix('x').and_then(|k| k.parse::<usize>().ok()).filter(|&k| (1..=n).contains(&k)).map(|k| k - 1),
    };
    idx.ok_or_else(|| CliError::Usage(format!("unknown coordinate {name:?} for a curve in C^{n}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("0+0i").unwrap(), c(0.0, 0.0));
        assert_eq!(parse_complex("-1.5").unwrap(), c(-1.5, 0.0));
        assert_eq!(parse_complex("2-3i").unwrap(), c(2.0, -3.0));
        assert_eq!(parse_complex("-0.5i").unwrap(), c(0.0, -0.5));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("1e-3+2E+1j").unwrap(), c(1e-3, 20.0));
        assert!(parse_complex("1+").is_err());
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn merge_prefers_flags() {
        #[derive(Serialize, serde::Deserialize, Debug, PartialEq)]
        struct A {
            #[serde(skip_serializing_if = "Option::is_none")]
            m: Option<usize>,
            #[serde(skip_serializing_if = "Option::is_none")]
            r: Option<f64>,
        }
        let mut file = Map::new();
        file.insert("m".into(), 16.into());
        file.insert("r".into(), 0.5.into());
        let got = merge(&A { m: Some(32), r: None }, &file).unwrap();
        assert_eq!(got, A { m: Some(32), r: Some(0.5) });
    }

    #[test]
    fn resolution_and_names() {
        assert_eq!(parse_resolution("64").unwrap(), [64, 64]);
        assert_eq!(parse_resolution("8x4").unwrap(), [8, 4]);
        assert_eq!(coordinate_index("w", 2).unwrap(), 1);
        assert_eq!(coordinate_index("x3", 3).unwrap(), 2);
        assert!(coordinate_index("w", 3).is_err());
    }
}
