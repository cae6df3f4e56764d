//! Input parsing and deterministic JSON output.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use tightbell::fixtures::Fixture;
use tightbell::{BellError, CoeffTensor, Scenario};
use tightbell_quantum::{ThreeQubitState, C64};

use crate::error::{CliError, Result};

/// Tensor file: the coefficient tensor wire form with optional labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub scenario: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denom_exp: Option<u32>,
    pub numerators: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub corrections: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct NamedTensor {
    pub name: Option<String>,
    pub tensor: CoeffTensor,
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn parse_tensor(text: &str, origin: &str) -> Result<NamedTensor> {
    let file: TensorFile = serde_json::from_str(text).map_err(|e| CliError::Parse {
        origin: format!("{origin}: line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let field = |name: &str, e: BellError| CliError::Parse {
        origin: format!("{origin}: field `{name}`"),
        message: e.to_string(),
    };
    let scenario = Scenario::new(file.scenario).map_err(|e| field("scenario", e))?;
    if let Some(d) = file.denom_exp {
        if d != scenario.denom_exp() {
            return Err(field(
                "denom_exp",
                BellError::DenominatorMismatch {
                    expected: scenario.denom_exp(),
                    found: d,
                },
            ));
        }
    }
    let tensor = CoeffTensor::new(scenario, file.numerators).map_err(|e| field("numerators", e))?;
    Ok(NamedTensor { name: file.name, tensor })
}

pub fn read_tensor(path: &Path) -> Result<NamedTensor> {
    parse_tensor(&read_file(path)?, &path.display().to_string())
}

/// One `re im` pair per line; blank lines and `#` comments are skipped.
/// Eight pairs give a pure state, 64 a row-major density matrix.
pub fn parse_state(text: &str, origin: &str) -> Result<ThreeQubitState> {
    let mut entries = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |message: String| CliError::Parse {
            origin: format!("{origin}: line {}", n + 1),
            message,
        };
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(bad(format!("expected `re im`, found {} fields", parts.len())));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(format!("`{s}` is not a number")));
        entries.push(C64::new(num(parts[0])?, num(parts[1])?));
    }
    ThreeQubitState::from_entries(&entries).map_err(|e| CliError::Parse {
        origin: origin.to_string(),
        message: e.to_string(),
    })
}

pub fn read_state(path: &Path) -> Result<ThreeQubitState> {
    parse_state(&read_file(path)?, &path.display().to_string())
}

/// Rounds to 12 significant digits; negative zero becomes zero.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float")
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().expect("f64"));
            *v = serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to 12 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("serializable");
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

/// Tensor file contents for a built-in inequality.
pub fn fixture_file(f: &Fixture) -> String {
    let g = &f.inequality;
    to_json(&TensorFile {
        name: Some(f.name.to_string()),
        description: Some(f.description.to_string()),
        scenario: g.scenario().settings().to_vec(),
        denom_exp: Some(g.denom_exp()),
        numerators: g.numerators().to_vec(),
        corrections: f.corrections.iter().map(|s| s.to_string()).collect(),
    })
}

/// State file contents with 17 significant digits per component.
pub fn state_file(comment: &str, entries: &[C64]) -> String {
    let mut s = format!("# {comment}\n");
    for z in entries {
        s.push_str(&format!("{:.16e} {:.16e}\n", z.re, z.im));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round12(1.999999951134567), 1.99999995113);
        assert_eq!(round12(-0.0).to_bits(), 0.0f64.to_bits());
        assert_eq!(to_json(&vec![0.1 + 0.2]), "[\n  0.3\n]\n");
    }

    #[test]
    fn tensor_diagnostics() {
        let e = parse_tensor("{\"scenario\": [3,3,3],\n \"numerators\": [1,2]}", "x.json").unwrap_err();
        assert!(e.to_string().contains("field `numerators`"), "{e}");
        let e = parse_tensor("{\"scenario\": [3,3,3],\n \"numerators\": [1,}", "x.json").unwrap_err();
        assert!(e.to_string().starts_with("x.json: line 2"), "{e}");
        let e = parse_tensor("{\"scenario\": [3,3,3], \"denom_exp\": 3, \"numerators\": []}", "x").unwrap_err();
        assert!(e.to_string().contains("field `denom_exp`"), "{e}");
        let e = parse_tensor("{\"numerators\": []}", "x").unwrap_err();
        assert!(e.to_string().contains("scenario"), "{e}");
    }

    #[test]
    fn state_parsing() {
        let text = "# GHZ\n0.7071067811865476 0\n\n0 0\n0 0\n0 0\n0 0\n0 0\n0 0\n0.7071067811865476 0 # last\n";
        assert_eq!(parse_state(text, "s").unwrap(), ThreeQubitState::ghz());
        let e = parse_state("1 0\n0\n", "s.txt").unwrap_err();
        assert!(e.to_string().starts_with("s.txt: line 2"), "{e}");
        let e = parse_state("1 0\n0 x\n", "s.txt").unwrap_err();
        assert!(e.to_string().contains("`x`"), "{e}");
        assert!(parse_state("1 0\n", "s").is_err());
        let e = parse_state(&"1 0\n".repeat(8), "s").unwrap_err();
        assert!(e.to_string().contains("norm"), "{e}");
    }
}
