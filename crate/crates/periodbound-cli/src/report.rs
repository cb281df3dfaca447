//! Report assembly and serialization. JSON is written by hand so the
//! layout is deterministic and every float carries exactly 15
//! significant digits; identical (config, seed) inputs therefore give
//! byte-identical output apart from the `duration_s` field.

use anyhow::{Context, Result};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

/// One typed cell of a case record.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(u64),
    Text(String),
    Flag(bool),
}

impl Value {
    fn to_json(&self) -> String {
        match self {
            Value::Num(x) => fmt_f64(*x),
            Value::Int(n) => n.to_string(),
            Value::Text(s) => json_string(s),
            Value::Flag(b) => b.to_string(),
        }
    }

    fn to_csv(&self) -> String {
        match self {
            Value::Num(x) => fmt_f64(*x),
            Value::Int(n) => n.to_string(),
            Value::Text(s) => csv_field(s),
            Value::Flag(b) => b.to_string(),
        }
    }
}

/// 15 significant digits: enough to round-trip every value the suite
/// produces while keeping reports diffable.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.14e}")
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One executed case: the inputs it was run with, what came out, and
/// whether it met its own pass criterion. Operation errors land in
/// `outputs` under the `error` key with `pass = false`.
#[derive(Debug, Clone)]
pub struct Case {
    pub inputs: Vec<(String, Value)>,
    pub outputs: Vec<(String, Value)>,
    pub pass: bool,
}

impl Case {
    pub fn new(inputs: Vec<(String, Value)>, outputs: Vec<(String, Value)>, pass: bool) -> Self {
        Self {
            inputs,
            outputs,
            pass,
        }
    }

    pub fn failed(inputs: Vec<(String, Value)>, error: impl std::fmt::Display) -> Self {
        Self {
            inputs,
            outputs: vec![("error".into(), Value::Text(error.to_string()))],
            pass: false,
        }
    }

    /// Looks a field up by name, inputs first.
    pub fn field(&self, name: &str) -> Option<&Value> {
        self.inputs
            .iter()
            .chain(&self.outputs)
            .find(|(k, _)| k == name)
            .map(|(_, v)| v)
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub scenario: String,
    pub cases: Vec<Case>,
    pub version: String,
    pub duration_s: f64,
}

impl Report {
    pub fn new(scenario: &str, cases: Vec<Case>) -> Self {
        Self {
            scenario: scenario.to_string(),
            cases,
            version: env!("CARGO_PKG_VERSION").to_string(),
            duration_s: 0.0,
        }
    }

    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.pass).count()
    }

    pub fn failed(&self) -> usize {
        self.cases.len() - self.passed()
    }

    /// Suite verdict: fail iff any case fails.
    pub fn pass(&self) -> bool {
        self.failed() == 0
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        let _ = writeln!(out, "  \"scenario\": {},", json_string(&self.scenario));
        out.push_str("  \"cases\": [\n");
        for (i, case) in self.cases.iter().enumerate() {
            out.push_str("    {");
            out.push_str("\"inputs\": {");
            push_fields(&mut out, &case.inputs);
            out.push_str("}, \"outputs\": {");
            push_fields(&mut out, &case.outputs);
            let _ = write!(out, "}}, \"pass\": {}}}", case.pass);
            out.push_str(if i + 1 < self.cases.len() { ",\n" } else { "\n" });
        }
        out.push_str("  ],\n");
        let _ = writeln!(
            out,
            "  \"verdict\": {{\"pass\": {}, \"passed\": {}, \"failed\": {}}},",
            self.pass(),
            self.passed(),
            self.failed()
        );
        let _ = writeln!(out, "  \"version\": {},", json_string(&self.version));
        let _ = writeln!(out, "  \"duration_s\": {}", fmt_f64(self.duration_s));
        out.push_str("}\n");
        out
    }

    /// Flat CSV: the union of input and output columns in first-seen
    /// order, then `pass`. Cases missing a column leave the cell empty.
    pub fn to_csv(&self) -> String {
        let mut columns: Vec<String> = Vec::new();
        for case in &self.cases {
            for (key, _) in case.inputs.iter().chain(&case.outputs) {
                if !columns.contains(key) {
                    columns.push(key.clone());
                }
            }
        }
        let mut out = String::new();
        out.push_str(&columns.join(","));
        if columns.is_empty() {
            out.push_str("pass");
        } else {
            out.push_str(",pass");
        }
        out.push('\n');
        for case in &self.cases {
            let mut row: Vec<String> = columns
                .iter()
                .map(|c| case.field(c).map(Value::to_csv).unwrap_or_default())
                .collect();
            row.push(case.pass.to_string());
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn push_fields(out: &mut String, fields: &[(String, Value)]) {
    for (i, (key, value)) in fields.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{}: {}", json_string(key), value.to_json());
    }
}

/// Writes via a temp file in the destination directory plus an atomic
/// rename, so a crash never leaves a torn report.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or_else(|| Path::new(".")))
        .with_context(|| format!("creating temp file beside {}", path.display()))?;
    tmp.write_all(contents.as_bytes())
        .with_context(|| format!("writing {}", path.display()))?;
    tmp.persist(path)
        .with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        Report::new(
            "bound",
            vec![
                Case::new(
                    vec![("alpha".into(), Value::Num(0.5))],
                    vec![
                        ("k_value".into(), Value::Num(0.098888379032267354)),
                        ("route".into(), Value::Text("limit".into())),
                    ],
                    true,
                ),
                Case::failed(vec![("alpha".into(), Value::Num(1.5))], "alpha out of range"),
            ],
        )
    }

    #[test]
    fn json_carries_fifteen_digit_floats_and_verdict() {
        let json = sample().to_json();
        assert!(json.contains("9.88883790322674e-2"));
        assert!(json.contains("\"verdict\": {\"pass\": false, \"passed\": 1, \"failed\": 1}"));
        assert!(json.contains("\"error\": \"alpha out of range\""));
        assert!(json.contains("\"duration_s\": 0.00000000000000e0"));
    }

    #[test]
    fn json_is_deterministic() {
        assert_eq!(sample().to_json(), sample().to_json());
    }

    #[test]
    fn csv_flattens_union_of_columns() {
        let csv = sample().to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "alpha,k_value,route,error,pass");
        let first = lines.next().unwrap();
        assert!(first.starts_with("5.00000000000000e-1,9.88883790322674e-2,limit,,true"));
        let second = lines.next().unwrap();
        assert!(second.ends_with("alpha out of range,false"));
    }

    #[test]
    fn csv_escapes_embedded_commas() {
        assert_eq!(Value::Text("a,b".into()).to_csv(), "\"a,b\"");
        assert_eq!(Value::Text("say \"hi\"".into()).to_csv(), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.json");
        write_atomic(&path, "one").unwrap();
        write_atomic(&path, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "two");
    }
}
