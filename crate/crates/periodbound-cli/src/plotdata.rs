//! Plot-ready CSV extraction: named report fields become columns, one
//! row per case, for handoff to external plotting tools.

use crate::report::{Report, Value};
use anyhow::{bail, Result};

/// Projects the named fields out of every case. Fields are looked up in
/// inputs first, then outputs; a field missing from any case is a
/// parameter error naming the case. An empty report yields only the
/// header line.
pub fn emit_plotdata(report: &Report, fields: &[String]) -> Result<String> {
    if fields.is_empty() {
        bail!("plot field list is empty");
    }
    let mut out = fields.join(",");
    out.push('\n');
    for (index, case) in report.cases.iter().enumerate() {
        let mut row = Vec::with_capacity(fields.len());
        for field in fields {
            let value = case.field(field).ok_or_else(|| {
                anyhow::anyhow!("unknown field `{field}` (absent from case {index})")
            })?;
            row.push(match value {
                Value::Num(x) => crate::report::fmt_f64(*x),
                Value::Int(n) => n.to_string(),
                Value::Flag(b) => b.to_string(),
                Value::Text(s) => s.clone(),
            });
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}
