//! Output in the three formats; every path is deterministic.

use clap::ValueEnum;
use cycmzv::relations::RelationReport;
use serde_json::{json, Map, Value};
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pretty,
    Json,
    Csv,
}

pub enum Output {
    /// A single value; `fields` describe the instance, pretty output prints only the value.
    Value { fields: Vec<(&'static str, String)>, value: String },
    /// Rows under a header, plus a structured JSON view.
    Table { json: Value, header: Vec<&'static str>, rows: Vec<Vec<String>> },
    Reports(Vec<Checked>),
}

/// A report together with the precision the caller asked for.
pub struct Checked {
    pub report: RelationReport,
    /// `p^m` to which the identity must hold; exact relations use `None`.
    pub required: Option<i64>,
}

impl Checked {
    pub fn exact(report: RelationReport) -> Checked {
        Checked { report, required: None }
    }

    pub fn to(report: RelationReport, m: i64) -> Checked {
        Checked { report, required: Some(m) }
    }

    pub fn ok(&self) -> bool {
        match self.required {
            Some(m) => self.report.verdict.holds_to(m),
            None => self.report.holds(),
        }
    }

    fn status(&self) -> &'static str {
        if self.ok() {
            "pass"
        } else {
            "FAIL"
        }
    }

    fn json_line(&self) -> String {
        let mut v: Value = serde_json::from_str(&self.report.to_json_line()).expect("report JSON");
        v["required_prec"] = json!(self.required);
        v["pass"] = json!(self.ok());
        v.to_string()
    }
}

impl Output {
    pub fn value(fields: Vec<(&'static str, String)>, value: impl ToString) -> Output {
        Output::Value { fields, value: value.to_string() }
    }

    pub fn failed(&self) -> Vec<&Checked> {
        match self {
            Output::Reports(r) => r.iter().filter(|c| !c.ok()).collect(),
            _ => Vec::new(),
        }
    }
}

fn csv_string(header: &[&str], rows: &[Vec<String>]) -> std::io::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

fn report_rows(reports: &[Checked]) -> Vec<Vec<String>> {
    reports
        .iter()
        .map(|c| {
            let r = &c.report;
            vec![
                r.relation.clone(),
                c.status().to_string(),
                c.required.map(|m| m.to_string()).unwrap_or_default(),
                r.verdict.to_string(),
                r.checked.to_string(),
                r.instance.to_string(),
                r.witness.as_ref().map(|w| w.to_string()).unwrap_or_default(),
            ]
        })
        .collect()
}

pub fn render(out: &Output, format: Format) -> std::io::Result<String> {
    let text = match (out, format) {
        (Output::Value { value, .. }, Format::Pretty) => format!("{value}\n"),
        (Output::Value { fields, value }, Format::Json) => {
            let mut m = Map::new();
            for (k, v) in fields {
                m.insert(k.to_string(), json!(v));
            }
            m.insert("value".into(), json!(value));
            format!("{}\n", Value::Object(m))
        }
        (Output::Value { fields, value }, Format::Csv) => {
            let mut header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            header.push("value");
            let mut row: Vec<String> = fields.iter().map(|(_, v)| v.clone()).collect();
            row.push(value.clone());
            csv_string(&header, &[row])?
        }
        (Output::Table { header, rows, .. }, Format::Pretty) => {
            let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
            for r in rows {
                for (w, c) in widths.iter_mut().zip(r) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let line = |cells: Vec<&str>| {
                let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                format!("{}\n", padded.join("  ").trim_end())
            };
            let mut s = line(header.clone());
            for r in rows {
                s.push_str(&line(r.iter().map(String::as_str).collect()));
            }
            s
        }
        (Output::Table { json, .. }, Format::Json) => format!("{json}\n"),
        (Output::Table { header, rows, .. }, Format::Csv) => csv_string(header, rows)?,
        (Output::Reports(reports), Format::Pretty) => {
            let mut s = String::new();
            for c in reports {
                let r = &c.report;
                let need = c.required.map(|m| format!(", required mod p^{m}")).unwrap_or_default();
                s.push_str(&format!(
                    "{} {}: {} ({} checks{need}) {}\n",
                    c.status(),
                    r.relation,
                    r.verdict,
                    r.checked,
                    r.instance
                ));
                if let Some(w) = &r.witness {
                    s.push_str(&format!("  witness: {w}\n"));
                }
            }
            s
        }
        (Output::Reports(reports), Format::Json) => {
            reports.iter().map(|c| format!("{}\n", c.json_line())).collect()
        }
        (Output::Reports(reports), Format::Csv) => {
            let header = ["relation", "status", "required_prec", "verdict", "checked", "instance", "witness"];
            csv_string(&header, &report_rows(reports))?
        }
    };
    Ok(text)
}

pub fn emit(out: &Output, format: Format) -> std::io::Result<()> {
    let text = render(out, format)?;
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(text.as_bytes())?;
    stdout.flush()
}
