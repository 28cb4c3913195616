use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// A command result in all three renderings.
pub struct Output {
    pub json: Value,
    pub table: String,
    pub csv: String,
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        let mut s = match format {
            Format::Table => self.table.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json).expect("values serialize"),
            Format::Csv => self.csv.clone(),
        };
        if !s.ends_with('\n') {
            s.push('\n');
        }
        s
    }
}

/// Quotes a CSV field when needed.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_rows(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        let fields: Vec<String> = r.iter().map(|f| csv_field(f)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, f) in widths.iter_mut().zip(r) {
            *w = (*w).max(f.chars().count());
        }
    }
    let line = |fields: Vec<&str>| -> String {
        let cells: Vec<String> = fields
            .iter()
            .zip(&widths)
            .map(|(f, &w)| format!("{f}{}", " ".repeat(w - f.chars().count())))
            .collect();
        cells.join("  ").trim_end().to_string()
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}
