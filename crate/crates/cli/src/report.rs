use std::fmt::Write;

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Tsv,
}

/// Outcome of a check, mapped to the process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Violation,
    Inconclusive,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Violation => 1,
            Status::Inconclusive => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Violation => "violation",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// Key-value summary lines followed by an optional table.
#[derive(Debug)]
pub struct Report {
    pub status: Status,
    fields: Vec<(String, String)>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(status: Status) -> Self {
        Report { status, fields: Vec::new(), header: Vec::new(), rows: Vec::new() }
    }

    pub fn field(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    pub fn columns(&mut self, names: &[&str]) -> &mut Self {
        self.header = names.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn row(&mut self, cells: Vec<String>) -> &mut Self {
        self.rows.push(cells);
        self
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Human => {
                let _ = writeln!(out, "status: {}", self.status.label());
                for (k, v) in &self.fields {
                    let _ = writeln!(out, "{k}: {v}");
                }
                if !self.header.is_empty() {
                    let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
                    for r in &self.rows {
                        for (i, c) in r.iter().enumerate() {
                            if i < widths.len() {
                                widths[i] = widths[i].max(c.chars().count());
                            }
                        }
                    }
                    let line = |cells: &[String]| {
                        let padded: Vec<String> =
                            cells.iter().enumerate().map(|(i, c)| format!("{c:<w$}", w = widths.get(i).copied().unwrap_or(0))).collect();
                        padded.join("  ").trim_end().to_string()
                    };
                    let _ = writeln!(out);
                    let _ = writeln!(out, "{}", line(&self.header));
                    for r in &self.rows {
                        let _ = writeln!(out, "{}", line(r));
                    }
                }
            }
            Format::Tsv => {
                let _ = writeln!(out, "#status\t{}", self.status.label());
                for (k, v) in &self.fields {
                    let _ = writeln!(out, "#{k}\t{v}");
                }
                if !self.header.is_empty() {
                    let _ = writeln!(out, "{}", self.header.join("\t"));
                    for r in &self.rows {
                        let _ = writeln!(out, "{}", r.join("\t"));
                    }
                }
            }
        }
        out
    }
}
