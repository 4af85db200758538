//! Check records and their table / JSON renderings.

use std::fmt::Write;

use serde::Serialize;

/// One exact check. `residual` is `"0"` exactly when `pass` holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub anchor: String,
    pub scenario_id: String,
    pub residual: String,
    pub pass: bool,
}

/// A titled table of values printed before the checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub scenario_id: String,
    pub sections: Vec<Section>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, scenario_id: &str) -> Self {
        Report { command: command.into(), scenario_id: scenario_id.into(), sections: Vec::new(), checks: Vec::new() }
    }

    pub fn check(&mut self, anchor: impl Into<String>, residual: impl Into<String>) {
        let residual = residual.into();
        let pass = residual == "0";
        self.checks.push(Check { anchor: anchor.into(), scenario_id: self.scenario_id.clone(), residual, pass });
    }

    /// Records a boolean check; failures carry `detail` as the residual.
    pub fn check_bool(&mut self, anchor: impl Into<String>, ok: bool, detail: impl Into<String>) {
        let residual = if ok { "0".to_string() } else { detail.into() };
        self.check(anchor, residual);
    }

    pub fn section(&mut self, title: impl Into<String>, header: &[&str], rows: Vec<Vec<String>>) {
        self.sections.push(Section { title: title.into(), header: header.iter().map(|s| s.to_string()).collect(), rows });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// The structured report: a JSON list of check records.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.checks).expect("checks serialize")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} [{}]", self.command, self.scenario_id).unwrap();
        for s in &self.sections {
            writeln!(out, "\n{}", s.title).unwrap();
            let mut rows = vec![s.header.clone()];
            rows.extend(s.rows.iter().cloned());
            out.push_str(&render(&rows));
        }
        writeln!(out).unwrap();
        let rows: Vec<Vec<String>> = std::iter::once(vec!["check".into(), "result".into(), "residual".into()])
            .chain(self.checks.iter().map(|c| vec![c.anchor.clone(), if c.pass { "PASS" } else { "FAIL" }.into(), c.residual.clone()]))
            .collect();
        out.push_str(&render(&rows));
        let passed = self.checks.iter().filter(|c| c.pass).count();
        writeln!(out, "\n{passed}/{} checks passed", self.checks.len()).unwrap();
        out
    }
}

fn render(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().enumerate().map(|(c, s)| format!("{s:<w$}", w = widths[c])).collect();
        writeln!(out, "  {}", cells.join("  ").trim_end()).unwrap();
    }
    out
}
