//! Structured verification reports and their JSON / CSV / Markdown forms.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Neither confirmed nor refuted (e.g. no triangle morphism found).
    Inconclusive,
    /// A computed fact reported for reference; never a failure.
    Info,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::Info => "info",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
    /// Counterexample or supporting data.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub chain: Vec<u32>,
    pub offset: i64,
    pub checks: Vec<Check>,
    /// Euler matrix computed from morphism spaces, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler: Option<Vec<Vec<i64>>>,
    /// Displayed factorization of `det(1 - tM)`, if computed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(i64, i64)>,
    pub fullness: String,
    pub timings_ms: BTreeMap<String, u64>,
}

impl VerificationReport {
    pub fn new(command: &str, chain: &[u32], offset: i64) -> Self {
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            chain: chain.to_vec(),
            offset,
            checks: Vec::new(),
            euler: None,
            zeta: None,
            window: None,
            fullness: "not machine-verified".to_string(),
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, name: &str, status: Status, detail: impl Into<String>) {
        self.checks.push(Check { name: name.to_string(), status, detail: detail.into(), witness: None });
    }

    pub fn push_with(&mut self, name: &str, status: Status, detail: impl Into<String>, witness: serde_json::Value) {
        self.checks.push(Check { name: name.to_string(), status, detail: detail.into(), witness: Some(witness) });
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
        self.timings_ms.extend(other.timings_ms);
        if self.euler.is_none() {
            self.euler = other.euler;
        }
        if self.zeta.is_none() {
            self.zeta = other.zeta;
        }
        if self.window.is_none() {
            self.window = other.window;
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    /// No check failed. Inconclusive and info checks do not count as failures.
    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "md" | "markdown" => Ok(Format::Markdown),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

pub fn emit_report(r: &VerificationReport, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(r)?),
        Format::Csv => Ok(to_csv(r)),
        Format::Markdown => Ok(to_markdown(r)),
    }
}

pub fn parse_report(json: &str) -> Result<VerificationReport> {
    Ok(serde_json::from_str(json)?)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn chain_string(chain: &[u32]) -> String {
    chain.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn to_csv(r: &VerificationReport) -> String {
    let mut out = String::from("chain,offset,check,status,detail\n");
    let chain = chain_string(&r.chain);
    for c in &r.checks {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            csv_field(&chain),
            r.offset,
            csv_field(&c.name),
            c.status.as_str(),
            csv_field(&c.detail)
        );
    }
    out
}

fn to_markdown(r: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# chainfact {}: chain ({}), offset {}\n", r.command, chain_string(&r.chain), r.offset);
    let _ = writeln!(out, "| check | status | detail |\n|---|---|---|");
    for c in &r.checks {
        let _ = writeln!(out, "| {} | {} | {} |", c.name, c.status.as_str(), c.detail.replace('|', "\\|").replace('\n', " "));
    }
    if let Some(e) = &r.euler {
        let _ = writeln!(out, "\n## Euler matrix\n\n```");
        for row in e {
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
        let _ = writeln!(out, "```");
    }
    if let Some(z) = &r.zeta {
        let _ = writeln!(out, "\n## det(1 - tM)\n\n{z}");
    }
    if let Some((lo, hi)) = r.window {
        let _ = writeln!(out, "\nScan window: p in [{lo}, {hi}]");
    }
    let _ = writeln!(out, "\nFullness: {}", r.fullness);
    if !r.timings_ms.is_empty() {
        let parts: Vec<String> = r.timings_ms.iter().map(|(k, v)| format!("{k} {v} ms")).collect();
        let _ = writeln!(out, "\nTimings: {}", parts.join(", "));
    }
    let failed = r.failures().count();
    let _ = writeln!(out, "\n**{}** ({} checks, {} failed)", if failed == 0 { "PASS" } else { "FAIL" }, r.checks.len(), failed);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        let mut r = VerificationReport::new("verify", &[2, 2], 0);
        r.push("phi", Status::Pass, "1 - t + t^2 - t^3");
        r.push_with("euler", Status::Fail, "mismatch, at (0,1)", serde_json::json!({"i": 0, "j": 1}));
        r.euler = Some(vec![vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]]);
        r.timings_ms.insert("total".into(), 3);
        r
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let text = emit_report(&r, Format::Json).unwrap();
        assert_eq!(parse_report(&text).unwrap(), r);
    }

    #[test]
    fn csv_and_markdown() {
        let r = sample();
        let csv = emit_report(&r, Format::Csv).unwrap();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.contains("\"mismatch, at (0,1)\""));
        let md = emit_report(&r, Format::Markdown).unwrap();
        assert!(md.contains("1 1 0\n0 1 1\n0 0 1"));
        assert!(!r.all_passed());
        assert!(matches!("xml".parse::<Format>(), Err(Error::UnknownFormat(_))));
    }
}
