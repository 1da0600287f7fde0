use std::fs;
use std::io::Write;

use anyhow::{Context, Result};
use serde::Serialize;

use crate::{Format, Global};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Reported but not required.
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub identity: String,
    pub status: Status,
    pub exact: bool,
    pub max_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(identity: impl Into<String>, exact: bool, max_residual: f64, pass: bool) -> Self {
        Check {
            identity: identity.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            exact,
            max_residual,
            detail: None,
        }
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    /// Failures become informational unless `required`.
    pub fn required(mut self, required: bool) -> Self {
        if !required && self.status == Status::Fail {
            self.status = Status::Info;
        }
        self
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub subject: String,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub first_failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
}

impl Report {
    pub fn new(command: &'static str, subject: impl Into<String>, checks: Vec<Check>) -> Self {
        let first_failure =
            checks
                .iter()
                .find(|c| c.status == Status::Fail)
                .map(|c| match &c.detail {
                    Some(d) => format!("{}: {d}", c.identity),
                    None => c.identity.clone(),
                });
        Report {
            command,
            subject: subject.into(),
            pass: first_failure.is_none(),
            checks,
            first_failure,
            data: None,
        }
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Info => "informational",
            };
            let mode = if c.exact { "exact" } else { "numeric" };
            out.push_str(&format!(
                "{}: {status} ({mode}, max residual {:e})\n",
                c.identity, c.max_residual
            ));
            if let Some(d) = &c.detail {
                out.push_str(&format!("  {d}\n"));
            }
        }
        match &self.first_failure {
            None => out.push_str("result: pass\n"),
            Some(f) => out.push_str(&format!("result: FAIL, first failing identity {f}\n")),
        }
        out
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Text to stdout unless `--format json`; `--out` also receives the JSON report.
pub fn emit(report: &Report, g: &Global, preamble: &str) -> Result<()> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match g.format {
        Some(Format::Json) => lock.write_all(report.json().as_bytes())?,
        _ => {
            lock.write_all(preamble.as_bytes())?;
            lock.write_all(report.text().as_bytes())?;
        }
    }
    if let Some(path) = &g.out {
        fs::write(path, report.json())
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

/// Data goes to `--out` when given, otherwise to stdout.
pub fn write_data(g: &Global, data: &str) -> Result<()> {
    match &g.out {
        Some(path) => {
            fs::write(path, data).with_context(|| format!("cannot write {}", path.display()))
        }
        None => std::io::stdout()
            .lock()
            .write_all(data.as_bytes())
            .map_err(Into::into),
    }
}
