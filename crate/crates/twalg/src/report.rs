//! Check records and reports with fixed field order.

use crate::error::Error;
use crate::limits::Usage;
use crate::tallwraith::{Certification, Law};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub counts: BTreeMap<String, u64>,
    pub witness: Option<String>,
    pub details: Vec<String>,
}

impl Check {
    fn with(name: &str, status: Status, witness: Option<String>) -> Check {
        Check { name: name.to_string(), status, counts: BTreeMap::new(), witness, details: vec![] }
    }

    pub fn pass(name: &str) -> Check {
        Check::with(name, Status::Pass, None)
    }

    pub fn info(name: &str) -> Check {
        Check::with(name, Status::Info, None)
    }

    pub fn fail(name: &str, witness: impl Into<String>) -> Check {
        Check::with(name, Status::Fail, Some(witness.into()))
    }

    /// Pass when `witness` is `None`.
    pub fn law(name: &str, witness: Option<String>) -> Check {
        match witness {
            None => Check::pass(name),
            Some(w) => Check::fail(name, w),
        }
    }

    /// Pass when `ok`, otherwise fail with the lazily built witness.
    pub fn expect(name: &str, ok: bool, witness: impl FnOnce() -> String) -> Check {
        if ok {
            Check::pass(name)
        } else {
            Check::fail(name, witness())
        }
    }

    pub fn count(mut self, key: &str, v: usize) -> Check {
        self.counts.insert(key.to_string(), v as u64);
        self
    }

    pub fn detail(mut self, line: impl Into<String>) -> Check {
        self.details.push(line.into());
        self
    }

    pub fn from_law(subject: &str, l: &Law) -> Check {
        Check::law(&format!("{subject}: {}", l.name), l.witness.clone())
    }

    pub fn from_certification(c: &Certification) -> Vec<Check> {
        c.laws.iter().map(|l| Check::from_law(&c.subject, l)).collect()
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorRecord {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UsageRecord {
    pub cells_built: u64,
    pub maps_enumerated: u64,
}

impl From<Usage> for UsageRecord {
    fn from(u: Usage) -> Self {
        UsageRecord { cells_built: u.cells_built, maps_enumerated: u.maps_enumerated }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub status: String,
    pub exit: i32,
    pub checks: Vec<Check>,
    pub error: Option<ErrorRecord>,
    pub usage: UsageRecord,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

pub fn error_kind(e: &Error) -> (&'static str, i32) {
    match e {
        Error::Syntax { .. } => ("syntax", EXIT_USAGE),
        Error::Unknown { .. } => ("unknown", EXIT_USAGE),
        Error::Duplicate { .. } => ("duplicate", EXIT_USAGE),
        Error::IllSorted { .. } => ("ill-sorted", EXIT_USAGE),
        Error::Invalid(_) => ("invalid", EXIT_USAGE),
        Error::Failed(_) => ("failed", EXIT_FAILED),
        Error::Resource { .. } => ("resource", EXIT_RESOURCE),
    }
}

impl Report {
    pub fn new(command: &str, outcome: Result<Vec<Check>, Error>, usage: Usage) -> Report {
        let (checks, error, exit) = match outcome {
            Ok(checks) => {
                let exit = if checks.iter().any(Check::failed) { EXIT_FAILED } else { EXIT_OK };
                (checks, None, exit)
            }
            Err(e) => {
                let (kind, exit) = error_kind(&e);
                (vec![], Some(ErrorRecord { kind: kind.into(), message: e.to_string() }), exit)
            }
        };
        let status = match exit {
            EXIT_OK => "ok",
            EXIT_FAILED => "fail",
            EXIT_USAGE => "usage",
            _ => "resource",
        };
        Report { command: command.to_string(), status: status.into(), exit, checks, error, usage: usage.into() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Info => "INFO",
            };
            let counts: Vec<String> = c.counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
            if counts.is_empty() {
                let _ = writeln!(out, "{tag} {}", c.name);
            } else {
                let _ = writeln!(out, "{tag} {}  {}", c.name, counts.join(" "));
            }
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "  witness: {w}");
            }
            for d in &c.details {
                let _ = writeln!(out, "  {d}");
            }
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error ({}): {}", e.kind, e.message);
        }
        let _ = writeln!(out, "status: {}", self.status);
        out
    }
}
