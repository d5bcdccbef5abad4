//! Canonical reports: sorted-key JSON and a plain-text summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use bethkit::verdict::{Status, Verdict};
use bethkit::FINITE_SCALE_DISCLAIMER;
use serde::Serialize;
use serde_json::Value;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportInstance {
    pub name: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
    pub bound: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub status: String,
    pub claims: Vec<String>,
    pub holds: usize,
    pub fails: usize,
    pub unknown: usize,
    pub total: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub version: String,
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub instances: Vec<ReportInstance>,
    pub summary: Summary,
    pub disclaimer: String,
    #[serde(skip)]
    status: Status,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

impl Report {
    pub fn new(check: &str, params: BTreeMap<String, Value>) -> Self {
        Report {
            version: VERSION.to_string(),
            check: check.to_string(),
            params,
            instances: Vec::new(),
            summary: Summary {
                status: Status::Holds.to_string(),
                claims: Vec::new(),
                holds: 0,
                fails: 0,
                unknown: 0,
                total: 0,
                notes: Vec::new(),
            },
            disclaimer: FINITE_SCALE_DISCLAIMER.to_string(),
            status: Status::Holds,
        }
    }

    /// Appends the instances of `v`, prefixing their names with `prefix`.
    pub fn add_verdict(&mut self, prefix: Option<&str>, v: &Verdict) {
        self.summary.claims.push(v.claim.clone());
        self.summary.notes.extend(v.notes.iter().cloned());
        for i in &v.instances {
            let name = match prefix {
                Some(p) => format!("{}: {}", p, i.name),
                None => i.name.clone(),
            };
            self.push(ReportInstance {
                name,
                verdict: i.status.to_string(),
                certificate: i.certificate.as_ref().map(to_value),
                bound: v.bounds.clone(),
                details: i.details.iter().map(|(k, d)| (k.clone(), to_value(d))).collect(),
            });
        }
    }

    pub fn push(&mut self, instance: ReportInstance) {
        let status = match instance.verdict.as_str() {
            "holds" => Status::Holds,
            "fails" => Status::Fails,
            _ => Status::Unknown,
        };
        match status {
            Status::Holds => self.summary.holds += 1,
            Status::Fails => self.summary.fails += 1,
            Status::Unknown => self.summary.unknown += 1,
        }
        self.summary.total += 1;
        self.status = self.status.combine(status);
        self.summary.status = self.status.to_string();
        self.instances.push(instance);
    }

    pub fn status(&self) -> Status {
        self.status
    }

    /// 0 when every instance holds, 1 when one fails, 2 when one is unknown.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Holds => 0,
            Status::Fails => 1,
            Status::Unknown => 2,
        }
    }

    /// Pretty-printed JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let value = to_value(self);
        let mut out = serde_json::to_string_pretty(&value).expect("report values serialize");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} ({})", self.check, self.summary.status);
        for c in &self.summary.claims {
            let _ = writeln!(out, "claim: {}", c);
        }
        if !self.params.is_empty() {
            let params: Vec<String> = self
                .params
                .iter()
                .map(|(k, v)| format!("{}={}", k, compact(v)))
                .collect();
            let _ = writeln!(out, "params: {}", params.join(" "));
        }
        for i in &self.instances {
            let _ = write!(out, "  [{}] {}", i.verdict, i.name);
            if !i.details.is_empty() {
                let d: Vec<String> = i.details.iter().map(|(k, v)| format!("{}={}", k, compact(v))).collect();
                let _ = write!(out, " ({})", d.join(", "));
            }
            out.push('\n');
            if let Some(c) = &i.certificate {
                let _ = writeln!(out, "      certificate: {}", compact(c));
            }
        }
        for n in &self.summary.notes {
            let _ = writeln!(out, "note: {}", n);
        }
        let _ = writeln!(
            out,
            "{} holds, {} fails, {} unknown of {}",
            self.summary.holds, self.summary.fails, self.summary.unknown, self.summary.total
        );
        let _ = writeln!(out, "{}", self.disclaimer);
        out
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Builds a parameter map from key/value pairs.
pub fn params<const N: usize>(pairs: [(&str, Value); N]) -> BTreeMap<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// An instance outside any verdict, used for computed objects.
pub fn computed(name: &str, details: Vec<(&str, Value)>, bound: BTreeMap<String, usize>) -> ReportInstance {
    ReportInstance {
        name: name.to_string(),
        verdict: Status::Holds.to_string(),
        certificate: None,
        bound,
        details: details.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
    }
}

pub fn value<T: Serialize>(x: &T) -> Value {
    to_value(x)
}
