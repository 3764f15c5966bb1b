//! Run reports and their two renderings.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use cofib::fincat::{canonical_json, SCHEMA_VERSION};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub check: String,
    pub value: Value,
    /// A follow-up command reproducing the failure, when one exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay: Option<String>,
}

/// Everything a command produced. Wall time is kept out of the serialized
/// form so machine reports are byte-identical across runs.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub inputs: BTreeMap<String, String>,
    pub parameters: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub witnesses: Vec<Witness>,
    pub data: BTreeMap<String, Value>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            command,
            inputs: BTreeMap::new(),
            parameters: BTreeMap::new(),
            checks: Vec::new(),
            witnesses: Vec::new(),
            data: BTreeMap::new(),
        }
    }

    pub fn param<T: Serialize>(&mut self, name: &str, v: T) {
        self.parameters.insert(name.into(), serde_json::to_value(v).expect("serializable"));
    }

    pub fn data<T: Serialize>(&mut self, name: &str, v: T) {
        self.data.insert(name.into(), serde_json::to_value(v).expect("serializable"));
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
        pass
    }

    pub fn witness<T: Serialize>(&mut self, check: &str, v: T, replay: Option<String>) {
        self.witnesses.push(Witness {
            check: check.into(),
            value: serde_json::to_value(v).expect("serializable"),
            replay,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn machine(&self) -> String {
        canonical_json(self)
    }

    pub fn human(&self, wall: std::time::Duration) -> String {
        let mut s = String::new();
        s.push_str(&format!("command: {}\n", self.command.join(" ")));
        for (k, v) in &self.inputs {
            s.push_str(&format!("input {} sha256 {}\n", k, v));
        }
        let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{}={}", k, v)).collect();
        s.push_str(&format!("parameters: {}\n", params.join(" ")));
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                s.push_str(&format!("{} {}\n", tag, c.name));
            } else {
                s.push_str(&format!("{} {}: {}\n", tag, c.name, c.detail));
            }
        }
        for w in &self.witnesses {
            s.push_str(&format!("witness for {}: {}\n", w.check, w.value));
            if let Some(r) = &w.replay {
                s.push_str(&format!("  replay: {}\n", r));
            }
        }
        for (k, v) in &self.data {
            let text = match v {
                Value::String(t) => t.clone(),
                _ => v.to_string(),
            };
            s.push_str(&format!("{}: {}\n", k, text));
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        s.push_str(&format!("{} checks, {} failed, wall time {:.3} s\n", self.checks.len(), failed, wall.as_secs_f64()));
        s
    }
}
