//! Structured reports: one item per check, machine-readable JSON rendering
//! (byte-deterministic for fixed inputs; timing is opt-in and excluded by
//! default so repeated runs compare equal) and a human-readable text form.

use debmat::classes::{Verdict, Witness};
use debmat::model::ObjectRepr;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Serialize)]
pub struct Item {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
}

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub mode: String,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub items: Vec<Item>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub outputs: BTreeMap<String, ObjectRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn new(command: impl Into<String>, mode: impl Into<String>, tolerance: f64) -> Self {
        Report {
            command: command.into(),
            mode: mode.into(),
            tolerance,
            seed: None,
            items: Vec::new(),
            outputs: BTreeMap::new(),
            timing_ms: None,
        }
    }

    pub fn push_verdict(&mut self, name: impl Into<String>, v: Verdict) {
        self.items.push(Item {
            name: name.into(),
            pass: v.member,
            detail: None,
            witnesses: v.witnesses,
        });
    }

    pub fn push_check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.items.push(Item {
            name: name.into(),
            pass,
            detail: Some(detail.into()),
            witnesses: Vec::new(),
        });
    }

    /// Record a membership outcome without affecting the headline verdict.
    pub fn push_classification(&mut self, name: impl Into<String>, v: Verdict) {
        self.items.push(Item {
            name: name.into(),
            pass: true,
            detail: Some(if v.member { "member".to_string() } else { "not a member".to_string() }),
            witnesses: v.witnesses,
        });
    }

    pub fn push_info(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.items.push(Item {
            name: name.into(),
            pass: true,
            detail: Some(detail.into()),
            witnesses: Vec::new(),
        });
    }

    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "command: {}\nmode: {}  tolerance: {:e}\n",
            self.command, self.mode, self.tolerance
        ));
        if let Some(seed) = self.seed {
            out.push_str(&format!("seed: {seed}\n"));
        }
        for item in &self.items {
            out.push_str(&format!(
                "[{}] {}",
                if item.pass { "PASS" } else { "FAIL" },
                item.name
            ));
            if let Some(d) = &item.detail {
                out.push_str(&format!(" - {d}"));
            }
            out.push('\n');
            for w in &item.witnesses {
                out.push_str(&format!("       {}\n", witness_line(w)));
            }
        }
        if !self.outputs.is_empty() {
            out.push_str(&format!(
                "outputs: {}\n",
                self.outputs.keys().cloned().collect::<Vec<_>>().join(", ")
            ));
        }
        if let Some(ms) = self.timing_ms {
            out.push_str(&format!("elapsed: {ms} ms\n"));
        }
        out.push_str(&format!(
            "result: {}\n",
            if self.all_pass() { "PASS" } else { "FAIL" }
        ));
        out
    }
}

fn witness_line(w: &Witness) -> String {
    match w {
        Witness::Pole { re, im, order, context } => {
            format!("pole at {re}{im:+}i (order {order}): {context}")
        }
        Witness::Sample { re, im, value, what } => {
            format!("sample {re}{im:+}i: {what} = {value:e}")
        }
        Witness::Residual { what, norm } => format!("residual {what}: {norm:e}"),
        Witness::Note { text } => text.clone(),
    }
}
