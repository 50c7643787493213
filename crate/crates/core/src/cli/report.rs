//! Deterministic JSON reports: per-check status, dimensions and the ledger.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::gradedhopf::{CheckOutcome, GradedHopfAlgebra};
use crate::lqt::LqtStructure;

use super::bundle::LedgerEntry;
use super::instance::InstanceSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub attempted: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn of(c: &CheckOutcome) -> Self {
        Check {
            name: c.axiom.clone(),
            status: if c.passed() { Status::Pass } else { Status::Fail },
            attempted: c.attempted,
            failed: c.failed,
            witness: c.witness.clone(),
        }
    }

    pub fn skipped(name: &str, why: String) -> Self {
        Check { name: name.into(), status: Status::Skipped, attempted: 0, failed: 0, witness: Some(why) }
    }

    pub fn verdict(name: &str, ok: bool, witness: Option<String>) -> Self {
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            attempted: 1,
            failed: usize::from(!ok),
            witness: if ok { None } else { witness },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Section {
    pub name: String,
    pub checks: Vec<Check>,
    /// Emitted data such as matrices or coactions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
}

impl Section {
    pub fn new(name: &str, checks: Vec<Check>) -> Self {
        Section { name: name.into(), checks, data: None }
    }

    pub fn of(name: &str, checks: &[CheckOutcome]) -> Self {
        Self::new(name, checks.iter().map(Check::of).collect())
    }

    pub fn with_data(mut self, data: serde_json::Value) -> Self {
        self.data = Some(data);
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dims {
    pub a: Vec<usize>,
    pub h: Vec<usize>,
    pub d: Vec<usize>,
    pub d_total: usize,
}

impl Dims {
    pub fn of(s: &LqtStructure) -> Self {
        let d: &GradedHopfAlgebra = &s.dcp.d;
        Dims { a: s.dcp.a.dims(), h: s.dcp.h.dims(), d: d.dims(), d_total: d.total_dim() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub instance: InstanceSpec,
    pub dims: Dims,
    pub sections: Vec<Section>,
    pub ledger: Vec<LedgerEntry>,
    pub passed: bool,
    /// Wall-clock milliseconds per phase; only present when requested, since it breaks byte-identity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<BTreeMap<String, u128>>,
}

impl Report {
    pub fn new(command: &str, instance: InstanceSpec, dims: Dims, ledger: Vec<LedgerEntry>) -> Self {
        Report { command: command.into(), instance, dims, sections: Vec::new(), ledger, passed: true, timing_ms: None }
    }

    pub fn push(&mut self, s: Section) {
        self.passed &= s.passed();
        self.sections.push(s);
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
