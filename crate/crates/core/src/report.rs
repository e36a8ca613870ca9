//! Machine-readable verification reports.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    pub witness: Value,
    pub wall_time_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub suite: String,
    pub seed: u64,
    pub params: BTreeMap<String, Value>,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn new(suite: &str, seed: u64, params: BTreeMap<String, Value>, checks: Vec<CheckResult>) -> Self {
        let passed = checks.iter().all(|c| c.status != Status::Fail);
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            suite: suite.into(),
            seed,
            params,
            passed,
            checks,
        }
    }

    pub fn failed_ids(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .map(|c| c.id.as_str())
            .collect()
    }

    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// The report as JSON with every `wall_time_ms` field zeroed.
    pub fn without_timing(&self) -> Value {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.wall_time_ms = 0.0;
        }
        serde_json::to_value(r).expect("serializable")
    }
}

/// Outcome of running one check body.
pub struct Outcome {
    pub status: Status,
    pub witness: Value,
}

impl Outcome {
    pub fn new(ok: bool, witness: Value) -> Self {
        Outcome {
            status: Status::from_bool(ok),
            witness,
        }
    }

    pub fn skip(witness: Value) -> Self {
        Outcome {
            status: Status::Skip,
            witness,
        }
    }
}

type Body = Box<dyn FnOnce() -> Result<Outcome> + Send>;

pub struct Check {
    pub id: String,
    body: Body,
}

impl Check {
    pub fn new(id: impl Into<String>, body: impl FnOnce() -> Result<Outcome> + Send + 'static) -> Self {
        Check {
            id: id.into(),
            body: Box::new(body),
        }
    }

    pub fn run(self) -> CheckResult {
        let start = Instant::now();
        let outcome = (self.body)();
        let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
        let (status, witness) = match outcome {
            Ok(o) => (o.status, o.witness),
            Err(e) => (Status::Fail, serde_json::json!({ "error": e.to_string() })),
        };
        log::info!("{} {:?} ({wall_time_ms:.1} ms)", self.id, status);
        CheckResult {
            id: self.id,
            status,
            witness,
            wall_time_ms,
        }
    }
}

/// Runs checks in order, or concurrently on the current rayon pool; results keep the
/// input order either way.
pub fn run_checks(checks: Vec<Check>, parallel: bool) -> Vec<CheckResult> {
    if parallel {
        checks.into_par_iter().map(Check::run).collect()
    } else {
        checks.into_iter().map(Check::run).collect()
    }
}
