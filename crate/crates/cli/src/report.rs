use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub value: Option<f64>,
    pub bound: Option<f64>,
}

impl Check {
    pub fn at_most(name: &str, value: f64, bound: f64) -> Self {
        Self { name: name.into(), pass: value <= bound, value: Some(value), bound: Some(bound) }
    }

    pub fn at_least(name: &str, value: f64, bound: f64) -> Self {
        Self { name: name.into(), pass: value >= bound, value: Some(value), bound: Some(bound) }
    }

    pub fn flag(name: &str, pass: bool) -> Self {
        Self { name: name.into(), pass, value: None, bound: None }
    }
}

/// Wall-clock time of one step. Kept out of the numeric payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub step: String,
    pub seconds: f64,
    /// Budget in seconds, when the step has one.
    pub limit: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    /// Config echo; reparses to the config that produced the report.
    pub config: String,
    pub seed: u64,
    pub results: Value,
    pub checks: Vec<Check>,
    pub timings: Vec<Timing>,
}

#[derive(Serialize)]
struct Payload<'a> {
    command: &'a str,
    config: &'a str,
    seed: u64,
    results: &'a Value,
    checks: &'a [Check],
}

impl RunReport {
    pub fn new(command: &str, config: String, seed: u64) -> Self {
        Self { command: command.into(), config, seed, results: Value::Null, checks: Vec::new(), timings: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn within_budget(&self) -> bool {
        self.timings.iter().all(|t| t.limit.is_none_or(|l| t.seconds <= l))
    }

    /// Everything except timings; identical across reruns with the same
    /// config.
    pub fn payload_json(&self) -> String {
        let p = Payload { command: &self.command, config: &self.config, seed: self.seed, results: &self.results, checks: &self.checks };
        serde_json::to_string(&p).expect("serializable")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}
