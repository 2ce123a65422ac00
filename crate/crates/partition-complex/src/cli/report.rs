//! The JSON run report and the computed-versus-predicted comparison.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::homology::{BettiTable, DegreeRanks, Field};
use crate::simplicial::CODE_VERSION;

/// Version of the report layout.
pub const SCHEMA: &str = "1";

/// Crate version joined with the chain-complex convention tag.
pub fn code_version() -> String {
    format!("{}+{}", env!("CARGO_PKG_VERSION"), CODE_VERSION)
}

/// Outcome of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckFlag {
    Pass,
    Fail,
    Skipped,
}

impl CheckFlag {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            CheckFlag::Pass
        } else {
            CheckFlag::Fail
        }
    }
}

/// Overall result of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}

impl From<&Error> for ErrorInfo {
    fn from(e: &Error) -> Self {
        let kind = match e {
            Error::Argument(_) => "argument",
            Error::Precondition(_) => "precondition",
            Error::Resource { .. } => "resource",
            Error::Invariant(_) => "invariant",
        };
        ErrorInfo {
            kind: kind.into(),
            message: e.to_string(),
            exit_code: e.exit_code(),
        }
    }
}

/// Everything one invocation prints on stdout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<Field>,
    /// Computed reduced Betti numbers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti: Option<DegreeRanks>,
    /// Closed-form prediction of the same table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted: Option<DegreeRanks>,
    /// Command-specific data: sequences, words, matchings, sub-reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<Value>,
    pub checks: BTreeMap<String, CheckFlag>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    pub elapsed_ms: u64,
    /// For each cached computation, whether it was served from the cache.
    pub cache: BTreeMap<String, bool>,
    pub version: String,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            schema: SCHEMA.into(),
            command: command.into(),
            parameters: BTreeMap::new(),
            field: None,
            betti: None,
            predicted: None,
            payload: None,
            checks: BTreeMap::new(),
            status: Status::Pass,
            notes: Vec::new(),
            error: None,
            elapsed_ms: 0,
            cache: BTreeMap::new(),
            version: code_version(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("parameters serialize");
        self.parameters.insert(key.into(), v);
    }

    pub fn set_computed(&mut self, t: &BettiTable) {
        self.field = Some(t.field);
        self.betti = Some(t.into());
        if let Some(d) = t.truncated_from {
            self.notes.push(format!("computation truncated from degree {d}"));
        }
    }

    pub fn set_payload(&mut self, value: impl Serialize) -> Result<()> {
        let v =
            serde_json::to_value(value).map_err(|e| Error::invariant(format!("payload does not serialize: {e}")))?;
        self.payload = Some(v);
        Ok(())
    }

    pub fn check(&mut self, name: &str, flag: CheckFlag) {
        self.checks.insert(name.into(), flag);
    }

    /// Records an error and derives the final status from the checks.
    pub fn finish(&mut self, outcome: Result<()>) {
        if let Err(e) = outcome {
            self.error = Some(ErrorInfo::from(&e));
        }
        self.status = if self.error.is_some() {
            Status::Error
        } else if self.checks.values().any(|&f| f == CheckFlag::Fail) {
            Status::Fail
        } else {
            Status::Pass
        };
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => self.error.as_ref().map_or(1, |e| e.exit_code),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// A degree where two tables disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDiff {
    pub degree: i64,
    pub computed: u64,
    pub predicted: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub flag: CheckFlag,
    pub diff: Vec<DegreeDiff>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Compares a computed table with a prediction degree by degree.
///
/// A computation truncated at or below the top predicted degree cannot
/// confirm the prediction and is reported as skipped.
pub fn compare(computed: &BettiTable, predicted: &BettiTable) -> Result<Comparison> {
    if computed.field != predicted.field {
        return Err(Error::arg(format!(
            "cannot compare a table over {} with one over {}",
            computed.field, predicted.field
        )));
    }
    if let Some(cut) = computed.truncated_from {
        let top = predicted.ranks().keys().next_back().copied();
        if top.is_some_and(|t| t >= cut) {
            return Ok(Comparison {
                flag: CheckFlag::Skipped,
                diff: Vec::new(),
                note: Some(format!(
                    "computation stops below degree {cut}, prediction reaches degree {}",
                    top.unwrap()
                )),
            });
        }
    }
    let mut degrees: Vec<i64> = computed
        .ranks()
        .keys()
        .chain(predicted.ranks().keys())
        .copied()
        .collect();
    degrees.sort_unstable();
    degrees.dedup();
    let diff: Vec<DegreeDiff> = degrees
        .into_iter()
        .filter(|&d| computed.get(d) != predicted.get(d))
        .map(|d| DegreeDiff {
            degree: d,
            computed: computed.get(d),
            predicted: predicted.get(d),
        })
        .collect();
    Ok(Comparison {
        flag: CheckFlag::from_bool(diff.is_empty()),
        diff,
        note: None,
    })
}

/// `table,field,degree,rank` lines for the computed and predicted tables.
pub fn betti_csv(report: &RunReport) -> String {
    let mut out = String::from("table,field,degree,rank\n");
    let field = report.field.map(|f| f.name()).unwrap_or_default();
    for (name, table) in [("computed", &report.betti), ("predicted", &report.predicted)] {
        if let Some(DegreeRanks(m)) = table {
            for (d, r) in m {
                out.push_str(&format!("{name},{field},{d},{r}\n"));
            }
        }
    }
    out
}
