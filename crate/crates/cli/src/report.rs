//! The report envelope shared by every command and the exit-code policy.

use std::process::ExitCode;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use zpcp::generate::RNG_NAME;
use zpcp::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub command: String,
    pub status: Status,
    pub result: Value,
    pub diagnostics: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub rng: String,
}

/// Process outcome, in increasing order of severity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Ok = 0,
    CheckFailed = 1,
    BadInput = 2,
    Contradiction = 3,
}

impl From<Outcome> for ExitCode {
    fn from(o: Outcome) -> Self {
        ExitCode::from(o as u8)
    }
}

/// What a command hands back: the result payload plus its verdict.
pub struct CommandOutput {
    pub result: Value,
    pub diagnostics: Vec<String>,
    pub outcome: Outcome,
    pub seed: Option<u64>,
}

impl CommandOutput {
    pub fn ok(result: Value, diagnostics: Vec<String>) -> Self {
        CommandOutput { result, diagnostics, outcome: Outcome::Ok, seed: None }
    }
}

pub fn outcome_of(e: &Error) -> Outcome {
    match e {
        Error::NotPrime(_)
        | Error::PrimeMismatch(..)
        | Error::NotPLocal(..)
        | Error::NotInvertible(_)
        | Error::DimensionMismatch(_)
        | Error::NotInR
        | Error::Degenerate
        | Error::NotSublattice
        | Error::NotSigmaInvariant(_)
        | Error::InvalidAction(_)
        | Error::UnsupportedPrime(_)
        | Error::Parse(_) => Outcome::BadInput,
        Error::NotFree
        | Error::InRadical
        | Error::PreconditionViolated(_)
        | Error::NotElementary { .. }
        | Error::NotUnimodularSummand
        | Error::Cancelled => Outcome::CheckFailed,
        Error::InconsistentType(_) | Error::InternalContradiction(_) => Outcome::Contradiction,
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NotPrime(_) => "NotPrime",
        Error::PrimeMismatch(..) => "PrimeMismatch",
        Error::NotPLocal(..) => "NotPLocal",
        Error::NotInvertible(_) => "NotInvertible",
        Error::DimensionMismatch(_) => "DimensionMismatch",
        Error::NotInR => "NotInR",
        Error::Degenerate => "Degenerate",
        Error::NotSublattice => "NotSublattice",
        Error::NotSigmaInvariant(_) => "NotSigmaInvariant",
        Error::InvalidAction(_) => "InvalidAction",
        Error::InconsistentType(_) => "InconsistentType",
        Error::NotFree => "NotFree",
        Error::InRadical => "InRadical",
        Error::PreconditionViolated(_) => "PreconditionViolated",
        Error::NotElementary { .. } => "NotElementary",
        Error::NotUnimodularSummand => "NotUnimodularSummand",
        Error::UnsupportedPrime(_) => "UnsupportedPrime",
        Error::InternalContradiction(_) => "InternalContradiction",
        Error::Cancelled => "Cancelled",
        Error::Parse(_) => "Parse",
    }
}

/// The error payload of a failed command.
pub fn error_output(e: &Error) -> CommandOutput {
    let mut result = serde_json::json!({ "error": error_kind(e), "message": e.to_string() });
    if let Error::NotElementary { witness } = e {
        result["witness"] = serde_json::json!(witness);
    }
    let diagnostic = match e {
        Error::Cancelled => "computation cancelled by timeout".to_string(),
        other => other.to_string(),
    };
    CommandOutput { result, diagnostics: vec![diagnostic], outcome: outcome_of(e), seed: None }
}

pub fn envelope(command: &str, out: &CommandOutput) -> ReportDoc {
    let status = match out.outcome {
        Outcome::Ok | Outcome::CheckFailed if out.result.get("error").is_none() => Status::Ok,
        _ => Status::Error,
    };
    ReportDoc {
        command: command.to_string(),
        status,
        result: out.result.clone(),
        diagnostics: out.diagnostics.clone(),
        seed: out.seed,
        rng: RNG_NAME.to_string(),
    }
}
