use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Which neighborhoods a convergence or cluster query quantifies over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SemanticsMode {
    /// Zero neighborhoods `U` with `e ∈ U`.
    #[serde(rename = "zero")]
    ZeroNbhd,
    /// Translated neighborhoods `e + U`; equivalently `ρ_j(x - e) → 0`.
    #[serde(rename = "translated")]
    Translated,
}

impl SemanticsMode {
    pub const ALL: [SemanticsMode; 2] = [SemanticsMode::ZeroNbhd, SemanticsMode::Translated];

    pub fn as_str(self) -> &'static str {
        match self {
            SemanticsMode::ZeroNbhd => "zero",
            SemanticsMode::Translated => "translated",
        }
    }
}

impl fmt::Display for SemanticsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SemanticsMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zero" => Ok(SemanticsMode::ZeroNbhd),
            "translated" => Ok(SemanticsMode::Translated),
            other => Err(format!("unknown semantics {other:?} (expected zero|translated)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Holds,
    Counterexample,
    ConstructionError,
    Skipped,
    /// The fast path and its independent oracle disagreed on some instance.
    OracleMismatch,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Counterexample => "counterexample",
            Status::ConstructionError => "construction-error",
            Status::Skipped => "skipped",
            Status::OracleMismatch => "oracle-mismatch",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of checking one claim, with a witness payload on failure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub claim: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semantics: Option<SemanticsMode>,
    pub status: Status,
    #[serde(skip_serializing_if = "Value::is_null", default)]
    pub witness: Value,
}

impl Verdict {
    pub fn holds(claim: impl Into<String>) -> Self {
        Verdict {
            claim: claim.into(),
            semantics: None,
            status: Status::Holds,
            witness: Value::Null,
        }
    }

    pub fn failed(claim: impl Into<String>, status: Status, witness: Value) -> Self {
        Verdict {
            claim: claim.into(),
            semantics: None,
            status,
            witness,
        }
    }

    pub fn with_mode(mut self, mode: SemanticsMode) -> Self {
        self.semantics = Some(mode);
        self
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }
}
