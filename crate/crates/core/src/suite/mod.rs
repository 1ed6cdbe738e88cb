//! One executable check per claim, run over a corpus under each semantics.
//!
//! Every check has a fast path and an independent slow oracle, and any
//! disagreement between the two is reported as `oracle-mismatch` rather than
//! folded into the verdict. Reports are deterministic for a fixed corpus and seed.

mod checks;
pub mod corpus;
pub mod report;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use checks::replay_witness;
pub use corpus::{Corpus, CorpusError};
pub use report::{AuditReport, ClaimReport, ManifestOutcome};

use crate::par::Execution;
use crate::verdict::{SemanticsMode, Status};

/// Counterexample witnesses kept per claim and mode.
pub const WITNESS_CAP: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClaimId {
    #[serde(rename = "REM1")]
    Rem1,
    #[serde(rename = "REM2")]
    Rem2,
    #[serde(rename = "PROP1a")]
    Prop1a,
    #[serde(rename = "PROP1b")]
    Prop1b,
    #[serde(rename = "PROP2")]
    Prop2,
    #[serde(rename = "PROP3")]
    Prop3,
    #[serde(rename = "THM-JOIN")]
    ThmJoin,
    #[serde(rename = "THM-MEET")]
    ThmMeet,
    #[serde(rename = "THM-CLUSTER")]
    ThmCluster,
    #[serde(rename = "THM-NETFILTER")]
    ThmNetFilter,
    #[serde(rename = "COR-PSEUDO")]
    CorPseudo,
    #[serde(rename = "PROP-CONT")]
    PropCont,
    #[serde(rename = "EX2-FILTERHOOD")]
    Ex2Filterhood,
    #[serde(rename = "BASE-AXIOMS")]
    BaseAxioms,
    #[serde(rename = "PSEUDO-AXIOMS")]
    PseudoAxioms,
}

impl ClaimId {
    pub const ALL: [ClaimId; 15] = [
        ClaimId::Rem1,
        ClaimId::Rem2,
        ClaimId::Prop1a,
        ClaimId::Prop1b,
        ClaimId::Prop2,
        ClaimId::Prop3,
        ClaimId::ThmJoin,
        ClaimId::ThmMeet,
        ClaimId::ThmCluster,
        ClaimId::ThmNetFilter,
        ClaimId::CorPseudo,
        ClaimId::PropCont,
        ClaimId::Ex2Filterhood,
        ClaimId::BaseAxioms,
        ClaimId::PseudoAxioms,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::Rem1 => "REM1",
            ClaimId::Rem2 => "REM2",
            ClaimId::Prop1a => "PROP1a",
            ClaimId::Prop1b => "PROP1b",
            ClaimId::Prop2 => "PROP2",
            ClaimId::Prop3 => "PROP3",
            ClaimId::ThmJoin => "THM-JOIN",
            ClaimId::ThmMeet => "THM-MEET",
            ClaimId::ThmCluster => "THM-CLUSTER",
            ClaimId::ThmNetFilter => "THM-NETFILTER",
            ClaimId::CorPseudo => "COR-PSEUDO",
            ClaimId::PropCont => "PROP-CONT",
            ClaimId::Ex2Filterhood => "EX2-FILTERHOOD",
            ClaimId::BaseAxioms => "BASE-AXIOMS",
            ClaimId::PseudoAxioms => "PSEUDO-AXIOMS",
        }
    }

    /// Axiom audits do not involve convergence and run once.
    pub fn is_mode_free(self) -> bool {
        matches!(self, ClaimId::BaseAxioms | ClaimId::PseudoAxioms)
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClaimId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown claim {s:?}"))
    }
}

/// Running counts for one claim and mode.
#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub instances: u64,
    pub counterexamples: u64,
    pub construction_errors: u64,
    pub mismatches: u64,
    pub witnesses: Vec<Value>,
    pub construction_witnesses: Vec<Value>,
    pub mismatch_witnesses: Vec<Value>,
}

impl Tally {
    pub fn instance(&mut self) {
        self.instances += 1;
    }

    pub fn counterexample(&mut self, witness: impl FnOnce() -> Value) {
        self.counterexamples += 1;
        if self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push(witness());
        }
    }

    pub fn construction_error(&mut self, witness: impl FnOnce() -> Value) {
        self.construction_errors += 1;
        if self.construction_witnesses.len() < WITNESS_CAP {
            self.construction_witnesses.push(witness());
        }
    }

    pub fn mismatch(&mut self, witness: impl FnOnce() -> Value) {
        self.mismatches += 1;
        if self.mismatch_witnesses.len() < WITNESS_CAP {
            self.mismatch_witnesses.push(witness());
        }
    }

    /// Returns `fast`, recording a mismatch when the oracle disagrees.
    pub fn decide(&mut self, fast: bool, oracle: bool, context: impl FnOnce() -> Value) -> bool {
        if fast != oracle {
            self.mismatch(|| {
                let mut w = context();
                w["fast"] = fast.into();
                w["oracle"] = oracle.into();
                w
            });
        }
        fast
    }

    pub fn merge(&mut self, other: Tally) {
        fn append(into: &mut Vec<Value>, from: Vec<Value>) {
            let room = WITNESS_CAP.saturating_sub(into.len());
            into.extend(from.into_iter().take(room));
        }
        self.instances += other.instances;
        self.counterexamples += other.counterexamples;
        self.construction_errors += other.construction_errors;
        self.mismatches += other.mismatches;
        append(&mut self.witnesses, other.witnesses);
        append(&mut self.construction_witnesses, other.construction_witnesses);
        append(&mut self.mismatch_witnesses, other.mismatch_witnesses);
    }

    pub fn status(&self) -> Status {
        if self.mismatches > 0 {
            Status::OracleMismatch
        } else if self.counterexamples > 0 {
            Status::Counterexample
        } else if self.construction_errors > 0 {
            Status::ConstructionError
        } else if self.instances == 0 {
            Status::Skipped
        } else {
            Status::Holds
        }
    }
}

#[derive(Clone, Debug)]
pub struct AuditOptions {
    pub modes: Vec<SemanticsMode>,
    pub execution: Execution,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            modes: SemanticsMode::ALL.to_vec(),
            execution: Execution::default(),
        }
    }
}

/// Runs every selected claim over the corpus.
pub fn run_audit(corpus: &Corpus, options: &AuditOptions) -> Result<AuditReport, CorpusError> {
    let start = Instant::now();
    checks::preflight(corpus)?;
    let mut jobs: Vec<(ClaimId, Option<SemanticsMode>)> = Vec::new();
    for &claim in &corpus.claims {
        if claim.is_mode_free() {
            jobs.push((claim, None));
        } else {
            let mut modes = options.modes.clone();
            modes.sort();
            modes.dedup();
            jobs.extend(modes.into_iter().map(|m| (claim, Some(m))));
        }
    }
    let exec = options.execution;
    let results = exec.try_map(&jobs, |&(claim, mode)| {
        checks::run_claim(corpus, claim, mode, exec).map(|(tally, notes)| {
            ClaimReport::from_tally(claim, mode, tally, notes)
        })
    })?;
    Ok(AuditReport {
        claims: results,
        corpus_sha: corpus.sha.clone(),
        seed: corpus.seed,
        runtime_ms: start.elapsed().as_millis(),
    })
}
