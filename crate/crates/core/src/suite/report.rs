use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{ClaimId, Tally};
use crate::verdict::{SemanticsMode, Status, Verdict};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub id: String,
    /// `zero`, `translated`, or `n/a` for the axiom audits.
    pub mode: String,
    pub status: Status,
    pub instances: u64,
    pub counterexample_count: u64,
    pub construction_errors: u64,
    pub oracle_mismatches: u64,
    pub counterexamples: Vec<Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub construction_witnesses: Vec<Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mismatch_witnesses: Vec<Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ClaimReport {
    pub(crate) fn from_tally(
        claim: ClaimId,
        mode: Option<SemanticsMode>,
        tally: Tally,
        notes: Vec<String>,
    ) -> Self {
        ClaimReport {
            id: claim.as_str().to_string(),
            mode: mode.map_or("n/a", SemanticsMode::as_str).to_string(),
            status: tally.status(),
            instances: tally.instances,
            counterexample_count: tally.counterexamples,
            construction_errors: tally.construction_errors,
            oracle_mismatches: tally.mismatches,
            counterexamples: tally.witnesses,
            construction_witnesses: tally.construction_witnesses,
            mismatch_witnesses: tally.mismatch_witnesses,
            notes,
        }
    }

    pub fn semantics(&self) -> Option<SemanticsMode> {
        self.mode.parse().ok()
    }

    /// The claim's outcome as a single verdict carrying the first witness.
    pub fn verdict(&self) -> Verdict {
        let witness = self
            .mismatch_witnesses
            .first()
            .or(self.counterexamples.first())
            .or(self.construction_witnesses.first())
            .cloned()
            .unwrap_or(Value::Null);
        Verdict {
            claim: self.id.clone(),
            semantics: self.semantics(),
            status: self.status,
            witness,
        }
    }

    fn key(&self) -> (String, String) {
        (self.id.clone(), self.mode.clone())
    }
}

/// Runtime is kept out of the JSON so reports are byte-stable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub claims: Vec<ClaimReport>,
    pub corpus_sha: String,
    pub seed: u64,
    #[serde(skip)]
    pub runtime_ms: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ManifestOutcome {
    Match,
    /// One line per differing claim and mode.
    Mismatch(Vec<String>),
}

impl AuditReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn claim(&self, id: &str, mode: &str) -> Option<&ClaimReport> {
        self.claims.iter().find(|c| c.id == id && c.mode == mode)
    }

    pub fn has_oracle_mismatch(&self) -> bool {
        self.claims.iter().any(|c| c.status == Status::OracleMismatch)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<15} {:<11} {:<19} {:>9} {:>8} {:>8} {:>8}",
            "claim", "mode", "status", "instances", "cex", "constr", "mismatch"
        );
        for c in &self.claims {
            let _ = writeln!(
                out,
                "{:<15} {:<11} {:<19} {:>9} {:>8} {:>8} {:>8}",
                c.id,
                c.mode,
                c.status.as_str(),
                c.instances,
                c.counterexample_count,
                c.construction_errors,
                c.oracle_mismatches
            );
        }
        let failing: Vec<_> = self
            .claims
            .iter()
            .filter(|c| !c.counterexamples.is_empty() || !c.mismatch_witnesses.is_empty())
            .collect();
        if !failing.is_empty() {
            out.push_str("\nfirst witnesses:\n");
            for c in failing {
                let w = c.mismatch_witnesses.first().or(c.counterexamples.first());
                if let Some(w) = w {
                    let _ = writeln!(out, "  {} [{}]: {}", c.id, c.mode, w);
                }
            }
        }
        let _ = writeln!(out, "\ncorpus sha256 {}  seed {}", self.corpus_sha, self.seed);
        let _ = writeln!(out, "runtime {} ms", self.runtime_ms);
        out
    }

    /// Compares against a frozen manifest. A report covering every claim and
    /// mode of the manifest must match it byte for byte; a partial report
    /// (fewer modes) must match the corresponding entries.
    pub fn compare_with_manifest(&self, manifest: &[u8]) -> Result<ManifestOutcome, String> {
        let expected: AuditReport = serde_json::from_slice(manifest)
            .map_err(|e| format!("manifest does not parse: {e}"))?;
        let mut diffs = Vec::new();
        if expected.corpus_sha != self.corpus_sha {
            diffs.push(format!(
                "corpus sha differs: manifest {}, report {}",
                expected.corpus_sha, self.corpus_sha
            ));
        }
        if expected.seed != self.seed {
            diffs.push(format!("seed differs: manifest {}, report {}", expected.seed, self.seed));
        }
        let want: BTreeMap<_, _> = expected.claims.iter().map(|c| (c.key(), c)).collect();
        for c in &self.claims {
            match want.get(&c.key()) {
                None => diffs.push(format!("{} [{}]: not in manifest", c.id, c.mode)),
                Some(w) if *w != c => diffs.push(format!(
                    "{} [{}]: manifest {} ({} cex), report {} ({} cex)",
                    c.id, c.mode, w.status, w.counterexample_count, c.status, c.counterexample_count
                )),
                Some(_) => {}
            }
        }
        let complete = expected.claims.len() == self.claims.len();
        if diffs.is_empty() && complete && self.to_json().as_bytes() != manifest {
            diffs.push("report is equivalent to the manifest but not byte-identical".into());
        }
        Ok(if diffs.is_empty() {
            ManifestOutcome::Match
        } else {
            ManifestOutcome::Mismatch(diffs)
        })
    }
}
