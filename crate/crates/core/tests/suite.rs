use std::path::PathBuf;

use riesz_core::suite::{self, replay_witness, AuditOptions, Corpus, CorpusError, ManifestOutcome};
use riesz_core::{Execution, SemanticsMode, Status};

fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpora").join(name)
}

const SHIPPED: [&str; 4] = [
    "default.json",
    "finite-exhaustive.json",
    "sequence.json",
    "semantics-divergence.json",
];

#[test]
fn shipped_corpora_match_their_manifests() {
    for name in SHIPPED {
        let corpus = Corpus::load(&corpus_path(name)).unwrap();
        let report = suite::run_audit(&corpus, &AuditOptions::default()).unwrap();
        let manifest = std::fs::read(corpus.manifest.as_ref().unwrap()).unwrap();
        assert_eq!(report.compare_with_manifest(&manifest).unwrap(), ManifestOutcome::Match, "{name}");
        assert!(!report.has_oracle_mismatch(), "{name}");
    }
}

#[test]
fn every_witness_replays_through_the_primitives() {
    let mut replayed = 0;
    for name in SHIPPED {
        let corpus = Corpus::load(&corpus_path(name)).unwrap();
        let report = suite::run_audit(&corpus, &AuditOptions::default()).unwrap();
        for claim in &report.claims {
            let Some(mode) = claim.semantics() else { continue };
            for w in &claim.counterexamples {
                if !matches!(w["violation"].as_str(), Some("convergence" | "cluster" | "corollary")) {
                    continue;
                }
                assert!(replay_witness(&corpus, mode, w).unwrap(), "{name} {} [{}]: {w}", claim.id, claim.mode);
                replayed += 1;
            }
        }
    }
    assert!(replayed > 20, "only {replayed} witnesses replayed");
}

#[test]
fn tampered_witness_does_not_replay() {
    let corpus = Corpus::load(&corpus_path("semantics-divergence.json")).unwrap();
    let report = suite::run_audit(&corpus, &AuditOptions::default()).unwrap();
    let mut w = report.claim("PROP3", "zero").unwrap().counterexamples[0].clone();
    assert!(replay_witness(&corpus, SemanticsMode::ZeroNbhd, &w).unwrap());
    // The same filter does converge to its own point.
    w["target"] = serde_json::json!(["-1"]);
    assert!(!replay_witness(&corpus, SemanticsMode::ZeroNbhd, &w).unwrap());
}

#[test]
fn sequential_and_parallel_reports_agree() {
    let corpus = Corpus::load(&corpus_path("semantics-divergence.json")).unwrap();
    let run = |execution| {
        suite::run_audit(&corpus, &AuditOptions { execution, ..AuditOptions::default() })
            .unwrap()
            .to_json()
    };
    assert_eq!(run(Execution::Sequential), run(Execution::Parallel));
}

#[test]
fn single_mode_reports_are_partial_matches() {
    let corpus = Corpus::load(&corpus_path("semantics-divergence.json")).unwrap();
    let options = AuditOptions {
        modes: vec![SemanticsMode::Translated],
        ..AuditOptions::default()
    };
    let report = suite::run_audit(&corpus, &options).unwrap();
    assert!(report.claims.iter().all(|c| c.mode != "zero"));
    let manifest = std::fs::read(corpus.manifest.as_ref().unwrap()).unwrap();
    assert_eq!(report.compare_with_manifest(&manifest).unwrap(), ManifestOutcome::Match);
}

#[test]
fn reseeded_report_is_a_seed_mismatch() {
    let bytes = std::fs::read(corpus_path("semantics-divergence.json")).unwrap();
    let a = Corpus::reseed(&bytes, 99).unwrap();
    let report = suite::run_audit(&a, &AuditOptions::default()).unwrap();
    assert_eq!(report.seed, 99);
    let manifest = std::fs::read(corpus_path("semantics-divergence.expected.json")).unwrap();
    match report.compare_with_manifest(&manifest).unwrap() {
        ManifestOutcome::Mismatch(d) => assert!(d.iter().any(|l| l.starts_with("seed differs"))),
        ManifestOutcome::Match => panic!("a different seed must not match"),
    }
}

#[test]
fn sequence_only_corpus_skips_finite_claims() {
    let text = r#"{
        "version": 1,
        "spaces": {"line": {"dim": 1, "pseudonorms": [{"kind": "coord", "j": 0}]}},
        "sequences": {"s": {"space": "line", "coeffs": [["0", "1"]]}}
    }"#;
    let corpus = Corpus::from_bytes(text.as_bytes()).unwrap();
    let report = suite::run_audit(&corpus, &AuditOptions::default()).unwrap();
    for id in ["REM1", "PROP3", "THM-JOIN", "PROP-CONT", "EX2-FILTERHOOD"] {
        assert_eq!(report.claim(id, "zero").unwrap().status, Status::Skipped, "{id}");
    }
    assert_eq!(report.claim("THM-NETFILTER", "translated").unwrap().status, Status::Holds);
    assert_eq!(report.claim("COR-PSEUDO", "translated").unwrap().status, Status::Holds);
}

#[test]
fn empty_corpus_is_an_error() {
    let err = Corpus::from_bytes(br#"{"version": 1, "spaces": {}}"#).unwrap_err();
    assert!(matches!(err, CorpusError::Empty));
    assert_eq!(err.to_string(), "empty corpus");
}

#[test]
fn non_directed_net_stops_the_audit() {
    let text = r#"{
        "version": 1,
        "spaces": {"line": {"dim": 1, "pseudonorms": [{"kind": "coord", "j": 0}]}},
        "carriers": {"w": {"space": "line", "points": [["0"], ["1"]]}},
        "nets": {"split": {"carrier": "w", "size": 2, "values": [0, 1]}}
    }"#;
    let corpus = Corpus::from_bytes(text.as_bytes()).unwrap();
    let err = suite::run_audit(&corpus, &AuditOptions::default()).unwrap_err().to_string();
    assert!(err.contains("nets.split") && err.contains("not directed"), "{err}");
}
