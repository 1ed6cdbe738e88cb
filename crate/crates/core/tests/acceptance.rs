//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde_json::json;
use sha2::{Digest, Sha256};

use riesz_core::finite::{self, oracle, ExplicitSet, FiniteCarrier};
use riesz_core::sequence::{self, PolySequence};
use riesz_core::suite::{self, AuditOptions, Corpus, ManifestOutcome};
use riesz_core::topology::{self, AuditSubject, NeighborhoodSpec, Pseudonorm, PseudonormFamily};
use riesz_core::{sampling, Execution, RationalVector, SemanticsMode, SpaceSpec, Status};

type Outcome = Result<String, String>;

fn corpora() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpora")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lattice_identities() -> Outcome {
    let mut rng = sampling::rng(1);
    for i in 0..1000 {
        let dim = 1 + i % 6;
        let x = sampling::vector(&mut rng, dim, 100, 100);
        let (p, n, a) = (x.pos(), x.neg_part(), x.abs());
        ensure(&p - &n == x, || format!("x != x+ - x- at {x}"))?;
        ensure(&p + &n == a, || format!("|x| != x+ + x- at {x}"))?;
        ensure(x.sup(&-&x).unwrap() == a, || format!("|x| != x v -x at {x}"))?;
        let (u, v) = sampling::disjoint_pair(&mut rng, dim, 100, 100);
        ensure(u.is_disjoint(&v).unwrap(), || format!("sampler gave non-disjoint {u}, {v}"))?;
        ensure((&u + &v).abs() == &u.abs() + &v.abs(), || format!("|u+v| != |u|+|v| at {u}, {v}"))?;
    }
    Ok("1000 vectors and 1000 disjoint pairs, 0 failures".into())
}

fn shipped_pseudonorms() -> Vec<(usize, Pseudonorm)> {
    vec![
        (1, Pseudonorm::coord(0)),
        (3, Pseudonorm::coord(2)),
        (2, Pseudonorm::l1(&[1, 1])),
        (4, Pseudonorm::l1(&[0, 3, 1, 0])),
        (2, Pseudonorm::sup(&[2, 1])),
        (6, Pseudonorm::sup(&[1, 0, 0, 5, 1, 1])),
    ]
}

fn pseudonorm_audit() -> Outcome {
    let mut rng = sampling::rng(2);
    for (dim, rho) in shipped_pseudonorms() {
        let v = topology::audit_shipped(&rho, dim, 500, &mut rng).map_err(|e| e.to_string())?;
        ensure(v.status == Status::Holds, || format!("{rho:?}: {}", v.witness))?;
    }
    // x ↦ x₀ is linear, not a pseudonorm.
    let map = |x: &RationalVector| x.get(0).clone();
    let control = AuditSubject::Opaque { name: "first-coordinate", map: &map };
    let samples: Vec<_> = (0..500)
        .map(|_| (sampling::vector(&mut rng, 2, 100, 100), sampling::vector(&mut rng, 2, 100, 100)))
        .collect();
    let v = topology::audit_pseudonorm_axioms(&control, 2, &samples, &topology::default_scalars())
        .map_err(|e| e.to_string())?;
    ensure(v.status == Status::Counterexample && !v.witness.is_null(), || {
        format!("control map was not rejected: {:?}", v.status)
    })?;
    Ok(format!("6 shipped pseudonorms x 500 pairs hold; control fails on {}", v.witness["axiom"]))
}

fn base_audit() -> Outcome {
    let family = PseudonormFamily::new(2, vec![Pseudonorm::coord(0), Pseudonorm::l1(&[1, 2]), Pseudonorm::sup(&[0, 1])])
        .map_err(|e| e.to_string())?;
    let mut rng = sampling::rng(3);
    let specs: Vec<_> = (0..100)
        .map(|_| {
            use rand::Rng;
            let k = rng.gen_range(1..=3);
            let c = (0..k)
                .map(|_| (rng.gen_range(0..3), sampling::positive_rational(&mut rng, 5, 4)))
                .collect();
            NeighborhoodSpec::new(c).unwrap()
        })
        .collect();
    let witnesses = topology::audit_base_axioms(&family, &specs, 3).map_err(|e| e.to_string())?;
    let failed: Vec<_> = witnesses.iter().filter(|w| !w.holds).collect();
    ensure(failed.is_empty(), || format!("{} failures, first {}", failed.len(), json!(failed[0])))?;
    Ok(format!("100 specs, {} witnesses verified", witnesses.len()))
}

fn all_carriers(name: &str, space: &Arc<SpaceSpec>, grid: &[RationalVector]) -> Vec<FiniteCarrier> {
    ExplicitSet::all_subsets(grid.len())
        .skip(1)
        .map(|s| {
            let pts = s.indices().map(|i| grid[i].clone()).collect();
            FiniteCarrier::new(format!("{name}{:?}", s.indices().collect::<Vec<_>>()), pts, space.clone()).unwrap()
        })
        .collect()
}

fn finite_oracle_equivalence() -> Outcome {
    let line = Arc::new(SpaceSpec::new(PseudonormFamily::new(1, vec![Pseudonorm::coord(0)]).unwrap()));
    let plane = Arc::new(SpaceSpec::new(
        PseudonormFamily::new(2, vec![Pseudonorm::l1(&[1, 1]), Pseudonorm::sup(&[0, 2])]).unwrap(),
    ));
    let v = |s: &str| s.parse::<RationalVector>().unwrap();
    let mut carriers = all_carriers("line", &line, &["[-1]", "[0]", "[1/2]", "[1]", "[2]", "[-3/2]"].map(v));
    carriers.extend(all_carriers("plane", &plane, &["[0,0]", "[1,0]", "[0,1]", "[1,-1]", "[-1/2,1/2]", "[2,2]"].map(v)));
    let counts = Execution::Parallel.try_map(&carriers, |c| -> Result<u64, String> {
        let mut n = 0;
        for mode in SemanticsMode::ALL {
            for e in c.points() {
                let traces = oracle::qualifying_traces(c, e, mode).map_err(|e| e.to_string())?;
                for s in finite::all_principal_minsets(c, 6).map_err(|e| e.to_string())? {
                    n += 1;
                    let conv = finite::converges_finite(c, s, e, mode).map_err(|e| e.to_string())?;
                    let cl = finite::cluster_finite(c, s, e, mode).map_err(|e| e.to_string())?;
                    ensure(conv == oracle::converges_by_subfilter(s, &traces), || {
                        format!("convergence disagrees on {} {s:?} {e} {mode}", c.name())
                    })?;
                    ensure(cl == oracle::cluster_by_enumeration(s, c.len(), &traces), || {
                        format!("cluster disagrees on {} {s:?} {e} {mode}", c.name())
                    })?;
                }
            }
        }
        Ok(n)
    })?;
    Ok(format!("{} carriers, {} instances, 100% agreement", carriers.len(), counts.iter().sum::<u64>()))
}

const NETFILTER_CORPUS: &str = r#"{
  "version": 1,
  "seed": 5,
  "claims": ["THM-NETFILTER"],
  "spaces": {
    "line": {"dim": 1, "pseudonorms": [{"kind": "coord", "j": 0}]},
    "plane": {"dim": 2, "pseudonorms": [{"kind": "l1", "w": ["1", "1"]}, {"kind": "sup", "w": ["0", "2"]}]}
  },
  "carriers": {
    "one": {"space": "line", "points": [["0"]]},
    "two": {"space": "line", "points": [["-1"], ["0"]]},
    "three": {"space": "line", "points": [["0"], ["1/2"], ["1"]]},
    "four": {"space": "line", "points": [["-1"], ["0"], ["1"], ["2"]]},
    "plane-four": {"space": "plane", "points": [["0", "0"], ["1", "0"], ["0", "1"], ["1", "-1"]]}
  },
  "random_sequences": {"count": 200, "max_dim": 3, "max_degree": 3}
}"#;

fn net_filter_theorem() -> Outcome {
    let corpus = Corpus::from_bytes(NETFILTER_CORPUS.as_bytes()).map_err(|e| e.to_string())?;
    let report = suite::run_audit(&corpus, &AuditOptions::default()).map_err(|e| e.to_string())?;
    let mut total = 0;
    for c in &report.claims {
        ensure(c.status == Status::Holds && c.oracle_mismatches == 0, || {
            format!("{} [{}]: {} {}", c.id, c.mode, c.status, json!(c.verdict().witness))
        })?;
        total += c.instances;
    }
    ensure(report.claims.len() == 2, || "expected one entry per mode".into())?;
    Ok(format!("{total} net/sequence instances over both modes agree"))
}

fn load_default() -> Result<(Corpus, Vec<u8>), String> {
    let corpus = Corpus::load(&corpora().join("default.json")).map_err(|e| e.to_string())?;
    let manifest = corpus.manifest.clone().ok_or("default corpus names no manifest")?;
    let bytes = std::fs::read(&manifest).map_err(|e| format!("{}: {e}", manifest.display()))?;
    Ok((corpus, bytes))
}

fn frozen_manifest() -> Outcome {
    let (corpus, manifest) = load_default()?;
    let report = suite::run_audit(&corpus, &AuditOptions::default()).map_err(|e| e.to_string())?;
    match report.compare_with_manifest(&manifest)? {
        ManifestOutcome::Match => {}
        ManifestOutcome::Mismatch(d) => return Err(d.join("; ")),
    }
    ensure(report.to_json().as_bytes() == manifest.as_slice(), || "not byte-identical".into())?;

    // (a) PROP3 under ZeroNbhd on a 1-D carrier containing {-1, 0}.
    let prop3 = report.claim("PROP3", "zero").ok_or("PROP3 missing")?;
    let found = prop3.counterexamples.iter().any(|w| {
        let c = corpus.carrier(w["carrier"].as_str().unwrap_or_default());
        c.is_some_and(|c| {
            c.space().dim() == 1
                && c.index_of(&RationalVector::from_ints(&[-1])).is_some()
                && c.index_of(&RationalVector::from_ints(&[0])).is_some()
        }) && w["target"] == json!(["0"])
    });
    ensure(prop3.status == Status::Counterexample && found, || "PROP3 instance on {-1, 0} missing".into())?;

    // (b) The constant zero sequence converges to [1] under ZeroNbhd only.
    let cor = report.claim("COR-PSEUDO", "zero").ok_or("COR-PSEUDO missing")?;
    let w = cor
        .counterexamples
        .iter()
        .find(|w| w["coeffs"] == json!([[]]) && w["point"] == json!(["1"]))
        .ok_or("constant-sequence divergence instance missing")?;
    let seq: &Arc<PolySequence> = corpus.sequence(w["sequence"].as_str().unwrap()).unwrap();
    let e = RationalVector::from_ints(&[1]);
    let zero = sequence::filter_converges_seq(seq, &e, SemanticsMode::ZeroNbhd).map_err(|e| e.to_string())?;
    let translated = sequence::filter_converges_seq(seq, &e, SemanticsMode::Translated).map_err(|e| e.to_string())?;
    ensure(zero && !translated, || "divergence instance does not split the modes".into())?;

    // (c) Remarks (i), (ii) and the cluster theorem hold in both modes.
    for id in ["REM1", "REM2", "THM-CLUSTER"] {
        for mode in ["zero", "translated"] {
            let c = report.claim(id, mode).ok_or(format!("{id} [{mode}] missing"))?;
            ensure(c.status == Status::Holds, || format!("{id} [{mode}] is {}", c.status))?;
        }
    }
    Ok(format!("manifest reproduced byte-for-byte ({} entries)", report.claims.len()))
}

fn determinism() -> Outcome {
    let (corpus, _) = load_default()?;
    let digest = |exec| -> Result<String, String> {
        let options = AuditOptions { execution: exec, ..AuditOptions::default() };
        let r = suite::run_audit(&corpus, &options).map_err(|e| e.to_string())?;
        Ok(hex::encode(Sha256::digest(r.to_json())))
    };
    let a = digest(Execution::Parallel)?;
    let b = digest(Execution::Parallel)?;
    ensure(a == b, || format!("{a} != {b}"))?;
    Ok(format!("two runs hash to {}", &a[..16]))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 7] = [
        ("lattice identities", lattice_identities, Duration::from_secs(5)),
        ("pseudonorm axiom audit", pseudonorm_audit, Duration::from_secs(5)),
        ("neighborhood-base audit", base_audit, Duration::from_secs(10)),
        ("finite oracle equivalence", finite_oracle_equivalence, Duration::from_secs(60)),
        ("net/filter theorem", net_filter_theorem, Duration::from_secs(120)),
        ("frozen manifest", frozen_manifest, Duration::from_secs(300)),
        ("determinism", determinism, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > budget => Err(format!("{msg}; took {took:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("criterion {}: PASS  {name} ({took:.2?}): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({took:.2?}): {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
