use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use riesz_core::filter::{self, Filter, FilterBase, QuerySet};
use riesz_core::sequence;
use riesz_core::suite::{self, AuditOptions, Corpus, CorpusError, ManifestOutcome};
use riesz_core::topology;
use riesz_core::{Execution, RationalVector, SemanticsMode, Status};

#[derive(Parser)]
#[command(name = "riesz-audit", version, about = "Audit filter convergence claims over a corpus file")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every selected claim check and compare with the corpus manifest.
    Audit {
        corpus: PathBuf,
        #[arg(long, value_enum, default_value_t = Semantics::Both)]
        semantics: Semantics,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        report: ReportFormat,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the corpus seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Run on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Decide whether a declared filter converges to a point.
    Converge {
        corpus: PathBuf,
        #[arg(long)]
        filter: String,
        /// A vector such as "[1,-1/2]".
        #[arg(long)]
        point: String,
        #[arg(long, value_enum, default_value_t = Mode::Zero)]
        semantics: Mode,
    },
    /// Audit the pseudonorms, neighborhood bases, filter bases and net indexes of a corpus.
    Axioms { corpus: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Semantics {
    Zero,
    Translated,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Zero,
    Translated,
}

impl From<Mode> for SemanticsMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Zero => SemanticsMode::ZeroNbhd,
            Mode::Translated => SemanticsMode::Translated,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

/// Exit status 2: unreadable input or bad usage.
struct InputError(String);

impl From<CorpusError> for InputError {
    fn from(e: CorpusError) -> Self {
        InputError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Audit {
            corpus,
            semantics,
            report,
            out,
            seed,
            sequential,
        } => audit(&corpus, semantics, report, out.as_deref(), seed, sequential),
        Command::Converge {
            corpus,
            filter,
            point,
            semantics,
        } => converge(&corpus, &filter, &point, semantics.into()),
        Command::Axioms { corpus } => axioms(&corpus),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path, seed: Option<u64>) -> Result<Corpus, InputError> {
    match seed {
        None => Ok(Corpus::load(path)?),
        Some(seed) => {
            let bytes = std::fs::read(path).map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
            let mut corpus = Corpus::reseed(&bytes, seed)?;
            // Keep the manifest path resolution of `Corpus::load`.
            corpus.manifest = Corpus::load(path)?.manifest;
            Ok(corpus)
        }
    }
}

fn audit(
    path: &Path,
    semantics: Semantics,
    format: ReportFormat,
    out: Option<&Path>,
    seed: Option<u64>,
    sequential: bool,
) -> Result<u8, InputError> {
    let corpus = load(path, seed)?;
    let modes = match semantics {
        Semantics::Zero => vec![SemanticsMode::ZeroNbhd],
        Semantics::Translated => vec![SemanticsMode::Translated],
        Semantics::Both => SemanticsMode::ALL.to_vec(),
    };
    let options = AuditOptions {
        modes,
        execution: if sequential { Execution::Sequential } else { Execution::Parallel },
    };
    let report = suite::run_audit(&corpus, &options)?;
    let rendered = match format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Text => report.to_text(),
    };
    match out {
        Some(p) => std::fs::write(p, &rendered).map_err(|e| InputError(format!("cannot write {}: {e}", p.display())))?,
        None => print!("{rendered}"),
    }

    let Some(manifest) = &corpus.manifest else {
        return Ok(u8::from(report.has_oracle_mismatch()));
    };
    let bytes = match std::fs::read(manifest) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("manifest {} not readable ({e}); nothing to compare", manifest.display());
            return Ok(1);
        }
    };
    match report.compare_with_manifest(&bytes).map_err(InputError)? {
        ManifestOutcome::Match => Ok(0),
        ManifestOutcome::Mismatch(diffs) => {
            eprintln!("report differs from {}:", manifest.display());
            for d in diffs {
                eprintln!("  {d}");
            }
            Ok(1)
        }
    }
}

fn converge(path: &Path, id: &str, point: &str, mode: SemanticsMode) -> Result<u8, InputError> {
    let corpus = load(path, None)?;
    let f = corpus
        .filters
        .get(id)
        .ok_or_else(|| InputError(format!("unknown filter {id:?}")))?;
    let e: RationalVector = point
        .parse()
        .map_err(|e| InputError(format!("--point: {e}")))?;
    let bad = |e: riesz_core::FilterError| InputError(e.to_string());

    if let Some(carrier) = f.carrier() {
        match filter::convergence_witness(f, &e, mode).map_err(bad)? {
            None => {
                let nbhds = riesz_core::finite::enumerate_restricted_neighborhoods(&carrier, &e, mode).map_err(bad)?;
                let minimal = nbhds
                    .iter()
                    .fold(carrier.full(), |acc, n| acc.intersection(n.set));
                println!("true");
                println!("qualifying neighborhood sets: {}", nbhds.len());
                println!("minimal qualifying set: {}", json!(carrier.set_points(minimal)));
            }
            Some(n) => {
                println!("false");
                println!("witness: {}", n.to_json(&carrier));
            }
        }
        return Ok(0);
    }

    let converges = filter::converges(f, &e, mode).map_err(bad)?;
    println!("{converges}");
    if !converges {
        if let Filter::SequenceTail(seq) | Filter::Generated(FilterBase::SequenceTails(seq)) = f {
            for region in sequence::critical_test_regions(seq, &e, mode).map_err(bad)? {
                if !f.member(&QuerySet::Region(region.clone())).map_err(bad)? {
                    println!("witness: {}", json!({"region": region}));
                    break;
                }
            }
        }
    }
    Ok(0)
}

fn axioms(path: &Path) -> Result<u8, InputError> {
    let corpus = load(path, None)?;
    let mut failures = 0usize;
    let mut row = |kind: &str, subject: &str, ok: bool, detail: String| {
        if !ok {
            failures += 1;
        }
        println!("{:<12} {:<28} {:<5} {}", kind, subject, if ok { "pass" } else { "FAIL" }, detail);
    };

    let mut rng = riesz_core::sampling::rng(corpus.seed);
    for entry in &corpus.spaces {
        for (j, rho) in entry.space.family().members().iter().enumerate() {
            let v = topology::audit_shipped(rho, entry.space.dim(), corpus.bounds.pseudo_pairs, &mut rng)
                .map_err(|e| InputError(e.to_string()))?;
            let detail = if v.status == Status::Holds { String::new() } else { v.witness.to_string() };
            row("pseudonorm", &format!("{}[{j}]", entry.id), v.status == Status::Holds, detail);
        }
    }

    for entry in &corpus.spaces {
        let specs: Vec<_> = corpus
            .neighborhoods
            .iter()
            .filter(|(_, s, _)| **s == *entry.space)
            .map(|(_, _, spec)| spec.clone())
            .collect();
        if specs.is_empty() {
            continue;
        }
        let witnesses = topology::audit_base_axioms(entry.space.family(), &specs, corpus.seed)
            .map_err(|e| InputError(e.to_string()))?;
        for w in witnesses {
            let detail = w.failure.clone().map(|f| f.to_string()).unwrap_or_default();
            let axiom = serde_json::to_value(w.axiom).unwrap_or_default();
            row("base", &format!("{} {}", entry.id, axiom.as_str().unwrap_or("?")), w.holds, detail);
        }
    }

    for (id, f) in &corpus.filters {
        if let Filter::Generated(base) = f {
            let v = filter::validate_base(base);
            let ok = v.status == Status::Holds;
            row("filter-base", id, ok, if ok { String::new() } else { v.witness.to_string() });
        }
    }

    for (id, net) in &corpus.nets {
        match net.index().directedness_witness() {
            None => row("net-index", id, true, String::new()),
            Some((a, b)) => row(
                "net-index",
                id,
                false,
                format!("{a} and {b} have no common upper bound"),
            ),
        }
    }

    if failures > 0 {
        println!("{failures} failing check(s)");
        Ok(1)
    } else {
        Ok(0)
    }
}
