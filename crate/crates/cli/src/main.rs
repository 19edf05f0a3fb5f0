use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use fpverify::certificate::{search_certificate, verify_certificate, verify_derivation, Certificate, Derivation, NotFound};
use fpverify::coset_proof::{prove_words, ProofError};
use fpverify::corpus::{list_scenarios, CertificateFile};
use fpverify::presentation::simplify;
use fpverify::{
    enumerate, homology_h1, parse_presentation_with, parse_relation, parse_word, run_scenarios, CommutatorConvention,
    EnumerationStatus, Presentation, RunOptions, SearchBound, Strategy,
};
use serde_json::{json, Value};

const PASS: u8 = 0;
const MISMATCH: u8 = 1;
const INPUT: u8 = 2;
const LIMIT: u8 = 3;

/// Checks claims about finitely presented groups.
#[derive(Parser)]
#[command(name = "fpverify", version, about)]
struct Cli {
    /// How commutator brackets expand: `default` is [u,v]=uvu^-1v^-1,
    /// `gap` is u^-1v^-1uv.
    #[arg(long, global = true, default_value = "default")]
    convention: CommutatorConvention,

    /// Upper bound on live cosets for every enumeration.
    #[arg(long, global = true, env = "FPVERIFY_MAX_COSETS", default_value_t = fpverify::coset::DEFAULT_MAX_COSETS)]
    max_cosets: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a presentation file and print it in canonical form.
    Parse {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run Todd-Coxeter coset enumeration.
    Tc {
        path: PathBuf,
        #[arg(long, default_value = "hlt-lookahead")]
        strategy: Strategy,
        /// Subgroup generator; repeat for several.
        #[arg(long)]
        subgroup: Vec<String>,
    },
    /// Compute the abelianization H1.
    Abelianize { path: PathBuf },
    /// Apply greedy Tietze simplification.
    Simplify {
        path: PathBuf,
        /// Maximum number of moves.
        #[arg(long, default_value_t = 100)]
        budget: usize,
        #[arg(long)]
        json: bool,
    },
    /// Find or check consequence certificates.
    Certify(CertifyArgs),
    /// Replay bundled scenarios against their expectations.
    Verify {
        /// Scenario id; repeat for several.
        #[arg(long, conflicts_with_all = ["all", "list"])]
        scenario: Vec<String>,
        #[arg(long)]
        all: bool,
        /// Print the registered scenarios and exit.
        #[arg(long)]
        list: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct CertifyArgs {
    path: PathBuf,
    /// Relation to certify, such as `[q,c] = 1`; repeat for several.
    #[arg(long, required_unless_present = "check")]
    target: Vec<String>,
    /// Verify a certificate, derivation or certificate file instead.
    #[arg(long, conflicts_with = "target")]
    check: Option<PathBuf>,
    #[arg(long, default_value_t = 12)]
    max_factors: usize,
    #[arg(long)]
    max_conjugator_len: Option<usize>,
    #[arg(long, default_value_t = 24)]
    max_word_len: usize,
    #[arg(long, default_value_t = 200_000)]
    max_nodes: usize,
    /// When search fails, derive the target from a coset enumeration.
    #[arg(long)]
    enumerate: bool,
}

// Output goes through these so a closed pipe (`| head`) is not a panic.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout().lock(), $($t)*);
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

/// An error carrying the exit code it maps to.
struct Failure(u8, anyhow::Error);

fn input(e: impl Into<anyhow::Error>) -> Failure {
    Failure(INPUT, e.into())
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let conv = cli.convention;
    match &cli.command {
        Command::Parse { path, json } => {
            let p = load(path, conv)?;
            outln!("{}", if *json { p.to_json() } else { p.to_text() });
            Ok(PASS)
        }
        Command::Tc { path, strategy, subgroup } => {
            let p = load(path, conv)?;
            let words = subgroup
                .iter()
                .map(|w| parse_word(w, p.generators(), conv).with_context(|| format!("subgroup word `{w}`")))
                .collect::<Result<Vec<_>, _>>()
                .map_err(input)?;
            let r = enumerate(&p, &words, *strategy, cli.max_cosets).map_err(input)?;
            let mut out: Value = serde_json::from_str(&r.to_json()).expect("valid JSON");
            out["convention"] = json!(conv);
            out["presentation"] = json!(p.name());
            outln!("{}", serde_json::to_string_pretty(&out).expect("valid JSON"));
            Ok(if r.status == EnumerationStatus::Completed { PASS } else { LIMIT })
        }
        Command::Abelianize { path } => {
            let p = load(path, conv)?;
            outln!("{}", homology_h1(&p).to_json());
            Ok(PASS)
        }
        Command::Simplify { path, budget, json } => {
            let p = load(path, conv)?;
            let (q, moves) = simplify(&p, *budget);
            if *json {
                let out = json!({
                    "presentation": serde_json::from_str::<Value>(&q.to_json()).expect("valid JSON"),
                    "moves": moves,
                });
                outln!("{}", serde_json::to_string_pretty(&out).expect("valid JSON"));
            } else {
                outln!("{}", q.to_text());
                eprintln!("{} moves", moves.len());
            }
            Ok(PASS)
        }
        Command::Certify(args) => certify(args, conv, cli.max_cosets),
        Command::Verify { scenario, all, list, json } => {
            if *list {
                for s in list_scenarios() {
                    outln!("{:<22} {}", s.id, s.summary);
                }
                return Ok(PASS);
            }
            if scenario.is_empty() && !all {
                return Err(input(anyhow!("pass --scenario <id>, --all or --list")));
            }
            let opts = RunOptions { convention: conv, max_cosets: cli.max_cosets, ..RunOptions::default() };
            let ids: Vec<&str> = scenario.iter().map(String::as_str).collect();
            let report = run_scenarios(&ids, &opts).map_err(input)?;
            if *json {
                outln!("{}", report.to_json());
            } else {
                out!("{}", report.to_text());
            }
            Ok(report.outcome.exit_code() as u8)
        }
    }
}

fn load(path: &Path, conv: CommutatorConvention) -> Result<Presentation, Failure> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).map_err(input)?;
    parse_presentation_with(&text, conv).with_context(|| path.display().to_string()).map_err(input)
}

fn certify(args: &CertifyArgs, conv: CommutatorConvention, max_cosets: usize) -> Outcome {
    let p = load(&args.path, conv)?;
    if let Some(file) = &args.check {
        return check_file(&p, file);
    }
    let bound = SearchBound::new(args.max_factors, args.max_conjugator_len)
        .with_word_len(args.max_word_len)
        .with_nodes(args.max_nodes);
    let mut results = Vec::new();
    let mut code = PASS;
    for relation in &args.target {
        let words = parse_relation(relation, p.generators(), conv)
            .with_context(|| format!("target `{relation}`"))
            .map_err(input)?;
        for w in words {
            let found = search_certificate(&p, &w, bound);
            let entry = match found {
                Ok(c) => json!({"relation": relation, "certificate": c}),
                Err(NotFound::ExponentObstruction) => {
                    code = code.max(MISMATCH);
                    json!({"relation": relation, "refuted": "exponent sums are not in the span of the relators"})
                }
                Err(miss) if args.enumerate => match prove_words(&p, std::slice::from_ref(&w), max_cosets) {
                    Ok(mut d) => json!({"relation": relation, "derivation": d.remove(0)}),
                    Err(ProofError::NotAConsequence { .. }) => {
                        code = code.max(MISMATCH);
                        json!({"relation": relation, "refuted": "acts nontrivially on the cosets of the trivial subgroup"})
                    }
                    Err(e) => {
                        code = code.max(LIMIT);
                        json!({"relation": relation, "not_found": format!("{miss:?}; {e}")})
                    }
                },
                Err(miss) => {
                    code = code.max(match miss {
                        NotFound::Budget { .. } => LIMIT,
                        _ => MISMATCH,
                    });
                    json!({"relation": relation, "not_found": format!("{miss:?}")})
                }
            };
            results.push(entry);
        }
    }
    let out = json!({"presentation": p.name(), "convention": conv, "results": results});
    outln!("{}", serde_json::to_string_pretty(&out).expect("valid JSON"));
    Ok(code)
}

/// Accepts a bare certificate, a derivation, or a scenario certificate file.
fn check_file(p: &Presentation, file: &Path) -> Outcome {
    let text = std::fs::read_to_string(file).with_context(|| format!("cannot read {}", file.display())).map_err(input)?;
    let results: Vec<bool> = if let Ok(c) = serde_json::from_str::<Certificate>(&text) {
        vec![verify_certificate(p, &c).map_err(input)?]
    } else if let Ok(d) = serde_json::from_str::<Derivation>(&text) {
        vec![verify_derivation(p, &d).map_err(input)?]
    } else if let Ok(f) = serde_json::from_str::<CertificateFile>(&text) {
        f.certificates
            .iter()
            .map(|c| verify_certificate(p, &c.certificate))
            .collect::<Result<_, _>>()
            .map_err(input)?
    } else {
        return Err(input(anyhow!("{} is not a certificate, derivation or certificate file", file.display())));
    };
    let ok = results.iter().all(|&b| b);
    outln!("{}", json!({"presentation": p.name(), "checked": results.len(), "valid": ok}));
    Ok(if ok { PASS } else { MISMATCH })
}
