use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use udword::backends::{
    eval_word, series_solve_word, ut_solve_word, GroupBackend, NCSeries, SeriesBackend, UtBackend,
};
use udword::modp::{prime_profile_with, DEFAULT_P_MAX, DEFAULT_P_MIN, DEFAULT_SMALL_PRIME_CUTOFF};
use udword::par::Execution;
use udword::radical::{evaluate, riccati_alt, solve_decomposable};
use udword::survey::{
    classify_with, counterexample_pipeline, run_survey, summarize, write_csv, write_jsonl, ScanOptions, SurveyVerdict,
};
use udword::wordpoly::word_polynomial;
use udword::{decompose, Error, Word};

const EXIT_USAGE: u8 = 1;
const EXIT_UNRESOLVED: u8 = 2;

#[derive(Parser)]
#[command(name = "udword", version, about = "Word equations w(X, A) = B over uniquely divisible groups")]
struct Cli {
    /// Run single-threaded.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct PrimeRange {
    #[arg(long, default_value_t = DEFAULT_P_MIN)]
    pmin: u64,
    #[arg(long, default_value_t = DEFAULT_P_MAX)]
    pmax: u64,
    /// Exceptional primes up to this bound are tolerated.
    #[arg(long, default_value_t = DEFAULT_SMALL_PRIME_CUTOFF)]
    cutoff: u64,
}

impl PrimeRange {
    fn options(self) -> ScanOptions {
        ScanOptions {
            p_min: self.pmin,
            p_max: self.pmax,
            cutoff: self.cutoff,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide decomposability, then fall back to mod-p evidence and certificates.
    Classify {
        word: String,
        #[command(flatten)]
        range: PrimeRange,
        #[arg(long)]
        json: bool,
    },
    /// Print a decomposition witness and the radical solution.
    Decompose {
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Print the word polynomial.
    Poly {
        word: String,
        /// Substitute x -> x^2, y -> y^2.
        #[arg(long)]
        squared: bool,
        #[arg(long)]
        json: bool,
    },
    /// Look for nonzero zeros of P_w(x^2, y^2) modulo each prime in range.
    Scan {
        word: String,
        #[arg(long, default_value_t = DEFAULT_P_MIN)]
        pmin: u64,
        #[arg(long, default_value_t = DEFAULT_P_MAX)]
        pmax: u64,
        /// Write the per-prime CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Build a finite group in which w(X, a) = b has no solution.
    Counterexample {
        word: String,
        #[arg(long, default_value_t = DEFAULT_P_MIN)]
        pmin: u64,
        #[arg(long)]
        json: bool,
    },
    /// Solve w(X, A) = B exactly with unipotent matrices or truncated series.
    Solve {
        word: String,
        /// `ut:<dim>` or `series:<degree>`.
        #[arg(long, default_value = "ut:3")]
        backend: BackendSpec,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON file holding A (otherwise random from the seed).
        #[arg(long)]
        a: Option<PathBuf>,
        /// JSON file holding B (otherwise random from the seed).
        #[arg(long)]
        b: Option<PathBuf>,
        /// Series only: take A = 1 + a, B = 1 + b.
        #[arg(long)]
        generic: bool,
        #[arg(long)]
        json: bool,
    },
    /// Classify every word of bounded length that begins and ends with X.
    Survey {
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        #[command(flatten)]
        range: PrimeRange,
        /// JSON-lines output; a CSV summary goes next to it. Stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug)]
enum BackendSpec {
    Ut(usize),
    Series(usize),
}

impl FromStr for BackendSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, n) = s.split_once(':').ok_or("expected ut:<dim> or series:<degree>")?;
        let n: usize = n.parse().map_err(|_| format!("bad size {n:?}"))?;
        match kind {
            "ut" if (1..=12).contains(&n) => Ok(BackendSpec::Ut(n)),
            "series" if (1..=udword::backends::MAX_SERIES_DEGREE).contains(&n) => Ok(BackendSpec::Series(n)),
            "ut" | "series" => Err(format!("size {n} out of range")),
            _ => Err(format!("unknown backend {kind:?}")),
        }
    }
}

fn parse_word(text: &str) -> Result<Word, String> {
    text.parse::<Word>().map_err(|e| {
        let pos = e.position.min(text.len());
        format!("{e}\n  {text}\n  {}^", " ".repeat(pos))
    })
}

fn print_json(v: &serde_json::Value) -> Result<(), Error> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn print_serializable<T: serde::Serialize>(v: &T) -> Result<(), Error> {
    print_json(&serde_json::to_value(v)?)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    match run(cli.command, exec) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cmd: Command, exec: Execution) -> Result<ExitCode, String> {
    let err = |e: Error| e.to_string();
    match cmd {
        Command::Classify { word, range, json } => {
            let w = parse_word(&word)?;
            let c = classify_with(&w, &range.options(), exec).map_err(err)?;
            if json {
                print_serializable(&c).map_err(err)?;
            } else {
                println!("word: {}", c.word);
                match (&c.witness, &c.solution) {
                    (Some(wit), Some(sol)) => {
                        println!("totally decomposable: {wit}");
                        println!("X = {sol}");
                    }
                    _ => {
                        println!("not totally decomposable");
                        if let Some(p) = &c.profile {
                            println!("exceptional primes in [{}, {}]: {:?}", p.range.0, p.range.1, p.exceptional);
                        }
                        match &c.certificate {
                            Some(r) => {
                                let params: Vec<String> = r.params.iter().map(u32::to_string).collect();
                                let verdict = serde_json::to_value(r.verdict).map_err(|e| e.to_string())?;
                                println!("certificate {:?}({}): {}", r.family, params.join(","), verdict.as_str().unwrap_or("?"));
                            }
                            None => println!("no family certificate applies"),
                        }
                    }
                }
                println!("verdict: {}", c.verdict.as_str());
            }
        }
        Command::Decompose { word, json } => {
            let w = parse_word(&word)?;
            let witness = decompose(&w);
            if json {
                let solution = witness.as_ref().map(|wit| solve_decomposable(wit).render());
                print_json(&json!({ "word": w, "witness": witness, "solution": solution })).map_err(err)?;
            } else {
                match witness {
                    Some(wit) => {
                        println!("{w} = {wit}");
                        println!("X = {}", solve_decomposable(&wit));
                    }
                    None => println!("{w} is not totally decomposable"),
                }
            }
        }
        Command::Poly { word, squared, json } => {
            let w = parse_word(&word)?;
            let mut p = word_polynomial(&w);
            if squared {
                p = p.substitute_squares();
            }
            if json {
                print_json(&json!({ "word": w, "squared": squared, "polynomial": p })).map_err(err)?;
            } else {
                println!("{p}");
            }
        }
        Command::Scan { word, pmin, pmax, out, json } => {
            let w = parse_word(&word)?;
            let profile = prime_profile_with(&w, pmin, pmax, exec).map_err(err)?;
            if let Some(path) = out {
                std::fs::write(&path, profile.csv_summary()).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            if json {
                for row in profile.json_rows().map_err(err)? {
                    println!("{row}");
                }
            } else {
                let solvable = profile.entries.iter().filter(|e| e.solvable).count();
                println!("{w}: {} primes in [{pmin}, {pmax}], {solvable} with a nonzero zero", profile.entries.len());
                println!("exceptional: {:?}", profile.exceptional);
            }
        }
        Command::Counterexample { word, pmin, json } => {
            let w = parse_word(&word)?;
            let report = counterexample_pipeline(&w, pmin, exec).map_err(err)?;
            if json {
                print_serializable(&report).map_err(err)?;
            } else {
                for line in report.transcript() {
                    println!("{line}");
                }
            }
            if !report.no_solution_verified {
                return Err("verification failed: the target has a solution".into());
            }
        }
        Command::Solve { word, backend, seed, a, b, generic, json } => {
            let w = parse_word(&word)?;
            let report = match backend {
                BackendSpec::Ut(dim) => {
                    let be = UtBackend { dim };
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let a = load_or(a.as_deref(), || be.random_element(&mut rng))?;
                    let b = load_or(b.as_deref(), || be.random_element(&mut rng))?;
                    for m in [&a, &b] {
                        if m.dim() != dim {
                            return Err(format!("instance has dimension {}, backend expects {dim}", m.dim()));
                        }
                    }
                    let x = ut_solve_word(&w, &a, &b).map_err(err)?;
                    solve_report(&be, &w, a, b, x)?
                }
                BackendSpec::Series(degree) => {
                    let be = SeriesBackend { degree };
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let (da, db) = if generic { (be.a(), be.b()) } else { (be.random_element(&mut rng), be.random_element(&mut rng)) };
                    let a: NCSeries = load_or(a.as_deref(), || da)?;
                    let b: NCSeries = load_or(b.as_deref(), || db)?;
                    for s in [&a, &b] {
                        if s.degree() != degree {
                            return Err(format!("instance has degree {}, backend expects {degree}", s.degree()));
                        }
                    }
                    let x = series_solve_word(&w, &a, &b).map_err(err)?;
                    solve_report(&be, &w, a, b, x)?
                }
            };
            if json {
                print_json(&report.json).map_err(err)?;
            } else {
                for line in &report.lines {
                    println!("{line}");
                }
            }
            if !report.ok {
                return Err("solution check failed".into());
            }
        }
        Command::Survey { max_len, range, out } => {
            let rows = run_survey(max_len, &range.options(), exec).map_err(err)?;
            match &out {
                Some(path) => {
                    let f = File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
                    write_jsonl(&rows, BufWriter::new(f)).map_err(err)?;
                    let csv_path = path.with_extension("csv");
                    let f = File::create(&csv_path).map_err(|e| format!("{}: {e}", csv_path.display()))?;
                    write_csv(&rows, BufWriter::new(f)).map_err(err)?;
                }
                None => write_jsonl(&rows, io::stdout().lock()).map_err(err)?,
            }
            let s = summarize(&rows);
            eprintln!(
                "{} words: {} decomposable, {} evidence-not-universal, {} unresolved",
                s.total, s.decomposable, s.evidence_not_universal, s.unresolved
            );
            for r in rows.iter().filter(|r| r.verdict == SurveyVerdict::Unresolved) {
                eprintln!("unresolved: {} (exceptional primes {:?})", r.word, r.exceptional_primes);
            }
            if s.unresolved > 0 {
                return Ok(ExitCode::from(EXIT_UNRESOLVED));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn load_or<T: serde::de::DeserializeOwned>(path: Option<&Path>, default: impl FnOnce() -> T) -> Result<T, String> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", p.display()))
        }
        None => Ok(default()),
    }
}

struct SolveReport {
    ok: bool,
    lines: Vec<String>,
    json: serde_json::Value,
}

fn solve_report<G>(be: &G, w: &Word, a: G::Elem, b: G::Elem, x: G::Elem) -> Result<SolveReport, String>
where
    G: GroupBackend,
    G::Elem: serde::Serialize + std::fmt::Display,
{
    let check = be.same(&eval_word(be, w, &x, &a), &b);
    let mut lines = vec![
        format!("backend {}", be.name()),
        format!("A =\n{a}"),
        format!("B =\n{b}"),
        format!("X =\n{x}"),
        format!("w(X, A) = B: {}", if check { "verified" } else { "FAILED" }),
    ];
    let mut ok = check;
    let mut formulas = Vec::new();
    if let Some(wit) = decompose(w) {
        let mut candidates = vec![solve_decomposable(&wit)];
        if w.render() == "XAX" {
            candidates.push(riccati_alt());
        }
        for e in candidates {
            let agrees = evaluate(&e, be, &a, &b).map(|v| be.same(&v, &x)).unwrap_or(false);
            ok &= agrees;
            lines.push(format!("{e}: {}", if agrees { "agrees" } else { "DISAGREES" }));
            formulas.push(json!({ "formula": e.render(), "agrees": agrees }));
        }
    }
    let json = json!({
        "word": w,
        "backend": be.name(),
        "a": a,
        "b": b,
        "x": x,
        "verified": check,
        "formulas": formulas,
    });
    Ok(SolveReport { ok, lines, json })
}
