use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use serde::Serialize;

use tourlink::anchoring::{anchor_order_bound, find_anchored_pair, AnchorSearch};
use tourlink::connectivity::vertex_connectivity;
use tourlink::exact::is_k_linked_bruteforce;
use tourlink::generate::{paley_tournament, random_terminals, random_tournament, rotational_tournament};
use tourlink::linker::{check_preconditions, run_link, LinkMode, LinkOptions, DEFAULT_ANCHOR_BUDGET};
use tourlink::verify::verify_linkage;
use tourlink::{Error, LinkageDocument, Tournament, Vertex};

#[derive(Parser)]
#[command(name = "tourlink", version, about = "Disjoint-path routing experiments on tournaments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Random,
    Rotational,
    Paley,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepKind {
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Strict,
    Unchecked,
}

impl From<Mode> for LinkMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Strict => LinkMode::Strict,
            Mode::Unchecked => LinkMode::Unchecked,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated tournament as TRN1.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long, env = "TOURLINK_SEED", default_value_t = 0)]
        seed: u64,
        /// Connection set for rotational tournaments, e.g. 1,2,4.
        #[arg(long, value_delimiter = ',')]
        symbols: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Degrees, connectivity and, with --k, the linkage thresholds.
    Info {
        file: PathBuf,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Link sources[i] to sinks[i] by disjoint paths.
    Link {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        sources: Vec<Vertex>,
        #[arg(long, value_delimiter = ',', required = true)]
        sinks: Vec<Vertex>,
        #[arg(long, value_enum, default_value = "strict")]
        mode: Mode,
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Node budget for the anchored-pair search.
        #[arg(long, default_value_t = DEFAULT_ANCHOR_BUDGET)]
        budget: u64,
    },
    /// Check a linkage JSON file against a tournament.
    Verify {
        file: PathBuf,
        #[arg(long)]
        linkage: PathBuf,
    },
    /// Search for disjoint X, Y of size p with X anchoring Y.
    Anchors {
        file: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Exhaustive k-linkedness test for small tournaments.
    Klinked {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        /// Lift the size guard.
        #[arg(long)]
        force: bool,
    },
    /// Seeded trials of the full pipeline.
    Sweep {
        #[arg(long, value_enum, default_value = "random")]
        kind: SweepKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, env = "TOURLINK_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "strict")]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_ANCHOR_BUDGET)]
        budget: u64,
    },
}

/// Failure with its exit code: 1 negative, 2 invalid input, 3 assertion violation.
#[derive(Debug)]
struct Fail {
    code: u8,
    msg: String,
}

impl Fail {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        Fail { code, msg: msg.into() }
    }

    fn input(e: impl std::fmt::Display) -> Self {
        Fail::new(2, e.to_string())
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidInput(_) | Error::Parse { .. } | Error::InstanceTooLarge(_) | Error::Io(_) => 2,
            Error::AssertionViolation { .. } | Error::LemmaViolation { .. } => 3,
            _ => 1,
        };
        Fail::new(code, e.to_string())
    }
}

impl From<anyhow::Error> for Fail {
    fn from(e: anyhow::Error) -> Self {
        Fail::new(2, format!("{e:#}"))
    }
}

type Outcome = Result<(), Fail>;

fn read_tournament(path: &FsPath) -> Result<Tournament, Fail> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Tournament::from_trn1(&text).map_err(|e| Fail::input(format!("{}: {e}", path.display())))
}

fn write_file(path: &FsPath, contents: &str) -> Result<(), Fail> {
    fs::write(path, contents)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Fail::from)
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

fn gen(kind: Kind, n: usize, seed: u64, symbols: &[usize], out: &FsPath) -> Outcome {
    let t = match kind {
        Kind::Random => random_tournament(n, seed)?,
        Kind::Rotational => {
            if symbols.is_empty() && n % 2 == 1 {
                rotational_tournament(n, &(1..=n / 2).collect::<Vec<_>>())?
            } else {
                rotational_tournament(n, symbols)?
            }
        }
        Kind::Paley => paley_tournament(n)?,
    };
    write_file(out, &t.to_trn1())?;
    println!(
        "n={} min_out={} max_out={}",
        t.n(),
        t.min_out_degree().unwrap_or(0),
        t.max_out_degree().unwrap_or(0)
    );
    Ok(())
}

fn info_cmd(file: &FsPath, k: Option<usize>) -> Outcome {
    let t = read_tournament(file)?;
    println!("n={}", t.n());
    println!("min_out={}", t.min_out_degree().unwrap_or(0));
    println!("min_in={}", t.min_in_degree().unwrap_or(0));
    match vertex_connectivity(&t) {
        Ok(kappa) => println!("connectivity={kappa}"),
        Err(_) => println!("connectivity=0"),
    }
    let Some(k) = k else { return Ok(()) };
    let report = check_preconditions(&t, k)?;
    println!("strong_threshold={} met={}", report.strong_threshold, report.k_strong);
    println!("degree_threshold={} met={}", report.degree_threshold, report.degree_ok);
    if report.ok() {
        Ok(())
    } else {
        Err(Fail::new(1, report.to_string()))
    }
}

fn link_cmd(
    file: &FsPath,
    sources: &[Vertex],
    sinks: &[Vertex],
    mode: Mode,
    trace_path: Option<&FsPath>,
    budget: u64,
) -> Outcome {
    let t = read_tournament(file)?;
    let opts = LinkOptions {
        mode: mode.into(),
        anchor_budget: Some(budget),
    };
    let start = Instant::now();
    let (result, trace) = run_link(&t, sources, sinks, opts);
    info!("link finished in {:.2?}", start.elapsed());
    if let Some(path) = trace_path {
        write_file(path, &trace.to_json())?;
    }
    let linkage = result.map_err(|e| match e {
        Error::PreconditionViolation(r) => Fail::new(1, format!("preconditions not met: {r}")),
        other => Fail::from(other),
    })?;
    println!("{}", LinkageDocument::from(&linkage).to_json());
    Ok(())
}

fn verify_cmd(file: &FsPath, linkage: &FsPath) -> Outcome {
    let t = read_tournament(file)?;
    let text = fs::read_to_string(linkage).with_context(|| format!("reading {}", linkage.display()))?;
    let doc = LinkageDocument::from_json(&text).map_err(Fail::input)?;
    match verify_linkage(&t, &doc.sources, &doc.sinks, &doc.paths).violation {
        None => {
            println!("ok");
            Ok(())
        }
        Some(v) => {
            println!("fail: {v}");
            Err(Fail::new(1, v.to_string()))
        }
    }
}

#[derive(Serialize)]
struct AnchorOutput {
    x: Vec<Vertex>,
    y: Vec<Vertex>,
    p: usize,
    candidates_examined: u64,
    nodes_visited: u64,
}

fn anchors_cmd(file: &FsPath, p: usize, budget: Option<u64>) -> Outcome {
    let t = read_tournament(file)?;
    match find_anchored_pair(&t, p, budget)? {
        AnchorSearch::Found(pair) => {
            print_json(&AnchorOutput {
                x: pair.x.iter().map(|&v| t.label(v)).collect(),
                y: pair.y.iter().map(|&v| t.label(v)).collect(),
                p,
                candidates_examined: pair.candidates_examined,
                nodes_visited: pair.nodes_visited,
            });
            Ok(())
        }
        AnchorSearch::BudgetExhausted { visited } => Err(Fail::new(
            1,
            format!("search budget exhausted after {visited} nodes"),
        )),
        AnchorSearch::Exhausted { lemma_violation: true } => Err(Fail::new(
            3,
            format!(
                "no anchored pair of size {p} although n={} >= {}",
                t.n(),
                anchor_order_bound(p)
            ),
        )),
        AnchorSearch::Exhausted { lemma_violation: false } => {
            Err(Fail::new(1, format!("no anchored pair of size {p} on {} vertices", t.n())))
        }
    }
}

fn klinked_cmd(file: &FsPath, k: usize, force: bool) -> Outcome {
    let t = read_tournament(file)?;
    let report = is_k_linked_bruteforce(&t, k, force)?;
    if report.linked {
        println!("linked");
        return Ok(());
    }
    let witness = report.witness.unwrap_or_default();
    let text = witness.iter().map(|(s, z)| format!("({s},{z})")).collect::<Vec<_>>().join(" ");
    println!("not linked: {text}");
    Err(Fail::new(1, format!("not {k}-linked")))
}

#[derive(Default)]
struct SweepTotals {
    trials: usize,
    preconditions: usize,
    linked: usize,
    assertion_failures: usize,
    other_failures: usize,
}

fn sweep_cmd(n: usize, count: usize, k: usize, seed: u64, mode: Mode, budget: u64) -> Outcome {
    if k == 0 || 2 * k > n {
        return Err(Fail::input(format!("need 1 <= k and 2k <= n (k={k}, n={n})")));
    }
    let opts = LinkOptions {
        mode: mode.into(),
        anchor_budget: Some(budget),
    };
    let mut totals = SweepTotals::default();
    for trial in 0..count {
        let s = seed.wrapping_add(trial as u64);
        let t = random_tournament(n, s)?;
        let (x0, y0) = random_terminals(n, k, s)?;
        let report = check_preconditions(&t, k)?;
        totals.trials += 1;
        totals.preconditions += report.ok() as usize;
        let start = Instant::now();
        let status = if opts.mode == LinkMode::Strict && !report.ok() {
            format!("skipped ({report})")
        } else {
            match run_link(&t, &x0, &y0, opts).0 {
                Ok(_) => {
                    totals.linked += 1;
                    "linked".to_string()
                }
                Err(e @ Error::AssertionViolation { .. }) => {
                    totals.assertion_failures += 1;
                    format!("ASSERTION {e}")
                }
                Err(e) => {
                    totals.other_failures += 1;
                    format!("failed: {e}")
                }
            }
        };
        println!(
            "trial {trial} seed {s} preconditions={} {status} ({:.2?})",
            report.ok(),
            start.elapsed()
        );
    }
    println!("{:<12} {:>8}", "trials", totals.trials);
    println!("{:<12} {:>8}", "precond_ok", totals.preconditions);
    println!("{:<12} {:>8}", "linked", totals.linked);
    println!("{:<12} {:>8}", "assertions", totals.assertion_failures);
    println!("{:<12} {:>8}", "other_fail", totals.other_failures);
    if totals.assertion_failures > 0 {
        Err(Fail::new(3, format!("{} assertion failures", totals.assertion_failures)))
    } else {
        Ok(())
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Gen {
            kind,
            n,
            seed,
            symbols,
            out,
        } => gen(kind, n, seed, &symbols, &out),
        Command::Info { file, k } => info_cmd(&file, k),
        Command::Link {
            file,
            sources,
            sinks,
            mode,
            trace,
            budget,
        } => link_cmd(&file, &sources, &sinks, mode, trace.as_deref(), budget),
        Command::Verify { file, linkage } => verify_cmd(&file, &linkage),
        Command::Anchors { file, p, budget } => anchors_cmd(&file, p, budget),
        Command::Klinked { file, k, force } => klinked_cmd(&file, k, force),
        Command::Sweep {
            kind: SweepKind::Random,
            n,
            count,
            k,
            seed,
            mode,
            budget,
        } => sweep_cmd(n, count, k, seed, mode, budget),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("tourlink: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
