//! `permshatter`: build, check and search permutation families.
//!
//! Exit codes: 0 ok, 1 property does not hold, 2 usage or input error,
//! 3 internal verification failure, 4 search budget exhausted or instance
//! refused as too large.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use permshatter::checkers::{coverage_with, follows_everywhere, satisfies_partial, satisfies_total, CoverageOptions};
use permshatter::constructions::{
    fractional_family, fractional_guarantee, kcube_step, little_construction, perfect_family, q34, q34_trace,
    shatter_family, Constructed,
};
use permshatter::oracle::{
    insertion_replay, max_shattered, min_family_size, monotonicity_probe, SearchConfig, SearchReport,
    DEFAULT_NODE_BUDGET,
};
use permshatter::perm::rank_pattern;
use permshatter::separators::{binary_splits, separating_system, separating_system_size, verify_separating};
use permshatter::{Error, Family, Verdict};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "permshatter", version, about = "Permutation families that shatter k-tuples")]
struct Cli {
    /// Worker threads (SHATTER_THREADS takes precedence).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Omit timings and scheduling-dependent counters from JSON output.
    #[arg(long, global = true)]
    deterministic: bool,

    /// Search nodes visited before an oracle run gives up.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family and write it with its construction trace.
    Construct(ConstructArgs),
    /// Check a family file.
    Verify(VerifyArgs),
    /// Exhaustive search on a tiny ground set.
    Search(SearchArgs),
    /// Guaranteed and measured shattered triples of the blockwise family on [4^r].
    Fraction {
        #[arg(long)]
        r: u32,
    },
    /// Build and check a two-part partition system on [n].
    Separators {
        #[arg(short)]
        n: usize,
        #[arg(long, value_enum)]
        kind: SeparatorKind,
    },
    /// Maximal shattered fractions over a range of ground sizes.
    Probe {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        m: usize,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Q34,
    Perfect,
    Little,
    Kcube,
    Shatter,
    Fractional,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long)]
    base: Option<PathBuf>,
    #[arg(short, long)]
    n: Option<usize>,
    #[arg(short, long)]
    k: Option<usize>,
    #[arg(long)]
    r: Option<u32>,
    /// Family file to write; the trace goes to `<out>.trace.json`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Skip re-checking the claimed guarantee.
    #[arg(long)]
    no_verify: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Total,
    Partial,
    Fraction,
    Pattern,
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    #[arg(short, long, default_value_t = 3)]
    k: usize,
    #[arg(long, value_enum, default_value_t = Mode::Total)]
    mode: Mode,
    #[arg(short, long)]
    t: Option<u32>,
    /// Pattern in one-line notation, e.g. `2,3,1`.
    #[arg(long, value_delimiter = ',')]
    pattern: Option<Vec<u32>>,
    /// Unshattered tuples listed in the report.
    #[arg(long, default_value_t = 10)]
    witnesses: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemKind {
    Min,
    Max,
    Replay,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(value_enum)]
    problem: ProblemKind,
    #[arg(short)]
    n: Option<usize>,
    #[arg(short)]
    k: Option<usize>,
    #[arg(short)]
    t: Option<u32>,
    #[arg(short)]
    m: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeparatorKind {
    Binary,
    Ordered,
}

enum Failure {
    Usage(String),
    Verification(String),
    Budget(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Verification(_) => Failure::Verification(e.to_string()),
            Error::Infeasible { .. } => Failure::Budget(e.to_string()),
            Error::Io(_) => Failure::Io(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<ExitCode, Failure>;

struct Out {
    deterministic: bool,
}

impl Out {
    fn render(&self, value: impl Serialize) -> Result<String, Failure> {
        let mut v = serde_json::to_value(value).map_err(|e| Failure::Verification(e.to_string()))?;
        if self.deterministic {
            strip_volatile(&mut v);
        }
        let mut obj = Map::new();
        obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
        match v {
            Value::Object(m) => obj.extend(m),
            other => {
                obj.insert("result".into(), other);
            }
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("json value");
        s.push('\n');
        Ok(s)
    }

    fn print(&self, value: impl Serialize) -> Result<(), Failure> {
        print!("{}", self.render(value)?);
        Ok(())
    }
}

fn strip_volatile(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("wall_time");
            m.remove("nodes_explored");
            m.values_mut().for_each(strip_volatile);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_volatile),
        _ => {}
    }
}

fn need<T>(v: Option<T>, flag: &str, what: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("{what} needs {flag}")))
}

fn construct(args: ConstructArgs, out: &Out) -> Outcome {
    let read_base = |what: &str| -> Result<Family, Failure> {
        let path = need(args.base.as_ref(), "--base FILE", what)?;
        Family::read(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    };
    let built: Constructed = match args.kind {
        Kind::Q34 => Constructed {
            family: q34(),
            trace: q34_trace(),
        },
        Kind::Perfect => perfect_family(need(args.k, "--k", "perfect")?)?,
        Kind::Little => little_construction(&read_base("little")?)?,
        Kind::Kcube => {
            let base = read_base("kcube")?;
            let n = need(args.n, "--n", "kcube")?;
            kcube_step(&base, n as u32, need(args.k, "--k", "kcube")?)?
        }
        Kind::Shatter => shatter_family(need(args.k, "--k", "shatter")?, need(args.n, "--n", "shatter")?)?,
        Kind::Fractional => fractional_family(need(args.r, "--r", "fractional")?)?,
    };
    if !args.no_verify {
        if let Verdict::Fails(w) = built.trace.verify(&built.family)? {
            return Err(Failure::Verification(format!("constructed family fails its claimed guarantee: {w}")));
        }
    }
    let trace = out.render(&built.trace)?;
    match &args.out {
        Some(path) => {
            built.family.write(path)?;
            let trace_path = trace_path(path);
            std::fs::write(&trace_path, trace).map_err(|e| Failure::Io(format!("{}: {e}", trace_path.display())))?;
        }
        None => print!("{}", built.family),
    }
    Ok(ExitCode::SUCCESS)
}

fn trace_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".trace.json");
    PathBuf::from(s)
}

fn verify(args: VerifyArgs, out: &Out) -> Outcome {
    let family = Family::read(&args.file).map_err(|e| Failure::Usage(format!("{}: {e}", args.file.display())))?;
    let opts = CoverageOptions {
        witness_limit: args.witnesses,
        ..CoverageOptions::default()
    };
    let (holds, witness, report) = match args.mode {
        Mode::Total | Mode::Partial => {
            let verdict = match args.mode {
                Mode::Total => satisfies_total(&family, args.k)?,
                _ => satisfies_partial(&family, args.k, need(args.t, "--t", "partial mode")?)?,
            };
            let cov = coverage_with(&family, args.k, opts)?;
            let w = verdict.witness().map(|t| t.to_string());
            (verdict.holds(), w, serde_json::to_value(&cov).expect("report"))
        }
        Mode::Fraction => {
            let cov = coverage_with(&family, args.k, opts)?;
            let mut v = serde_json::to_value(&cov).expect("report");
            v["fraction"] = json!(cov.fraction().to_string());
            (true, None, v)
        }
        Mode::Pattern => {
            let pattern = need(args.pattern.as_ref(), "--pattern", "pattern mode")?;
            let rank = rank_pattern(pattern)?;
            let verdict = follows_everywhere(&family, rank)?;
            let w = verdict.witness().map(|t| t.to_string());
            (verdict.holds(), w, json!({ "pattern": pattern, "rank": rank.rank() }))
        }
    };
    let mode = match args.mode {
        Mode::Total => "total",
        Mode::Partial => "partial",
        Mode::Fraction => "fraction",
        Mode::Pattern => "pattern",
    };
    out.print(json!({
        "mode": mode,
        "k": args.k,
        "t": args.t,
        "n": family.n(),
        "m": family.len(),
        "holds": holds,
        "witness": witness,
        "report": report,
    }))?;
    Ok(if holds { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn search(args: SearchArgs, config: &SearchConfig, out: &Out) -> Outcome {
    let finish = |report: SearchReport| -> Outcome {
        out.print(&report)?;
        Ok(if report.proof_of_optimality {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(4)
        })
    };
    match args.problem {
        ProblemKind::Min => {
            let n = need(args.n, "-n", "search min")?;
            let k = need(args.k, "-k", "search min")?;
            finish(min_family_size(n, k, need(args.t, "-t", "search min")?, config)?)
        }
        ProblemKind::Max => {
            let n = need(args.n, "-n", "search max")?;
            let k = need(args.k, "-k", "search max")?;
            finish(max_shattered(n, k, need(args.m, "-m", "search max")?, config)?)
        }
        ProblemKind::Replay => {
            let report = insertion_replay()?;
            out.print(&report)?;
            Ok(if report.confirms_at_most_eight {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn fraction(r: u32, out: &Out) -> Outcome {
    let built = fractional_family(r)?;
    let cov = coverage_with(&built.family, 3, CoverageOptions::default())?;
    let guaranteed = fractional_guarantee(r);
    out.print(json!({
        "r": r,
        "n": built.family.n(),
        "m": built.family.len(),
        "guaranteed": guaranteed,
        "measured": cov.shattered_count,
        "total": cov.total_tuples,
        "fraction": cov.fraction().to_string(),
        "exact": cov.shattered_count == guaranteed,
    }))?;
    if cov.shattered_count < guaranteed {
        return Err(Failure::Verification(format!(
            "measured {} shattered triples, below the guaranteed {guaranteed}",
            cov.shattered_count
        )));
    }
    Ok(ExitCode::SUCCESS)
}

fn separators(n: usize, kind: SeparatorKind, out: &Out) -> Outcome {
    let (system, ordered) = match kind {
        SeparatorKind::Binary => (binary_splits(n)?, false),
        SeparatorKind::Ordered => (separating_system(n)?, true),
    };
    let verdict = verify_separating(&system, ordered);
    out.print(json!({
        "kind": if ordered { "ordered" } else { "binary" },
        "n": n,
        "parts": system.len(),
        "minimal_ordered_size": separating_system_size(n),
        "separates": verdict.holds(),
        "witness": verdict.witness(),
        "system": system,
    }))?;
    Ok(if verdict.holds() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn probe(k: usize, m: usize, from: usize, to: usize, config: &SearchConfig, out: &Out) -> Outcome {
    if from > to {
        return Err(Failure::Usage(format!("empty range {from}..={to}")));
    }
    let report = monotonicity_probe(k, m, from..=to, config)?;
    out.print(&report)?;
    Ok(if !report.non_increasing {
        ExitCode::from(1)
    } else if !report.complete {
        ExitCode::from(4)
    } else {
        ExitCode::SUCCESS
    })
}

fn threads(flag: Option<usize>) -> Result<Option<usize>, Failure> {
    match std::env::var("SHATTER_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("SHATTER_THREADS={v:?} is not a thread count"))),
        Err(_) => Ok(flag),
    }
}

fn run(cli: Cli) -> Outcome {
    if let Some(n) = threads(cli.threads)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let out = Out {
        deterministic: cli.deterministic,
    };
    let config = SearchConfig {
        node_budget: cli.node_budget,
    };
    match cli.command {
        Command::Construct(a) => construct(a, &out),
        Command::Verify(a) => verify(a, &out),
        Command::Search(a) => search(a, &config, &out),
        Command::Fraction { r } => fraction(r, &out),
        Command::Separators { n, kind } => separators(n, kind, &out),
        Command::Probe { k, m, from, to } => probe(k, m, from, to, &config, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) | Failure::Io(m) => (2, m),
                Failure::Verification(m) => (3, m),
                Failure::Budget(m) => (4, m),
            };
            eprintln!("permshatter: {msg}");
            ExitCode::from(code)
        }
    }
}
