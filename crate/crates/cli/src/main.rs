//! `gridchrome`: construct, verify, tabulate, solve and analyze r-dynamic
//! colorings of grids.
//!
//! Exit codes: 0 success / SAT / holds, 1 UNSAT / violated / deficient,
//! 2 usage, input or internal error, 3 resource limit.

mod output;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gridchrome::analyzer::{self, LemmaId, Verdict};
use gridchrome::constructions::{
    block_coloring, checkerboard_coloring, mod5_coloring, optimal_coloring_with, ConstructionKind,
};
use gridchrome::solver::{self, Engine, SolverConfig, Status};
use gridchrome::table::{table_report, table_to_csv};
use gridchrome::{grid_chromatic, validate, Coloring, Error, GridDims};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "gridchrome", version, about = "r-dynamic colorings of grid graphs")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a coloring from one of the built-in constructions.
    Construct(ConstructArgs),
    /// Check a coloring file against the r-dynamic condition.
    Verify(VerifyArgs),
    /// Closed-form chi_r of G(m,n) with its provenance.
    Chromatic { m: usize, n: usize, r: usize },
    /// Closed-form values for every m, n up to the given sizes and r = 1..5.
    Table(TableArgs),
    /// Decide whether G(m,n) has an r-dynamic k-coloring.
    Solve(SolveArgs),
    /// Check the structural facts of 3-dynamic 4-colorings on a coloring file.
    Analyze(AnalyzeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Mod5,
    Block,
    Checkerboard,
    Optimal,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    m: usize,
    n: usize,
    /// Required for --kind optimal.
    #[arg(long)]
    r: Option<usize>,
    /// Output path, `-` for stdout.
    #[arg(long, short, default_value = "-")]
    output: String,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    r: usize,
    /// Expected palette size; defaults to the k in the file header.
    #[arg(long)]
    k: Option<usize>,
    /// Coloring file, `-` for stdin.
    input: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    max_m: usize,
    #[arg(long)]
    max_n: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Backtracking,
    FrontierDp,
    Both,
}

#[derive(Args)]
struct SolveArgs {
    m: usize,
    n: usize,
    r: usize,
    k: usize,
    #[arg(long, value_enum, default_value = "backtracking")]
    engine: EngineArg,
    /// Search all color names instead of one per renaming class.
    #[arg(long)]
    no_symmetry: bool,
    /// Prune with the structural rules (r = 3, k = 4 only).
    #[arg(long)]
    lemma_prop: bool,
    #[arg(long, value_name = "N")]
    limit_nodes: Option<u64>,
    #[arg(long, value_name = "SECONDS")]
    time_limit: Option<f64>,
    /// Per-column state budget of the frontier engine.
    #[arg(long, value_name = "N")]
    dp_budget: Option<u64>,
    #[arg(long, env = "GRIDCHROME_THREADS", default_value_t = 1)]
    threads: usize,
    /// Shuffle the color order tried at each cell.
    #[arg(long)]
    seed: Option<u64>,
    /// With several threads, return whichever witness turns up first.
    #[arg(long)]
    any_witness: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LemmaArg {
    All,
    Ring,
    Corner,
    #[value(name = "2x3")]
    Rainbow,
    Zigzag,
    Coherence,
    Classify,
    Partial,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Coloring file, `-` for stdin.
    input: String,
    /// Checks to run; repeatable. `all` is the five structural checks.
    #[arg(long, value_enum, default_value = "all")]
    lemma: Vec<LemmaArg>,
}

/// What a subcommand produced: text or JSON for stdout, and an exit code.
struct Report {
    text: String,
    json: serde_json::Value,
    code: u8,
}

impl Report {
    fn new(text: String, json: serde_json::Value, code: u8) -> Self {
        Report { text, json, code }
    }
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("reading stdin: {e}"))?;
        Ok(s)
    } else {
        fs::read_to_string(PathBuf::from(path)).map_err(|e| format!("reading {path}: {e}"))
    }
}

fn read_coloring(path: &str) -> Result<Coloring, Failure> {
    let text = read_input(path).map_err(Failure::Io)?;
    text.parse::<Coloring>().map_err(|e| Failure::Lib(e, path.to_string()))
}

enum Failure {
    Lib(Error, String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e, String::new())
    }
}

fn construct(args: &ConstructArgs) -> Result<(Report, Option<String>), Failure> {
    let dims = GridDims::new(args.m, args.n)?;
    let (coloring, kind) = match args.kind {
        KindArg::Mod5 => (mod5_coloring(dims)?, ConstructionKind::Mod5Diagonal),
        KindArg::Block => (block_coloring(dims)?, ConstructionKind::BlockTiling),
        KindArg::Checkerboard => (checkerboard_coloring(dims)?, ConstructionKind::Checkerboard),
        KindArg::Optimal => {
            let r = args
                .r
                .ok_or_else(|| Error::InvalidInput("--kind optimal needs --r".into()))?;
            optimal_coloring_with(dims, r, &SolverConfig::default())?
        }
    };
    let json = output::construction(kind, args.r, &coloring);
    let target = (args.output != "-").then(|| args.output.clone());
    Ok((Report::new(coloring.to_text(), json, 0), target))
}

fn verify(args: &VerifyArgs) -> Result<Report, Failure> {
    let coloring = read_coloring(&args.input)?;
    let report = validate(&coloring, args.r, args.k)?;
    let code = if report.is_empty() { 0 } else { EXIT_NEGATIVE };
    let json = output::verification(args.r, &coloring, &report);
    Ok(Report::new(report.to_string(), json, code))
}

fn chromatic(m: usize, n: usize, r: usize) -> Result<Report, Failure> {
    let a = grid_chromatic(m, n, r)?;
    let text = format!("{} {}\n", a.value, a.provenance);
    Ok(Report::new(text, output::chromatic(m, n, r, &a), 0))
}

fn table(args: &TableArgs, json: bool) -> Result<Report, Failure> {
    let entries = table_report(args.max_m, args.max_n)?;
    let as_json = json || matches!(args.format, TableFormat::Json);
    let value = serde_json::to_value(&entries).expect("table entries serialize");
    let text = if as_json {
        format!("{}\n", serde_json::to_string_pretty(&value).expect("json"))
    } else {
        table_to_csv(&entries)
    };
    Ok(Report::new(text, value, 0))
}

fn solve(args: &SolveArgs) -> Result<Report, Failure> {
    let dims = GridDims::new(args.m, args.n)?;
    let engine = match args.engine {
        EngineArg::Backtracking => Engine::Backtracking,
        EngineArg::FrontierDp => Engine::FrontierDp,
        EngineArg::Both => Engine::Both,
    };
    let mut config = SolverConfig {
        engine,
        symmetry_breaking: !args.no_symmetry,
        lemma_propagation: args.lemma_prop,
        node_limit: args.limit_nodes,
        threads: args.threads,
        seed: args.seed,
        any_witness: args.any_witness,
        ..SolverConfig::default()
    };
    if let Some(secs) = args.time_limit {
        if !(secs.is_finite() && secs > 0.0) {
            return Err(
                Error::InvalidInput(format!("time limit must be a positive number of seconds, got {secs}")).into(),
            );
        }
        config.time_limit = Some(Duration::from_secs_f64(secs));
    }
    if let Some(budget) = args.dp_budget {
        config.dp_state_budget = budget;
    }
    let outcome = solver::decide(dims, args.r, args.k, &config)?;
    let text = match &outcome.witness {
        Some(w) => format!("{}\n{}", outcome.status, w.to_text()),
        None => format!("{}\n", outcome.status),
    };
    let code = if outcome.status == Status::Sat {
        0
    } else {
        EXIT_NEGATIVE
    };
    let json = output::decision(dims, args.r, args.k, engine, &outcome);
    Ok(Report::new(text, json, code))
}

fn analyze(args: &AnalyzeArgs) -> Result<Report, Failure> {
    let coloring = read_coloring(&args.input)?;
    let mut lemmas: Vec<LemmaId> = Vec::new();
    let mut push = |l: LemmaId| {
        if !lemmas.contains(&l) {
            lemmas.push(l);
        }
    };
    for arg in &args.lemma {
        match arg {
            LemmaArg::All => LemmaId::ALL.into_iter().for_each(&mut push),
            LemmaArg::Ring => push(LemmaId::Ring),
            LemmaArg::Corner => push(LemmaId::Corner),
            LemmaArg::Rainbow => push(LemmaId::Rainbow),
            LemmaArg::Zigzag => push(LemmaId::Zigzag),
            LemmaArg::Coherence => push(LemmaId::Coherence),
            LemmaArg::Classify | LemmaArg::Partial => {}
        }
    }
    let findings = analyzer::analyze(&coloring, &lemmas);
    let mut violated = findings.iter().any(|f| f.verdict == Verdict::Violated);
    let mut text: String = findings.iter().map(|f| format!("{f}\n")).collect();

    let classification = if args.lemma.contains(&LemmaArg::Classify) {
        match analyzer::classify_positions(&coloring) {
            Ok(c) => {
                text.push_str(&format!("classify reference {:?}\n{c}", c.reference.0));
                Some(Ok(c))
            }
            Err(Error::NotCoherent) => {
                violated = true;
                text.push_str("classify not coherent\n");
                Some(Err(()))
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let signature = args
        .lemma
        .contains(&LemmaArg::Partial)
        .then(|| analyzer::detect_partial_signature(&coloring));
    match signature {
        Some(Some((r, s))) => text.push_str(&format!("partial {r} {s}\n")),
        Some(None) => text.push_str("partial none\n"),
        None => {}
    }

    let json = output::analysis(&findings, classification.as_ref(), signature);
    Ok(Report::new(text, json, if violated { EXIT_NEGATIVE } else { 0 }))
}

fn emit(text: &str) -> Result<(), String> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|()| out.flush())
        .map_err(|e| format!("writing stdout: {e}"))
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let mut target = None;
    let report = match &cli.command {
        Command::Construct(args) => {
            let (report, path) = construct(args)?;
            target = path;
            report
        }
        Command::Verify(args) => verify(args)?,
        Command::Chromatic { m, n, r } => chromatic(*m, *n, *r)?,
        Command::Table(args) => table(args, cli.json)?,
        Command::Solve(args) => solve(args)?,
        Command::Analyze(args) => analyze(args)?,
    };
    let payload = if cli.json && !matches!(cli.command, Command::Table(_)) {
        format!("{}\n", serde_json::to_string_pretty(&report.json).expect("json"))
    } else {
        report.text
    };
    match target {
        Some(path) => fs::write(&path, payload).map_err(|e| Failure::Io(format!("writing {path}: {e}")))?,
        None => emit(&payload).map_err(Failure::Io)?,
    }
    Ok(report.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
        Err(Failure::Lib(e, source)) => {
            if source.is_empty() || source == "-" {
                eprintln!("error: {e}");
            } else {
                eprintln!("error: {source}: {e}");
            }
            if e.is_resource_limit() {
                ExitCode::from(EXIT_RESOURCE)
            } else {
                ExitCode::from(EXIT_ERROR)
            }
        }
    }
}
