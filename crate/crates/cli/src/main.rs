//! `heavycol`: run the heavy-column certificates on matrix files, inspect
//! matrix structure, run verification scans and profile recursion cost.
//!
//! Exit codes: 0 success, 1 violations or regressions found, 2 usage or
//! input error.

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use heavycol::algorithms::{run, AlgoConfig, Algorithm, ColumnOrder};
use heavycol::profiler::{self, Family, GrowthTable, ProfileOptions};
use heavycol::report::{serialize_report, Report};
use heavycol::structure::{conjugate_of, find_unpaired, sequential_reduction};
use heavycol::verification::{
    converse_scan, order_sensitivity_scan, Check, Mode, ScanOptions, ScanReport, UniverseSpec,
};
use heavycol::{parse_matrix, BinaryMatrix};

#[derive(Parser)]
#[command(
    name = "heavycol",
    version,
    about = "Heavy-column certificates for binary matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a1 or a2 on a matrix.
    Check(CheckArgs),
    /// List heavy columns by direct count.
    Oracle(InputArgs),
    /// Show preconditions, conjugate pairs, unpaired rows and reductions.
    Analyze(AnalyzeArgs),
    /// Run a verification scan.
    Verify(VerifyArgs),
    /// Run an exploratory scan; never fails on findings.
    Explore(ExploreArgs),
    /// Profile recursion cost.
    #[command(subcommand)]
    Bench(BenchCommand),
}

#[derive(Args)]
struct InputArgs {
    /// Matrix file, or '-' for standard input.
    input: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, default_value = "a1")]
    algo: Algorithm,
    /// Column processing order for a1: ascending or shuffle:SEED.
    #[arg(long)]
    order: Option<ColumnOrder>,
    #[arg(long)]
    memo: bool,
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Sequential reduction of ROW keeping COLUMN, as ROW:COLUMN.
    #[arg(long, value_parser = parse_pair)]
    trace: Option<(usize, usize)>,
    /// Comma-separated deletion order for --trace.
    #[arg(long, value_delimiter = ',', requires = "trace")]
    trace_order: Option<Vec<usize>>,
    #[command(flatten)]
    input: InputArgs,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or("expected ROW:COLUMN")?;
    Ok((
        a.parse().map_err(|_| "bad row index")?,
        b.parse().map_err(|_| "bad column index")?,
    ))
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m_min: Option<usize>,
    #[arg(long)]
    m_max: Option<usize>,
    /// exhaustive or random:COUNT:SEED
    #[arg(long, default_value = "exhaustive")]
    mode: Mode,
    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long, default_value_t = 20)]
    witness_cap: usize,
    /// Seed for shuffled orders and sampled permutations.
    #[arg(long, default_value_t = ScanOptions::default().seed)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

impl ScanArgs {
    fn spec(&self) -> Result<UniverseSpec, String> {
        let n = self.n.ok_or("--n is required")?;
        let base = UniverseSpec::exhaustive(n);
        let spec = UniverseSpec {
            mode: self.mode,
            ..base.with_m_range(
                self.m_min.unwrap_or(base.m_min),
                self.m_max.unwrap_or(base.m_max),
            )
        };
        spec.validate().map_err(|e| e.to_string())?;
        Ok(spec)
    }

    fn options(&self) -> ScanOptions {
        ScanOptions {
            workers: self.workers,
            witness_cap: self.witness_cap,
            seed: self.seed,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyTarget {
    Theorem1,
    Theorem2,
    Lemma1,
    Claim,
    KeyCondition,
    Remark,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    target: VerifyTarget,
    #[command(flatten)]
    scan: ScanArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExploreTarget {
    Converse,
    OrderSensitivity,
}

#[derive(Args)]
struct ExploreArgs {
    target: ExploreTarget,
    #[command(flatten)]
    scan: ScanArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// full_cube, random_half:SEED or worst_found
    #[arg(long, default_value = "full_cube")]
    family: String,
    #[arg(long, default_value_t = 1)]
    n_min: usize,
    #[arg(long, default_value_t = 4)]
    n_max: usize,
    /// Per-run wall-clock budget.
    #[arg(long, default_value_t = 10_000)]
    timeout_ms: u64,
    /// Baseline and specimen store.
    #[arg(long)]
    store: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Print a growth table; --save writes it as the store's baseline.
    Growth {
        #[command(flatten)]
        args: BenchArgs,
        #[arg(long)]
        csv: bool,
        #[arg(long, requires = "store")]
        save: bool,
    },
    /// Profile again and diff against the stored baseline.
    Compare {
        #[command(flatten)]
        args: BenchArgs,
        /// Baseline CSV; defaults to the store entry for this configuration.
        #[arg(long)]
        baseline: Option<PathBuf>,
    },
}

/// Outcome of a subcommand that ran to completion.
enum Status {
    Ok,
    Findings,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Findings) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("heavycol: error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<Status, String> {
    match command {
        Command::Check(args) => check(args),
        Command::Oracle(args) => oracle(args),
        Command::Analyze(args) => analyze(args),
        Command::Verify(args) => verify(args),
        Command::Explore(args) => explore(args),
        Command::Bench(cmd) => bench(cmd),
    }
}

fn read_matrix(input: &str) -> Result<BinaryMatrix, String> {
    let text = if input == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("stdin: {e}"))?;
        s
    } else {
        fs::read_to_string(input).map_err(|e| format!("{input}: {e}"))?
    };
    parse_matrix(&text).map_err(|e| format!("{input}: {e}"))
}

fn print_report(report: &Report) {
    let p = &report.preconditions;
    println!("algorithm: {}", report.algorithm);
    if let Some(v) = report.verdict {
        println!("verdict: {v}");
    }
    println!("size: {}x{}", report.m, report.n);
    println!("heavy columns: {:?}", report.heavy_columns);
    println!(
        "preconditions: distinct_rows={} distinct_columns={} all_zero_column={}",
        p.distinct_rows, p.distinct_columns, p.all_zero_column
    );
}

fn check(args: CheckArgs) -> Result<Status, String> {
    if args.algo == Algorithm::A2 && args.order.is_some() {
        return Err(
            "--order applies to a1 only; a2 processes columns in fixed ascending order".into(),
        );
    }
    let m = read_matrix(&args.input.input)?;
    let config = AlgoConfig {
        column_order: args.order.unwrap_or_default(),
        memoize: args.memo,
    };
    let verdict = run(args.algo, &m, &config);
    let report = Report::for_verdict(&m, &verdict);
    if args.input.json {
        println!("{}", serialize_report(&report));
        return Ok(Status::Ok);
    }
    print_report(&report);
    if let Some(w) = verdict.witness {
        let column = w.column.map_or_else(|| "-".to_owned(), |c| c.to_string());
        println!(
            "witness: line {} ({}), column {column}",
            w.line(verdict.algorithm, verdict.value),
            w.tag.as_str()
        );
    }
    let s = verdict.stats;
    println!(
        "stats: calls={} max_depth={} cache_hits={} elapsed_ns={}",
        s.calls, s.max_depth, s.cache_hits, s.elapsed_ns
    );
    Ok(Status::Ok)
}

fn oracle(args: InputArgs) -> Result<Status, String> {
    let m = read_matrix(&args.input)?;
    let report = Report::oracle(&m);
    if args.json {
        println!("{}", serialize_report(&report));
    } else {
        print_report(&report);
    }
    Ok(Status::Ok)
}

fn analyze(args: AnalyzeArgs) -> Result<Status, String> {
    let m = read_matrix(&args.input.input)?;
    let props = m.properties();
    let mut pairs = Vec::new();
    for k in 1..=m.n() {
        for i in 1..=m.m() {
            if !m.get(i, k).map_err(|e| e.to_string())? {
                let conj = conjugate_of(&m, i, k).map_err(|e| e.to_string())?;
                pairs.push((i, k, conj));
            }
        }
    }
    let first = find_unpaired(&m);
    let trace = args
        .trace
        .map(|(row, col)| sequential_reduction(&m, row, col, args.trace_order.as_deref()))
        .transpose()
        .map_err(|e| e.to_string())?;

    if args.input.json {
        let doc = json!({
            "m": m.m(),
            "n": m.n(),
            "properties": props,
            "heavy_columns": m.heavy_columns(),
            "zero_entries": pairs.iter().map(|&(row, column, conjugate)| {
                json!({"row": row, "column": column, "conjugate": conjugate})
            }).collect::<Vec<_>>(),
            "first_unpaired": first,
            "trace": trace.as_ref().map(|t| json!({
                "preserved_column": t.preserved_column,
                "source_row": t.source_row,
                "steps": t.steps,
                "surviving_rows": t.surviving_rows,
                "terminal": t.terminal.to_text(),
            })),
        });
        println!("{doc}");
        return Ok(Status::Ok);
    }

    println!("size: {}x{}", m.m(), m.n());
    println!("column weights: {:?}", props.column_weights);
    println!("heavy columns: {:?}", m.heavy_columns());
    println!(
        "preconditions: distinct_rows={} distinct_columns={} all_zero_column={}",
        props.distinct_rows, props.distinct_columns, props.has_all_zero_column
    );
    println!("zero entries:");
    for (i, k, conj) in &pairs {
        match conj {
            Some(j) => println!("  row {i} column {k}: conjugate row {j}"),
            None => println!("  row {i} column {k}: unpaired"),
        }
    }
    match first {
        Some(u) => println!("first unpaired: row {} column {}", u.row, u.column),
        None => println!("first unpaired: none"),
    }
    if let Some(t) = trace {
        println!("{t}");
    }
    Ok(Status::Ok)
}

fn emit_reports(reports: &[ScanReport], json: bool) -> Status {
    if json {
        if let [single] = reports {
            println!("{}", single.to_json());
        } else {
            let docs: Vec<serde_json::Value> = reports
                .iter()
                .map(|r| serde_json::to_value(r).expect("report serializes"))
                .collect();
            println!("{}", json!({ "reports": docs }));
        }
    } else {
        for r in reports {
            print!("{r}");
        }
    }
    if reports.iter().all(ScanReport::passed) {
        Status::Ok
    } else {
        Status::Findings
    }
}

fn verify(args: VerifyArgs) -> Result<Status, String> {
    let checks: Vec<Check> = match args.target {
        VerifyTarget::Theorem1 => vec![Check::Theorem1],
        VerifyTarget::Theorem2 => vec![Check::Theorem2],
        VerifyTarget::Lemma1 => vec![Check::Lemma1],
        VerifyTarget::Claim => vec![Check::Claim],
        VerifyTarget::KeyCondition => vec![Check::KeyCondition],
        VerifyTarget::Remark => vec![Check::Remark],
        VerifyTarget::All => Check::ALL.to_vec(),
    };
    let opts = args.scan.options();
    let spec = if matches!(args.target, VerifyTarget::Remark) {
        None
    } else {
        Some(args.scan.spec()?)
    };
    let reports = checks
        .into_iter()
        .map(|c| match (c, &spec) {
            (Check::Remark, _) => Ok(heavycol::verification::remark_counterexamples()),
            (c, Some(spec)) => c.run(spec, &opts).map_err(|e| e.to_string()),
            (_, None) => unreachable!("only remark runs without a universe"),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(emit_reports(&reports, args.scan.json))
}

fn explore(args: ExploreArgs) -> Result<Status, String> {
    let spec = args.scan.spec()?;
    let opts = args.scan.options();
    let report = match args.target {
        ExploreTarget::Converse => converse_scan(&spec, &opts),
        ExploreTarget::OrderSensitivity => order_sensitivity_scan(&spec, &opts),
    }
    .map_err(|e| e.to_string())?;
    Ok(emit_reports(&[report], args.scan.json))
}

fn profile(args: &BenchArgs) -> Result<(Family, GrowthTable), String> {
    let family: Family = args
        .family
        .parse()
        .map_err(|e: profiler::ProfileError| e.to_string())?;
    let opts = ProfileOptions {
        budget: Duration::from_millis(args.timeout_ms),
        store: args.store.clone(),
    };
    let table = profiler::profile_family(family, args.n_min, args.n_max, &opts)
        .map_err(|e| e.to_string())?;
    Ok((family, table))
}

fn bench(cmd: BenchCommand) -> Result<Status, String> {
    match cmd {
        BenchCommand::Growth { args, csv, save } => {
            let (family, table) = profile(&args)?;
            if save {
                let store = args
                    .store
                    .as_ref()
                    .expect("clap requires --store with --save");
                let path = profiler::baseline_path(store, family, args.n_min, args.n_max);
                profiler::save_baseline(&path, &table).map_err(|e| e.to_string())?;
                eprintln!("saved baseline {}", path.display());
            }
            if args.json {
                println!("{}", table.to_json());
            } else if csv {
                print!("{}", table.to_csv());
            } else {
                print!("{table}");
            }
            Ok(Status::Ok)
        }
        BenchCommand::Compare { args, baseline } => {
            let family: Family = args
                .family
                .parse()
                .map_err(|e: profiler::ProfileError| e.to_string())?;
            let path = match (baseline, &args.store) {
                (Some(p), _) => p,
                (None, Some(store)) => {
                    profiler::baseline_path(store, family, args.n_min, args.n_max)
                }
                (None, None) => return Err("compare needs --baseline or --store".into()),
            };
            let base = profiler::load_baseline(&path).map_err(|e| e.to_string())?;
            let (_, table) = profile(&args)?;
            let diff = profiler::snapshot_compare(&table, &base);
            if args.json {
                println!("{}", serde_json::to_string(&diff).expect("diff serializes"));
            } else {
                print!("{diff}");
            }
            Ok(if diff.has_regressions() {
                Status::Findings
            } else {
                Status::Ok
            })
        }
    }
}
