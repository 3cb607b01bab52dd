//! `itemcp mine | verify | bench`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use itemcp_core::partition::Axis;
use itemcp_core::queries::{Engine, Instance, Query, QueryError, Theory};

use crate::bench::{error_report, read_suite, run_row, write_reports};
use crate::catfile::parse_partition;
use crate::fimi::{parse_fimi, parse_labels};
use crate::queryfile::{parse_query, parse_theta};
use crate::random::random_case;
use crate::run::{compute, format_pair, write_theory, RunOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_TIMEOUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "itemcp", version, about = "Itemset mining over circumscribed sub-datasets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the theory of a query.
    Mine(MineArgs),
    /// Check that the cp, baseline and oracle engines agree.
    Verify(VerifyArgs),
    /// Run a suite of queries and report timings as CSV.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Transaction file (FIMI format).
    #[arg(long)]
    data: PathBuf,
    /// Query file.
    #[arg(long)]
    query: PathBuf,
    /// Item category file.
    #[arg(long)]
    item_cats: Option<PathBuf>,
    /// Transaction category file.
    #[arg(long)]
    trans_cats: Option<PathBuf>,
    /// Item labels, one `id label` per line.
    #[arg(long)]
    item_labels: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum EngineArg {
    Cp,
    Baseline,
    Oracle,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Cp => Engine::Cp,
            EngineArg::Baseline => Engine::Baseline,
            EngineArg::Oracle => Engine::Oracle,
        }
    }
}

#[derive(Args, Debug)]
struct MineArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "cp")]
    engine: EngineArg,
    /// Result file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Baseline only: build every sub-dataset before mining.
    #[arg(long)]
    materialize: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Transaction file (FIMI format).
    #[arg(long, requires = "query")]
    data: Option<PathBuf>,
    /// Query file.
    #[arg(long, requires = "data")]
    query: Option<PathBuf>,
    #[arg(long)]
    item_cats: Option<PathBuf>,
    #[arg(long)]
    trans_cats: Option<PathBuf>,
    #[arg(long)]
    item_labels: Option<PathBuf>,
    /// Check this many random instances instead of a file.
    #[arg(long, conflicts_with = "data")]
    seeds: Option<u64>,
    /// Per-engine limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Run the baseline with this threshold instead of the query's.
    #[arg(long, hide = true)]
    tamper_theta: Option<String>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Suite CSV: id,data,query,item_cats,trans_cats,item_labels,engines.
    #[arg(long)]
    suite: PathBuf,
    /// Per-run limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Report file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads per run.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
}

fn seconds(t: Option<f64>) -> anyhow::Result<Option<Duration>> {
    t.map(|s| Duration::try_from_secs_f64(s).context("timeout must be a non-negative number of seconds"))
        .transpose()
}

/// Loads a database, its optional labels and category files.
pub fn load_instance(
    data: &Path,
    item_cats: Option<&Path>,
    trans_cats: Option<&Path>,
    item_labels: Option<&Path>,
) -> anyhow::Result<Instance> {
    let file = fs::File::open(data).with_context(|| format!("cannot open {}", data.display()))?;
    let mut db = parse_fimi(std::io::BufReader::new(file)).with_context(|| format!("in {}", data.display()))?;
    if let Some(path) = item_labels {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let labels = parse_labels(&text, db.item_count()).with_context(|| format!("in {}", path.display()))?;
        db = db.with_labels(labels)?;
    }
    let mut inst = Instance::new(db);
    for (path, axis) in [(item_cats, Axis::Items), (trans_cats, Axis::Transactions)] {
        if let Some(path) = path {
            let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            let scheme = parse_partition(&text, &inst.db, axis).with_context(|| format!("in {}", path.display()))?;
            inst = inst.with_scheme(scheme)?;
        }
    }
    Ok(inst)
}

pub fn load_query(path: &Path, inst: &Instance) -> anyhow::Result<Query> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let q = parse_query(&text, inst).with_context(|| format!("in {}", path.display()))?;
    q.validate(inst).with_context(|| format!("in {}", path.display()))?;
    Ok(q)
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Mine(a) => mine(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Bench(a) => bench(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            if matches!(e.downcast_ref::<QueryError>(), Some(QueryError::Interrupted)) {
                let _ = writeln!(err, "itemcp: timeout");
                return EXIT_TIMEOUT;
            }
            let _ = writeln!(err, "itemcp: {e:#}");
            EXIT_ERROR
        }
    }
}

fn mine(a: MineArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let i = &a.input;
    let inst = load_instance(
        &i.data,
        i.item_cats.as_deref(),
        i.trans_cats.as_deref(),
        i.item_labels.as_deref(),
    )?;
    let query = load_query(&i.query, &inst)?;
    let opts = RunOptions {
        engine: a.engine.into(),
        parallel: a.parallel.max(1),
        timeout: seconds(a.timeout)?,
        materialize: a.materialize,
    };
    let theory = compute(&query, &inst, &opts)?;
    match &a.out {
        Some(path) => {
            let mut buf = Vec::new();
            write_theory(&theory, &inst, &mut buf)?;
            fs::write(path, buf).with_context(|| format!("cannot write {}", path.display()))?;
        }
        None => write_theory(&theory, &inst, out)?,
    }
    Ok(EXIT_OK)
}

/// Outcome of one engine in a verify run.
enum Verdict {
    Ran(Theory),
    Skipped(String),
}

fn run_engine(query: &Query, inst: &Instance, engine: Engine, timeout: Option<Duration>) -> anyhow::Result<Verdict> {
    let opts = RunOptions {
        engine,
        timeout,
        ..Default::default()
    };
    match compute(query, inst, &opts) {
        Ok(t) => Ok(Verdict::Ran(t)),
        Err(e @ (QueryError::NotSupported(_) | QueryError::TooLarge(_))) => Ok(Verdict::Skipped(e.to_string())),
        Err(e) => Err(anyhow::Error::new(e).context(format!("{} engine", engine.name()))),
    }
}

/// Runs all engines; writes a summary and returns whether they agree.
fn compare_engines(
    query: &Query,
    inst: &Instance,
    tamper: Option<&Query>,
    timeout: Option<Duration>,
    out: &mut dyn Write,
) -> anyhow::Result<bool> {
    let mut ran: Vec<(Engine, Theory)> = Vec::new();
    let mut summary = Vec::new();
    for engine in [Engine::Cp, Engine::Baseline, Engine::Oracle] {
        let q = match (engine, tamper) {
            (Engine::Baseline, Some(t)) => t,
            _ => query,
        };
        match run_engine(q, inst, engine, timeout)? {
            Verdict::Ran(t) => {
                summary.push(t.len().to_string());
                ran.push((engine, t));
            }
            Verdict::Skipped(why) => writeln!(out, "{}: skipped ({why})", engine.name())?,
        }
    }
    writeln!(
        out,
        "{}: {}",
        ran.iter().map(|(e, _)| e.name()).collect::<Vec<_>>().join(" / "),
        summary.join(" = ")
    )?;
    let (first_engine, first) = &ran[0];
    for (engine, theory) in &ran[1..] {
        if let Some(pair) = first.first_difference(theory) {
            let side = if first.pairs.contains(pair) {
                first_engine.name()
            } else {
                engine.name()
            };
            writeln!(
                out,
                "MISMATCH {} vs {}: first differing pair (only in {side}): {}",
                first_engine.name(),
                engine.name(),
                format_pair(pair, inst)
            )?;
            return Ok(false);
        }
    }
    Ok(true)
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let timeout = seconds(a.timeout)?;
    let tamper_theta = a
        .tamper_theta
        .as_deref()
        .map(|t| parse_theta(t).ok_or_else(|| anyhow::anyhow!("bad threshold `{t}`")))
        .transpose()?;
    if let Some(k) = a.seeds {
        let mut failures = 0;
        for seed in 0..k {
            let case = random_case(seed);
            let tampered = tamper_theta.map(|t| Query {
                theta: t,
                ..case.query.clone()
            });
            write!(
                out,
                "seed {seed} {} n={} m={}: ",
                case.family,
                case.instance.db.item_count(),
                case.instance.db.transaction_count()
            )?;
            if !compare_engines(&case.query, &case.instance, tampered.as_ref(), timeout, out)? {
                failures += 1;
            }
        }
        writeln!(out, "{} of {k} instances agree", k - failures)?;
        return Ok(if failures == 0 { EXIT_OK } else { EXIT_ERROR });
    }
    let (Some(data), Some(query)) = (&a.data, &a.query) else {
        anyhow::bail!("give --data and --query, or --seeds");
    };
    let inst = load_instance(
        data,
        a.item_cats.as_deref(),
        a.trans_cats.as_deref(),
        a.item_labels.as_deref(),
    )?;
    let q = load_query(query, &inst)?;
    let tampered = tamper_theta.map(|t| Query { theta: t, ..q.clone() });
    let agree = compare_engines(&q, &inst, tampered.as_ref(), timeout, out)?;
    Ok(if agree { EXIT_OK } else { EXIT_ERROR })
}

fn bench(a: BenchArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let rows = read_suite(&a.suite).with_context(|| format!("in {}", a.suite.display()))?;
    let opts = RunOptions {
        timeout: seconds(a.timeout)?,
        parallel: a.parallel.max(1),
        ..Default::default()
    };
    let mut reports = Vec::new();
    for row in &rows {
        let loaded = load_instance(
            &row.data,
            row.item_cats.as_deref(),
            row.trans_cats.as_deref(),
            row.item_labels.as_deref(),
        )
        .and_then(|inst| load_query(&row.query, &inst).map(|q| (inst, q)));
        match loaded {
            Ok((inst, q)) => {
                for &engine in &row.engines {
                    reports.push(run_row(&row.id, &q, &inst, engine, &opts));
                }
            }
            Err(e) => {
                for &engine in &row.engines {
                    reports.push(error_report(&row.id, engine, format!("{e:#}")));
                }
            }
        }
    }
    match &a.out {
        Some(path) => {
            let mut buf = Vec::new();
            write_reports(&reports, &mut buf)?;
            fs::write(path, buf).with_context(|| format!("cannot write {}", path.display()))?;
        }
        None => write_reports(&reports, out)?,
    }
    Ok(EXIT_OK)
}
