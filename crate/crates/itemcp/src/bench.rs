//! Benchmark suites: a CSV of (data, query, engines) rows in, a CSV of run
//! reports out.
//!
//! Suite columns: `id,data,query,item_cats,trans_cats,item_labels,engines`;
//! only the first three are required. `engines` is a `;`-separated list
//! (default `cp`) and empty file columns mean none. Relative paths are resolved against the suite file's directory.

use std::path::{Path, PathBuf};
use std::time::Instant;

use itemcp_core::queries::{Activation, Engine, Instance, Query, QueryError};
use itemcp_core::reference::MaskEnumerator;
use itemcp_core::PartitionScheme;

use crate::run::{compute, RunOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Timeout,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Timeout => "to",
            Status::Error => "error",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteRow {
    pub id: String,
    pub data: PathBuf,
    pub query: PathBuf,
    pub item_cats: Option<PathBuf>,
    pub trans_cats: Option<PathBuf>,
    pub item_labels: Option<PathBuf>,
    pub engines: Vec<Engine>,
}

/// One line of the report.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub id: String,
    pub engine: Engine,
    pub item_groups: String,
    pub item_bounds: String,
    pub trans_groups: String,
    pub trans_bounds: String,
    /// `#D`, the number of sub-datasets the query allows.
    pub masks: String,
    pub solutions: Option<usize>,
    pub masks_explored: Option<u64>,
    pub nodes: Option<u64>,
    pub seconds: f64,
    pub status: Status,
    pub message: String,
}

pub const REPORT_HEADER: [&str; 13] = [
    "id",
    "engine",
    "item_groups",
    "item_bounds",
    "trans_groups",
    "trans_bounds",
    "masks",
    "solutions",
    "masks_explored",
    "nodes",
    "seconds",
    "status",
    "message",
];

pub fn parse_engine(name: &str) -> Option<Engine> {
    match name.trim() {
        "cp" => Some(Engine::Cp),
        "baseline" => Some(Engine::Baseline),
        "oracle" => Some(Engine::Oracle),
        _ => None,
    }
}

pub fn read_suite(path: &Path) -> anyhow::Result<Vec<SuiteRow>> {
    let base = path.parent().unwrap_or(Path::new("."));
    let resolve = |s: &str| -> Option<PathBuf> {
        let s = s.trim();
        (!s.is_empty()).then(|| base.join(s))
    };
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (id, data, query) = match (col("id"), col("data"), col("query")) {
        (Some(a), Some(b), Some(c)) => (a, b, c),
        _ => anyhow::bail!("suite header must contain id, data and query columns"),
    };
    let (items, trans, labels, engines) = (col("item_cats"), col("trans_cats"), col("item_labels"), col("engines"));
    let mut rows = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record?;
        let field = |c: Option<usize>| c.and_then(|c| record.get(c)).unwrap_or("");
        let engines = match field(engines) {
            "" => vec![Engine::Cp],
            list => list
                .split(';')
                .map(|e| parse_engine(e).ok_or_else(|| anyhow::anyhow!("suite row {}: unknown engine `{e}`", k + 1)))
                .collect::<anyhow::Result<_>>()?,
        };
        rows.push(SuiteRow {
            id: field(Some(id)).to_string(),
            data: resolve(field(Some(data))).ok_or_else(|| anyhow::anyhow!("suite row {}: no data file", k + 1))?,
            query: resolve(field(Some(query))).ok_or_else(|| anyhow::anyhow!("suite row {}: no query file", k + 1))?,
            item_cats: resolve(field(items)),
            trans_cats: resolve(field(trans)),
            item_labels: resolve(field(labels)),
            engines,
        });
    }
    Ok(rows)
}

fn describe_activation(a: &Activation, scheme: Option<&PartitionScheme>) -> (String, String) {
    let groups = scheme.map_or("-".to_string(), |s| s.primary().len().to_string());
    let bounds = match a {
        Activation::All => "all".to_string(),
        Activation::Groups(b) => format!("({},{})", b.lb, b.ub),
        Activation::Fixed(_) => "list".to_string(),
        Activation::OneOfLevels => "one-of-levels".to_string(),
    };
    (groups, bounds)
}

/// Runs one engine on one loaded query and reports it.
pub fn run_row(id: &str, query: &Query, inst: &Instance, engine: Engine, opts: &RunOptions) -> RunReport {
    let (item_groups, item_bounds) = describe_activation(&query.items, inst.item_scheme.as_deref());
    let (trans_groups, trans_bounds) = describe_activation(&query.transactions, inst.transaction_scheme.as_deref());
    let masks = MaskEnumerator::new(query, inst).map_or("-".to_string(), |m| m.count().to_string());
    let mut report = RunReport {
        id: id.to_string(),
        engine,
        item_groups,
        item_bounds,
        trans_groups,
        trans_bounds,
        masks,
        solutions: None,
        masks_explored: None,
        nodes: None,
        seconds: 0.0,
        status: Status::Ok,
        message: String::new(),
    };
    let start = Instant::now();
    let result = compute(query, inst, &RunOptions { engine, ..*opts });
    report.seconds = start.elapsed().as_secs_f64();
    match result {
        Ok(theory) => {
            report.solutions = Some(theory.len());
            report.masks_explored = Some(theory.stats.masks_explored);
            report.nodes = Some(theory.stats.nodes);
        }
        Err(QueryError::Interrupted) => report.status = Status::Timeout,
        Err(e) => {
            report.status = Status::Error;
            report.message = e.to_string();
        }
    }
    report
}

pub fn error_report(id: &str, engine: Engine, message: String) -> RunReport {
    RunReport {
        id: id.to_string(),
        engine,
        item_groups: "-".into(),
        item_bounds: "-".into(),
        trans_groups: "-".into(),
        trans_bounds: "-".into(),
        masks: "-".into(),
        solutions: None,
        masks_explored: None,
        nodes: None,
        seconds: 0.0,
        status: Status::Error,
        message,
    }
}

pub fn write_reports<W: std::io::Write>(reports: &[RunReport], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".to_string());
    for r in reports {
        w.write_record([
            r.id.clone(),
            r.engine.name().to_string(),
            r.item_groups.clone(),
            r.item_bounds.clone(),
            r.trans_groups.clone(),
            r.trans_bounds.clone(),
            r.masks.clone(),
            opt(r.solutions.map(|s| s.to_string())),
            opt(r.masks_explored.map(|s| s.to_string())),
            opt(r.nodes.map(|s| s.to_string())),
            format!("{:.3}", r.seconds),
            r.status.as_str().to_string(),
            r.message.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
