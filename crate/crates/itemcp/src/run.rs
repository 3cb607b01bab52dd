//! Engine dispatch with timeouts and optional parallelism.

use std::io::{self, Write};
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use itemcp_core::queries::{
    assemble, describe_itemset, describe_mask, verify_theory, Engine, Instance, Interrupt, MiningModel, Query,
    QueryError, RunStats, Theory,
};
use itemcp_core::reference::{
    brute_force_theory_with, mine_closed, pp_mine_with, ItemsetFilter, MaskEnumerator, PpOptions,
};
use itemcp_core::SolutionPair;

/// Interrupts once a wall-clock deadline has passed.
#[derive(Debug)]
pub struct Deadline {
    at: Option<Instant>,
    hit: AtomicBool,
}

impl Deadline {
    pub fn after(timeout: Option<Duration>) -> Self {
        Deadline {
            at: timeout.map(|t| Instant::now() + t),
            hit: AtomicBool::new(false),
        }
    }

    pub fn never() -> Self {
        Self::after(None)
    }
}

impl Interrupt for Deadline {
    fn interrupted(&self) -> bool {
        if self.hit.load(Ordering::Relaxed) {
            return true;
        }
        match self.at {
            Some(at) if Instant::now() >= at => {
                self.hit.store(true, Ordering::Relaxed);
                true
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub engine: Engine,
    pub parallel: usize,
    pub timeout: Option<Duration>,
    /// Baseline only: build all projected sub-datasets before mining.
    pub materialize: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            engine: Engine::Cp,
            parallel: 1,
            timeout: None,
            materialize: false,
        }
    }
}

/// Computes the theory with the requested engine, then re-validates every
/// pair against the query.
pub fn compute(query: &Query, inst: &Instance, opts: &RunOptions) -> Result<Theory, QueryError> {
    let deadline = Deadline::after(opts.timeout);
    let theory = match (opts.engine, opts.parallel) {
        (Engine::Cp, 0 | 1) => itemcp_core::queries::run_cp(query, inst, MiningModel::Global, &deadline)?,
        (Engine::Cp, k) => in_pool(k, || parallel_cp(query, inst, k, &deadline))?,
        (Engine::Baseline, k) if k <= 1 || opts.materialize => pp_mine_with(
            query,
            inst,
            PpOptions {
                materialize: opts.materialize,
            },
            &deadline,
        )?,
        (Engine::Baseline, k) => in_pool(k, || parallel_baseline(query, inst, &deadline))?,
        (Engine::Oracle, _) => brute_force_theory_with(query, inst, &deadline)?,
    };
    verify_theory(query, inst, &theory)?;
    Ok(theory)
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

fn parallel_cp(query: &Query, inst: &Instance, workers: usize, deadline: &Deadline) -> Result<Theory, QueryError> {
    let model = assemble(query, inst, MiningModel::Global)?;
    let depth = (usize::BITS - (4 * workers).leading_zeros()) as usize;
    let parts = model.split(depth);
    let results: Vec<_> = parts.into_par_iter().map(|mut part| part.run(deadline)).collect();
    let mut pairs = Vec::new();
    let mut stats = RunStats::default();
    for r in results {
        let (p, s) = r?;
        pairs.extend(p);
        stats.merge(&s);
    }
    Ok(Theory::from_pairs(pairs, stats))
}

fn parallel_baseline(query: &Query, inst: &Instance, deadline: &Deadline) -> Result<Theory, QueryError> {
    if !query.closed {
        return Err(QueryError::NotSupported("the baseline mines closed itemsets only"));
    }
    let masks = MaskEnumerator::new(query, inst)?;
    let filter = ItemsetFilter::from_query(query, inst);
    let per_mask: Vec<Result<(Vec<SolutionPair>, u64), QueryError>> = masks
        .iter()
        .filter(|m| !m.transactions.is_empty())
        .par_bridge()
        .map(|mask| {
            let mut steps = 0;
            let found = mine_closed(&inst.db, &mask, query.theta, &filter, deadline, &mut steps)?;
            let pairs = found
                .into_iter()
                .map(|(itemset, support)| SolutionPair {
                    mask: mask.clone(),
                    itemset,
                    support,
                })
                .collect();
            Ok((pairs, steps))
        })
        .collect();
    let mut pairs = Vec::new();
    let mut stats = RunStats::default();
    for r in per_mask {
        let (p, steps) = r?;
        pairs.extend(p);
        stats.masks_explored += 1;
        stats.nodes += steps;
    }
    Ok(Theory::from_pairs(pairs, stats))
}

/// One result line: `items<TAB>transactions<TAB>itemset<TAB>support<TAB>s/a`.
pub fn format_pair(pair: &SolutionPair, inst: &Instance) -> String {
    let (items, trans) = describe_mask(&pair.mask, inst);
    format!(
        "{items}\t{trans}\t{}\t{}\t{}",
        describe_itemset(&pair.itemset, &inst.db),
        pair.support,
        pair.frequency()
    )
}

pub fn write_theory<W: Write>(theory: &Theory, inst: &Instance, mut out: W) -> io::Result<()> {
    for pair in &theory.pairs {
        writeln!(out, "{}", format_pair(pair, inst))?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use itemcp_core::fixtures;
    use itemcp_core::{Bounds, Threshold};

    #[test]
    fn parallel_matches_sequential() {
        let inst = fixtures::example_instance();
        let q = Query::q4(Threshold::percent(50).unwrap(), Bounds::new(1, 3), Bounds::new(1, 3));
        let seq = compute(&q, &inst, &RunOptions::default()).unwrap();
        for engine in [Engine::Cp, Engine::Baseline] {
            for k in [2, 3, 8] {
                let opts = RunOptions {
                    engine,
                    parallel: k,
                    ..Default::default()
                };
                assert_eq!(compute(&q, &inst, &opts).unwrap().pairs, seq.pairs, "{engine:?} x{k}");
            }
        }
    }

    #[test]
    fn expired_deadline_interrupts() {
        let inst = fixtures::example_instance();
        let q = Query::q1(Threshold::percent(50).unwrap());
        let opts = RunOptions {
            timeout: Some(Duration::ZERO),
            ..Default::default()
        };
        assert_eq!(compute(&q, &inst, &opts), Err(QueryError::Interrupted));
    }

    #[test]
    fn gk_line() {
        let inst = fixtures::example_instance();
        let t = compute(
            &Query::q1(Threshold::percent(50).unwrap()),
            &inst,
            &RunOptions::default(),
        )
        .unwrap();
        let lines: Vec<String> = t.pairs.iter().map(|p| format_pair(p, &inst)).collect();
        assert!(lines.contains(&"ALL\tALL\tG K\t3\t3/6".to_string()), "{lines:?}");
    }
}
