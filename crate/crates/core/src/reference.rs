//! Non-CP engines: the two-step baseline (enumerate sub-datasets, then run a
//! closed-itemset miner on each) and an exhaustive oracle for small inputs.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::bitset::BitSet;
use crate::dataset::{Itemset, SubDatasetMask, Threshold, TransactionDatabase};
use crate::partition::{Level, PartitionScheme};
use crate::queries::{
    holds, span_of, Activation, Bounds, Instance, Interrupt, Query, QueryError, RunStats, SolutionPair, Theory,
};

/// Largest item count the oracle accepts.
pub const ORACLE_MAX_ITEMS: usize = 24;
/// Largest number of sub-datasets the oracle accepts.
pub const ORACLE_MAX_MASKS: u64 = 1 << 20;

/// Binomial coefficient as a big integer.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for t in 0..k {
        acc *= n - t;
        acc /= t + 1;
    }
    acc
}

/// Bounds passed to [`count_masks`] with `lb > ub`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("activation bounds ({lb}, {ub}) are reversed")]
pub struct InvalidBounds {
    pub lb: usize,
    pub ub: usize,
}

/// `Σ_{k=lb..=ub} C(groups, k)`: sub-datasets reachable by activating
/// between `lb` and `ub` of `groups` groups.
pub fn count_masks(groups: usize, lb: usize, ub: usize) -> Result<BigUint, InvalidBounds> {
    if lb > ub {
        return Err(InvalidBounds { lb, ub });
    }
    Ok((lb..=ub.min(groups)).map(|k| binomial(groups, k)).sum())
}

/// Lexicographic `k`-subsets of `0..n`.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut p = k;
        loop {
            if p == 0 {
                self.done = true;
                break;
            }
            p -= 1;
            if self.idx[p] < self.n - k + p {
                self.idx[p] += 1;
                for q in p + 1..k {
                    self.idx[q] = self.idx[q - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// The masks one axis can take under an activation.
#[derive(Debug, Clone)]
enum AxisPlan {
    Single(BitSet),
    Groups {
        groups: Vec<BitSet>,
        universe: usize,
        bounds: Bounds,
    },
    Each(Vec<BitSet>),
}

impl AxisPlan {
    fn new(a: &Activation, universe: usize, scheme: Option<&PartitionScheme>) -> Self {
        match a {
            Activation::All => AxisPlan::Single(BitSet::full(universe)),
            Activation::Fixed(s) => AxisPlan::Single(s.clone()),
            Activation::Groups(b) => AxisPlan::Groups {
                groups: scheme
                    .expect("validated")
                    .primary()
                    .groups
                    .iter()
                    .map(|g| g.members.clone())
                    .collect(),
                universe,
                bounds: *b,
            },
            Activation::OneOfLevels => {
                let mut seen: Vec<BitSet> = Vec::new();
                for g in scheme.expect("validated").levels().iter().flat_map(|l| &l.groups) {
                    if !seen.contains(&g.members) {
                        seen.push(g.members.clone());
                    }
                }
                AxisPlan::Each(seen)
            }
        }
    }

    fn count(&self) -> BigUint {
        match self {
            AxisPlan::Single(_) => BigUint::from(1u32),
            AxisPlan::Groups { groups, bounds, .. } => {
                count_masks(groups.len(), bounds.lb, bounds.ub).expect("validated")
            }
            AxisPlan::Each(v) => BigUint::from(v.len()),
        }
    }

    fn iter(&self) -> AxisIter<'_> {
        let first = match self {
            AxisPlan::Groups { groups, bounds, .. } => Some(Combinations::new(groups.len(), bounds.lb)),
            _ => None,
        };
        AxisIter {
            plan: self,
            size: match self {
                AxisPlan::Groups { bounds, .. } => bounds.lb,
                _ => 0,
            },
            combos: first,
            pos: 0,
        }
    }
}

struct AxisIter<'a> {
    plan: &'a AxisPlan,
    size: usize,
    combos: Option<Combinations>,
    pos: usize,
}

impl Iterator for AxisIter<'_> {
    type Item = BitSet;

    fn next(&mut self) -> Option<BitSet> {
        match self.plan {
            AxisPlan::Single(s) => {
                self.pos += 1;
                (self.pos == 1).then(|| s.clone())
            }
            AxisPlan::Each(v) => {
                self.pos += 1;
                v.get(self.pos - 1).cloned()
            }
            AxisPlan::Groups {
                groups,
                universe,
                bounds,
            } => loop {
                if self.size > bounds.ub {
                    return None;
                }
                if let Some(pick) = self.combos.as_mut().and_then(Iterator::next) {
                    let mut set = BitSet::new(*universe);
                    for g in pick {
                        set.union_with(&groups[g]);
                    }
                    return Some(set);
                }
                self.size += 1;
                self.combos = Some(Combinations::new(groups.len(), self.size));
            },
        }
    }
}

/// Every sub-dataset a query's activations allow, items-major.
#[derive(Debug, Clone)]
pub struct MaskEnumerator {
    items: AxisPlan,
    transactions: AxisPlan,
}

impl MaskEnumerator {
    pub fn new(query: &Query, inst: &Instance) -> Result<Self, QueryError> {
        query.validate(inst)?;
        Ok(MaskEnumerator {
            items: AxisPlan::new(&query.items, inst.db.item_count(), inst.item_scheme.as_deref()),
            transactions: AxisPlan::new(
                &query.transactions,
                inst.db.transaction_count(),
                inst.transaction_scheme.as_deref(),
            ),
        })
    }

    /// Number of masks the enumeration yields, `#D`.
    pub fn count(&self) -> BigUint {
        self.items.count() * self.transactions.count()
    }

    pub fn iter(&self) -> impl Iterator<Item = SubDatasetMask> + '_ {
        self.items.iter().flat_map(move |items| {
            self.transactions
                .iter()
                .map(move |t| SubDatasetMask::new(items.clone(), t))
        })
    }
}

/// Itemset-side constraints pushed into the miner.
#[derive(Debug, Clone)]
pub struct ItemsetFilter<'a> {
    pub min_size: usize,
    pub span: Option<(&'a Level, Bounds)>,
    pub require: BitSet,
    pub forbid: BitSet,
}

impl<'a> ItemsetFilter<'a> {
    pub fn none(n: usize) -> Self {
        ItemsetFilter {
            min_size: 1,
            span: None,
            require: BitSet::new(n),
            forbid: BitSet::new(n),
        }
    }

    pub fn from_query(query: &Query, inst: &'a Instance) -> Self {
        let n = inst.db.item_count();
        ItemsetFilter {
            min_size: query.min_size.unwrap_or(1),
            span: query
                .span
                .map(|b| (inst.item_scheme.as_deref().expect("validated").primary(), b)),
            require: query.required_set(n),
            forbid: query.forbidden_set(n),
        }
    }

    fn accepts(&self, p: &Itemset) -> bool {
        !p.is_empty()
            && p.count() >= self.min_size
            && self.require.is_subset(p)
            && self.span.is_none_or(|(l, b)| b.contains(span_of(l, p)))
    }

    /// No extension of `p` whose new items all come after `core` can pass.
    fn prunes(&self, p: &Itemset, core: Option<usize>) -> bool {
        if p.intersects(&self.forbid) {
            return true;
        }
        if self.span.is_some_and(|(l, b)| span_of(l, p) > b.ub) {
            return true;
        }
        let Some(core) = core else { return false };
        self.require.iter().any(|r| r < core && !p.contains(r))
    }
}

/// Closed frequent itemsets of the sub-dataset `mask`, with their support,
/// by closure extension with prefix preservation.
pub fn mine_closed(
    db: &TransactionDatabase,
    mask: &SubDatasetMask,
    theta: Threshold,
    filter: &ItemsetFilter<'_>,
    interrupt: &dyn Interrupt,
    steps: &mut u64,
) -> Result<Vec<(Itemset, usize)>, QueryError> {
    let active = mask.transactions.count();
    let mut out = Vec::new();
    if active == 0 {
        return Ok(out);
    }
    let smin = theta.min_support(active);
    let root = db.closure_of_cover(&mask.transactions, &mask.items);
    let mut miner = Miner {
        db,
        items: &mask.items,
        smin,
        filter,
        interrupt,
        steps,
        out: &mut out,
    };
    miner.visit(&root, &mask.transactions, None)?;
    Ok(out)
}

struct Miner<'a, 'f> {
    db: &'a TransactionDatabase,
    items: &'a BitSet,
    smin: usize,
    filter: &'a ItemsetFilter<'f>,
    interrupt: &'a dyn Interrupt,
    steps: &'a mut u64,
    out: &'a mut Vec<(Itemset, usize)>,
}

impl Miner<'_, '_> {
    fn visit(&mut self, p: &Itemset, cover: &BitSet, core: Option<usize>) -> Result<(), QueryError> {
        *self.steps += 1;
        if self.steps.is_multiple_of(1024) && self.interrupt.interrupted() {
            return Err(QueryError::Interrupted);
        }
        if self.filter.prunes(p, core) {
            return Ok(());
        }
        if self.filter.accepts(p) {
            self.out.push((p.clone(), cover.count()));
        }
        let start = core.map_or(0, |c| c + 1);
        for e in self.items.iter().filter(|&e| e >= start && !p.contains(e)) {
            let sub = cover.intersection(self.db.column(e));
            if sub.count() < self.smin {
                continue;
            }
            let q = self.db.closure_of_cover(&sub, self.items);
            let preserved = (0..e).all(|i| q.contains(i) == p.contains(i));
            if preserved {
                self.visit(&q, &sub, Some(e))?;
            }
        }
        Ok(())
    }
}

/// Options of the two-step baseline.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PpOptions {
    /// Build every sub-dataset as a standalone projected database before
    /// mining any of them.
    pub materialize: bool,
}

/// The two-step baseline with default options.
pub fn pp_mine(query: &Query, inst: &Instance, interrupt: &dyn Interrupt) -> Result<Theory, QueryError> {
    pp_mine_with(query, inst, PpOptions::default(), interrupt)
}

pub fn pp_mine_with(
    query: &Query,
    inst: &Instance,
    opts: PpOptions,
    interrupt: &dyn Interrupt,
) -> Result<Theory, QueryError> {
    if !query.closed {
        return Err(QueryError::NotSupported("the baseline mines closed itemsets only"));
    }
    let masks = MaskEnumerator::new(query, inst)?;
    let filter = ItemsetFilter::from_query(query, inst);
    let mut stats = RunStats::default();
    let mut pairs = Vec::new();
    if opts.materialize {
        let mut projected = Vec::new();
        for mask in masks.iter() {
            if interrupt.interrupted() {
                return Err(QueryError::Interrupted);
            }
            if mask.transactions.is_empty() {
                continue;
            }
            if mask.items.is_empty() {
                stats.masks_explored += 1;
                continue;
            }
            let (sub, items) = project(&inst.db, &mask);
            projected.push((mask, sub, items));
        }
        for (mask, sub, items) in projected {
            stats.masks_explored += 1;
            let local = filter.localize(&items);
            let full = sub.full_mask();
            for (p, support) in mine_closed(&sub, &full, query.theta, &local, interrupt, &mut stats.nodes)? {
                let itemset = BitSet::from_indices(inst.db.item_count(), p.iter().map(|k| items[k]));
                if filter.span.is_none_or(|(l, b)| b.contains(span_of(l, &itemset))) {
                    pairs.push(SolutionPair {
                        mask: mask.clone(),
                        itemset,
                        support,
                    });
                }
            }
        }
    } else {
        for mask in masks.iter() {
            if interrupt.interrupted() {
                return Err(QueryError::Interrupted);
            }
            if mask.transactions.is_empty() {
                continue;
            }
            stats.masks_explored += 1;
            for (itemset, support) in mine_closed(&inst.db, &mask, query.theta, &filter, interrupt, &mut stats.nodes)? {
                pairs.push(SolutionPair {
                    mask: mask.clone(),
                    itemset,
                    support,
                });
            }
        }
    }
    Ok(Theory::from_pairs(pairs, stats))
}

impl<'a> ItemsetFilter<'a> {
    /// The filter re-indexed for a projected database whose item `k` is the
    /// original item `items[k]`. Span is left to the caller.
    fn localize(&self, items: &[usize]) -> ItemsetFilter<'a> {
        let n = items.len();
        let pick = |s: &BitSet| BitSet::from_indices(n, (0..n).filter(|&k| s.contains(items[k])));
        if self.require.iter().any(|r| !items.contains(&r)) {
            return ItemsetFilter {
                min_size: n + 1,
                span: None,
                require: BitSet::new(n),
                forbid: BitSet::full(n),
            };
        }
        ItemsetFilter {
            min_size: self.min_size,
            span: None,
            require: pick(&self.require),
            forbid: pick(&self.forbid),
        }
    }
}

/// The sub-database induced by `mask` (at least one item and transaction)
/// and the map from its item indices back to the original ones.
fn project(db: &TransactionDatabase, mask: &SubDatasetMask) -> (TransactionDatabase, Vec<usize>) {
    let items: Vec<usize> = mask.items.iter().collect();
    let mut local = alloc::vec![usize::MAX; db.item_count()];
    for (k, &i) in items.iter().enumerate() {
        local[i] = k;
    }
    let rows: Vec<Vec<usize>> = mask
        .transactions
        .iter()
        .map(|j| {
            db.row(j)
                .iter()
                .filter(|&i| mask.items.contains(i))
                .map(|i| local[i])
                .collect()
        })
        .collect();
    let sub = TransactionDatabase::from_transactions(items.len(), rows).expect("non-empty projection");
    (sub, items)
}

/// Exhaustive `Th(Q)`: every admitted mask, every itemset of its active
/// items, each checked against the query's definition.
pub fn brute_force_theory(query: &Query, inst: &Instance) -> Result<Theory, QueryError> {
    brute_force_theory_with(query, inst, &crate::queries::NoInterrupt)
}

pub fn brute_force_theory_with(
    query: &Query,
    inst: &Instance,
    interrupt: &dyn Interrupt,
) -> Result<Theory, QueryError> {
    query.validate(inst)?;
    let n = inst.db.item_count();
    if n > ORACLE_MAX_ITEMS {
        return Err(QueryError::TooLarge(format!("{n} items (limit {ORACLE_MAX_ITEMS})")));
    }
    let item_masks = naive_masks(&query.items, n, inst.item_scheme.as_deref())?;
    let trans_masks = naive_masks(
        &query.transactions,
        inst.db.transaction_count(),
        inst.transaction_scheme.as_deref(),
    )?;
    let total = item_masks.len() as u64 * trans_masks.len() as u64;
    if total > ORACLE_MAX_MASKS {
        return Err(QueryError::TooLarge(format!(
            "{total} sub-datasets (limit {ORACLE_MAX_MASKS})"
        )));
    }
    let mut stats = RunStats::default();
    let mut pairs = Vec::new();
    for items in &item_masks {
        let active: Vec<usize> = items.iter().collect();
        for trans in &trans_masks {
            if trans.is_empty() {
                continue;
            }
            if interrupt.interrupted() {
                return Err(QueryError::Interrupted);
            }
            stats.masks_explored += 1;
            let mask = SubDatasetMask::new(items.clone(), trans.clone());
            for bits in 1u64..(1u64 << active.len()) {
                stats.nodes += 1;
                let itemset =
                    BitSet::from_indices(n, (0..active.len()).filter(|&k| bits >> k & 1 == 1).map(|k| active[k]));
                if holds(query, inst, &mask, &itemset) {
                    pairs.push(SolutionPair {
                        support: inst.db.cover(&itemset, &mask).count(),
                        mask: mask.clone(),
                        itemset,
                    });
                }
            }
        }
    }
    Ok(Theory::from_pairs(pairs, stats))
}

/// Admitted masks of one axis by scanning subsets of groups directly.
fn naive_masks(a: &Activation, universe: usize, scheme: Option<&PartitionScheme>) -> Result<Vec<BitSet>, QueryError> {
    let mut out: Vec<BitSet> = Vec::new();
    match a {
        Activation::All => out.push(BitSet::full(universe)),
        Activation::Fixed(s) => out.push(s.clone()),
        Activation::Groups(b) => {
            let groups = &scheme.expect("validated").primary().groups;
            let k = groups.len();
            if k > 20 {
                return Err(QueryError::TooLarge(format!("{k} groups (limit 20)")));
            }
            for bits in 0u64..(1u64 << k) {
                if !b.contains(bits.count_ones() as usize) {
                    continue;
                }
                let mut set = BitSet::new(universe);
                for (g, group) in groups.iter().enumerate() {
                    if bits >> g & 1 == 1 {
                        set.union_with(&group.members);
                    }
                }
                out.push(set);
            }
        }
        Activation::OneOfLevels => {
            for g in scheme.expect("validated").levels().iter().flat_map(|l| &l.groups) {
                out.push(g.members.clone());
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}
