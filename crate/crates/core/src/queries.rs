//! Declarative queries over (sub-dataset, itemset) pairs and their
//! compilation into a constraint network.
//!
//! A query is split in two halves: what the sub-dataset may look like
//! (item and transaction [`Activation`]s) and what the itemset must satisfy
//! (frequency, closedness, size, category span, required and forbidden
//! items). The classic templates are provided as constructors:
//!
//! | template            | items                   | transactions            |
//! |---------------------|-------------------------|-------------------------|
//! | [`Query::q1`]       | all                     | all                     |
//! | [`Query::q2`]       | `lb_I..=ub_I` groups    | all                     |
//! | [`Query::q3`]       | all                     | `lb_T..=ub_T` groups    |
//! | [`Query::q4`]       | `lb_I..=ub_I` groups    | `lb_T..=ub_T` groups    |
//! | [`Query::where_frequent`] | the single item   | exactly one group of any level |

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::closedpattern::{post_closed_pattern_sub, post_frequent_sub};
use crate::constraints::{
    post_category_span, post_channeling, post_exactly_one_group, post_forbidden_items, post_group_activation,
    post_min_size, post_reified_fci, post_required_item, Cardinality, ModelError,
};
use crate::dataset::{DatasetError, Frequency, Itemset, SubDatasetMask, Threshold, TransactionDatabase};
use crate::engine::{Control, EngineError, Role, SearchMonitor, SearchStats, Solver, Store, Var};
use crate::partition::{Axis, Level, PartitionScheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bounds {
    pub lb: usize,
    pub ub: usize,
}

impl Bounds {
    pub fn new(lb: usize, ub: usize) -> Self {
        Bounds { lb, ub }
    }

    pub fn contains(&self, k: usize) -> bool {
        self.lb <= k && k <= self.ub
    }
}

/// Which part of one axis (items or transactions) is active.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Activation {
    All,
    /// Whole groups of the scheme's first level, between `lb` and `ub` of them.
    Groups(Bounds),
    /// Exactly this set.
    Fixed(BitSet),
    /// Exactly one group, taken from any level of the scheme.
    OneOfLevels,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    /// The constraint model.
    Cp,
    /// Enumerate sub-datasets, then run a closed-itemset miner on each.
    Baseline,
    /// Exhaustive enumeration of masks and itemsets.
    Oracle,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Cp => "cp",
            Engine::Baseline => "baseline",
            Engine::Oracle => "oracle",
        }
    }
}

/// How the mining part of the CP model is posted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MiningModel {
    /// The dedicated global propagator.
    Global,
    /// The reified coverage / frequency / closedness decomposition.
    Reified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub theta: Threshold,
    pub closed: bool,
    pub min_size: Option<usize>,
    /// Bounds on the number of item groups the itemset touches.
    pub span: Option<Bounds>,
    pub require: Vec<usize>,
    pub forbid: Vec<usize>,
    pub items: Activation,
    pub transactions: Activation,
    pub engine: Engine,
}

impl Query {
    /// Frequent closed itemsets of the whole dataset.
    pub fn q1(theta: Threshold) -> Self {
        Query {
            theta,
            closed: true,
            min_size: None,
            span: None,
            require: Vec::new(),
            forbid: Vec::new(),
            items: Activation::All,
            transactions: Activation::All,
            engine: Engine::Cp,
        }
    }

    /// Q1 restricted to itemsets touching `lb..=ub` item groups.
    pub fn q1_span(theta: Threshold, lb: usize, ub: usize) -> Self {
        Self::q1(theta).with_span(lb, ub)
    }

    pub fn q2(theta: Threshold, lb_items: usize, ub_items: usize) -> Self {
        Self::q1(theta).with_items(Activation::Groups(Bounds::new(lb_items, ub_items)))
    }

    pub fn q3(theta: Threshold, lb_trans: usize, ub_trans: usize) -> Self {
        Self::q1(theta).with_transactions(Activation::Groups(Bounds::new(lb_trans, ub_trans)))
    }

    pub fn q4(theta: Threshold, items: Bounds, transactions: Bounds) -> Self {
        Self::q1(theta)
            .with_items(Activation::Groups(items))
            .with_transactions(Activation::Groups(transactions))
    }

    /// Where is `item` frequent: frequent itemsets containing `item`, with
    /// only that item active, mined in exactly one transaction group of any
    /// level (region, department, city, ...).
    pub fn where_frequent(theta: Threshold, item: usize, item_count: usize) -> Self {
        let mut q = Self::q1(theta)
            .with_items(Activation::Fixed(BitSet::from_indices(item_count, [item])))
            .with_transactions(Activation::OneOfLevels)
            .requiring(item);
        q.closed = false;
        q
    }

    pub fn with_span(mut self, lb: usize, ub: usize) -> Self {
        self.span = Some(Bounds::new(lb, ub));
        self
    }

    pub fn with_min_size(mut self, k: usize) -> Self {
        self.min_size = Some(k);
        self
    }

    pub fn with_items(mut self, a: Activation) -> Self {
        self.items = a;
        self
    }

    pub fn with_transactions(mut self, a: Activation) -> Self {
        self.transactions = a;
        self
    }

    pub fn requiring(mut self, item: usize) -> Self {
        self.require.push(item);
        self
    }

    pub fn forbidding(mut self, item: usize) -> Self {
        self.forbid.push(item);
        self
    }

    pub fn with_closed(mut self, closed: bool) -> Self {
        self.closed = closed;
        self
    }

    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }

    pub fn required_set(&self, n: usize) -> BitSet {
        BitSet::from_indices(n, self.require.iter().copied())
    }

    pub fn forbidden_set(&self, n: usize) -> BitSet {
        BitSet::from_indices(n, self.forbid.iter().copied())
    }

    /// Checks the query against the instance it will run on.
    pub fn validate(&self, inst: &Instance) -> Result<(), QueryError> {
        let n = inst.db.item_count();
        let m = inst.db.transaction_count();
        check_activation(&self.items, Axis::Items, n, inst.item_scheme.as_deref())?;
        check_activation(
            &self.transactions,
            Axis::Transactions,
            m,
            inst.transaction_scheme.as_deref(),
        )?;
        if let Some(k) = self.min_size {
            if k == 0 || k > n {
                return Err(ModelError::MinSize { k, n }.into());
            }
        }
        if let Some(b) = self.span {
            if inst.item_scheme.is_none() {
                return Err(QueryError::MissingScheme(Axis::Items));
            }
            if b.lb > b.ub {
                return Err(QueryError::Bounds {
                    axis: Axis::Items,
                    lb: b.lb,
                    ub: b.ub,
                    groups: inst.item_scheme.as_ref().unwrap().primary().len(),
                });
            }
        }
        if let Some(&i) = self.require.iter().chain(&self.forbid).find(|&&i| i >= n) {
            return Err(ModelError::ItemOutOfRange(i).into());
        }
        Ok(())
    }
}

fn check_activation(
    a: &Activation,
    axis: Axis,
    universe: usize,
    scheme: Option<&PartitionScheme>,
) -> Result<(), QueryError> {
    match a {
        Activation::All => Ok(()),
        Activation::Fixed(set) if set.universe() != universe => Err(QueryError::MaskUniverse {
            axis,
            expected: universe,
            got: set.universe(),
        }),
        Activation::Fixed(_) => Ok(()),
        Activation::Groups(b) => {
            let scheme = scheme.ok_or(QueryError::MissingScheme(axis))?;
            let level = scheme.primary();
            if b.lb > b.ub || b.ub > level.len() {
                return Err(QueryError::Bounds {
                    axis,
                    lb: b.lb,
                    ub: b.ub,
                    groups: level.len(),
                });
            }
            if let Some(g) = level.groups.iter().find(|g| g.members.is_empty()) {
                return Err(QueryError::EmptyGroup(g.name.clone()));
            }
            Ok(())
        }
        Activation::OneOfLevels => scheme.map(|_| ()).ok_or(QueryError::MissingScheme(axis)),
    }
}

impl Activation {
    /// Whether `set` is one of the masks this activation allows.
    pub fn admits(&self, set: &BitSet, scheme: Option<&PartitionScheme>) -> bool {
        match self {
            Activation::All => set.is_full(),
            Activation::Fixed(s) => s == set,
            Activation::Groups(b) => scheme
                .and_then(|s| s.primary().as_union(set))
                .is_some_and(|groups| b.contains(groups.len())),
            Activation::OneOfLevels => scheme.is_some_and(|s| {
                s.levels()
                    .iter()
                    .flat_map(|l| &l.groups)
                    .any(|g| !g.members.is_empty() && &g.members == set)
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("query needs a {0:?} partition scheme")]
    MissingScheme(Axis),
    #[error("scheme axis or size does not match the database ({0:?})")]
    SchemeMismatch(Axis),
    #[error("{axis:?} bounds ({lb}, {ub}) invalid for {groups} groups")]
    Bounds {
        axis: Axis,
        lb: usize,
        ub: usize,
        groups: usize,
    },
    #[error("group `{0}` is empty and cannot be activated as a whole")]
    EmptyGroup(String),
    #[error("{axis:?} mask has universe {got}, expected {expected}")]
    MaskUniverse { axis: Axis, expected: usize, got: usize },
    #[error("{0}")]
    NotSupported(&'static str),
    #[error("instance too large for exhaustive enumeration: {0}")]
    TooLarge(String),
    #[error("run interrupted")]
    Interrupted,
    #[error("engine produced a pair that violates the query: {0}")]
    InvalidSolution(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
}

/// A database together with its optional item and transaction schemes.
#[derive(Debug, Clone)]
pub struct Instance {
    pub db: Arc<TransactionDatabase>,
    pub item_scheme: Option<Arc<PartitionScheme>>,
    pub transaction_scheme: Option<Arc<PartitionScheme>>,
}

impl Instance {
    pub fn new(db: TransactionDatabase) -> Self {
        Instance {
            db: Arc::new(db),
            item_scheme: None,
            transaction_scheme: None,
        }
    }

    pub fn with_scheme(mut self, scheme: PartitionScheme) -> Result<Self, QueryError> {
        let axis = scheme.axis();
        let universe = match axis {
            Axis::Items => self.db.item_count(),
            Axis::Transactions => self.db.transaction_count(),
        };
        if scheme.universe() != universe {
            return Err(QueryError::SchemeMismatch(axis));
        }
        match axis {
            Axis::Items => self.item_scheme = Some(Arc::new(scheme)),
            Axis::Transactions => self.transaction_scheme = Some(Arc::new(scheme)),
        }
        Ok(self)
    }

    pub fn scheme(&self, axis: Axis) -> Option<&PartitionScheme> {
        match axis {
            Axis::Items => self.item_scheme.as_deref(),
            Axis::Transactions => self.transaction_scheme.as_deref(),
        }
    }
}

/// One element of a theory: a sub-dataset and an itemset mined in it.
///
/// Ordering is canonical: active items, then active transactions, then the
/// itemset, each compared lexicographically on ascending indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SolutionPair {
    pub mask: SubDatasetMask,
    pub itemset: Itemset,
    pub support: usize,
}

impl SolutionPair {
    pub fn frequency(&self) -> Frequency {
        Frequency {
            support: self.support,
            active: self.mask.transactions.count(),
        }
    }
}

/// Counters gathered while computing a theory.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunStats {
    /// Distinct fully-decided, consistent sub-datasets reached (cp), or
    /// sub-datasets mined (baseline, oracle).
    pub masks_explored: u64,
    /// Search nodes (cp) or closure-extension steps (baseline).
    pub nodes: u64,
}

impl RunStats {
    pub fn merge(&mut self, other: &RunStats) {
        self.masks_explored += other.masks_explored;
        self.nodes += other.nodes;
    }
}

/// A canonically ordered, duplicate-free set of solution pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Theory {
    pub pairs: Vec<SolutionPair>,
    pub stats: RunStats,
}

impl Theory {
    pub fn from_pairs<I: IntoIterator<Item = SolutionPair>>(pairs: I, stats: RunStats) -> Self {
        let set: BTreeSet<SolutionPair> = pairs.into_iter().collect();
        Theory {
            pairs: set.into_iter().collect(),
            stats,
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Set equality, ignoring statistics.
    pub fn same_pairs(&self, other: &Theory) -> bool {
        self.pairs == other.pairs
    }

    /// The first pair present in exactly one of the two theories.
    pub fn first_difference<'a>(&'a self, other: &'a Theory) -> Option<&'a SolutionPair> {
        let a: BTreeSet<_> = self.pairs.iter().collect();
        let b: BTreeSet<_> = other.pairs.iter().collect();
        a.symmetric_difference(&b).next().copied()
    }
}

/// Lets a long run be cut short (timeouts, cancellation).
pub trait Interrupt {
    fn interrupted(&self) -> bool;
}

/// Runs to completion.
pub struct NoInterrupt;

impl Interrupt for NoInterrupt {
    fn interrupted(&self) -> bool {
        false
    }
}

/// Variable layout of an assembled model.
#[derive(Debug, Clone)]
pub struct Layout {
    pub x: Vec<Var>,
    pub y: Vec<Var>,
    pub h: Vec<Var>,
    pub v: Vec<Var>,
    pub item_indicators: Vec<Var>,
    pub transaction_indicators: Vec<Var>,
}

impl Layout {
    /// Decision variables that select the sub-dataset, in branching order.
    pub fn dataset_vars(&self) -> Vec<Var> {
        let mut order = self.item_indicators.clone();
        order.extend(&self.transaction_indicators);
        order.extend(&self.h);
        order.extend(&self.v);
        order
    }

    /// Dataset-first order: group indicators, remaining H/V, then X, then Y.
    pub fn branching(&self) -> Vec<Var> {
        let mut order = self.dataset_vars();
        order.extend(&self.x);
        order.extend(&self.y);
        order
    }

    fn bits(vars: &[Var], s: &Store) -> BitSet {
        BitSet::from_indices(vars.len(), (0..vars.len()).filter(|&k| s.is_true(vars[k])))
    }

    pub fn mask_fixed(&self, s: &Store) -> bool {
        s.all_fixed(&self.h) && s.all_fixed(&self.v)
    }

    /// Reads the solution pair of a full assignment.
    pub fn extract(&self, s: &Store) -> SolutionPair {
        SolutionPair {
            mask: SubDatasetMask::new(Self::bits(&self.h, s), Self::bits(&self.v, s)),
            itemset: Self::bits(&self.x, s),
            support: self.y.iter().filter(|&&y| s.is_true(y)).count(),
        }
    }
}

/// A solver loaded with the full network of a query.
#[derive(Clone)]
pub struct Model {
    pub solver: Solver,
    pub layout: Layout,
}

/// Builds the network `DataSet ∧ Channeling ∧ Mining` for `query`.
///
/// A network that is already unsatisfiable at the root is not an error: the
/// returned model simply has no solutions.
pub fn assemble(query: &Query, inst: &Instance, mining: MiningModel) -> Result<Model, QueryError> {
    query.validate(inst)?;
    let db = &inst.db;
    let (n, m) = (db.item_count(), db.transaction_count());
    let mut solver = Solver::new();
    let layout_vars = (
        solver.new_vars(Role::Item, n),
        solver.new_vars(Role::Transaction, m),
        solver.new_vars(Role::ActiveItem, n),
        solver.new_vars(Role::ActiveTransaction, m),
    );
    let mut model = Model {
        solver,
        layout: Layout {
            x: layout_vars.0,
            y: layout_vars.1,
            h: layout_vars.2,
            v: layout_vars.3,
            item_indicators: Vec::new(),
            transaction_indicators: Vec::new(),
        },
    };
    match post_network(query, inst, mining, &mut model) {
        Ok(()) | Err(ModelError::Engine(EngineError::RootFailure)) => Ok(model),
        Err(e) => Err(e.into()),
    }
}

fn post_activation(
    solver: &mut Solver,
    a: &Activation,
    scheme: Option<&PartitionScheme>,
    vars: &[Var],
) -> Result<Vec<Var>, ModelError> {
    match a {
        Activation::All => {
            for &v in vars {
                solver.fix(v, true)?;
            }
            Ok(Vec::new())
        }
        Activation::Fixed(set) => {
            for (k, &v) in vars.iter().enumerate() {
                solver.fix(v, set.contains(k))?;
            }
            Ok(Vec::new())
        }
        Activation::Groups(b) => post_group_activation(solver, scheme.expect("validated").primary(), vars, b.lb, b.ub),
        Activation::OneOfLevels => post_exactly_one_group(solver, scheme.expect("validated").levels(), vars),
    }
}

fn post_network(query: &Query, inst: &Instance, mining: MiningModel, model: &mut Model) -> Result<(), ModelError> {
    let Model { solver, layout } = model;
    let db = &inst.db;
    post_channeling(solver, &layout.h, &layout.x, &layout.v, &layout.y)?;

    layout.item_indicators = post_activation(solver, &query.items, inst.item_scheme.as_deref(), &layout.h)?;
    layout.transaction_indicators = post_activation(
        solver,
        &query.transactions,
        inst.transaction_scheme.as_deref(),
        &layout.v,
    )?;
    // Frequencies are only defined over a non-empty set of transactions.
    solver.post(alloc::boxed::Box::new(Cardinality::new(
        layout.v.clone(),
        1,
        layout.v.len(),
    )))?;

    post_min_size(solver, &layout.x, query.min_size.unwrap_or(1))?;
    if let Some(b) = query.span {
        let level = inst.item_scheme.as_deref().expect("validated").primary();
        post_category_span(solver, &layout.x, level, b.lb, b.ub)?;
    }
    for &i in &query.require {
        post_required_item(solver, &layout.x, i)?;
    }
    post_forbidden_items(solver, &layout.x, &query.forbidden_set(db.item_count()))?;

    let (x, y, h, v) = (&layout.x, &layout.y, &layout.h, &layout.v);
    match (mining, query.closed) {
        (MiningModel::Global, true) => post_closed_pattern_sub(solver, db.clone(), x, h, y, v, query.theta),
        (MiningModel::Global, false) => post_frequent_sub(solver, db.clone(), x, h, y, v, query.theta),
        (MiningModel::Reified, closed) => post_reified_fci(solver, db, x, y, h, v, query.theta, closed),
    }
}

/// Counts sub-datasets reached during search and polls the interrupt.
struct CpMonitor<'a> {
    layout: &'a Layout,
    interrupt: &'a dyn Interrupt,
    full_at: Vec<bool>,
    masks: u64,
}

impl SearchMonitor for CpMonitor<'_> {
    fn on_node(&mut self, store: &Store, depth: usize) -> Control {
        self.full_at.truncate(depth);
        let full = self.layout.mask_fixed(store);
        let parent_full = depth > 0 && self.full_at.get(depth - 1).copied().unwrap_or(false);
        if full && !parent_full {
            self.masks += 1;
        }
        self.full_at.push(full);
        if self.interrupt.interrupted() {
            Control::Stop
        } else {
            Control::Continue
        }
    }
}

impl Model {
    /// Enumerates every solution pair of the model.
    pub fn run(&mut self, interrupt: &dyn Interrupt) -> Result<(Vec<SolutionPair>, RunStats), QueryError> {
        let mut pairs = Vec::new();
        let order = self.layout.branching();
        let mut monitor = CpMonitor {
            layout: &self.layout,
            interrupt,
            full_at: Vec::new(),
            masks: 0,
        };
        let layout = &self.layout;
        let stats: SearchStats = self
            .solver
            .search_with(&order, &mut |s| pairs.push(layout.extract(s)), &mut monitor);
        if stats.aborted {
            return Err(QueryError::Interrupted);
        }
        let run = RunStats {
            masks_explored: monitor.masks,
            nodes: stats.nodes,
        };
        Ok((pairs, run))
    }

    /// Splits the search over the sub-dataset decisions into independent
    /// models whose solution sets partition this model's.
    pub fn split(&self, depth: usize) -> Vec<Model> {
        self.solver
            .split(&self.layout.dataset_vars(), depth)
            .into_iter()
            .map(|solver| Model {
                solver,
                layout: self.layout.clone(),
            })
            .collect()
    }
}

/// Theory of `query` under the constraint model.
pub fn run_cp(
    query: &Query,
    inst: &Instance,
    mining: MiningModel,
    interrupt: &dyn Interrupt,
) -> Result<Theory, QueryError> {
    let mut model = assemble(query, inst, mining)?;
    let (pairs, stats) = model.run(interrupt)?;
    Ok(Theory::from_pairs(pairs, stats))
}

/// Computes `Th(query)` with the engine named in the query, then re-checks
/// every pair against the query's definition.
pub fn run_theory(query: &Query, inst: &Instance) -> Result<Theory, QueryError> {
    run_theory_with(query, inst, &NoInterrupt)
}

pub fn run_theory_with(query: &Query, inst: &Instance, interrupt: &dyn Interrupt) -> Result<Theory, QueryError> {
    let theory = match query.engine {
        Engine::Cp => run_cp(query, inst, MiningModel::Global, interrupt)?,
        Engine::Baseline => crate::reference::pp_mine(query, inst, interrupt)?,
        Engine::Oracle => crate::reference::brute_force_theory_with(query, inst, interrupt)?,
    };
    verify_theory(query, inst, &theory)?;
    Ok(theory)
}

/// Re-validates every pair of a theory from the dataset primitives.
pub fn verify_theory(query: &Query, inst: &Instance, theory: &Theory) -> Result<(), QueryError> {
    for pair in &theory.pairs {
        let support = inst.db.cover(&pair.itemset, &pair.mask).count();
        if support != pair.support || !holds(query, inst, &pair.mask, &pair.itemset) {
            return Err(QueryError::InvalidSolution(alloc::format!(
                "items {:?} / transactions {:?} / itemset {:?}",
                pair.mask.items,
                pair.mask.transactions,
                pair.itemset
            )));
        }
    }
    Ok(())
}

/// `Q(D, P)` evaluated by definition.
pub fn holds(query: &Query, inst: &Instance, mask: &SubDatasetMask, itemset: &Itemset) -> bool {
    let db = &inst.db;
    if mask.transactions.is_empty()
        || !query.items.admits(&mask.items, inst.item_scheme.as_deref())
        || !query
            .transactions
            .admits(&mask.transactions, inst.transaction_scheme.as_deref())
    {
        return false;
    }
    if itemset.is_empty() || !itemset.is_subset(&mask.items) {
        return false;
    }
    if query.require.iter().any(|&i| !itemset.contains(i)) || query.forbid.iter().any(|&i| itemset.contains(i)) {
        return false;
    }
    if query.min_size.is_some_and(|k| itemset.count() < k) {
        return false;
    }
    if let Some(b) = query.span {
        let Some(scheme) = inst.item_scheme.as_deref() else {
            return false;
        };
        if !b.contains(span_of(scheme.primary(), itemset)) {
            return false;
        }
    }
    let Ok(freq) = db.frequency(itemset, mask) else {
        return false;
    };
    if !freq.meets(query.theta) {
        return false;
    }
    !query.closed || db.closure(itemset, mask).is_ok_and(|c| &c == itemset)
}

/// Number of groups of `level` the itemset intersects.
pub fn span_of(level: &Level, itemset: &BitSet) -> usize {
    level.groups.iter().filter(|g| g.members.intersects(itemset)).count()
}

/// Human-readable name of one axis of a mask: `ALL`, a `+`-joined list of
/// group names when the mask is a union of whole groups of some level, or
/// the explicit member names.
pub fn describe_axis(set: &BitSet, scheme: Option<&PartitionScheme>, name: impl Fn(usize) -> String) -> String {
    if set.is_full() {
        return "ALL".to_string();
    }
    if let Some(scheme) = scheme {
        let best = scheme
            .levels()
            .iter()
            .filter_map(|l| l.as_union(set).filter(|g| !g.is_empty()).map(|g| (l, g)))
            .min_by_key(|(_, g)| g.len());
        if let Some((level, groups)) = best {
            let names: Vec<&str> = groups.iter().map(|&g| level.groups[g].name.as_str()).collect();
            return names.join("+");
        }
    }
    if set.is_empty() {
        return "NONE".to_string();
    }
    let names: Vec<String> = set.iter().map(name).collect();
    names.join(" ")
}

/// `(items, transactions)` descriptors of a mask.
pub fn describe_mask(mask: &SubDatasetMask, inst: &Instance) -> (String, String) {
    (
        describe_axis(&mask.items, inst.item_scheme.as_deref(), |i| inst.db.item_name(i)),
        describe_axis(&mask.transactions, inst.transaction_scheme.as_deref(), |j| {
            (j + 1).to_string()
        }),
    )
}

/// Space-separated item names of an itemset.
pub fn describe_itemset(itemset: &Itemset, db: &TransactionDatabase) -> String {
    let names: Vec<String> = itemset.iter().map(|i| db.item_name(i)).collect();
    names.join(" ")
}
