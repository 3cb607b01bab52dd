//! A small Boolean propagation engine: tri-state variables, a trail for
//! backtracking, a FIFO propagation queue and exhaustive depth-first search.

use alloc::boxed::Box;
use alloc::collections::VecDeque;
use alloc::vec::Vec;
use core::fmt;

/// Handle to a Boolean variable of a [`Solver`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Raw handle, for tests and tooling. The variable may not exist.
    pub fn from_index(i: usize) -> Var {
        Var(i as u32)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// What a variable stands for in the itemset model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// X: item belongs to the extracted itemset.
    Item,
    /// Y: transaction belongs to the cover.
    Transaction,
    /// H: item column is part of the sub-dataset.
    ActiveItem,
    /// V: transaction row is part of the sub-dataset.
    ActiveTransaction,
    Auxiliary,
}

/// Signal raised by a propagator that found its constraint unsatisfiable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conflict;

pub type PropResult = Result<(), Conflict>;

/// Variable values plus the trail needed to undo them.
#[derive(Clone)]
pub struct Store {
    values: Vec<Option<bool>>,
    roles: Vec<Role>,
    /// Variables assigned since the root, in assignment order. Boolean
    /// variables only ever move from unassigned to a value, so the previous
    /// state of every entry is "unassigned".
    trail: Vec<Var>,
    marks: Vec<usize>,
    events: Vec<Var>,
}

impl Store {
    fn new() -> Self {
        Store {
            values: Vec::new(),
            roles: Vec::new(),
            trail: Vec::new(),
            marks: Vec::new(),
            events: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn value(&self, v: Var) -> Option<bool> {
        self.values[v.index()]
    }

    #[inline]
    pub fn is_true(&self, v: Var) -> bool {
        self.values[v.index()] == Some(true)
    }

    #[inline]
    pub fn is_false(&self, v: Var) -> bool {
        self.values[v.index()] == Some(false)
    }

    #[inline]
    pub fn is_fixed(&self, v: Var) -> bool {
        self.values[v.index()].is_some()
    }

    pub fn role(&self, v: Var) -> Role {
        self.roles[v.index()]
    }

    pub fn all_fixed(&self, vars: &[Var]) -> bool {
        vars.iter().all(|&v| self.is_fixed(v))
    }

    /// Assigns `v := value`. Assigning the value it already has is a no-op;
    /// assigning the opposite value is a conflict.
    #[inline]
    pub fn assign(&mut self, v: Var, value: bool) -> PropResult {
        match self.values[v.index()] {
            Some(cur) if cur == value => Ok(()),
            Some(_) => Err(Conflict),
            None => {
                self.values[v.index()] = Some(value);
                self.trail.push(v);
                self.events.push(v);
                Ok(())
            }
        }
    }

    /// Current decision level.
    pub fn level(&self) -> usize {
        self.marks.len()
    }

    pub fn values(&self) -> &[Option<bool>] {
        &self.values
    }

    fn push_level(&mut self) {
        self.marks.push(self.trail.len());
    }

    fn pop_level(&mut self) {
        let mark = self.marks.pop().expect("pop at root level");
        for v in self.trail.drain(mark..) {
            self.values[v.index()] = None;
        }
        self.events.clear();
    }

    /// Makes every current assignment permanent (new root).
    fn commit(&mut self) {
        self.trail.clear();
        self.marks.clear();
    }
}

/// A filtering procedure for one constraint.
///
/// `propagate` must be sound: it may only fix a variable to the value it
/// takes in every solution of the constraint extending the current state,
/// and must report a conflict when no such solution exists. On a full
/// assignment it must therefore act as an exact checker.
pub trait Propagator: Send {
    fn name(&self) -> &'static str;

    /// Variables whose assignment wakes the propagator.
    fn watched(&self) -> Vec<Var>;

    fn propagate(&mut self, store: &mut Store) -> PropResult;

    /// True when every extension of the current state satisfies the constraint.
    fn is_entailed(&self, store: &Store) -> bool;

    fn clone_box(&self) -> Box<dyn Propagator>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropId(usize);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("propagator watches unknown variable {0:?}")]
    UnknownVariable(Var),
    #[error("constraint network is unsatisfiable at the root")]
    RootFailure,
    #[error("constraints can only be posted at the root level")]
    NotAtRoot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Consistent,
    Failed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// Observes search progress; may abort the search.
pub trait SearchMonitor {
    /// Called on every node after successful propagation.
    fn on_node(&mut self, store: &Store, depth: usize) -> Control;
}

/// Never stops, observes nothing.
pub struct Unmonitored;

impl SearchMonitor for Unmonitored {
    fn on_node(&mut self, _: &Store, _: usize) -> Control {
        Control::Continue
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub solutions: u64,
    pub nodes: u64,
    pub failures: u64,
    pub aborted: bool,
}

impl SearchStats {
    pub fn merge(&mut self, other: &SearchStats) {
        self.solutions += other.solutions;
        self.nodes += other.nodes;
        self.failures += other.failures;
        self.aborted |= other.aborted;
    }
}

pub struct Solver {
    store: Store,
    props: Vec<Box<dyn Propagator>>,
    watchers: Vec<Vec<usize>>,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    failed: bool,
}

impl Clone for Solver {
    fn clone(&self) -> Self {
        Solver {
            store: self.store.clone(),
            props: self.props.iter().map(|p| p.clone_box()).collect(),
            watchers: self.watchers.clone(),
            queue: self.queue.clone(),
            queued: self.queued.clone(),
            failed: self.failed,
        }
    }
}

impl Default for Solver {
    fn default() -> Self {
        Self::new()
    }
}

impl Solver {
    pub fn new() -> Self {
        Solver {
            store: Store::new(),
            props: Vec::new(),
            watchers: Vec::new(),
            queue: VecDeque::new(),
            queued: Vec::new(),
            failed: false,
        }
    }

    pub fn new_var(&mut self, role: Role) -> Var {
        let v = Var(self.store.values.len() as u32);
        self.store.values.push(None);
        self.store.roles.push(role);
        self.watchers.push(Vec::new());
        v
    }

    pub fn new_vars(&mut self, role: Role, count: usize) -> Vec<Var> {
        (0..count).map(|_| self.new_var(role)).collect()
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    pub fn propagator_count(&self) -> usize {
        self.props.len()
    }

    /// True once the network has been proven unsatisfiable at the root.
    pub fn is_failed(&self) -> bool {
        self.failed
    }

    /// Registers a propagator and runs the network to fixpoint.
    pub fn post(&mut self, prop: Box<dyn Propagator>) -> Result<PropId, EngineError> {
        if self.store.level() != 0 {
            return Err(EngineError::NotAtRoot);
        }
        let watched = prop.watched();
        if let Some(&bad) = watched.iter().find(|v| v.index() >= self.store.len()) {
            return Err(EngineError::UnknownVariable(bad));
        }
        let id = self.props.len();
        for v in watched {
            let w = &mut self.watchers[v.index()];
            if w.last() != Some(&id) {
                w.push(id);
            }
        }
        self.props.push(prop);
        self.queued.push(true);
        self.queue.push_back(id);
        self.root_fixpoint()?;
        Ok(PropId(id))
    }

    /// Fixes a variable at the root and propagates.
    pub fn fix(&mut self, v: Var, value: bool) -> Result<(), EngineError> {
        if self.store.level() != 0 {
            return Err(EngineError::NotAtRoot);
        }
        if v.index() >= self.store.len() {
            return Err(EngineError::UnknownVariable(v));
        }
        if self.failed || self.store.assign(v, value).is_err() {
            self.failed = true;
            return Err(EngineError::RootFailure);
        }
        self.root_fixpoint()
    }

    fn root_fixpoint(&mut self) -> Result<(), EngineError> {
        if self.failed || self.propagate_to_fixpoint() == Outcome::Failed {
            self.failed = true;
            return Err(EngineError::RootFailure);
        }
        Ok(())
    }

    /// Runs queued propagators until none can fix anything more.
    pub fn propagate_to_fixpoint(&mut self) -> Outcome {
        loop {
            for v in self.store.events.drain(..) {
                for &p in &self.watchers[v.index()] {
                    if !self.queued[p] {
                        self.queued[p] = true;
                        self.queue.push_back(p);
                    }
                }
            }
            let Some(p) = self.queue.pop_front() else {
                return Outcome::Consistent;
            };
            self.queued[p] = false;
            if self.props[p].propagate(&mut self.store).is_err() {
                self.reset_queue();
                return Outcome::Failed;
            }
        }
    }

    fn reset_queue(&mut self) {
        for p in self.queue.drain(..) {
            self.queued[p] = false;
        }
        self.store.events.clear();
    }

    /// Opens a decision level, assigns `v := value` and propagates. On
    /// failure the level is closed again.
    pub fn try_decision(&mut self, v: Var, value: bool) -> Outcome {
        self.store.push_level();
        if self.store.assign(v, value).is_ok() && self.propagate_to_fixpoint() == Outcome::Consistent {
            Outcome::Consistent
        } else {
            self.reset_queue();
            self.store.pop_level();
            Outcome::Failed
        }
    }

    /// Undoes the most recent open decision level.
    pub fn backtrack(&mut self) {
        self.reset_queue();
        self.store.pop_level();
    }

    /// Enumerates every full assignment accepted by all propagators and
    /// returns how many were found.
    pub fn search_all(&mut self, branching: &[Var], sink: &mut dyn FnMut(&Store)) -> u64 {
        self.search_with(branching, sink, &mut Unmonitored).solutions
    }

    /// Depth-first search, deciding variables in `branching` order (then any
    /// remaining variable by index), value 1 before 0.
    pub fn search_with(
        &mut self,
        branching: &[Var],
        sink: &mut dyn FnMut(&Store),
        monitor: &mut dyn SearchMonitor,
    ) -> SearchStats {
        let mut stats = SearchStats::default();
        if self.failed {
            return stats;
        }
        let order = self.full_order(branching);
        let base = self.store.level();
        self.dfs(&order, 0, 0, sink, monitor, &mut stats);
        debug_assert_eq!(self.store.level(), base);
        stats
    }

    fn full_order(&self, branching: &[Var]) -> Vec<Var> {
        let mut listed = alloc::vec![false; self.store.len()];
        let mut order = Vec::with_capacity(self.store.len());
        for &v in branching {
            if !listed[v.index()] {
                listed[v.index()] = true;
                order.push(v);
            }
        }
        order.extend((0..self.store.len()).filter(|&i| !listed[i]).map(|i| Var(i as u32)));
        order
    }

    fn dfs(
        &mut self,
        order: &[Var],
        from: usize,
        depth: usize,
        sink: &mut dyn FnMut(&Store),
        monitor: &mut dyn SearchMonitor,
        stats: &mut SearchStats,
    ) -> Control {
        stats.nodes += 1;
        if monitor.on_node(&self.store, depth) == Control::Stop {
            stats.aborted = true;
            return Control::Stop;
        }
        let next = (from..order.len()).find(|&k| !self.store.is_fixed(order[k]));
        let Some(pos) = next else {
            debug_assert!(self.props.iter().all(|p| p.is_entailed(&self.store)));
            stats.solutions += 1;
            sink(&self.store);
            return Control::Continue;
        };
        let var = order[pos];
        for value in [true, false] {
            if self.try_decision(var, value) == Outcome::Failed {
                stats.failures += 1;
                continue;
            }
            let flow = self.dfs(order, pos + 1, depth + 1, sink, monitor, stats);
            self.backtrack();
            if flow == Control::Stop {
                return Control::Stop;
            }
        }
        Control::Continue
    }

    /// Splits the search space into independent sub-solvers by deciding up
    /// to `depth` free variables taken from `branching` only. The solution
    /// sets of the returned solvers are disjoint and their union is this
    /// solver's.
    pub fn split(&self, branching: &[Var], depth: usize) -> Vec<Solver> {
        let mut out = Vec::new();
        if self.failed {
            return out;
        }
        let mut work = self.clone();
        work.split_rec(branching, 0, depth, &mut out);
        out
    }

    fn split_rec(&mut self, order: &[Var], from: usize, depth: usize, out: &mut Vec<Solver>) {
        let next = (from..order.len()).find(|&k| !self.store.is_fixed(order[k]));
        match next {
            Some(pos) if depth > 0 => {
                for value in [true, false] {
                    if self.try_decision(order[pos], value) == Outcome::Consistent {
                        self.split_rec(order, pos + 1, depth - 1, out);
                        self.backtrack();
                    }
                }
            }
            _ => {
                let mut leaf = self.clone();
                leaf.store.commit();
                out.push(leaf);
            }
        }
    }
}
