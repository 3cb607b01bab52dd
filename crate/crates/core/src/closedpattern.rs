//! Global propagators for frequent (closed) itemsets mined inside a
//! sub-dataset circumscribed by the active-item and active-transaction
//! variables.
//!
//! Notation used below: `σ⁺` are the items fixed in the itemset, `σ⁻` the
//! active items fixed out of it, and `cover` the transactions that are
//! still possibly active, possibly covered and contain all of `σ⁺`. Every
//! completion of the current state has a cover that is a subset of `cover`
//! and a denominator of at least `|V = 1|`, which is what makes each rule
//! sound under partially assigned masks as well as fixed ones.

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::constraints::ModelError;
use crate::dataset::{Threshold, TransactionDatabase};
use crate::engine::{Conflict, PropResult, Propagator, Solver, Store, Var};

/// Which acceptance condition the propagator enforces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    /// Frequent and closed within the active items.
    Closed,
    /// Frequent only.
    Frequent,
}

/// `ClosedPatternSub(X, H, Y, V, θ)` and `FrequentSub(X, H, Y, V, θ)`.
#[derive(Clone)]
pub struct PatternSub {
    db: Arc<TransactionDatabase>,
    x: Arc<[Var]>,
    h: Arc<[Var]>,
    y: Arc<[Var]>,
    v: Arc<[Var]>,
    theta: Threshold,
    kind: PatternKind,
    cover: BitSet,
    scratch: BitSet,
}

impl PatternSub {
    pub fn new(
        db: Arc<TransactionDatabase>,
        x: &[Var],
        h: &[Var],
        y: &[Var],
        v: &[Var],
        theta: Threshold,
        kind: PatternKind,
    ) -> Result<Self, ModelError> {
        let (n, m) = (db.item_count(), db.transaction_count());
        for (len, want) in [(x.len(), n), (h.len(), n), (y.len(), m), (v.len(), m)] {
            if len != want {
                return Err(ModelError::Length(len, want));
            }
        }
        Ok(PatternSub {
            x: x.into(),
            h: h.into(),
            y: y.into(),
            v: v.into(),
            theta,
            kind,
            cover: BitSet::new(m),
            scratch: BitSet::new(m),
            db,
        })
    }

    fn closed(&self) -> bool {
        self.kind == PatternKind::Closed
    }

    /// Recomputes `cover` and returns `|V = 1|`.
    fn refresh_cover(&mut self, s: &Store) -> usize {
        self.cover.clear();
        let mut active = 0;
        for (j, (&v, &y)) in self.v.iter().zip(self.y.iter()).enumerate() {
            if s.is_true(v) {
                active += 1;
            }
            if !s.is_false(v) && !s.is_false(y) {
                self.cover.insert(j);
            }
        }
        for (i, &x) in self.x.iter().enumerate() {
            if s.is_true(x) {
                self.cover.intersect_with(self.db.column(i));
            }
        }
        active
    }

    /// Transaction `j` belongs to the final cover: it is active, covered, and
    /// every item it lacks stays out of the itemset.
    fn require_covered(&self, s: &mut Store, j: usize) -> PropResult {
        s.assign(self.v[j], true)?;
        s.assign(self.y[j], true)?;
        let row = self.db.row(j);
        for (i, &x) in self.x.iter().enumerate() {
            if !row.contains(i) {
                s.assign(x, false)?;
            }
        }
        Ok(())
    }

    /// Exact evaluation of the constraint on a full assignment.
    fn holds_on(&self, s: &Store) -> Option<bool> {
        let all = [&self.x, &self.h, &self.y, &self.v];
        if !all.iter().all(|vars| s.all_fixed(vars)) {
            return None;
        }
        let n = self.db.item_count();
        let m = self.db.transaction_count();
        let itemset = BitSet::from_indices(n, (0..n).filter(|&i| s.is_true(self.x[i])));
        let items = BitSet::from_indices(n, (0..n).filter(|&i| s.is_true(self.h[i])));
        let trans = BitSet::from_indices(m, (0..m).filter(|&j| s.is_true(self.v[j])));
        if trans.is_empty() || !itemset.is_subset(&items) {
            return Some(false);
        }
        let mask = crate::dataset::SubDatasetMask::new(items, trans);
        let cover = self.db.cover(&itemset, &mask);
        let y_ok = (0..m).all(|j| s.is_true(self.y[j]) == cover.contains(j));
        let freq_ok = self.theta.admits(cover.count(), mask.transactions.count());
        let closed_ok =
            !self.closed() || (!cover.is_empty() && self.db.closure_of_cover(&cover, &mask.items) == itemset);
        Some(y_ok && freq_ok && closed_ok)
    }
}

impl Propagator for PatternSub {
    fn name(&self) -> &'static str {
        match self.kind {
            PatternKind::Closed => "closed-pattern-sub",
            PatternKind::Frequent => "frequent-sub",
        }
    }

    fn watched(&self) -> Vec<Var> {
        self.x
            .iter()
            .chain(self.h.iter())
            .chain(self.y.iter())
            .chain(self.v.iter())
            .copied()
            .collect()
    }

    fn propagate(&mut self, s: &mut Store) -> PropResult {
        let n = self.db.item_count();
        let m = self.db.transaction_count();
        let active = self.refresh_cover(s);
        if active == 0 && s.all_fixed(&self.v) {
            return Err(Conflict);
        }
        let support = self.cover.count();
        if !self.theta.admits(support, active) {
            return Err(Conflict);
        }
        for i in 0..n {
            if s.is_true(self.x[i]) && s.is_false(self.h[i]) {
                return Err(Conflict);
            }
        }

        for j in 0..m {
            if !self.cover.contains(j) {
                s.assign(self.y[j], false)?;
            }
        }

        // One more active transaction would already be too many.
        if !self.theta.admits(support, active + 1) {
            for &v in self.v.iter() {
                if !s.is_fixed(v) {
                    s.assign(v, false)?;
                }
            }
        }

        // Transactions that must end up in the cover.
        let tight = support > 0 && !self.theta.admits(support - 1, active);
        for j in 0..m {
            if s.is_true(self.y[j]) || (tight && self.cover.contains(j)) {
                self.require_covered(s, j)?;
            }
        }

        let excluded: Vec<usize> = if self.closed() {
            (0..n)
                .filter(|&k| s.is_false(self.x[k]) && s.is_true(self.h[k]))
                .collect()
        } else {
            Vec::new()
        };
        for &k in &excluded {
            // Some covered transaction must lack k, or k joins the closure.
            self.scratch.clone_from(&self.cover);
            self.scratch.difference_with(self.db.column(k));
            match self.scratch.count() {
                0 => return Err(Conflict),
                1 => {
                    let j = self.scratch.first().unwrap();
                    self.require_covered(s, j)?;
                }
                _ => {}
            }
        }

        if self.closed() {
            // An item left out of the itemset whose column holds the whole
            // cover can only stay out by being inactive.
            for i in 0..n {
                if s.is_false(self.x[i]) && !s.is_fixed(self.h[i]) && self.cover.is_subset(self.db.column(i)) {
                    s.assign(self.h[i], false)?;
                }
            }
        }

        for i in 0..n {
            let xi = self.x[i];
            if s.is_fixed(xi) {
                continue;
            }
            if s.is_false(self.h[i]) {
                s.assign(xi, false)?;
                continue;
            }
            let col = self.db.column(i);
            let with_i = self.cover.intersection_count(col);
            if !self.theta.admits(with_i, active) {
                s.assign(xi, false)?;
            } else if self.closed() && with_i == support {
                if s.is_true(self.h[i]) {
                    s.assign(xi, true)?;
                }
            } else if self.closed()
                && excluded
                    .iter()
                    .any(|&k| self.cover.is_subset_within(col, self.db.column(k)))
            {
                s.assign(xi, false)?;
            }
        }

        // Covered-or-not decisions for individual transactions.
        for j in 0..m {
            let yj = self.y[j];
            if s.is_true(yj) {
                continue;
            }
            let row = self.db.row(j);
            let mut candidate = None;
            let mut candidates = 0;
            let mut lacks_chosen = false;
            for i in (0..n).filter(|&i| !row.contains(i)) {
                match s.value(self.x[i]) {
                    Some(true) => {
                        lacks_chosen = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        candidates += 1;
                        candidate = Some(i);
                    }
                }
            }
            if lacks_chosen {
                continue;
            }
            let vj = s.value(self.v[j]);
            match (s.value(yj), vj, candidates) {
                (None, Some(true), 0) => s.assign(yj, true)?,
                (Some(false), Some(true), 0) => return Err(Conflict),
                (Some(false), Some(true), 1) => s.assign(self.x[candidate.unwrap()], true)?,
                (Some(false), None, 0) => s.assign(self.v[j], false)?,
                _ => {}
            }
        }
        Ok(())
    }

    fn is_entailed(&self, s: &Store) -> bool {
        self.holds_on(s).unwrap_or(false)
    }

    fn clone_box(&self) -> Box<dyn Propagator> {
        Box::new(self.clone())
    }
}

#[allow(clippy::too_many_arguments)]
fn post_pattern(
    solver: &mut Solver,
    db: Arc<TransactionDatabase>,
    x: &[Var],
    h: &[Var],
    y: &[Var],
    v: &[Var],
    theta: Threshold,
    kind: PatternKind,
) -> Result<(), ModelError> {
    let prop = PatternSub::new(db, x, h, y, v, theta, kind)?;
    solver.post(Box::new(prop))?;
    Ok(())
}

/// Frequent closed itemsets of the sub-dataset selected by `h` and `v`.
pub fn post_closed_pattern_sub(
    solver: &mut Solver,
    db: Arc<TransactionDatabase>,
    x: &[Var],
    h: &[Var],
    y: &[Var],
    v: &[Var],
    theta: Threshold,
) -> Result<(), ModelError> {
    post_pattern(solver, db, x, h, y, v, theta, PatternKind::Closed)
}

/// Frequent itemsets of the sub-dataset selected by `h` and `v`.
pub fn post_frequent_sub(
    solver: &mut Solver,
    db: Arc<TransactionDatabase>,
    x: &[Var],
    h: &[Var],
    y: &[Var],
    v: &[Var],
    theta: Threshold,
) -> Result<(), ModelError> {
    post_pattern(solver, db, x, h, y, v, theta, PatternKind::Frequent)
}
