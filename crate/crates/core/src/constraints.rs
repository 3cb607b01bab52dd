//! Propagators for the dataset side (group activation, exactly-one-group),
//! the channeling between mask and itemset variables, itemset-side user
//! constraints, and the reified frequent-closed decomposition.

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::dataset::{Threshold, TransactionDatabase};
use crate::engine::{Conflict, EngineError, PropResult, Propagator, Role, Solver, Store, Var};
use crate::partition::Level;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("bounds ({lb}, {ub}) invalid for {groups} groups")]
    Bounds { lb: usize, ub: usize, groups: usize },
    #[error("minimum size {k} outside 1..={n}")]
    MinSize { k: usize, n: usize },
    #[error("item index {0} out of range")]
    ItemOutOfRange(usize),
    #[error("variable vectors have mismatched lengths ({0} vs {1})")]
    Length(usize, usize),
    #[error("exactly-one-group needs at least one level")]
    NoLevels,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// `premise = 1 ⇒ conclusion = 1`.
#[derive(Clone)]
pub struct Implies {
    premise: Var,
    conclusion: Var,
}

impl Implies {
    pub fn new(premise: Var, conclusion: Var) -> Self {
        Implies { premise, conclusion }
    }

    /// `active = 0 ⇒ member = 0`, i.e. `member ⇒ active`.
    pub fn channel(active: Var, member: Var) -> Self {
        Implies::new(member, active)
    }
}

impl Propagator for Implies {
    fn name(&self) -> &'static str {
        "implies"
    }

    fn watched(&self) -> Vec<Var> {
        alloc::vec![self.premise, self.conclusion]
    }

    fn propagate(&mut self, s: &mut Store) -> PropResult {
        if s.is_true(self.premise) {
            s.assign(self.conclusion, true)?;
        }
        if s.is_false(self.conclusion) {
            s.assign(self.premise, false)?;
        }
        Ok(())
    }

    fn is_entailed(&self, s: &Store) -> bool {
        s.is_false(self.premise) || s.is_true(self.conclusion)
    }

    fn clone_box(&self) -> Box<dyn Propagator> {
        Box::new(self.clone())
    }
}

/// All variables take the same value.
#[derive(Clone)]
pub struct AllEqual {
    vars: Vec<Var>,
}

impl AllEqual {
    pub fn new(vars: Vec<Var>) -> Self {
        AllEqual { vars }
    }
}

impl Propagator for AllEqual {
    fn name(&self) -> &'static str {
        "all-equal"
    }

    fn watched(&self) -> Vec<Var> {
        self.vars.clone()
    }

    fn propagate(&mut self, s: &mut Store) -> PropResult {
        if let Some(value) = self.vars.iter().find_map(|&v| s.value(v)) {
            for &v in &self.vars {
                s.assign(v, value)?;
            }
        }
        Ok(())
    }

    fn is_entailed(&self, s: &Store) -> bool {
        let first = self.vars.first().and_then(|&v| s.value(v));
        first.is_some() && self.vars.iter().all(|&v| s.value(v) == first) || self.vars.len() <= 1
    }

    fn clone_box(&self) -> Box<dyn Propagator> {
        Box::new(self.clone())
    }
}

/// `lb ≤ Σ vars ≤ ub`.
#[derive(Clone)]
pub struct Cardinality {
    vars: Vec<Var>,
    lb: usize,
    ub: usize,
}

impl Cardinality {
    pub fn new(vars: Vec<Var>, lb: usize, ub: usize) -> Self {
        Cardinality { vars, lb, ub }
    }

    fn counts(&self, s: &Store) -> (usize, usize) {
        let mut ones = 0;
        let mut free = 0;
        for &v in &self.vars {
            match s.value(v) {
                Some(true) => ones += 1,
                None => free += 1,
                Some(false) => {}
            }
        }
        (ones, free)
    }
}

impl Propagator for Cardinality {
    fn name(&self) -> &'static str {
        "cardinality"
    }

    fn watched(&self) -> Vec<Var> {
        self.vars.clone()
    }

    fn propagate(&mut self, s: &mut Store) -> PropResult {
        let (ones, free) = self.counts(s);
        if ones > self.ub || ones + free < self.lb {
            return Err(Conflict);
        }
        if free == 0 {
            return Ok(());
        }
        let fill = if ones == self.ub {
            false
        } else if ones + free == self.lb {
            true
        } else {
            return Ok(());
        };
        for &v in &self.vars {
            if !s.is_fixed(v) {
                s.assign(v, fill)?;
            }
        }
        Ok(())
    }

    fn is_entailed(&self, s: &Store) -> bool {
        let (ones, free) = self.counts(s);
        ones >= self.lb && ones + free <= self.ub
    }

    fn clone_box(&self) -> Box<dyn Propagator> {
        Box::new(self.clone())
    }
}

/// `target ⇔ ∨ sources`.
#[derive(Clone)]
pub struct OrChannel {
    target: Var,
    sources: Vec<Var>,
}

impl OrChannel {
    pub fn new(target: Var, sources: Vec<Var>) -> Self {
        OrChannel { target, sources }
    }
}

impl Propagator for OrChannel {
    fn name(&self) -> &'static str {
        "or-channel"
    }

    fn watched(&self) -> Vec<Var> {
        let mut w = self.sources.clone();
        w.push(self.target);
        w
    }

    fn propagate(&mut self, s: &mut Store) -> PropResult {
        let mut any_true = false;
        let mut free = None;
        let mut free_count = 0;
        for &v in &self.sources {
            match s.value(v) {
                Some(true) => any_true = true,
                None => {
                    free = Some(v);
                    free_count += 1
                }
                Some(false) => {}
            }
        }
        if any_true {
            return s.assign(self.target, true);
        }
        if free_count == 0 {
            return s.assign(self.target, false);
        }
        match s.value(self.target) {
            Some(false) => {
                for &v in &self.sources {
                    s.assign(v, false)?;
                }
            }
            Some(true) if free_count == 1 => s.assign(free.unwrap(), true)?,
            _ => {}
        }
        Ok(())
    }

    fn is_entailed(&self, s: &Store) -> bool {
        let any_true = self.sources.iter().any(|&v| s.is_true(v));
        let all_false = self.sources.iter().all(|&v| s.is_false(v));
        (any_true && s.is_true(self.target)) || (all_false && s.is_false(self.target))
    }

    fn clone_box(&self) -> Box<dyn Propagator> {
        Box::new(self.clone())
    }
}

/// The number of groups holding at least one true variable lies in `[lb, ub]`.
#[derive(Clone)]
pub struct CategorySpan {
    groups: Vec<Vec<Var>>,
    lb: usize,
    ub: usize,
}

impl CategorySpan {
    pub fn new(groups: Vec<Vec<Var>>, lb: usize, ub: usize) -> Self {
        CategorySpan { groups, lb, ub }
    }

    /// (touched, open): groups with a true member, and untouched groups
    /// that still have a free member.
    fn counts(&self, s: &Store) -> (usize, usize) {
        let mut touched = 0;
        let mut open = 0;
        for g in &self.groups {
            if g.iter().any(|&v| s.is_true(v)) {
                touched += 1;
            } else if g.iter().any(|&v| !s.is_fixed(v)) {
                open += 1;
            }
        }
        (touched, open)
    }
}

impl Propagator for CategorySpan {
    fn name(&self) -> &'static str {
        "category-span"
    }

    fn watched(&self) -> Vec<Var> {
        self.groups.iter().flatten().copied().collect()
    }

    fn propagate(&mut self, s: &mut Store) -> PropResult {
        let (touched, open) = self.counts(s);
        if touched > self.ub || touched + open < self.lb {
            return Err(Conflict);
        }
        if open == 0 {
            return Ok(());
        }
        if touched == self.ub {
            for g in &self.groups {
                if !g.iter().any(|&v| s.is_true(v)) {
                    for &v in g {
                        if !s.is_fixed(v) {
                            s.assign(v, false)?;
                        }
                    }
                }
            }
        } else if touched + open == self.lb {
            for g in &self.groups {
                if g.iter().any(|&v| s.is_true(v)) {
                    continue;
                }
                let mut free = g.iter().filter(|&&v| !s.is_fixed(v));
                if let (Some(&only), None) = (free.next(), free.next()) {
                    s.assign(only, true)?;
                }
            }
        }
        Ok(())
    }

    fn is_entailed(&self, s: &Store) -> bool {
        let (touched, open) = self.counts(s);
        touched >= self.lb && touched + open <= self.ub
    }

    fn clone_box(&self) -> Box<dyn Propagator> {
        Box::new(self.clone())
    }
}

/// Reified coverage of one transaction:
/// `Y_j ⇔ V_j ∧ (no chosen item is missing from row j)`.
#[derive(Clone)]
pub struct Coverage {
    y: Var,
    v: Var,
    missing: Vec<Var>,
}

impl Propagator for Coverage {
    fn name(&self) -> &'static str {
        "coverage"
    }

    fn watched(&self) -> Vec<Var> {
        let mut w = self.missing.clone();
        w.push(self.y);
        w.push(self.v);
        w
    }

    fn propagate(&mut self, s: &mut Store) -> PropResult {
        let any_missing = self.missing.iter().any(|&x| s.is_true(x));
        let mut free = self.missing.iter().filter(|&&x| !s.is_fixed(x));
        let first_free = free.next().copied();
        let several_free = free.next().is_some();
        if s.is_false(self.v) || any_missing {
            s.assign(self.y, false)?;
        }
        if s.is_true(self.v) && !any_missing && first_free.is_none() {
            s.assign(self.y, true)?;
        }
        match s.value(self.y) {
            Some(true) => {
                s.assign(self.v, true)?;
                for &x in &self.missing {
                    s.assign(x, false)?;
                }
            }
            Some(false) if !any_missing => match first_free {
                None => s.assign(self.v, false)?,
                Some(x) if s.is_true(self.v) && !several_free => s.assign(x, true)?,
                _ => {}
            },
            _ => {}
        }
        Ok(())
    }

    fn is_entailed(&self, s: &Store) -> bool {
        if !s.is_fixed(self.y) || !s.is_fixed(self.v) || !s.all_fixed(&self.missing) {
            return false;
        }
        let covered = s.is_true(self.v) && self.missing.iter().all(|&x| s.is_false(x));
        s.is_true(self.y) == covered
    }

    fn clone_box(&self) -> Box<dyn Propagator> {
        Box::new(self.clone())
    }
}

/// Reified minimum frequency of one item:
/// `X_i = 1 ⇒ q·Σ_{j ∋ i} Y_j ≥ p·Σ_j V_j` with `θ = p/q`.
#[derive(Clone)]
pub struct FrequencyImplication {
    x: Var,
    ys: Vec<Var>,
    vs: Arc<[Var]>,
    theta: Threshold,
}

impl Propagator for FrequencyImplication {
    fn name(&self) -> &'static str {
        "frequency"
    }

    fn watched(&self) -> Vec<Var> {
        let mut w = self.ys.clone();
        w.extend(self.vs.iter().copied());
        w.push(self.x);
        w
    }

    fn propagate(&mut self, s: &mut Store) -> PropResult {
        let support_ub = self.ys.iter().filter(|&&y| !s.is_false(y)).count();
        let active_lb = self.vs.iter().filter(|&&v| s.is_true(v)).count();
        if !self.theta.admits(support_ub, active_lb) {
            return s.assign(self.x, false);
        }
        if !s.is_true(self.x) {
            return Ok(());
        }
        if support_ub > 0 && !self.theta.admits(support_ub - 1, active_lb) {
            for &y in &self.ys {
                if !s.is_fixed(y) {
                    s.assign(y, true)?;
                }
            }
        }
        if !self.theta.admits(support_ub, active_lb + 1) {
            for v in self.vs.iter() {
                if !s.is_fixed(*v) {
                    s.assign(*v, false)?;
                }
            }
        }
        Ok(())
    }

    fn is_entailed(&self, s: &Store) -> bool {
        if s.is_false(self.x) {
            return true;
        }
        let support_lb = self.ys.iter().filter(|&&y| s.is_true(y)).count();
        let active_ub = self.vs.iter().filter(|&&v| !s.is_false(v)).count();
        self.theta.admits(support_lb, active_ub)
    }

    fn clone_box(&self) -> Box<dyn Propagator> {
        Box::new(self.clone())
    }
}

/// Reified closedness of one item:
/// `X_i ⇔ H_i ∧ (no covered transaction lacks item i)`.
#[derive(Clone)]
pub struct Closedness {
    x: Var,
    h: Var,
    lacking: Vec<Var>,
}

impl Propagator for Closedness {
    fn name(&self) -> &'static str {
        "closedness"
    }

    fn watched(&self) -> Vec<Var> {
        let mut w = self.lacking.clone();
        w.push(self.x);
        w.push(self.h);
        w
    }

    fn propagate(&mut self, s: &mut Store) -> PropResult {
        let any_lacking = self.lacking.iter().any(|&y| s.is_true(y));
        let mut free = self.lacking.iter().filter(|&&y| !s.is_fixed(y));
        let first_free = free.next().copied();
        let several_free = free.next().is_some();
        if s.is_false(self.h) || any_lacking {
            s.assign(self.x, false)?;
        }
        if s.is_true(self.h) && !any_lacking && first_free.is_none() {
            s.assign(self.x, true)?;
        }
        match s.value(self.x) {
            Some(true) => {
                s.assign(self.h, true)?;
                for &y in &self.lacking {
                    s.assign(y, false)?;
                }
            }
            Some(false) if !any_lacking => match first_free {
                None => s.assign(self.h, false)?,
                Some(x) if s.is_true(self.h) && !several_free => s.assign(x, true)?,
                _ => {}
            },
            _ => {}
        }
        Ok(())
    }

    fn is_entailed(&self, s: &Store) -> bool {
        if !s.is_fixed(self.x) || !s.is_fixed(self.h) || !s.all_fixed(&self.lacking) {
            return false;
        }
        let closed = s.is_true(self.h) && self.lacking.iter().all(|&y| s.is_false(y));
        s.is_true(self.x) == closed
    }

    fn clone_box(&self) -> Box<dyn Propagator> {
        Box::new(self.clone())
    }
}

fn check_len(a: &[Var], b: &[Var]) -> Result<(), ModelError> {
    if a.len() != b.len() {
        return Err(ModelError::Length(a.len(), b.len()));
    }
    Ok(())
}

/// `H_i = 0 ⇒ X_i = 0` and `V_j = 0 ⇒ Y_j = 0` (with their contrapositives).
pub fn post_channeling(solver: &mut Solver, h: &[Var], x: &[Var], v: &[Var], y: &[Var]) -> Result<(), ModelError> {
    check_len(h, x)?;
    check_len(v, y)?;
    for (&a, &m) in h.iter().zip(x).chain(v.iter().zip(y)) {
        solver.post(Box::new(Implies::channel(a, m)))?;
    }
    Ok(())
}

/// Each group of `level` is switched on or off as a whole through one
/// auxiliary indicator; between `lb` and `ub` indicators are on.
/// Returns the indicators in group order.
pub fn post_group_activation(
    solver: &mut Solver,
    level: &Level,
    vars: &[Var],
    lb: usize,
    ub: usize,
) -> Result<Vec<Var>, ModelError> {
    if lb > ub || ub > level.len() {
        return Err(ModelError::Bounds {
            lb,
            ub,
            groups: level.len(),
        });
    }
    let mut indicators = Vec::with_capacity(level.len());
    for group in &level.groups {
        let g = solver.new_var(Role::Auxiliary);
        let mut members = alloc::vec![g];
        members.extend(group.members.iter().map(|k| vars[k]));
        solver.post(Box::new(AllEqual::new(members)))?;
        indicators.push(g);
    }
    solver.post(Box::new(Cardinality::new(indicators.clone(), lb, ub)))?;
    Ok(indicators)
}

/// Exactly one group over all `levels` is active, and the active variables
/// are exactly its members. Returns indicators level by level.
pub fn post_exactly_one_group(solver: &mut Solver, levels: &[Level], vars: &[Var]) -> Result<Vec<Var>, ModelError> {
    if levels.is_empty() {
        return Err(ModelError::NoLevels);
    }
    let per_level: Vec<Vec<Var>> = levels
        .iter()
        .map(|l| solver.new_vars(Role::Auxiliary, l.len()))
        .collect();
    let all: Vec<Var> = per_level.iter().flatten().copied().collect();
    solver.post(Box::new(Cardinality::new(all.clone(), 1, 1)))?;
    for (k, &var) in vars.iter().enumerate() {
        let sources = levels
            .iter()
            .zip(&per_level)
            .map(|(l, inds)| inds[l.group_of(k)])
            .collect();
        solver.post(Box::new(OrChannel::new(var, sources)))?;
    }
    Ok(all)
}

/// The itemset touches between `lb` and `ub` groups of `level`.
pub fn post_category_span(
    solver: &mut Solver,
    x: &[Var],
    level: &Level,
    lb: usize,
    ub: usize,
) -> Result<(), ModelError> {
    if lb > ub {
        return Err(ModelError::Bounds {
            lb,
            ub,
            groups: level.len(),
        });
    }
    let groups = level
        .groups
        .iter()
        .map(|g| g.members.iter().map(|i| x[i]).collect())
        .collect();
    solver.post(Box::new(CategorySpan::new(groups, lb, ub)))?;
    Ok(())
}

/// `Σ X_i ≥ k`.
pub fn post_min_size(solver: &mut Solver, x: &[Var], k: usize) -> Result<(), ModelError> {
    if k == 0 || k > x.len() {
        return Err(ModelError::MinSize { k, n: x.len() });
    }
    solver.post(Box::new(Cardinality::new(x.to_vec(), k, x.len())))?;
    Ok(())
}

pub fn post_required_item(solver: &mut Solver, x: &[Var], item: usize) -> Result<(), ModelError> {
    let &var = x.get(item).ok_or(ModelError::ItemOutOfRange(item))?;
    solver.fix(var, true)?;
    Ok(())
}

pub fn post_forbidden_items(solver: &mut Solver, x: &[Var], items: &BitSet) -> Result<(), ModelError> {
    for i in items.iter() {
        let &var = x.get(i).ok_or(ModelError::ItemOutOfRange(i))?;
        solver.fix(var, false)?;
    }
    Ok(())
}

/// The reified decomposition of frequent (and, with `closed`, closed)
/// itemsets mined inside the sub-dataset selected by `h` and `v`.
#[allow(clippy::too_many_arguments)]
pub fn post_reified_fci(
    solver: &mut Solver,
    db: &TransactionDatabase,
    x: &[Var],
    y: &[Var],
    h: &[Var],
    v: &[Var],
    theta: Threshold,
    closed: bool,
) -> Result<(), ModelError> {
    check_len(x, h)?;
    check_len(y, v)?;
    if x.len() != db.item_count() || y.len() != db.transaction_count() {
        return Err(ModelError::Length(x.len(), db.item_count()));
    }
    for j in 0..db.transaction_count() {
        let row = db.row(j);
        let missing = (0..db.item_count())
            .filter(|&i| !row.contains(i))
            .map(|i| x[i])
            .collect();
        solver.post(Box::new(Coverage {
            y: y[j],
            v: v[j],
            missing,
        }))?;
    }
    let vs: Arc<[Var]> = v.into();
    for i in 0..db.item_count() {
        let col = db.column(i);
        solver.post(Box::new(FrequencyImplication {
            x: x[i],
            ys: col.iter().map(|j| y[j]).collect(),
            vs: vs.clone(),
            theta,
        }))?;
        if closed {
            let lacking = (0..db.transaction_count())
                .filter(|&j| !col.contains(j))
                .map(|j| y[j])
                .collect();
            solver.post(Box::new(Closedness {
                x: x[i],
                h: h[i],
                lacking,
            }))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Outcome;
    use crate::partition::{Axis, PartitionScheme};
    use alloc::string::{String, ToString};
    use alloc::vec;

    fn flat(sizes: &[usize]) -> Level {
        let mut next = 0;
        let groups = sizes
            .iter()
            .enumerate()
            .map(|(g, &sz)| {
                let idx: Vec<usize> = (next..next + sz).collect();
                next += sz;
                (alloc::format!("G{g}"), idx)
            })
            .collect();
        PartitionScheme::from_levels(Axis::Items, next, vec![groups], |i| i.to_string())
            .unwrap()
            .primary()
            .clone()
    }

    #[test]
    fn channeling_directions() {
        let mut s = Solver::new();
        let h = s.new_vars(Role::ActiveItem, 6);
        let x = s.new_vars(Role::Item, 6);
        let v = s.new_vars(Role::ActiveTransaction, 2);
        let y = s.new_vars(Role::Transaction, 2);
        post_channeling(&mut s, &h, &x, &v, &y).unwrap();
        s.fix(h[2], false).unwrap();
        assert!(s.store().is_false(x[2]));
        s.fix(x[4], true).unwrap();
        assert!(s.store().is_true(h[4]));
        s.fix(y[1], false).unwrap();
        assert!(!s.store().is_fixed(v[1]));
    }

    fn count_activation_vectors(level: &Level, lb: usize, ub: usize) -> u64 {
        let mut s = Solver::new();
        let vars = s.new_vars(Role::ActiveItem, level.group_of_len());
        post_group_activation(&mut s, level, &vars, lb, ub).unwrap();
        s.search_all(&vars, &mut |_| {})
    }

    trait LenExt {
        fn group_of_len(&self) -> usize;
    }
    impl LenExt for Level {
        fn group_of_len(&self) -> usize {
            self.groups.iter().map(|g| g.members.count()).sum()
        }
    }

    #[test]
    fn group_activation_counts() {
        assert_eq!(count_activation_vectors(&flat(&[2, 1, 3, 2, 1, 2]), 2, 3), 35);
        assert_eq!(count_activation_vectors(&flat(&[1, 2, 3]), 3, 3), 1);
        assert_eq!(count_activation_vectors(&flat(&[1; 10]), 1, 10), 1023);
        let mut s = Solver::new();
        let vars = s.new_vars(Role::ActiveItem, 3);
        assert!(matches!(
            post_group_activation(&mut s, &flat(&[1, 1, 1]), &vars, 3, 2),
            Err(ModelError::Bounds { .. })
        ));
    }

    #[test]
    fn group_encoding_matches_min_max_form() {
        let level = flat(&[2, 1, 3]);
        let mut s = Solver::new();
        let vars = s.new_vars(Role::ActiveItem, 6);
        let inds = post_group_activation(&mut s, &level, &vars, 1, 2).unwrap();
        s.search_all(&vars, &mut |st| {
            let mins: usize = level
                .groups
                .iter()
                .map(|g| g.members.iter().all(|k| st.is_true(vars[k])) as usize)
                .sum();
            let maxs: usize = level
                .groups
                .iter()
                .map(|g| g.members.iter().any(|k| st.is_true(vars[k])) as usize)
                .sum();
            let on = inds.iter().filter(|&&g| st.is_true(g)).count();
            assert_eq!(mins, maxs);
            assert_eq!(mins, on);
            assert!((1..=2).contains(&on));
        });
    }

    #[test]
    fn span_examples() {
        // Table-1 item groups: {A,B}, {C,D,E}, {F,G,H,K}.
        let level = flat(&[2, 3, 4]);
        let run = |chosen: &[usize], lb: usize, ub: usize| {
            let mut s = Solver::new();
            let x = s.new_vars(Role::Item, 9);
            post_category_span(&mut s, &x, &level, lb, ub).is_ok()
                && (0..9).all(|i| s.fix(x[i], chosen.contains(&i)).is_ok())
        };
        assert!(run(&[4, 5], 2, 2));
        assert!(!run(&[6, 8], 2, 9));
        assert!(run(&[], 0, 0));
        assert!(!run(&[], 1, 3));
    }

    #[test]
    fn span_forces_last_open_group() {
        let level = flat(&[2, 2]);
        let mut s = Solver::new();
        let x = s.new_vars(Role::Item, 4);
        post_category_span(&mut s, &x, &level, 2, 2).unwrap();
        s.fix(x[0], true).unwrap();
        s.fix(x[2], false).unwrap();
        assert!(s.store().is_true(x[3]));
    }

    #[test]
    fn min_size_and_item_fixing() {
        let mut s = Solver::new();
        let x = s.new_vars(Role::Item, 3);
        assert!(matches!(post_min_size(&mut s, &x, 4), Err(ModelError::MinSize { .. })));
        assert!(matches!(post_min_size(&mut s, &x, 0), Err(ModelError::MinSize { .. })));
        post_min_size(&mut s, &x, 1).unwrap();
        assert_eq!(s.search_all(&x, &mut |_| {}), 7);

        let mut s = Solver::new();
        let x = s.new_vars(Role::Item, 3);
        post_required_item(&mut s, &x, 1).unwrap();
        assert!(s.store().is_true(x[1]));
        let err = post_forbidden_items(&mut s, &x, &BitSet::from_indices(3, [1]));
        assert_eq!(err, Err(ModelError::Engine(EngineError::RootFailure)));

        let mut s = Solver::new();
        let x = s.new_vars(Role::Item, 3);
        post_forbidden_items(&mut s, &x, &BitSet::new(3)).unwrap();
        assert_eq!(s.propagate_to_fixpoint(), Outcome::Consistent);
        assert!(x.iter().all(|&v| !s.store().is_fixed(v)));
    }

    #[test]
    fn exactly_one_group_counts_entities() {
        // 2 regions x 2 departments x 2 cities over 8 single-transaction cities.
        let name = |i: usize| alloc::format!("t{i}");
        let g = |prefix: &str, k: usize, size: usize| -> Vec<(String, Vec<usize>)> {
            (0..k)
                .map(|a| (alloc::format!("{prefix}{a}"), (a * size..(a + 1) * size).collect()))
                .collect()
        };
        let scheme = PartitionScheme::from_levels(
            Axis::Transactions,
            8,
            vec![g("R", 2, 4), g("D", 4, 2), g("C", 8, 1)],
            name,
        )
        .unwrap();
        let mut s = Solver::new();
        let v = s.new_vars(Role::ActiveTransaction, 8);
        let inds = post_exactly_one_group(&mut s, scheme.levels(), &v).unwrap();
        assert_eq!(inds.len(), 14);
        let mut masks = Vec::new();
        let n = s.search_all(&inds, &mut |st| {
            masks.push(v.iter().map(|&x| st.is_true(x)).collect::<Vec<_>>())
        });
        assert_eq!(n, 14);
        assert!(masks.iter().any(|m| m.iter().filter(|&&b| b).count() == 4));

        let one = PartitionScheme::from_levels(Axis::Transactions, 3, vec![vec![("all".into(), vec![0, 1, 2])]], name)
            .unwrap();
        let mut s = Solver::new();
        let v = s.new_vars(Role::ActiveTransaction, 3);
        post_exactly_one_group(&mut s, one.levels(), &v).unwrap();
        assert!(v.iter().all(|&x| s.store().is_true(x)));
        assert_eq!(post_exactly_one_group(&mut s, &[], &v), Err(ModelError::NoLevels));
    }
}
