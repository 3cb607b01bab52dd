use std::sync::Arc;

use itemcp_core::closedpattern::post_closed_pattern_sub;
use itemcp_core::constraints::{post_channeling, post_min_size, post_reified_fci};
use itemcp_core::engine::{Role, Solver, Var};
use itemcp_core::queries::{assemble, holds, run_cp, NoInterrupt};
use itemcp_core::reference::{brute_force_theory, pp_mine, pp_mine_with, PpOptions};
use itemcp_core::{
    Activation, Axis, BitSet, Bounds, Instance, MiningModel, PartitionScheme, Query, SubDatasetMask, Theory, Threshold,
    TransactionDatabase,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_db(rng: &mut ChaCha8Rng, n: usize, m: usize) -> TransactionDatabase {
    let density = rng.gen_range(0.25..0.75);
    let rows: Vec<Vec<usize>> = (0..m)
        .map(|_| (0..n).filter(|_| rng.gen_bool(density)).collect())
        .collect();
    TransactionDatabase::from_transactions(n, rows).unwrap()
}

/// A partition into at most `max` non-empty named groups.
fn random_groups(rng: &mut ChaCha8Rng, universe: usize, max: usize, prefix: &str) -> Vec<(String, Vec<usize>)> {
    let k = rng.gen_range(1..=max);
    let mut buckets = vec![Vec::new(); k];
    for i in 0..universe {
        buckets[rng.gen_range(0..k)].push(i);
    }
    buckets
        .into_iter()
        .filter(|b| !b.is_empty())
        .enumerate()
        .map(|(g, b)| (format!("{prefix}{g}"), b))
        .collect()
}

fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    let n = rng.gen_range(2..=8);
    let m = rng.gen_range(1..=7);
    let db = random_db(rng, n, m);
    let items = random_groups(rng, n, 4, "I");
    let mut trans_levels = vec![random_groups(rng, m, 4, "T")];
    if rng.gen_bool(0.5) {
        trans_levels.push(random_groups(rng, m, 3, "R"));
    }
    let is = PartitionScheme::from_levels(Axis::Items, n, vec![items], |i| format!("i{i}")).unwrap();
    let ts = PartitionScheme::from_levels(Axis::Transactions, m, trans_levels, |j| format!("t{j}")).unwrap();
    Instance::new(db).with_scheme(is).unwrap().with_scheme(ts).unwrap()
}

fn random_theta(rng: &mut ChaCha8Rng) -> Threshold {
    let (num, den) = [(1, 4), (1, 3), (1, 2), (2, 3), (1, 1)][rng.gen_range(0..5)];
    Threshold::new(num, den).unwrap()
}

fn random_bounds(rng: &mut ChaCha8Rng, groups: usize) -> Bounds {
    let lb = rng.gen_range(0..=groups);
    Bounds::new(lb, rng.gen_range(lb..=groups))
}

fn random_query(rng: &mut ChaCha8Rng, inst: &Instance) -> Query {
    let n = inst.db.item_count();
    let theta = random_theta(rng);
    let ig = inst.item_scheme.as_ref().unwrap().primary().len();
    let tg = inst.transaction_scheme.as_ref().unwrap().primary().len();
    let mut q = match rng.gen_range(0..6) {
        0 => Query::q1(theta),
        1 => {
            let b = random_bounds(rng, ig);
            Query::q1_span(theta, b.lb, b.ub)
        }
        2 => {
            let b = random_bounds(rng, ig);
            Query::q2(theta, b.lb, b.ub)
        }
        3 => {
            let b = random_bounds(rng, tg);
            Query::q3(theta, b.lb, b.ub)
        }
        4 => Query::q4(theta, random_bounds(rng, ig), random_bounds(rng, tg)),
        _ => Query::where_frequent(theta, rng.gen_range(0..n), n),
    };
    if rng.gen_bool(0.2) {
        q = q.with_min_size(rng.gen_range(1..=n.min(3)));
    }
    if rng.gen_bool(0.2) {
        q = q.forbidding(rng.gen_range(0..n));
    }
    if rng.gen_bool(0.15) && q.require.is_empty() {
        q = q.requiring(rng.gen_range(0..n));
    }
    if rng.gen_bool(0.15) && q.items == Activation::All {
        let items = BitSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.7)));
        q = q.with_items(Activation::Fixed(items));
    }
    if rng.gen_bool(0.15) {
        q = q.with_closed(false);
    }
    q
}

fn check_equivalence(seed: u64) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = random_instance(&mut rng);
    let q = random_query(&mut rng, &inst);
    let oracle = brute_force_theory(&q, &inst).unwrap();
    let global = run_cp(&q, &inst, MiningModel::Global, &NoInterrupt).unwrap();
    let reified = run_cp(&q, &inst, MiningModel::Reified, &NoInterrupt).unwrap();
    prop_assert_eq!(&global.pairs, &oracle.pairs, "global, query {:?}", q);
    prop_assert_eq!(&reified.pairs, &oracle.pairs, "reified, query {:?}", q);
    if q.closed {
        let pp = pp_mine(&q, &inst, &NoInterrupt).unwrap();
        let eager = pp_mine_with(&q, &inst, PpOptions { materialize: true }, &NoInterrupt).unwrap();
        prop_assert_eq!(&pp.pairs, &oracle.pairs, "baseline, query {:?}", q);
        prop_assert_eq!(&eager.pairs, &oracle.pairs, "materialized baseline, query {:?}", q);
        prop_assert!(global.stats.masks_explored <= pp.stats.masks_explored);
    }
    Ok(())
}

/// Solver over a fixed mask with either mining model, plus the four
/// variable vectors.
struct Network {
    solver: Solver,
    x: Vec<Var>,
    y: Vec<Var>,
}

fn network(db: &Arc<TransactionDatabase>, mask: &SubDatasetMask, theta: Threshold, global: bool) -> Network {
    let (n, m) = (db.item_count(), db.transaction_count());
    let mut solver = Solver::new();
    let x = solver.new_vars(Role::Item, n);
    let y = solver.new_vars(Role::Transaction, m);
    let h = solver.new_vars(Role::ActiveItem, n);
    let v = solver.new_vars(Role::ActiveTransaction, m);
    let _ = (|| -> Result<(), itemcp_core::constraints::ModelError> {
        post_channeling(&mut solver, &h, &x, &v, &y)?;
        for (i, &hi) in h.iter().enumerate() {
            solver.fix(hi, mask.items.contains(i))?;
        }
        for (j, &vj) in v.iter().enumerate() {
            solver.fix(vj, mask.transactions.contains(j))?;
        }
        post_min_size(&mut solver, &x, 1)?;
        if global {
            post_closed_pattern_sub(&mut solver, db.clone(), &x, &h, &y, &v, theta)
        } else {
            post_reified_fci(&mut solver, db, &x, &y, &h, &v, theta, true)
        }
    })();
    Network { solver, x, y }
}

/// Applies `(var index in x ++ y, value)` fixings; false on failure.
fn apply(net: &mut Network, state: &[(usize, bool)]) -> bool {
    if net.solver.is_failed() {
        return false;
    }
    for &(k, val) in state {
        let var = if k < net.x.len() {
            net.x[k]
        } else {
            net.y[k - net.x.len()]
        };
        if net.solver.fix(var, val).is_err() {
            return false;
        }
    }
    !net.solver.is_failed()
}

fn values(net: &Network) -> Vec<Option<bool>> {
    net.x
        .iter()
        .chain(&net.y)
        .map(|&v| net.solver.store().value(v))
        .collect()
}

/// Solutions over a fixed mask as `x ++ y` assignments.
fn solutions(db: &TransactionDatabase, mask: &SubDatasetMask, theta: Threshold) -> Vec<Vec<bool>> {
    let n = db.item_count();
    let active: Vec<usize> = mask.items.iter().collect();
    let inst = Instance::new(db.clone());
    let q = Query::q1(theta)
        .with_items(Activation::Fixed(mask.items.clone()))
        .with_transactions(Activation::Fixed(mask.transactions.clone()));
    let mut out = Vec::new();
    for bits in 1u32..(1 << active.len()) {
        let p = BitSet::from_indices(n, (0..active.len()).filter(|&k| bits >> k & 1 == 1).map(|k| active[k]));
        if holds(&q, &inst, mask, &p) {
            let cover = db.cover(&p, mask);
            let mut sol: Vec<bool> = (0..n).map(|i| p.contains(i)).collect();
            sol.extend((0..db.transaction_count()).map(|j| cover.contains(j)));
            out.push(sol);
        }
    }
    out
}

fn check_parity(seed: u64) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=6);
    let m = rng.gen_range(1..=6);
    let db = Arc::new(random_db(&mut rng, n, m));
    let items = BitSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.8)));
    let mut trans = BitSet::from_indices(m, (0..m).filter(|_| rng.gen_bool(0.8)));
    if trans.is_empty() {
        trans.insert(0);
    }
    let mask = SubDatasetMask::new(items, trans);
    let theta = random_theta(&mut rng);
    let sols = solutions(&db, &mask, theta);

    let mut state: Vec<(usize, bool)> = Vec::new();
    let anchor = sols.choose(&mut rng).cloned();
    for k in 0..n + m {
        if rng.gen_bool(0.3) {
            let val = match (&anchor, rng.gen_bool(0.8)) {
                (Some(sol), true) => sol[k],
                _ => rng.gen_bool(0.5),
            };
            state.push((k, val));
        }
    }
    state.shuffle(&mut rng);
    let consistent: Vec<&Vec<bool>> = sols.iter().filter(|s| state.iter().all(|&(k, v)| s[k] == v)).collect();

    let mut g = network(&db, &mask, theta, true);
    let mut r = network(&db, &mask, theta, false);
    let g_ok = apply(&mut g, &state);
    let r_ok = apply(&mut r, &state);
    if !g_ok {
        prop_assert!(consistent.is_empty(), "global failed on a state with solutions");
        return Ok(());
    }
    prop_assert!(r_ok, "reified failed where the global did not");
    let gv = values(&g);
    let rv = values(&r);
    for k in 0..n + m {
        if let Some(val) = rv[k] {
            prop_assert_eq!(gv[k], Some(val), "reified fixed var {} the global left open", k);
        }
        if let Some(val) = gv[k] {
            prop_assert!(
                consistent.iter().all(|s| s[k] == val),
                "global fixing of var {} is unsound",
                k
            );
        }
    }
    Ok(())
}

fn check_branching_order(seed: u64) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = random_instance(&mut rng);
    let q = random_query(&mut rng, &inst);
    let reference = run_cp(&q, &inst, MiningModel::Global, &NoInterrupt).unwrap();
    let mut model = assemble(&q, &inst, MiningModel::Global).unwrap();
    let mut order = model.layout.branching();
    order.shuffle(&mut rng);
    let mut pairs = Vec::new();
    let layout = model.layout.clone();
    model.solver.search_all(&order, &mut |s| pairs.push(layout.extract(s)));
    let shuffled = Theory::from_pairs(pairs, Default::default());
    prop_assert_eq!(shuffled.pairs, reference.pairs);
    Ok(())
}

fn check_split(seed: u64) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = random_instance(&mut rng);
    let q = random_query(&mut rng, &inst);
    let reference = run_cp(&q, &inst, MiningModel::Global, &NoInterrupt).unwrap();
    let model = assemble(&q, &inst, MiningModel::Global).unwrap();
    let (raw, _) = model.clone().run(&NoInterrupt).unwrap();
    let mut all = Vec::new();
    let mut count = 0;
    for mut part in model.split(rng.gen_range(0..6)) {
        let (pairs, _) = part.run(&NoInterrupt).unwrap();
        count += pairs.len();
        all.extend(pairs);
    }
    prop_assert_eq!(count, raw.len(), "parts overlap");
    prop_assert_eq!(Theory::from_pairs(all, Default::default()).pairs, reference.pairs);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn engines_agree_with_the_oracle(seed in any::<u64>()) {
        check_equivalence(seed)?;
    }

    #[test]
    fn global_propagator_dominates_the_decomposition(seed in any::<u64>()) {
        check_parity(seed)?;
    }

    #[test]
    fn theory_is_independent_of_branching_order(seed in any::<u64>()) {
        check_branching_order(seed)?;
    }

    #[test]
    fn split_parts_partition_the_theory(seed in any::<u64>()) {
        check_split(seed)?;
    }
}
