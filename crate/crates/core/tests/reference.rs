use itemcp_core::queries::NoInterrupt;
use itemcp_core::reference::{binomial, brute_force_theory, count_masks, mine_closed, ItemsetFilter, MaskEnumerator};
use itemcp_core::{
    Activation, Axis, BitSet, Bounds, Instance, PartitionScheme, Query, SubDatasetMask, Theory, Threshold,
    TransactionDatabase,
};
use proptest::prelude::*;

fn db_strategy() -> impl Strategy<Value = TransactionDatabase> {
    (1usize..=9, 1usize..=8).prop_flat_map(|(n, m)| {
        proptest::collection::vec(proptest::collection::vec(any::<bool>(), n), m).prop_map(move |rows| {
            let rows: Vec<Vec<usize>> = rows.iter().map(|r| (0..n).filter(|&i| r[i]).collect()).collect();
            TransactionDatabase::from_transactions(n, rows).unwrap()
        })
    })
}

fn theta_strategy() -> impl Strategy<Value = Threshold> {
    (1u64..=4, 1u64..=4).prop_map(|(a, b)| Threshold::new(a.min(b), a.max(b)).unwrap())
}

/// Consecutive runs of `size` indices as groups.
fn chunked(axis: Axis, universe: usize, size: usize, prefix: &str) -> PartitionScheme {
    let groups = (0..universe.div_ceil(size))
        .map(|g| {
            (
                format!("{prefix}{g}"),
                (g * size..((g + 1) * size).min(universe)).collect(),
            )
        })
        .collect();
    PartitionScheme::from_levels(axis, universe, vec![groups], |i| format!("{i}")).unwrap()
}

#[test]
fn reversed_bounds_are_rejected() {
    assert!(count_masks(5, 3, 2).is_err());
    assert_eq!(count_masks(5, 0, 9).unwrap(), 32u32.into());
    assert_eq!(binomial(3, 4), 0u32.into());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mask_count_matches_enumeration(groups in 1usize..=12, lb in 0usize..=12, width in 0usize..=12) {
        let ub = (lb + width).min(groups);
        prop_assume!(lb <= ub);
        let inst = Instance::new(TransactionDatabase::from_transactions(groups, vec![vec![0]]).unwrap())
            .with_scheme(chunked(Axis::Items, groups, 1, "I"))
            .unwrap();
        let q = Query::q2(Threshold::percent(50).unwrap(), lb, ub);
        let masks = MaskEnumerator::new(&q, &inst).unwrap();
        let listed: Vec<SubDatasetMask> = masks.iter().collect();
        prop_assert_eq!(masks.count(), listed.len().into());
        prop_assert_eq!(count_masks(groups, lb, ub).unwrap(), listed.len().into());
        let mut distinct = listed.clone();
        distinct.sort();
        distinct.dedup();
        prop_assert_eq!(distinct.len(), listed.len());
    }

    #[test]
    fn closed_miner_matches_brute_force(db in db_strategy(), theta in theta_strategy(), drop in any::<u32>()) {
        let (n, m) = (db.item_count(), db.transaction_count());
        let items = BitSet::from_indices(n, (0..n).filter(|i| drop >> i & 1 == 0));
        let mut trans = BitSet::from_indices(m, (0..m).filter(|j| drop >> (9 + j) & 1 == 0));
        if trans.is_empty() {
            trans.insert(0);
        }
        let mask = SubDatasetMask::new(items.clone(), trans.clone());
        let mut steps = 0;
        let mut mined = mine_closed(&db, &mask, theta, &ItemsetFilter::none(n), &NoInterrupt, &mut steps).unwrap();
        mined.sort();

        let mut want = Vec::new();
        let active: Vec<usize> = items.iter().collect();
        for bits in 1u32..(1 << active.len()) {
            let p = BitSet::from_indices(n, (0..active.len()).filter(|&k| bits >> k & 1 == 1).map(|k| active[k]));
            let cover = db.cover(&p, &mask);
            if !cover.is_empty()
                && theta.admits(cover.count(), trans.count())
                && db.closure_of_cover(&cover, &items) == p
            {
                want.push((p, cover.count()));
            }
        }
        want.sort();
        prop_assert_eq!(mined, want);
    }

    #[test]
    fn q4_is_the_union_of_fixed_mask_theories(db in db_strategy(), theta in theta_strategy(), isize in 1usize..=3, tsize in 1usize..=3) {
        let (n, m) = (db.item_count(), db.transaction_count());
        let inst = Instance::new(db)
            .with_scheme(chunked(Axis::Items, n, isize, "I"))
            .unwrap()
            .with_scheme(chunked(Axis::Transactions, m, tsize, "T"))
            .unwrap();
        let ig = inst.item_scheme.as_ref().unwrap().primary().len();
        let tg = inst.transaction_scheme.as_ref().unwrap().primary().len();
        let q = Query::q4(theta, Bounds::new(1, ig.min(2)), Bounds::new(1, tg.min(2)));
        let whole = brute_force_theory(&q, &inst).unwrap();
        let mut parts = Vec::new();
        for mask in MaskEnumerator::new(&q, &inst).unwrap().iter() {
            let single = Query::q1(theta)
                .with_items(Activation::Fixed(mask.items.clone()))
                .with_transactions(Activation::Fixed(mask.transactions.clone()));
            parts.extend(brute_force_theory(&single, &inst).unwrap().pairs);
        }
        prop_assert_eq!(whole.pairs, Theory::from_pairs(parts, Default::default()).pairs);
    }

    #[test]
    fn lower_threshold_keeps_every_pair(db in db_strategy(), a in theta_strategy(), b in theta_strategy()) {
        let (lo, hi) = if a.numerator() * b.denominator() <= b.numerator() * a.denominator() { (a, b) } else { (b, a) };
        let inst = Instance::new(db);
        let strict = brute_force_theory(&Query::q1(hi), &inst).unwrap();
        let loose = brute_force_theory(&Query::q1(lo), &inst).unwrap();
        prop_assert!(strict.pairs.iter().all(|p| loose.pairs.contains(p)));
    }
}
