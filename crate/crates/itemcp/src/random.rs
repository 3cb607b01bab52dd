//! Small random instances for cross-engine checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use itemcp_core::partition::{Axis, PartitionScheme};
use itemcp_core::queries::{Bounds, Instance, Query};
use itemcp_core::{Threshold, TransactionDatabase};

pub const MAX_ITEMS: usize = 10;
pub const MAX_TRANSACTIONS: usize = 8;

/// A generated instance, its query and the query family name.
#[derive(Debug, Clone)]
pub struct RandomCase {
    pub seed: u64,
    pub family: &'static str,
    pub instance: Instance,
    pub query: Query,
}

fn groups(rng: &mut ChaCha8Rng, universe: usize, max: usize, prefix: &str) -> Vec<(String, Vec<usize>)> {
    let k = rng.gen_range(1..=max.min(universe));
    // Every group gets at least one member, then the rest are scattered.
    let mut order: Vec<usize> = (0..universe).collect();
    rand::seq::SliceRandom::shuffle(order.as_mut_slice(), rng);
    let mut buckets: Vec<Vec<usize>> = (0..k).map(|g| vec![order[g]]).collect();
    for &i in &order[k..] {
        buckets[rng.gen_range(0..k)].push(i);
    }
    buckets
        .into_iter()
        .enumerate()
        .map(|(g, mut b)| {
            b.sort_unstable();
            (format!("{prefix}{}", g + 1), b)
        })
        .collect()
}

fn bounds(rng: &mut ChaCha8Rng, groups: usize) -> Bounds {
    let lb = rng.gen_range(1..=groups);
    Bounds::new(lb, rng.gen_range(lb..=groups))
}

/// Instance with `n ≤ 10` items, `m ≤ 8` transactions, random item and
/// transaction partitions, `θ ∈ {1/4, 1/3, 1/2}` and a query drawn from
/// Q1, Q1', Q2, Q3 and Q4.
pub fn random_case(seed: u64) -> RandomCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=MAX_ITEMS);
    let m = rng.gen_range(2..=MAX_TRANSACTIONS);
    let density = rng.gen_range(0.3..0.7);
    let rows: Vec<Vec<usize>> = (0..m)
        .map(|_| (0..n).filter(|_| rng.gen_bool(density)).collect())
        .collect();
    let db = TransactionDatabase::from_transactions(n, rows).expect("n, m > 0");
    let ig = groups(&mut rng, n, 4, "I");
    let tg = groups(&mut rng, m, 4, "T");
    let (ni, nt) = (ig.len(), tg.len());
    let items = PartitionScheme::from_levels(Axis::Items, n, vec![ig], |i| (i + 1).to_string()).unwrap();
    let trans = PartitionScheme::from_levels(Axis::Transactions, m, vec![tg], |j| format!("t{}", j + 1)).unwrap();
    let instance = Instance::new(db)
        .with_scheme(items)
        .unwrap()
        .with_scheme(trans)
        .unwrap();

    let (num, den) = [(1, 4), (1, 3), (1, 2)][rng.gen_range(0..3)];
    let theta = Threshold::new(num, den).unwrap();
    let (family, query) = match rng.gen_range(0..5) {
        0 => ("Q1", Query::q1(theta)),
        1 => {
            let b = bounds(&mut rng, ni);
            ("Q1'", Query::q1_span(theta, b.lb, b.ub))
        }
        2 => {
            let b = bounds(&mut rng, ni);
            ("Q2", Query::q2(theta, b.lb, b.ub))
        }
        3 => {
            let b = bounds(&mut rng, nt);
            ("Q3", Query::q3(theta, b.lb, b.ub))
        }
        _ => ("Q4", Query::q4(theta, bounds(&mut rng, ni), bounds(&mut rng, nt))),
    };
    RandomCase {
        seed,
        family,
        instance,
        query,
    }
}
