//! The six-transaction running example used throughout the docs and tests.
//!
//! | tid | items       |
//! |-----|-------------|
//! | t1  | B C G H K   |
//! | t2  | A D G K     |
//! | t3  | A C D H     |
//! | t4  | A E F       |
//! | t5  | B E F       |
//! | t6  | B E F G K   |
//!
//! Item groups `I1 = {A, B}`, `I2 = {C, D, E}`, `I3 = {F, G, H, K}`;
//! transaction groups `T1 = {t1, t2}`, `T2 = {t3, t4}`, `T3 = {t5, t6}`.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::TransactionDatabase;
use crate::partition::{Axis, PartitionScheme};
use crate::queries::Instance;

pub const A: usize = 0;
pub const B: usize = 1;
pub const C: usize = 2;
pub const D: usize = 3;
pub const E: usize = 4;
pub const F: usize = 5;
pub const G: usize = 6;
pub const H: usize = 7;
pub const K: usize = 8;

pub const LABELS: [&str; 9] = ["A", "B", "C", "D", "E", "F", "G", "H", "K"];

pub fn example_db() -> TransactionDatabase {
    let rows: Vec<Vec<usize>> = vec![
        vec![B, C, G, H, K],
        vec![A, D, G, K],
        vec![A, C, D, H],
        vec![A, E, F],
        vec![B, E, F],
        vec![B, E, F, G, K],
    ];
    TransactionDatabase::from_transactions(9, rows)
        .unwrap()
        .with_labels(LABELS.iter().map(|s| s.to_string()).collect())
        .unwrap()
}

fn groups(spec: &[(&str, &[usize])]) -> Vec<(String, Vec<usize>)> {
    spec.iter().map(|(n, m)| (n.to_string(), m.to_vec())).collect()
}

pub fn example_item_groups() -> PartitionScheme {
    PartitionScheme::from_levels(
        Axis::Items,
        9,
        vec![groups(&[("I1", &[A, B]), ("I2", &[C, D, E]), ("I3", &[F, G, H, K])])],
        |i| LABELS[i].to_string(),
    )
    .unwrap()
}

pub fn example_transaction_groups() -> PartitionScheme {
    PartitionScheme::from_levels(
        Axis::Transactions,
        6,
        vec![groups(&[("T1", &[0, 1]), ("T2", &[2, 3]), ("T3", &[4, 5])])],
        |j| (j + 1).to_string(),
    )
    .unwrap()
}

/// The running example with both group schemes attached.
pub fn example_instance() -> Instance {
    Instance::new(example_db())
        .with_scheme(example_item_groups())
        .unwrap()
        .with_scheme(example_transaction_groups())
        .unwrap()
}
