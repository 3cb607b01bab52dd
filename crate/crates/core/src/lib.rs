//! Itemset mining over circumscribed sub-datasets with a small Boolean
//! constraint solver.
//!
//! A query asks for every pair `(D, P)` where `D` is a sub-dataset selected
//! by activating groups of items and transactions, and `P` is an itemset
//! that is frequent (and usually closed) *within* `D`. The sub-dataset choice
//! and the itemset are decided by the same search, so unpromising
//! sub-datasets are pruned before any itemset is enumerated in them.
//!
//! ```
//! use itemcp_core::fixtures;
//! use itemcp_core::dataset::Threshold;
//! use itemcp_core::queries::{run_theory, Instance, Query};
//!
//! let inst = Instance::new(fixtures::example_db());
//! let theory = run_theory(&Query::q1(Threshold::percent(50).unwrap()), &inst).unwrap();
//! assert_eq!(theory.len(), 4);
//! ```
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bitset;
pub mod closedpattern;
pub mod constraints;
pub mod dataset;
pub mod engine;
pub mod fixtures;
pub mod partition;
pub mod queries;
pub mod reference;

pub use bitset::BitSet;
pub use dataset::{Frequency, Itemset, SubDatasetMask, Threshold, TransactionDatabase};
pub use partition::{Axis, PartitionScheme};
pub use queries::{Activation, Bounds, Engine, Instance, MiningModel, Query, QueryError, SolutionPair, Theory};
