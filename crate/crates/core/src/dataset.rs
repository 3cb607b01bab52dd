//! Transactional databases, sub-dataset masks, covers, frequencies and closures.
//!
//! Indices are 0-based internally. File formats and labels shift them to the
//! 1-based ids users see.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::bitset::BitSet;

/// An itemset is a set of item indices. Solutions are always non-empty.
pub type Itemset = BitSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DatasetError {
    #[error("database has no transactions")]
    EmptyDatabase,
    #[error("database has no items")]
    NoItems,
    #[error("item index {item} out of range (item count {count})")]
    ItemOutOfRange { item: usize, count: usize },
    #[error("expected {expected} item labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("frequency undefined: the mask has no active transaction")]
    UndefinedFrequency,
    #[error("closure undefined: the itemset has an empty cover")]
    NoClosure,
}

/// Immutable 0/1 incidence matrix kept as both item columns and transaction rows.
#[derive(Clone, PartialEq, Eq)]
pub struct TransactionDatabase {
    columns: Vec<BitSet>,
    rows: Vec<BitSet>,
    labels: Option<Vec<String>>,
}

impl TransactionDatabase {
    /// Builds a database from per-transaction item lists (0-based item
    /// indices). Duplicate items inside a transaction collapse.
    pub fn from_transactions<T, I>(item_count: usize, transactions: T) -> Result<Self, DatasetError>
    where
        T: IntoIterator<Item = I>,
        I: IntoIterator<Item = usize>,
    {
        if item_count == 0 {
            return Err(DatasetError::NoItems);
        }
        let mut rows = Vec::new();
        for t in transactions {
            let mut row = BitSet::new(item_count);
            for i in t {
                if i >= item_count {
                    return Err(DatasetError::ItemOutOfRange {
                        item: i,
                        count: item_count,
                    });
                }
                row.insert(i);
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(DatasetError::EmptyDatabase);
        }
        let m = rows.len();
        let mut columns = alloc::vec![BitSet::new(m); item_count];
        for (j, row) in rows.iter().enumerate() {
            for i in row.iter() {
                columns[i].insert(j);
            }
        }
        Ok(TransactionDatabase {
            columns,
            rows,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, DatasetError> {
        if labels.len() != self.item_count() {
            return Err(DatasetError::LabelCount {
                expected: self.item_count(),
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn item_count(&self) -> usize {
        self.columns.len()
    }

    #[inline]
    pub fn transaction_count(&self) -> usize {
        self.rows.len()
    }

    /// Transactions containing item `i`.
    #[inline]
    pub fn column(&self, i: usize) -> &BitSet {
        &self.columns[i]
    }

    /// Items of transaction `j`.
    #[inline]
    pub fn row(&self, j: usize) -> &BitSet {
        &self.rows[j]
    }

    #[inline]
    pub fn contains(&self, item: usize, transaction: usize) -> bool {
        self.rows[transaction].contains(item)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of an item: its label, or its 1-based id.
    pub fn item_name(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => (i + 1).to_string(),
        }
    }

    /// Resolves a user token to an item index: a label first, then a 1-based id.
    pub fn resolve_item(&self, token: &str) -> Option<usize> {
        if let Some(labels) = &self.labels {
            if let Some(pos) = labels.iter().position(|l| l == token) {
                return Some(pos);
            }
        }
        match token.parse::<usize>() {
            Ok(id) if id >= 1 && id <= self.item_count() => Some(id - 1),
            _ => None,
        }
    }

    /// Fraction of ones in the incidence matrix, as (ones, cells).
    pub fn density(&self) -> (usize, usize) {
        let ones = self.rows.iter().map(BitSet::count).sum();
        (ones, self.item_count() * self.transaction_count())
    }

    pub fn full_mask(&self) -> SubDatasetMask {
        SubDatasetMask {
            items: BitSet::full(self.item_count()),
            transactions: BitSet::full(self.transaction_count()),
        }
    }

    /// Active transactions containing every item of `itemset`.
    pub fn cover(&self, itemset: &BitSet, mask: &SubDatasetMask) -> BitSet {
        let mut cover = mask.transactions.clone();
        for i in itemset.iter() {
            cover.intersect_with(&self.columns[i]);
        }
        cover
    }

    pub fn frequency(&self, itemset: &BitSet, mask: &SubDatasetMask) -> Result<Frequency, DatasetError> {
        let active = mask.transactions.count();
        if active == 0 {
            return Err(DatasetError::UndefinedFrequency);
        }
        Ok(Frequency {
            support: self.cover(itemset, mask).count(),
            active,
        })
    }

    /// Active items shared by every transaction of the cover.
    pub fn closure(&self, itemset: &BitSet, mask: &SubDatasetMask) -> Result<Itemset, DatasetError> {
        let cover = self.cover(itemset, mask);
        if cover.is_empty() {
            return Err(DatasetError::NoClosure);
        }
        Ok(self.closure_of_cover(&cover, &mask.items))
    }

    /// Intersection of the rows in `cover`, restricted to `active_items`.
    /// An empty cover yields all active items.
    pub fn closure_of_cover(&self, cover: &BitSet, active_items: &BitSet) -> Itemset {
        let mut out = active_items.clone();
        for j in cover.iter() {
            out.intersect_with(&self.rows[j]);
        }
        out
    }
}

impl fmt::Debug for TransactionDatabase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransactionDatabase")
            .field("items", &self.item_count())
            .field("transactions", &self.transaction_count())
            .finish()
    }
}

/// The active items (H) and active transactions (V) circumscribing a sub-dataset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubDatasetMask {
    pub items: BitSet,
    pub transactions: BitSet,
}

impl SubDatasetMask {
    pub fn new(items: BitSet, transactions: BitSet) -> Self {
        SubDatasetMask { items, transactions }
    }
}

/// Minimum frequency threshold held as an exact fraction `num/den` in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Threshold {
    num: u64,
    den: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("threshold {num}/{den} is not in (0, 1]")]
pub struct ThresholdError {
    pub num: u64,
    pub den: u64,
}

impl Threshold {
    pub fn new(num: u64, den: u64) -> Result<Self, ThresholdError> {
        if den == 0 || num == 0 || num > den {
            return Err(ThresholdError { num, den });
        }
        let g = gcd(num, den);
        Ok(Threshold {
            num: num / g,
            den: den / g,
        })
    }

    /// `percent`% as an exact fraction.
    pub fn percent(percent: u64) -> Result<Self, ThresholdError> {
        Self::new(percent, 100)
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    /// `support / active >= num / den`, by cross-multiplication.
    #[inline]
    pub fn admits(&self, support: usize, active: usize) -> bool {
        (support as u128) * (self.den as u128) >= (self.num as u128) * (active as u128)
    }

    /// Smallest support admitted over `active` transactions.
    pub fn min_support(&self, active: usize) -> usize {
        let need = (self.num as u128) * (active as u128);
        need.div_ceil(self.den as u128) as usize
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exact frequency: `support` covering transactions out of `active`.
///
/// Deliberately not reduced, so `3/6` prints as `3/6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frequency {
    pub support: usize,
    pub active: usize,
}

impl Frequency {
    pub fn meets(&self, theta: Threshold) -> bool {
        theta.admits(self.support, self.active)
    }

    /// Value equality of the two fractions.
    pub fn same_ratio(&self, other: &Frequency) -> bool {
        (self.support as u128) * (other.active as u128) == (other.support as u128) * (self.active as u128)
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.support, self.active)
    }
}
