//! Synthetic datasets with a known shape.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use itemcp_core::partition::{Axis, PartitionScheme};
use itemcp_core::queries::Instance;
use itemcp_core::TransactionDatabase;

pub const BRANDS: [&str; 5] = ["Ferrari", "Fiat", "Renault", "Peugeot", "Volkswagen"];
pub const PURCHASES_PER_CITY: usize = 5;

/// Car purchases in 2 regions × 2 departments × 2 cities, five per city.
///
/// Items are the brands followed by one indicator item per place; each
/// purchase holds its brand and the three places it happened in. Places
/// also form a three-level transaction scheme. A single Ferrari is sold in
/// the first city, so it reaches 10% in exactly that city (1/5) and its
/// department (1/10), and not in its region (1/20).
///
/// Returns the instance and the Ferrari item.
pub fn car_purchases(seed: u64) -> (Instance, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<String> = BRANDS.iter().map(|s| s.to_string()).collect();
    let mut regions = Vec::new();
    let mut departments = Vec::new();
    let mut cities = Vec::new();
    for r in 1..=2 {
        regions.push(format!("R{r}"));
        for d in 1..=2 {
            departments.push(format!("R{r}-D{d}"));
            for c in 1..=2 {
                cities.push(format!("R{r}-D{d}-C{c}"));
            }
        }
    }
    let place_base = labels.len();
    labels.extend(regions.iter().chain(&departments).chain(&cities).cloned());
    let item_of = |name: &str| place_base + labels[place_base..].iter().position(|l| l == name).unwrap();

    let mut rows = Vec::new();
    let mut by_city: Vec<Vec<usize>> = vec![Vec::new(); cities.len()];
    for (c, city) in cities.iter().enumerate() {
        let (d, r) = (c / 2, c / 4);
        for k in 0..PURCHASES_PER_CITY {
            let brand = if c == 0 && k == 0 {
                0
            } else {
                rng.gen_range(1..BRANDS.len())
            };
            by_city[c].push(rows.len());
            rows.push(vec![
                brand,
                item_of(&regions[r]),
                item_of(&departments[d]),
                item_of(city),
            ]);
        }
    }
    let db = TransactionDatabase::from_transactions(labels.len(), rows)
        .unwrap()
        .with_labels(labels)
        .unwrap();
    let level = |names: &[String], per: usize| -> Vec<(String, Vec<usize>)> {
        names
            .iter()
            .enumerate()
            .map(|(g, name)| (name.clone(), by_city[g * per..(g + 1) * per].concat()))
            .collect()
    };
    let scheme = PartitionScheme::from_levels(
        Axis::Transactions,
        db.transaction_count(),
        vec![level(&regions, 4), level(&departments, 2), level(&cities, 1)],
        |j| format!("t{}", j + 1),
    )
    .unwrap();
    (Instance::new(db).with_scheme(scheme).unwrap(), 0)
}

/// Attribute arities of the zoo-like data: 14 yes/no attributes and two
/// four-valued ones, 36 items in all, one value per attribute per row.
pub const ZOO_ARITIES: [usize; 16] = [2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 4, 4];
pub const ZOO_ROWS: usize = 101;

/// A zoo-like table: 101 rows × 36 attribute-value items, density 16/36,
/// with six item groups (whole attributes) and ten transaction groups.
pub fn zoo_like(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut first = Vec::new();
    let mut n = 0;
    for &a in &ZOO_ARITIES {
        first.push(n);
        n += a;
    }
    // Skewed value distributions so that long itemsets stay frequent.
    let weights: Vec<Vec<f64>> = ZOO_ARITIES
        .iter()
        .map(|&a| {
            let major = rng.gen_range(0.8..0.99);
            let mut w = vec![(1.0 - major) / (a - 1) as f64; a];
            w[rng.gen_range(0..a)] = major;
            w
        })
        .collect();
    let rows: Vec<Vec<usize>> = (0..ZOO_ROWS)
        .map(|_| {
            weights
                .iter()
                .enumerate()
                .map(|(attr, w)| {
                    let mut x = rng.gen::<f64>();
                    let mut v = 0;
                    while v + 1 < w.len() && x >= w[v] {
                        x -= w[v];
                        v += 1;
                    }
                    first[attr] + v
                })
                .collect()
        })
        .collect();
    let db = TransactionDatabase::from_transactions(n, rows).unwrap();

    // Attributes per item group: 3, 3, 3, 3, 3 (two yes/no + one four-valued), 1.
    let attr_groups: [&[usize]; 6] = [&[0, 1, 2], &[3, 4, 5], &[6, 7, 8], &[9, 10, 11], &[12, 13, 14], &[15]];
    let item_groups = attr_groups
        .iter()
        .enumerate()
        .map(|(g, attrs)| {
            let members = attrs
                .iter()
                .flat_map(|&a| first[a]..first[a] + ZOO_ARITIES[a])
                .collect();
            (format!("I{}", g + 1), members)
        })
        .collect();
    let trans_groups = (0..10)
        .map(|g| {
            let end = if g == 9 { ZOO_ROWS } else { (g + 1) * 10 };
            (format!("T{}", g + 1), (g * 10..end).collect())
        })
        .collect();
    let items = PartitionScheme::from_levels(Axis::Items, n, vec![item_groups], |i| (i + 1).to_string()).unwrap();
    let trans = PartitionScheme::from_levels(Axis::Transactions, ZOO_ROWS, vec![trans_groups], |j| {
        format!("t{}", j + 1)
    })
    .unwrap();
    Instance::new(db)
        .with_scheme(items)
        .unwrap()
        .with_scheme(trans)
        .unwrap()
}
