//! Category schemes: named disjoint groups of items or transactions,
//! optionally stacked in levels (region / department / city).

use alloc::string::String;
use alloc::vec::Vec;

use crate::bitset::BitSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Items,
    Transactions,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PartitionError {
    #[error("index {index} out of range (universe {universe}) in group `{group}`")]
    OutOfRange {
        group: String,
        index: usize,
        universe: usize,
    },
    #[error("index {index} appears in both `{first}` and `{second}` on level {level}")]
    Overlap {
        level: usize,
        index: usize,
        first: String,
        second: String,
    },
    #[error("group name `{0}` is used twice")]
    DuplicateName(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub name: String,
    pub members: BitSet,
}

/// One partition of the universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    pub groups: Vec<Group>,
    /// `group_of[i]` is the position of the group containing index `i`.
    group_of: Vec<usize>,
}

impl Level {
    pub fn group_of(&self, index: usize) -> usize {
        self.group_of[index]
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Positions of the groups whose union is exactly `set`, if `set` is such a union.
    pub fn as_union(&self, set: &BitSet) -> Option<Vec<usize>> {
        let mut picked = Vec::new();
        for (g, group) in self.groups.iter().enumerate() {
            if group.members.is_empty() {
                continue;
            }
            if group.members.is_subset(set) {
                picked.push(g);
            } else if group.members.intersects(set) {
                return None;
            }
        }
        Some(picked)
    }
}

/// A partition scheme over items or transactions. Every level covers the
/// whole universe: indices not named by the input become singleton groups.
/// Named groups are unique across levels; implicit singletons share their
/// name between levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionScheme {
    axis: Axis,
    universe: usize,
    levels: Vec<Level>,
}

impl PartitionScheme {
    /// Builds a scheme from explicitly named groups per level (0-based
    /// indices). `singleton_name` names the implicit groups; an empty
    /// `levels` list yields a single level of singletons.
    pub fn from_levels<F>(
        axis: Axis,
        universe: usize,
        levels: Vec<Vec<(String, Vec<usize>)>>,
        singleton_name: F,
    ) -> Result<Self, PartitionError>
    where
        F: Fn(usize) -> String,
    {
        let levels = if levels.is_empty() {
            alloc::vec![Vec::new()]
        } else {
            levels
        };
        let mut seen_names: Vec<String> = Vec::new();
        let mut built = Vec::with_capacity(levels.len());
        for (lvl, groups) in levels.into_iter().enumerate() {
            let mut owner: Vec<Option<usize>> = alloc::vec![None; universe];
            let mut out: Vec<Group> = Vec::new();
            for (name, indices) in groups {
                if seen_names.contains(&name) {
                    return Err(PartitionError::DuplicateName(name));
                }
                let gi = out.len();
                let mut members = BitSet::new(universe);
                for idx in indices {
                    if idx >= universe {
                        return Err(PartitionError::OutOfRange {
                            group: name,
                            index: idx,
                            universe,
                        });
                    }
                    match owner[idx] {
                        Some(other) if other != gi => {
                            return Err(PartitionError::Overlap {
                                level: lvl,
                                index: idx,
                                first: out[other].name.clone(),
                                second: name,
                            })
                        }
                        _ => owner[idx] = Some(gi),
                    }
                    members.insert(idx);
                }
                seen_names.push(name.clone());
                out.push(Group { name, members });
            }
            for (idx, slot) in owner.iter_mut().enumerate() {
                if slot.is_none() {
                    let name = singleton_name(idx);
                    if seen_names.contains(&name) {
                        return Err(PartitionError::DuplicateName(name));
                    }
                    *slot = Some(out.len());
                    out.push(Group {
                        name,
                        members: BitSet::from_indices(universe, [idx]),
                    });
                }
            }
            let group_of = owner.into_iter().map(|o| o.unwrap()).collect();
            built.push(Level { groups: out, group_of });
        }
        Ok(PartitionScheme {
            axis,
            universe,
            levels: built,
        })
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// The flat partition used by group-activation and span constraints.
    pub fn primary(&self) -> &Level {
        &self.levels[0]
    }

    pub fn group_count(&self) -> usize {
        self.levels.iter().map(Level::len).sum()
    }

    pub fn find_group(&self, name: &str) -> Option<(usize, usize)> {
        self.levels
            .iter()
            .enumerate()
            .find_map(|(l, level)| level.groups.iter().position(|g| g.name == name).map(|g| (l, g)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn name(i: usize) -> String {
        (i + 1).to_string()
    }

    #[test]
    fn unmentioned_indices_become_singletons() {
        let s = PartitionScheme::from_levels(
            Axis::Items,
            9,
            vec![vec![
                ("I1".into(), vec![0, 1]),
                ("I2".into(), vec![2, 3, 4]),
                ("I3".into(), vec![5, 6, 7]),
            ]],
            name,
        )
        .unwrap();
        let lvl = s.primary();
        assert_eq!(lvl.len(), 4);
        assert_eq!(lvl.groups[3].name, "9");
        assert_eq!(lvl.group_of(8), 3);
        assert_eq!(lvl.group_of(4), 1);
    }

    #[test]
    fn overlap_is_rejected() {
        let err = PartitionScheme::from_levels(
            Axis::Items,
            3,
            vec![vec![("G1".into(), vec![0]), ("G2".into(), vec![0])]],
            name,
        )
        .unwrap_err();
        assert!(matches!(err, PartitionError::Overlap { index: 0, .. }));
    }

    #[test]
    fn out_of_range_is_rejected() {
        let err =
            PartitionScheme::from_levels(Axis::Transactions, 3, vec![vec![("G".into(), vec![3])]], name).unwrap_err();
        assert!(matches!(err, PartitionError::OutOfRange { index: 3, .. }));
    }

    #[test]
    fn union_detection() {
        let s = PartitionScheme::from_levels(
            Axis::Transactions,
            6,
            vec![vec![
                ("T1".into(), vec![0, 1]),
                ("T2".into(), vec![2, 3]),
                ("T3".into(), vec![4, 5]),
            ]],
            name,
        )
        .unwrap();
        let lvl = s.primary();
        assert_eq!(lvl.as_union(&BitSet::from_indices(6, [0, 1, 4, 5])), Some(vec![0, 2]));
        assert_eq!(lvl.as_union(&BitSet::from_indices(6, [0, 4, 5])), None);
    }
}
