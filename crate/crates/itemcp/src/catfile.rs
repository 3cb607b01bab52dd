//! Category files: `name: id id ...` lines, optionally split into levels by
//! `level <k>` headers. `#` starts a comment line. Ids are 1-based.

use itemcp_core::dataset::TransactionDatabase;
use itemcp_core::partition::{Axis, PartitionError, PartitionScheme};

#[derive(Debug, thiserror::Error)]
pub enum CatFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

fn syntax(line: usize, message: impl Into<String>) -> CatFileError {
    CatFileError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses a category file over the items or transactions of `db`. Items
/// may be written by label or by id; transactions by id.
pub fn parse_partition(text: &str, db: &TransactionDatabase, axis: Axis) -> Result<PartitionScheme, CatFileError> {
    let universe = match axis {
        Axis::Items => db.item_count(),
        Axis::Transactions => db.transaction_count(),
    };
    let mut levels: Vec<Vec<(String, Vec<usize>)>> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("level") {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                rest.trim()
                    .parse::<usize>()
                    .map_err(|_| syntax(line_no, "expected `level <k>`"))?;
                levels.push(Vec::new());
                continue;
            }
        }
        let (name, ids) = line
            .split_once(':')
            .ok_or_else(|| syntax(line_no, "expected `name: id id ...`"))?;
        let name = name.trim();
        if name.is_empty() {
            return Err(syntax(line_no, "empty group name"));
        }
        let mut members = Vec::new();
        for token in ids.split_whitespace() {
            let idx = match axis {
                Axis::Items => db.resolve_item(token),
                Axis::Transactions => token.parse::<usize>().ok().filter(|&j| j > 0).map(|j| j - 1),
            };
            match idx {
                Some(i) => members.push(i),
                None => {
                    // Keep numeric ids beyond the universe for the range check.
                    match token.parse::<usize>() {
                        Ok(id) if id > 0 => members.push(id - 1),
                        _ => return Err(syntax(line_no, format!("unknown member `{token}`"))),
                    }
                }
            }
        }
        if levels.is_empty() {
            levels.push(Vec::new());
        }
        levels.last_mut().unwrap().push((name.to_string(), members));
    }
    levels.retain(|l| !l.is_empty());
    let singleton = |i: usize| match axis {
        Axis::Items => db.item_name(i),
        Axis::Transactions => format!("t{}", i + 1),
    };
    Ok(PartitionScheme::from_levels(axis, universe, levels, singleton)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use itemcp_core::fixtures;

    #[test]
    fn three_item_groups() {
        let db = fixtures::example_db();
        let s = parse_partition("I1: 1 2\nI2: 3 4 5\nI3: 6 7 8 9", &db, Axis::Items).unwrap();
        let sizes: Vec<usize> = s.primary().groups.iter().map(|g| g.members.count()).collect();
        assert_eq!(sizes, vec![2, 3, 4]);
    }

    #[test]
    fn labels_resolve() {
        let db = fixtures::example_db();
        let s = parse_partition("# by label\nI1: A B\nI2: C D E\n", &db, Axis::Items).unwrap();
        assert_eq!(s.primary().groups[0].members.to_vec(), vec![0, 1]);
    }

    #[test]
    fn omitted_item_becomes_singleton() {
        let db = fixtures::example_db();
        let s = parse_partition("I1: 1 2\nI2: 3 4 5\nI3: 6 7 8", &db, Axis::Items).unwrap();
        let last = s.primary().groups.last().unwrap();
        assert_eq!(last.members.to_vec(), vec![8]);
        assert_eq!(last.name, "K");
    }

    #[test]
    fn overlap_and_range_errors() {
        let db = fixtures::example_db();
        let err = parse_partition("G1: 1\nG2: 1", &db, Axis::Items).unwrap_err();
        assert!(matches!(err, CatFileError::Partition(PartitionError::Overlap { .. })));
        let err = parse_partition("T: 7", &db, Axis::Transactions).unwrap_err();
        assert!(matches!(
            err,
            CatFileError::Partition(PartitionError::OutOfRange { .. })
        ));
        assert!(parse_partition("no colon here", &db, Axis::Items).is_err());
    }

    #[test]
    fn levels() {
        let db = fixtures::example_db();
        let text = "level 1\nNorth: 1 2 3\nSouth: 4 5 6\nlevel 2\nC1: 1 2\nC2: 3\nC3: 4 5 6\n";
        let s = parse_partition(text, &db, Axis::Transactions).unwrap();
        assert_eq!(s.levels().len(), 2);
        assert_eq!(s.levels()[1].len(), 3);
        assert_eq!(s.find_group("C2"), Some((1, 1)));
    }
}
