//! FIMI transaction files: one transaction per line, whitespace-separated
//! positive item ids. Blank lines are skipped; repeated ids collapse.

use std::io::BufRead;

use itemcp_core::dataset::{DatasetError, TransactionDatabase};

#[derive(Debug, thiserror::Error)]
pub enum FimiError {
    #[error("line {line}: `{token}` is not a positive item id")]
    BadToken { line: usize, token: String },
    #[error("line {line}: {source}")]
    Io { line: usize, source: std::io::Error },
    #[error(transparent)]
    Dataset(#[from] DatasetError),
}

pub fn parse_fimi<R: BufRead>(reader: R) -> Result<TransactionDatabase, FimiError> {
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut max_id = 0;
    for (k, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| FimiError::Io { line: k + 1, source })?;
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for token in line.split_whitespace() {
            match token.parse::<usize>() {
                Ok(id) if id > 0 => {
                    max_id = max_id.max(id);
                    row.push(id - 1);
                }
                _ => {
                    return Err(FimiError::BadToken {
                        line: k + 1,
                        token: token.to_string(),
                    })
                }
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(DatasetError::EmptyDatabase.into());
    }
    Ok(TransactionDatabase::from_transactions(max_id, rows)?)
}

pub fn parse_fimi_str(text: &str) -> Result<TransactionDatabase, FimiError> {
    parse_fimi(text.as_bytes())
}

/// Writes `db` in FIMI format (1-based ids).
pub fn write_fimi<W: std::io::Write>(db: &TransactionDatabase, mut out: W) -> std::io::Result<()> {
    for j in 0..db.transaction_count() {
        let ids: Vec<String> = db.row(j).iter().map(|i| (i + 1).to_string()).collect();
        writeln!(out, "{}", ids.join(" "))?;
    }
    Ok(())
}

/// Item labels, one `id label` pair per line; `#` starts a comment.
pub fn parse_labels(text: &str, item_count: usize) -> Result<Vec<String>, FimiError> {
    let mut labels: Vec<String> = (1..=item_count).map(|i| i.to_string()).collect();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, label) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let bad = || FimiError::BadToken {
            line: k + 1,
            token: id.to_string(),
        };
        let id: usize = id.parse().map_err(|_| bad())?;
        if id == 0 || id > item_count || label.trim().is_empty() {
            return Err(bad());
        }
        labels[id - 1] = label.trim().to_string();
    }
    Ok(labels)
}
