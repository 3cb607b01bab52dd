//! Query files.
//!
//! ```text
//! # where do Ferraris sell?
//! theta: 10%
//! closed: false
//! items_active: list Ferrari
//! trans_active: one-of-levels
//! require: Ferrari
//! ```
//!
//! | key            | value                                                   |
//! |----------------|---------------------------------------------------------|
//! | `theta`        | `50%`, `0.5` or `1/2` (required)                        |
//! | `minsize`      | positive integer                                        |
//! | `closed`       | `true` (default) or `false`                             |
//! | `span`         | `lb ub`: item groups the itemset touches                |
//! | `require`      | items (labels or 1-based ids); may repeat               |
//! | `forbid`       | items; may repeat                                       |
//! | `items_active` | `all` (default), `lb ub`, `list <members>`, `one-of-levels` |
//! | `trans_active` | same as `items_active`                                  |
//!
//! `list` members are indices, labels or group names of the matching
//! category file. Unknown keys are rejected.

use itemcp_core::dataset::Threshold;
use itemcp_core::partition::Axis;
use itemcp_core::queries::{Activation, Bounds, Instance, Query};
use itemcp_core::BitSet;

#[derive(Debug, thiserror::Error)]
#[error("query line {line}: {message}")]
pub struct QueryFileError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> QueryFileError {
    QueryFileError {
        line,
        message: message.into(),
    }
}

/// Parses `50%`, `0.5`, `12.5%` or `1/2` into an exact threshold.
pub fn parse_theta(text: &str) -> Option<Threshold> {
    let text = text.trim();
    let (body, scale) = match text.strip_suffix('%') {
        Some(b) => (b.trim(), 100u64),
        None => (text, 1),
    };
    let (num, den) = if let Some((p, q)) = body.split_once('/') {
        (
            p.trim().parse::<u64>().ok()?,
            q.trim().parse::<u64>().ok()?.checked_mul(scale)?,
        )
    } else {
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() && frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) || frac.len() > 12 {
            return None;
        }
        let int: u64 = if int.is_empty() { 0 } else { int.parse().ok()? };
        let den = 10u64.pow(frac.len() as u32);
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
        (int.checked_mul(den)?.checked_add(frac)?, den.checked_mul(scale)?)
    };
    Threshold::new(num, den).ok()
}

fn parse_activation(value: &str, axis: Axis, inst: &Instance, line: usize) -> Result<Activation, QueryFileError> {
    let words: Vec<&str> = value.split_whitespace().collect();
    match words.as_slice() {
        ["all"] => Ok(Activation::All),
        ["one-of-levels"] => Ok(Activation::OneOfLevels),
        ["list", members @ ..] => {
            let universe = match axis {
                Axis::Items => inst.db.item_count(),
                Axis::Transactions => inst.db.transaction_count(),
            };
            let mut set = BitSet::new(universe);
            for &tok in members {
                let group = inst
                    .scheme(axis)
                    .and_then(|s| s.find_group(tok).map(|(l, g)| &s.levels()[l].groups[g]));
                if let Some(g) = group {
                    set.union_with(&g.members);
                    continue;
                }
                let idx = match axis {
                    Axis::Items => inst.db.resolve_item(tok),
                    Axis::Transactions => tok
                        .parse::<usize>()
                        .ok()
                        .filter(|&j| j >= 1 && j <= universe)
                        .map(|j| j - 1),
                };
                set.insert(idx.ok_or_else(|| err(line, format!("unknown member `{tok}`")))?);
            }
            Ok(Activation::Fixed(set))
        }
        [lb, ub] => {
            let lb = lb.parse().map_err(|_| err(line, "bad lower bound"))?;
            let ub = ub.parse().map_err(|_| err(line, "bad upper bound"))?;
            Ok(Activation::Groups(Bounds::new(lb, ub)))
        }
        _ => Err(err(
            line,
            format!("expected `all`, `lb ub`, `list ...` or `one-of-levels`, got `{value}`"),
        )),
    }
}

fn parse_items(value: &str, inst: &Instance, line: usize) -> Result<Vec<usize>, QueryFileError> {
    value
        .split_whitespace()
        .map(|tok| {
            inst.db
                .resolve_item(tok)
                .ok_or_else(|| err(line, format!("unknown item `{tok}`")))
        })
        .collect()
}

/// Parses a query file against the instance whose labels and groups it
/// names. Bounds are checked later, by [`Query::validate`].
pub fn parse_query(text: &str, inst: &Instance) -> Result<Query, QueryFileError> {
    let mut theta = None;
    let mut seen: Vec<&str> = Vec::new();
    let mut q = Query::q1(Threshold::new(1, 1).unwrap());
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let (key, value) = body.split_once(':').ok_or_else(|| err(line, "expected `key: value`"))?;
        let (key, value) = (key.trim(), value.trim());
        let repeatable = matches!(key, "require" | "forbid");
        if !repeatable && seen.contains(&key) {
            return Err(err(line, format!("`{key}` given twice")));
        }
        match key {
            "theta" => theta = Some(parse_theta(value).ok_or_else(|| err(line, format!("bad threshold `{value}`")))?),
            "minsize" => {
                let k: usize = value
                    .parse()
                    .map_err(|_| err(line, "minsize must be a positive integer"))?;
                if k == 0 {
                    return Err(err(line, "minsize must be a positive integer"));
                }
                q.min_size = Some(k);
            }
            "closed" => {
                q.closed = match value {
                    "true" => true,
                    "false" => false,
                    _ => return Err(err(line, "closed must be `true` or `false`")),
                }
            }
            "span" => {
                let b: Vec<usize> = value
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<Result<_, _>>()
                    .map_err(|_| err(line, "span must be `lb ub`"))?;
                let [lb, ub] = b[..] else {
                    return Err(err(line, "span must be `lb ub`"));
                };
                q.span = Some(Bounds::new(lb, ub));
            }
            "require" => q.require.extend(parse_items(value, inst, line)?),
            "forbid" => q.forbid.extend(parse_items(value, inst, line)?),
            "items_active" => q.items = parse_activation(value, Axis::Items, inst, line)?,
            "trans_active" => q.transactions = parse_activation(value, Axis::Transactions, inst, line)?,
            other => return Err(err(line, format!("unknown key `{other}`"))),
        }
        seen.push(key);
    }
    q.theta = theta.ok_or_else(|| err(0, "missing `theta`"))?;
    Ok(q)
}
