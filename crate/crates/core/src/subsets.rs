//! Enumeration of index bipartitions `S ⊔ S^c` in lexicographic order.
//!
//! Every property checked over partitions here is symmetric in `S ↔ S^c`, so
//! only representatives containing index 0 are visited. Among all subsets
//! failing a symmetric test, the lexicographically least sorted tuple always
//! contains 0 (or is empty), which is why the first failure met by a preorder
//! walk over `{0} ∪ …` is the least witness.

use crate::{Error, Result};

/// Largest N for which partitions may be enumerated when none is configured.
pub const DEFAULT_MAX_SUBSET_COLUMNS: usize = 24;

pub(crate) fn mask_to_indices(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask & (1 << i) != 0).collect()
}

pub(crate) fn complement(mask: u64, n: usize) -> u64 {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    !mask & full
}

pub(crate) fn check_guard(n: usize, max_columns: usize, what: &'static str) -> Result<()> {
    if n > max_columns || n > 63 {
        return Err(Error::GuardExceeded {
            what,
            required: 1u128 << (n.saturating_sub(1).min(127)),
            limit: 1u128 << (max_columns.saturating_sub(1).min(127)),
        });
    }
    Ok(())
}

pub(crate) struct Walk {
    pub first_failure: Option<u64>,
    pub examined: u64,
}

/// Walks representatives `S ∋ 0` in lexicographic order of their sorted
/// index tuples and stops at the first `S` for which `ok(S)` is false.
/// `include_full` controls whether `S = {0..N}` (paired with `∅`) is visited.
pub(crate) fn first_failing_partition<F>(n: usize, include_full: bool, mut ok: F) -> Result<Walk>
where
    F: FnMut(u64) -> Result<bool>,
{
    let mut walk = Walk {
        first_failure: None,
        examined: 0,
    };
    if n == 0 {
        return Ok(walk);
    }
    let full = complement(0, n);
    visit(1, 0, n, full, include_full, &mut ok, &mut walk)?;
    Ok(walk)
}

fn visit<F>(
    mask: u64,
    last: usize,
    n: usize,
    full: u64,
    include_full: bool,
    ok: &mut F,
    walk: &mut Walk,
) -> Result<bool>
where
    F: FnMut(u64) -> Result<bool>,
{
    if mask != full || include_full {
        walk.examined += 1;
        if !ok(mask)? {
            walk.first_failure = Some(mask);
            return Ok(true);
        }
    }
    for next in last + 1..n {
        if visit(mask | (1 << next), next, n, full, include_full, ok, walk)? {
            return Ok(true);
        }
    }
    Ok(false)
}
