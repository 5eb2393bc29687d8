//! Largest configuration-free subsets of the `N x N` grid.
//!
//! Over the integers a configuration `(a, b), (a + m, b + n), (a - n, b + m)`
//! with `(m, n) != 0` is exactly a right isosceles triangle with the right
//! angle at `(a, b)`, in either orientation.
//!
//! The search is a Russian-doll branch and bound. Sub-problem `k` asks for the
//! largest free subset of the bottom `k` rows; cells are branched in row-major
//! order (include first, then exclude), and a node is cut when its size plus
//! `min(open cells, open cells in the current row + best(rows below))` cannot
//! beat the incumbent. Each sub-problem starts from the previous witness.
//! Choosing a cell forbids every cell that would complete a triangle with it
//! and an already chosen cell, read from a precomputed pair table.

use crate::error::{Error, Result};
use crate::grid::GridSet;

/// Largest side handled by the bitmask search.
pub const MAX_SIDE: usize = 11;

type Mask = u128;
/// Default node budget for [`max_configuration_free`].
pub const DEFAULT_BUDGET: u64 = 2_000_000_000;
/// Largest side accepted by [`exhaustive_max`].
pub const EXHAUSTIVE_MAX_SIDE: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalResult {
    pub side: usize,
    pub max_size: usize,
    pub witness: GridSet,
    pub nodes_explored: u64,
    /// The budget ran out; `max_size` is only a lower bound.
    pub lower_bound_only: bool,
}

/// `(x, y) -> (-y, x)`.
#[inline]
fn rot(v: (i64, i64)) -> (i64, i64) {
    (-v.1, v.0)
}

/// A configuration inside `A` as `[(a, b), (a + m, b + n), (a - n, b + m)]`
/// in 0-based cells, or `None`.
pub fn find_configuration(set: &GridSet) -> Option<[(usize, usize); 3]> {
    let pts: Vec<(i64, i64)> = set.cells().map(|(r, c)| (r as i64, c as i64)).collect();
    for &p in &pts {
        for &x in &pts {
            if p == x {
                continue;
            }
            let (dm, dn) = rot((x.0 - p.0, x.1 - p.1));
            let third = (p.0 + dm, p.1 + dn);
            if set.contains_signed(third.0, third.1) {
                let u = |v: (i64, i64)| (v.0 as usize, v.1 as usize);
                return Some([u(p), u(x), u(third)]);
            }
        }
    }
    None
}

pub fn is_configuration_free(set: &GridSet) -> bool {
    find_configuration(set).is_none()
}

fn cell_bit(side: usize, r: i64, c: i64) -> Option<Mask> {
    let n = side as i64;
    if r < 0 || c < 0 || r >= n || c >= n {
        return None;
    }
    Some(1 << (r * n + c))
}

/// `table[p * cells + x]`: cells completing a triangle with `p` and `x`.
fn pair_table(side: usize) -> Vec<Mask> {
    let cells = side * side;
    let at = |i: usize| ((i / side) as i64, (i % side) as i64);
    let mut table: Vec<Mask> = vec![0; cells * cells];
    for p in 0..cells {
        for x in 0..cells {
            if p == x {
                continue;
            }
            let (pa, xa) = (at(p), at(x));
            let d = (xa.0 - pa.0, xa.1 - pa.1);
            let r = rot(d);
            let mut mask = 0;
            // right angle at p, then at x
            for s in [1, -1] {
                for (apex, rv) in [(pa, r), (xa, (-r.0, -r.1))] {
                    if let Some(b) = cell_bit(side, apex.0 + s * rv.0, apex.1 + s * rv.1) {
                        mask |= b;
                    }
                }
            }
            // right angle at the third vertex: (p + x +- R(x - p)) / 2
            for s in [1, -1] {
                let (u, v) = (pa.0 + xa.0 + s * r.0, pa.1 + xa.1 + s * r.1);
                if u % 2 == 0 && v % 2 == 0 {
                    if let Some(b) = cell_bit(side, u / 2, v / 2) {
                        mask |= b;
                    }
                }
            }
            table[p * cells + x] = mask;
        }
    }
    table
}

struct Search {
    side: usize,
    cells: usize,
    pairs: Vec<Mask>,
    row_masks: Vec<Mask>,
    /// `doll[j]`: optimum over the bottom `j` rows.
    doll: Vec<usize>,
    best: usize,
    best_mask: Mask,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Search {
    fn dfs(&mut self, chosen: Mask, size: usize, open: Mask) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if size > self.best {
            self.best = size;
            self.best_mask = chosen;
        }
        if open == 0 {
            return;
        }
        let c = open.trailing_zeros() as usize;
        let r = c / self.side;
        let in_row = (open & self.row_masks[r]).count_ones() as usize;
        let bound = (open.count_ones() as usize).min(in_row + self.doll[self.side - 1 - r]);
        if size + bound <= self.best {
            return;
        }
        let bit: Mask = 1 << c;
        let mut forbidden = 0;
        let mut rest = chosen;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            forbidden |= self.pairs[c * self.cells + x];
            rest &= rest - 1;
        }
        self.dfs(chosen | bit, size + 1, open & !bit & !forbidden);
        if self.exhausted {
            return;
        }
        self.dfs(chosen, size, open & !bit);
    }
}

/// Exact maximum size of a configuration-free subset of the `side x side`
/// grid, with a witness. When more than `budget` nodes are needed the best
/// set found so far is returned with `lower_bound_only` set.
pub fn max_configuration_free(side: usize, budget: u64) -> Result<ExtremalResult> {
    if side == 0 {
        return Err(Error::EmptyGrid);
    }
    if side > MAX_SIDE {
        return Err(Error::ResourceCap(format!("extremal search supports N <= {MAX_SIDE}, got {side}")));
    }
    let cells = side * side;
    let row_masks = (0..side).map(|r| ((1 << side) - 1) << (r * side)).collect();
    let mut search = Search {
        side,
        cells,
        pairs: pair_table(side),
        row_masks,
        doll: vec![0; side + 1],
        best: 0,
        best_mask: 0,
        nodes: 0,
        budget,
        exhausted: false,
    };
    for k in 1..=side {
        let first = (side - k) * side;
        let open: Mask = ((1 << (cells - first)) - 1) << first;
        search.dfs(0, 0, open);
        if search.exhausted {
            break;
        }
        search.doll[k] = search.best;
    }
    let witness = GridSet::from_cells(
        side,
        (0..cells).filter(|&i| search.best_mask >> i & 1 == 1).map(|i| (i / side, i % side)),
    )?;
    debug_assert!(is_configuration_free(&witness));
    Ok(ExtremalResult {
        side,
        max_size: search.best,
        witness,
        nodes_explored: search.nodes.min(budget),
        lower_bound_only: search.exhausted,
    })
}

/// Maximum over all `2^(N^2)` subsets, for `N <= 4`. Returns the size and the
/// first optimal subset in increasing bitmask order.
pub fn exhaustive_max(side: usize) -> Result<(usize, GridSet)> {
    if side == 0 {
        return Err(Error::EmptyGrid);
    }
    if side > EXHAUSTIVE_MAX_SIDE {
        return Err(Error::ResourceCap(format!("exhaustive enumeration supports N <= {EXHAUSTIVE_MAX_SIDE}")));
    }
    let cells = side * side;
    let to_set =
        |mask: u64| GridSet::from_cells(side, (0..cells).filter(|&i| mask >> i & 1 == 1).map(|i| (i / side, i % side)));
    let mut best = (0, 0u64);
    for mask in 0..1u64 << cells {
        let size = mask.count_ones() as usize;
        if size > best.0 && is_configuration_free(&to_set(mask)?) {
            best = (size, mask);
        }
    }
    Ok((best.0, to_set(best.1)?))
}
