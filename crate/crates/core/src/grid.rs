//! Word-packed subsets of the `N x N` grid.
//!
//! Cell `(r, c)` with `0 <= r, c < N` stands for the grid point
//! `(r + 1, c + 1)` of `{1..N}^2`; `r` is the first coordinate. Rows are
//! packed into `u64` words, bit `c % 64` of word `c / 64`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{CyclicGroup, GroupFunction2D};

pub(crate) const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridSet {
    side: usize,
    words_per_row: usize,
    bits: Vec<u64>,
    cardinality: usize,
}

impl GridSet {
    pub fn empty(side: usize) -> Result<Self> {
        if side == 0 {
            return Err(Error::EmptyGrid);
        }
        let words_per_row = side.div_ceil(WORD);
        Ok(Self { side, words_per_row, bits: vec![0; side * words_per_row], cardinality: 0 })
    }

    pub fn full(side: usize) -> Result<Self> {
        let mut g = Self::empty(side)?;
        for r in 0..side {
            for c in 0..side {
                g.insert(r, c);
            }
        }
        Ok(g)
    }

    /// Builds a set from 0-based cells; duplicates are ignored.
    pub fn from_cells(side: usize, cells: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(side)?;
        for (r, c) in cells {
            if r >= side || c >= side {
                return Err(Error::OutOfRange { what: "cell coordinate", value: r.max(c) as f64 });
            }
            g.insert(r, c);
        }
        Ok(g)
    }

    /// Builds a set from 1-based grid points `(a, b)`.
    pub fn from_points(side: usize, points: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut cells = Vec::new();
        for (a, b) in points {
            if a == 0 || b == 0 {
                return Err(Error::OutOfRange { what: "grid point coordinate (1-based)", value: 0.0 });
            }
            cells.push((a - 1, b - 1));
        }
        Self::from_cells(side, cells)
    }

    #[inline]
    pub fn side(&self) -> usize {
        self.side
    }

    #[inline]
    pub fn cardinality(&self) -> usize {
        self.cardinality
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.cardinality == 0
    }

    pub fn density(&self) -> f64 {
        self.cardinality as f64 / (self.side * self.side) as f64
    }

    #[inline]
    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    #[inline]
    pub fn contains(&self, r: usize, c: usize) -> bool {
        self.row(r)[c / WORD] >> (c % WORD) & 1 == 1
    }

    /// Signed-coordinate membership; anything off the grid is absent.
    #[inline]
    pub fn contains_signed(&self, r: i64, c: i64) -> bool {
        r >= 0
            && c >= 0
            && (r as usize) < self.side
            && (c as usize) < self.side
            && self.contains(r as usize, c as usize)
    }

    pub fn insert(&mut self, r: usize, c: usize) -> bool {
        let w = &mut self.bits[r * self.words_per_row + c / WORD];
        let mask = 1u64 << (c % WORD);
        let fresh = *w & mask == 0;
        *w |= mask;
        if fresh {
            self.cardinality += 1;
        }
        fresh
    }

    pub fn remove(&mut self, r: usize, c: usize) -> bool {
        let w = &mut self.bits[r * self.words_per_row + c / WORD];
        let mask = 1u64 << (c % WORD);
        let present = *w & mask != 0;
        *w &= !mask;
        if present {
            self.cardinality -= 1;
        }
        present
    }

    /// Occupied cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.side).flat_map(move |r| (0..self.side).filter(move |&c| self.contains(r, c)).map(move |c| (r, c)))
    }

    /// Quarter turn about the grid centre: `(r, c) -> (c, N-1-r)`.
    pub fn rotate90(&self) -> Self {
        let n = self.side;
        let mut out = Self::empty(n).expect("side >= 1");
        for (r, c) in self.cells() {
            out.insert(c, n - 1 - r);
        }
        out
    }

    /// Indicator of the set on `(Z/N)^2` with `N` equal to the grid side.
    pub fn indicator(&self) -> GroupFunction2D {
        let g = CyclicGroup::new(self.side).expect("side >= 1");
        GroupFunction2D::from_fn(g, |r, c| if self.contains(r, c) { 1.0 } else { 0.0 })
    }

    /// Parses `N` lines of `N` characters from `{'0', '1'}`. Blank trailing
    /// lines and `\r` are tolerated.
    pub fn parse_text(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().map(|l| l.trim_end_matches('\r')).collect();
        let last = lines.iter().rposition(|l| !l.is_empty()).map_or(0, |i| i + 1);
        let lines = &lines[..last];
        if lines.is_empty() {
            return Err(Error::Parse { line: 1, column: 1, message: "empty grid".into() });
        }
        let side = lines[0].chars().count();
        if side == 0 {
            return Err(Error::Parse { line: 1, column: 1, message: "empty first row".into() });
        }
        if lines.len() != side {
            return Err(Error::Parse {
                line: lines.len().min(side) + 1,
                column: 1,
                message: format!("expected {side} rows for a {side}-character first row, found {}", lines.len()),
            });
        }
        let mut g = Self::empty(side)?;
        for (r, line) in lines.iter().enumerate() {
            let mut width = 0;
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '1' if c < side => {
                        g.insert(r, c);
                    }
                    '0' if c < side => {}
                    '0' | '1' => {}
                    other => {
                        return Err(Error::Parse {
                            line: r + 1,
                            column: c + 1,
                            message: format!("unexpected character {other:?}"),
                        })
                    }
                }
                width += 1;
            }
            if width != side {
                return Err(Error::Parse {
                    line: r + 1,
                    column: width.min(side) + 1,
                    message: format!("row has {width} characters, expected {side}"),
                });
            }
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.side * (self.side + 1));
        for r in 0..self.side {
            for c in 0..self.side {
                s.push(if self.contains(r, c) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    /// Parses `{"side": N, "points": [[a, b], ...]}` with 1-based points.
    pub fn parse_json(text: &str) -> Result<Self> {
        let doc: PointList = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        for (i, &[a, b]) in doc.points.iter().enumerate() {
            if a == 0 || b == 0 || a > doc.side || b > doc.side {
                return Err(Error::Parse {
                    line: 1,
                    column: 1,
                    message: format!("point #{i} ({a}, {b}) outside 1..={}", doc.side),
                });
            }
        }
        Self::from_points(doc.side, doc.points.iter().map(|&[a, b]| (a, b)))
    }

    pub fn to_point_list(&self) -> PointList {
        PointList { side: self.side, points: self.cells().map(|(r, c)| [r + 1, c + 1]).collect() }
    }
}

/// Coordinate-list form of a grid set (1-based points).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointList {
    pub side: usize,
    pub points: Vec<[usize; 2]>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_remove_cardinality() {
        let mut g = GridSet::empty(70).unwrap();
        assert!(g.insert(3, 65));
        assert!(!g.insert(3, 65));
        assert!(g.insert(69, 0));
        assert_eq!(g.cardinality(), 2);
        assert!(g.contains(3, 65));
        assert!(g.remove(3, 65));
        assert!(!g.remove(3, 65));
        assert_eq!(g.cardinality(), 1);
        assert_eq!(g.words_per_row(), 2);
        assert!(GridSet::empty(0).is_err());
    }

    #[test]
    fn text_round_trip_and_diagnostics() {
        let g = GridSet::parse_text("101\n010\n001\n").unwrap();
        assert_eq!(g.cardinality(), 4);
        assert!(g.contains(0, 2) && g.contains(2, 2) && !g.contains(1, 0));
        assert_eq!(GridSet::parse_text(&g.to_text()).unwrap(), g);

        match GridSet::parse_text("10\n1x\n") {
            Err(Error::Parse { line: 2, column: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        match GridSet::parse_text("10\n1\n") {
            Err(Error::Parse { line: 2, column: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(GridSet::parse_text("101\n010\n"), Err(Error::Parse { line: 3, .. })));
        assert!(GridSet::parse_text("").is_err());
    }

    #[test]
    fn json_points() {
        let g = GridSet::parse_json(r#"{"side": 3, "points": [[1,1],[2,1],[1,2]]}"#).unwrap();
        assert_eq!(g.cardinality(), 3);
        assert!(g.contains(1, 0));
        assert_eq!(g.to_point_list().points, vec![[1, 1], [1, 2], [2, 1]]);
        assert!(GridSet::parse_json(r#"{"side": 2, "points": [[3,1]]}"#).is_err());
    }

    #[test]
    fn rotation_has_order_four() {
        let g = GridSet::parse_text("110\n001\n000\n").unwrap();
        let r = g.rotate90();
        assert_ne!(r, g);
        assert_eq!(r.cardinality(), g.cardinality());
        assert_eq!(r.rotate90().rotate90().rotate90(), g);
    }
}
