//! Configurations in `(F_q^n)^2` and the polynomial-method bound.
//!
//! A configuration is a triple of points `(x, y), (x', y'), (x'', y'')` with
//! `x - y - x' + y'' = 0` and `x + y - y' - x'' = 0`, i.e. the image of
//! `(a, b), (a + m, b + n), (a - n, b + m)`.
//!
//! Distinctness comes in two flavours. [`Mode::Strict`] asks for three
//! pairwise distinct points. [`Mode::NotAllEqual`] only excludes the diagonal;
//! the two differ only in characteristic 2, where `m = n` makes the second and
//! third point coincide. Such degenerate triples can only lower the count of
//! genuine configurations, so the weaker predicate is the one the diagonal
//! identity in [`verify_identity`] relies on.

pub mod gf;
mod slicerank;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
pub use gf::{GaloisField, SUPPORTED_ORDERS};
pub use slicerank::{
    count_d, d_sum_bound, is_prime_power, minimize_phi, phi, slice_rank_report, verify_d_bound, DBoundReport,
    SliceRankReport,
};

/// Largest set accepted by [`find_configurations`].
pub const CONFIGURATION_CAP: usize = 2000;
/// Largest set accepted by the identity check.
pub const IDENTITY_CAP: usize = 200;

/// A vector in `F_q^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldVector {
    q: u32,
    coords: Vec<u8>,
}

impl FieldVector {
    pub fn new(q: u32, coords: Vec<u8>) -> Result<Self> {
        if !SUPPORTED_ORDERS.contains(&q) {
            return Err(Error::UnsupportedField(q));
        }
        if let Some((i, &c)) = coords.iter().enumerate().find(|(_, &c)| c as u32 >= q) {
            return Err(Error::ValueOutOfRange { range: "0..q", value: c as f64, index: i });
        }
        Ok(Self { q, coords })
    }

    pub fn zero(q: u32, n: usize) -> Result<Self> {
        Self::new(q, vec![0; n])
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u8] {
        &self.coords
    }
}

impl fmt::Display for FieldVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Strict,
    NotAllEqual,
}

/// A set of points of `(F_q^n)^2`. A point is stored as its `2n` coordinates,
/// `x` first; points are kept sorted and distinct.
#[derive(Debug, Clone)]
pub struct FFConfigSet {
    field: Arc<GaloisField>,
    n: usize,
    points: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl PartialEq for FFConfigSet {
    fn eq(&self, other: &Self) -> bool {
        self.q() == other.q() && self.n == other.n && self.points == other.points
    }
}

impl FFConfigSet {
    /// Builds a set from `(u, v)` pairs. Duplicates are an error.
    pub fn new(q: u32, n: usize, points: impl IntoIterator<Item = (FieldVector, FieldVector)>) -> Result<Self> {
        let raw = points
            .into_iter()
            .map(|(u, v)| {
                for w in [&u, &v] {
                    if w.q() != q {
                        return Err(Error::UnsupportedField(w.q()));
                    }
                    if w.dim() != n {
                        return Err(Error::DimensionMismatch { expected: n, got: w.dim() });
                    }
                }
                let mut p = u.coords;
                p.extend_from_slice(&v.coords);
                Ok(p)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_raw(q, n, raw)
    }

    /// Builds a set from flat `2n`-digit points.
    pub fn from_raw(q: u32, n: usize, raw: Vec<Vec<u8>>) -> Result<Self> {
        let field = Arc::new(GaloisField::new(q)?);
        let mut points = Vec::with_capacity(raw.len());
        for p in raw {
            if p.len() != 2 * n {
                return Err(Error::DimensionMismatch { expected: 2 * n, got: p.len() });
            }
            if let Some((i, &c)) = p.iter().enumerate().find(|(_, &c)| c as u32 >= q) {
                return Err(Error::ValueOutOfRange { range: "0..q", value: c as f64, index: i });
            }
            points.push(p);
        }
        points.sort();
        let before = points.len();
        points.dedup();
        if points.len() != before {
            return Err(Error::Parse { line: 0, column: 0, message: "duplicate point".into() });
        }
        let index = points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        Ok(Self { field, n, points, index })
    }

    pub fn empty(q: u32, n: usize) -> Result<Self> {
        Self::from_raw(q, n, Vec::new())
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Flat coordinates of point `i`.
    pub fn point(&self, i: usize) -> &[u8] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<u8>] {
        &self.points
    }

    pub fn pair(&self, i: usize) -> (FieldVector, FieldVector) {
        let p = &self.points[i];
        let q = self.q();
        (FieldVector { q, coords: p[..self.n].to_vec() }, FieldVector { q, coords: p[self.n..].to_vec() })
    }

    pub fn index_of(&self, point: &[u8]) -> Option<usize> {
        self.index.get(point).copied()
    }

    pub fn contains(&self, point: &[u8]) -> bool {
        self.index.contains_key(point)
    }

    /// Third point `(x + y - y', x' - x + y)` completing `P, P'`.
    pub fn third_point(&self, p: &[u8], pp: &[u8]) -> Vec<u8> {
        let f = &*self.field;
        let n = self.n;
        let (x, y) = p.split_at(n);
        let (x1, y1) = pp.split_at(n);
        let mut out = Vec::with_capacity(2 * n);
        out.extend((0..n).map(|i| f.sub(f.add(x[i], y[i]), y1[i])));
        out.extend((0..n).map(|i| f.add(f.sub(x1[i], x[i]), y[i])));
        out
    }

    /// Parses the text format: a header `q n`, then one point per line as
    /// `2n` digits, either whitespace-separated or written contiguously.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse_text(text: &str) -> Result<Self> {
        let err = |line: usize, column: usize, message: String| Error::Parse { line, column, message };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| err(1, 1, "missing header `q n`".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(err(hline, 1, format!("header must be `q n`, found {header:?}")));
        }
        let q: u32 = fields[0].parse().map_err(|_| err(hline, 1, format!("bad field order {:?}", fields[0])))?;
        let n: usize = fields[1].parse().map_err(|_| err(hline, 1, format!("bad dimension {:?}", fields[1])))?;
        if !SUPPORTED_ORDERS.contains(&q) {
            return Err(Error::UnsupportedField(q));
        }
        if n == 0 {
            return Err(err(hline, 1, "dimension must be at least 1".into()));
        }
        let mut raw = Vec::new();
        let mut seen: HashMap<Vec<u8>, usize> = HashMap::new();
        for (lineno, line) in lines {
            let mut digits = Vec::with_capacity(2 * n);
            for (col, ch) in line.char_indices() {
                if ch.is_whitespace() {
                    continue;
                }
                let d = ch
                    .to_digit(10)
                    .filter(|&d| d < q)
                    .ok_or_else(|| err(lineno, col + 1, format!("expected a digit below {q}, found {ch:?}")))?;
                digits.push(d as u8);
            }
            if digits.len() != 2 * n {
                return Err(err(lineno, 1, format!("expected {} digits, found {}", 2 * n, digits.len())));
            }
            if let Some(first) = seen.insert(digits.clone(), lineno) {
                return Err(err(lineno, 1, format!("duplicate of the point on line {first}")));
            }
            raw.push(digits);
        }
        Self::from_raw(q, n, raw)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.q(), self.n);
        for p in &self.points {
            let line: Vec<String> = p.iter().map(|d| d.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    fn describe(&self, t: [usize; 3]) -> String {
        let show = |i: usize| {
            let (u, v) = self.pair(i);
            format!("({u}, {v})")
        };
        format!("{} {} {}", show(t[0]), show(t[1]), show(t[2]))
    }

    fn keep(mode: Mode, t: [usize; 3]) -> bool {
        match mode {
            Mode::Strict => t[0] != t[1] && t[1] != t[2] && t[0] != t[2],
            Mode::NotAllEqual => !(t[0] == t[1] && t[1] == t[2]),
        }
    }

    fn configurations_from(&self, i: usize, mode: Mode) -> Vec<[usize; 3]> {
        let p = &self.points[i];
        self.points
            .iter()
            .enumerate()
            .filter_map(|(j, pp)| self.index_of(&self.third_point(p, pp)).map(|k| [i, j, k]))
            .filter(|&t| Self::keep(mode, t))
            .collect()
    }
}

fn check_cap(set: &FFConfigSet, cap: usize) -> Result<()> {
    if set.len() > cap {
        Err(Error::ResourceCap(format!("set has {} points, limit is {cap}", set.len())))
    } else {
        Ok(())
    }
}

/// Every configuration in `A^3` as point indices, ordered by first, then
/// second point. Each candidate pair determines its third point, so the
/// work is `O(|A|^2)`.
pub fn find_configurations(set: &FFConfigSet, mode: Mode) -> Result<Vec<[usize; 3]>> {
    check_cap(set, CONFIGURATION_CAP)?;
    let per_first: Vec<Vec<[usize; 3]>> =
        (0..set.len()).into_par_iter().map(|i| set.configurations_from(i, mode)).collect();
    Ok(per_first.into_iter().flatten().collect())
}

/// The first configuration in the order of [`find_configurations`].
pub fn first_configuration(set: &FFConfigSet, mode: Mode) -> Result<Option<[usize; 3]>> {
    check_cap(set, CONFIGURATION_CAP)?;
    Ok((0..set.len()).find_map(|i| set.configurations_from(i, mode).into_iter().next()))
}

/// Both sides of the diagonal identity evaluated over `A^3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub triples_checked: u64,
    /// Triples where the two sides differ, in lexicographic order.
    pub mismatches: Vec<[usize; 3]>,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Evaluates `delta_0(x - y - x' + y'') * delta_0(x + y - y' - x'')` against
/// `sum_a delta_a(P) delta_a(P') delta_a(P'')` at every triple of `A^3`, in
/// field arithmetic, with `delta_0(v) = prod_i (1 - v_i^(q-1))`.
pub fn evaluate_identity(set: &FFConfigSet) -> Result<IdentityCheck> {
    check_cap(set, IDENTITY_CAP)?;
    let f = set.field();
    let n = set.n();
    let size = set.len();
    let delta0 = |v: &mut dyn Iterator<Item = u8>| v.fold(1u8, |acc, c| f.mul(acc, f.zero_indicator(c)));

    // delta_a(P) for every pair, stored sparsely per P
    let nonzero: Vec<Vec<(usize, u8)>> = (0..size)
        .map(|i| {
            let p = set.point(i);
            (0..size)
                .filter_map(|a| {
                    let pa = set.point(a);
                    let v = delta0(&mut p.iter().zip(pa).map(|(&x, &y)| f.sub(x, y)));
                    (v != 0).then_some((a, v))
                })
                .collect()
        })
        .collect();
    let lookup = |i: usize, a: usize| nonzero[i].iter().find(|&&(b, _)| b == a).map_or(0, |&(_, v)| v);

    let rows: Vec<Vec<[usize; 3]>> = (0..size)
        .into_par_iter()
        .map(|i| {
            let (x, y) = set.point(i).split_at(n);
            let mut bad = Vec::new();
            for j in 0..size {
                let (x1, y1) = set.point(j).split_at(n);
                for k in 0..size {
                    let (x2, y2) = set.point(k).split_at(n);
                    let first = delta0(&mut (0..n).map(|t| f.add(f.sub(f.sub(x[t], y[t]), x1[t]), y2[t])));
                    let second = delta0(&mut (0..n).map(|t| f.sub(f.sub(f.add(x[t], y[t]), y1[t]), x2[t])));
                    let lhs = f.mul(first, second);
                    let rhs = nonzero[i]
                        .iter()
                        .fold(0u8, |acc, &(a, v)| f.add(acc, f.mul(v, f.mul(lookup(j, a), lookup(k, a)))));
                    if lhs != rhs {
                        bad.push([i, j, k]);
                    }
                }
            }
            bad
        })
        .collect();
    Ok(IdentityCheck { triples_checked: (size as u64).pow(3), mismatches: rows.into_iter().flatten().collect() })
}

/// True iff the diagonal identity holds on `A^3`. The identity needs `A` to
/// be free of configurations in [`Mode::NotAllEqual`]; otherwise the error
/// names the first violating triple.
pub fn verify_identity(set: &FFConfigSet) -> Result<bool> {
    check_cap(set, IDENTITY_CAP)?;
    if let Some(t) = first_configuration(set, Mode::NotAllEqual)? {
        return Err(Error::ConfigurationFound(set.describe(t)));
    }
    Ok(evaluate_identity(set)?.holds())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CardinalityReport {
    pub q: u32,
    pub n: usize,
    pub size: usize,
    pub c_q: f64,
    pub bound: f64,
    pub slack: f64,
    pub holds: bool,
}

/// `|A| <= 3 c_q^(2n)` for a strictly configuration-free `A`.
pub fn check_cardinality_bound(set: &FFConfigSet) -> Result<CardinalityReport> {
    if let Some(t) = first_configuration(set, Mode::Strict)? {
        return Err(Error::ConfigurationFound(set.describe(t)));
    }
    let (_, c) = minimize_phi(set.q())?;
    let bound = 3.0 * c.powi(2 * set.n() as i32);
    let size = set.len();
    Ok(CardinalityReport {
        q: set.q(),
        n: set.n(),
        size,
        c_q: c,
        bound,
        slack: bound - size as f64,
        holds: size as f64 <= bound,
    })
}
