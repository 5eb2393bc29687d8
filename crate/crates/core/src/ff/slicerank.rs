//! The exponential bound `|A| <= 3 c_q^(2n)`.
//!
//! `D` counts monomials `x^alpha y^beta` over `F_q^n` of total degree at most
//! `2(q-1)n/3`; since exponent sums are integers the cutoff is the floor.
//! The weighted-sum estimate gives `D <= phi_q(t)^(2n)` for every `t` in
//! `(0, 1]`, and `c_q` is the minimum of `phi_q`.

use num_bigint::BigUint;
use num_traits::{FromPrimitive, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Cells allowed in the `count_d` table (`2n * (cutoff + 1)`).
pub const D_TABLE_CAP: u64 = 4_000_000;
/// Grid of `t = k / GRID_POINTS` used by [`verify_d_bound`].
pub const GRID_POINTS: u32 = 100;
const LOG_T_MIN: f64 = -13.815510557964274; // ln 1e-6
const TERNARY_ROUNDS: usize = 200;

pub fn is_prime_power(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).expect("q >= 2 has a divisor");
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
    }
    r == 1
}

fn check_q(q: u32) -> Result<()> {
    if q >= 2 {
        Ok(())
    } else {
        Err(Error::OutOfRange { what: "field order q must be at least 2", value: q as f64 })
    }
}

/// `(1 + t + ... + t^(q-1)) t^(-(q-1)/3)`.
pub fn phi(q: u32, t: f64) -> Result<f64> {
    check_q(q)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::OutOfRange { what: "phi needs t > 0", value: t });
    }
    let mut sum = 0.0;
    let mut power = 1.0;
    for _ in 0..q {
        sum += power;
        power *= t;
    }
    Ok(sum * t.powf(-((q - 1) as f64) / 3.0))
}

/// `(t*, c_q)` minimising `phi_q` over `(0, 1]`. `phi_q(e^u)` is strictly
/// convex in `u`, so a ternary search on `u` in `[ln 1e-6, 0]` finds it.
pub fn minimize_phi(q: u32) -> Result<(f64, f64)> {
    check_q(q)?;
    let g = |u: f64| phi(q, u.exp()).expect("t > 0");
    let (mut lo, mut hi) = (LOG_T_MIN, 0.0f64);
    for _ in 0..TERNARY_ROUNDS {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if g(m1) < g(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let t = ((lo + hi) / 2.0).exp();
    let c = phi(q, t)?;
    debug_assert!(c < q as f64);
    Ok((t, c))
}

/// `floor(2 (q - 1) n / 3)`.
pub fn d_sum_bound(q: u32, n: usize) -> u64 {
    2 * (q as u64 - 1) * n as u64 / 3
}

/// Number of tuples in `{0, ..., q-1}^(2n)` with coordinate sum at most
/// [`d_sum_bound`], by dynamic programming over the `2n` digits.
pub fn count_d(q: u32, n: usize) -> Result<BigUint> {
    check_q(q)?;
    let cutoff = d_sum_bound(q, n);
    let cells = (2 * n as u64).saturating_mul(cutoff + 1);
    if cells > D_TABLE_CAP {
        return Err(Error::ResourceCap(format!("count_D table of {cells} cells exceeds {D_TABLE_CAP}")));
    }
    let width = cutoff as usize + 1;
    let mut ways = vec![BigUint::zero(); width];
    ways[0] = BigUint::from(1u32);
    for _ in 0..2 * n {
        // next[s] = sum of ways[s - k] for k < q, via a sliding window
        let mut next = vec![BigUint::zero(); width];
        let mut window = BigUint::zero();
        for s in 0..width {
            window += &ways[s];
            if s >= q as usize {
                window -= &ways[s - q as usize];
            }
            next[s] = window.clone();
        }
        ways = next;
    }
    Ok(ways.into_iter().sum())
}

fn ln_big(d: &BigUint) -> f64 {
    let bits = d.bits();
    if bits <= 1000 {
        return d.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (d >> shift).to_f64().expect("64 bits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `d <= e^ln_bound`, rounding the real side down so that floating-point
/// error can only make the answer `false`.
fn le_exp(d: &BigUint, ln_bound: f64) -> bool {
    const MARGIN: f64 = 1e-12;
    if ln_bound < 700.0 {
        let safe = (ln_bound.exp() * (1.0 - MARGIN)).floor();
        return safe >= 0.0 && BigUint::from_f64(safe).is_some_and(|b| *d <= b);
    }
    ln_big(d) <= ln_bound - MARGIN * ln_bound.abs()
}

fn serialize_decimal<S: Serializer>(d: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&d.to_str_radix(10))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DBoundReport {
    pub q: u32,
    pub n: usize,
    #[serde(rename = "D", serialize_with = "serialize_decimal")]
    pub d: BigUint,
    pub t_star: f64,
    pub c_q: f64,
    /// `2n ln c_q`.
    pub ln_bound: f64,
    pub holds_at_t_star: bool,
    /// `D <= phi_q(k / 100)^(2n)` for `k = 1..=100`.
    pub holds_on_grid: bool,
}

impl DBoundReport {
    pub fn holds(&self) -> bool {
        self.holds_at_t_star
    }
}

pub fn verify_d_bound(q: u32, n: usize) -> Result<DBoundReport> {
    let d = count_d(q, n)?;
    let (t_star, c_q) = minimize_phi(q)?;
    let two_n = 2.0 * n as f64;
    let ln_bound = two_n * c_q.ln();
    let holds_on_grid = (1..=GRID_POINTS)
        .map(|k| phi(q, k as f64 / GRID_POINTS as f64).map(|v| le_exp(&d, two_n * v.ln())))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|ok| ok);
    Ok(DBoundReport { q, n, holds_at_t_star: le_exp(&d, ln_bound), holds_on_grid, d, t_star, c_q, ln_bound })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceRankReport {
    pub q: u32,
    pub n: usize,
    pub t_star: f64,
    pub c_q: f64,
    #[serde(rename = "D", serialize_with = "serialize_decimal")]
    pub d: BigUint,
    /// `3 c_q^(2n)`; infinite once it leaves the `f64` range.
    pub bound: f64,
    pub bound_log10: f64,
    pub d_bound_ok: bool,
}

/// `D`, `c_q` and the bound `3 c_q^(2n)` for a prime power `q`.
pub fn slice_rank_report(q: u32, n: usize) -> Result<SliceRankReport> {
    if !is_prime_power(q) {
        return Err(Error::UnsupportedField(q));
    }
    if n == 0 {
        return Err(Error::OutOfRange { what: "dimension n must be at least 1", value: 0.0 });
    }
    let r = verify_d_bound(q, n)?;
    let bound_log10 = 3f64.log10() + 2.0 * n as f64 * r.c_q.log10();
    Ok(SliceRankReport {
        q,
        n,
        t_star: r.t_star,
        c_q: r.c_q,
        bound: 3.0 * r.c_q.powi(2 * n as i32),
        bound_log10,
        d_bound_ok: r.holds_at_t_star,
        d: r.d,
    })
}
