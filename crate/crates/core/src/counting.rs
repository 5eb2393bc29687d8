//! The weighted counting form
//!
//! ```text
//! L_chi(f, g, h) = E_{x,y,s,t} f(x,y) g(x+s, y+t) h(x-t, y+s) chi(s) chi(t)
//! ```
//!
//! on `(Z/N)^2`, evaluated three ways (direct average, full four-fold
//! frequency sum, and the collapsed two-fold sum for `chi = 1`), together
//! with per-difference configuration counts on grid sets and numerical
//! checks of the standard upper bounds for the form.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::grid::{GridSet, WORD};
use crate::group::{GroupFunction1D, GroupFunction2D, Spectrum1D, Spectrum2D};

/// Absolute slack allowed when comparing a computed form against a bound.
pub const BOUND_TOLERANCE: f64 = 1e-9;

fn same_group3(f: &GroupFunction2D, g: &GroupFunction2D, h: &GroupFunction2D) -> Result<()> {
    f.group().ensure_same(&g.group())?;
    f.group().ensure_same(&h.group())
}

/// Direct evaluation of `L_chi(f, g, h)`, `O(N^4)`. Pairs `(s, t)` where
/// `chi` vanishes are skipped.
pub fn lambda_direct(
    f: &GroupFunction2D,
    g: &GroupFunction2D,
    h: &GroupFunction2D,
    chi: &GroupFunction1D,
) -> Result<f64> {
    same_group3(f, g, h)?;
    f.group().ensure_same(&chi.group())?;
    let n = f.modulus();
    let support: Vec<(usize, f64)> = chi.values().iter().copied().enumerate().filter(|&(_, w)| w != 0.0).collect();
    let (fv, gv, hv) = (f.values(), g.values(), h.values());
    let partial: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut acc = 0.0;
            for &(s, ws) in &support {
                for &(t, wt) in &support {
                    let gx = (x + s) % n;
                    let hx = (x + n - t) % n;
                    let mut inner = 0.0;
                    for y in 0..n {
                        let fval = fv[x * n + y];
                        if fval == 0.0 {
                            continue;
                        }
                        inner += fval * gv[gx * n + (y + t) % n] * hv[hx * n + (y + s) % n];
                    }
                    acc += inner * ws * wt;
                }
            }
            acc
        })
        .collect();
    let total: f64 = partial.iter().sum();
    Ok(total / (n as f64).powi(4))
}

/// Frequency-side evaluation, complex-valued:
/// `sum f^(-xi-xi', -zeta-zeta') g^(xi, zeta) h^(xi', zeta') chi^(-xi-zeta') chi^(-zeta+xi')`.
pub fn lambda_fourier_weighted_complex(
    f: &GroupFunction2D,
    g: &GroupFunction2D,
    h: &GroupFunction2D,
    chi: &GroupFunction1D,
) -> Result<Complex64> {
    same_group3(f, g, h)?;
    f.group().ensure_same(&chi.group())?;
    Ok(weighted_from_spectra(&f.spectrum(), &g.spectrum(), &h.spectrum(), &chi.spectrum()))
}

/// Real part of [`lambda_fourier_weighted_complex`].
pub fn lambda_fourier_weighted(
    f: &GroupFunction2D,
    g: &GroupFunction2D,
    h: &GroupFunction2D,
    chi: &GroupFunction1D,
) -> Result<f64> {
    lambda_fourier_weighted_complex(f, g, h, chi).map(|z| z.re)
}

/// The weighted frequency sum from precomputed spectra.
pub fn weighted_from_spectra(fs: &Spectrum2D, gs: &Spectrum2D, hs: &Spectrum2D, cs: &Spectrum1D) -> Complex64 {
    let n = fs.group().modulus();
    let (fc, gc, hc, cc) = (fs.coeffs(), gs.coeffs(), hs.coeffs(), cs.coeffs());
    let neg = |k: usize| (n - k % n) % n;
    let partial: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|xi| {
            let mut acc = Complex64::new(0.0, 0.0);
            for zeta in 0..n {
                let gv = gc[xi * n + zeta];
                if gv == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for xi2 in 0..n {
                    let c2 = cc[(xi2 + n - zeta) % n];
                    let fx = neg(xi + xi2);
                    let mut inner = Complex64::new(0.0, 0.0);
                    for zeta2 in 0..n {
                        let c1 = cc[neg(xi + zeta2)];
                        let fy = neg(zeta + zeta2);
                        inner += fc[fx * n + fy] * hc[xi2 * n + zeta2] * c1;
                    }
                    acc += inner * c2 * gv;
                }
            }
            acc
        })
        .collect();
    partial.iter().sum()
}

/// The `chi = 1` collapse: `sum f^(-xi-zeta, xi-zeta) g^(xi, zeta) h^(zeta, -xi)`.
pub fn lambda_fourier_unweighted_complex(
    f: &GroupFunction2D,
    g: &GroupFunction2D,
    h: &GroupFunction2D,
) -> Result<Complex64> {
    same_group3(f, g, h)?;
    Ok(unweighted_from_spectra(&f.spectrum(), &g.spectrum(), &h.spectrum()))
}

pub fn lambda_fourier_unweighted(f: &GroupFunction2D, g: &GroupFunction2D, h: &GroupFunction2D) -> Result<f64> {
    lambda_fourier_unweighted_complex(f, g, h).map(|z| z.re)
}

pub fn unweighted_from_spectra(fs: &Spectrum2D, gs: &Spectrum2D, hs: &Spectrum2D) -> Complex64 {
    let n = fs.group().modulus() as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for xi in 0..n {
        for zeta in 0..n {
            acc += fs.at(-xi - zeta, xi - zeta) * gs.at(xi, zeta) * hs.at(zeta, -xi);
        }
    }
    acc
}

/// Configuration counts `|A ∩ (A - (m,n)) ∩ (A - (-n,m))|` for every
/// difference `(m, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceCounts {
    side: usize,
    wraparound: bool,
    counts: Vec<u64>,
}

impl DifferenceCounts {
    #[inline]
    pub fn side(&self) -> usize {
        self.side
    }

    #[inline]
    pub fn wraparound(&self) -> bool {
        self.wraparound
    }

    /// Side length of the square of stored differences.
    fn span(&self) -> usize {
        if self.wraparound {
            self.side
        } else {
            2 * self.side - 1
        }
    }

    fn index(&self, m: i64, n: i64) -> Option<usize> {
        let s = self.side as i64;
        if self.wraparound {
            Some(m.rem_euclid(s) as usize * self.side + n.rem_euclid(s) as usize)
        } else if m.abs() < s && n.abs() < s {
            Some((m + s - 1) as usize * self.span() + (n + s - 1) as usize)
        } else {
            None
        }
    }

    /// Count at `(m, n)`. With wraparound the difference is read mod `N`;
    /// without it, differences outside `-(N-1)..=N-1` have count 0.
    pub fn get(&self, m: i64, n: i64) -> u64 {
        self.index(m, n).map_or(0, |i| self.counts[i])
    }

    /// All stored differences with their counts: `0..N` per axis with
    /// wraparound, `-(N-1)..=N-1` otherwise. Lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), u64)> + '_ {
        let span = self.span();
        let offset = if self.wraparound { 0 } else { self.side as i64 - 1 };
        self.counts.iter().enumerate().map(move |(i, &c)| (((i / span) as i64 - offset, (i % span) as i64 - offset), c))
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn max_count(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }
}

/// Per-difference counts via shift-and-intersect on packed rows:
/// `count(m, n) = sum_a popcount(row[a] & (row[a+m] >> n) & (row[a-n] >> m))`.
pub fn difference_counts(set: &GridSet, wraparound: bool) -> DifferenceCounts {
    let n = set.side();
    let wpr = set.words_per_row();
    // shifted[k][a]: row a with bit b holding original bit b + k
    let shifts: Vec<i64> = if wraparound { (0..n as i64).collect() } else { (-(n as i64 - 1)..n as i64).collect() };
    let shifted: Vec<Vec<u64>> = shifts
        .par_iter()
        .map(|&k| {
            let mut out = vec![0u64; n * wpr];
            for a in 0..n {
                shift_row(set.row(a), k, n, wraparound, &mut out[a * wpr..(a + 1) * wpr]);
            }
            out
        })
        .collect();
    let shift_index = |k: i64| -> usize {
        if wraparound {
            k.rem_euclid(n as i64) as usize
        } else {
            (k + n as i64 - 1) as usize
        }
    };

    let per_m: Vec<Vec<u64>> = shifts
        .par_iter()
        .map(|&m| {
            let sm = &shifted[shift_index(m)];
            shifts
                .iter()
                .map(|&dn| {
                    let sn = &shifted[shift_index(dn)];
                    let mut total = 0u64;
                    for a in 0..n as i64 {
                        let (b1, b2) = (a + m, a - dn);
                        let (r1, r2) = if wraparound {
                            (b1.rem_euclid(n as i64), b2.rem_euclid(n as i64))
                        } else if (0..n as i64).contains(&b1) && (0..n as i64).contains(&b2) {
                            (b1, b2)
                        } else {
                            continue;
                        };
                        let base = set.row(a as usize);
                        let w1 = &sn[r1 as usize * wpr..(r1 as usize + 1) * wpr];
                        let w2 = &sm[r2 as usize * wpr..(r2 as usize + 1) * wpr];
                        for i in 0..wpr {
                            total += (base[i] & w1[i] & w2[i]).count_ones() as u64;
                        }
                    }
                    total
                })
                .collect()
        })
        .collect();
    DifferenceCounts { side: n, wraparound, counts: per_m.concat() }
}

/// Scalar `O(N^4)` counting path used as an oracle for [`difference_counts`].
pub fn difference_counts_scalar(set: &GridSet, wraparound: bool) -> DifferenceCounts {
    let n = set.side() as i64;
    let range: Vec<i64> = if wraparound { (0..n).collect() } else { (-(n - 1)..n).collect() };
    let member = |r: i64, c: i64| {
        if wraparound {
            set.contains(r.rem_euclid(n) as usize, c.rem_euclid(n) as usize)
        } else {
            set.contains_signed(r, c)
        }
    };
    let mut counts = Vec::with_capacity(range.len() * range.len());
    for &m in &range {
        for &dn in &range {
            let mut c = 0u64;
            for a in 0..n {
                for b in 0..n {
                    if member(a, b) && member(a + m, b + dn) && member(a - dn, b + m) {
                        c += 1;
                    }
                }
            }
            counts.push(c);
        }
    }
    DifferenceCounts { side: set.side(), wraparound, counts }
}

fn shift_row(src: &[u64], k: i64, n: usize, wrap: bool, dst: &mut [u64]) {
    if wrap {
        let k = k.rem_euclid(n as i64) as usize;
        let mut hi = vec![0u64; dst.len()];
        shr(src, k, dst);
        if k != 0 {
            shl(src, n - k, &mut hi);
            for (d, h) in dst.iter_mut().zip(hi) {
                *d |= h;
            }
        }
    } else if k >= 0 {
        shr(src, k as usize, dst);
    } else {
        shl(src, (-k) as usize, dst);
    }
    mask_tail(dst, n);
}

/// `dst` bit `b` = `src` bit `b + k`.
fn shr(src: &[u64], k: usize, dst: &mut [u64]) {
    let (words, bits) = (k / WORD, k % WORD);
    for (i, d) in dst.iter_mut().enumerate() {
        let lo = src.get(i + words).copied().unwrap_or(0);
        let hi = src.get(i + words + 1).copied().unwrap_or(0);
        *d = if bits == 0 { lo } else { (lo >> bits) | (hi << (WORD - bits)) };
    }
}

/// `dst` bit `b` = `src` bit `b - k` (zero below `k`).
fn shl(src: &[u64], k: usize, dst: &mut [u64]) {
    let (words, bits) = (k / WORD, k % WORD);
    for i in 0..dst.len() {
        let lo = if i >= words { src[i - words] } else { 0 };
        let lower = if i > words { src[i - words - 1] } else { 0 };
        dst[i] = if bits == 0 { lo } else { (lo << bits) | (lower >> (WORD - bits)) };
    }
}

fn mask_tail(row: &mut [u64], n: usize) {
    let rem = n % WORD;
    if rem != 0 {
        if let Some(last) = row.last_mut() {
            *last &= (1u64 << rem) - 1;
        }
    }
}

/// `|L_1(f, g, h)|` against `min(|f^|_inf, |g^|_inf, |h^|_inf)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformityReport {
    pub lambda: f64,
    pub spectral_sup: [f64; 3],
    pub bound: f64,
    pub slack: f64,
    pub holds: bool,
}

/// Checks the uniformity estimate for `[-1, 1]`-valued functions on an odd
/// modulus.
pub fn check_uniformity_bound(
    f: &GroupFunction2D,
    g: &GroupFunction2D,
    h: &GroupFunction2D,
) -> Result<UniformityReport> {
    same_group3(f, g, h)?;
    f.group().require_two_divisible()?;
    for func in [f, g, h] {
        func.require_range(-1.0, 1.0, "[-1, 1]")?;
    }
    let (fs, gs, hs) = (f.spectrum(), g.spectrum(), h.spectrum());
    let lambda = unweighted_from_spectra(&fs, &gs, &hs).re;
    let spectral_sup = [fs.sup_norm(), gs.sup_norm(), hs.sup_norm()];
    let bound = spectral_sup.iter().copied().fold(f64::INFINITY, f64::min);
    let slack = bound - lambda.abs();
    Ok(UniformityReport { lambda, spectral_sup, bound, slack, holds: slack >= -BOUND_TOLERANCE })
}

/// Which function occupies the distinguished slot of an inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Slot {
    F,
    G,
    H,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlotCheck {
    pub slot: Slot,
    pub bound: f64,
    pub slack: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub lambda: f64,
    pub slots: Vec<SlotCheck>,
    pub holds: bool,
}

impl InequalityReport {
    fn from_bounds(lambda: f64, bounds: Vec<(Slot, f64)>) -> Self {
        let slots: Vec<SlotCheck> = bounds
            .into_iter()
            .map(|(slot, bound)| {
                let slack = bound - lambda.abs();
                SlotCheck { slot, bound, slack, holds: slack >= -BOUND_TOLERANCE }
            })
            .collect();
        let holds = slots.iter().all(|s| s.holds);
        Self { lambda, slots, holds }
    }
}

/// `|L_chi(f,g,h)| <= |f^|_inf |g|_2 |h|_2 |chi^|_1^2`, and the versions with
/// `g` or `h` in the spectral slot when `N` is odd.
pub fn check_lest2(
    f: &GroupFunction2D,
    g: &GroupFunction2D,
    h: &GroupFunction2D,
    chi: &GroupFunction1D,
) -> Result<InequalityReport> {
    let lambda = lambda_direct(f, g, h, chi)?;
    let chi_l1 = chi.spectrum().l1_norm();
    let weight = chi_l1 * chi_l1;
    let (fs, gs, hs) = (f.spectrum().sup_norm(), g.spectrum().sup_norm(), h.spectrum().sup_norm());
    let (f2, g2, h2) = (f.l2_norm(), g.l2_norm(), h.l2_norm());
    let mut bounds = vec![(Slot::F, fs * g2 * h2 * weight)];
    if f.group().is_two_divisible() {
        bounds.push((Slot::G, gs * f2 * h2 * weight));
        bounds.push((Slot::H, hs * f2 * g2 * weight));
    }
    Ok(InequalityReport::from_bounds(lambda, bounds))
}

/// `|L_chi(f,g,h)| <= |f|_1 |g|_inf |h|_inf |chi|_1^2`, and the versions with
/// `g` or `h` in the `L^1` slot when `N` is odd.
pub fn check_lest3(
    f: &GroupFunction2D,
    g: &GroupFunction2D,
    h: &GroupFunction2D,
    chi: &GroupFunction1D,
) -> Result<InequalityReport> {
    let lambda = lambda_direct(f, g, h, chi)?;
    let weight = chi.l1_norm().powi(2);
    let (f1, g1, h1) = (f.l1_norm(), g.l1_norm(), h.l1_norm());
    let (fi, gi, hi) = (f.sup_norm(), g.sup_norm(), h.sup_norm());
    let mut bounds = vec![(Slot::F, f1 * gi * hi * weight)];
    if f.group().is_two_divisible() {
        bounds.push((Slot::G, g1 * fi * hi * weight));
        bounds.push((Slot::H, h1 * fi * gi * weight));
    }
    Ok(InequalityReport::from_bounds(lambda, bounds))
}

/// `L_1(1_A, 1_A, 1_A)` scaled by `N^4`, i.e. the number of configurations
/// counted over all `(m, n)` with wraparound, from the unweighted frequency
/// sum. Fails if the modulus is even.
pub fn scaled_unweighted_lambda(set: &GridSet) -> Result<f64> {
    let f = set.indicator();
    f.group().require_two_divisible()?;
    let n4 = (set.side() as f64).powi(4);
    Ok(lambda_fourier_unweighted(&f, &f, &f)? * n4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::group::CyclicGroup;

    fn grp(n: usize) -> CyclicGroup {
        CyclicGroup::new(n).unwrap()
    }

    struct Lcg(u64);
    impl Lcg {
        fn next(&mut self) -> f64 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (self.0 >> 11) as f64 / (1u64 << 53) as f64
        }
        fn func2(&mut self, n: usize) -> GroupFunction2D {
            let vals = (0..n * n).map(|_| 2.0 * self.next() - 1.0).collect();
            GroupFunction2D::new(grp(n), vals).unwrap()
        }
        fn func1(&mut self, n: usize) -> GroupFunction1D {
            let vals = (0..n).map(|_| 2.0 * self.next() - 1.0).collect();
            GroupFunction1D::new(grp(n), vals).unwrap()
        }
    }

    #[test]
    fn constants_and_zero() {
        let g = grp(5);
        let c = GroupFunction2D::constant(g, 0.7);
        let chi = GroupFunction1D::from_fn(g, |x| [3.0, 0.5, 0.0, 1.0, 0.5][x]);
        assert!((chi.mean() - 1.0).abs() < 1e-15);
        assert!((lambda_direct(&c, &c, &c, &chi).unwrap() - 0.343).abs() < 1e-12);
        assert!((lambda_fourier_weighted(&c, &c, &c, &chi).unwrap() - 0.343).abs() < 1e-12);
        let z = GroupFunction2D::constant(g, 0.0);
        assert_eq!(lambda_direct(&z, &c, &c, &chi).unwrap(), 0.0);
        let one = GroupFunction2D::constant(g, 1.0);
        assert!((lambda_fourier_unweighted(&one, &one, &one).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn three_paths_agree() {
        let mut rng = Lcg(7);
        for n in [3, 5, 7, 9] {
            let (f, g, h, chi) = (rng.func2(n), rng.func2(n), rng.func2(n), rng.func1(n));
            let d = lambda_direct(&f, &g, &h, &chi).unwrap();
            let w = lambda_fourier_weighted_complex(&f, &g, &h, &chi).unwrap();
            assert!((d - w.re).abs() < 1e-9 && w.im.abs() < 1e-9, "n={n}");
            let one = GroupFunction1D::constant(grp(n), 1.0);
            let d1 = lambda_direct(&f, &g, &h, &one).unwrap();
            let w1 = lambda_fourier_weighted(&f, &g, &h, &one).unwrap();
            let u1 = lambda_fourier_unweighted_complex(&f, &g, &h).unwrap();
            assert!((d1 - w1).abs() < 1e-9 && (d1 - u1.re).abs() < 1e-9 && u1.im.abs() < 1e-9);
        }
    }

    #[test]
    fn mismatched_moduli_rejected() {
        let f = GroupFunction2D::constant(grp(3), 1.0);
        let g = GroupFunction2D::constant(grp(5), 1.0);
        let chi = GroupFunction1D::constant(grp(3), 1.0);
        assert!(matches!(lambda_direct(&f, &g, &f, &chi), Err(Error::IncompatibleDomains { .. })));
        assert!(lambda_fourier_unweighted(&f, &f, &g).is_err());
        let chi5 = GroupFunction1D::constant(grp(5), 1.0);
        assert!(lambda_fourier_weighted(&f, &f, &f, &chi5).is_err());
    }

    #[test]
    fn full_grid_counts() {
        let a = GridSet::full(6).unwrap();
        let wrap = difference_counts(&a, true);
        assert!(wrap.iter().all(|(_, c)| c == 36));
        let flat = difference_counts(&a, false);
        assert_eq!(flat.get(1, 0), 25);
        assert_eq!(flat.get(0, 0), 36);
        assert_eq!(flat.get(6, 0), 0);
    }

    #[test]
    fn hand_checked_triangle() {
        let a = GridSet::from_points(2, [(1, 1), (2, 1), (1, 2)]).unwrap();
        let c = difference_counts(&a, false);
        assert_eq!(c.get(1, 0), 1);
        assert_eq!(c.get(0, 0), 3);
        assert_eq!(c, difference_counts_scalar(&a, false));
    }

    #[test]
    fn packed_matches_scalar_across_word_boundaries() {
        let mut rng = Lcg(99);
        for n in [1, 2, 7, 63, 64, 65, 70] {
            let cells: Vec<_> = (0..n * n).filter(|_| rng.next() < 0.4).map(|i| (i / n, i % n)).collect();
            let a = GridSet::from_cells(n, cells).unwrap();
            if n <= 20 {
                for wrap in [false, true] {
                    assert_eq!(difference_counts(&a, wrap), difference_counts_scalar(&a, wrap), "n={n} wrap={wrap}");
                }
            } else {
                // spot check a handful of differences against a direct count
                for wrap in [false, true] {
                    let packed = difference_counts(&a, wrap);
                    assert_eq!(packed.get(0, 0), a.cardinality() as u64);
                    for (m, dn) in [(1, 0), (0, 1), (-3, 5), (n as i64 - 1, 1), (2, -(n as i64) + 1)] {
                        let mut c = 0;
                        for r in 0..n as i64 {
                            for s in 0..n as i64 {
                                let mem = |x: i64, y: i64| {
                                    if wrap {
                                        a.contains(x.rem_euclid(n as i64) as usize, y.rem_euclid(n as i64) as usize)
                                    } else {
                                        a.contains_signed(x, y)
                                    }
                                };
                                if mem(r, s) && mem(r + m, s + dn) && mem(r - dn, s + m) {
                                    c += 1;
                                }
                            }
                        }
                        assert_eq!(packed.get(m, dn), c, "n={n} wrap={wrap} ({m},{dn})");
                    }
                }
            }
        }
    }

    #[test]
    fn total_count_matches_unweighted_form() {
        let mut rng = Lcg(5);
        for n in [3, 5, 9, 11] {
            let cells: Vec<_> = (0..n * n).filter(|_| rng.next() < 0.5).map(|i| (i / n, i % n)).collect();
            let a = GridSet::from_cells(n, cells).unwrap();
            let total = difference_counts(&a, true).total() as f64;
            let scaled = scaled_unweighted_lambda(&a).unwrap();
            assert!((total - scaled).abs() < 1e-6, "n={n}: {total} vs {scaled}");
        }
        assert!(scaled_unweighted_lambda(&GridSet::full(4).unwrap()).is_err());
    }

    #[test]
    fn uniformity_bound_cases() {
        let g = grp(5);
        let one = GroupFunction2D::constant(g, 1.0);
        let r = check_uniformity_bound(&one, &one, &one).unwrap();
        assert!(r.holds && (r.lambda - 1.0).abs() < 1e-12 && (r.bound - 1.0).abs() < 1e-12);
        let z = GroupFunction2D::constant(g, 0.0);
        let r = check_uniformity_bound(&z, &one, &one).unwrap();
        assert!(r.holds && r.lambda == 0.0 && r.bound == 0.0);
        let even = GroupFunction2D::constant(grp(4), 1.0);
        assert!(matches!(check_uniformity_bound(&even, &even, &even), Err(Error::NotTwoDivisible { .. })));
        let big = GroupFunction2D::constant(g, 1.5);
        assert!(matches!(check_uniformity_bound(&big, &one, &one), Err(Error::ValueOutOfRange { .. })));
    }

    #[test]
    fn lest_trivial_cases() {
        let g = grp(5);
        let one = GroupFunction2D::constant(g, 1.0);
        let chi1 = GroupFunction1D::constant(g, 1.0);
        for r in [check_lest2(&one, &one, &one, &chi1).unwrap(), check_lest3(&one, &one, &one, &chi1).unwrap()] {
            assert!(r.holds);
            assert_eq!(r.slots.len(), 3);
            assert!(r.slots.iter().all(|s| (s.bound - 1.0).abs() < 1e-12));
        }
        let z = GroupFunction2D::constant(g, 0.0);
        let zc = GroupFunction1D::constant(g, 0.0);
        let r = check_lest2(&z, &z, &z, &zc).unwrap();
        assert!(r.holds && r.lambda == 0.0);
        let even = GroupFunction2D::constant(grp(4), 1.0);
        let r = check_lest3(&even, &even, &even, &GroupFunction1D::constant(grp(4), 1.0)).unwrap();
        assert_eq!(r.slots.len(), 1);
    }
}
