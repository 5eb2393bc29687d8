//! Finite cyclic groups `Z/N`, functions on `Z/N` and `(Z/N)^2`, and their
//! discrete Fourier transforms.
//!
//! All averages are taken against the uniform probability measure, so the
//! transform carries the factor `1/N` per axis:
//!
//! ```text
//! f^(xi, zeta) = N^-2 * sum_{x,y} f(x,y) * e(-(xi*x + zeta*y)/N),   e(t) = exp(2 pi i t)
//! ```
//!
//! and the inverse is the plain character sum. Under this convention
//! Plancherel reads `sum |f^|^2 = mean |f|^2` and convolution
//! `(u*v)(x) = N^-1 sum_s u(x-s) v(s)` turns into a pointwise product.
//!
//! Transforms of length up to [`DIRECT_DFT_MAX`] are evaluated by direct
//! summation; longer ones go through `rustfft`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Largest length evaluated by direct summation under [`TransformPath::Auto`].
pub const DIRECT_DFT_MAX: usize = 128;

/// Distance from `k/N` to the nearest integer.
pub fn norm_rz(k: i64, n: usize) -> f64 {
    assert!(n >= 1, "modulus must be positive");
    let r = k.rem_euclid(n as i64) as usize;
    r.min(n - r) as f64 / n as f64
}

/// The group `Z/N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CyclicGroup {
    modulus: usize,
}

impl CyclicGroup {
    pub fn new(modulus: usize) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::EmptyGroup);
        }
        Ok(Self { modulus })
    }

    #[inline]
    pub fn modulus(&self) -> usize {
        self.modulus
    }

    /// Doubling is a bijection on `Z/N` exactly when `N` is odd.
    pub fn is_two_divisible(&self) -> bool {
        self.modulus % 2 == 1
    }

    pub fn require_two_divisible(&self) -> Result<()> {
        if self.is_two_divisible() {
            Ok(())
        } else {
            Err(Error::NotTwoDivisible { modulus: self.modulus })
        }
    }

    /// Canonical representative of `k` in `0..N`.
    #[inline]
    pub fn reduce(&self, k: i64) -> usize {
        k.rem_euclid(self.modulus as i64) as usize
    }

    /// Representative of `k` in `-(N-1)/2 ..= N/2`.
    #[inline]
    pub fn signed(&self, k: usize) -> i64 {
        let n = self.modulus as i64;
        let k = (k % self.modulus) as i64;
        if 2 * k > n {
            k - n
        } else {
            k
        }
    }

    pub fn ensure_same(&self, other: &CyclicGroup) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::IncompatibleDomains { left: self.modulus, right: other.modulus })
        }
    }
}

/// Free function form of [`CyclicGroup::is_two_divisible`].
pub fn is_two_divisible(g: &CyclicGroup) -> bool {
    g.is_two_divisible()
}

/// Which evaluation strategy a transform should use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformPath {
    /// Direct summation up to [`DIRECT_DFT_MAX`], fast transform above.
    Auto,
    Direct,
    Fast,
}

enum Plan {
    Direct { twiddles: Vec<Complex64> },
    Fast { forward: Arc<dyn Fft<f64>>, inverse: Arc<dyn Fft<f64>> },
}

/// A reusable one-dimensional transform of fixed length.
struct Dft1 {
    n: usize,
    plan: Plan,
}

impl Dft1 {
    fn new(n: usize, path: TransformPath) -> Self {
        let direct = match path {
            TransformPath::Auto => n <= DIRECT_DFT_MAX,
            TransformPath::Direct => true,
            TransformPath::Fast => false,
        };
        let plan = if direct {
            let twiddles = (0..n).map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64)).collect();
            Plan::Direct { twiddles }
        } else {
            let mut planner = FftPlanner::new();
            Plan::Fast { forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) }
        };
        Self { n, plan }
    }

    /// Normalized forward transform, in place.
    fn forward(&self, buf: &mut [Complex64]) {
        let scale = 1.0 / self.n as f64;
        match &self.plan {
            Plan::Direct { twiddles } => {
                let out = direct_sum(buf, twiddles, false);
                for (b, o) in buf.iter_mut().zip(out) {
                    *b = o * scale;
                }
            }
            Plan::Fast { forward, .. } => {
                forward.process(buf);
                for b in buf.iter_mut() {
                    *b *= scale;
                }
            }
        }
    }

    /// Unnormalized inverse transform (character sum), in place.
    fn inverse(&self, buf: &mut [Complex64]) {
        match &self.plan {
            Plan::Direct { twiddles } => {
                let out = direct_sum(buf, twiddles, true);
                buf.copy_from_slice(&out);
            }
            Plan::Fast { inverse, .. } => inverse.process(buf),
        }
    }
}

fn direct_sum(input: &[Complex64], twiddles: &[Complex64], conjugate: bool) -> Vec<Complex64> {
    let n = input.len();
    (0..n)
        .map(|xi| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, v) in input.iter().enumerate() {
                let w = twiddles[(xi * x) % n];
                acc += v * if conjugate { w.conj() } else { w };
            }
            acc
        })
        .collect()
}

/// A real-valued function on `Z/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction1D {
    group: CyclicGroup,
    values: Vec<f64>,
}

impl GroupFunction1D {
    pub fn new(group: CyclicGroup, values: Vec<f64>) -> Result<Self> {
        if values.len() != group.modulus() {
            return Err(Error::LengthMismatch { expected: group.modulus(), got: values.len() });
        }
        Ok(Self { group, values })
    }

    pub fn from_fn(group: CyclicGroup, f: impl FnMut(usize) -> f64) -> Self {
        let values = (0..group.modulus()).map(f).collect();
        Self { group, values }
    }

    pub fn constant(group: CyclicGroup, c: f64) -> Self {
        Self::from_fn(group, |_| c)
    }

    /// `N` times the indicator of `{0}`, the identity for convolution.
    pub fn delta(group: CyclicGroup) -> Self {
        let n = group.modulus() as f64;
        Self::from_fn(group, |x| if x == 0 { n } else { 0.0 })
    }

    #[inline]
    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn at(&self, k: i64) -> f64 {
        self.values[self.group.reduce(k)]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() / self.values.len() as f64
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() / self.values.len() as f64).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn spectrum(&self) -> Spectrum1D {
        dft1_with(self, TransformPath::Auto)
    }
}

/// A real-valued function on `(Z/N)^2`, stored row-major (`x` is the row).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction2D {
    group: CyclicGroup,
    values: Vec<f64>,
}

impl GroupFunction2D {
    pub fn new(group: CyclicGroup, values: Vec<f64>) -> Result<Self> {
        let n = group.modulus();
        if values.len() != n * n {
            return Err(Error::LengthMismatch { expected: n * n, got: values.len() });
        }
        Ok(Self { group, values })
    }

    pub fn from_fn(group: CyclicGroup, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let n = group.modulus();
        let mut values = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                values.push(f(x, y));
            }
        }
        Self { group, values }
    }

    pub fn constant(group: CyclicGroup, c: f64) -> Self {
        Self { group, values: vec![c; group.modulus() * group.modulus()] }
    }

    #[inline]
    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    #[inline]
    pub fn modulus(&self) -> usize {
        self.group.modulus()
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[x * self.group.modulus() + y]
    }

    /// Value at `(x, y)` with both indices taken mod `N`.
    #[inline]
    pub fn at(&self, x: i64, y: i64) -> f64 {
        self.get(self.group.reduce(x), self.group.reduce(y))
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() / self.values.len() as f64
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() / self.values.len() as f64).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Fails unless every value lies in `[lo, hi]`.
    pub fn require_range(&self, lo: f64, hi: f64, label: &'static str) -> Result<()> {
        match self.values.iter().position(|v| !(lo..=hi).contains(v)) {
            None => Ok(()),
            Some(index) => Err(Error::ValueOutOfRange { range: label, value: self.values[index], index }),
        }
    }

    pub fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.group.ensure_same(&other.group)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| op(*a, *b)).collect();
        Ok(Self { group: self.group, values })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    /// `(f * (p (x) p))(x, y) = sum_{u,v} f(x-u, y-v) p(u) p(v)` for a
    /// probability vector `p`.
    ///
    /// Applied separably. Zero weights are skipped, so a point mass reproduces
    /// `f` bit for bit.
    pub fn smooth_by_product(&self, weights: &[f64]) -> Result<Self> {
        let n = self.modulus();
        if weights.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: weights.len() });
        }
        let support: Vec<(usize, f64)> = weights.iter().copied().enumerate().filter(|&(_, w)| w != 0.0).collect();
        // along x
        let mut tmp = vec![0.0; n * n];
        for x in 0..n {
            for &(u, w) in &support {
                let src = ((x + n - u) % n) * n;
                let row = &self.values[src..src + n];
                for (t, v) in tmp[x * n..x * n + n].iter_mut().zip(row) {
                    *t += v * w;
                }
            }
        }
        // along y
        let mut out = vec![0.0; n * n];
        for x in 0..n {
            let row = &tmp[x * n..x * n + n];
            for y in 0..n {
                let mut acc = 0.0;
                for &(v, w) in &support {
                    acc += row[(y + n - v) % n] * w;
                }
                out[x * n + y] = acc;
            }
        }
        Ok(Self { group: self.group, values: out })
    }

    pub fn spectrum(&self) -> Spectrum2D {
        dft2_with(self, TransformPath::Auto)
    }
}

/// Normalized transform of a function on `Z/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum1D {
    group: CyclicGroup,
    coeffs: Vec<Complex64>,
}

impl Spectrum1D {
    #[inline]
    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn at(&self, xi: i64) -> Complex64 {
        self.coeffs[self.group.reduce(xi)]
    }

    /// Unnormalized `l^1` norm over frequencies.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn sup_norm(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn inverse(&self) -> GroupFunction1D {
        let mut buf = self.coeffs.clone();
        Dft1::new(self.group.modulus(), TransformPath::Auto).inverse(&mut buf);
        GroupFunction1D { group: self.group, values: buf.into_iter().map(|c| c.re).collect() }
    }
}

/// Normalized transform of a function on `(Z/N)^2`, indexed `(xi, zeta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum2D {
    group: CyclicGroup,
    coeffs: Vec<Complex64>,
}

impl Spectrum2D {
    #[inline]
    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn get(&self, xi: usize, zeta: usize) -> Complex64 {
        self.coeffs[xi * self.group.modulus() + zeta]
    }

    #[inline]
    pub fn at(&self, xi: i64, zeta: i64) -> Complex64 {
        self.get(self.group.reduce(xi), self.group.reduce(zeta))
    }

    pub fn sup_norm(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// `sum |f^(xi, zeta)|^2`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn inverse(&self) -> GroupFunction2D {
        idft2_with(self, TransformPath::Auto)
    }
}

pub fn dft1(u: &GroupFunction1D) -> Spectrum1D {
    dft1_with(u, TransformPath::Auto)
}

pub fn dft1_with(u: &GroupFunction1D, path: TransformPath) -> Spectrum1D {
    let n = u.group.modulus();
    let mut buf: Vec<Complex64> = u.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    Dft1::new(n, path).forward(&mut buf);
    Spectrum1D { group: u.group, coeffs: buf }
}

pub fn dft2(f: &GroupFunction2D) -> Spectrum2D {
    dft2_with(f, TransformPath::Auto)
}

/// Row-column transform; rows first, then columns.
pub fn dft2_with(f: &GroupFunction2D, path: TransformPath) -> Spectrum2D {
    let n = f.modulus();
    let plan = Dft1::new(n, path);
    let mut data: Vec<Complex64> = f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    for row in data.chunks_mut(n) {
        plan.forward(row);
    }
    transform_columns(&mut data, n, |col| plan.forward(col));
    Spectrum2D { group: f.group, coeffs: data }
}

pub fn idft2(s: &Spectrum2D) -> GroupFunction2D {
    idft2_with(s, TransformPath::Auto)
}

/// Inverse of [`dft2_with`]; the imaginary parts are dropped.
pub fn idft2_with(s: &Spectrum2D, path: TransformPath) -> GroupFunction2D {
    let n = s.group.modulus();
    let plan = Dft1::new(n, path);
    let mut data = s.coeffs.clone();
    for row in data.chunks_mut(n) {
        plan.inverse(row);
    }
    transform_columns(&mut data, n, |col| plan.inverse(col));
    GroupFunction2D { group: s.group, values: data.into_iter().map(|c| c.re).collect() }
}

fn transform_columns(data: &mut [Complex64], n: usize, op: impl Fn(&mut [Complex64])) {
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for y in 0..n {
        for x in 0..n {
            col[x] = data[x * n + y];
        }
        op(&mut col);
        for x in 0..n {
            data[x * n + y] = col[x];
        }
    }
}

/// `(u * v)(x) = N^-1 sum_s u(x - s) v(s)`.
pub fn convolve1(u: &GroupFunction1D, v: &GroupFunction1D) -> Result<GroupFunction1D> {
    u.group.ensure_same(&v.group)?;
    let n = u.group.modulus();
    let scale = 1.0 / n as f64;
    let values = (0..n)
        .map(|x| {
            let mut acc = 0.0;
            for (s, &vs) in v.values.iter().enumerate() {
                if vs != 0.0 {
                    acc += u.values[(x + n - s) % n] * vs;
                }
            }
            acc * scale
        })
        .collect();
    Ok(GroupFunction1D { group: u.group, values })
}
