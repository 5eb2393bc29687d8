//! Bohr sets, tent functions and the weights `chi = nu * nu` on `Z/N`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{convolve1, norm_rz, CyclicGroup, GroupFunction1D};

/// A positive radius, kept together with its natural logarithm so that the
/// very small radii produced by the regularity tower stay representable.
///
/// When the linear value underflows to `0.0` the Bohr set it defines is
/// `{0}` (every nonzero `x` has `|x/N| >= 1/N`), which is exactly what the
/// membership test then reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Radius {
    value: f64,
    ln: f64,
}

impl Radius {
    /// A radius in `(0, 1]`.
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::RadiusOutOfRange(rho));
        }
        Ok(Self { value: rho, ln: rho.ln() })
    }

    pub fn from_ln(ln: f64) -> Self {
        Self { value: ln.exp(), ln }
    }

    /// Linear value; may be `0.0` after underflow.
    #[inline]
    pub fn value(&self) -> f64 {
        self.value
    }

    #[inline]
    pub fn ln(&self) -> f64 {
        self.ln
    }

    pub fn log10(&self) -> f64 {
        self.ln / std::f64::consts::LN_10
    }

    /// `factor * self` for `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self { value: self.value * factor, ln: self.ln + factor.ln() }
    }

    pub fn min(self, other: Self) -> Self {
        if other.ln < self.ln {
            other
        } else {
            self
        }
    }

    /// `|k/N| < rho`, the strict inequality of the Bohr set definition.
    #[inline]
    pub fn admits(&self, norm: f64) -> bool {
        norm == 0.0 || norm < self.value
    }

    /// `floor(rho * N)`.
    pub fn floor_times(&self, n: usize) -> usize {
        (self.value * n as f64).floor() as usize
    }
}

/// A finite set of frequencies of `Z/N`, sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FrequencySet {
    #[serde(skip)]
    group: CyclicGroup,
    freqs: Vec<usize>,
}

impl FrequencySet {
    pub fn new(group: CyclicGroup, freqs: impl IntoIterator<Item = i64>) -> Self {
        let mut v: Vec<usize> = freqs.into_iter().map(|k| group.reduce(k)).collect();
        v.sort_unstable();
        v.dedup();
        Self { group, freqs: v }
    }

    /// `{0}`, plus the distinguishing frequency `1` when `N > 1`.
    pub fn initial(group: CyclicGroup) -> Self {
        Self::new(group, [0, 1])
    }

    #[inline]
    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    #[inline]
    pub fn freqs(&self) -> &[usize] {
        &self.freqs
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn contains(&self, xi: i64) -> bool {
        self.freqs.binary_search(&self.group.reduce(xi)).is_ok()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.freqs.iter().all(|f| other.freqs.binary_search(f).is_ok())
    }

    pub fn union(&self, more: impl IntoIterator<Item = usize>) -> Self {
        Self::new(self.group, self.freqs.iter().copied().chain(more).map(|k| k as i64))
    }

    /// `max_{xi in S} |xi x / N|`; zero for the empty set.
    pub fn max_norm(&self, x: i64) -> f64 {
        let n = self.group.modulus();
        self.freqs.iter().map(|&xi| norm_rz(xi as i64 * x, n)).fold(0.0, f64::max)
    }
}

/// `B(S, rho) = {x : max_{xi in S} |xi x / N| < rho}` for `rho` in `(0, 1]`.
pub fn bohr_set(fs: &FrequencySet, rho: f64) -> Result<Vec<usize>> {
    Ok(bohr_set_radius(fs, Radius::new(rho)?))
}

/// Bohr set for an arbitrary positive radius (used for dilates like `2 rho`).
pub fn bohr_set_radius(fs: &FrequencySet, rho: Radius) -> Vec<usize> {
    (0..fs.group.modulus()).filter(|&x| rho.admits(fs.max_norm(x as i64))).collect()
}

/// Membership of `(x, y)` in the Bohr set of `(Z/N)^2` for the frequency set
/// `S x S`: `max_{xi, zeta in S} |(xi x + zeta y)/N| < rho`.
pub fn product_bohr_contains(fs: &FrequencySet, rho: Radius, x: i64, y: i64) -> bool {
    let n = fs.group.modulus();
    fs.freqs.iter().all(|&xi| fs.freqs.iter().all(|&zeta| rho.admits(norm_rz(xi as i64 * x + zeta as i64 * y, n))))
}

/// The tent `nu_{S,rho}` over `B(S, rho)` and the weight `chi = nu * nu`.
///
/// `nu` is a multiple of `x -> (1 - max_{xi in S} |xi x/N| / rho)_+` with
/// mean one. The same shape is also kept as a probability vector, which is
/// what smoothing against `nu (x) nu` consumes.
#[derive(Debug, Clone, PartialEq)]
pub struct BohrWeight {
    freqset: FrequencySet,
    radius: Radius,
    tent: GroupFunction1D,
    weight: GroupFunction1D,
    probabilities: Vec<f64>,
}

impl BohrWeight {
    #[inline]
    pub fn freqset(&self) -> &FrequencySet {
        &self.freqset
    }

    #[inline]
    pub fn radius(&self) -> Radius {
        self.radius
    }

    /// `nu`, normalized to mean one.
    #[inline]
    pub fn tent(&self) -> &GroupFunction1D {
        &self.tent
    }

    /// `chi = nu * nu`.
    #[inline]
    pub fn weight(&self) -> &GroupFunction1D {
        &self.weight
    }

    /// `nu / N`, summing to one.
    #[inline]
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Elements where `chi` is positive.
    pub fn weight_support(&self) -> Vec<usize> {
        self.weight.values().iter().enumerate().filter(|(_, &v)| v > 0.0).map(|(x, _)| x).collect()
    }

    /// Elements where `nu` is positive.
    pub fn tent_support(&self) -> Vec<usize> {
        self.tent.values().iter().enumerate().filter(|(_, &v)| v > 0.0).map(|(x, _)| x).collect()
    }

    /// `true` when `nu` is a point mass at 0 (the Bohr set has collapsed).
    pub fn is_point_mass(&self) -> bool {
        self.probabilities[0] == 1.0
    }
}

/// Builds `nu_{S,rho}` and `chi_{S,rho}` for `rho` in `(0, 1]`.
pub fn tent(fs: &FrequencySet, rho: f64) -> Result<BohrWeight> {
    Ok(tent_with_radius(fs, Radius::new(rho)?))
}

pub fn tent_with_radius(fs: &FrequencySet, rho: Radius) -> BohrWeight {
    let group = fs.group;
    let n = group.modulus();
    let raw: Vec<f64> = (0..n)
        .map(|x| {
            let norm = fs.max_norm(x as i64);
            if norm == 0.0 {
                1.0
            } else if rho.admits(norm) {
                (1.0 - norm / rho.value()).max(0.0)
            } else {
                0.0
            }
        })
        .collect();
    // raw[0] == 1, so the total is at least 1
    let total: f64 = raw.iter().sum();
    let probabilities: Vec<f64> = raw.iter().map(|v| v / total).collect();
    let scale = n as f64 / total;
    let tent = GroupFunction1D::new(group, raw.iter().map(|v| v * scale).collect()).expect("length N");
    let weight = convolve1(&tent, &tent).expect("same group");
    BohrWeight { freqset: fs.clone(), radius: rho, tent, weight, probabilities }
}

/// Checks that `chi` lives on `{-2 floor(rho N), ..., 2 floor(rho N)} + NZ`.
///
/// Requires the distinguishing frequency `1` in `S`; without it the Bohr set
/// need not be an interval around 0.
pub fn support_check(w: &BohrWeight) -> Result<bool> {
    if !w.freqset.contains(1) {
        return Err(Error::MissingDistinguishingFrequency);
    }
    let n = w.freqset.group.modulus();
    let reach = 2 * w.radius.floor_times(n);
    Ok(w.weight_support().into_iter().all(|x| x.min(n - x) <= reach))
}

/// Weight `chi(0)^2 / N^2` that the pair `(s, t) = (0, 0)` receives in the
/// weighted counting form.
pub fn trivial_difference_mass(w: &BohrWeight) -> f64 {
    let n = w.freqset.group.modulus() as f64;
    let c0 = w.weight.values()[0];
    c0 * c0 / (n * n)
}
