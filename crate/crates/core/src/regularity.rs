//! Constructive energy-pigeonholing on `(Z/N)^2`.
//!
//! Starting from `S_0 = {0, 1}` and `delta_0 = eps / 10^4`, each level `i`
//! fixes three radii `delta_{3i} > delta_{3i+1} > delta_{3i+2}` and the next
//! frequency set
//!
//! ```text
//! S_{i+1} = S_i ∪ {xi : |nu_i^(xi)| >= eps/100} ∪ {xi, zeta : |f^(xi, zeta)| >= delta_{3i+2}}
//! ```
//!
//! with `nu_i = nu_{S_i, delta_{3i}}`. The radii follow explicit rules:
//!
//! * `delta_{3i+1} = delta_{3i} * eps / (400 (|S_i| + 1) K_i)` with
//!   `K_i = |nu_i|_inf^2 / delta_{3i}`, the Lipschitz constant of
//!   `nu_i (x) nu_i` against the Bohr metric;
//! * `delta_{3i+2} = min(delta_{3i+1} / 2, eps / (54 |nu_{S_i, delta_{3i+1}}|_2^4))`;
//! * `delta_{3i+3} = delta_{3i+2} / (4 pi)`.
//!
//! The tower stops at the first index `i` whose shell `S_{i+2}^2 \ S_i^2`
//! carries spectral energy at most `eps^2 / 10^4`. The certificate then uses
//! `S = S_i`, `rho = delta_{3i+1}`, splits `f = f0 + f1 + f2` and checks every
//! intermediate bound numerically, so a bad constant shows up as a failed
//! check rather than a silently wrong claim.
//!
//! Radii are carried in log form ([`Radius`]); at grid sizes that fit in
//! memory they fall far below `1/N` and the Bohr sets collapse to `{0}`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::bohr::{
    bohr_set_radius, support_check, tent_with_radius, trivial_difference_mass, BohrWeight, FrequencySet, Radius,
};
use crate::counting::{lambda_direct, weighted_from_spectra};
use crate::error::{Error, Result};
use crate::group::{GroupFunction2D, Spectrum2D};

/// Slack for the exact-decomposition and range invariants.
pub const DECOMPOSITION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularityParams {
    epsilon: f64,
    iteration_cap: u64,
    delta0: Radius,
}

impl RegularityParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::EpsilonOutOfRange(epsilon));
        }
        let iteration_cap = 2 * (1e4 / (epsilon * epsilon)).floor() as u64 + 4;
        let delta0 = Radius::new(epsilon / 1e4)?;
        Ok(Self { epsilon, iteration_cap, delta0 })
    }

    #[inline]
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `M = 2 floor(10^4 / eps^2) + 4`.
    #[inline]
    pub fn iteration_cap(&self) -> u64 {
        self.iteration_cap
    }

    #[inline]
    pub fn delta0(&self) -> Radius {
        self.delta0
    }

    /// Admissible shell energy, `eps^2 / 10^4`.
    pub fn energy_threshold(&self) -> f64 {
        self.epsilon * self.epsilon / 1e4
    }

    /// Threshold on `|nu_i^|` for frequencies joining the next set.
    pub fn tent_threshold(&self) -> f64 {
        self.epsilon / 100.0
    }
}

/// One level of the tower: `S_i`, its three radii, `nu_i` and
/// `nu_{S_i, delta_{3i+1}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TowerLevel {
    pub index: usize,
    pub freqset: FrequencySet,
    /// `[delta_{3i}, delta_{3i+1}, delta_{3i+2}]`.
    pub radii: [Radius; 3],
    pub nu: BohrWeight,
    pub rho_weight: BohrWeight,
}

impl TowerLevel {
    /// Level with `S_i` and `delta_{3i}` given, remaining radii by the rules
    /// in the module docs.
    pub fn build(index: usize, freqset: FrequencySet, delta: Radius, params: &RegularityParams) -> Self {
        let eps = params.epsilon();
        let nu = tent_with_radius(&freqset, delta);
        // ln K_i = 2 ln |nu_i|_inf - ln delta_{3i}
        let ln_k = 2.0 * nu.tent().sup_norm().ln() - delta.ln();
        let ln_next = delta.ln() + eps.ln() - (400.0 * (freqset.len() as f64 + 1.0)).ln() - ln_k;
        let rho = Radius::from_ln(ln_next);
        let rho_weight = tent_with_radius(&freqset, rho);
        let l2_fourth = rho_weight.tent().l2_norm().powi(4);
        let third = rho.scaled(0.5).min(Radius::from_ln(eps.ln() - (54.0 * l2_fourth).ln()));
        Self { index, freqset, radii: [delta, rho, third], nu, rho_weight }
    }

    /// `delta_{3i+3}`.
    pub fn next_radius(&self) -> Radius {
        self.radii[2].scaled(1.0 / (4.0 * PI))
    }
}

/// `S_{i+1}` from level `i`.
fn next_freqset(level: &TowerLevel, spectrum: &Spectrum2D, params: &RegularityParams) -> FrequencySet {
    let n = spectrum.group().modulus();
    let nu_hat = level.nu.tent().spectrum();
    let tent_freqs =
        nu_hat.coeffs().iter().enumerate().filter(|(_, c)| c.norm() >= params.tent_threshold()).map(|(xi, _)| xi);
    let threshold = level.radii[2];
    let large: Vec<usize> = (0..n)
        .into_par_iter()
        .flat_map_iter(|xi| {
            (0..n).filter_map(move |zeta| {
                let c = spectrum.get(xi, zeta).norm();
                // log form: the threshold may have underflowed
                (c > 0.0 && c.ln() >= threshold.ln()).then_some((xi, zeta))
            })
        })
        .flat_map_iter(|(xi, zeta)| [xi, zeta])
        .collect();
    level.freqset.union(tent_freqs.chain(large))
}

/// Energy of `f^` on `S_hi^2 \ S_lo^2`.
pub fn shell_energy(spectrum: &Spectrum2D, lo: &FrequencySet, hi: &FrequencySet) -> f64 {
    let n = spectrum.group().modulus();
    let in_lo = membership(lo, n);
    let mut acc = 0.0;
    for &xi in hi.freqs() {
        for &zeta in hi.freqs() {
            if !(in_lo[xi] && in_lo[zeta]) {
                acc += spectrum.get(xi, zeta).norm_sqr();
            }
        }
    }
    acc
}

fn membership(fs: &FrequencySet, n: usize) -> Vec<bool> {
    let mut v = vec![false; n];
    for &xi in fs.freqs() {
        v[xi] = true;
    }
    v
}

/// Smallest `i` with `i + 2` inside the tower whose shell energy is at most
/// `eps^2 / 10^4`.
pub fn select_index(tower: &[TowerLevel], spectrum: &Spectrum2D, params: &RegularityParams) -> Option<usize> {
    (0..tower.len().saturating_sub(2))
        .find(|&i| shell_energy(spectrum, &tower[i].freqset, &tower[i + 2].freqset) <= params.energy_threshold())
}

/// Builds levels `0, 1, 2, ...` until [`select_index`] succeeds, so the
/// returned tower ends at `S_{i+2}` for the selected `i`.
pub fn build_tower(f: &GroupFunction2D, params: &RegularityParams) -> Result<Vec<TowerLevel>> {
    f.group().require_two_divisible()?;
    let spectrum = f.spectrum();
    build_tower_from_spectrum(&spectrum, params)
}

fn build_tower_from_spectrum(spectrum: &Spectrum2D, params: &RegularityParams) -> Result<Vec<TowerLevel>> {
    let group = spectrum.group();
    let cap = params.iteration_cap();
    let mut tower = vec![TowerLevel::build(0, FrequencySet::initial(group), params.delta0(), params)];
    loop {
        let last = tower.last().expect("nonempty");
        if last.index as u64 >= cap {
            return Err(Error::TowerExhausted { levels: tower.len() });
        }
        let next = TowerLevel::build(last.index + 1, next_freqset(last, spectrum, params), last.next_radius(), params);
        tower.push(next);
        if tower.len() >= 3 {
            let i = tower.len() - 3;
            if shell_energy(spectrum, &tower[i].freqset, &tower[i + 2].freqset) <= params.energy_threshold() {
                return Ok(tower);
            }
        }
    }
}

/// `f = f0 + f1 + f2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub f0: GroupFunction2D,
    pub f1: GroupFunction2D,
    pub f2: GroupFunction2D,
}

/// `f0 = f * (nu_lo (x) nu_lo)`, `f1 = f * (nu_hi (x) nu_hi - nu_lo (x) nu_lo)`,
/// `f2 = f - f * (nu_hi (x) nu_hi)`.
pub fn decompose_with(f: &GroupFunction2D, lower: &BohrWeight, upper: &BohrWeight) -> Result<Decomposition> {
    f.group().ensure_same(&lower.freqset().group())?;
    f.group().ensure_same(&upper.freqset().group())?;
    let f0 = f.smooth_by_product(lower.probabilities())?;
    let smooth_hi = f.smooth_by_product(upper.probabilities())?;
    let f1 = smooth_hi.sub(&f0)?;
    let f2 = f.sub(&smooth_hi)?;
    Ok(Decomposition { f0, f1, f2 })
}

/// Decomposition at tower index `i` (needs level `i + 1`).
pub fn decompose(f: &GroupFunction2D, tower: &[TowerLevel], i: usize) -> Result<Decomposition> {
    let upper =
        tower.get(i + 1).ok_or(Error::OutOfRange { what: "tower index (level i+1 must exist)", value: i as f64 })?;
    decompose_with(f, &tower[i].nu, &upper.nu)
}

/// A computed quantity against its bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub value: f64,
    pub bound: f64,
    /// `log10` of the bound; stays finite when `bound` underflows.
    pub bound_log10: f64,
    pub slack: f64,
    pub holds: bool,
}

impl BoundCheck {
    fn linear(value: f64, bound: f64) -> Self {
        Self {
            value,
            bound,
            bound_log10: bound.log10(),
            slack: bound - value,
            holds: value <= bound + DECOMPOSITION_TOLERANCE,
        }
    }

    /// `value <= bound` with the bound given as a radius-like log quantity.
    /// Exact comparison; no tolerance is added since the bound can be far
    /// below floating-point resolution.
    fn logarithmic(value: f64, bound: Radius) -> Self {
        let holds = value == 0.0 || value.ln() <= bound.ln();
        Self { value, bound: bound.value(), bound_log10: bound.log10(), slack: bound.value() - value, holds }
    }
}

/// The four intermediate bounds behind the certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateBounds {
    /// Shell energy of the selected index against `eps^2 / 10^4`.
    pub shell_energy: BoundCheck,
    /// `|f2^|_inf` against `2 delta_{3i+2}`.
    pub f2_spectral_sup: BoundCheck,
    /// `|f1|_2` against `eps / 27` (with `|f1|_1 <= |f1|_2` checked alongside).
    pub f1_l2: BoundCheck,
    pub f1_l1_le_l2: bool,
    /// Largest `|f0(x+s, y+t) - f0(x, y)|` over `s, t` in `B(S, 2 rho)`,
    /// against `eps / 54`.
    pub f0_continuity: BoundCheck,
}

impl CertificateBounds {
    pub fn all_hold(&self) -> bool {
        self.shell_energy.holds
            && self.f2_spectral_sup.holds
            && self.f1_l2.holds
            && self.f1_l1_le_l2
            && self.f0_continuity.holds
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityCertificate {
    pub epsilon: f64,
    pub modulus: usize,
    pub chosen_index: usize,
    pub tower_levels: usize,
    pub frequencies: Vec<usize>,
    pub rho: f64,
    pub rho_log10: f64,
    /// `log10 max(|S|, 1/rho)`: the realized `R` with `|S| <= R` and
    /// `rho >= 1/R`.
    pub realized_r_log10: f64,
    pub bounds: CertificateBounds,
    pub lambda_value: f64,
    pub lambda_direct: f64,
    pub lambda_imaginary: f64,
    pub mean_cubed: f64,
    pub trivial_difference_mass: f64,
    /// Largest `|s|` (signed representative) with `chi(s) > 0`.
    pub weight_reach: usize,
    pub support_ok: bool,
    pub decomposition_error: f64,
    pub ranges_ok: bool,
    pub pass: bool,
    #[serde(skip)]
    pub weight: Option<BohrWeight>,
    #[serde(skip)]
    pub decomposition: Option<Decomposition>,
}

impl RegularityCertificate {
    /// The weight `chi_{S, rho}` the certificate is about.
    pub fn bohr_weight(&self) -> &BohrWeight {
        self.weight.as_ref().expect("populated by certify")
    }

    /// Every recorded check, not only the headline inequality.
    pub fn fully_verified(&self) -> bool {
        self.pass
            && self.bounds.all_hold()
            && self.support_ok
            && self.ranges_ok
            && self.decomposition_error < DECOMPOSITION_TOLERANCE
            && (self.lambda_value - self.lambda_direct).abs() < 1e-9
    }
}

/// Runs the tower on `f` (values in `[0, 1]`, odd modulus) and assembles a
/// certificate for `L_{chi_{S,rho}}(f, f, f) >= (mean f)^3 - eps`.
pub fn certify(f: &GroupFunction2D, params: &RegularityParams) -> Result<RegularityCertificate> {
    f.group().require_two_divisible()?;
    f.require_range(0.0, 1.0, "[0, 1]")?;
    let n = f.modulus();
    let eps = params.epsilon();
    let spectrum = f.spectrum();
    let tower = build_tower_from_spectrum(&spectrum, params)?;
    let i = select_index(&tower, &spectrum, params).ok_or(Error::TowerExhausted { levels: tower.len() })?;
    let level = &tower[i];
    let weight = level.rho_weight.clone();
    let rho = level.radii[1];

    let parts = decompose(f, &tower, i)?;

    let chi_hat = weight.weight().spectrum();
    let lambda = weighted_from_spectra(&spectrum, &spectrum, &spectrum, &chi_hat);
    let lambda_dir = lambda_direct(f, f, f, weight.weight())?;
    let mean_cubed = f.mean().powi(3);

    let shell = shell_energy(&spectrum, &level.freqset, &tower[i + 2].freqset);
    let f2_sup = parts.f2.spectrum().sup_norm();
    let (f1_l1, f1_l2) = (parts.f1.l1_norm(), parts.f1.l2_norm());
    let continuity = continuity_modulus(&parts.f0, &bohr_set_radius(&level.freqset, rho.scaled(2.0)));
    let bounds = CertificateBounds {
        shell_energy: BoundCheck::linear(shell, params.energy_threshold()),
        f2_spectral_sup: BoundCheck::logarithmic(f2_sup, level.radii[2].scaled(2.0)),
        f1_l2: BoundCheck::linear(f1_l2, eps / 27.0),
        f1_l1_le_l2: f1_l1 <= f1_l2 + DECOMPOSITION_TOLERANCE,
        f0_continuity: BoundCheck::linear(continuity, eps / 54.0),
    };

    let decomposition_error = f
        .values()
        .iter()
        .zip(parts.f0.values())
        .zip(parts.f1.values().iter().zip(parts.f2.values()))
        .map(|((v, a), (b, c))| (v - a - b - c).abs())
        .fold(0.0, f64::max);
    let t = DECOMPOSITION_TOLERANCE;
    let ranges_ok = parts.f0.min_value() >= -t
        && parts.f0.max_value() <= 1.0 + t
        && [&parts.f1, &parts.f2].iter().all(|g| g.min_value() >= -1.0 - t && g.max_value() <= 1.0 + t);

    let support_ok = support_check(&weight)?;
    let weight_reach = weight.weight_support().into_iter().map(|x| x.min(n - x)).max().unwrap_or(0);
    let realized_r_log10 = (level.freqset.len() as f64).log10().max(-rho.log10());

    Ok(RegularityCertificate {
        epsilon: eps,
        modulus: n,
        chosen_index: i,
        tower_levels: tower.len(),
        frequencies: level.freqset.freqs().to_vec(),
        rho: rho.value(),
        rho_log10: rho.log10(),
        realized_r_log10,
        bounds,
        lambda_value: lambda.re,
        lambda_direct: lambda_dir,
        lambda_imaginary: lambda.im,
        mean_cubed,
        trivial_difference_mass: trivial_difference_mass(&weight),
        weight_reach,
        support_ok,
        decomposition_error,
        ranges_ok,
        pass: lambda.re >= mean_cubed - eps,
        weight: Some(weight),
        decomposition: Some(parts),
    })
}

/// `sup_{x, y; s, t in shifts} |g(x+s, y+t) - g(x, y)|`.
fn continuity_modulus(g: &GroupFunction2D, shifts: &[usize]) -> f64 {
    let n = g.modulus();
    let per_s: Vec<f64> = shifts
        .par_iter()
        .map(|&s| {
            let mut worst = 0.0f64;
            for &t in shifts {
                for x in 0..n {
                    for y in 0..n {
                        let d = (g.get((x + s) % n, (y + t) % n) - g.get(x, y)).abs();
                        worst = worst.max(d);
                    }
                }
            }
            worst
        })
        .collect();
    per_s.into_iter().fold(0.0, f64::max)
}
