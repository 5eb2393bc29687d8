//! Popular differences: a nonzero `(m, n)` whose configuration count in a
//! grid set `A` reaches `(alpha^3 - eps) N^2`.
//!
//! Two routes. The scan evaluates every difference and takes the best one.
//! The certificate route embeds `A` into `(Z/N')^2`, runs the regularity
//! certificate on its indicator, and searches only the differences that the
//! certified weight `chi` actually charges.

use serde::Serialize;

use crate::counting::difference_counts;
use crate::error::{Error, Result};
use crate::grid::GridSet;
use crate::group::{CyclicGroup, GroupFunction2D};
use crate::regularity::{certify, RegularityParams};

/// Embedding factor for the cyclic group: `N'` is the least odd integer
/// `>= EMBEDDING_FACTOR * N`.
pub const EMBEDDING_FACTOR: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Scan,
    Certificate,
}

/// Which differences the certificate route searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateWindow {
    /// Pairs from `supp chi x supp chi`, minus `(0, 0)`.
    WeightSupport,
    /// `chi` is a point mass, so the unit box `{-1, 0, 1}^2 \ {(0,0)}` is used.
    UnitBox,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateEvidence {
    pub embedded_modulus: usize,
    pub lambda_value: f64,
    pub mean_cubed: f64,
    pub trivial_difference_mass: f64,
    /// `lambda_value` minus the exact `(s, t) = (0, 0)` contribution.
    pub off_diagonal_lambda: f64,
    pub weight_reach: usize,
    /// No triple with differences from the window can wrap around in `Z/N'`.
    pub wrap_free: bool,
    pub window: CandidateWindow,
    pub candidates: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PopularDifferenceResult {
    pub side: usize,
    pub alpha: f64,
    pub epsilon: f64,
    pub method: Method,
    pub wraparound: bool,
    pub m: i64,
    pub n: i64,
    pub count: u64,
    pub threshold: f64,
    pub met: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateEvidence>,
}

impl PopularDifferenceResult {
    pub fn difference(&self) -> (i64, i64) {
        (self.m, self.n)
    }
}

fn check_epsilon(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(Error::EpsilonOutOfRange(eps))
    }
}

/// `(alpha^3 - eps) N^2`.
pub fn threshold(set: &GridSet, eps: f64) -> f64 {
    let n = set.side() as f64;
    (set.density().powi(3) - eps) * n * n
}

/// Best nonzero difference over the whole count table. Ties go to the
/// lexicographically smallest `(m, n)`.
pub fn find_popular_scan(set: &GridSet, eps: f64, wraparound: bool) -> Result<PopularDifferenceResult> {
    check_epsilon(eps)?;
    let counts = difference_counts(set, wraparound);
    let best =
        counts.iter().filter(|&(d, _)| d != (0, 0)).fold(None, |best: Option<((i64, i64), u64)>, (d, c)| match best {
            Some((_, bc)) if bc >= c => best,
            _ => Some((d, c)),
        });
    // a 1x1 grid stores no nonzero difference
    let ((m, n), count) = best.unwrap_or(((0, 1), counts.get(0, 1)));
    let thr = threshold(set, eps);
    Ok(PopularDifferenceResult {
        side: set.side(),
        alpha: set.density(),
        epsilon: eps,
        method: Method::Scan,
        wraparound,
        m,
        n,
        count,
        threshold: thr,
        met: count as f64 >= thr,
        certificate: None,
    })
}

/// Least odd integer `>= 5 N`.
pub fn embedded_modulus(side: usize) -> usize {
    (EMBEDDING_FACTOR * side) | 1
}

/// Indicator of `A` inside `(Z/N')^2`, cell `(r, c)` at `(r, c)`.
pub fn embed_to_cyclic(set: &GridSet) -> GroupFunction2D {
    let modulus = embedded_modulus(set.side());
    let group = CyclicGroup::new(modulus).expect("positive modulus");
    let side = set.side();
    GroupFunction2D::from_fn(group, |r, c| if r < side && c < side && set.contains(r, c) { 1.0 } else { 0.0 })
}

/// Certificate route: certify the embedded indicator, drop the diagonal
/// `(s, t) = (0, 0)` exactly, and search the differences charged by `chi`.
pub fn find_popular_certificate(set: &GridSet, eps: f64) -> Result<PopularDifferenceResult> {
    check_epsilon(eps)?;
    let params = RegularityParams::new(eps)?;
    let f = embed_to_cyclic(set);
    let big = f.modulus();
    let cert = certify(&f, &params)?;
    if !cert.pass {
        return Err(Error::CertificateFailed { lambda: cert.lambda_value, mean_cubed: cert.mean_cubed, epsilon: eps });
    }
    let weight = cert.bohr_weight();
    let group = f.group();
    let side = set.side() as i64;
    let mut support: Vec<i64> = weight.weight_support().into_iter().map(|s| group.signed(s)).collect();
    support.sort_unstable();

    let mut candidates: Vec<(i64, i64)> =
        support.iter().flat_map(|&s| support.iter().map(move |&t| (s, t))).filter(|&d| d != (0, 0)).collect();
    let window = if candidates.is_empty() {
        candidates = (-1..=1).flat_map(|s| (-1..=1).map(move |t| (s, t))).filter(|&d| d != (0, 0)).collect();
        CandidateWindow::UnitBox
    } else {
        CandidateWindow::WeightSupport
    };
    let reach = candidates.iter().map(|&(s, t)| s.abs().max(t.abs())).max().unwrap_or(0);
    let wrap_free = reach + side <= big as i64;

    let counts = difference_counts(set, false);
    let ((m, n), count) = candidates
        .iter()
        .map(|&d| (d, counts.get(d.0, d.1)))
        .fold(None, |best: Option<((i64, i64), u64)>, (d, c)| match best {
            Some((bd, bc)) if bc > c || (bc == c && bd < d) => best,
            _ => Some((d, c)),
        })
        .expect("nonempty candidate window");

    let cube_mean = f.values().iter().map(|v| v * v * v).sum::<f64>() / (big * big) as f64;
    let thr = threshold(set, eps);
    Ok(PopularDifferenceResult {
        side: set.side(),
        alpha: set.density(),
        epsilon: eps,
        method: Method::Certificate,
        wraparound: false,
        m,
        n,
        count,
        threshold: thr,
        met: count as f64 >= thr,
        certificate: Some(CertificateEvidence {
            embedded_modulus: big,
            lambda_value: cert.lambda_value,
            mean_cubed: cert.mean_cubed,
            trivial_difference_mass: cert.trivial_difference_mass,
            off_diagonal_lambda: cert.lambda_value - cert.trivial_difference_mass * cube_mean,
            weight_reach: cert.weight_reach,
            wrap_free,
            window,
            candidates: candidates.len(),
        }),
    })
}
