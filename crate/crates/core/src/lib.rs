//! Counting, certifying and bounding right isosceles triangle configurations
//! `(a, b), (a + m, b + n), (a - n, b + m)` in grids, in `(Z/N)^2` and in
//! `(F_q^n)^2`.
//!
//! * [`group`]: cyclic groups, functions on them, normalized transforms.
//! * [`counting`]: the weighted counting form and per-difference counts.
//! * [`bohr`]: Bohr sets, tent functions, weights `chi = nu * nu`.
//! * [`regularity`]: the frequency tower and its certificate.
//! * [`popular`]: popular differences on grid sets.
//! * [`ff`]: configurations over finite fields and the slice-rank bound.
//! * [`extremal`]: exact largest configuration-free grid sets.

pub mod bohr;
pub mod counting;
pub mod error;
pub mod extremal;
pub mod ff;
pub mod grid;
pub mod group;
pub mod popular;
pub mod regularity;

pub use bohr::{BohrWeight, FrequencySet, Radius};
pub use counting::DifferenceCounts;
pub use error::{Error, Result};
pub use extremal::ExtremalResult;
pub use ff::{FFConfigSet, FieldVector, SliceRankReport};
pub use grid::GridSet;
pub use group::{CyclicGroup, GroupFunction1D, GroupFunction2D, Spectrum1D, Spectrum2D};
pub use popular::PopularDifferenceResult;
pub use regularity::{RegularityCertificate, RegularityParams};
