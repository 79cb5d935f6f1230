//! Bootstrap confidence intervals for impulse responses of possibly
//! cointegrated VARs when the cointegration rank is unknown.
//!
//! The crate is organised bottom-up:
//!
//! * [`ts`] holds the series containers, detrending and VECM regressor
//!   construction.
//! * [`vecm`] implements reduced-rank (Johansen) estimation, the VECM/VAR
//!   conversions and impulse responses.
//! * [`rank`] selects ranks and builds trace-statistic plausibility weights.
//! * [`bootstrap`] contains every resampling interval (fixed rank, endogenous
//!   rank selection, model averaging, fast-double-bootstrap bagging and the
//!   lag-augmented levels VAR).
//! * [`wimp`] combines the per-rank intervals by model plausibility.
//! * [`mc`] simulates the two benchmark processes and measures coverage.

pub mod bootstrap;
pub mod error;
pub mod mc;
pub mod rank;
pub mod rng;
pub mod ts;
pub mod vecm;
pub mod wimp;

pub use error::{Error, Result};
pub use nalgebra;
