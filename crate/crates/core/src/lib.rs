//! Information-theoretic security rates for on-off-keyed coherent-state
//! satellite-to-ground optical links.
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: binary entropy, bounded 1-D maximisation, bisection and
//!   the offset-disk Gaussian power integral.
//! - [`detection`]: overlaps, Helstrom discrimination and the Holevo bound for
//!   the binary coherent ensemble seen by the eavesdropper.
//! - [`receiver`]: the threshold-detector channel of the legitimate receiver.
//! - [`secrecy`]: private capacity, Devetak–Winter rate, PLOB bound and the
//!   rate/power conversions.
//! - [`linkbudget`]: static downlink geometry, the degradation factor and the
//!   exclusion-radius solvers.
//! - [`orbitsim`]: circular equatorial pass simulation yielding a
//!   time-integrated degradation factor.
//! - [`scenario_io`]: JSON configuration, presets, sweeps and report tables.
//! - [`table`]: deterministic CSV / JSON emission.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN

pub mod detection;
pub mod error;
pub mod linkbudget;
pub mod numerics;
pub mod orbitsim;
pub mod receiver;
pub mod scenario_io;
pub mod secrecy;
pub mod table;

pub use error::{Error, Result};
