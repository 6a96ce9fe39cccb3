//! Threshold (click / no-click) detector of the legitimate receiver and the
//! binary channel it induces.
//!
//! Signal photons see the full Bob-side efficiency, which is already folded
//! into the received photon number; stray light is attenuated by the optical
//! efficiency alone. Dark counts and stray light are independent no-click
//! events.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::h2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DetectorModel {
    /// Dark-count probability per gate.
    pub p_dark: f64,
    /// Optical efficiency from telescope lens to detector, applied to stray light.
    pub eta_optical: f64,
    /// Mean stray photons per time-frequency bin.
    pub stray_mean: f64,
}

impl DetectorModel {
    pub fn new(p_dark: f64, eta_optical: f64, stray_mean: f64) -> Result<Self> {
        let model = Self {
            p_dark,
            eta_optical,
            stray_mean,
        };
        let problems = model.violations();
        if problems.is_empty() {
            Ok(model)
        } else {
            Err(Error::domain("DetectorModel::new", problems.join("; ")))
        }
    }

    pub(crate) fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(0.0..=1.0).contains(&self.p_dark) {
            out.push(format!(
                "detector.p_dark = {} must lie in [0, 1]",
                self.p_dark
            ));
        }
        if !(self.eta_optical > 0.0 && self.eta_optical <= 1.0) {
            out.push(format!(
                "detector.eta_optical = {} must lie in (0, 1]",
                self.eta_optical
            ));
        }
        if !(self.stray_mean >= 0.0) || !self.stray_mean.is_finite() {
            out.push(format!(
                "detector.stray_mean = {} must be finite and >= 0",
                self.stray_mean
            ));
        }
        out
    }
}

impl Default for DetectorModel {
    fn default() -> Self {
        Self {
            p_dark: 1e-7,
            eta_optical: 1.0,
            stray_mean: 1e-4,
        }
    }
}

/// No-click probabilities given each input symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BobChannel {
    /// P(no click | vacuum sent).
    pub eps0: f64,
    /// P(no click | pulse sent).
    pub eps1: f64,
}

pub fn bob_click_model(detector: &DetectorModel, received_mean_photons: f64) -> Result<BobChannel> {
    if !(received_mean_photons >= 0.0) {
        return Err(Error::domain(
            "bob_click_model",
            format!("received photon number must be >= 0, got {received_mean_photons}"),
        ));
    }
    let quiet = 1.0 - detector.p_dark;
    let stray = detector.eta_optical * detector.stray_mean;
    Ok(BobChannel {
        eps0: quiet * (-stray).exp(),
        eps1: quiet * (-(received_mean_photons + stray)).exp(),
    })
}

/// `I(X;Y)` in bits for prior `q` on the vacuum symbol.
pub fn mutual_info_bob(q: f64, channel: &BobChannel) -> f64 {
    let BobChannel { eps0, eps1 } = *channel;
    let mixed = q * eps0 + (1.0 - q) * eps1;
    (h2(mixed) - q * h2(eps0) - (1.0 - q) * h2(eps1)).max(0.0)
}
