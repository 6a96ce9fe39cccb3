//! Secrecy rates for the OOK wiretap channel.
//!
//! The eavesdropper receives `γ` times the legitimate receiver's photon
//! number. Her classical information is the mutual information of the binary
//! channel induced by the Helstrom measurement; her quantum-limited
//! information is the Holevo quantity. All rates are bits per channel use.

use serde::{Deserialize, Serialize};

use crate::detection::{
    helstrom_error, helstrom_projector, holevo_binary, overlap, BinaryCoherentEnsemble,
};
use crate::error::{Error, Result};
use crate::numerics::{h2, maximize_1d, try_maximize_1d, Interval};
use crate::receiver::{bob_click_model, mutual_info_bob, DetectorModel};

pub const PLANCK_CONSTANT: f64 = 6.626_070_15e-34;
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Prior search range for the vacuum symbol.
pub const Q_SEARCH: (f64, f64) = (0.01, 0.99);
const Q_TOL: f64 = 1e-4;
/// log10 of the received-photon search range used for signal optimisation.
pub const LOG10_PHOTON_SEARCH: (f64, f64) = (-3.0, 2.0);
const LOG10_PHOTON_TOL: f64 = 1e-4;

/// One evaluated operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecrecyPoint {
    pub gamma: f64,
    pub received_mean_photons: f64,
    pub q: f64,
    pub info_bob: f64,
    pub info_eve_helstrom: f64,
    pub holevo_eve: f64,
    pub private_capacity: f64,
    pub dw_rate: f64,
}

impl SecrecyPoint {
    /// `I(X;Y) − I(X;Z)` before clipping at zero.
    pub fn unclipped_capacity(&self) -> f64 {
        self.info_bob - self.info_eve_helstrom
    }

    /// `I(X;Y) − χ(X;E)` before clipping at zero.
    pub fn unclipped_dw_rate(&self) -> f64 {
        self.info_bob - self.holevo_eve
    }
}

/// Symbol clock and carrier wavelength of the optical link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClockedLink {
    pub clock_rate_hz: f64,
    pub wavelength_m: f64,
}

impl ClockedLink {
    pub fn new(clock_rate_hz: f64, wavelength_m: f64) -> Result<Self> {
        let link = Self {
            clock_rate_hz,
            wavelength_m,
        };
        let problems = link.violations();
        if problems.is_empty() {
            Ok(link)
        } else {
            Err(Error::domain("ClockedLink::new", problems.join("; ")))
        }
    }

    pub(crate) fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.clock_rate_hz > 0.0 && self.clock_rate_hz.is_finite()) {
            out.push(format!(
                "clocked_link.clock_rate_hz = {} must be positive",
                self.clock_rate_hz
            ));
        }
        if !(self.wavelength_m > 0.0 && self.wavelength_m.is_finite()) {
            out.push(format!(
                "clocked_link.wavelength_m = {} must be positive",
                self.wavelength_m
            ));
        }
        out
    }

    /// Energy of one photon at the carrier wavelength, in joules.
    pub fn photon_energy(&self) -> f64 {
        PLANCK_CONSTANT * SPEED_OF_LIGHT / self.wavelength_m
    }
}

impl Default for ClockedLink {
    fn default() -> Self {
        Self {
            clock_rate_hz: 1e9,
            wavelength_m: 850e-9,
        }
    }
}

fn check_gamma(what: &'static str, gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::domain(
            what,
            format!("gamma = {gamma} must lie in (0, 1)"),
        ));
    }
    Ok(())
}

/// Evaluates every rate at a fixed prior `q`.
pub fn private_capacity_fixed(
    detector: &DetectorModel,
    received_mean_photons: f64,
    gamma: f64,
    q: f64,
) -> Result<SecrecyPoint> {
    check_gamma("private_capacity_fixed", gamma)?;
    let channel = bob_click_model(detector, received_mean_photons)?;
    let eve = BinaryCoherentEnsemble::new(gamma * received_mean_photons, q)?;
    let info_bob = mutual_info_bob(q, &channel);
    let info_eve_helstrom = helstrom_projector(&eve).mutual_information(q);
    let holevo_eve = holevo_binary(&eve);
    Ok(SecrecyPoint {
        gamma,
        received_mean_photons,
        q,
        info_bob,
        info_eve_helstrom,
        holevo_eve,
        private_capacity: (info_bob - info_eve_helstrom).max(0.0),
        dw_rate: (info_bob - holevo_eve).max(0.0),
    })
}

/// Private capacity with the prior optimised over [`Q_SEARCH`].
///
/// The search maximises the unclipped difference so that the recorded prior
/// is meaningful even where the capacity is zero.
pub fn private_capacity(
    detector: &DetectorModel,
    received_mean_photons: f64,
    gamma: f64,
) -> Result<SecrecyPoint> {
    check_gamma("private_capacity", gamma)?;
    let domain = Interval::new(Q_SEARCH.0, Q_SEARCH.1)?;
    let best = try_maximize_1d(
        |q| {
            private_capacity_fixed(detector, received_mean_photons, gamma, q)
                .map(|p| p.unclipped_capacity())
        },
        domain,
        Q_TOL,
    )?;
    let optimum = private_capacity_fixed(detector, received_mean_photons, gamma, best.argmax)?;
    let uniform = private_capacity_fixed(detector, received_mean_photons, gamma, 0.5)?;
    if uniform.unclipped_capacity() > optimum.unclipped_capacity() {
        Ok(uniform)
    } else {
        Ok(optimum)
    }
}

/// `[I(X;Y) − χ(X;E)]₊` at prior `q`.
pub fn devetak_winter_rate(
    detector: &DetectorModel,
    received_mean_photons: f64,
    gamma: f64,
    q: f64,
) -> Result<f64> {
    check_gamma("devetak_winter_rate", gamma)?;
    let channel = bob_click_model(detector, received_mean_photons)?;
    let eve = BinaryCoherentEnsemble::new(gamma * received_mean_photons, q)?;
    Ok((mutual_info_bob(q, &channel) - holevo_binary(&eve)).max(0.0))
}

/// Uniform-prior private capacity written directly in terms of the detector
/// no-click probabilities and the Helstrom error:
/// `[h(ε*) + h((ε₀+ε₁)/2) − (h(ε₀)+h(ε₁))/2 − 1]₊`.
pub fn private_capacity_uniform(
    detector: &DetectorModel,
    received_mean_photons: f64,
    gamma: f64,
) -> Result<f64> {
    check_gamma("private_capacity_uniform", gamma)?;
    let ch = bob_click_model(detector, received_mean_photons)?;
    let eps_star = helstrom_error(&BinaryCoherentEnsemble::new(
        gamma * received_mean_photons,
        0.5,
    )?);
    let value =
        h2(eps_star) + h2(0.5 * (ch.eps0 + ch.eps1)) - 0.5 * (h2(ch.eps1) + h2(ch.eps0)) - 1.0;
    Ok(value.max(0.0))
}

/// Uniform-prior Devetak–Winter rate:
/// `[h((ε₀+ε₁)/2) − (h(ε₀)+h(ε₁))/2 − h((1+ε(γ))/2)]₊` with `ε(γ) = e^{−γn̄/2}`.
pub fn devetak_winter_uniform(
    detector: &DetectorModel,
    received_mean_photons: f64,
    gamma: f64,
) -> Result<f64> {
    check_gamma("devetak_winter_uniform", gamma)?;
    let ch = bob_click_model(detector, received_mean_photons)?;
    let c = overlap(gamma * received_mean_photons)?;
    let value =
        h2(0.5 * (ch.eps0 + ch.eps1)) - 0.5 * (h2(ch.eps1) + h2(ch.eps0)) - h2(0.5 * (1.0 + c));
    Ok(value.max(0.0))
}

/// Jointly optimises the received photon number (log-spaced search over
/// [`LOG10_PHOTON_SEARCH`]) and the prior. The Devetak–Winter rate in the
/// returned point is taken at the capacity-optimal prior.
pub fn optimize_signal(detector: &DetectorModel, gamma: f64) -> Result<SecrecyPoint> {
    check_gamma("optimize_signal", gamma)?;
    let domain = Interval::new(LOG10_PHOTON_SEARCH.0, LOG10_PHOTON_SEARCH.1)?;
    let best = try_maximize_1d(
        |log_n| {
            private_capacity(detector, 10f64.powf(log_n), gamma).map(|p| p.unclipped_capacity())
        },
        domain,
        LOG10_PHOTON_TOL,
    )?;
    private_capacity(detector, 10f64.powf(best.argmax), gamma)
}

/// Best Devetak–Winter rate over the received photon number at a fixed prior.
pub fn optimize_dw_signal(detector: &DetectorModel, gamma: f64, q: f64) -> Result<(f64, f64)> {
    check_gamma("optimize_dw_signal", gamma)?;
    let domain = Interval::new(LOG10_PHOTON_SEARCH.0, LOG10_PHOTON_SEARCH.1)?;
    let best = maximize_1d(
        |log_n| {
            devetak_winter_rate(detector, 10f64.powf(log_n), gamma, q).unwrap_or(f64::NEG_INFINITY)
        },
        domain,
        LOG10_PHOTON_TOL,
    )?;
    Ok((10f64.powf(best.argmax), best.max))
}

/// Repeaterless secret-key bound `−log2(1 − η)` in bits per use.
pub fn plob_bound(eta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&eta) {
        return Err(Error::domain(
            "plob_bound",
            format!("transmissivity {eta} must lie in [0, 1); the bound diverges at 1"),
        ));
    }
    Ok(-(-eta).ln_1p() / std::f64::consts::LN_2)
}

/// Bits per use times symbol clock.
pub fn private_rate(capacity: f64, link: &ClockedLink) -> Result<f64> {
    if !(capacity >= 0.0) {
        return Err(Error::domain(
            "private_rate",
            format!("capacity must be >= 0, got {capacity}"),
        ));
    }
    Ok(capacity * link.clock_rate_hz)
}

/// Optical power Alice must emit so that `target_received_mean_photons` reach
/// the detector through an end-to-end efficiency `total_efficiency`.
pub fn required_laser_power(
    target_received_mean_photons: f64,
    total_efficiency: f64,
    link: &ClockedLink,
) -> Result<f64> {
    if !(total_efficiency > 0.0 && total_efficiency <= 1.0) {
        return Err(Error::domain(
            "required_laser_power",
            format!("total efficiency {total_efficiency} must lie in (0, 1]"),
        ));
    }
    if !(target_received_mean_photons >= 0.0) {
        return Err(Error::domain(
            "required_laser_power",
            format!("target photon number must be >= 0, got {target_received_mean_photons}"),
        ));
    }
    let emitted_per_pulse = target_received_mean_photons / total_efficiency;
    Ok(emitted_per_pulse * link.clock_rate_hz * link.photon_energy())
}

/// Converts a positive loss in dB to a transmissivity.
pub fn db_to_fraction(loss_db: f64) -> f64 {
    10f64.powf(-loss_db / 10.0)
}

/// Converts a transmissivity to a positive loss in dB.
pub fn fraction_to_db(fraction: f64) -> f64 {
    -10.0 * fraction.log10()
}
