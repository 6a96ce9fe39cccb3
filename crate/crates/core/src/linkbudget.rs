//! Static downlink geometry: collection fractions, the degradation factor
//! `γ` and the exclusion radii that enforce a target `γ`.
//!
//! The beam is Gaussian with full divergence `θ_div` at `1/e²`, so its
//! `1/e²` radius at range `d` is `θ_div·d/2`. Collection fractions use the
//! footprint-area approximation `D²/(θ_div·d)²` for both receivers, and the
//! exclusion angle is taken as `r_E/d`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{find_root, Interval};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkGeometry {
    pub dist_bob_m: f64,
    pub dist_eve_m: f64,
    pub diam_bob_m: f64,
    pub diam_eve_m: f64,
    pub divergence_full_angle_rad: f64,
    /// Lumped Bob-side efficiency (atmosphere, pointing, optics, detector).
    pub eta_b: f64,
    pub exclusion_radius_m: f64,
}

impl LinkGeometry {
    pub fn new(
        dist_bob_m: f64,
        dist_eve_m: f64,
        diam_bob_m: f64,
        diam_eve_m: f64,
        divergence_full_angle_rad: f64,
        eta_b: f64,
        exclusion_radius_m: f64,
    ) -> Result<Self> {
        let geom = Self {
            dist_bob_m,
            dist_eve_m,
            diam_bob_m,
            diam_eve_m,
            divergence_full_angle_rad,
            eta_b,
            exclusion_radius_m,
        };
        let problems = geom.violations();
        if problems.is_empty() {
            Ok(geom)
        } else {
            Err(Error::domain("LinkGeometry::new", problems.join("; ")))
        }
    }

    /// Micius-like low-orbit downlink at 1200 km with a 12.5 m exclusion radius.
    pub fn micius_leo() -> Self {
        Self {
            dist_bob_m: 1.2e6,
            dist_eve_m: 1.2e6,
            diam_bob_m: 1.0,
            diam_eve_m: 2.0,
            divergence_full_angle_rad: 10e-6,
            eta_b: 0.01,
            exclusion_radius_m: 12.5,
        }
    }

    pub(crate) fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let positive = [
            ("geometry.dist_bob_m", self.dist_bob_m),
            ("geometry.dist_eve_m", self.dist_eve_m),
            ("geometry.diam_bob_m", self.diam_bob_m),
            ("geometry.diam_eve_m", self.diam_eve_m),
            (
                "geometry.divergence_full_angle_rad",
                self.divergence_full_angle_rad,
            ),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                out.push(format!("{name} = {v} must be positive and finite"));
            }
        }
        if !(self.eta_b > 0.0 && self.eta_b <= 1.0) {
            out.push(format!(
                "geometry.eta_b = {} must lie in (0, 1]",
                self.eta_b
            ));
        }
        if !(self.exclusion_radius_m >= 0.0 && self.exclusion_radius_m.is_finite()) {
            out.push(format!(
                "geometry.exclusion_radius_m = {} must be finite and >= 0",
                self.exclusion_radius_m
            ));
        }
        out
    }

    /// Small-angle exclusion angle `r_E / d_B`.
    pub fn exclusion_angle(&self) -> f64 {
        self.exclusion_radius_m / self.dist_bob_m
    }

    pub fn beam(&self) -> BeamModel {
        BeamModel {
            divergence_full_angle_rad: self.divergence_full_angle_rad,
        }
    }

    pub fn with_exclusion_radius(self, exclusion_radius_m: f64) -> Self {
        Self {
            exclusion_radius_m,
            ..self
        }
    }

    pub fn with_distance(self, dist_m: f64) -> Self {
        Self {
            dist_bob_m: dist_m,
            dist_eve_m: dist_m,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamModel {
    pub divergence_full_angle_rad: f64,
}

impl BeamModel {
    /// `1/e²` intensity radius at range `distance_m`.
    pub fn radius_at(&self, distance_m: f64) -> f64 {
        0.5 * self.divergence_full_angle_rad * distance_m
    }
}

/// A collected fraction together with a flag recording whether the raw
/// footprint ratio exceeded one and was clamped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Collection {
    pub fraction: f64,
    pub clamped: bool,
}

/// Fraction of the beam collected by Bob, `D_B²/(θ_div²·d_B²)`, clamped to 1.
pub fn bob_free_space(geom: &LinkGeometry) -> Collection {
    let raw = footprint_ratio(
        geom.diam_bob_m,
        geom.divergence_full_angle_rad,
        geom.dist_bob_m,
    );
    Collection {
        fraction: raw.min(1.0),
        clamped: raw > 1.0,
    }
}

/// On-axis encircled Gaussian power `1 − e^{−2(D_B/2)²/w²}` for sensitivity
/// studies against [`bob_free_space`].
pub fn bob_free_space_gaussian(geom: &LinkGeometry) -> f64 {
    let w = geom.beam().radius_at(geom.dist_bob_m);
    let a = 0.5 * geom.diam_bob_m;
    -(-2.0 * a * a / (w * w)).exp_m1()
}

fn footprint_ratio(diameter: f64, divergence: f64, distance: f64) -> f64 {
    let footprint = divergence * distance;
    (diameter * diameter) / (footprint * footprint)
}

/// Gaussian intensity factor `e^{−2(2θ_E/θ_div)²}` at the exclusion angle.
fn exclusion_attenuation(geom: &LinkGeometry) -> f64 {
    let ratio = 2.0 * geom.exclusion_angle() / geom.divergence_full_angle_rad;
    (-2.0 * ratio * ratio).exp()
}

/// Fraction collected by an eavesdropper at the exclusion boundary.
pub fn eve_free_space(geom: &LinkGeometry) -> f64 {
    footprint_ratio(
        geom.diam_eve_m,
        geom.divergence_full_angle_rad,
        geom.dist_eve_m,
    ) * exclusion_attenuation(geom)
}

/// Eve-to-Bob efficiency ratio. Values at or above one are returned as is;
/// they mean no secrecy is possible and are rejected by the rate functions.
pub fn gamma_partial(geom: &LinkGeometry) -> f64 {
    let dist = geom.dist_bob_m / geom.dist_eve_m;
    let diam = geom.diam_eve_m / geom.diam_bob_m;
    dist * dist * diam * diam * exclusion_attenuation(geom) / geom.eta_b
}

/// Exclusion radius around Bob that holds a finite-aperture eavesdropper at
/// the same range to `gamma_target`. Inverse of [`gamma_partial`].
pub fn exclusion_radius_partial(
    gamma_target: f64,
    dist: f64,
    eta_b: f64,
    diam_ratio_eve_over_bob: f64,
    divergence: f64,
) -> Result<f64> {
    if !(gamma_target > 0.0) || !(eta_b > 0.0) || !(dist > 0.0) || !(divergence > 0.0) {
        return Err(Error::domain(
            "exclusion_radius_partial",
            format!(
                "need positive gamma, eta_b, distance and divergence; got {gamma_target}, {eta_b}, {dist}, {divergence}"
            ),
        ));
    }
    let arg = diam_ratio_eve_over_bob * diam_ratio_eve_over_bob / (gamma_target * eta_b);
    if !(arg >= 1.0) {
        return Err(Error::domain(
            "exclusion_radius_partial",
            format!("log argument {arg} < 1: the target is met without any exclusion"),
        ));
    }
    Ok(0.5 * divergence * dist * (0.5 * arg.ln()).sqrt())
}

/// Beam-width convention for Gaussian-beam formulas written in terms of the
/// full divergence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BeamConvention {
    /// `w = θ_div·d/2` with Bob's aperture radius `D_B/2`.
    #[default]
    Normalized,
    /// Exponents scaled by the full footprint `θ_div·d` instead of the beam
    /// radius, with `D_B/2` as the aperture term.
    AsPrinted,
}

/// Exclusion radius against an eavesdropper who collects all light outside
/// the exclusion cone: solves `e^{−2r²/w²} = γ·(1 − e^{−2a²/w²})`.
pub fn exclusion_radius_total(
    gamma_target: f64,
    dist: f64,
    diam_bob: f64,
    divergence: f64,
) -> Result<f64> {
    exclusion_radius_total_with(
        gamma_target,
        dist,
        diam_bob,
        divergence,
        BeamConvention::Normalized,
    )
}

pub fn exclusion_radius_total_with(
    gamma_target: f64,
    dist: f64,
    diam_bob: f64,
    divergence: f64,
    convention: BeamConvention,
) -> Result<f64> {
    if !(gamma_target > 0.0 && gamma_target < 1.0) {
        return Err(Error::domain(
            "exclusion_radius_total",
            format!("gamma = {gamma_target} must lie in (0, 1)"),
        ));
    }
    if !(dist > 0.0) || !(diam_bob > 0.0) || !(divergence > 0.0) {
        return Err(Error::domain(
            "exclusion_radius_total",
            format!("need positive distance, aperture and divergence; got {dist}, {diam_bob}, {divergence}"),
        ));
    }
    let w = match convention {
        BeamConvention::Normalized => 0.5 * divergence * dist,
        BeamConvention::AsPrinted => divergence * dist,
    };
    let a = 0.5 * diam_bob;
    let bob_share = -(-2.0 * a * a / (w * w)).exp_m1();
    let target = gamma_target * bob_share;
    let residual = |r: f64| (-2.0 * r * r / (w * w)).exp() - target;
    find_root(residual, Interval::new(0.0, 10.0 * w)?, 1e-13 * w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusRow {
    pub gamma: f64,
    pub partial_m: f64,
    pub total_m: f64,
}

/// Exclusion radii of both eavesdropper models over a grid of targets at the
/// geometry's Bob distance.
pub fn radius_vs_gamma_curve(geom: &LinkGeometry, gamma_grid: &[f64]) -> Result<Vec<RadiusRow>> {
    gamma_grid
        .iter()
        .map(|&gamma| {
            if !(gamma > 0.0 && gamma < 1.0) {
                return Err(Error::domain(
                    "radius_vs_gamma_curve",
                    format!("gamma = {gamma} must lie in (0, 1)"),
                ));
            }
            let partial_m = exclusion_radius_partial(
                gamma,
                geom.dist_bob_m,
                geom.eta_b,
                geom.diam_eve_m / geom.diam_bob_m,
                geom.divergence_full_angle_rad,
            )?;
            let total_m = exclusion_radius_total(
                gamma,
                geom.dist_bob_m,
                geom.diam_bob_m,
                geom.divergence_full_angle_rad,
            )?;
            Ok(RadiusRow {
                gamma,
                partial_m,
                total_m,
            })
        })
        .collect()
}
