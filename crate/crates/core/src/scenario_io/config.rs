//! JSON scenario configuration with Micius-like low-orbit defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linkbudget::{gamma_partial, BeamConvention, LinkGeometry};
use crate::orbitsim::{OrbitScenario, PhysicalConstants};
use crate::receiver::DetectorModel;
use crate::secrecy::ClockedLink;

use super::sweep::SweepSpec;

/// Downlink geometry as written in a config file. `dist_eve_m` falls back to
/// `dist_bob_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometryConfig {
    pub dist_bob_m: f64,
    pub dist_eve_m: Option<f64>,
    pub diam_bob_m: f64,
    pub diam_eve_m: f64,
    pub divergence_full_angle_rad: f64,
    pub eta_b: f64,
    pub exclusion_radius_m: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        let g = LinkGeometry::micius_leo();
        Self {
            dist_bob_m: g.dist_bob_m,
            dist_eve_m: None,
            diam_bob_m: g.diam_bob_m,
            diam_eve_m: g.diam_eve_m,
            divergence_full_angle_rad: g.divergence_full_angle_rad,
            eta_b: g.eta_b,
            exclusion_radius_m: g.exclusion_radius_m,
        }
    }
}

impl From<LinkGeometry> for GeometryConfig {
    fn from(g: LinkGeometry) -> Self {
        Self {
            dist_bob_m: g.dist_bob_m,
            dist_eve_m: (g.dist_eve_m != g.dist_bob_m).then_some(g.dist_eve_m),
            diam_bob_m: g.diam_bob_m,
            diam_eve_m: g.diam_eve_m,
            divergence_full_angle_rad: g.divergence_full_angle_rad,
            eta_b: g.eta_b,
            exclusion_radius_m: g.exclusion_radius_m,
        }
    }
}

impl GeometryConfig {
    pub fn link_geometry(&self) -> LinkGeometry {
        LinkGeometry {
            dist_bob_m: self.dist_bob_m,
            dist_eve_m: self.dist_eve_m.unwrap_or(self.dist_bob_m),
            diam_bob_m: self.diam_bob_m,
            diam_eve_m: self.diam_eve_m,
            divergence_full_angle_rad: self.divergence_full_angle_rad,
            eta_b: self.eta_b,
            exclusion_radius_m: self.exclusion_radius_m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExclusionSettings {
    /// Target degradation factor for the exclusion-radius solvers.
    pub gamma_target: f64,
    /// Beam convention of the total-collection solver.
    pub convention: BeamConvention,
}

impl Default for ExclusionSettings {
    fn default() -> Self {
        Self {
            gamma_target: 0.1,
            convention: BeamConvention::Normalized,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub label: String,
    pub detector: DetectorModel,
    pub geometry: GeometryConfig,
    pub clocked_link: ClockedLink,
    /// Explicit degradation factor; when absent it follows from the geometry.
    pub gamma: Option<f64>,
    /// Received photons per pulse; when absent it is optimised.
    pub received_photons: Option<f64>,
    /// Prior of the vacuum symbol; when absent it is optimised.
    pub prior_q: Option<f64>,
    pub exclusion: ExclusionSettings,
    pub orbit: Option<OrbitScenario>,
    pub constants: PhysicalConstants,
    pub sweep: Option<SweepSpec>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            label: "LEO".into(),
            detector: DetectorModel::default(),
            geometry: GeometryConfig::default(),
            clocked_link: ClockedLink::default(),
            gamma: None,
            received_photons: None,
            prior_q: None,
            exclusion: ExclusionSettings::default(),
            orbit: None,
            constants: PhysicalConstants::default(),
            sweep: None,
        }
    }
}

/// Names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 3] = ["leo", "meo", "geo"];

/// Orbit-class presets: 1200 km, 10 000 km and 36 000 km downlinks with the
/// same hardware.
pub fn preset(name: &str) -> Option<ScenarioConfig> {
    let (label, dist) = match name.to_ascii_lowercase().as_str() {
        "leo" => ("LEO", 1.2e6),
        "meo" => ("MEO", 1.0e7),
        "geo" => ("GEO", 3.6e7),
        _ => return None,
    };
    let geometry = LinkGeometry::micius_leo().with_distance(dist);
    Some(ScenarioConfig {
        label: label.into(),
        geometry: geometry.into(),
        ..ScenarioConfig::default()
    })
}

impl ScenarioConfig {
    /// Fills every derived default so the echoed config is self-contained.
    pub fn resolved(mut self) -> Self {
        self.geometry.dist_eve_m =
            Some(self.geometry.dist_eve_m.unwrap_or(self.geometry.dist_bob_m));
        self
    }

    pub fn link_geometry(&self) -> LinkGeometry {
        self.geometry.link_geometry()
    }

    /// The explicit `gamma`, or the geometric degradation factor.
    pub fn effective_gamma(&self) -> f64 {
        self.gamma
            .unwrap_or_else(|| gamma_partial(&self.link_geometry()))
    }

    pub fn validate(&self) -> Result<()> {
        let problems = self.violations();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = self.detector.violations();
        out.extend(self.link_geometry().violations());
        out.extend(self.clocked_link.violations());
        if let Some(g) = self.gamma {
            if !(g > 0.0 && g < 1.0) {
                out.push(format!("gamma = {g} must lie in (0, 1)"));
            }
        }
        if let Some(n) = self.received_photons {
            if !(n >= 0.0 && n.is_finite()) {
                out.push(format!("received_photons = {n} must be finite and >= 0"));
            }
        }
        if let Some(q) = self.prior_q {
            if !(0.0..=1.0).contains(&q) {
                out.push(format!("prior_q = {q} must lie in [0, 1]"));
            }
        }
        let target = self.exclusion.gamma_target;
        if !(target > 0.0 && target < 1.0) {
            out.push(format!(
                "exclusion.gamma_target = {target} must lie in (0, 1)"
            ));
        }
        if let Some(orbit) = &self.orbit {
            out.extend(orbit.violations());
        }
        out.extend(self.constants.violations());
        if let Some(sweep) = &self.sweep {
            out.extend(sweep.violations());
        }
        out
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }
}

/// Parses, resolves and validates a config document.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let mut de = serde_json::Deserializer::from_str(text);
    let parse_err = |path: String, e: serde_json::Error| Error::ConfigParse {
        path,
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    };
    let config: ScenarioConfig = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        parse_err(path, e.into_inner())
    })?;
    de.end().map_err(|e| parse_err(".".into(), e))?;
    let config = config.resolved();
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}
