//! Equatorial pass model: Alice and Eve on coplanar circular orbits, Bob on
//! the rotating Earth's equator, all three aligned with the Earth's centre at
//! `t = 0`.
//!
//! Positions live in a 2-D inertial frame centred on the Earth. Eve sits
//! `eve_orbit_offset_m` below Alice, so she drifts slowly ahead of her and
//! crosses the downlink only near culmination.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linkbudget::BeamConvention;
use crate::numerics::{find_root, gaussian_disk_fraction, try_find_root, Interval, QuadratureSpec};
use crate::table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhysicalConstants {
    /// Gravitational parameter `GM` in m³/s².
    pub earth_mu: f64,
    pub earth_radius: f64,
    /// Sidereal rotation rate in rad/s.
    pub earth_angular_velocity: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            earth_mu: 3.986_004_418e14,
            earth_radius: 6.371e6,
            earth_angular_velocity: 7.292_115_9e-5,
        }
    }
}

impl PhysicalConstants {
    pub(crate) fn violations(&self) -> Vec<String> {
        [
            ("constants.earth_mu", self.earth_mu),
            ("constants.earth_radius", self.earth_radius),
            (
                "constants.earth_angular_velocity",
                self.earth_angular_velocity,
            ),
        ]
        .into_iter()
        .filter(|(_, v)| !(*v > 0.0 && v.is_finite()))
        .map(|(name, v)| format!("{name} = {v} must be positive and finite"))
        .collect()
    }
}

/// How Bob's instantaneous collection efficiency is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BobCollection {
    /// `η_b·D_B²/(θ_div·d_B)²`.
    #[default]
    Footprint,
    /// `η_b·(1 − e^{−2(D_B/2)²/w²})` with `w = θ_div·d_B/2`.
    Gaussian,
}

/// Two-zone time grid: a fine step within `fine_half_width_s` of culmination,
/// where Eve's intercept happens, and a coarse step elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeGrid {
    pub fine_step_s: f64,
    pub coarse_step_s: f64,
    pub fine_half_width_s: f64,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            fine_step_s: 1e-4,
            coarse_step_s: 1.0,
            fine_half_width_s: 5.0,
        }
    }
}

impl TimeGrid {
    fn coarsened(self) -> Self {
        Self {
            fine_step_s: 2.0 * self.fine_step_s,
            coarse_step_s: 2.0 * self.coarse_step_s,
            ..self
        }
    }

    /// Symmetric, strictly increasing samples covering `[−half, half]`.
    pub fn samples(&self, half: f64) -> Vec<f64> {
        if half <= 0.0 {
            return vec![0.0];
        }
        let fine_edge = self.fine_half_width_s.min(half);
        let n_fine = (fine_edge / self.fine_step_s).ceil().max(1.0) as usize;
        let mut positive: Vec<f64> = (1..=n_fine)
            .map(|k| fine_edge * k as f64 / n_fine as f64)
            .collect();
        if half > fine_edge {
            let span = half - fine_edge;
            let n_coarse = (span / self.coarse_step_s).ceil().max(1.0) as usize;
            positive.extend((1..=n_coarse).map(|k| fine_edge + span * k as f64 / n_coarse as f64));
        }
        let mut out: Vec<f64> = positive.iter().rev().map(|t| -t).collect();
        out.push(0.0);
        out.extend(positive);
        out
    }

    fn violations(&self) -> Vec<String> {
        [
            ("orbit.time_grid.fine_step_s", self.fine_step_s),
            ("orbit.time_grid.coarse_step_s", self.coarse_step_s),
            ("orbit.time_grid.fine_half_width_s", self.fine_half_width_s),
        ]
        .into_iter()
        .filter(|(_, v)| !(*v > 0.0 && v.is_finite()))
        .map(|(name, v)| format!("{name} = {v} must be positive and finite"))
        .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OrbitScenario {
    pub alice_altitude_m: f64,
    /// Radial separation of Eve's orbit below Alice's.
    pub eve_orbit_offset_m: f64,
    pub eve_telescope_diameter_m: f64,
    pub diam_bob_m: f64,
    pub eta_b: f64,
    pub divergence_full_angle_rad: f64,
    pub min_elevation_rad: f64,
    pub time_grid: TimeGrid,
    pub bob_collection: BobCollection,
    /// Beam radius seen by Eve: `θ_div·ℓ/2` (normalized) or `θ_div·ℓ`.
    pub eve_beam: BeamConvention,
}

impl Default for OrbitScenario {
    fn default() -> Self {
        Self {
            alice_altitude_m: 600e3,
            eve_orbit_offset_m: 16e3,
            eve_telescope_diameter_m: 2.0,
            diam_bob_m: 1.0,
            eta_b: 0.01,
            divergence_full_angle_rad: 10e-6,
            min_elevation_rad: 20f64.to_radians(),
            time_grid: TimeGrid::default(),
            bob_collection: BobCollection::default(),
            eve_beam: BeamConvention::default(),
        }
    }
}

impl OrbitScenario {
    pub fn with_offset(self, eve_orbit_offset_m: f64) -> Self {
        Self {
            eve_orbit_offset_m,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let problems = self.violations();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }

    pub(crate) fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.alice_altitude_m > 0.0 && self.alice_altitude_m.is_finite()) {
            out.push(format!(
                "orbit.alice_altitude_m = {} must be positive and finite",
                self.alice_altitude_m
            ));
        }
        if !(self.eve_orbit_offset_m > 0.0 && self.eve_orbit_offset_m < self.alice_altitude_m) {
            out.push(format!(
                "orbit.eve_orbit_offset_m = {} must lie in (0, alice_altitude_m)",
                self.eve_orbit_offset_m
            ));
        }
        for (name, v) in [
            (
                "orbit.eve_telescope_diameter_m",
                self.eve_telescope_diameter_m,
            ),
            ("orbit.diam_bob_m", self.diam_bob_m),
            (
                "orbit.divergence_full_angle_rad",
                self.divergence_full_angle_rad,
            ),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                out.push(format!("{name} = {v} must be positive and finite"));
            }
        }
        if !(self.eta_b > 0.0 && self.eta_b <= 1.0) {
            out.push(format!("orbit.eta_b = {} must lie in (0, 1]", self.eta_b));
        }
        if !(self.min_elevation_rad > 0.0 && self.min_elevation_rad <= FRAC_PI_2) {
            out.push(format!(
                "orbit.min_elevation_rad = {} must lie in (0, pi/2]",
                self.min_elevation_rad
            ));
        }
        out.extend(self.time_grid.violations());
        out
    }
}

/// Circular-orbit angular rate `√(GM/a³)`.
pub fn angular_velocity(orbit_radius: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(orbit_radius > constants.earth_radius) {
        return Err(Error::domain(
            "angular_velocity",
            format!(
                "orbit radius {orbit_radius} m is not above the Earth radius {} m",
                constants.earth_radius
            ),
        ));
    }
    Ok((constants.earth_mu / orbit_radius.powi(3)).sqrt())
}

/// Elevation of a satellite at orbit radius `a` seen from the ground when the
/// two are separated by central angle `psi`.
pub fn elevation_from_central_angle(a: f64, earth_radius: f64, psi: f64) -> f64 {
    let slant = (earth_radius * earth_radius + a * a - 2.0 * earth_radius * a * psi.cos()).sqrt();
    ((a * psi.cos() - earth_radius) / slant)
        .clamp(-1.0, 1.0)
        .asin()
}

fn alice_radius(scenario: &OrbitScenario, constants: &PhysicalConstants) -> f64 {
    constants.earth_radius + scenario.alice_altitude_m
}

fn relative_rate(scenario: &OrbitScenario, constants: &PhysicalConstants) -> Result<f64> {
    let a = alice_radius(scenario, constants);
    let rel = angular_velocity(a, constants)? - constants.earth_angular_velocity;
    if !(rel > 0.0) {
        return Err(Error::NoVisibility(format!(
            "Alice at {a} m does not overtake the ground station (relative rate {rel} rad/s)"
        )));
    }
    Ok(rel)
}

/// Half-duration `T` of the pass: time from culmination until Alice drops to
/// the minimum elevation.
pub fn pass_window(scenario: &OrbitScenario, constants: &PhysicalConstants) -> Result<f64> {
    scenario.validate()?;
    let rel = relative_rate(scenario, constants)?;
    if scenario.min_elevation_rad >= FRAC_PI_2 {
        return Ok(0.0);
    }
    let a = alice_radius(scenario, constants);
    let r = constants.earth_radius;
    let horizon = (r / a).acos();
    let psi = find_root(
        |psi| elevation_from_central_angle(a, r, psi) - scenario.min_elevation_rad,
        Interval::new(0.0, horizon)?,
        1e-14,
    )?;
    Ok(psi / rel)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InstantSample {
    pub t_s: f64,
    pub eta_bob: f64,
    pub eta_eve: f64,
    pub d_bob_m: f64,
    /// Alice–Eve distance.
    pub d_eve_m: f64,
    /// Distance of Eve's centre from the Alice→Bob beam axis.
    pub offset_m: f64,
    pub elevation_rad: f64,
}

struct Kinematics {
    earth_radius: f64,
    omega_earth: f64,
    a_alice: f64,
    omega_alice: f64,
    a_eve: f64,
    omega_eve: f64,
}

impl Kinematics {
    fn new(scenario: &OrbitScenario, constants: &PhysicalConstants) -> Result<Self> {
        let a_alice = alice_radius(scenario, constants);
        let a_eve = a_alice - scenario.eve_orbit_offset_m;
        Ok(Self {
            earth_radius: constants.earth_radius,
            omega_earth: constants.earth_angular_velocity,
            a_alice,
            omega_alice: angular_velocity(a_alice, constants)?,
            a_eve,
            omega_eve: angular_velocity(a_eve, constants)?,
        })
    }

    fn sample(
        &self,
        scenario: &OrbitScenario,
        t: f64,
        spec: QuadratureSpec,
    ) -> Result<InstantSample> {
        let polar = |r: f64, angle: f64| [r * angle.cos(), r * angle.sin()];
        let bob = polar(self.earth_radius, self.omega_earth * t);
        let alice = polar(self.a_alice, self.omega_alice * t);
        let eve = polar(self.a_eve, self.omega_eve * t);

        let to_bob = [bob[0] - alice[0], bob[1] - alice[1]];
        let to_eve = [eve[0] - alice[0], eve[1] - alice[1]];
        let d_bob = to_bob[0].hypot(to_bob[1]);
        let d_eve = to_eve[0].hypot(to_eve[1]);
        let axis = [to_bob[0] / d_bob, to_bob[1] / d_bob];
        let along = to_eve[0] * axis[0] + to_eve[1] * axis[1];
        let offset = (to_eve[0] * axis[1] - to_eve[1] * axis[0]).abs();

        let theta = scenario.divergence_full_angle_rad;
        let eta_bob = match scenario.bob_collection {
            BobCollection::Footprint => {
                (scenario.eta_b * (scenario.diam_bob_m / (theta * d_bob)).powi(2)).min(1.0)
            }
            BobCollection::Gaussian => {
                let w = 0.5 * theta * d_bob;
                let a = 0.5 * scenario.diam_bob_m;
                -scenario.eta_b * (-2.0 * a * a / (w * w)).exp_m1()
            }
        };
        let eta_eve = if along > 0.0 && along < d_bob {
            let w = match scenario.eve_beam {
                BeamConvention::Normalized => 0.5 * theta * along,
                BeamConvention::AsPrinted => theta * along,
            };
            gaussian_disk_fraction(w, offset, 0.5 * scenario.eve_telescope_diameter_m, spec)?
        } else {
            0.0
        };
        let psi = (self.omega_alice - self.omega_earth) * t;
        Ok(InstantSample {
            t_s: t,
            eta_bob,
            eta_eve,
            d_bob_m: d_bob,
            d_eve_m: d_eve,
            offset_m: offset,
            elevation_rad: elevation_from_central_angle(self.a_alice, self.earth_radius, psi),
        })
    }
}

/// Efficiencies and geometry at time `t` relative to culmination.
pub fn instantaneous_efficiencies(
    scenario: &OrbitScenario,
    constants: &PhysicalConstants,
    t: f64,
) -> Result<InstantSample> {
    scenario.validate()?;
    Kinematics::new(scenario, constants)?.sample(scenario, t, QuadratureSpec::default())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PassProfile {
    pub samples: Vec<InstantSample>,
    pub pass_half_duration: f64,
    pub integrated_gamma: f64,
    /// Relative change of `integrated_gamma` when both steps are doubled.
    pub step_change: f64,
    /// Set when `step_change` exceeds 1 %.
    pub step_warning: bool,
}

impl PassProfile {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t_s).collect()
    }

    pub fn eta_bob(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.eta_bob).collect()
    }

    pub fn eta_eve(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.eta_eve).collect()
    }

    /// Span between the first and last sample with `eta_eve > threshold`, or
    /// zero if Eve never exceeds it.
    pub fn intercept_window(&self, threshold: f64) -> f64 {
        let first = self.samples.iter().find(|s| s.eta_eve > threshold);
        let last = self.samples.iter().rev().find(|s| s.eta_eve > threshold);
        match (first, last) {
            (Some(a), Some(b)) => b.t_s - a.t_s,
            _ => 0.0,
        }
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new([
            "t_s", "eta_bob", "eta_eve", "d_bob_m", "d_eve_m", "offset_m",
        ]);
        for s in &self.samples {
            t.push(vec![
                s.t_s.into(),
                s.eta_bob.into(),
                s.eta_eve.into(),
                s.d_bob_m.into(),
                s.d_eve_m.into(),
                s.offset_m.into(),
            ]);
        }
        t
    }
}

fn trapezoid(t: &[f64], y: &[f64]) -> f64 {
    t.windows(2)
        .zip(y.windows(2))
        .map(|(tw, yw)| 0.5 * (tw[1] - tw[0]) * (yw[0] + yw[1]))
        .sum()
}

fn pass_samples(
    scenario: &OrbitScenario,
    kin: &Kinematics,
    half: f64,
    grid: TimeGrid,
) -> Result<Vec<InstantSample>> {
    let spec = QuadratureSpec::default();
    grid.samples(half)
        .into_iter()
        .map(|t| kin.sample(scenario, t, spec))
        .collect()
}

fn gamma_of(samples: &[InstantSample]) -> Result<f64> {
    let t: Vec<f64> = samples.iter().map(|s| s.t_s).collect();
    let eb: Vec<f64> = samples.iter().map(|s| s.eta_bob).collect();
    let ee: Vec<f64> = samples.iter().map(|s| s.eta_eve).collect();
    let bob = trapezoid(&t, &eb);
    if !(bob > 0.0) {
        return Err(Error::NoVisibility(
            "pass has zero duration, Bob collects nothing".into(),
        ));
    }
    Ok(trapezoid(&t, &ee) / bob)
}

/// Ratio of Eve's to Bob's efficiency, each integrated over the pass.
pub fn integrated_gamma(
    scenario: &OrbitScenario,
    constants: &PhysicalConstants,
) -> Result<PassProfile> {
    let half = pass_window(scenario, constants)?;
    let kin = Kinematics::new(scenario, constants)?;
    let samples = pass_samples(scenario, &kin, half, scenario.time_grid)?;
    let gamma = gamma_of(&samples)?;
    let coarse = gamma_of(&pass_samples(
        scenario,
        &kin,
        half,
        scenario.time_grid.coarsened(),
    )?)?;
    let step_change = if gamma > 0.0 {
        ((coarse - gamma) / gamma).abs()
    } else {
        coarse.abs()
    };
    Ok(PassProfile {
        samples,
        pass_half_duration: half,
        integrated_gamma: gamma,
        step_change,
        step_warning: step_change > 0.01,
    })
}

fn gamma_only(scenario: &OrbitScenario, constants: &PhysicalConstants) -> Result<f64> {
    scenario.validate()?;
    let half = pass_window(scenario, constants)?;
    let kin = Kinematics::new(scenario, constants)?;
    gamma_of(&pass_samples(scenario, &kin, half, scenario.time_grid)?)
}

/// Orbital offset of Eve below Alice at which the pass-integrated `γ` equals
/// `gamma_target`, searched over 1–200 km.
pub fn required_orbital_exclusion(
    scenario: &OrbitScenario,
    constants: &PhysicalConstants,
    gamma_target: f64,
) -> Result<f64> {
    if !(gamma_target > 0.0 && gamma_target < 1.0) {
        return Err(Error::domain(
            "required_orbital_exclusion",
            format!("gamma = {gamma_target} must lie in (0, 1)"),
        ));
    }
    let hi = 200e3_f64.min(0.999 * scenario.alice_altitude_m);
    let bracket = Interval::new(1e3, hi)?;
    try_find_root(
        |offset| Ok(gamma_only(&scenario.with_offset(offset), constants)? - gamma_target),
        bracket,
        1e-2,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlignmentPeriods {
    pub bob_revisit_s: f64,
    pub eve_intercept_period_s: f64,
}

/// Synodic periods of Alice over Bob and of Eve under Alice.
pub fn alignment_periods(
    scenario: &OrbitScenario,
    constants: &PhysicalConstants,
) -> Result<AlignmentPeriods> {
    scenario.validate()?;
    let kin = Kinematics::new(scenario, constants)?;
    let synodic = |fast: f64, slow: f64, what: &str| {
        let d = (fast - slow).abs();
        if d == 0.0 {
            Err(Error::Degenerate(format!("{what}: equal angular rates")))
        } else {
            Ok(TAU / d)
        }
    };
    Ok(AlignmentPeriods {
        bob_revisit_s: synodic(kin.omega_alice, kin.omega_earth, "Alice over Bob")?,
        eve_intercept_period_s: synodic(kin.omega_eve, kin.omega_alice, "Eve under Alice")?,
    })
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}
