//! Orbit-class comparison table: loss, PLOB rate, exclusion radius and
//! private rate per configuration.

use serde::Serialize;

use crate::error::Result;
use crate::linkbudget::exclusion_radius_partial;
use crate::secrecy::{fraction_to_db, optimize_signal, plob_bound, private_rate};
use crate::table::Table;

use super::config::{preset, ScenarioConfig, PRESET_NAMES};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub label: String,
    pub distance_m: f64,
    /// Geometric loss with a lossless receiver (`η_b = 1`), positive dB.
    pub channel_loss_db: f64,
    /// PLOB bound at the geometric loss times the symbol clock, bit/s.
    pub qkd_plob_rate_bps: f64,
    pub exclusion_radius_m: f64,
    pub gamma: f64,
    /// Signal-optimised private capacity at `gamma` times the clock, bit/s.
    pub private_rate_bps: f64,
}

/// One [`ReportRow`] per config, in input order.
pub fn emit_table1(configs: &[ScenarioConfig]) -> Result<Vec<ReportRow>> {
    configs.iter().map(report_row).collect()
}

fn report_row(config: &ScenarioConfig) -> Result<ReportRow> {
    config.validate()?;
    let g = config.link_geometry();
    let gamma = config.exclusion.gamma_target;
    let geometric = (g.diam_bob_m / (g.divergence_full_angle_rad * g.dist_bob_m))
        .powi(2)
        .min(1.0);
    let plob = plob_bound(geometric)?;
    let radius = exclusion_radius_partial(
        gamma,
        g.dist_bob_m,
        g.eta_b,
        g.diam_eve_m / g.diam_bob_m,
        g.divergence_full_angle_rad,
    )?;
    let capacity = optimize_signal(&config.detector, gamma)?.private_capacity;
    Ok(ReportRow {
        label: config.label.clone(),
        distance_m: g.dist_bob_m,
        channel_loss_db: fraction_to_db(geometric),
        qkd_plob_rate_bps: plob * config.clocked_link.clock_rate_hz,
        exclusion_radius_m: radius,
        gamma,
        private_rate_bps: private_rate(capacity, &config.clocked_link)?,
    })
}

/// The three orbit-class presets.
pub fn table1_presets() -> Vec<ScenarioConfig> {
    PRESET_NAMES
        .iter()
        .map(|n| preset(n).expect("preset names are valid"))
        .collect()
}

pub fn report_table(rows: &[ReportRow]) -> Table {
    let mut t = Table::new([
        "label",
        "distance_m",
        "channel_loss_db",
        "qkd_plob_rate_bps",
        "exclusion_radius_m",
        "gamma",
        "private_rate_bps",
    ]);
    for r in rows {
        t.push(vec![
            r.label.as_str().into(),
            r.distance_m.into(),
            r.channel_loss_db.into(),
            r.qkd_plob_rate_bps.into(),
            r.exclusion_radius_m.into(),
            r.gamma.into(),
            r.private_rate_bps.into(),
        ]);
    }
    t
}
