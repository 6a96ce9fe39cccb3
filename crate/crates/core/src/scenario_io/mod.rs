//! Configuration files, orbit-class presets, sweeps and report tables.

mod config;
mod report;
mod sweep;

pub use config::{
    load_config, parse_config, preset, ExclusionSettings, GeometryConfig, ScenarioConfig,
    PRESET_NAMES,
};
pub use report::{emit_table1, report_table, table1_presets, ReportRow};
pub use sweep::{
    sweep, sweep_with, thread_pool, Axis, Parameter, Quantity, Scale, SweepSpec, THREADS_ENV,
};
