//! Row-major parameter sweeps over one or two axes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detection::{distinguishability_angle, helstrom_error, BinaryCoherentEnsemble};
use crate::error::{Error, Result};
use crate::linkbudget::{exclusion_radius_partial, gamma_partial, LinkGeometry};
use crate::numerics::{try_maximize_1d, Interval};
use crate::receiver::DetectorModel;
use crate::secrecy::{
    devetak_winter_rate, optimize_dw_signal, optimize_signal, private_capacity,
    private_capacity_fixed, LOG10_PHOTON_SEARCH,
};
use crate::table::{Cell, Table};

use super::config::ScenarioConfig;

/// Environment variable capping the sweep worker count (`0` = automatic).
pub const THREADS_ENV: &str = "WIRETAP_SPACE_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    /// Mean photons per pulse at Bob's detector, `ημ`.
    ReceivedPhotons,
    Gamma,
    StrayMean,
    PDark,
    EtaOptical,
    PriorQ,
    /// Sets both Bob's and Eve's distance.
    DistBobM,
    ExclusionRadiusM,
    DiamEveM,
    EtaB,
}

impl Parameter {
    pub fn name(self) -> &'static str {
        match self {
            Parameter::ReceivedPhotons => "received_photons",
            Parameter::Gamma => "gamma",
            Parameter::StrayMean => "stray_mean",
            Parameter::PDark => "p_dark",
            Parameter::EtaOptical => "eta_optical",
            Parameter::PriorQ => "prior_q",
            Parameter::DistBobM => "dist_bob_m",
            Parameter::ExclusionRadiusM => "exclusion_radius_m",
            Parameter::DiamEveM => "diam_eve_m",
            Parameter::EtaB => "eta_b",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// Private capacity in bits per use.
    Capacity,
    /// Devetak–Winter rate in bits per use.
    DwRate,
    /// Capacity-optimal prior of the vacuum symbol.
    QOpt,
    /// Eve's Helstrom error.
    EpsilonStar,
    /// Angle between Eve's two states, radians.
    PhiAngle,
    /// Partial-collection exclusion radius in meters.
    ExclusionRadius,
}

impl Quantity {
    pub fn column(self) -> &'static str {
        match self {
            Quantity::Capacity => "capacity",
            Quantity::DwRate => "dw_rate",
            Quantity::QOpt => "q_opt",
            Quantity::EpsilonStar => "epsilon_star",
            Quantity::PhiAngle => "phi_angle_rad",
            Quantity::ExclusionRadius => "exclusion_radius_m",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub parameter: Parameter,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        if n < 2 {
            return vec![self.min; n];
        }
        let (lo, hi) = match self.scale {
            Scale::Linear => (self.min, self.max),
            Scale::Log => (self.min.log10(), self.max.log10()),
        };
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    return self.max;
                }
                let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                match self.scale {
                    Scale::Linear => x,
                    Scale::Log => 10f64.powf(x),
                }
            })
            .collect()
    }
}

fn default_quantities() -> Vec<Quantity> {
    vec![Quantity::Capacity]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axes: Vec<Axis>,
    #[serde(default = "default_quantities")]
    pub quantities: Vec<Quantity>,
}

impl SweepSpec {
    pub(crate) fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(1..=2).contains(&self.axes.len()) {
            out.push(format!(
                "sweep.axes has {} entries, need 1 or 2",
                self.axes.len()
            ));
        }
        if self.axes.len() == 2 && self.axes[0].parameter == self.axes[1].parameter {
            out.push(format!(
                "sweep.axes repeat the parameter {}",
                self.axes[0].parameter.name()
            ));
        }
        for (i, a) in self.axes.iter().enumerate() {
            if a.points < 2 {
                out.push(format!(
                    "sweep.axes[{i}].points = {} must be >= 2",
                    a.points
                ));
            }
            if !(a.min.is_finite() && a.max.is_finite() && a.min < a.max) {
                out.push(format!(
                    "sweep.axes[{i}] needs finite min < max, got [{}, {}]",
                    a.min, a.max
                ));
            }
            if a.scale == Scale::Log && !(a.min > 0.0) {
                out.push(format!(
                    "sweep.axes[{i}] is logarithmic but min = {} <= 0",
                    a.min
                ));
            }
        }
        if self.quantities.is_empty() {
            out.push("sweep.quantities is empty".into());
        }
        out
    }
}

/// Everything a single sweep cell needs.
#[derive(Debug, Clone, Copy)]
struct CellInputs {
    detector: DetectorModel,
    geometry: LinkGeometry,
    gamma: Option<f64>,
    received_photons: Option<f64>,
    prior_q: Option<f64>,
    gamma_target: f64,
}

impl CellInputs {
    fn from_config(config: &ScenarioConfig) -> Self {
        Self {
            detector: config.detector,
            geometry: config.link_geometry(),
            gamma: config.gamma,
            received_photons: config.received_photons,
            prior_q: config.prior_q,
            gamma_target: config.exclusion.gamma_target,
        }
    }

    fn set(&mut self, p: Parameter, v: f64) {
        match p {
            Parameter::ReceivedPhotons => self.received_photons = Some(v),
            Parameter::Gamma => self.gamma = Some(v),
            Parameter::StrayMean => self.detector.stray_mean = v,
            Parameter::PDark => self.detector.p_dark = v,
            Parameter::EtaOptical => self.detector.eta_optical = v,
            Parameter::PriorQ => self.prior_q = Some(v),
            Parameter::DistBobM => self.geometry = self.geometry.with_distance(v),
            Parameter::ExclusionRadiusM => self.geometry.exclusion_radius_m = v,
            Parameter::DiamEveM => self.geometry.diam_eve_m = v,
            Parameter::EtaB => self.geometry.eta_b = v,
        }
    }

    fn check(&self) -> Result<()> {
        let mut problems = self.detector.violations();
        problems.extend(self.geometry.violations());
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }

    fn capacity_gamma(&self) -> f64 {
        self.gamma.unwrap_or_else(|| gamma_partial(&self.geometry))
    }

    /// Received photons per pulse: the given value, or the capacity-optimal
    /// one (the search midpoint, 10^-0.5, when no secrecy is possible).
    fn operating_photons(&self) -> Result<f64> {
        let gamma = self.capacity_gamma();
        match self.received_photons {
            Some(n) => Ok(n),
            None if gamma >= 1.0 => {
                Ok(10f64.powf(0.5 * (LOG10_PHOTON_SEARCH.0 + LOG10_PHOTON_SEARCH.1)))
            }
            None => Ok(optimize_signal(&self.detector, gamma)?.received_mean_photons),
        }
    }

    /// With `γ ≥ 1` Bob's channel is a degraded copy of Eve's, so both
    /// secrecy rates vanish and no prior is optimal (`q_opt` is NaN).
    fn evaluate(&self, q: Quantity) -> Result<f64> {
        let det = &self.detector;
        let gamma = self.capacity_gamma();
        if gamma >= 1.0 {
            match q {
                Quantity::Capacity | Quantity::DwRate => return Ok(0.0),
                Quantity::QOpt => return Ok(f64::NAN),
                _ => {}
            }
        }
        match q {
            Quantity::Capacity => match (self.received_photons, self.prior_q) {
                (Some(n), Some(prior)) => {
                    Ok(private_capacity_fixed(det, n, gamma, prior)?.private_capacity)
                }
                (Some(n), None) => Ok(private_capacity(det, n, gamma)?.private_capacity),
                (None, None) => Ok(optimize_signal(det, gamma)?.private_capacity),
                (None, Some(prior)) => {
                    let domain = Interval::new(LOG10_PHOTON_SEARCH.0, LOG10_PHOTON_SEARCH.1)?;
                    let best = try_maximize_1d(
                        |log_n| {
                            private_capacity_fixed(det, 10f64.powf(log_n), gamma, prior)
                                .map(|p| p.unclipped_capacity())
                        },
                        domain,
                        1e-4,
                    )?;
                    Ok(best.max.max(0.0))
                }
            },
            Quantity::DwRate => {
                let prior = self.prior_q.unwrap_or(0.5);
                match self.received_photons {
                    Some(n) => devetak_winter_rate(det, n, gamma, prior),
                    None => Ok(optimize_dw_signal(det, gamma, prior)?.1),
                }
            }
            Quantity::QOpt => match self.received_photons {
                Some(n) => Ok(private_capacity(det, n, gamma)?.q),
                None => Ok(optimize_signal(det, gamma)?.q),
            },
            Quantity::EpsilonStar => {
                let n = self.operating_photons()?;
                let ens = BinaryCoherentEnsemble::new(gamma * n, self.prior_q.unwrap_or(0.5))?;
                Ok(helstrom_error(&ens))
            }
            Quantity::PhiAngle => distinguishability_angle(gamma * self.operating_photons()?),
            Quantity::ExclusionRadius => {
                let target = self.gamma.unwrap_or(self.gamma_target);
                let g = &self.geometry;
                exclusion_radius_partial(
                    target,
                    g.dist_bob_m,
                    g.eta_b,
                    g.diam_eve_m / g.diam_bob_m,
                    g.divergence_full_angle_rad,
                )
            }
        }
    }
}

/// Worker pool sized by [`THREADS_ENV`].
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(s) => s.trim().parse::<usize>().map_err(|_| {
            Error::Validation(vec![format!(
                "{THREADS_ENV} = {s:?} is not a non-negative integer"
            )])
        })?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Io(e.to_string()))
}

/// Evaluates the config's own sweep block.
pub fn sweep(config: &ScenarioConfig) -> Result<Table> {
    let spec = config
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Validation(vec!["config has no sweep block".into()]))?;
    sweep_with(config, spec)
}

/// Evaluates `spec` on top of `config`. Cells run in parallel, rows come out
/// with the last axis varying fastest.
pub fn sweep_with(config: &ScenarioConfig, spec: &SweepSpec) -> Result<Table> {
    let problems = spec.violations();
    if !problems.is_empty() {
        return Err(Error::Validation(problems));
    }
    let base = CellInputs::from_config(config);
    let grids: Vec<Vec<f64>> = spec.axes.iter().map(Axis::values).collect();
    let mut cells: Vec<Vec<f64>> = vec![Vec::new()];
    for grid in &grids {
        cells = cells
            .into_iter()
            .flat_map(|prefix| {
                grid.iter().map(move |&v| {
                    let mut c = prefix.clone();
                    c.push(v);
                    c
                })
            })
            .collect();
    }

    let eval_cell = |coords: &Vec<f64>| -> Result<Vec<Cell>> {
        let mut inputs = base;
        for (axis, &v) in spec.axes.iter().zip(coords) {
            inputs.set(axis.parameter, v);
        }
        inputs.check()?;
        let mut row: Vec<Cell> = coords.iter().map(|&v| Cell::Num(v)).collect();
        for &q in &spec.quantities {
            row.push(Cell::Num(inputs.evaluate(q)?));
        }
        Ok(row)
    };
    let rows =
        thread_pool()?.install(|| cells.par_iter().map(eval_cell).collect::<Result<Vec<_>>>())?;

    let mut table = Table::new(
        spec.axes
            .iter()
            .map(|a| a.parameter.name())
            .chain(spec.quantities.iter().map(|q| q.column())),
    );
    table.rows = rows;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axis(parameter: Parameter, min: f64, max: f64, points: usize, scale: Scale) -> Axis {
        Axis {
            parameter,
            min,
            max,
            points,
            scale,
        }
    }

    #[test]
    fn axis_values() {
        let a = axis(Parameter::Gamma, 0.1, 0.5, 5, Scale::Linear).values();
        assert_eq!(a.len(), 5);
        assert!((a[2] - 0.3).abs() < 1e-15);
        let l = axis(Parameter::ReceivedPhotons, 0.01, 100.0, 5, Scale::Log).values();
        assert!((l[1] - 0.1).abs() < 1e-15 && (l[2] - 1.0).abs() < 1e-14);
        assert_eq!(l[4], 100.0);
    }

    #[test]
    fn spec_validation() {
        let bad = SweepSpec {
            axes: vec![
                axis(Parameter::Gamma, 0.5, 0.1, 1, Scale::Log),
                axis(Parameter::Gamma, -1.0, 1.0, 3, Scale::Log),
            ],
            quantities: vec![],
        };
        let v = bad.violations();
        assert_eq!(v.len(), 5, "{v:?}");
        let three = SweepSpec {
            axes: vec![axis(Parameter::Gamma, 0.1, 0.2, 2, Scale::Linear); 3],
            quantities: default_quantities(),
        };
        assert!(!three.violations().is_empty());
    }

    #[test]
    fn log_photon_curve_peaks_at_068() {
        let cfg = ScenarioConfig {
            gamma: Some(0.1),
            prior_q: Some(0.5),
            ..ScenarioConfig::default()
        };
        let spec = SweepSpec {
            axes: vec![axis(Parameter::ReceivedPhotons, 0.01, 20.0, 64, Scale::Log)],
            quantities: vec![Quantity::Capacity],
        };
        let t = sweep_with(&cfg, &spec).unwrap();
        assert_eq!(t.columns, ["received_photons", "capacity"]);
        let peak = t
            .column("capacity")
            .unwrap()
            .into_iter()
            .fold(0.0, f64::max);
        assert!((peak - 0.68).abs() < 0.02, "{peak}");
    }

    #[test]
    fn two_axis_order_and_determinism() {
        let cfg = ScenarioConfig {
            gamma: Some(0.1),
            ..ScenarioConfig::default()
        };
        let spec = SweepSpec {
            axes: vec![
                axis(Parameter::ReceivedPhotons, 1.0, 8.0, 4, Scale::Linear),
                axis(Parameter::StrayMean, 1e-6, 1e-2, 3, Scale::Log),
            ],
            quantities: vec![Quantity::Capacity, Quantity::QOpt, Quantity::EpsilonStar],
        };
        let a = sweep_with(&cfg, &spec).unwrap();
        let b = sweep_with(&cfg, &spec).unwrap();
        assert_eq!(a.to_csv_string(), b.to_csv_string());
        assert_eq!(a.rows.len(), 12);
        let n = a.column("received_photons").unwrap();
        let d = a.column("stray_mean").unwrap();
        assert_eq!((n[0], n[2], n[3]), (1.0, 1.0, 1.0 + 7.0 / 3.0));
        assert!((d[1] - 1e-4).abs() < 1e-18);
        for q in a.column("q_opt").unwrap() {
            assert!((0.4..=0.6).contains(&q), "{q}");
        }
    }

    #[test]
    fn every_quantity_evaluates() {
        let cfg = ScenarioConfig::default();
        let spec = SweepSpec {
            axes: vec![axis(Parameter::DistBobM, 1.2e6, 3.6e7, 3, Scale::Log)],
            quantities: vec![
                Quantity::Capacity,
                Quantity::DwRate,
                Quantity::QOpt,
                Quantity::EpsilonStar,
                Quantity::PhiAngle,
                Quantity::ExclusionRadius,
            ],
        };
        let t = sweep_with(&cfg, &spec).unwrap();
        let r = t.column("exclusion_radius_m").unwrap();
        assert!((r[0] - 12.2).abs() < 0.6, "{}", r[0]);
        assert!(r[0] < r[1] && r[1] < r[2]);
        for v in t.rows[0].iter().map(|c| match c {
            Cell::Num(v) => *v,
            Cell::Text(_) => panic!(),
        }) {
            assert!(v.is_finite());
        }
        // A fixed 12.5 m exclusion radius leaves Eve far ahead at longer range.
        let cap = t.column("capacity").unwrap();
        assert!(cap[0] > 0.5 && cap[1] == 0.0 && cap[2] == 0.0);
        assert!(t.column("q_opt").unwrap()[2].is_nan());
    }

    #[test]
    fn invalid_cell_stops_the_sweep() {
        let spec = SweepSpec {
            axes: vec![axis(Parameter::PDark, 0.5, 1.5, 3, Scale::Linear)],
            quantities: default_quantities(),
        };
        let cfg = ScenarioConfig {
            gamma: Some(0.1),
            received_photons: Some(4.0),
            ..ScenarioConfig::default()
        };
        assert!(matches!(sweep_with(&cfg, &spec), Err(Error::Validation(_))));
        assert!(sweep(&cfg).is_err());
    }
}
