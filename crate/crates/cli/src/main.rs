//! `wiretap-space` command-line front end.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wiretap_space::linkbudget::{
    bob_free_space, bob_free_space_gaussian, eve_free_space, exclusion_radius_partial,
    exclusion_radius_total_with, gamma_partial, radius_vs_gamma_curve,
};
use wiretap_space::orbitsim::{alignment_periods, integrated_gamma, required_orbital_exclusion};
use wiretap_space::scenario_io::{
    emit_table1, load_config, preset, report_table, sweep_with, Axis, Parameter, Quantity, Scale,
    ScenarioConfig, SweepSpec,
};
use wiretap_space::secrecy::{
    fraction_to_db, optimize_signal, private_capacity, private_capacity_fixed, private_rate,
    SecrecyPoint,
};
use wiretap_space::table::{OutputFormat, Table};
use wiretap_space::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "wiretap-space",
    version,
    about = "Keyless private rates and exclusion radii for OOK satellite downlinks"
)]
struct Cli {
    /// JSON scenario file; omitted fields take the LEO defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Start from a named preset (leo, meo, geo) instead of a file.
    #[arg(long, global = true, conflicts_with = "config")]
    preset: Option<String>,

    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Private capacity, Devetak-Winter rate and private bit rate at one point.
    Capacity {
        #[arg(long)]
        gamma: Option<f64>,
        /// Received photons per pulse (optimised when omitted).
        #[arg(long)]
        photons: Option<f64>,
        /// Vacuum prior (optimised when omitted).
        #[arg(long)]
        q: Option<f64>,
    },
    /// Grid evaluation over one or two parameters.
    Sweep {
        /// `parameter:min:max:points[:log]`, repeat for a second axis.
        #[arg(long = "axis")]
        axes: Vec<String>,
        /// Output quantities (comma separated).
        #[arg(long, value_enum, value_delimiter = ',')]
        quantity: Vec<QuantityArg>,
    },
    /// Collection fractions and the degradation factor of the static geometry.
    Linkbudget,
    /// Partial- and total-collection exclusion radii.
    Exclusion {
        /// Comma-separated targets; defaults to the config's gamma target.
        #[arg(long, value_delimiter = ',')]
        gamma: Vec<f64>,
    },
    /// Pass-integrated degradation factor of the orbital scenario.
    Orbit {
        /// Emit the instantaneous time series instead of the summary.
        #[arg(long)]
        profile: bool,
        /// Also solve for the orbital offset reaching this gamma.
        #[arg(long)]
        target_gamma: Option<f64>,
    },
    /// LEO / MEO / GEO comparison table using the config's hardware.
    Table1,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum QuantityArg {
    Capacity,
    DwRate,
    QOpt,
    EpsilonStar,
    PhiAngle,
    ExclusionRadius,
}

impl From<QuantityArg> for Quantity {
    fn from(q: QuantityArg) -> Self {
        match q {
            QuantityArg::Capacity => Quantity::Capacity,
            QuantityArg::DwRate => Quantity::DwRate,
            QuantityArg::QOpt => Quantity::QOpt,
            QuantityArg::EpsilonStar => Quantity::EpsilonStar,
            QuantityArg::PhiAngle => Quantity::PhiAngle,
            QuantityArg::ExclusionRadius => Quantity::ExclusionRadius,
        }
    }
}

fn parse_axis(text: &str) -> Result<Axis> {
    let bad = |why: &str| Error::Validation(vec![format!("--axis {text:?}: {why}")]);
    let parts: Vec<&str> = text.split(':').collect();
    if !(4..=5).contains(&parts.len()) {
        return Err(bad("expected parameter:min:max:points[:log]"));
    }
    let parameter: Parameter = serde_json::from_value(serde_json::Value::String(parts[0].into()))
        .map_err(|_| bad("unknown parameter"))?;
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| bad("min and max must be numbers"))
    };
    let points = parts[3]
        .parse::<usize>()
        .map_err(|_| bad("points must be an integer"))?;
    let scale = match parts.get(4) {
        None | Some(&"linear") => Scale::Linear,
        Some(&"log") => Scale::Log,
        Some(_) => return Err(bad("scale must be linear or log")),
    };
    Ok(Axis {
        parameter,
        min: num(parts[1])?,
        max: num(parts[2])?,
        points,
        scale,
    })
}

fn load(cli: &Cli) -> Result<ScenarioConfig> {
    let config = match (&cli.config, &cli.preset) {
        (Some(path), _) => load_config(path)?,
        (None, Some(name)) => preset(name)
            .ok_or_else(|| {
                Error::Validation(vec![format!(
                    "unknown preset {name:?}; use leo, meo or geo"
                )])
            })?
            .resolved(),
        (None, None) => ScenarioConfig::default().resolved(),
    };
    config.validate()?;
    Ok(config)
}

fn point_table(p: &SecrecyPoint, rate: f64) -> Table {
    let mut t = Table::new([
        "gamma",
        "received_photons",
        "q",
        "info_bob",
        "info_eve_helstrom",
        "holevo_eve",
        "capacity",
        "dw_rate",
        "private_rate_bps",
    ]);
    t.push(vec![
        p.gamma.into(),
        p.received_mean_photons.into(),
        p.q.into(),
        p.info_bob.into(),
        p.info_eve_helstrom.into(),
        p.holevo_eve.into(),
        p.private_capacity.into(),
        p.dw_rate.into(),
        rate.into(),
    ]);
    t
}

fn run(cli: &Cli) -> Result<Table> {
    let mut config = load(cli)?;
    let table = match &cli.command {
        Command::Capacity { gamma, photons, q } => {
            config.gamma = gamma.or(config.gamma);
            config.received_photons = photons.or(config.received_photons);
            config.prior_q = q.or(config.prior_q);
            config.validate()?;
            echo(&config);
            let g = config.effective_gamma();
            let det = &config.detector;
            let point = match (config.received_photons, config.prior_q) {
                (Some(n), Some(q)) => private_capacity_fixed(det, n, g, q)?,
                (Some(n), None) => private_capacity(det, n, g)?,
                (None, _) => optimize_signal(det, g)?,
            };
            point_table(
                &point,
                private_rate(point.private_capacity, &config.clocked_link)?,
            )
        }
        Command::Sweep { axes, quantity } => {
            let mut spec = config.sweep.clone().unwrap_or(SweepSpec {
                axes: Vec::new(),
                quantities: vec![Quantity::Capacity],
            });
            if !axes.is_empty() {
                spec.axes = axes.iter().map(|a| parse_axis(a)).collect::<Result<_>>()?;
            }
            if !quantity.is_empty() {
                spec.quantities = quantity.iter().map(|&q| q.into()).collect();
            }
            config.sweep = Some(spec.clone());
            config.validate()?;
            echo(&config);
            sweep_with(&config, &spec)?
        }
        Command::Linkbudget => {
            echo(&config);
            let g = config.link_geometry();
            let bob = bob_free_space(&g);
            let mut t = Table::new([
                "dist_bob_m",
                "dist_eve_m",
                "eta_f_bob",
                "eta_f_bob_clamped",
                "eta_f_bob_gaussian",
                "eta_eve",
                "gamma",
                "channel_loss_db",
                "total_loss_db",
            ]);
            t.push(vec![
                g.dist_bob_m.into(),
                g.dist_eve_m.into(),
                bob.fraction.into(),
                (if bob.clamped { 1.0 } else { 0.0 }).into(),
                bob_free_space_gaussian(&g).into(),
                eve_free_space(&g).into(),
                gamma_partial(&g).into(),
                fraction_to_db(bob.fraction).into(),
                fraction_to_db(bob.fraction * g.eta_b).into(),
            ]);
            t
        }
        Command::Exclusion { gamma } => {
            echo(&config);
            let g = config.link_geometry();
            let targets = if gamma.is_empty() {
                vec![config.exclusion.gamma_target]
            } else {
                gamma.clone()
            };
            let mut t = Table::new(["gamma", "dist_bob_m", "partial_m", "total_m"]);
            if config.exclusion.convention == Default::default() {
                for row in radius_vs_gamma_curve(&g, &targets)? {
                    t.push(vec![
                        row.gamma.into(),
                        g.dist_bob_m.into(),
                        row.partial_m.into(),
                        row.total_m.into(),
                    ]);
                }
            } else {
                for &target in &targets {
                    let partial = exclusion_radius_partial(
                        target,
                        g.dist_bob_m,
                        g.eta_b,
                        g.diam_eve_m / g.diam_bob_m,
                        g.divergence_full_angle_rad,
                    )?;
                    let total = exclusion_radius_total_with(
                        target,
                        g.dist_bob_m,
                        g.diam_bob_m,
                        g.divergence_full_angle_rad,
                        config.exclusion.convention,
                    )?;
                    t.push(vec![
                        target.into(),
                        g.dist_bob_m.into(),
                        partial.into(),
                        total.into(),
                    ]);
                }
            }
            t
        }
        Command::Orbit {
            profile,
            target_gamma,
        } => {
            let scenario = config.orbit.unwrap_or_default();
            config.orbit = Some(scenario);
            config.validate()?;
            echo(&config);
            let k = &config.constants;
            let pass = integrated_gamma(&scenario, k)?;
            if pass.step_warning {
                eprintln!(
                    "warning: doubling the time step changes gamma by {:.2}%; refine orbit.time_grid",
                    100.0 * pass.step_change
                );
            }
            if *profile {
                pass.to_table()
            } else {
                let periods = alignment_periods(&scenario, k)?;
                let mut cols = vec![
                    "pass_half_duration_s",
                    "integrated_gamma",
                    "step_change",
                    "intercept_window_s",
                    "bob_revisit_s",
                    "eve_intercept_period_s",
                ];
                let mut row = vec![
                    pass.pass_half_duration.into(),
                    pass.integrated_gamma.into(),
                    pass.step_change.into(),
                    pass.intercept_window(1e-3).into(),
                    periods.bob_revisit_s.into(),
                    periods.eve_intercept_period_s.into(),
                ];
                if let Some(target) = target_gamma {
                    cols.push("target_gamma");
                    cols.push("required_offset_m");
                    row.push((*target).into());
                    row.push(required_orbital_exclusion(&scenario, k, *target)?.into());
                }
                let mut t = Table::new(cols);
                t.push(row);
                t
            }
        }
        Command::Table1 => {
            echo(&config);
            let configs: Vec<ScenarioConfig> = ["leo", "meo", "geo"]
                .iter()
                .map(|name| {
                    let p = preset(name).expect("known preset");
                    let mut c = config.clone();
                    c.label = p.label;
                    c.geometry.dist_bob_m = p.geometry.dist_bob_m;
                    c.geometry.dist_eve_m = Some(p.geometry.dist_bob_m);
                    c
                })
                .collect();
            report_table(&emit_table1(&configs)?)
        }
    };
    Ok(table)
}

fn echo(config: &ScenarioConfig) {
    eprintln!("resolved config:\n{}", config.to_json_pretty());
}

fn write_output(cli: &Cli, table: &Table) -> Result<()> {
    let format = match cli.format {
        Format::Csv => OutputFormat::Csv,
        Format::Json => OutputFormat::Json,
    };
    match &cli.out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Error::Io(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            table.write(format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            table.write(format, stdout.lock())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|table| write_output(&cli, &table)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                Error::Validation(problems) => {
                    eprintln!("error: invalid config");
                    for p in problems {
                        eprintln!("  - {p}");
                    }
                }
                other => eprintln!("error: {other}"),
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
