//! Parameter sweeps.
//!
//! The `[sweep]` section:
//!
//! ```text
//! [sweep]
//! axis    = delta_r      # delta_r | charge | k_max | k_min | mass
//! min     = 10
//! max     = 1e5
//! count   = 50           # at least 2
//! spacing = log          # linear | log (log needs min > 0)
//! output  = out.csv      # relative to the config file; stdout if absent
//! format  = csv          # csv | json | both
//! mass    = 0            # fixed mass in units of the electron mass
//! ```
//!
//! For a `[scenario]`, `delta_r` rescales both charges' arms about their
//! midpoints so the probe arm takes the swept value, and `charge` sets
//! both `q_a` and `q_b`.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ghostsim::config::{ConfigFile, Section};
use ghostsim::integrals::{log_slope, SeparationGeometry};
use ghostsim::physics::Position3;
use ghostsim::quadrature::{CutoffPair, RadialModeGrid};
use rayon::prelude::*;
use serde::Serialize;

use crate::{as_config, read_config, CliError, Fixed, Result, ResultRecord, Setup};

pub const SWEEP_KEYS: &[&str] = &["axis", "min", "max", "count", "spacing", "output", "format", "mass"];

/// Environment variable capping the worker pool.
pub const THREADS_VAR: &str = "GHOSTSIM_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    DeltaR,
    Charge,
    KMax,
    KMin,
    Mass,
}

impl FromStr for Axis {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        Ok(match s {
            "delta_r" => Axis::DeltaR,
            "charge" => Axis::Charge,
            "k_max" => Axis::KMax,
            "k_min" => Axis::KMin,
            "mass" => Axis::Mass,
            _ => return Err(()),
        })
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::DeltaR => "delta_r",
            Axis::Charge => "charge",
            Axis::KMax => "k_max",
            Axis::KMin => "k_min",
            Axis::Mass => "mass",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
    pub setup: Setup,
    pub mass: f64,
    pub output: Option<PathBuf>,
    pub format: Format,
}

fn err_at(line: usize, msg: impl fmt::Display) -> CliError {
    CliError::Config(format!("configuration error at line {line}: {msg}"))
}

fn keyword<V: FromStr>(section: &Section, key: &str, default: &str, allowed: &str) -> Result<V> {
    let raw: String = as_config(section.get_or(key, default.to_string()))?;
    raw.parse().map_err(|_| {
        let line = section.entry(key).map_or(section.line, |e| e.line);
        err_at(line, format!("'{raw}' is not a valid {key}; expected {allowed}"))
    })
}

impl FromStr for Spacing {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        match s {
            "linear" => Ok(Spacing::Linear),
            "log" => Ok(Spacing::Log),
            _ => Err(()),
        }
    }
}

impl FromStr for Format {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "both" => Ok(Format::Both),
            _ => Err(()),
        }
    }
}

impl SweepSpec {
    /// Relative output paths resolve against `base`.
    pub fn from_config(cfg: &ConfigFile, base: &Path) -> Result<Self> {
        as_config(cfg.expect_sections(&["units", "geometry", "scenario", "sweep"]))?;
        let setup = Setup::from_config(cfg)?;
        let s = as_config(cfg.require("sweep"))?;
        as_config(s.expect_keys(SWEEP_KEYS, &[]))?;
        let line_of = |key: &str| s.entry(key).map_or(s.line, |e| e.line);

        let axis: Axis = keyword(s, "axis", "", "delta_r, charge, k_max, k_min or mass")?;
        let number = |key: &str| -> Result<f64> {
            let e = s.entry(key).ok_or_else(|| err_at(s.line, format!("[sweep] is missing required key '{key}'")))?;
            as_config(e.number())
        };
        let (min, max) = (number("min")?, number("max")?);
        let count: usize = as_config(s.require("count"))?;
        let spacing = keyword(s, "spacing", "linear", "linear or log")?;
        let format = keyword(s, "format", "csv", "csv, json or both")?;
        let mass = s.entry("mass").map(|e| as_config(e.number())).transpose()?.unwrap_or(0.0);
        let output = as_config(s.get::<String>("output"))?.map(|p| base.join(p));

        if count < 2 {
            return Err(err_at(line_of("count"), format!("count must be at least 2, got {count}")));
        }
        if !(min < max) {
            return Err(err_at(line_of("max"), format!("empty range: min = {min} is not below max = {max}")));
        }
        if spacing == Spacing::Log && !(min > 0.0) {
            return Err(err_at(line_of("min"), format!("log spacing needs min > 0, got {min}")));
        }
        if !(mass >= 0.0) {
            return Err(err_at(line_of("mass"), format!("mass must be nonnegative, got {mass}")));
        }
        if output.is_none() && format != Format::Csv {
            return Err(err_at(line_of("format"), "json output needs an output path"));
        }
        let spec = Self { axis, min, max, count, spacing, setup, mass, output, format };
        // endpoints bound every intermediate value on each axis
        for v in [min, max] {
            spec.point(v).map_err(|e| err_at(line_of("min").max(line_of("max")), e))?;
        }
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let cfg = read_config(path)?;
        Self::from_config(&cfg, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.min;
                }
                if i + 1 == self.count {
                    return self.max;
                }
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * t,
                    Spacing::Log => (self.min.ln() + (self.max / self.min).ln() * t).exp(),
                }
            })
            .collect()
    }

    /// Setup and mass with the swept parameter set to `value`.
    pub fn point(&self, value: f64) -> std::result::Result<(Setup, f64), String> {
        let mut setup = self.setup.clone();
        let mut mass = self.mass;
        let regrid = |grid: &RadialModeGrid<f64>, cut: ghostsim::Result<CutoffPair<f64>>| {
            cut.and_then(|c| RadialModeGrid::log_uniform(c, grid.len(), grid.scheme())).map_err(|e| e.to_string())
        };
        match (&mut setup.fixed, self.axis) {
            (_, Axis::Mass) => {
                if !(value >= 0.0) {
                    return Err(format!("mass must be nonnegative, got {value}"));
                }
                mass = value;
            }
            (Fixed::Geometry(g), Axis::DeltaR) => {
                if !(value >= 0.0) {
                    return Err(format!("delta_r must be nonnegative, got {value}"));
                }
                let d = g.geometry.r_b - g.geometry.r_a;
                let dir = if d.norm() > 0.0 { d.scale(1.0 / d.norm()) } else { Position3::new(1.0, 0.0, 0.0) };
                g.geometry = SeparationGeometry::new(g.geometry.r_a, g.geometry.r_a + dir.scale(value))
                    .map_err(|e| e.to_string())?;
            }
            (Fixed::Geometry(g), Axis::Charge) => g.q = value,
            (Fixed::Geometry(g), Axis::KMin) => g.grid = regrid(&g.grid, CutoffPair::new(value, g.cutoffs().k_max()))?,
            (Fixed::Geometry(g), Axis::KMax) => g.grid = regrid(&g.grid, CutoffPair::new(g.cutoffs().k_min(), value))?,
            (Fixed::Scenario(s), Axis::DeltaR) => {
                let arm = s.probe_arm();
                if arm == 0.0 {
                    return Err("scenario has a rejoined probe; delta_r cannot be swept".into());
                }
                *s = s.with_arm_scale(value / arm).map_err(|e| e.to_string())?;
            }
            (Fixed::Scenario(s), Axis::Charge) => {
                s.q_a = value;
                s.q_b = value;
            }
            (Fixed::Scenario(s), Axis::KMin) => {
                *s = CutoffPair::new(value, s.cutoffs.k_max())
                    .and_then(|c| s.with_cutoffs(c))
                    .map_err(|e| e.to_string())?
            }
            (Fixed::Scenario(s), Axis::KMax) => {
                *s = CutoffPair::new(s.cutoffs.k_min(), value)
                    .and_then(|c| s.with_cutoffs(c))
                    .map_err(|e| e.to_string())?
            }
        }
        Ok((setup, mass))
    }
}

/// Least-squares fit of `n` against `ln(delta_r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// `(2α/π)(q/e)²`, the single-charge asymptote; absent for scenarios,
    /// whose slope depends on how the inter-charge distances scale.
    pub expected: Option<f64>,
    pub relative_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub axis: Axis,
    pub points: usize,
    pub log_slope: Option<SlopeFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOutcome {
    pub summary: SweepSummary,
    pub records: Vec<ResultRecord>,
}

pub fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Worker count from [`THREADS_VAR`], defaulting to the available cores.
pub fn worker_count() -> Result<usize> {
    match std::env::var(THREADS_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Config(format!("{THREADS_VAR} must be a positive integer, got '{v}'"))),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Evaluates every point on a bounded pool; records keep input order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count()?)
        .build()
        .map_err(|e| CliError::Numeric(format!("cannot start worker pool: {e}")))?;
    let values = spec.values();
    let records = pool.install(|| {
        values
            .par_iter()
            .map(|&v| {
                let (setup, mass) = spec.point(v).map_err(CliError::Config)?;
                ResultRecord::evaluate(&setup, mass, v)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let log_slope = (spec.axis == Axis::DeltaR && spec.min > 0.0).then(|| {
        let x: Vec<f64> = records.iter().map(|r| r.delta_r.ln()).collect();
        let y: Vec<f64> = records.iter().map(|r| r.n).collect();
        let (slope, intercept) = least_squares(&x, &y);
        let expected = match &spec.setup.fixed {
            Fixed::Geometry(g) => Some(log_slope(g.q, &spec.setup.ctx)),
            Fixed::Scenario(_) => None,
        };
        SlopeFit { slope, intercept, expected, relative_error: expected.map(|e| (slope - e).abs() / e) }
    });
    Ok(SweepOutcome { summary: SweepSummary { axis: spec.axis, points: records.len(), log_slope }, records })
}

pub fn to_csv(records: &[ResultRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(ResultRecord::FIELDS).expect("in-memory write");
    for r in records {
        w.write_record(r.csv_fields()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

pub fn to_json(outcome: &SweepOutcome) -> String {
    let mut s = serde_json::to_string_pretty(outcome).expect("records serialize");
    s.push('\n');
    s
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io { action: "write", path: path.into(), source })
}

/// Writes the requested outputs and returns the paths written.
/// `both` writes `<output>.csv` and `<output>.json` side by side.
pub fn write_outputs(spec: &SweepSpec, outcome: &SweepOutcome) -> Result<Vec<PathBuf>> {
    let Some(path) = &spec.output else {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        lock.write_all(to_csv(&outcome.records).as_bytes()).map_err(|source| CliError::Io {
            action: "write",
            path: "<stdout>".into(),
            source,
        })?;
        return Ok(Vec::new());
    };
    let targets = match spec.format {
        Format::Csv => vec![(path.clone(), Format::Csv)],
        Format::Json => vec![(path.clone(), Format::Json)],
        Format::Both => vec![(path.with_extension("csv"), Format::Csv), (path.with_extension("json"), Format::Json)],
    };
    for (p, f) in &targets {
        let body = if *f == Format::Csv { to_csv(&outcome.records) } else { to_json(outcome) };
        write_file(p, &body)?;
    }
    Ok(targets.into_iter().map(|(p, _)| p).collect())
}
