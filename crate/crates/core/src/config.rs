//! Plain-text configuration files.
//!
//! Grammar (INI style, one item per line):
//!
//! ```text
//! file    := { line }
//! line    := blank | comment | header | entry
//! comment := ('#' | ';') any-text
//! header  := '[' name ']'
//! entry   := key '=' value [ comment ]
//! value   := number | number number number | word
//! ```
//!
//! Every entry belongs to the most recent header; entries before the first
//! header are rejected. Unknown sections and keys are errors, and a key may
//! appear once per section except where a section documents repetition
//! (`charge` in `[charges]`). Sections understood by this crate:
//!
//! * `[units]`: `alpha`, `hbar`, `c`, `eps0`, `r0`, `planck_mass`.
//! * `[charges]`: `label`, repeated `charge = q x y z`.
//! * `[geometry]`: `r_a`, `r_b` (vectors in `r0`), `q` (in `e`), plus the
//!   grid keys `k_min`, `k_max`, `nodes`, `scheme`, `points_per_panel`.
//! * `[scenario]`: `r_al`, `r_ar`, `r_bl`, `r_br`, `q_a`, `q_b`, `time`,
//!   `partition_normal`, `partition_offset`, plus the grid keys.

use std::collections::BTreeSet;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::integrals::SeparationGeometry;
use crate::physics::{ChargeConfiguration, PhysicsContext, PointCharge, Position3, UnitSystem};
use crate::quadrature::{
    CutoffPair, QuadratureScheme, RadialModeGrid, DEFAULT_BOX_LENGTH, DEFAULT_NODE_COUNT, DEFAULT_POINTS_PER_PANEL,
};
use crate::scalar::Real;
use crate::tomography::{PartitionPlane, TomographyScenario};

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

/// Parsed but untyped configuration file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConfigFile {
    pub sections: Vec<Section>,
}

fn strip_comment(line: &str) -> &str {
    match line.find(['#', ';']) {
        Some(i) => &line[..i],
        None => line,
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: Vec<Section> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| Error::config_at(line_no, "unterminated section header"))?
                    .trim();
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(Error::config_at(line_no, format!("invalid section name '{name}'")));
                }
                if sections.iter().any(|s| s.name == name) {
                    return Err(Error::config_at(line_no, format!("duplicate section [{name}]")));
                }
                sections.push(Section { name: name.to_string(), line: line_no, entries: Vec::new() });
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::config_at(line_no, format!("expected 'key = value', got '{line}'")))?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() {
                return Err(Error::config_at(line_no, "empty key"));
            }
            if value.is_empty() {
                return Err(Error::config_at(line_no, format!("key '{key}' has no value")));
            }
            let section = sections
                .last_mut()
                .ok_or_else(|| Error::config_at(line_no, format!("key '{key}' appears before any [section]")))?;
            section.entries.push(Entry { key: key.to_string(), value: value.to_string(), line: line_no });
        }
        Ok(Self { sections })
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// Rejects sections not in `allowed`.
    pub fn expect_sections(&self, allowed: &[&str]) -> Result<()> {
        for s in &self.sections {
            if !allowed.contains(&s.name.as_str()) {
                return Err(Error::config_at(
                    s.line,
                    format!("unknown section [{}]; expected one of {allowed:?}", s.name),
                ));
            }
        }
        Ok(())
    }

    pub fn require(&self, name: &str) -> Result<&Section> {
        self.section(name).ok_or_else(|| Error::config(format!("missing section [{name}]")))
    }
}

impl Section {
    /// Rejects unknown and duplicated keys; `repeatable` keys may recur.
    pub fn expect_keys(&self, allowed: &[&str], repeatable: &[&str]) -> Result<()> {
        let mut seen = BTreeSet::new();
        for e in &self.entries {
            if !allowed.contains(&e.key.as_str()) {
                return Err(Error::config_at(
                    e.line,
                    format!("unknown key '{}' in [{}]; expected one of {allowed:?}", e.key, self.name),
                ));
            }
            if !repeatable.contains(&e.key.as_str()) && !seen.insert(e.key.as_str()) {
                return Err(Error::config_at(e.line, format!("duplicate key '{}' in [{}]", e.key, self.name)));
            }
        }
        Ok(())
    }

    pub fn entry(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a Entry> + 'a {
        self.entries.iter().filter(move |e| e.key == key)
    }

    pub fn get<V: FromStr>(&self, key: &str) -> Result<Option<V>> {
        self.entry(key).map(|e| e.parse()).transpose()
    }

    pub fn get_or<V: FromStr>(&self, key: &str, default: V) -> Result<V> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn require<V: FromStr>(&self, key: &str) -> Result<V> {
        self.get(key)?
            .ok_or_else(|| Error::config_at(self.line, format!("[{}] is missing required key '{key}'", self.name)))
    }

    pub fn vector<T: Real>(&self, key: &str) -> Result<Option<Position3<T>>> {
        self.entry(key).map(|e| e.vector()).transpose()
    }

    pub fn require_vector<T: Real>(&self, key: &str) -> Result<Position3<T>> {
        self.vector(key)?
            .ok_or_else(|| Error::config_at(self.line, format!("[{}] is missing required key '{key}'", self.name)))
    }
}

impl Entry {
    pub fn parse<V: FromStr>(&self) -> Result<V> {
        self.value
            .parse()
            .map_err(|_| Error::config_at(self.line, format!("cannot parse '{}' for key '{}'", self.value, self.key)))
    }

    /// Whitespace-separated numbers.
    pub fn numbers<T: Real>(&self) -> Result<Vec<T>> {
        self.value
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().ok().filter(|x| x.is_finite()).map(T::lit).ok_or_else(|| {
                    Error::config_at(self.line, format!("'{tok}' in key '{}' is not a finite number", self.key))
                })
            })
            .collect()
    }

    pub fn vector<T: Real>(&self) -> Result<Position3<T>> {
        match self.numbers::<T>()?.as_slice() {
            &[x, y, z] => Ok(Position3::new(x, y, z)),
            other => {
                Err(Error::config_at(self.line, format!("key '{}' needs 3 numbers, got {}", self.key, other.len())))
            }
        }
    }

    pub fn number<T: Real>(&self) -> Result<T> {
        match self.numbers::<T>()?.as_slice() {
            &[x] => Ok(x),
            other => {
                Err(Error::config_at(self.line, format!("key '{}' needs 1 number, got {}", self.key, other.len())))
            }
        }
    }
}

fn real<T: Real>(section: &Section, key: &str) -> Result<Option<T>> {
    section.entry(key).map(|e| e.number()).transpose()
}

fn located<V>(section: &Section, key: &str, r: Result<V>) -> Result<V> {
    r.map_err(|err| match err {
        Error::Config { line: None, message } => {
            Error::Config { line: Some(section.entry(key).map_or(section.line, |e| e.line)), message }
        }
        other => other,
    })
}

pub const UNIT_KEYS: &[&str] = &["alpha", "hbar", "c", "eps0", "r0", "planck_mass"];
pub const GRID_KEYS: &[&str] = &["k_min", "k_max", "nodes", "scheme", "points_per_panel"];
pub const GEOMETRY_KEYS: &[&str] = &["r_a", "r_b", "q"];
pub const SCENARIO_KEYS: &[&str] =
    &["r_al", "r_ar", "r_bl", "r_br", "q_a", "q_b", "time", "partition_normal", "partition_offset"];

/// `[units]`; absent section means natural units.
pub fn parse_units<T: Real>(section: Option<&Section>) -> Result<PhysicsContext<T>> {
    let Some(s) = section else {
        return Ok(PhysicsContext::natural());
    };
    s.expect_keys(UNIT_KEYS, &[])?;
    let d = UnitSystem::<T>::default();
    let units = UnitSystem {
        alpha: real(s, "alpha")?.unwrap_or(d.alpha),
        hbar: real(s, "hbar")?.unwrap_or(d.hbar),
        c: real(s, "c")?.unwrap_or(d.c),
        eps0: real(s, "eps0")?.unwrap_or(d.eps0),
        r0: real(s, "r0")?.unwrap_or(d.r0),
        planck_mass: real(s, "planck_mass")?,
    };
    PhysicsContext::from_units(units).map_err(|e| match e {
        Error::Config { message, .. } => Error::config_at(s.line, message),
        other => other,
    })
}

/// `[charges]`.
pub fn parse_charges<T: Real>(section: &Section) -> Result<ChargeConfiguration<T>> {
    section.expect_keys(&["label", "charge"], &["charge"])?;
    let label: String = section.get_or("label", section.name.clone())?;
    let mut charges = Vec::new();
    for e in section.all("charge") {
        match e.numbers::<T>()?.as_slice() {
            &[q, x, y, z] => charges.push(PointCharge { position: Position3::new(x, y, z), q }),
            other => {
                return Err(Error::config_at(e.line, format!("charge needs 'q x y z', got {} numbers", other.len())))
            }
        }
    }
    located(section, "charge", ChargeConfiguration::new(label, charges))
}

/// Grid keys shared by `[geometry]` and `[scenario]`.
pub fn parse_grid<T: Real>(section: &Section) -> Result<RadialModeGrid<T>> {
    let k_min = real(section, "k_min")?.unwrap_or(T::lit(1.0 / DEFAULT_BOX_LENGTH));
    let k_max = real(section, "k_max")?.unwrap_or(T::one());
    let cutoffs = located(section, "k_min", CutoffPair::new(k_min, k_max))?;
    let nodes: usize = section.get_or("nodes", DEFAULT_NODE_COUNT)?;
    let ppp: usize = section.get_or("points_per_panel", DEFAULT_POINTS_PER_PANEL)?;
    let scheme = match section.get_or::<String>("scheme", "gauss-legendre".into())?.as_str() {
        "gauss-legendre" => QuadratureScheme::GaussLegendre { points_per_panel: ppp },
        "simpson" => QuadratureScheme::Simpson,
        other => {
            let line = section.entry("scheme").map_or(section.line, |e| e.line);
            return Err(Error::config_at(
                line,
                format!("unknown scheme '{other}'; expected gauss-legendre or simpson"),
            ));
        }
    };
    located(section, "nodes", RadialModeGrid::log_uniform(cutoffs, nodes, scheme))
}

/// Single superposed charge.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometrySpec<T> {
    pub geometry: SeparationGeometry<T>,
    pub q: T,
    pub grid: RadialModeGrid<T>,
}

impl<T: Real> GeometrySpec<T> {
    pub fn cutoffs(&self) -> CutoffPair<T> {
        self.grid.cutoffs()
    }
}

/// `[geometry]`.
pub fn parse_geometry<T: Real>(section: &Section) -> Result<GeometrySpec<T>> {
    let keys: Vec<&str> = GEOMETRY_KEYS.iter().chain(GRID_KEYS).copied().collect();
    section.expect_keys(&keys, &[])?;
    let geometry = SeparationGeometry::new(section.require_vector("r_a")?, section.require_vector("r_b")?)?;
    let q = real(section, "q")?.unwrap_or(T::one());
    Ok(GeometrySpec { geometry, q, grid: parse_grid(section)? })
}

/// `[scenario]`, with the context from `[units]`.
pub fn parse_scenario<T: Real>(section: &Section, ctx: PhysicsContext<T>) -> Result<TomographyScenario<T>> {
    let keys: Vec<&str> = SCENARIO_KEYS.iter().chain(GRID_KEYS).copied().collect();
    section.expect_keys(&keys, &[])?;
    let grid = parse_grid(section)?;
    let partition = PartitionPlane {
        normal: section.vector("partition_normal")?.unwrap_or(PartitionPlane::default().normal),
        offset: real(section, "partition_offset")?.unwrap_or(T::zero()),
    };
    if partition.normal.norm() == T::zero() {
        let line = section.entry("partition_normal").map_or(section.line, |e| e.line);
        return Err(Error::config_at(line, "partition normal must be nonzero"));
    }
    let scn = TomographyScenario {
        r_al: section.require_vector("r_al")?,
        r_ar: section.require_vector("r_ar")?,
        r_bl: section.require_vector("r_bl")?,
        r_br: section.require_vector("r_br")?,
        q_a: real(section, "q_a")?.unwrap_or(T::one()),
        q_b: real(section, "q_b")?.unwrap_or(T::one()),
        cutoffs: grid.cutoffs(),
        grid,
        interaction_time: real(section, "time")?.unwrap_or(T::zero()),
        partition,
        ctx,
    };
    scn.validate().map_err(|e| match e {
        Error::Config { line: None, message } => Error::config_at(section.line, message),
        other => other,
    })?;
    Ok(scn)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# scenario file
[units]
alpha = 0.0072973525693   ; CODATA

[scenario]
r_al = -50 10 0
r_ar =  50 10 0
r_bl = -50 -10 0
r_br =  50 -10 0
q_a = 1
q_b = 1
time = 3
nodes = 256
k_min = 1e-4
";

    #[test]
    fn parses_sample_scenario() {
        let f = ConfigFile::parse(SAMPLE).unwrap();
        f.expect_sections(&["units", "scenario"]).unwrap();
        let ctx = parse_units::<f64>(f.section("units")).unwrap();
        let scn = parse_scenario(f.require("scenario").unwrap(), ctx).unwrap();
        assert_eq!(scn.r_ar, Position3::new(50.0, 10.0, 0.0));
        assert_eq!(scn.interaction_time, 3.0);
        assert_eq!(scn.grid.len(), 256);
        assert_eq!(scn.cutoffs.k_min(), 1e-4);
    }

    #[test]
    fn unknown_key_reports_line() {
        let f = ConfigFile::parse("[units]\nalpah = 0.007\n").unwrap();
        match parse_units::<f64>(f.section("units")) {
            Err(Error::Config { line: Some(2), message }) => assert!(message.contains("alpah")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_section_is_rejected() {
        let f = ConfigFile::parse("[unit]\nalpha = 1\n").unwrap();
        assert!(matches!(f.expect_sections(&["units"]), Err(Error::Config { line: Some(1), .. })));
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(ConfigFile::parse("alpha = 1"), Err(Error::Config { line: Some(1), .. })));
        assert!(matches!(ConfigFile::parse("[units\n"), Err(Error::Config { line: Some(1), .. })));
        assert!(matches!(ConfigFile::parse("[units]\nalpha\n"), Err(Error::Config { line: Some(2), .. })));
        assert!(matches!(ConfigFile::parse("[units]\nalpha =\n"), Err(Error::Config { line: Some(2), .. })));
        assert!(matches!(ConfigFile::parse("[a]\n[a]\n"), Err(Error::Config { line: Some(2), .. })));
    }

    #[test]
    fn duplicate_key_is_rejected() {
        let f = ConfigFile::parse("[geometry]\nr_a = 0 0 0\nr_a = 1 0 0\nr_b = 1 0 0\n").unwrap();
        assert!(matches!(
            parse_geometry::<f64>(f.section("geometry").unwrap()),
            Err(Error::Config { line: Some(3), .. })
        ));
    }

    #[test]
    fn charges_section() {
        let f = ConfigFile::parse("[charges]\nlabel = pair\ncharge = 1 0 0 0\ncharge = -2 1 0 0\n").unwrap();
        let cfg = parse_charges::<f64>(f.section("charges").unwrap()).unwrap();
        assert_eq!(cfg.label(), "pair");
        assert_eq!(cfg.charges().len(), 2);
        assert_eq!(cfg.charges()[1].q, -2.0);
        let bad = ConfigFile::parse("[charges]\ncharge = 1 0 0\n").unwrap();
        assert!(matches!(
            parse_charges::<f64>(bad.section("charges").unwrap()),
            Err(Error::Config { line: Some(2), .. })
        ));
    }

    #[test]
    fn geometry_defaults_and_bad_values() {
        let f = ConfigFile::parse("[geometry]\nr_a = 0 0 0\nr_b = 100 0 0\n").unwrap();
        let g = parse_geometry::<f64>(f.section("geometry").unwrap()).unwrap();
        assert_eq!(g.q, 1.0);
        assert_eq!(g.grid.len(), DEFAULT_NODE_COUNT);
        assert_eq!(g.cutoffs(), CutoffPair::standard());
        let f = ConfigFile::parse("[geometry]\nr_a = 0 0 0\nr_b = 1 0 0\nk_min = 2\n").unwrap();
        assert!(matches!(
            parse_geometry::<f64>(f.section("geometry").unwrap()),
            Err(Error::Config { line: Some(4), .. })
        ));
        let f = ConfigFile::parse("[geometry]\nr_a = 0 0 zero\nr_b = 1 0 0\n").unwrap();
        assert!(matches!(
            parse_geometry::<f64>(f.section("geometry").unwrap()),
            Err(Error::Config { line: Some(2), .. })
        ));
        let f = ConfigFile::parse("[geometry]\nr_a = 0 0 0\nr_b = 1 0 0\nscheme = trapezoid\n").unwrap();
        assert!(matches!(
            parse_geometry::<f64>(f.section("geometry").unwrap()),
            Err(Error::Config { line: Some(4), .. })
        ));
    }

    #[test]
    fn invalid_units_are_rejected() {
        let f = ConfigFile::parse("[units]\nc = -1\n").unwrap();
        assert!(matches!(parse_units::<f64>(f.section("units")), Err(Error::Config { line: Some(1), .. })));
    }

    #[test]
    fn scenario_violating_partition_is_rejected() {
        let text = SAMPLE.replace("r_al = -50 10 0", "r_al = 5 10 0");
        let f = ConfigFile::parse(&text).unwrap();
        assert!(parse_scenario::<f64>(f.section("scenario").unwrap(), PhysicsContext::natural()).is_err());
    }
}
