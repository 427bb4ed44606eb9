//! Flat `key = value` experiment configuration.
//!
//! Blank lines and `#` comments are ignored; lists are comma-separated.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::baselines::{BaselineKind, DEFAULT_ENERGY_FRACTION};
use crate::channel::Scenario;
use crate::error::{Error, Result};

/// Every key the parser accepts.
pub const KNOWN_KEYS: &[&str] = &[
    "axis",
    "n_antennas",
    "n_antennas_list",
    "n_users",
    "n_targets",
    "rho",
    "rho_list",
    "snr_db",
    "snr_db_list",
    "trials",
    "seed",
    "methods",
    "method",
    "output",
    "angle_range",
    "spacing",
    "target_angles",
    "grid_step",
    "energy_fraction",
    "max_iter",
];

/// Raw key/value pairs with the line each came from.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, usize)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::config(content, format!("line {line_no}: expected `key = value`")))?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(Error::config(key, format!("line {line_no}: unknown key")));
            }
            if entries
                .insert(key.to_string(), (value.trim().to_string(), line_no))
                .is_some()
            {
                return Err(Error::config(key, format!("line {line_no}: duplicate key")));
            }
        }
        Ok(RawConfig { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn value<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| Error::config(key, format!("cannot parse `{raw}`"))),
        }
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => {
                let items: Result<Vec<T>> = raw
                    .split(',')
                    .map(|s| s.trim())
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse()
                            .map_err(|_| Error::config(key, format!("cannot parse list item `{s}`")))
                    })
                    .collect();
                let items = items?;
                if items.is_empty() {
                    return Err(Error::config(key, "list is empty"));
                }
                Ok(Some(items))
            }
        }
    }

    /// Scenario fields, falling back to [`Scenario::default`].
    pub fn scenario(&self) -> Result<Scenario> {
        let mut s = Scenario::default();
        if let Some(v) = self.value("n_antennas")? {
            s.n_antennas = v;
        }
        if let Some(v) = self.value("n_users")? {
            s.n_users = v;
        }
        if let Some(v) = self.value("n_targets")? {
            s.n_targets = v;
        }
        if let Some(v) = self.value("rho")? {
            s.rho = v;
        }
        if let Some(v) = self.value("snr_db")? {
            s.snr_db = v;
        }
        if let Some(v) = self.value("spacing")? {
            s.antenna_spacing_over_wavelength = v;
        }
        if let Some(v) = self.value("seed")? {
            s.seed = v;
        }
        if let Some(v) = self.value("trials")? {
            s.trials = v;
        }
        if let Some(range) = self.list::<f64>("angle_range")? {
            match range[..] {
                [lo, hi] => s.angle_range_deg = (lo, hi),
                _ => return Err(Error::config("angle_range", "expected `lo, hi`")),
            }
        }
        Ok(s)
    }
}

/// Swept scenario field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    SnrDb,
    NAntennas,
    Rho,
}

impl Axis {
    pub fn tag(self) -> &'static str {
        match self {
            Axis::SnrDb => "snr_db",
            Axis::NAntennas => "n_antennas",
            Axis::Rho => "rho",
        }
    }

    fn list_key(self) -> &'static str {
        match self {
            Axis::SnrDb => "snr_db_list",
            Axis::NAntennas => "n_antennas_list",
            Axis::Rho => "rho_list",
        }
    }

    /// Values swept when the config gives no list.
    pub fn default_values(self) -> Vec<f64> {
        match self {
            Axis::SnrDb => vec![-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0],
            Axis::NAntennas => vec![16.0, 32.0, 64.0],
            Axis::Rho => vec![0.0, 0.25, 0.5, 0.75, 1.0],
        }
    }

    /// Copy of `base` with this field set to `value`.
    pub fn apply(self, base: &Scenario, value: f64) -> Scenario {
        let mut s = base.clone();
        match self {
            Axis::SnrDb => s.snr_db = value,
            Axis::NAntennas => s.n_antennas = value as usize,
            Axis::Rho => s.rho = value,
        }
        s
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "snr_db" => Ok(Axis::SnrDb),
            "n_antennas" => Ok(Axis::NAntennas),
            "rho" => Ok(Axis::Rho),
            other => Err(Error::config("axis", format!("unknown axis `{other}`"))),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Precoding scheme evaluated in a sweep or beampattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Proposed,
    Baseline(BaselineKind),
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Proposed,
        Method::Baseline(BaselineKind::NoInterference),
        Method::Baseline(BaselineKind::WithInterference),
        Method::Baseline(BaselineKind::SvdNulling),
        Method::Baseline(BaselineKind::BeamspaceNulling),
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Method::Proposed => "proposed",
            Method::Baseline(kind) => kind.tag(),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.tag() == s)
            .ok_or_else(|| Error::config("methods", format!("unknown method `{s}`")))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub values: Vec<f64>,
    pub methods: Vec<Method>,
    /// Defaults for every field the axis does not set. Its `trials` and
    /// `seed` drive the Monte-Carlo loop.
    pub scenario: Scenario,
    pub output_path: Option<PathBuf>,
    pub energy_fraction: f64,
    pub max_iter: usize,
}

impl SweepSpec {
    pub fn from_config(raw: &RawConfig) -> Result<Self> {
        let axis: Axis = raw
            .value::<String>("axis")?
            .map(|s| s.parse())
            .transpose()?
            .unwrap_or(Axis::SnrDb);
        for other in [Axis::SnrDb, Axis::NAntennas, Axis::Rho] {
            if other != axis && raw.contains(other.list_key()) {
                return Err(Error::config(
                    other.list_key(),
                    format!("given but the sweep axis is `{axis}`"),
                ));
            }
        }
        let values = raw
            .list::<f64>(axis.list_key())?
            .unwrap_or_else(|| axis.default_values());
        let methods = match raw.list::<String>("methods")? {
            Some(tags) => tags.iter().map(|t| t.parse()).collect::<Result<Vec<Method>>>()?,
            None => Method::ALL.to_vec(),
        };
        let spec = SweepSpec {
            axis,
            values,
            methods,
            scenario: raw.scenario()?,
            output_path: raw.value::<String>("output")?.map(PathBuf::from),
            energy_fraction: raw.value("energy_fraction")?.unwrap_or(DEFAULT_ENERGY_FRACTION),
            max_iter: raw.value("max_iter")?.unwrap_or(50),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks every field, and every scenario the sweep will visit.
    pub fn validate(&self) -> Result<()> {
        let key = self.axis.list_key();
        if self.values.is_empty() {
            return Err(Error::config(key, "no sweep values"));
        }
        if self
            .values
            .windows(2)
            .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
        {
            return Err(Error::config(key, "values must be strictly increasing"));
        }
        if self.axis == Axis::NAntennas && self.values.iter().any(|v| v.fract() != 0.0 || *v < 1.0) {
            return Err(Error::config(key, "antenna counts must be positive integers"));
        }
        if self.methods.is_empty() {
            return Err(Error::config("methods", "no methods selected"));
        }
        for (i, m) in self.methods.iter().enumerate() {
            if self.methods[..i].contains(m) {
                return Err(Error::config("methods", format!("`{m}` listed twice")));
            }
        }
        if !(self.energy_fraction > 0.0 && self.energy_fraction <= 1.0) {
            return Err(Error::config("energy_fraction", "must lie in (0, 1]"));
        }
        if self.max_iter == 0 {
            return Err(Error::config("max_iter", "must be at least 1"));
        }
        for &v in &self.values {
            self.axis.apply(&self.scenario, v).validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeampatternSpec {
    pub scenario: Scenario,
    pub target_angles_deg: Vec<f64>,
    pub method: Method,
    pub grid_step_deg: f64,
    pub output_path: Option<PathBuf>,
    pub energy_fraction: f64,
    pub max_iter: usize,
}

impl BeampatternSpec {
    pub fn from_config(raw: &RawConfig) -> Result<Self> {
        let target_angles_deg = raw
            .list::<f64>("target_angles")?
            .ok_or_else(|| Error::config("target_angles", "required for a beampattern"))?;
        let mut scenario = raw.scenario()?;
        scenario.n_targets = target_angles_deg.len();
        let method = match raw.get("method") {
            Some(tag) => tag
                .parse()
                .map_err(|_| Error::config("method", format!("unknown method `{tag}`")))?,
            None => Method::Proposed,
        };
        let spec = BeampatternSpec {
            scenario,
            target_angles_deg,
            method,
            grid_step_deg: raw.value("grid_step")?.unwrap_or(0.1),
            output_path: raw.value::<String>("output")?.map(PathBuf::from),
            energy_fraction: raw.value("energy_fraction")?.unwrap_or(DEFAULT_ENERGY_FRACTION),
            max_iter: raw.value("max_iter")?.unwrap_or(50),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.target_angles_deg.is_empty() {
            return Err(Error::config("target_angles", "at least one target is required"));
        }
        if self.target_angles_deg.iter().any(|a| !a.is_finite() || a.abs() > 90.0) {
            return Err(Error::config("target_angles", "angles must lie in [-90, 90] degrees"));
        }
        if !(self.grid_step_deg > 0.0 && self.grid_step_deg <= 1.0) {
            return Err(Error::config("grid_step", "must lie in (0, 1] degrees"));
        }
        if !(self.energy_fraction > 0.0 && self.energy_fraction <= 1.0) {
            return Err(Error::config("energy_fraction", "must lie in (0, 1]"));
        }
        if self.max_iter == 0 {
            return Err(Error::config("max_iter", "must be at least 1"));
        }
        self.scenario.validate()
    }
}
