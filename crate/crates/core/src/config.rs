//! Run configuration in user-facing units (µs, MHz) and its one-time
//! conversion to the SI values used by the numerical core.
//!
//! Precedence is built-in defaults < TOML file < command-line overrides.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{config, Error, Result};
use crate::numerics::Numerics;
use crate::physics::PhysicalParams;
use crate::sweeps::{Spacing, SweepAxis, SweepParam};
use crate::throughput::CertificationSpec;

const PER_MICRO: f64 = 1e6;

/// How `chi_mhz` and `kappa_mhz` are turned into angular rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencyUnits {
    /// The value is already an angular rate in 10⁶ rad/s.
    #[default]
    RadPerUs,
    /// The value is a cyclic frequency f = ω/2π in MHz.
    CyclicMhz,
}

impl FrequencyUnits {
    /// Angular rate in rad/s.
    pub fn to_angular(self, value_mhz: f64) -> f64 {
        match self {
            FrequencyUnits::RadPerUs => value_mhz * 1e6,
            FrequencyUnits::CyclicMhz => 2.0 * std::f64::consts::PI * value_mhz * 1e6,
        }
    }
}

impl FromStr for FrequencyUnits {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rad_per_us" => Ok(FrequencyUnits::RadPerUs),
            "cyclic_mhz" => Ok(FrequencyUnits::CyclicMhz),
            other => Err(config(
                "frequency_units",
                format!("expected rad_per_us or cyclic_mhz, got `{other}`"),
            )),
        }
    }
}

/// A duration in µs that may also be `inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MicrosOrInf(pub f64);

impl MicrosOrInf {
    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }
}

impl fmt::Display for MicrosOrInf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for MicrosOrInf {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_number_or_inf(s).map(MicrosOrInf)
    }
}

fn parse_number_or_inf(s: &str) -> Result<f64> {
    match s.trim() {
        "inf" | "Inf" | "infinity" | "+inf" => Ok(f64::INFINITY),
        other => other
            .parse::<f64>()
            .map_err(|_| config("value", format!("`{other}` is neither a number nor `inf`"))),
    }
}

impl Serialize for MicrosOrInf {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for MicrosOrInf {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(v) => Ok(MicrosOrInf(v)),
            Raw::Text(s) => parse_number_or_inf(&s)
                .map(MicrosOrInf)
                .map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicalConfig {
    pub frequency_units: FrequencyUnits,
    pub chi_mhz: f64,
    pub kappa_mhz: f64,
    pub n_bar: f64,
    pub eta: f64,
    pub t1_us: MicrosOrInf,
}

impl Default for PhysicalConfig {
    fn default() -> Self {
        Self {
            frequency_units: FrequencyUnits::RadPerUs,
            chi_mhz: 1.2,
            kappa_mhz: 5.0,
            n_bar: 80.0,
            eta: 0.45,
            t1_us: MicrosOrInf(30.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CertificationConfig {
    pub tau_oh_us: f64,
    pub epsilon: f64,
    pub tau_window_us: [f64; 2],
    pub scan_points: usize,
}

impl Default for CertificationConfig {
    fn default() -> Self {
        Self {
            tau_oh_us: 15.0,
            epsilon: 1e-4,
            tau_window_us: [0.05, 5.0],
            scan_points: 120,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericsConfig {
    pub x_grid_margin: f64,
    pub x_grid_max_spacing: f64,
    pub jump_nodes: usize,
    pub s_tol: f64,
    pub tau_tol_us: f64,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        let n = Numerics::default();
        Self {
            x_grid_margin: n.x_grid_margin,
            x_grid_max_spacing: n.x_grid_max_spacing,
            jump_nodes: n.jump_nodes,
            s_tol: n.s_tol,
            tau_tol_us: n.tau_tol * PER_MICRO,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(config("format", format!("expected csv or json, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Format,
    /// Destination file; standard output when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

/// Heatmap axes in `name:lo:hi:n[:log]` or `name=v1,v2,...` form, with
/// times in µs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis1: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis2: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub physical: PhysicalConfig,
    pub certification: CertificationConfig,
    pub numerics: NumericsConfig,
    pub output: OutputConfig,
    pub sweep: SweepConfig,
}

/// Command-line values that replace file/default settings when present.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub frequency_units: Option<FrequencyUnits>,
    pub chi_mhz: Option<f64>,
    pub kappa_mhz: Option<f64>,
    pub n_bar: Option<f64>,
    pub eta: Option<f64>,
    pub t1_us: Option<MicrosOrInf>,
    pub tau_oh_us: Option<f64>,
    pub epsilon: Option<f64>,
    pub tau_min_us: Option<f64>,
    pub tau_max_us: Option<f64>,
    pub scan_points: Option<usize>,
    pub x_grid_margin: Option<f64>,
    pub x_grid_max_spacing: Option<f64>,
    pub jump_nodes: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<String>,
    pub axis1: Option<String>,
    pub axis2: Option<String>,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| config("config file", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config("--config", format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Fully materialized configuration as TOML.
    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("configuration always serializes")
    }

    pub fn apply(&mut self, o: &Overrides) {
        let p = &mut self.physical;
        set(&mut p.frequency_units, o.frequency_units);
        set(&mut p.chi_mhz, o.chi_mhz);
        set(&mut p.kappa_mhz, o.kappa_mhz);
        set(&mut p.n_bar, o.n_bar);
        set(&mut p.eta, o.eta);
        set(&mut p.t1_us, o.t1_us);
        let c = &mut self.certification;
        set(&mut c.tau_oh_us, o.tau_oh_us);
        set(&mut c.epsilon, o.epsilon);
        set(&mut c.tau_window_us[0], o.tau_min_us);
        set(&mut c.tau_window_us[1], o.tau_max_us);
        set(&mut c.scan_points, o.scan_points);
        let n = &mut self.numerics;
        set(&mut n.x_grid_margin, o.x_grid_margin);
        set(&mut n.x_grid_max_spacing, o.x_grid_max_spacing);
        set(&mut n.jump_nodes, o.jump_nodes);
        set(&mut self.output.format, o.format);
        if o.out.is_some() {
            self.output.path = o.out.clone();
        }
        if o.axis1.is_some() {
            self.sweep.axis1 = o.axis1.clone();
        }
        if o.axis2.is_some() {
            self.sweep.axis2 = o.axis2.clone();
        }
    }

    pub fn physical_params(&self) -> Result<PhysicalParams> {
        let p = &self.physical;
        let params = PhysicalParams {
            chi: p.frequency_units.to_angular(p.chi_mhz),
            kappa: p.frequency_units.to_angular(p.kappa_mhz),
            n_bar: p.n_bar,
            eta: p.eta,
            t1: p.t1_us.0 / PER_MICRO,
        };
        params.validate().map_err(|e| rename_field(e, "physical."))?;
        Ok(params)
    }

    pub fn certification_spec(&self) -> Result<CertificationSpec> {
        let c = &self.certification;
        let spec = CertificationSpec {
            tau_oh: c.tau_oh_us / PER_MICRO,
            epsilon: c.epsilon,
            tau_min: c.tau_window_us[0] / PER_MICRO,
            tau_max: c.tau_window_us[1] / PER_MICRO,
            tau_scan_points: c.scan_points,
        };
        spec.validate().map_err(|e| rename_field(e, "certification."))?;
        Ok(spec)
    }

    pub fn numerics(&self) -> Result<Numerics> {
        let n = &self.numerics;
        let numerics = Numerics {
            x_grid_margin: n.x_grid_margin,
            x_grid_max_spacing: n.x_grid_max_spacing,
            jump_nodes: n.jump_nodes,
            s_tol: n.s_tol,
            tau_tol: n.tau_tol_us / PER_MICRO,
        };
        numerics.validate().map_err(|e| rename_field(e, "numerics."))?;
        Ok(numerics)
    }

    /// Both sweep axes, converted to SI.
    pub fn sweep_axes(&self) -> Result<(SweepAxis, SweepAxis)> {
        let a1 = self
            .sweep
            .axis1
            .as_deref()
            .ok_or_else(|| config("--axis1", "sweep needs two axes"))?;
        let a2 = self
            .sweep
            .axis2
            .as_deref()
            .ok_or_else(|| config("--axis2", "sweep needs two axes"))?;
        let (a1, a2) = (parse_axis(a1)?, parse_axis(a2)?);
        if a1.param == a2.param {
            return Err(config("--axis2", format!("duplicate sweep axis `{}`", a1.param)));
        }
        Ok((a1, a2))
    }

    /// Converts and validates every section.
    pub fn validate(&self) -> Result<()> {
        self.physical_params()?;
        self.certification_spec()?;
        self.numerics()?;
        Ok(())
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn rename_field(e: Error, prefix: &str) -> Error {
    match e {
        Error::Config { field, reason } => Error::Config {
            field: format!("{prefix}{}", user_field_name(&field)),
            reason,
        },
        other => other,
    }
}

fn user_field_name(field: &str) -> &str {
    match field {
        "chi" => "chi_mhz",
        "kappa" => "kappa_mhz",
        "t1" => "t1_us",
        "tau_oh" => "tau_oh_us",
        "tau_min" => "tau_window_us[0]",
        "tau_max" => "tau_window_us[1]",
        "tau_scan_points" => "scan_points",
        "tau_tol" => "tau_tol_us",
        other => other,
    }
}

/// Divisor taking a sweep parameter from user units to SI.
pub fn user_unit_divisor(param: SweepParam) -> f64 {
    match param {
        SweepParam::T1 | SweepParam::TauOh => PER_MICRO,
        SweepParam::Eta | SweepParam::NBar => 1.0,
    }
}

/// Parses `name:lo:hi:n[:log|:lin]` or `name=v1,v2,...` (times in µs).
pub fn parse_axis(text: &str) -> Result<SweepAxis> {
    let field = format!("axis `{text}`");
    if let Some((name, list)) = text.split_once('=') {
        let param: SweepParam = name.trim().parse()?;
        let divisor = user_unit_divisor(param);
        let values = list
            .split(',')
            .map(|v| parse_number_or_inf(v).map(|x| x / divisor))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| config(field.clone(), e.to_string()))?;
        let axis = SweepAxis::list(param, values);
        axis.validate()?;
        return Ok(axis);
    }
    let parts: Vec<&str> = text.split(':').collect();
    if !(4..=5).contains(&parts.len()) {
        return Err(config(field, "expected name:lo:hi:n[:log] or name=v1,v2,..."));
    }
    let param: SweepParam = parts[0].trim().parse()?;
    let divisor = user_unit_divisor(param);
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| config(field.clone(), format!("`{s}` is not a number")))
    };
    let lo = num(parts[1])? / divisor;
    let hi = num(parts[2])? / divisor;
    let n = parts[3]
        .trim()
        .parse::<usize>()
        .map_err(|_| config(field.clone(), format!("`{}` is not a count", parts[3])))?;
    let spacing = match parts.get(4).map(|s| s.trim()) {
        None | Some("lin") | Some("linear") => Spacing::Linear,
        Some("log") => Spacing::Log,
        Some(other) => return Err(config(field, format!("unknown spacing `{other}`"))),
    };
    let axis = SweepAxis::grid(param, lo, hi, n, spacing);
    axis.validate()?;
    Ok(axis)
}
