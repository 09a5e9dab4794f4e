//! Run configuration: a flat-sectioned TOML document, parsed strictly.
//!
//! ```toml
//! command = "spectrum"
//!
//! [physics]
//! units = "natural"          # or "electron_nm_eV"
//! hbar = 1.0                 # natural units only
//! mass = 1.0                 # m* (natural) or m*/m_e (electron_nm_eV)
//!
//! [geometry]
//! radius = 1.0               # "0.8 nm", "8 A" accepted in electron_nm_eV
//! length = 1.0
//!
//! [twist]
//! profile = "constant"       # or "linear-ramp"
//! alpha = 0.5                # constant twist rate, "0.5 1/nm"
//! alpha0 = 0.3               # ramp slope: alpha(z) = alpha0 * z
//!
//! [modes]
//! n_max = 3
//! l_max = 2
//! pairs = [[1, 0], [2, -1]]  # explicit list instead of n_max / l_max
//! l = 1                      # azimuthal number for scattering
//!
//! [energy]
//! min = 0.01
//! max = 5.0
//! points = 500
//!
//! [sweep]
//! scenario = "embedded"      # or "free"
//! alphas = [0.0, 0.5, 1.0]
//! ls = [0, 1, 2]
//! radii = [0.5, 1.0, 2.0]
//!
//! [grid]
//! phi_points = 256
//! z_points = 256
//!
//! [output]
//! path = "out.csv"
//! format = "csv"             # or "json"
//! ```

use std::fmt;
use std::path::PathBuf;

use serde::Deserialize;
use serde_json::{json, Value};

use twistqm::geometry::{CylinderGeometry, PhysicsParams, TwistProfile, UnitSystem};
use twistqm::scattering::ScenarioKind;
use twistqm::spectrum::{GridSpec, ModeNumbers};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Spectrum,
    Wavefunction,
    ScatterEmbedded,
    ScatterFree,
    Sweep,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Wavefunction => "wavefunction",
            Command::ScatterEmbedded => "scatter-embedded",
            Command::ScatterFree => "scatter-free",
            Command::Sweep => "sweep",
            Command::Validate => "validate",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Command::Spectrum,
            Command::Wavefunction,
            Command::ScatterEmbedded,
            Command::ScatterFree,
            Command::Sweep,
            Command::Validate,
        ]
        .into_iter()
        .find(|c| c.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(OutputFormat::Csv),
            "json" => Some(OutputFormat::Json),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TwistSpec {
    Constant(f64),
    LinearRamp(f64),
}

impl TwistSpec {
    pub fn profile(&self) -> TwistProfile {
        match *self {
            TwistSpec::Constant(a) => TwistProfile::Constant(a),
            TwistSpec::LinearRamp(a0) => TwistProfile::LinearRamp(a0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl EnergyGrid {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub scenario: ScenarioKind,
    pub alphas: Vec<f64>,
    pub ls: Vec<i32>,
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub physics: PhysicsParams,
    pub geometry: CylinderGeometry,
    pub twist: TwistSpec,
    pub modes: Vec<ModeNumbers>,
    /// Azimuthal number used by the scattering commands.
    pub scatter_l: i32,
    pub energy_grid: Option<EnergyGrid>,
    pub sweep: SweepSpec,
    pub grid: GridSpec,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
}

impl RunConfig {
    /// Defaults used by `validate` when no document is supplied.
    pub fn validate_default() -> Self {
        Self {
            command: Command::Validate,
            physics: PhysicsParams::natural(),
            geometry: CylinderGeometry {
                radius: 1.0,
                length: 1.0,
            },
            twist: TwistSpec::Constant(0.0),
            modes: Vec::new(),
            scatter_l: 0,
            energy_grid: None,
            sweep: SweepSpec {
                scenario: ScenarioKind::EmbeddedCylinder,
                alphas: vec![0.0],
                ls: vec![0],
                radii: vec![1.0],
            },
            grid: GridSpec::default(),
            output_path: None,
            format: OutputFormat::Csv,
        }
    }

    /// Canonical description used for the metadata echo and hash. Output
    /// location and format are deliberately absent.
    pub fn echo(&self) -> Value {
        let twist = match self.twist {
            TwistSpec::Constant(a) => json!({"profile": "constant", "alpha": a}),
            TwistSpec::LinearRamp(a0) => json!({"profile": "linear-ramp", "alpha0": a0}),
        };
        json!({
            "command": self.command.name(),
            "physics": {
                "units": self.physics.unit_system.name(),
                "hbar": self.physics.hbar,
                "mass": self.physics.mass,
            },
            "geometry": {"radius": self.geometry.radius, "length": self.geometry.length},
            "twist": twist,
            "modes": self.modes.iter().map(|m| [m.n as i64, m.l as i64]).collect::<Vec<_>>(),
            "scatter_l": self.scatter_l,
            "energy": self.energy_grid.map(|g| json!({"min": g.min, "max": g.max, "points": g.points})),
            "sweep": {
                "scenario": self.sweep.scenario.name(),
                "alphas": self.sweep.alphas,
                "ls": self.sweep.ls,
                "radii": self.sweep.radii,
            },
            "grid": {"phi_points": self.grid.phi_points, "z_points": self.grid.z_points},
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: Some(field.into()),
            line: None,
            message: message.into(),
        }
    }

    /// Single-line machine-readable form.
    pub fn to_json_line(&self) -> String {
        json!({
            "error": "config",
            "field": self.field,
            "line": self.line,
            "message": self.message,
        })
        .to_string()
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(field) = &self.field {
            write!(f, "{field}: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Quantity {
    Number(f64),
    Text(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    command: Option<String>,
    #[serde(default)]
    physics: RawPhysics,
    geometry: Option<RawGeometry>,
    #[serde(default)]
    twist: RawTwist,
    #[serde(default)]
    modes: RawModes,
    energy: Option<RawEnergy>,
    #[serde(default)]
    sweep: RawSweep,
    #[serde(default)]
    grid: RawGrid,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhysics {
    units: Option<String>,
    hbar: Option<f64>,
    mass: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    radius: Quantity,
    length: Quantity,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTwist {
    profile: Option<String>,
    alpha: Option<Quantity>,
    alpha0: Option<Quantity>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModes {
    n_max: Option<i64>,
    l_max: Option<i64>,
    pairs: Option<Vec<[i64; 2]>>,
    l: Option<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEnergy {
    min: Quantity,
    max: Quantity,
    points: i64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    scenario: Option<String>,
    alphas: Option<Vec<Quantity>>,
    ls: Option<Vec<i64>>,
    radii: Option<Vec<Quantity>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    phi_points: Option<i64>,
    z_points: Option<i64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: Option<String>,
    format: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dimension {
    Length,
    InverseLength,
    InverseLengthSquared,
    Energy,
}

/// Conversion factors into nm / eV for the electron_nm_eV preset.
fn unit_factor(dim: Dimension, unit: &str) -> Option<f64> {
    let unit = unit.trim();
    match dim {
        Dimension::Length => match unit {
            "nm" => Some(1.0),
            "A" | "Å" | "angstrom" => Some(0.1),
            "pm" => Some(1e-3),
            "um" | "µm" => Some(1e3),
            _ => None,
        },
        Dimension::InverseLength => match unit {
            "1/nm" | "rad/nm" | "nm^-1" => Some(1.0),
            "1/A" | "1/Å" | "rad/A" | "rad/Å" | "A^-1" => Some(10.0),
            _ => None,
        },
        Dimension::InverseLengthSquared => match unit {
            "1/nm^2" | "rad/nm^2" | "nm^-2" => Some(1.0),
            "1/A^2" | "1/Å^2" | "rad/A^2" | "A^-2" => Some(100.0),
            _ => None,
        },
        Dimension::Energy => match unit {
            "eV" => Some(1.0),
            "meV" => Some(1e-3),
            _ => None,
        },
    }
}

fn quantity(q: &Quantity, dim: Dimension, units: UnitSystem, field: &str) -> Result<f64, ConfigError> {
    match q {
        Quantity::Number(v) => Ok(*v),
        Quantity::Text(text) => {
            let text = text.trim();
            let split = text.find(|c: char| c.is_whitespace()).unwrap_or(text.len());
            let (num, unit) = text.split_at(split);
            let value: f64 = num
                .parse()
                .map_err(|_| ConfigError::new(field, format!("cannot parse quantity {text:?}")))?;
            if unit.trim().is_empty() {
                return Ok(value);
            }
            if units != UnitSystem::ElectronNmEv {
                return Err(ConfigError::new(
                    field,
                    format!("unit suffix {:?} requires units = \"electron_nm_eV\"", unit.trim()),
                ));
            }
            let factor = unit_factor(dim, unit)
                .ok_or_else(|| ConfigError::new(field, format!("unknown unit {:?}", unit.trim())))?;
            Ok(value * factor)
        }
    }
}

/// 1-based line of `key` inside `[section]` (top level when `section` is empty).
fn locate(text: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.split(']').next()) {
            current = name.trim().to_string();
            if key.is_empty() && current == section {
                return Some(i + 1);
            }
            continue;
        }
        if current == section {
            if let Some((k, _)) = line.split_once('=') {
                if k.trim() == key {
                    return Some(i + 1);
                }
            }
        }
    }
    None
}

fn with_line(mut err: ConfigError, text: &str) -> ConfigError {
    if err.line.is_none() {
        if let Some(field) = &err.field {
            let (section, key) = field.rsplit_once('.').unwrap_or(("", field.as_str()));
            err.line = locate(text, section, key).or_else(|| locate(text, section, ""));
        }
    }
    err
}

fn positive(v: f64, field: &str) -> Result<f64, ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::new(field, format!("must be positive, got {v}")))
    }
}

fn finite(v: f64, field: &str) -> Result<f64, ConfigError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::new(field, "must be finite"))
    }
}

fn to_i32(v: i64, field: &str) -> Result<i32, ConfigError> {
    i32::try_from(v).map_err(|_| ConfigError::new(field, format!("out of range: {v}")))
}

/// Parses and validates a run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawDoc = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1);
        ConfigError {
            field: None,
            line,
            message: e.message().trim().to_string(),
        }
    })?;
    build(raw).map_err(|e| with_line(e, text))
}

fn build(raw: RawDoc) -> Result<RunConfig, ConfigError> {
    let command = match raw.command.as_deref() {
        None => Command::Spectrum,
        Some(c) => Command::parse(c).ok_or_else(|| ConfigError::new("command", format!("unknown command {c:?}")))?,
    };

    let units = match raw.physics.units.as_deref() {
        None | Some("natural") => UnitSystem::Natural,
        Some("electron_nm_eV") => UnitSystem::ElectronNmEv,
        Some(u) => return Err(ConfigError::new("physics.units", format!("unknown unit system {u:?}"))),
    };
    let physics = match units {
        UnitSystem::Natural => {
            let hbar = positive(raw.physics.hbar.unwrap_or(1.0), "physics.hbar")?;
            let mass = positive(raw.physics.mass.unwrap_or(1.0), "physics.mass")?;
            PhysicsParams {
                hbar,
                mass,
                unit_system: units,
            }
        }
        UnitSystem::ElectronNmEv => {
            if raw.physics.hbar.is_some() {
                return Err(ConfigError::new("physics.hbar", "hbar is fixed by the electron_nm_eV preset"));
            }
            let ratio = positive(raw.physics.mass.unwrap_or(1.0), "physics.mass")?;
            PhysicsParams::electron_nm_ev(ratio).map_err(|e| ConfigError::new("physics.mass", e.to_string()))?
        }
    };

    let geometry = raw
        .geometry
        .ok_or_else(|| ConfigError::new("geometry", "missing required section [geometry]"))?;
    let radius = positive(quantity(&geometry.radius, Dimension::Length, units, "geometry.radius")?, "geometry.radius")?;
    let length = positive(quantity(&geometry.length, Dimension::Length, units, "geometry.length")?, "geometry.length")?;
    let geometry = CylinderGeometry { radius, length };

    let twist = match raw.twist.profile.as_deref() {
        None | Some("constant") => {
            if raw.twist.alpha0.is_some() {
                return Err(ConfigError::new("twist.alpha0", "alpha0 only applies to profile \"linear-ramp\""));
            }
            let alpha = match &raw.twist.alpha {
                Some(q) => finite(quantity(q, Dimension::InverseLength, units, "twist.alpha")?, "twist.alpha")?,
                None => 0.0,
            };
            TwistSpec::Constant(alpha)
        }
        Some("linear-ramp") => {
            if raw.twist.alpha.is_some() {
                return Err(ConfigError::new("twist.alpha", "profile \"linear-ramp\" takes alpha0, not alpha"));
            }
            let q = raw
                .twist
                .alpha0
                .as_ref()
                .ok_or_else(|| ConfigError::new("twist.alpha0", "missing required key for profile \"linear-ramp\""))?;
            TwistSpec::LinearRamp(finite(
                quantity(q, Dimension::InverseLengthSquared, units, "twist.alpha0")?,
                "twist.alpha0",
            )?)
        }
        Some(p) => return Err(ConfigError::new("twist.profile", format!("unknown profile {p:?}"))),
    };

    let modes = match (&raw.modes.pairs, raw.modes.n_max, raw.modes.l_max) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            return Err(ConfigError::new("modes.pairs", "give either pairs or n_max/l_max, not both"))
        }
        (Some(pairs), None, None) => pairs
            .iter()
            .map(|&[n, l]| {
                let n = u32::try_from(n)
                    .ok()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| ConfigError::new("modes.pairs", format!("n must be >= 1, got {n}")))?;
                Ok(ModeNumbers { n, l: to_i32(l, "modes.pairs")? })
            })
            .collect::<Result<Vec<_>, _>>()?,
        (None, n_max, l_max) => {
            let n_max = n_max.unwrap_or(1);
            let l_max = l_max.unwrap_or(0);
            if n_max < 1 {
                return Err(ConfigError::new("modes.n_max", format!("must be >= 1, got {n_max}")));
            }
            if l_max < 0 {
                return Err(ConfigError::new("modes.l_max", format!("must be >= 0, got {l_max}")));
            }
            let n_max = u32::try_from(n_max).map_err(|_| ConfigError::new("modes.n_max", "out of range"))?;
            let l_max = to_i32(l_max, "modes.l_max")?;
            (1..=n_max)
                .flat_map(|n| (-l_max..=l_max).map(move |l| ModeNumbers { n, l }))
                .collect()
        }
    };
    let scatter_l = to_i32(raw.modes.l.unwrap_or(0), "modes.l")?;

    let energy_grid = match raw.energy {
        None => None,
        Some(e) => {
            let min = finite(quantity(&e.min, Dimension::Energy, units, "energy.min")?, "energy.min")?;
            let max = finite(quantity(&e.max, Dimension::Energy, units, "energy.max")?, "energy.max")?;
            if !(min < max) {
                return Err(ConfigError::new("energy.max", format!("max ({max}) must exceed min ({min})")));
            }
            if e.points < 2 {
                return Err(ConfigError::new("energy.points", format!("need at least 2 points, got {}", e.points)));
            }
            Some(EnergyGrid {
                min,
                max,
                points: e.points as usize,
            })
        }
    };

    let scenario = match raw.sweep.scenario.as_deref() {
        None | Some("embedded") => ScenarioKind::EmbeddedCylinder,
        Some("free") => ScenarioKind::FreeParticle,
        Some(s) => return Err(ConfigError::new("sweep.scenario", format!("unknown scenario {s:?}"))),
    };
    let alphas = match &raw.sweep.alphas {
        Some(list) => list
            .iter()
            .map(|q| finite(quantity(q, Dimension::InverseLength, units, "sweep.alphas")?, "sweep.alphas"))
            .collect::<Result<Vec<_>, _>>()?,
        None => vec![match twist {
            TwistSpec::Constant(a) => a,
            TwistSpec::LinearRamp(_) => 0.0,
        }],
    };
    let ls = match &raw.sweep.ls {
        Some(list) => list.iter().map(|&l| to_i32(l, "sweep.ls")).collect::<Result<Vec<_>, _>>()?,
        None => vec![scatter_l],
    };
    let radii = match &raw.sweep.radii {
        Some(list) => list
            .iter()
            .map(|q| positive(quantity(q, Dimension::Length, units, "sweep.radii")?, "sweep.radii"))
            .collect::<Result<Vec<_>, _>>()?,
        None => vec![geometry.radius],
    };
    for (name, empty) in [("sweep.alphas", alphas.is_empty()), ("sweep.ls", ls.is_empty()), ("sweep.radii", radii.is_empty())] {
        if empty {
            return Err(ConfigError::new(name, "list must not be empty"));
        }
    }

    let grid_dim = |v: Option<i64>, field: &str, min: i64| -> Result<usize, ConfigError> {
        let v = v.unwrap_or(256);
        if v < min {
            return Err(ConfigError::new(field, format!("must be >= {min}, got {v}")));
        }
        Ok(v as usize)
    };
    let grid = GridSpec {
        phi_points: grid_dim(raw.grid.phi_points, "grid.phi_points", 1)?,
        z_points: grid_dim(raw.grid.z_points, "grid.z_points", 2)?,
    };

    let format = match raw.output.format.as_deref() {
        None => OutputFormat::Csv,
        Some(f) => OutputFormat::parse(f).ok_or_else(|| ConfigError::new("output.format", format!("unknown format {f:?}")))?,
    };

    let config = RunConfig {
        command,
        physics,
        geometry,
        twist,
        modes,
        scatter_l,
        energy_grid,
        sweep: SweepSpec {
            scenario,
            alphas,
            ls,
            radii,
        },
        grid,
        output_path: raw.output.path.map(PathBuf::from),
        format,
    };
    Ok(config)
}

/// Checks that the keys a command needs are present.
pub fn check_requirements(config: &RunConfig) -> Result<(), ConfigError> {
    match config.command {
        Command::ScatterEmbedded | Command::ScatterFree | Command::Sweep => {
            if config.energy_grid.is_none() {
                return Err(ConfigError::new("energy", "missing required section [energy]"));
            }
            if matches!(config.twist, TwistSpec::LinearRamp(_)) && config.command != Command::Sweep {
                return Err(ConfigError::new(
                    "twist.profile",
                    "scattering is defined for constant twist only",
                ));
            }
        }
        Command::Spectrum | Command::Wavefunction => {
            if config.modes.is_empty() {
                return Err(ConfigError::new("modes", "no modes selected"));
            }
        }
        Command::Validate => {}
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[geometry]\nradius = 1.0\nlength = 1.0\n";

    #[test]
    fn minimal_document_gets_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.command, Command::Spectrum);
        assert_eq!(c.physics, PhysicsParams::natural());
        assert_eq!(c.twist, TwistSpec::Constant(0.0));
        assert_eq!(c.modes, vec![ModeNumbers { n: 1, l: 0 }]);
        assert_eq!(c.grid, GridSpec::default());
        assert_eq!(c.format, OutputFormat::Csv);
    }

    #[test]
    fn negative_radius_names_field_and_line() {
        let err = parse_config("command = \"spectrum\"\n[geometry]\nradius = -1.0\nlength = 1.0\n").unwrap_err();
        assert_eq!(err.field.as_deref(), Some("geometry.radius"));
        assert_eq!(err.line, Some(3));
        assert!(err.to_json_line().contains("geometry.radius"));
        assert!(!err.to_json_line().contains('\n'));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_config("[geometry]\nradius = 1.0\nlength = 1.0\nwidth = 3\n").unwrap_err();
        assert!(err.message.contains("width"), "{err}");
        assert_eq!(err.line, Some(4));
        assert!(parse_config("bogus = 1\n[geometry]\nradius = 1.0\nlength = 1.0\n").is_err());
    }

    #[test]
    fn missing_and_mistyped_keys() {
        let err = parse_config("[geometry]\nradius = 1.0\n").unwrap_err();
        assert!(err.message.contains("length"), "{err}");
        let err = parse_config("[geometry]\nradius = 1.0\nlength = 1.0\n[modes]\nn_max = \"three\"\n").unwrap_err();
        assert_eq!(err.line, Some(5), "{err}");
        assert!(matches!(parse_config("").unwrap_err().field.as_deref(), Some("geometry")));
    }

    #[test]
    fn unknown_profile_is_rejected() {
        let err = parse_config(&format!("{MINIMAL}[twist]\nprofile = \"sinusoidal\"\n")).unwrap_err();
        assert_eq!(err.field.as_deref(), Some("twist.profile"));
        assert_eq!(err.line, Some(5));
    }

    #[test]
    fn electron_units_convert_suffixes() {
        let doc = "[physics]\nunits = \"electron_nm_eV\"\n[geometry]\nradius = \"5 A\"\nlength = \"10 nm\"\n\
                   [twist]\nalpha = \"0.5 1/nm\"\n[energy]\nmin = \"10 meV\"\nmax = 1.0\npoints = 3\n";
        let c = parse_config(doc).unwrap();
        assert!((c.geometry.radius - 0.5).abs() < 1e-15);
        assert_eq!(c.geometry.length, 10.0);
        assert_eq!(c.twist, TwistSpec::Constant(0.5));
        assert!((c.energy_grid.unwrap().min - 0.01).abs() < 1e-15);
        assert!((c.physics.kinetic_scale() - 0.0380998).abs() < 1e-7);

        let c = parse_config(&doc.replace("0.5 1/nm", "0.05 1/A")).unwrap();
        assert_eq!(c.twist, TwistSpec::Constant(0.5));
    }

    #[test]
    fn unit_suffix_needs_electron_preset() {
        let err = parse_config("[geometry]\nradius = \"1 nm\"\nlength = 1.0\n").unwrap_err();
        assert_eq!(err.field.as_deref(), Some("geometry.radius"));
        let err = parse_config("[physics]\nunits = \"electron_nm_eV\"\n[geometry]\nradius = \"1 furlong\"\nlength = 1.0\n")
            .unwrap_err();
        assert!(err.message.contains("furlong"));
    }

    #[test]
    fn energy_grid_validation() {
        let bad = format!("{MINIMAL}[energy]\nmin = 2.0\nmax = 1.0\npoints = 10\n");
        assert_eq!(parse_config(&bad).unwrap_err().field.as_deref(), Some("energy.max"));
        let bad = format!("{MINIMAL}[energy]\nmin = 0.0\nmax = 1.0\npoints = 1\n");
        assert_eq!(parse_config(&bad).unwrap_err().field.as_deref(), Some("energy.points"));
        let grid = EnergyGrid {
            min: 0.0,
            max: 1.0,
            points: 3,
        };
        assert_eq!(grid.values(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn modes_from_ranges_and_pairs() {
        let c = parse_config(&format!("{MINIMAL}[modes]\nn_max = 3\nl_max = 2\n")).unwrap();
        assert_eq!(c.modes.len(), 15);
        let c = parse_config(&format!("{MINIMAL}[modes]\npairs = [[2, -1], [1, 0]]\n")).unwrap();
        assert_eq!(c.modes, vec![ModeNumbers { n: 2, l: -1 }, ModeNumbers { n: 1, l: 0 }]);
        assert!(parse_config(&format!("{MINIMAL}[modes]\npairs = [[0, 1]]\n")).is_err());
        assert!(parse_config(&format!("{MINIMAL}[modes]\npairs = [[1, 1]]\nn_max = 2\n")).is_err());
    }

    #[test]
    fn scattering_requires_energy_grid() {
        let mut c = parse_config(MINIMAL).unwrap();
        c.command = Command::ScatterFree;
        assert_eq!(check_requirements(&c).unwrap_err().field.as_deref(), Some("energy"));
    }

    #[test]
    fn echo_is_stable() {
        let a = parse_config(MINIMAL).unwrap();
        let b = parse_config(&format!("{MINIMAL}[output]\npath = \"x.csv\"\n")).unwrap();
        assert_eq!(a.echo().to_string(), b.echo().to_string());
    }
}
