//! Sweep specification and its flat `key = value` configuration format.
//!
//! Keys match the command-line flag names. Values from the command line override
//! values read from a file; both go through the same validation, so every error
//! names the offending key.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clock_fisher::cpt::{Level, DEFAULT_GAMMA_STAR};
use thiserror::Error;

pub const KEYS: [&str; 12] = [
    "scheme",
    "grid",
    "omega0",
    "kappa",
    "phi",
    "gamma2",
    "gamma-star",
    "gamma-p",
    "basis",
    "quantities",
    "format",
    "out",
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("unknown key `{key}`")]
    UnknownKey { key: String },
    #[error("key `{key}` given twice")]
    Duplicate { key: String },
    #[error("key `{key}`: cannot parse `{value}` as {expected}")]
    Type {
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("key `{key}`: {message}")]
    Constraint { key: String, message: String },
}

fn constraint<T>(key: &str, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError::Constraint {
        key: key.to_string(),
        message: message.into(),
    })
}

fn canonical_key(key: &str) -> Result<&'static str, ConfigError> {
    let normalized = key.trim().replace('_', "-");
    KEYS.iter()
        .find(|k| **k == normalized)
        .copied()
        .ok_or_else(|| ConfigError::UnknownKey {
            key: key.trim().to_string(),
        })
}

/// Raw key/value pairs, keyed by canonical flag name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Settings {
    values: BTreeMap<&'static str, String>,
}

impl Settings {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `key`, replacing any previous value.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), ConfigError> {
        self.values.insert(canonical_key(key)?, value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    /// Parses a configuration document. Blank lines and text after `#` are ignored.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut out = Self::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line: i + 1,
                    text: raw.to_string(),
                });
            };
            let key = canonical_key(key)?;
            if out.values.insert(key, value.trim().to_string()).is_some() {
                return Err(ConfigError::Duplicate {
                    key: key.to_string(),
                });
            }
        }
        Ok(out)
    }

    /// `self` with every key of `other` taking precedence.
    pub fn overridden_by(mut self, other: &Settings) -> Self {
        for (k, v) in &other.values {
            self.values.insert(k, v.clone());
        }
        self
    }

    fn parse_value<T: FromStr>(
        &self,
        key: &str,
        expected: &'static str,
    ) -> Result<Option<T>, ConfigError> {
        self.get(key)
            .map(|v| {
                v.parse().map_err(|_| ConfigError::Type {
                    key: key.to_string(),
                    value: v.to_string(),
                    expected,
                })
            })
            .transpose()
    }

    fn number(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        let v = self.parse_value::<f64>(key, "a number")?;
        match v {
            Some(x) if !x.is_finite() => constraint(key, format!("must be finite, got {x}")),
            _ => Ok(v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Rabi,
    Ramsey,
    Cpt,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Rabi => "rabi",
            Scheme::Ramsey => "ramsey",
            Scheme::Cpt => "cpt",
        }
    }

    pub fn default_grid(self) -> Grid {
        match self {
            Scheme::Rabi | Scheme::Ramsey => Grid {
                start: -10.0,
                stop: 10.0,
                count: 2001,
            },
            Scheme::Cpt => Grid {
                start: -2.0,
                stop: 2.0,
                count: 401,
            },
        }
    }
}

impl FromStr for Scheme {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rabi" => Ok(Scheme::Rabi),
            "ramsey" => Ok(Scheme::Ramsey),
            "cpt" => Ok(Scheme::Cpt),
            _ => Err(()),
        }
    }
}

/// Evenly spaced grid in the scheme's dimensionless detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self, ConfigError> {
        if !start.is_finite() || !stop.is_finite() {
            return constraint("grid", "bounds must be finite");
        }
        if start >= stop {
            return constraint(
                "grid",
                format!("start ({start}) must be below stop ({stop})"),
            );
        }
        if count < 2 {
            return constraint("grid", format!("count must be at least 2, got {count}"));
        }
        Ok(Self { start, stop, count })
    }

    /// Point `i`. Mirrored points of a symmetric grid are exact negatives.
    pub fn point(&self, i: usize) -> f64 {
        let n = (self.count - 1) as f64;
        let b = i as f64 / n;
        let a = (self.count - 1 - i) as f64 / n;
        self.start * a + self.stop * b
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.point(i)).collect()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

fn parse_grid(value: &str) -> Result<Grid, ConfigError> {
    let type_err = || ConfigError::Type {
        key: "grid".into(),
        value: value.into(),
        expected: "start:stop:count",
    };
    let parts: Vec<&str> = value.split(':').map(str::trim).collect();
    let [start, stop, count] = parts.as_slice() else {
        return Err(type_err());
    };
    let start: f64 = start.parse().map_err(|_| type_err())?;
    let stop: f64 = stop.parse().map_err(|_| type_err())?;
    let count: usize = count.parse().map_err(|_| type_err())?;
    Grid::new(start, stop, count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Prob,
    Fisher,
    Qfi,
    Populations,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Prob => "prob",
            Quantity::Fisher => "fisher",
            Quantity::Qfi => "qfi",
            Quantity::Populations => "populations",
        }
    }
}

impl FromStr for Quantity {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s.trim() {
            "prob" => Ok(Quantity::Prob),
            "fisher" => Ok(Quantity::Fisher),
            "qfi" => Ok(Quantity::Qfi),
            "populations" => Ok(Quantity::Populations),
            _ => Err(()),
        }
    }
}

fn parse_quantities(value: &str) -> Result<Vec<Quantity>, ConfigError> {
    let mut out = Vec::new();
    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let q: Quantity = item.parse().map_err(|_| ConfigError::Type {
            key: "quantities".into(),
            value: item.into(),
            expected: "one of prob, fisher, qfi, populations",
        })?;
        if out.contains(&q) {
            return constraint("quantities", format!("`{item}` listed twice"));
        }
        out.push(q);
    }
    if out.is_empty() {
        return constraint("quantities", "at least one quantity is required");
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Measurement used for the CPT Fisher information.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CptBasis {
    Coupled,
    Energy,
    Single(Level),
}

impl fmt::Display for CptBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CptBasis::Coupled => f.write_str("coupled"),
            CptBasis::Energy => f.write_str("energy"),
            CptBasis::Single(l) => write!(f, "single:{l}"),
        }
    }
}

fn parse_basis(value: &str) -> Result<CptBasis, ConfigError> {
    let v = value.trim();
    match v {
        "coupled" => Ok(CptBasis::Coupled),
        "energy" => Ok(CptBasis::Energy),
        _ => v
            .strip_prefix("single:")
            .and_then(|l| l.parse::<Level>().ok())
            .map(CptBasis::Single)
            .ok_or_else(|| ConfigError::Type {
                key: "basis".into(),
                value: value.into(),
                expected: "coupled, energy or single:<C|NC|1|2|3>",
            }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeParams {
    Rabi {
        omega0: f64,
        phi: f64,
    },
    Ramsey {
        omega0: f64,
        kappa: f64,
        phi: f64,
    },
    Cpt {
        gamma2: f64,
        gamma_star: f64,
        gamma_p: f64,
        basis: CptBasis,
    },
}

impl SchemeParams {
    pub fn scheme(&self) -> Scheme {
        match self {
            SchemeParams::Rabi { .. } => Scheme::Rabi,
            SchemeParams::Ramsey { .. } => Scheme::Ramsey,
            SchemeParams::Cpt { .. } => Scheme::Cpt,
        }
    }

    /// Default parameters for `scheme`.
    pub fn defaults(scheme: Scheme) -> Self {
        match scheme {
            Scheme::Rabi => SchemeParams::Rabi {
                omega0: 1.0,
                phi: 0.0,
            },
            Scheme::Ramsey => SchemeParams::Ramsey {
                omega0: 1.0,
                kappa: 5.0,
                phi: 0.0,
            },
            Scheme::Cpt => SchemeParams::Cpt {
                gamma2: 400.0,
                gamma_star: DEFAULT_GAMMA_STAR,
                gamma_p: 1e4,
                basis: CptBasis::Coupled,
            },
        }
    }

    /// `(key, value)` pairs in a fixed order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        match *self {
            SchemeParams::Rabi { omega0, phi } => {
                vec![("omega0", omega0.to_string()), ("phi", phi.to_string())]
            }
            SchemeParams::Ramsey { omega0, kappa, phi } => vec![
                ("omega0", omega0.to_string()),
                ("kappa", kappa.to_string()),
                ("phi", phi.to_string()),
            ],
            SchemeParams::Cpt {
                gamma2,
                gamma_star,
                gamma_p,
                basis,
            } => vec![
                ("gamma2", gamma2.to_string()),
                ("gamma-star", gamma_star.to_string()),
                ("gamma-p", gamma_p.to_string()),
                ("basis", basis.to_string()),
            ],
        }
    }

    fn allowed_keys(scheme: Scheme) -> &'static [&'static str] {
        match scheme {
            Scheme::Rabi => &["omega0", "phi"],
            Scheme::Ramsey => &["omega0", "kappa", "phi"],
            Scheme::Cpt => &["gamma2", "gamma-star", "gamma-p", "basis"],
        }
    }
}

/// A fully resolved sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub params: SchemeParams,
    pub grid: Grid,
    pub quantities: Vec<Quantity>,
    pub format: Format,
    /// Output file; standard output when absent.
    pub out: Option<PathBuf>,
}

const SCHEME_KEYS: [&str; 7] = [
    "omega0",
    "kappa",
    "phi",
    "gamma2",
    "gamma-star",
    "gamma-p",
    "basis",
];

impl SweepSpec {
    /// All-defaults sweep for `scheme`.
    pub fn defaults(scheme: Scheme) -> Self {
        Self {
            params: SchemeParams::defaults(scheme),
            grid: scheme.default_grid(),
            quantities: vec![Quantity::Prob, Quantity::Fisher, Quantity::Qfi],
            format: Format::Csv,
            out: None,
        }
    }

    pub fn scheme(&self) -> Scheme {
        self.params.scheme()
    }

    /// Resolves and validates a set of raw settings.
    pub fn from_settings(s: &Settings) -> Result<Self, ConfigError> {
        let scheme_value = match s.get("scheme") {
            Some(v) => v,
            None => return constraint("scheme", "no scheme given (expected rabi, ramsey or cpt)"),
        };
        let scheme: Scheme = scheme_value.parse().map_err(|_| ConfigError::Type {
            key: "scheme".into(),
            value: scheme_value.into(),
            expected: "rabi, ramsey or cpt",
        })?;
        let allowed = SchemeParams::allowed_keys(scheme);
        for key in SCHEME_KEYS {
            if s.contains(key) && !allowed.contains(&key) {
                return constraint(
                    key,
                    format!("not a parameter of the {} scheme", scheme.name()),
                );
            }
        }

        let mut spec = Self::defaults(scheme);
        let positive = |key: &str, v: Option<f64>, current: f64| -> Result<f64, ConfigError> {
            match v {
                Some(x) if x <= 0.0 => constraint(key, format!("must be positive, got {x}")),
                Some(x) => Ok(x),
                None => Ok(current),
            }
        };
        let non_negative = |key: &str, v: Option<f64>, current: f64| -> Result<f64, ConfigError> {
            match v {
                Some(x) if x < 0.0 => constraint(key, format!("must be non-negative, got {x}")),
                Some(x) => Ok(x),
                None => Ok(current),
            }
        };
        spec.params = match spec.params {
            SchemeParams::Rabi { omega0, phi } => SchemeParams::Rabi {
                omega0: positive("omega0", s.number("omega0")?, omega0)?,
                phi: s.number("phi")?.unwrap_or(phi),
            },
            SchemeParams::Ramsey { omega0, kappa, phi } => SchemeParams::Ramsey {
                omega0: positive("omega0", s.number("omega0")?, omega0)?,
                kappa: non_negative("kappa", s.number("kappa")?, kappa)?,
                phi: s.number("phi")?.unwrap_or(phi),
            },
            SchemeParams::Cpt {
                gamma2,
                gamma_star,
                gamma_p,
                basis,
            } => {
                let gamma2 = non_negative("gamma2", s.number("gamma2")?, gamma2)?;
                let gamma_star = positive("gamma-star", s.number("gamma-star")?, gamma_star)?;
                let gamma_p = positive("gamma-p", s.number("gamma-p")?, gamma_p)?;
                if 2.0 * gamma_p >= gamma_star {
                    return constraint(
                        "gamma-p",
                        format!(
                            "2*gamma-p ({}) must stay below gamma-star ({gamma_star})",
                            2.0 * gamma_p
                        ),
                    );
                }
                let basis = s
                    .get("basis")
                    .map(parse_basis)
                    .transpose()?
                    .unwrap_or(basis);
                SchemeParams::Cpt {
                    gamma2,
                    gamma_star,
                    gamma_p,
                    basis,
                }
            }
        };
        if let Some(g) = s.get("grid") {
            spec.grid = parse_grid(g)?;
        }
        if let Some(q) = s.get("quantities") {
            spec.quantities = parse_quantities(q)?;
        }
        if let Some(f) = s.get("format") {
            spec.format = match f.trim() {
                "csv" => Format::Csv,
                "json" => Format::Json,
                other => {
                    return Err(ConfigError::Type {
                        key: "format".into(),
                        value: other.into(),
                        expected: "csv or json",
                    })
                }
            };
        }
        if let Some(o) = s.get("out") {
            if o.is_empty() {
                return constraint("out", "path is empty");
            }
            spec.out = Some(PathBuf::from(o));
        }
        Ok(spec)
    }

    /// Every resolved setting except the output path, in a fixed order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let mut e = vec![
            ("scheme", self.scheme().name().to_string()),
            ("grid", self.grid.to_string()),
        ];
        e.extend(self.params.entries());
        let q: Vec<&str> = self.quantities.iter().map(|q| q.name()).collect();
        e.push(("quantities", q.join(",")));
        e.push(("format", self.format.name().to_string()));
        e
    }

    /// Configuration document that [`load_config`] reads back into `self`.
    pub fn to_config_string(&self) -> String {
        let mut text = String::new();
        for (k, v) in self.entries() {
            text.push_str(&format!("{k} = {v}\n"));
        }
        if let Some(out) = &self.out {
            text.push_str(&format!("out = {}\n", out.display()));
        }
        text
    }
}

/// Reads a configuration file and resolves it into a [`SweepSpec`].
pub fn load_config(path: &Path) -> Result<SweepSpec, ConfigError> {
    load_config_with(path, &Settings::new())
}

/// Like [`load_config`], with `overrides` taking precedence over the file.
pub fn load_config_with(path: &Path, overrides: &Settings) -> Result<SweepSpec, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let settings = Settings::parse(&text)?.overridden_by(overrides);
    SweepSpec::from_settings(&settings)
}
