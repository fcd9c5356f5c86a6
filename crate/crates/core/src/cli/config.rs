//! Flat `key = value` run configuration.
//!
//! One pair per line, `#` starts a comment, blank lines are ignored. Angles
//! are radians; a `pi` suffix multiplies by π (`0.75pi`, `pi`, `-pi`).
//! Unknown keys are rejected. Command-line flags are applied on top of the
//! file through [`ConfigDoc::set`].

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

use crate::experiment::{ExperimentInputs, TuneMode};
use crate::model::InterferometerParams;

/// Where a configuration value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    CommandLine,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::CommandLine => f.write_str("command line"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{origin}: expected `key = value`, found `{text}`")]
    Syntax { origin: Origin, text: String },

    #[error("{origin}: unknown key `{key}`")]
    UnknownKey { origin: Origin, key: String },

    #[error("{origin}: key `{key}` given more than once")]
    DuplicateKey { origin: Origin, key: String },

    #[error("{origin}: `{key}` = `{value}` is not a number")]
    MalformedNumber {
        origin: Origin,
        key: String,
        value: String,
    },

    #[error("{origin}: `{key}` = `{value}`: {reason}")]
    OutOfRange {
        origin: Origin,
        key: String,
        value: String,
        reason: String,
    },

    #[error("missing required keys: {}", .0.join(", "))]
    MissingKeys(Vec<String>),
}

const KNOWN_KEYS: &[&str] = &[
    "mode",
    "out",
    "format",
    "r",
    "phi",
    "alpha",
    "delta_over_w",
    "branch",
    "grid_half_width_over_w",
    "grid_points",
    "delta_over_w_min",
    "delta_over_w_max",
    "delta_over_w_steps",
    "phi_min",
    "phi_max",
    "phi_steps",
    "separation_m",
    "length_m",
    "speed_m_per_s",
    "dx0_transverse_m",
    "dx0_longitudinal_m",
    "tune_alpha",
    "seed",
    "oracle_draws",
    "algebra_draws",
];

/// Raw parsed document: key → (value, origin).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigDoc {
    entries: BTreeMap<String, (String, Origin)>,
}

impl ConfigDoc {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut doc = ConfigDoc::default();
        for (idx, raw) in text.lines().enumerate() {
            let origin = Origin::Line(idx + 1);
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Syntax {
                    origin,
                    text: raw.trim().to_string(),
                });
            };
            let key = normalize_key(key);
            let value = value.trim();
            if key.is_empty() || value.is_empty() {
                return Err(ConfigError::Syntax {
                    origin,
                    text: raw.trim().to_string(),
                });
            }
            check_known(&key, origin)?;
            if doc.entries.contains_key(&key) {
                return Err(ConfigError::DuplicateKey { origin, key });
            }
            doc.entries.insert(key, (value.to_string(), origin));
        }
        Ok(doc)
    }

    /// Override (or add) a value from the command line.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = normalize_key(key);
        check_known(&key, Origin::CommandLine)?;
        self.entries
            .insert(key, (value.trim().to_string(), Origin::CommandLine));
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    fn origin(&self, key: &str) -> Origin {
        self.entries
            .get(key)
            .map(|(_, o)| *o)
            .unwrap_or(Origin::CommandLine)
    }

    fn number(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((value, origin)) => {
                parse_number(value)
                    .map(Some)
                    .ok_or_else(|| ConfigError::MalformedNumber {
                        origin: *origin,
                        key: key.to_string(),
                        value: value.clone(),
                    })
            }
        }
    }

    fn number_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        Ok(self.number(key)?.unwrap_or(default))
    }

    fn integer_or(&self, key: &str, default: u64) -> Result<u64, ConfigError> {
        match self.entries.get(key) {
            None => Ok(default),
            Some((value, origin)) => value.parse().map_err(|_| ConfigError::MalformedNumber {
                origin: *origin,
                key: key.to_string(),
                value: value.clone(),
            }),
        }
    }

    fn out_of_range(&self, key: &str, reason: impl Into<String>) -> ConfigError {
        ConfigError::OutOfRange {
            origin: self.origin(key),
            key: key.to_string(),
            value: self.get(key).unwrap_or("").to_string(),
            reason: reason.into(),
        }
    }

    fn require(&self, keys: &[&str]) -> Result<(), ConfigError> {
        let missing: Vec<String> = keys
            .iter()
            .filter(|k| !self.entries.contains_key(**k))
            .map(|k| k.to_string())
            .collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::MissingKeys(missing))
        }
    }
}

fn normalize_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

fn check_known(key: &str, origin: Origin) -> Result<(), ConfigError> {
    if KNOWN_KEYS.contains(&key) {
        Ok(())
    } else {
        Err(ConfigError::UnknownKey {
            origin,
            key: key.to_string(),
        })
    }
}

/// Decimal literal with an optional `pi` suffix.
pub fn parse_number(text: &str) -> Option<f64> {
    let text = text.trim();
    let value = match text.strip_suffix("pi") {
        Some(prefix) => {
            let prefix = prefix.trim_end_matches('*').trim();
            let factor = match prefix {
                "" | "+" => 1.0,
                "-" => -1.0,
                _ => prefix.parse::<f64>().ok()?,
            };
            factor * PI
        }
        None => text.parse::<f64>().ok()?,
    };
    value.is_finite().then_some(value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Distributions,
    Decompose,
    Sweep,
    Ports,
    Design,
    Verify,
}

impl Mode {
    pub const ALL: [Mode; 6] = [
        Mode::Distributions,
        Mode::Decompose,
        Mode::Sweep,
        Mode::Ports,
        Mode::Design,
        Mode::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Distributions => "distributions",
            Mode::Decompose => "decompose",
            Mode::Sweep => "sweep",
            Mode::Ports => "ports",
            Mode::Design => "design",
            Mode::Verify => "verify",
        }
    }

    pub fn parse(text: &str) -> Option<Mode> {
        Mode::ALL.into_iter().find(|m| m.name() == text.trim())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Which densities `distributions` mode tabulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `|Φ|²` for both electrons.
    Unshifted,
    /// `|Φ₁⁻|²` and `|Φ₂⁺|²`.
    Shifted,
    /// The normalized post-selected marginals.
    PostSelected,
}

/// Output momentum axis, in units of W.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub half_width: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Range {
    /// `steps` equally spaced values including both ends.
    pub fn values(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub delta_over_w: Range,
    pub phi: Range,
    pub r: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifySpec {
    pub seed: u64,
    pub oracle_draws: usize,
    pub algebra_draws: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    Distributions {
        params: InterferometerParams,
        branch: Branch,
        axis: AxisSpec,
    },
    Decompose {
        params: InterferometerParams,
        axis: AxisSpec,
    },
    Sweep(SweepSpec),
    Ports {
        params: InterferometerParams,
    },
    Design {
        inputs: ExperimentInputs,
        tune: Option<TuneMode>,
    },
    Verify(VerifySpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub job: Job,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn mode(&self) -> Mode {
        match self.job {
            Job::Distributions { .. } => Mode::Distributions,
            Job::Decompose { .. } => Mode::Decompose,
            Job::Sweep(_) => Mode::Sweep,
            Job::Ports { .. } => Mode::Ports,
            Job::Design { .. } => Mode::Design,
            Job::Verify(_) => Mode::Verify,
        }
    }

    pub fn from_doc(doc: &ConfigDoc) -> Result<Self, ConfigError> {
        doc.require(&["mode"])?;
        let mode = Mode::parse(doc.get("mode").unwrap_or_default()).ok_or_else(|| {
            doc.out_of_range(
                "mode",
                "expected one of distributions, decompose, sweep, ports, design, verify",
            )
        })?;
        let format = match doc.get("format").unwrap_or("csv") {
            "csv" => Format::Csv,
            "json" => Format::Json,
            _ => return Err(doc.out_of_range("format", "expected csv or json")),
        };
        let out = doc.get("out").map(PathBuf::from);

        let job = match mode {
            Mode::Distributions => {
                let branch = match doc.get("branch").unwrap_or("postselected") {
                    "postselected" => Branch::PostSelected,
                    "unshifted" => Branch::Unshifted,
                    "shifted" => Branch::Shifted,
                    _ => {
                        return Err(doc
                            .out_of_range("branch", "expected postselected, unshifted or shifted"))
                    }
                };
                Job::Distributions {
                    params: model_params(doc)?,
                    branch,
                    axis: axis(doc)?,
                }
            }
            Mode::Decompose => Job::Decompose {
                params: model_params(doc)?,
                axis: axis(doc)?,
            },
            Mode::Sweep => {
                let r = reflection(doc)?;
                let alpha = doc.number_or("alpha", 0.0)?;
                let delta_over_w = range(doc, "delta_over_w", 0.0, 3.0, 101)?;
                if delta_over_w.min < 0.0 {
                    return Err(doc.out_of_range("delta_over_w_min", "kick must be non-negative"));
                }
                Job::Sweep(SweepSpec {
                    delta_over_w,
                    phi: range(doc, "phi", 0.0, 2.0 * PI, 101)?,
                    r,
                    alpha,
                })
            }
            Mode::Ports => Job::Ports {
                params: model_params(doc)?,
            },
            Mode::Design => {
                let keys = [
                    "separation_m",
                    "length_m",
                    "speed_m_per_s",
                    "dx0_transverse_m",
                    "dx0_longitudinal_m",
                ];
                doc.require(&keys)?;
                let mut values = [0.0; 5];
                for (slot, key) in values.iter_mut().zip(keys) {
                    *slot = doc.number(key)?.unwrap_or_default();
                    if *slot <= 0.0 {
                        return Err(doc.out_of_range(key, "must be strictly positive"));
                    }
                }
                let tune = match doc.get("tune_alpha") {
                    None | Some("none") => None,
                    Some("nearest") => Some(TuneMode::Nearest),
                    Some(text) => match text.parse::<i64>() {
                        Ok(n) if n > 0 => Some(TuneMode::Target(n)),
                        _ => {
                            return Err(doc.out_of_range(
                                "tune_alpha",
                                "expected none, nearest or a positive multiple of 2π",
                            ))
                        }
                    },
                };
                Job::Design {
                    inputs: ExperimentInputs {
                        separation: values[0],
                        length: values[1],
                        speed: values[2],
                        dx0_transverse: values[3],
                        dx0_longitudinal: values[4],
                    },
                    tune,
                }
            }
            Mode::Verify => {
                let oracle_draws = doc.integer_or("oracle_draws", 100)? as usize;
                let algebra_draws = doc.integer_or("algebra_draws", 1000)? as usize;
                if oracle_draws == 0 {
                    return Err(doc.out_of_range("oracle_draws", "need at least one draw"));
                }
                if algebra_draws == 0 {
                    return Err(doc.out_of_range("algebra_draws", "need at least one draw"));
                }
                Job::Verify(VerifySpec {
                    seed: doc.integer_or("seed", 1)?,
                    oracle_draws,
                    algebra_draws,
                })
            }
        };
        Ok(RunConfig { job, out, format })
    }
}

/// Parse and validate a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    RunConfig::from_doc(&ConfigDoc::parse(text)?)
}

fn reflection(doc: &ConfigDoc) -> Result<f64, ConfigError> {
    let r = doc.number_or("r", FRAC_1_SQRT_2)?;
    if !(0.0..=1.0).contains(&r) {
        return Err(doc.out_of_range("r", "reflection amplitude must lie in [0, 1]"));
    }
    Ok(r)
}

/// Engine parameters in units of W (width = 1).
fn model_params(doc: &ConfigDoc) -> Result<InterferometerParams, ConfigError> {
    doc.require(&["delta_over_w", "phi"])?;
    let r = reflection(doc)?;
    let delta = doc.number("delta_over_w")?.unwrap_or_default();
    if delta < 0.0 {
        return Err(doc.out_of_range("delta_over_w", "kick must be non-negative"));
    }
    let phi = doc.number("phi")?.unwrap_or_default();
    let alpha = doc.number_or("alpha", 0.0)?;
    InterferometerParams::new(r, phi, alpha, delta, 1.0)
        .map_err(|e| doc.out_of_range("delta_over_w", e.to_string()))
}

fn axis(doc: &ConfigDoc) -> Result<AxisSpec, ConfigError> {
    let half_width = doc.number_or("grid_half_width_over_w", 4.0)?;
    if half_width <= 0.0 {
        return Err(doc.out_of_range("grid_half_width_over_w", "must be strictly positive"));
    }
    let points = doc.integer_or("grid_points", 401)? as usize;
    if points < 3 || points.is_multiple_of(2) {
        return Err(doc.out_of_range("grid_points", "must be odd and at least 3"));
    }
    Ok(AxisSpec { half_width, points })
}

fn range(
    doc: &ConfigDoc,
    prefix: &str,
    min: f64,
    max: f64,
    steps: u64,
) -> Result<Range, ConfigError> {
    let (kmin, kmax, ksteps) = (
        format!("{prefix}_min"),
        format!("{prefix}_max"),
        format!("{prefix}_steps"),
    );
    let range = Range {
        min: doc.number_or(&kmin, min)?,
        max: doc.number_or(&kmax, max)?,
        steps: doc.integer_or(&ksteps, steps)? as usize,
    };
    if range.steps < 2 {
        return Err(doc.out_of_range(&ksteps, "a sweep needs at least 2 steps"));
    }
    if range.min >= range.max {
        return Err(doc.out_of_range(&kmax, format!("must exceed {kmin}")));
    }
    Ok(range)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig2c_document() {
        let cfg =
            parse_config("mode=distributions\ndelta_over_w=0.3\nphi=2.35619449\nalpha=0").unwrap();
        match cfg.job {
            Job::Distributions { params, branch, .. } => {
                assert_eq!(params.delta(), 0.3);
                assert!((params.phi() - 0.75 * PI).abs() < 1e-8);
                assert_eq!(params.alpha(), 0.0);
                assert_eq!(params.r(), FRAC_1_SQRT_2);
                assert_eq!(branch, Branch::PostSelected);
            }
            other => panic!("unexpected job {other:?}"),
        }
        assert_eq!(cfg.format, Format::Csv);
    }

    #[test]
    fn empty_document_lists_required_keys() {
        assert_eq!(
            parse_config(""),
            Err(ConfigError::MissingKeys(vec!["mode".to_string()]))
        );
        assert_eq!(
            parse_config("mode = ports"),
            Err(ConfigError::MissingKeys(vec![
                "delta_over_w".to_string(),
                "phi".to_string()
            ]))
        );
    }

    #[test]
    fn pi_suffix() {
        assert!((parse_number("0.75pi").unwrap() - 2.35619449).abs() < 1e-8);
        assert_eq!(parse_number("pi"), Some(PI));
        assert_eq!(parse_number("-pi"), Some(-PI));
        assert_eq!(parse_number("2*pi"), Some(2.0 * PI));
        assert_eq!(parse_number("1e-3"), Some(1e-3));
        assert_eq!(parse_number("abc"), None);
        assert_eq!(parse_number("xpi"), None);
        assert_eq!(parse_number("inf"), None);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_config("mode = ports\n# comment\nphi = 1.0\nwobble = 3").unwrap_err();
        assert_eq!(
            err,
            ConfigError::UnknownKey {
                origin: Origin::Line(4),
                key: "wobble".into()
            }
        );
        let err = parse_config("mode = ports\nphi = one\ndelta_over_w = 0.1").unwrap_err();
        assert!(matches!(
            err,
            ConfigError::MalformedNumber {
                origin: Origin::Line(2),
                ..
            }
        ));
        let err = parse_config("mode = ports\nphi 1").unwrap_err();
        assert!(matches!(
            err,
            ConfigError::Syntax {
                origin: Origin::Line(2),
                ..
            }
        ));
        let err = parse_config("mode = ports\nphi = 1\nphi = 2").unwrap_err();
        assert!(matches!(
            err,
            ConfigError::DuplicateKey {
                origin: Origin::Line(3),
                ..
            }
        ));
        assert!(err.to_string().contains("line 3"));
    }

    #[test]
    fn out_of_range_values() {
        let base = "mode = ports\nphi = 1\n";
        assert!(matches!(
            parse_config(&format!("{base}delta_over_w = -0.1")),
            Err(ConfigError::OutOfRange { .. })
        ));
        assert!(matches!(
            parse_config(&format!("{base}delta_over_w = 0.1\nr = 1.5")),
            Err(ConfigError::OutOfRange { .. })
        ));
        assert!(matches!(
            parse_config("mode = sweep\nphi_steps = 1"),
            Err(ConfigError::OutOfRange { .. })
        ));
        assert!(matches!(
            parse_config("mode = sweep\nphi_min = 2\nphi_max = 1"),
            Err(ConfigError::OutOfRange { .. })
        ));
        assert!(matches!(
            parse_config("mode = distributions\nphi = 1\ndelta_over_w = 0.1\ngrid_points = 400"),
            Err(ConfigError::OutOfRange { .. })
        ));
        assert!(matches!(
            parse_config("mode = teleport"),
            Err(ConfigError::OutOfRange { .. })
        ));
        assert!(matches!(
            parse_config("mode = sweep\nformat = xml"),
            Err(ConfigError::OutOfRange { .. })
        ));
    }

    #[test]
    fn command_line_overrides_file() {
        let mut doc = ConfigDoc::parse("mode = ports\nphi = 1\ndelta_over_w = 0.1").unwrap();
        doc.set("delta-over-w", "0.5").unwrap();
        doc.set("format", "json").unwrap();
        assert!(doc.set("nonsense", "1").is_err());
        let cfg = RunConfig::from_doc(&doc).unwrap();
        assert_eq!(cfg.format, Format::Json);
        match cfg.job {
            Job::Ports { params } => assert_eq!(params.delta(), 0.5),
            other => panic!("unexpected job {other:?}"),
        }
    }

    #[test]
    fn sweep_defaults() {
        let cfg = parse_config("mode = sweep").unwrap();
        let Job::Sweep(spec) = cfg.job else { panic!() };
        assert_eq!(spec.delta_over_w.values().len(), 101);
        assert_eq!(spec.phi.values()[100], 2.0 * PI);
        assert_eq!(spec.delta_over_w.values()[0], 0.0);
    }

    #[test]
    fn design_requires_inputs() {
        let err = parse_config("mode = design\nseparation_m = 2e-3").unwrap_err();
        let ConfigError::MissingKeys(keys) = err else {
            panic!()
        };
        assert_eq!(keys.len(), 4);
        let cfg = parse_config(
            "mode = design\nseparation_m = 2e-3\nlength_m = 0.04\nspeed_m_per_s = 2e6\n\
             dx0_transverse_m = 1e-5\ndx0_longitudinal_m = 2e-7\ntune_alpha = 3",
        )
        .unwrap();
        let Job::Design { inputs, tune } = cfg.job else {
            panic!()
        };
        assert_eq!(inputs, ExperimentInputs::REFERENCE);
        assert_eq!(tune, Some(TuneMode::Target(3)));
    }
}
