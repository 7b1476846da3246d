//! Plain-text key/value config (TOML syntax). Keys are the sweep field
//! names; any key may be omitted and command-line flags take precedence.
//!
//! ```toml
//! variable = "relay_count"
//! from = 1
//! to = 8
//! step = 1
//! mer_db = 5.0
//! alpha_si = 1.0
//! schemes = ["maxmin", "proposed"]
//! trials = 100000
//! seed = 7
//! confidence_level = 0.99
//! ```

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use relaysec::{FigureParams, SchemeId, SweepSpec, SweepVariable};

pub const DEFAULT_SIMULATE_TRIALS: u64 = 1_000_000;
pub const DEFAULT_CONFIDENCE: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Analytic,
    Simulate,
    Sweep,
}

/// `schemes = "direct,maxmin"` or `schemes = ["direct", "maxmin"]`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum SchemeList {
    Joined(String),
    List(Vec<String>),
}

impl From<Vec<String>> for SchemeList {
    fn from(list: Vec<String>) -> Self {
        SchemeList::List(list)
    }
}

impl SchemeList {
    fn parse(&self) -> Result<Vec<SchemeId>> {
        let names: Vec<&str> = match self {
            SchemeList::Joined(s) => s.split(',').collect(),
            SchemeList::List(v) => v.iter().map(String::as_str).collect(),
        };
        names
            .into_iter()
            .filter(|n| !n.trim().is_empty())
            .map(|n| n.parse::<SchemeId>().map_err(Into::into))
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub variable: Option<String>,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub step: Option<f64>,
    pub mer_db: Option<f64>,
    pub alpha_si: Option<f64>,
    pub alpha_id: Option<f64>,
    pub alpha_ie: Option<f64>,
    pub relay_count: Option<usize>,
    pub power: Option<f64>,
    pub noise_var: Option<f64>,
    pub schemes: Option<SchemeList>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub confidence_level: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Values from `over` win wherever they are set.
    pub fn merged_with(self, over: ConfigFile) -> ConfigFile {
        ConfigFile {
            variable: over.variable.or(self.variable),
            from: over.from.or(self.from),
            to: over.to.or(self.to),
            step: over.step.or(self.step),
            mer_db: over.mer_db.or(self.mer_db),
            alpha_si: over.alpha_si.or(self.alpha_si),
            alpha_id: over.alpha_id.or(self.alpha_id),
            alpha_ie: over.alpha_ie.or(self.alpha_ie),
            relay_count: over.relay_count.or(self.relay_count),
            power: over.power.or(self.power),
            noise_var: over.noise_var.or(self.noise_var),
            schemes: over.schemes.or(self.schemes),
            trials: over.trials.or(self.trials),
            seed: over.seed.or(self.seed),
            confidence_level: over.confidence_level.or(self.confidence_level),
        }
    }

    pub fn into_spec(self, mode: Mode) -> Result<SweepSpec> {
        let variable = match &self.variable {
            Some(v) => v.parse::<SweepVariable>()?,
            None => SweepVariable::MerDb,
        };
        let defaults = match variable {
            SweepVariable::MerDb => SweepSpec::mer_default(1),
            SweepVariable::RelayCount => SweepSpec::relay_default(),
        };

        let base = FigureParams {
            mer_db: self.mer_db.unwrap_or(defaults.base.mer_db),
            alpha_si: self.alpha_si.unwrap_or(defaults.base.alpha_si),
            alpha_id: self.alpha_id.unwrap_or(defaults.base.alpha_id),
            alpha_ie: self.alpha_ie.unwrap_or(defaults.base.alpha_ie),
            relay_count: self.relay_count.unwrap_or(defaults.base.relay_count),
            power: self.power.unwrap_or(defaults.base.power),
            noise_var: self.noise_var.unwrap_or(defaults.base.noise_var),
        };

        let trials = match (mode, self.trials) {
            (Mode::Analytic, Some(t)) if t > 0 => {
                bail!("the analytic command runs no trials; use simulate")
            }
            (Mode::Analytic, _) => 0,
            (Mode::Simulate, Some(0)) => bail!("simulate needs at least one trial"),
            (Mode::Simulate, t) => t.unwrap_or(DEFAULT_SIMULATE_TRIALS),
            (Mode::Sweep, t) => t.unwrap_or(0),
        };

        let schemes = match &self.schemes {
            Some(list) => list.parse()?,
            None if mode == Mode::Sweep => defaults.schemes.clone(),
            None if base.relay_count == 0 => vec![SchemeId::Direct],
            None => SchemeId::ALL.to_vec(),
        };
        if schemes.is_empty() {
            bail!("no schemes requested");
        }

        let (from, to, step) = if mode == Mode::Sweep {
            (
                self.from.unwrap_or(defaults.from),
                self.to.unwrap_or(defaults.to),
                self.step.unwrap_or(defaults.step),
            )
        } else {
            if self.variable.is_some()
                || self.from.is_some()
                || self.to.is_some()
                || self.step.is_some()
            {
                bail!("variable/from/to/step only apply to the sweep command");
            }
            (base.mer_db, base.mer_db, 1.0)
        };

        Ok(SweepSpec {
            variable: if mode == Mode::Sweep {
                variable
            } else {
                SweepVariable::MerDb
            },
            from,
            to,
            step,
            base,
            schemes,
            trials,
            seed: self.seed.unwrap_or(0),
            confidence_level: self.confidence_level.unwrap_or(DEFAULT_CONFIDENCE),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_key() {
        let cfg = ConfigFile::parse(
            r#"
            # relay-count curve
            variable = "relay_count"
            from = 1
            to = 4
            step = 1
            mer_db = 5.0
            alpha_si = 1.0
            alpha_id = 2.0
            alpha_ie = 0.5
            relay_count = 3
            power = 2.0
            noise_var = 0.5
            schemes = ["maxmin", "proposed"]
            trials = 1000
            seed = 7
            confidence_level = 0.95
            "#,
        )
        .unwrap();
        let spec = cfg.into_spec(Mode::Sweep).unwrap();
        assert_eq!(spec.variable, SweepVariable::RelayCount);
        assert_eq!((spec.from, spec.to, spec.step), (1.0, 4.0, 1.0));
        assert_eq!(spec.base.alpha_id, 2.0);
        assert_eq!(spec.base.noise_var, 0.5);
        assert_eq!(spec.schemes, vec![SchemeId::MaxMin, SchemeId::Proposed]);
        assert_eq!(
            (spec.trials, spec.seed, spec.confidence_level),
            (1000, 7, 0.95)
        );
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ConfigFile::parse("relays = 3").is_err());
    }

    #[test]
    fn joined_scheme_string() {
        let cfg = ConfigFile::parse(r#"schemes = "direct, proposed""#).unwrap();
        let spec = cfg.into_spec(Mode::Sweep).unwrap();
        assert_eq!(spec.schemes, vec![SchemeId::Direct, SchemeId::Proposed]);
    }

    #[test]
    fn flags_override_file() {
        let file = ConfigFile::parse("seed = 1\ntrials = 10\nmer_db = 3.0").unwrap();
        let flags = ConfigFile {
            seed: Some(2),
            ..Default::default()
        };
        let spec = file.merged_with(flags).into_spec(Mode::Sweep).unwrap();
        assert_eq!(spec.seed, 2);
        assert_eq!(spec.trials, 10);
        assert_eq!(spec.base.mer_db, 3.0);
    }

    #[test]
    fn mode_defaults() {
        let spec = ConfigFile::default().into_spec(Mode::Sweep).unwrap();
        assert_eq!((spec.from, spec.to, spec.step), (0.0, 20.0, 1.0));
        assert_eq!(spec.trials, 0);

        let spec = ConfigFile {
            variable: Some("relay_count".into()),
            ..Default::default()
        }
        .into_spec(Mode::Sweep)
        .unwrap();
        assert_eq!((spec.from, spec.to), (1.0, 8.0));
        assert_eq!(spec.base.mer_db, 5.0);

        let spec = ConfigFile::default().into_spec(Mode::Simulate).unwrap();
        assert_eq!(spec.trials, DEFAULT_SIMULATE_TRIALS);
        assert_eq!(spec.grid().unwrap().len(), 1);

        let spec = ConfigFile {
            relay_count: Some(0),
            ..Default::default()
        }
        .into_spec(Mode::Analytic)
        .unwrap();
        assert_eq!(spec.schemes, vec![SchemeId::Direct]);
    }

    #[test]
    fn mode_conflicts() {
        let with_trials = ConfigFile {
            trials: Some(5),
            ..Default::default()
        };
        assert!(with_trials.into_spec(Mode::Analytic).is_err());
        let zero = ConfigFile {
            trials: Some(0),
            ..Default::default()
        };
        assert!(zero.into_spec(Mode::Simulate).is_err());
        let ranged = ConfigFile {
            from: Some(1.0),
            ..Default::default()
        };
        assert!(ranged.into_spec(Mode::Simulate).is_err());
        let bad = ConfigFile {
            schemes: Some(SchemeList::Joined("af".into())),
            ..Default::default()
        };
        assert!(bad.into_spec(Mode::Sweep).is_err());
    }
}
