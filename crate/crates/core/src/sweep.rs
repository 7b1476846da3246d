//! Parameter sweeps over MER or relay count, producing plot-ready rows.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::intercept_probability;
use crate::error::{Error, Result};
use crate::model::FigureParams;
use crate::montecarlo::estimate_schemes;
use crate::selection::SchemeId;

/// Swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    MerDb,
    RelayCount,
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepVariable::MerDb => "mer_db",
            SweepVariable::RelayCount => "relay_count",
        })
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "mer_db" | "mer-db" | "mer" => Ok(SweepVariable::MerDb),
            "relay_count" | "relay-count" | "relays" => Ok(SweepVariable::RelayCount),
            other => Err(Error::InvalidSweep(format!(
                "unknown sweep variable {other:?} (expected mer_db or relay_count)"
            ))),
        }
    }
}

/// A grid request. `base` fixes every parameter except the swept one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub step: f64,
    pub base: FigureParams,
    pub schemes: Vec<SchemeId>,
    /// Monte-Carlo trials per grid point; 0 runs the closed forms only.
    pub trials: u64,
    pub seed: u64,
    pub confidence_level: f64,
}

impl SweepSpec {
    /// MER from 0 to 20 dB in 1 dB steps, all relays at unit ratios.
    pub fn mer_default(relay_count: usize) -> Self {
        SweepSpec {
            variable: SweepVariable::MerDb,
            from: 0.0,
            to: 20.0,
            step: 1.0,
            base: FigureParams {
                relay_count,
                ..Default::default()
            },
            schemes: SchemeId::ALL.to_vec(),
            trials: 0,
            seed: 0,
            confidence_level: 0.99,
        }
    }

    /// One to eight relays at 5 dB MER, both relay schemes.
    pub fn relay_default() -> Self {
        SweepSpec {
            variable: SweepVariable::RelayCount,
            from: 1.0,
            to: 8.0,
            step: 1.0,
            base: FigureParams {
                mer_db: 5.0,
                ..Default::default()
            },
            schemes: vec![SchemeId::MaxMin, SchemeId::Proposed],
            trials: 0,
            seed: 0,
            confidence_level: 0.99,
        }
    }

    /// Schemes deduplicated in canonical order.
    pub fn ordered_schemes(&self) -> Vec<SchemeId> {
        let mut schemes = self.schemes.clone();
        schemes.sort();
        schemes.dedup();
        schemes
    }

    /// Every grid point, in ascending order of the swept variable.
    pub fn grid(&self) -> Result<Vec<FigureParams>> {
        for (name, v) in [("from", self.from), ("to", self.to), ("step", self.step)] {
            if !v.is_finite() {
                return Err(Error::InvalidSweep(format!(
                    "{name} must be finite, got {v}"
                )));
            }
        }
        if self.step <= 0.0 {
            return Err(Error::InvalidSweep(format!(
                "step must be positive, got {}",
                self.step
            )));
        }
        if self.from > self.to {
            return Err(Error::EmptyGrid);
        }
        if self.schemes.is_empty() {
            return Err(Error::InvalidSweep("no schemes requested".into()));
        }

        match self.variable {
            SweepVariable::MerDb => {
                // Index-based points so 0.1-sized steps do not drift.
                let count = ((self.to - self.from) / self.step + 1e-9).floor() as usize + 1;
                Ok((0..count)
                    .map(|k| FigureParams {
                        mer_db: self.from + k as f64 * self.step,
                        ..self.base
                    })
                    .collect())
            }
            SweepVariable::RelayCount => {
                for (name, v) in [("from", self.from), ("to", self.to), ("step", self.step)] {
                    if v.fract() != 0.0 || v < 0.0 {
                        return Err(Error::InvalidSweep(format!(
                            "relay-count {name} must be a non-negative integer, got {v}"
                        )));
                    }
                }
                let (from, to, step) = (self.from as usize, self.to as usize, self.step as usize);
                Ok((from..=to)
                    .step_by(step)
                    .map(|relay_count| FigureParams {
                        relay_count,
                        ..self.base
                    })
                    .collect())
            }
        }
    }
}

/// One output record: a scheme evaluated at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub scheme: SchemeId,
    pub relay_count: usize,
    pub mer_db: f64,
    pub alpha_si: f64,
    pub alpha_id: f64,
    pub alpha_ie: f64,
    pub analytic: f64,
    pub mc_p_hat: Option<f64>,
    pub mc_ci_low: Option<f64>,
    pub mc_ci_high: Option<f64>,
    pub trials: u64,
    pub seed: u64,
}

/// Evaluates `schemes` at one parameter point, one row per scheme in the
/// order given. Monte-Carlo columns are filled only when `trials > 0`, and
/// all schemes then share the same draws.
pub fn run_point(
    fp: &FigureParams,
    schemes: &[SchemeId],
    trials: u64,
    seed: u64,
    confidence_level: f64,
) -> Result<Vec<SweepRow>> {
    let scenario = fp.to_scenario()?;
    let estimates = if trials > 0 {
        Some(estimate_schemes(
            schemes,
            &scenario,
            trials,
            seed,
            confidence_level,
        )?)
    } else {
        None
    };

    schemes
        .iter()
        .enumerate()
        .map(|(k, &scheme)| {
            let est = estimates.as_ref().map(|e| &e[k]);
            Ok(SweepRow {
                scheme,
                relay_count: fp.relay_count,
                mer_db: fp.mer_db,
                alpha_si: fp.alpha_si,
                alpha_id: fp.alpha_id,
                alpha_ie: fp.alpha_ie,
                analytic: intercept_probability(scheme, &scenario)?,
                mc_p_hat: est.map(|e| e.p_hat),
                mc_ci_low: est.map(|e| e.ci_low),
                mc_ci_high: est.map(|e| e.ci_high),
                trials,
                seed,
            })
        })
        .collect()
}

/// Runs every grid point. Rows come out in ascending sweep order, then in
/// canonical scheme order, independent of how points are scheduled.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let grid = spec.grid()?;
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let schemes = spec.ordered_schemes();
    let per_point: Vec<Vec<SweepRow>> = grid
        .par_iter()
        .map(|fp| run_point(fp, &schemes, spec.trials, spec.seed, spec.confidence_level))
        .collect::<Result<_>>()?;
    Ok(per_point.into_iter().flatten().collect())
}
