//! Relay selection criteria and the per-draw intercept predicate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::capacity::ChannelDraw;
use crate::error::{Error, Result};
use crate::model::Scenario;

/// The three transmission schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeId {
    /// Source to destination, no relay.
    Direct,
    /// Relay chosen by the max-min main-link criterion; ignores the eavesdropper.
    MaxMin,
    /// Relay chosen to maximize the DF secrecy capacity.
    Proposed,
}

impl SchemeId {
    pub const ALL: [SchemeId; 3] = [SchemeId::Direct, SchemeId::MaxMin, SchemeId::Proposed];

    pub fn as_str(&self) -> &'static str {
        match self {
            SchemeId::Direct => "direct",
            SchemeId::MaxMin => "maxmin",
            SchemeId::Proposed => "proposed",
        }
    }

    pub fn uses_relays(&self) -> bool {
        !matches!(self, SchemeId::Direct)
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "direct" => Ok(SchemeId::Direct),
            "maxmin" | "max-min" | "max_min" => Ok(SchemeId::MaxMin),
            "proposed" | "best" => Ok(SchemeId::Proposed),
            _ => Err(Error::UnknownScheme(s.to_string())),
        }
    }
}

/// Index of the first maximum of `metric` over `0..count`.
fn argmax(count: usize, metric: impl Fn(usize) -> f64) -> Result<usize> {
    if count == 0 {
        return Err(Error::NoRelays);
    }
    let mut best = 0;
    let mut best_value = metric(0);
    for i in 1..count {
        let v = metric(i);
        if v > best_value {
            best = i;
            best_value = v;
        }
    }
    Ok(best)
}

/// Relay maximizing `min(|h_si|², |h_id|²)`. Ties go to the lowest index.
pub fn select_max_min(d: &ChannelDraw) -> Result<usize> {
    argmax(d.relays.len(), |i| d.relays[i].main_min())
}

/// Relay maximizing the secrecy ratio
/// `(min(|h_si|², |h_id|²)·P + 2σ²) / (|h_ie|²·P + 2σ²)`.
/// Ties go to the lowest index.
pub fn select_proposed(d: &ChannelDraw, s: &Scenario) -> Result<usize> {
    d.check_against(s)?;
    let p = s.power();
    let two_noise = 2.0 * s.noise_var();
    argmax(d.relays.len(), |i| {
        let r = &d.relays[i];
        (r.main_min() * p + two_noise) / (r.ie * p + two_noise)
    })
}

/// Whether the eavesdropper intercepts this draw under `scheme`, i.e. the
/// scheme's secrecy capacity is strictly negative.
///
/// - Direct: `|h_sd|² < |h_se|²`.
/// - MaxMin: the max-min relay `b` has `min(|h_sb|², |h_bd|²) < |h_be|²`.
/// - Proposed: the secrecy-optimal relay has negative secrecy capacity,
///   which happens exactly when every relay does. The predicate is evaluated
///   in that form so it is exact and independent of `P` and `σ²`.
pub fn intercept_event(scheme: SchemeId, d: &ChannelDraw, s: &Scenario) -> Result<bool> {
    d.check_against(s)?;
    match scheme {
        SchemeId::Direct => Ok(d.g_sd < d.g_se),
        SchemeId::MaxMin => {
            let b = select_max_min(d)?;
            Ok(d.relays[b].intercepted())
        }
        SchemeId::Proposed => {
            if d.relays.is_empty() {
                return Err(Error::NoRelays);
            }
            Ok(d.relays.iter().all(|r| r.intercepted()))
        }
    }
}
