//! Instantaneous capacities on one fading realization.
//!
//! All rates are in bits per channel use. Relay hops transmit at half the
//! total power, `P/2` at the source and `P/2` at the relay.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Scenario;

/// Realized squared magnitudes of the three links touching one relay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelayGains {
    /// `|h_si|²`
    pub si: f64,
    /// `|h_id|²`
    pub id: f64,
    /// `|h_ie|²`
    pub ie: f64,
}

impl RelayGains {
    pub fn new(si: f64, id: f64, ie: f64) -> Self {
        RelayGains { si, id, ie }
    }

    /// Bottleneck gain of the two-hop main path, `min(|h_si|², |h_id|²)`.
    #[inline]
    pub fn main_min(&self) -> f64 {
        self.si.min(self.id)
    }

    /// The eavesdropper decodes at least as well as the destination on this
    /// relay's path.
    #[inline]
    pub fn intercepted(&self) -> bool {
        self.main_min() < self.ie
    }
}

/// One joint realization of every squared channel magnitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelDraw {
    /// `|h_sd|²`
    pub g_sd: f64,
    /// `|h_se|²`
    pub g_se: f64,
    pub relays: Vec<RelayGains>,
}

fn gain(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidGain { name, value })
    }
}

impl ChannelDraw {
    pub fn new(g_sd: f64, g_se: f64, relays: Vec<RelayGains>) -> Result<Self> {
        gain("g_sd", g_sd)?;
        gain("g_se", g_se)?;
        for r in &relays {
            gain("g_si", r.si)?;
            gain("g_id", r.id)?;
            gain("g_ie", r.ie)?;
        }
        Ok(ChannelDraw { g_sd, g_se, relays })
    }

    /// Draw with no relays, for the direct link only.
    pub fn direct(g_sd: f64, g_se: f64) -> Result<Self> {
        Self::new(g_sd, g_se, Vec::new())
    }

    pub fn relay_count(&self) -> usize {
        self.relays.len()
    }

    /// Every gain multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> ChannelDraw {
        ChannelDraw {
            g_sd: self.g_sd * factor,
            g_se: self.g_se * factor,
            relays: self
                .relays
                .iter()
                .map(|r| RelayGains::new(r.si * factor, r.id * factor, r.ie * factor))
                .collect(),
        }
    }

    pub(crate) fn check_against(&self, s: &Scenario) -> Result<()> {
        if self.relays.len() != s.relay_count() {
            return Err(Error::RelayCountMismatch {
                draw: self.relays.len(),
                scenario: s.relay_count(),
            });
        }
        Ok(())
    }

    pub(crate) fn relay(&self, index: usize) -> Result<&RelayGains> {
        self.relays.get(index).ok_or(Error::RelayIndexOutOfRange {
            index,
            count: self.relays.len(),
        })
    }
}

#[inline]
fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / LN_2
}

/// Capacity of a single link, `log2(1 + gain·power/noise_var)`.
#[inline]
pub fn direct_capacity(gain: f64, power: f64, noise_var: f64) -> f64 {
    log2_1p(gain * power / noise_var)
}

/// Secrecy capacity of direct transmission: main-link capacity minus
/// wiretap-link capacity. Negative means the eavesdropper can intercept.
pub fn direct_secrecy(d: &ChannelDraw, s: &Scenario) -> Result<f64> {
    d.check_against(s)?;
    let (p, n) = (s.power(), s.noise_var());
    Ok(direct_capacity(d.g_sd, p, n) - direct_capacity(d.g_se, p, n))
}

/// Two-hop DF capacity through relay `i`, limited by the weaker hop.
pub fn df_capacity(i: usize, d: &ChannelDraw, s: &Scenario) -> Result<f64> {
    d.check_against(s)?;
    let r = d.relay(i)?;
    Ok(direct_capacity(
        r.main_min(),
        s.power() / 2.0,
        s.noise_var(),
    ))
}

/// Capacity of the relay `i` to eavesdropper link while the relay forwards.
pub fn df_eavesdropper_capacity(i: usize, d: &ChannelDraw, s: &Scenario) -> Result<f64> {
    d.check_against(s)?;
    let r = d.relay(i)?;
    Ok(direct_capacity(r.ie, s.power() / 2.0, s.noise_var()))
}

/// Secrecy capacity of DF relaying through relay `i`.
pub fn df_secrecy(i: usize, d: &ChannelDraw, s: &Scenario) -> Result<f64> {
    Ok(df_capacity(i, d, s)? - df_eavesdropper_capacity(i, d, s)?)
}
