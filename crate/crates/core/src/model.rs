//! Network parameterization.
//!
//! A [`Scenario`] holds the statistics of every link: the mean squared
//! magnitude (variance) of each Rayleigh-faded coefficient, the total transmit
//! power and the receiver noise variance. [`FigureParams`] is the equivalent
//! ratio form, main-to-eavesdropper ratio (MER) in dB plus three per-relay
//! variance ratios, which is how the reference curves are parameterized.

use serde::{Deserialize, Serialize};

use crate::error::{finite, positive, Error, Result};

/// Boltzmann constant in J/K, at the precision used for the noise model.
pub const BOLTZMANN: f64 = 1.38e-23;

/// Thermal noise variance `κ·T·B` for a receiver at `temperature_k` kelvin
/// with `bandwidth_hz` of bandwidth.
pub fn thermal_noise_variance(temperature_k: f64, bandwidth_hz: f64) -> Result<f64> {
    let t = positive("temperature", temperature_k)?;
    let b = positive("bandwidth", bandwidth_hz)?;
    Ok(BOLTZMANN * t * b)
}

/// Converts a power ratio in dB to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear power ratio to dB.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Variances of the three links touching relay `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelayVariances {
    /// `E|h_si|²`, source to relay.
    pub si: f64,
    /// `E|h_id|²`, relay to destination.
    pub id: f64,
    /// `E|h_ie|²`, relay to eavesdropper.
    pub ie: f64,
}

impl RelayVariances {
    pub fn new(si: f64, id: f64, ie: f64) -> Self {
        RelayVariances { si, id, ie }
    }

    fn validate(&self) -> Result<()> {
        positive("sigma2_si", self.si)?;
        positive("sigma2_id", self.id)?;
        positive("sigma2_ie", self.ie)?;
        Ok(())
    }
}

/// Statistical description of the network. Immutable once built; every
/// variance, the power and the noise variance are strictly positive.
///
/// A scenario with zero relays is valid and only supports the direct scheme.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    sigma2_sd: f64,
    sigma2_se: f64,
    relays: Vec<RelayVariances>,
    power: f64,
    noise_var: f64,
}

impl Scenario {
    /// Unit power and unit noise variance. Intercept events do not depend on
    /// either, so these defaults only matter for capacities and the
    /// secrecy-ratio selection metric.
    pub const DEFAULT_POWER: f64 = 1.0;
    pub const DEFAULT_NOISE_VAR: f64 = 1.0;

    pub fn new(sigma2_sd: f64, sigma2_se: f64, relays: Vec<RelayVariances>) -> Result<Self> {
        positive("sigma2_sd", sigma2_sd)?;
        positive("sigma2_se", sigma2_se)?;
        for relay in &relays {
            relay.validate()?;
        }
        Ok(Scenario {
            sigma2_sd,
            sigma2_se,
            relays,
            power: Self::DEFAULT_POWER,
            noise_var: Self::DEFAULT_NOISE_VAR,
        })
    }

    /// `relay_count` relays that all share the same variance triple.
    pub fn homogeneous(
        sigma2_sd: f64,
        sigma2_se: f64,
        relay_count: usize,
        relay: RelayVariances,
    ) -> Result<Self> {
        Self::new(sigma2_sd, sigma2_se, vec![relay; relay_count])
    }

    /// Builds a scenario from per-relay variance lists, which must all have
    /// the same length.
    pub fn from_lists(
        sigma2_sd: f64,
        sigma2_se: f64,
        sigma2_si: &[f64],
        sigma2_id: &[f64],
        sigma2_ie: &[f64],
    ) -> Result<Self> {
        let m = sigma2_si.len();
        if sigma2_id.len() != m || sigma2_ie.len() != m {
            return Err(Error::RelayListLengths {
                si: m,
                id: sigma2_id.len(),
                ie: sigma2_ie.len(),
            });
        }
        let relays = (0..m)
            .map(|i| RelayVariances::new(sigma2_si[i], sigma2_id[i], sigma2_ie[i]))
            .collect();
        Self::new(sigma2_sd, sigma2_se, relays)
    }

    pub fn with_power(mut self, power: f64) -> Result<Self> {
        self.power = positive("power", power)?;
        Ok(self)
    }

    pub fn with_noise_var(mut self, noise_var: f64) -> Result<Self> {
        self.noise_var = positive("noise_var", noise_var)?;
        Ok(self)
    }

    pub fn relay_count(&self) -> usize {
        self.relays.len()
    }

    pub fn sigma2_sd(&self) -> f64 {
        self.sigma2_sd
    }

    pub fn sigma2_se(&self) -> f64 {
        self.sigma2_se
    }

    pub fn relays(&self) -> &[RelayVariances] {
        &self.relays
    }

    pub fn relay(&self, index: usize) -> Result<&RelayVariances> {
        self.relays.get(index).ok_or(Error::RelayIndexOutOfRange {
            index,
            count: self.relays.len(),
        })
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn noise_var(&self) -> f64 {
        self.noise_var
    }

    /// Main-to-eavesdropper ratio `λ_de = σ_sd² / σ_se²` (linear).
    pub fn mer(&self) -> f64 {
        self.sigma2_sd / self.sigma2_se
    }

    /// True when every relay has the same variance triple. The max-min closed
    /// form weights each relay by `1/M`, which is exact only in this case.
    pub fn is_homogeneous(&self) -> bool {
        self.relays.windows(2).all(|w| w[0] == w[1])
    }

    /// The same scenario with every variance multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        positive("scale factor", factor)?;
        let relays = self
            .relays
            .iter()
            .map(|r| RelayVariances::new(r.si * factor, r.id * factor, r.ie * factor))
            .collect();
        Scenario::new(self.sigma2_sd * factor, self.sigma2_se * factor, relays)?
            .with_power(self.power)?
            .with_noise_var(self.noise_var)
    }

    /// Scenario with one more relay appended.
    pub fn with_extra_relay(&self, relay: RelayVariances) -> Result<Self> {
        relay.validate()?;
        let mut next = self.clone();
        next.relays.push(relay);
        Ok(next)
    }
}

/// Ratio parameterization used by the MER and relay-count curves:
///
/// - `alpha_si = σ_si² / σ_sd²`
/// - `alpha_id = σ_id² / σ_sd²`
/// - `alpha_ie = σ_ie² / σ_se²`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FigureParams {
    pub mer_db: f64,
    pub alpha_si: f64,
    pub alpha_id: f64,
    pub alpha_ie: f64,
    pub relay_count: usize,
    pub power: f64,
    pub noise_var: f64,
}

impl Default for FigureParams {
    fn default() -> Self {
        FigureParams {
            mer_db: 0.0,
            alpha_si: 1.0,
            alpha_id: 1.0,
            alpha_ie: 1.0,
            relay_count: 1,
            power: Scenario::DEFAULT_POWER,
            noise_var: Scenario::DEFAULT_NOISE_VAR,
        }
    }
}

impl FigureParams {
    /// Expands the ratios into variances with `σ_sd² = 1`. Every relay gets
    /// the same variance triple.
    pub fn to_scenario(&self) -> Result<Scenario> {
        finite("mer_db", self.mer_db)?;
        let alpha_si = positive("alpha_si", self.alpha_si)?;
        let alpha_id = positive("alpha_id", self.alpha_id)?;
        let alpha_ie = positive("alpha_ie", self.alpha_ie)?;

        let sigma2_sd = 1.0;
        let sigma2_se = db_to_linear(-self.mer_db);
        let relay = RelayVariances::new(
            alpha_si * sigma2_sd,
            alpha_id * sigma2_sd,
            alpha_ie * sigma2_se,
        );
        Scenario::homogeneous(sigma2_sd, sigma2_se, self.relay_count, relay)?
            .with_power(self.power)?
            .with_noise_var(self.noise_var)
    }
}
