//! Seeded Monte-Carlo estimation of intercept probabilities.
//!
//! Trial `k` of a run with seed `s` draws its gains from ChaCha8 keyed by `s`
//! on stream `k`, so every trial has its own substream and the result does not
//! depend on how trials are split across worker threads. Intercepts are
//! counted as integers, which makes the reduction order-independent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::capacity::{ChannelDraw, RelayGains};
use crate::error::{Error, Result};
use crate::model::Scenario;
use crate::selection::{intercept_event, SchemeId};

/// Trials per parallel work unit.
const BLOCK: u64 = 4096;

/// Empirical intercept probability with a Wilson score interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterceptEstimate {
    pub scheme: SchemeId,
    pub trials: u64,
    pub intercepts: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence_level: f64,
    pub seed: u64,
}

impl InterceptEstimate {
    pub fn from_counts(
        scheme: SchemeId,
        intercepts: u64,
        trials: u64,
        confidence_level: f64,
        seed: u64,
    ) -> Result<Self> {
        let (ci_low, ci_high) = wilson_interval(intercepts, trials, confidence_level)?;
        Ok(InterceptEstimate {
            scheme,
            trials,
            intercepts,
            p_hat: intercepts as f64 / trials as f64,
            ci_low,
            ci_high,
            confidence_level,
            seed,
        })
    }

    pub fn contains(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }
}

fn check_confidence(level: f64) -> Result<f64> {
    if level > 0.0 && level < 1.0 {
        Ok(level)
    } else {
        Err(Error::InvalidConfidence(level))
    }
}

/// Two-sided standard normal quantile for `confidence_level`.
pub fn z_score(confidence_level: f64) -> Result<f64> {
    let level = check_confidence(confidence_level)?;
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    Ok(normal.inverse_cdf(0.5 + level / 2.0))
}

/// Wilson score interval for `successes` out of `trials` Bernoulli trials.
/// The bounds are clamped to `[0, 1]` and always bracket `successes/trials`.
pub fn wilson_interval(successes: u64, trials: u64, confidence_level: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let z = z_score(confidence_level)?;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let low = (center - half).max(0.0).min(p);
    let high = (center + half).min(1.0).max(p);
    Ok((low, high))
}

/// The generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Inverse-CDF exponential sample with mean `variance` from `u ∈ (0, 1]`.
#[inline]
pub fn exponential_from_uniform(variance: f64, u: f64) -> f64 {
    -variance * u.ln()
}

/// Uniform on `(0, 1]`.
#[inline]
fn open_closed_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

#[inline]
fn exponential<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> f64 {
    exponential_from_uniform(variance, open_closed_unit(rng))
}

/// Draws one Rayleigh-fading realization: `|h_sd|²`, `|h_se|²`, then
/// `|h_si|²`, `|h_id|²`, `|h_ie|²` for each relay in order.
pub fn sample_draw<R: Rng + ?Sized>(s: &Scenario, rng: &mut R) -> ChannelDraw {
    let mut draw = ChannelDraw {
        g_sd: 0.0,
        g_se: 0.0,
        relays: Vec::with_capacity(s.relay_count()),
    };
    sample_into(s, rng, &mut draw);
    draw
}

fn sample_into<R: Rng + ?Sized>(s: &Scenario, rng: &mut R, draw: &mut ChannelDraw) {
    draw.g_sd = exponential(rng, s.sigma2_sd());
    draw.g_se = exponential(rng, s.sigma2_se());
    draw.relays.clear();
    for r in s.relays() {
        let si = exponential(rng, r.si);
        let id = exponential(rng, r.id);
        let ie = exponential(rng, r.ie);
        draw.relays.push(RelayGains::new(si, id, ie));
    }
}

/// Estimates every scheme in `schemes` from the same `trials` draws.
///
/// Output order follows `schemes`. Identical inputs give bit-identical
/// results regardless of the rayon thread count.
pub fn estimate_schemes(
    schemes: &[SchemeId],
    s: &Scenario,
    trials: u64,
    seed: u64,
    confidence_level: f64,
) -> Result<Vec<InterceptEstimate>> {
    check_confidence(confidence_level)?;
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    if s.relay_count() == 0 && schemes.iter().any(SchemeId::uses_relays) {
        return Err(Error::NoRelays);
    }

    let base = ChaCha8Rng::seed_from_u64(seed);
    let blocks = trials.div_ceil(BLOCK);
    let counts = (0..blocks)
        .into_par_iter()
        .map(|block| -> Result<Vec<u64>> {
            let mut counts = vec![0u64; schemes.len()];
            let mut draw = ChannelDraw {
                g_sd: 0.0,
                g_se: 0.0,
                relays: Vec::with_capacity(s.relay_count()),
            };
            let start = block * BLOCK;
            let end = (start + BLOCK).min(trials);
            for trial in start..end {
                let mut rng = base.clone();
                rng.set_stream(trial);
                sample_into(s, &mut rng, &mut draw);
                for (count, &scheme) in counts.iter_mut().zip(schemes) {
                    if intercept_event(scheme, &draw, s)? {
                        *count += 1;
                    }
                }
            }
            Ok(counts)
        })
        .try_reduce(
            || vec![0u64; schemes.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;

    schemes
        .iter()
        .zip(counts)
        .map(|(&scheme, intercepts)| {
            InterceptEstimate::from_counts(scheme, intercepts, trials, confidence_level, seed)
        })
        .collect()
}

/// Monte-Carlo estimate of one scheme's intercept probability.
pub fn estimate_intercept(
    scheme: SchemeId,
    s: &Scenario,
    trials: u64,
    seed: u64,
    confidence_level: f64,
) -> Result<InterceptEstimate> {
    let mut estimates = estimate_schemes(&[scheme], s, trials, seed, confidence_level)?;
    Ok(estimates.remove(0))
}
