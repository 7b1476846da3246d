//! Shared fixtures for the criterion benchmarks.

use relaysec::{FigureParams, Scenario};

/// Relay-count curve point at 5 dB MER with unit variance ratios.
pub fn relay_point(relay_count: usize) -> Scenario {
    FigureParams {
        mer_db: 5.0,
        relay_count,
        ..Default::default()
    }
    .to_scenario()
    .expect("valid figure parameters")
}
