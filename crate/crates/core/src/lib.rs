//! Intercept probability of cooperative decode-and-forward relay networks
//! under an eavesdropper, for three transmission schemes:
//!
//! - [`SchemeId::Direct`]: source talks to destination with no relay,
//! - [`SchemeId::MaxMin`]: the relay maximizing `min(|h_si|², |h_id|²)` forwards,
//! - [`SchemeId::Proposed`]: the relay maximizing the DF secrecy capacity forwards.
//!
//! Every scheme has a closed form ([`analytic`]) and a seeded Monte-Carlo
//! estimator ([`montecarlo`]) so the two can be checked against each other.
//! [`sweep`] and [`output`] turn both into plot data.

pub mod analytic;
pub mod capacity;
mod error;
pub mod model;
pub mod montecarlo;
pub mod output;
pub mod selection;
pub mod sweep;

pub use analytic::{direct_intercept, maxmin_intercept, proposed_intercept, MAX_ENUMERATED_RELAYS};
pub use capacity::{ChannelDraw, RelayGains};
pub use error::{Error, Result};
pub use model::{FigureParams, RelayVariances, Scenario};
pub use montecarlo::{estimate_intercept, estimate_schemes, InterceptEstimate};
pub use output::{emit, Format};
pub use selection::{intercept_event, SchemeId};
pub use sweep::{run_point, run_sweep, SweepRow, SweepSpec, SweepVariable};
