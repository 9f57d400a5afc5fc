//! Secrecy capacity of the correlated Rayleigh fading wiretap channel.
//!
//! The transmitter knows both instantaneous power gains `h_m` (legitimate
//! receiver) and `h_e` (eavesdropper). The crate evaluates the ergodic
//! secrecy capacity under the optimal power policy, its high-SNR limit
//! (closed form and by quadrature over the gain-ratio density), bounds
//! and asymptotes of that limit, and a Monte Carlo oracle that checks all
//! of them independently. Capacities are in nats.

pub mod capacity;
pub mod channel;
pub mod error;
pub mod montecarlo;
pub mod numerics;
pub mod power;

pub use capacity::{CapacityEstimate, Method, PowerLevel};
pub use channel::{ChannelParams, ChannelSample, ChannelSampler};
pub use error::{Error, Result};
pub use numerics::{Estimate, QuadratureSpec, RootSpec};
pub use power::{PowerConstraint, PowerPolicy};
