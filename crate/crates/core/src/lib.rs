//! Simulation and analysis toolkit for asynchronous slotted amplify-and-forward
//! (SAF) relay networks.
//!
//! The crate is organised in three layers:
//!
//! * [`model`] and [`fading`] hold the network description (relay count, slot
//!   geometry, asynchrony model and delay profile) and the Rayleigh fade sampler.
//! * [`matrix`] traces the relay schedule symbol by symbol and produces the
//!   frame-level channel matrix `H` (in `y = Hx + w`) as a symbolic matrix over
//!   the fade coefficients, together with drop plans and numeric evaluation.
//! * [`infotheory`] computes Gaussian mutual information, Monte Carlo outage
//!   probabilities, fitted diversity slopes and the closed-form DMT lower bounds.

pub mod fading;
pub mod infotheory;
pub mod matrix;
pub mod model;

pub use fading::{sample_fades, FadeDraw};
pub use model::{validate_config, AsyncModel, ConfigError, DelayProfile, Network, NetworkConfig, Protocol};
