//! Stabilizability/reliability analysis for wireless networked control
//! systems.
//!
//! A control loop closed over a fading wireless link is only stabilizable
//! when the link sustains the rate demanded by the plant's unstable dynamics.
//! This crate computes that interplay in both directions:
//!
//! * [`plant`] — discrete-time LTI plants, their eigenvalue spectra, the
//!   unstable-eigenvalue product `Pi` and the rate threshold `log2(Pi)`.
//! * [`channel`] — path loss, Rayleigh fading, SNR and interference SIR.
//! * [`reliability`] — closed forms for the probability that the link
//!   supports the threshold (equivalently, the probability of asymptotic
//!   stabilizability), with inverses for eigenvalue product and transmit
//!   power.
//! * [`montecarlo`] — a seeded, stream-parallel sampling oracle that
//!   cross-checks every closed form.
//! * [`scenario`] — config-driven sweeps and CSV artifacts.
//! * [`config`] — the JSON case configs consumed by the CLI.

pub mod channel;
pub mod config;
pub mod error;
pub mod montecarlo;
pub mod plant;
pub mod reliability;
pub mod scenario;

pub use error::{Error, Result};
