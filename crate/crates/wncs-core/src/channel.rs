//! Sensor-to-controller wireless link model.
//!
//! A link is described by its large-scale path loss `L_d = d^eta * l0`
//! (calibrated at a 1 m reference distance) and Rayleigh small-scale fading
//! with mean-square gain `omega = E[|h|^2]`. The instantaneous SNR at the
//! controller is `|h|^2 * p_t / (n0 * L_d)`. For multi-loop deployments that
//! share a band, per-loop SIR is formed from exponentially distributed power
//! gains weighted by `d^-eta`.
//!
//! All quantities are linear-scale numerals; nothing here is in dB.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean-square fading gain used when a config omits `omega`.
pub const DEFAULT_OMEGA: f64 = 2.0;

pub(crate) fn default_omega() -> f64 {
    DEFAULT_OMEGA
}

/// Parameters of a single sensor-to-controller link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelParams {
    /// Transmit power of the sensor.
    pub p_t: f64,
    /// AWGN power at the receiver.
    pub n0: f64,
    /// Path loss at the reference distance d0 = 1 m.
    pub l0: f64,
    /// Sensor-controller distance in meters.
    pub d: f64,
    /// Path-loss exponent.
    pub eta: f64,
    /// Mean-square fading gain E[|h|^2].
    #[serde(default = "default_omega")]
    pub omega: f64,
}

impl ChannelParams {
    pub fn new(p_t: f64, n0: f64, l0: f64, d: f64, eta: f64, omega: f64) -> Result<Self> {
        let params = ChannelParams {
            p_t,
            n0,
            l0,
            d,
            eta,
            omega,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("p_t", self.p_t),
            ("n0", self.n0),
            ("l0", self.l0),
            ("eta", self.eta),
            ("omega", self.omega),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::invalid(format!(
                    "channel parameter {name} must be finite and > 0, got {value}"
                )));
            }
        }
        if !(self.d >= 1.0) || !self.d.is_finite() {
            return Err(Error::invalid(format!(
                "distance d must be >= 1 m (the path-loss reference distance), got {}",
                self.d
            )));
        }
        Ok(())
    }

    /// Large-scale path loss `L_d = d^eta * l0`.
    pub fn path_loss(&self) -> f64 {
        self.d.powf(self.eta) * self.l0
    }

    /// Instantaneous SNR for a fading amplitude `|h|`:
    /// `|h|^2 * p_t / (n0 * l0 * d^eta)`.
    pub fn snr(&self, amplitude: f64) -> f64 {
        amplitude * amplitude * self.p_t / (self.n0 * self.path_loss())
    }
}

/// Distances of `K >= 2` co-channel sensor-controller pairs sharing one
/// path-loss exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopTopology {
    /// Distance of each sensor to its own controller, meters.
    pub distances: Vec<f64>,
    /// Shared path-loss exponent.
    pub eta: f64,
}

impl LoopTopology {
    pub fn new(distances: Vec<f64>, eta: f64) -> Result<Self> {
        let topology = LoopTopology { distances, eta };
        topology.validate()?;
        Ok(topology)
    }

    pub fn validate(&self) -> Result<()> {
        if self.distances.len() < 2 {
            return Err(Error::invalid(format!(
                "topology needs at least 2 loops, got {}",
                self.distances.len()
            )));
        }
        if let Some(d) = self.distances.iter().find(|d| !(**d >= 1.0) || !d.is_finite()) {
            return Err(Error::invalid(format!(
                "every loop distance must be >= 1 m, got {d}"
            )));
        }
        if !(self.eta > 0.0) || !self.eta.is_finite() {
            return Err(Error::invalid(format!(
                "eta must be finite and > 0, got {}",
                self.eta
            )));
        }
        Ok(())
    }

    /// Number of loops K.
    pub fn loop_count(&self) -> usize {
        self.distances.len()
    }

    /// `d_i^-eta`, the large-scale weight of loop `i`.
    pub fn weight(&self, i: usize) -> f64 {
        self.distances[i].powf(-self.eta)
    }
}

/// One small-scale fading draw: the Rayleigh amplitude `|h|` together with
/// the unit-mean exponential power gain `|h|^2 / omega` used in SIR cases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingSample {
    pub amplitude: f64,
    pub power_gain: f64,
}

impl FadingSample {
    pub fn draw<R: Rng + ?Sized>(omega: f64, rng: &mut R) -> Self {
        let e = sample_power_gain(rng);
        FadingSample {
            amplitude: (omega * e).sqrt(),
            power_gain: e,
        }
    }
}

/// Uniform draw on the half-open interval (0, 1]; safe to feed to `ln`.
pub fn uniform_open_closed<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Inverse-transform Rayleigh amplitude at quantile `u` in (0, 1]:
/// `|h| = sqrt(-omega * ln u)`, so that `E[|h|^2] = omega`.
pub fn rayleigh_amplitude_from_uniform(omega: f64, u: f64) -> f64 {
    (-omega * u.ln()).sqrt()
}

/// Draw a Rayleigh amplitude with mean-square value `omega`.
pub fn sample_rayleigh_amplitude<R: Rng + ?Sized>(omega: f64, rng: &mut R) -> f64 {
    rayleigh_amplitude_from_uniform(omega, uniform_open_closed(rng))
}

/// Draw a unit-mean exponential power gain (`-ln u`).
pub fn sample_power_gain<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    -uniform_open_closed(rng).ln()
}

/// Signal-to-interference ratio of loop `i` for the given per-loop power
/// gains: `g_i d_i^-eta / sum_{j != i} g_j d_j^-eta`.
///
/// Zero total interference is an error, never an infinity.
pub fn sir(topology: &LoopTopology, i: usize, power_gains: &[f64]) -> Result<f64> {
    let k = topology.loop_count();
    if power_gains.len() != k {
        return Err(Error::invalid(format!(
            "expected {k} power gains, got {}",
            power_gains.len()
        )));
    }
    if i >= k {
        return Err(Error::invalid(format!(
            "loop index {i} out of range for K = {k}"
        )));
    }
    let signal = power_gains[i] * topology.weight(i);
    let interference: f64 = (0..k)
        .filter(|&j| j != i)
        .map(|j| power_gains[j] * topology.weight(j))
        .sum();
    if interference == 0.0 {
        return Err(Error::UndefinedSir);
    }
    Ok(signal / interference)
}
