//! Closed-form link reliability and its inverses.
//!
//! The reliability `alpha` of a sensor-to-controller link is the probability
//! that the instantaneous Shannon capacity meets the plant's rate threshold
//! `log2(Pi)`, where `Pi` is the product of the plant's unstable eigenvalue
//! magnitudes. By the capacity/threshold equivalence this equals the
//! probability `beta` that the loop is stabilizable at all, so every function
//! here returns a probability of asymptotic stabilizability.
//!
//! Three channel regimes are covered:
//!
//! * **Noise-limited** ([`alpha_noise`]): Rayleigh fading against AWGN. The
//!   capacity condition reduces to `|h|^2 >= n0 l0 d^eta (Pi - 1) / p_t`,
//!   whose probability is the Rayleigh CCDF
//!   `alpha = exp(-n0 l0 d^eta (Pi - 1) / (omega p_t))`.
//! * **Single interference** ([`alpha_single_interference`]): two loops share
//!   the band and noise is negligible; the SIR is a ratio of two unit-mean
//!   exponential gains, giving `alpha_i = 1 / (1 + (Pi - 1) (d_j/d_i)^-eta)`.
//! * **Full interference** ([`alpha_full_interference`]): `K` loops all
//!   interfere. The shipped closed form
//!   `alpha_i = d_i^-eta / (d_i^-eta + sum_j d_j^-eta (Pi - 1))` is an
//!   approximation for K > 2; [`alpha_full_interference_exact`] provides the
//!   exact product-form benchmark
//!   `prod_{j != i} 1 / (1 + (Pi - 1) d_j^-eta / d_i^-eta)` so the
//!   approximation gap can be measured (see `montecarlo` for the sampling
//!   cross-check).

use serde::Serialize;

use crate::channel::{ChannelParams, LoopTopology};
use crate::error::{Error, Result};
use crate::plant::EigenAnalysis;

/// Exponent magnitude beyond which the closed forms clamp to 0 instead of
/// producing subnormal noise.
pub const UNDERFLOW_EXPONENT: f64 = 700.0;

/// How a [`ReliabilityResult`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedFormNoise,
    ClosedFormSingleInterf,
    ClosedFormFullInterf,
    ExactProductForm,
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedFormNoise => "closed_form_noise",
            Method::ClosedFormSingleInterf => "closed_form_single_interf",
            Method::ClosedFormFullInterf => "closed_form_full_interf",
            Method::ExactProductForm => "exact_product_form",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

/// A probability of asymptotic stabilizability plus its provenance.
///
/// `ci_halfwidth` is zero for analytic methods; `underflow` marks values
/// clamped to zero by the [`UNDERFLOW_EXPONENT`] guard.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReliabilityResult {
    pub value: f64,
    pub method: Method,
    pub ci_halfwidth: f64,
    pub underflow: bool,
}

impl ReliabilityResult {
    fn analytic(value: f64, method: Method) -> Self {
        ReliabilityResult {
            value,
            method,
            ci_halfwidth: 0.0,
            underflow: false,
        }
    }
}

fn check_product(unstable_product: f64) -> Result<()> {
    if !(unstable_product >= 1.0) || !unstable_product.is_finite() {
        return Err(Error::invalid(format!(
            "unstable eigenvalue product must be finite and >= 1, got {unstable_product}"
        )));
    }
    Ok(())
}

fn check_loop_index(topology: &LoopTopology, i: usize) -> Result<()> {
    if i >= topology.loop_count() {
        return Err(Error::invalid(format!(
            "loop index {i} out of range for K = {}",
            topology.loop_count()
        )));
    }
    Ok(())
}

/// Noise-limited reliability: the Rayleigh CCDF evaluated at the SNR
/// threshold `Pi - 1`.
pub fn alpha_noise(params: &ChannelParams, unstable_product: f64) -> Result<ReliabilityResult> {
    params.validate()?;
    check_product(unstable_product)?;
    let exponent =
        params.n0 * params.l0 * params.d.powf(params.eta) * (unstable_product - 1.0)
            / (params.omega * params.p_t);
    if exponent > UNDERFLOW_EXPONENT {
        return Ok(ReliabilityResult {
            value: 0.0,
            method: Method::ClosedFormNoise,
            ci_halfwidth: 0.0,
            underflow: true,
        });
    }
    Ok(ReliabilityResult::analytic(
        (-exponent).exp(),
        Method::ClosedFormNoise,
    ))
}

/// Inverse of [`alpha_noise`]: the eigenvalue product a channel can support
/// at reliability `alpha`.
pub fn product_from_alpha(params: &ChannelParams, alpha: f64) -> Result<f64> {
    params.validate()?;
    if alpha == 0.0 {
        return Err(Error::Domain(
            "alpha = 0 has no finite eigenvalue product (log singularity)".to_string(),
        ));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    let scale = params.omega * params.p_t / (params.n0 * params.l0 * params.d.powf(params.eta));
    Ok(1.0 - scale * alpha.ln())
}

/// Probability of asymptotic stabilizability of a plant over a noise-limited
/// link. Identical to [`alpha_noise`] at the plant's unstable product.
pub fn beta(analysis: &EigenAnalysis, params: &ChannelParams) -> Result<ReliabilityResult> {
    alpha_noise(params, analysis.unstable_product)
}

/// Two-loop interference-limited reliability of loop `i`:
/// `1 / (1 + (Pi - 1) (d_j/d_i)^-eta)`.
pub fn alpha_single_interference(
    topology: &LoopTopology,
    i: usize,
    unstable_product: f64,
) -> Result<ReliabilityResult> {
    topology.validate()?;
    if topology.loop_count() != 2 {
        return Err(Error::invalid(format!(
            "single-interference case requires exactly K = 2 loops, got {}",
            topology.loop_count()
        )));
    }
    check_loop_index(topology, i)?;
    check_product(unstable_product)?;
    let j = 1 - i;
    let distance_ratio_term =
        (topology.distances[j] / topology.distances[i]).powf(-topology.eta);
    let value = 1.0 / (1.0 + (unstable_product - 1.0) * distance_ratio_term);
    Ok(ReliabilityResult::analytic(
        value,
        Method::ClosedFormSingleInterf,
    ))
}

/// K-loop interference-limited reliability of loop `i`, as the closed form
/// `d_i^-eta / (d_i^-eta + sum_{j != i} d_j^-eta (Pi - 1))`.
///
/// Exact for K = 2 (where it coincides with
/// [`alpha_single_interference`]); an approximation for K > 2. Use
/// [`alpha_full_interference_exact`] for the exact value.
pub fn alpha_full_interference(
    topology: &LoopTopology,
    i: usize,
    unstable_product: f64,
) -> Result<ReliabilityResult> {
    topology.validate()?;
    check_loop_index(topology, i)?;
    check_product(unstable_product)?;
    let own = topology.weight(i);
    let others: f64 = (0..topology.loop_count())
        .filter(|&j| j != i)
        .map(|j| topology.weight(j))
        .sum();
    let value = own / (own + others * (unstable_product - 1.0));
    Ok(ReliabilityResult::analytic(
        value,
        Method::ClosedFormFullInterf,
    ))
}

/// Exact K-loop interference-limited reliability for independent unit-mean
/// exponential gains: `prod_{j != i} 1 / (1 + (Pi - 1) d_j^-eta / d_i^-eta)`.
///
/// Coincides with [`alpha_full_interference`] at K = 2 and lower-bounds it
/// for K > 2.
pub fn alpha_full_interference_exact(
    topology: &LoopTopology,
    i: usize,
    unstable_product: f64,
) -> Result<ReliabilityResult> {
    topology.validate()?;
    check_loop_index(topology, i)?;
    check_product(unstable_product)?;
    let own = topology.weight(i);
    let threshold = unstable_product - 1.0;
    let value: f64 = (0..topology.loop_count())
        .filter(|&j| j != i)
        .map(|j| 1.0 / (1.0 + threshold * topology.weight(j) / own))
        .product();
    Ok(ReliabilityResult::analytic(value, Method::ExactProductForm))
}

/// Transmit power needed to hit `target_alpha` on a noise-limited link.
///
/// The `p_t` field of `params` is ignored; every other field is used.
pub fn required_power(
    params: &ChannelParams,
    unstable_product: f64,
    target_alpha: f64,
) -> Result<f64> {
    // p_t is the unknown being solved for; validate everything else.
    ChannelParams { p_t: 1.0, ..params.clone() }.validate()?;
    if !(unstable_product > 1.0) || !unstable_product.is_finite() {
        return Err(Error::invalid(format!(
            "required_power needs an unstable product > 1, got {unstable_product}"
        )));
    }
    if !(target_alpha > 0.0 && target_alpha < 1.0) {
        return Err(Error::Domain(format!(
            "target alpha must lie strictly in (0, 1), got {target_alpha}"
        )));
    }
    let numerator =
        params.n0 * params.l0 * params.d.powf(params.eta) * (unstable_product - 1.0);
    Ok(-numerator / (params.omega * target_alpha.ln()))
}
