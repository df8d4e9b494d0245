//! Browser bindings for the demo page.
//!
//! Every export takes and returns JSON strings so the page needs no generated
//! type glue: inputs parse into the core types, failures come back as
//! `{"error": "..."}` objects instead of thrown exceptions, and the same
//! functions are callable (and tested) on native targets.

use serde::Deserialize;
use serde_json::json;
use wasm_bindgen::prelude::wasm_bindgen;

use wncs_core::channel::ChannelParams;
use wncs_core::config::CaseConfig;
use wncs_core::montecarlo::McConfig;
use wncs_core::plant::{PlantModel, DEFAULT_UNSTABLE_TOL};
use wncs_core::reliability;
use wncs_core::scenario::log_spaced;
use wncs_core::Error;

fn error_json(err: impl std::fmt::Display) -> String {
    json!({ "error": err.to_string() }).to_string()
}

fn parse_channel(channel_json: &str) -> Result<ChannelParams, Error> {
    let channel: ChannelParams = serde_json::from_str(channel_json)
        .map_err(|e| Error::InvalidInput(format!("channel: {e}")))?;
    channel.validate()?;
    Ok(channel)
}

/// Noise-limited reliability curve over a log-spaced grid of eigenvalue
/// products: `{"points": [{"pi": ..., "alpha": ...}, ...]}`.
#[wasm_bindgen]
pub fn alpha_curve(channel_json: &str, pi_min: f64, pi_max: f64, points: u32) -> String {
    let run = || -> Result<String, Error> {
        let channel = parse_channel(channel_json)?;
        if !(pi_min >= 1.0 && pi_max > pi_min) || points < 2 {
            return Err(Error::InvalidInput(
                "need 1 <= pi_min < pi_max and at least 2 points".to_string(),
            ));
        }
        let grid = log_spaced(pi_min, pi_max, points as usize);
        let mut curve = Vec::with_capacity(grid.len());
        for pi in grid {
            let alpha = reliability::alpha_noise(&channel, pi)?;
            curve.push(json!({ "pi": pi, "alpha": alpha.value }));
        }
        Ok(json!({ "points": curve }).to_string())
    };
    run().unwrap_or_else(error_json)
}

/// Transmit power needed to reach `target_alpha`, plus the rate threshold:
/// `{"p_t": ..., "rate_threshold_bits": ...}`.
#[wasm_bindgen]
pub fn power_for_target(channel_json: &str, pi: f64, target_alpha: f64) -> String {
    let run = || -> Result<String, Error> {
        let channel = parse_channel(channel_json)?;
        let p_t = reliability::required_power(&channel, pi, target_alpha)?;
        Ok(json!({ "p_t": p_t, "rate_threshold_bits": pi.log2() }).to_string())
    };
    run().unwrap_or_else(error_json)
}

/// Monte Carlo cross-check of a reliability case config (the same JSON the
/// CLI consumes, with a literal `pi`):
/// `{"closed": ..., "method": ..., "p_hat": ..., "stderr": ..., "sigmas": ...}`.
#[wasm_bindgen]
pub fn mc_check(case_json: &str, samples: u32, seed: u32) -> String {
    let run = || -> Result<String, Error> {
        let config = CaseConfig::from_json_str(case_json, std::path::Path::new("demo"))?;
        let pi = config.resolve_pi(None)?;
        let closed = config.closed_form(pi)?;
        let mc = McConfig {
            samples: samples.max(1) as u64,
            seed: seed as u64,
            streams: 1,
        };
        let estimate = config.monte_carlo(pi, &mc)?;
        Ok(json!({
            "pi": pi,
            "closed": closed.value,
            "method": closed.method.as_str(),
            "p_hat": estimate.p_hat,
            "stderr": estimate.stderr,
            "sigmas": estimate.sigmas_from(closed.value),
            "samples": estimate.samples,
            "seed": mc.seed,
        })
        .to_string())
    };
    run().unwrap_or_else(error_json)
}

#[derive(Deserialize)]
struct TrajectoryRequest {
    plant: serde_json::Value,
    #[serde(default)]
    x0: Option<Vec<f64>>,
    horizon: usize,
    #[serde(default)]
    noise_seed: Option<u64>,
}

/// Analyze a plant and roll out a trajectory:
/// `{"magnitudes": [...], "pi": ..., "rate_threshold_bits": ..., "beta": ...,
///   "norms": [...], "outputs": [...]}`.
///
/// `beta` is evaluated against the supplied channel. `x0` defaults to all
/// ones; no feedback is applied, so unstable spectra diverge visibly.
#[wasm_bindgen]
pub fn analyze_and_simulate(request_json: &str, channel_json: &str) -> String {
    let run = || -> Result<String, Error> {
        let request: TrajectoryRequest = serde_json::from_str(request_json)
            .map_err(|e| Error::InvalidInput(format!("request: {e}")))?;
        let channel = parse_channel(channel_json)?;
        let plant = PlantModel::from_json_str(
            &request.plant.to_string(),
            std::path::Path::new("demo"),
        )?;
        let analysis = plant.eigen_analyze(DEFAULT_UNSTABLE_TOL)?;
        let beta = reliability::beta(&analysis, &channel)?;

        let m = plant.state_dim();
        let x0 = match request.x0 {
            Some(values) => nalgebra_vector(values, m)?,
            None => nalgebra_vector(vec![1.0; m], m)?,
        };
        let horizon = request.horizon.clamp(1, 10_000);
        let trajectory = plant.simulate(&x0, None, horizon, request.noise_seed)?;

        Ok(json!({
            "magnitudes": analysis.magnitudes,
            "pi": analysis.unstable_product,
            "rate_threshold_bits": analysis.rate_threshold_bits,
            "beta": beta.value,
            "norms": trajectory.state_norms(),
            "outputs": trajectory.outputs,
        })
        .to_string())
    };
    run().unwrap_or_else(error_json)
}

fn nalgebra_vector(values: Vec<f64>, expected: usize) -> Result<nalgebra::DVector<f64>, Error> {
    if values.len() != expected {
        return Err(Error::InvalidInput(format!(
            "x0 must have length {expected}, got {}",
            values.len()
        )));
    }
    Ok(nalgebra::DVector::from_vec(values))
}
