//! Monte Carlo estimation of the stabilizability probability.
//!
//! This is the independent cross-check for every closed form in
//! [`crate::reliability`]: draw fading realizations, count how often the
//! capacity (or SIR) condition holds, and report the empirical frequency with
//! a binomial standard error.
//!
//! Reproducibility contract: estimates are a pure function of
//! `(samples, seed, streams)` and the scenario inputs. The generator is
//! ChaCha8 seeded with `seed`; draws are partitioned across `streams`
//! independent ChaCha streams (stream `s` gets `set_stream(s)`) and success
//! counts are merged by integer addition, so results do not depend on
//! evaluation order or thread scheduling. All variates come from inverse
//! transforms on uniforms in (0, 1]: `-ln u` for exponential power gains,
//! `sqrt(-omega ln u)` for Rayleigh amplitudes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{self, ChannelParams, LoopTopology};
use crate::error::{Error, Result};

/// The pinned generator: ChaCha with 8 rounds, 2^64 seedable streams of
/// period 2^68 each.
pub type StreamRng = ChaCha8Rng;

/// Generator for substream `stream` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn default_samples() -> u64 {
    1_000_000
}

fn default_seed() -> u64 {
    42
}

fn default_streams() -> u64 {
    1
}

/// Sampling budget and seeding of one Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    #[serde(default = "default_samples")]
    pub samples: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_streams")]
    pub streams: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            samples: default_samples(),
            seed: default_seed(),
            streams: default_streams(),
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples < 1 {
            return Err(Error::invalid("samples must be >= 1".to_string()));
        }
        if self.streams < 1 {
            return Err(Error::invalid("streams must be >= 1".to_string()));
        }
        Ok(())
    }

    /// Number of draws assigned to substream `s` (the remainder of
    /// `samples / streams` goes to the lowest stream indices).
    fn stream_quota(&self, s: u64) -> u64 {
        self.samples / self.streams + u64::from(s < self.samples % self.streams)
    }
}

/// An empirical probability with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub p_hat: f64,
    pub stderr: f64,
    pub samples: u64,
}

impl McEstimate {
    fn from_counts(successes: u64, samples: u64) -> Self {
        let p_hat = successes as f64 / samples as f64;
        McEstimate {
            p_hat,
            stderr: (p_hat * (1.0 - p_hat) / samples as f64).sqrt(),
            samples,
        }
    }

    /// `|p_hat - reference|` in units of the standard error (infinite when
    /// stderr is zero and the values differ).
    pub fn sigmas_from(&self, reference: f64) -> f64 {
        let diff = (self.p_hat - reference).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.stderr
        }
    }
}

/// Sum `count(s)` over streams, in parallel when the `parallel` feature is
/// on. Addition is associative so the merge order never matters.
fn sum_over_streams<F>(streams: u64, count: F) -> u64
where
    F: Fn(u64) -> u64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..streams).into_par_iter().map(count).sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..streams).map(count).sum()
    }
}

/// Empirical probability that the link capacity `log2(1 + SNR)` meets the
/// rate threshold `log2(Pi)` under Rayleigh fading.
pub fn estimate_beta_noise(
    params: &ChannelParams,
    unstable_product: f64,
    mc: &McConfig,
) -> Result<McEstimate> {
    params.validate()?;
    mc.validate()?;
    if !(unstable_product >= 1.0) || !unstable_product.is_finite() {
        return Err(Error::invalid(format!(
            "unstable eigenvalue product must be finite and >= 1, got {unstable_product}"
        )));
    }
    let rate_threshold = unstable_product.log2();
    let successes = sum_over_streams(mc.streams, |s| {
        let mut rng = stream_rng(mc.seed, s);
        let mut hits = 0u64;
        for _ in 0..mc.stream_quota(s) {
            let amplitude = channel::sample_rayleigh_amplitude(params.omega, &mut rng);
            let capacity = (1.0 + params.snr(amplitude)).log2();
            if capacity >= rate_threshold {
                hits += 1;
            }
        }
        hits
    });
    Ok(McEstimate::from_counts(successes, mc.samples))
}

/// Empirical probability that loop `i`'s SIR meets the threshold `Pi - 1`,
/// with per-loop unit-mean exponential power gains.
pub fn estimate_alpha_interference(
    topology: &LoopTopology,
    i: usize,
    unstable_product: f64,
    mc: &McConfig,
) -> Result<McEstimate> {
    topology.validate()?;
    mc.validate()?;
    if i >= topology.loop_count() {
        return Err(Error::invalid(format!(
            "loop index {i} out of range for K = {}",
            topology.loop_count()
        )));
    }
    if !(unstable_product >= 1.0) || !unstable_product.is_finite() {
        return Err(Error::invalid(format!(
            "unstable eigenvalue product must be finite and >= 1, got {unstable_product}"
        )));
    }
    let k = topology.loop_count();
    let threshold = unstable_product - 1.0;
    let successes = sum_over_streams(mc.streams, |s| {
        let mut rng = stream_rng(mc.seed, s);
        let mut gains = vec![0.0f64; k];
        let mut hits = 0u64;
        for _ in 0..mc.stream_quota(s) {
            // An all-zero interference draw (probability ~ 2^-53 per
            // interferer) is resampled rather than treated as infinite SIR.
            let sir = loop {
                for g in gains.iter_mut() {
                    *g = channel::sample_power_gain(&mut rng);
                }
                match channel::sir(topology, i, &gains) {
                    Ok(sir) => break sir,
                    Err(Error::UndefinedSir) => continue,
                    Err(other) => unreachable!("validated inputs: {other}"),
                }
            };
            if sir >= threshold {
                hits += 1;
            }
        }
        hits
    });
    Ok(McEstimate::from_counts(successes, mc.samples))
}

/// A sweep point: an estimator input together with the point's canonical
/// index in its grid. The index, not the position in the slice handed to
/// [`sweep`], determines the point's seed, so reordering a grid permutes the
/// estimates without changing them.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint<T> {
    pub index: u64,
    pub input: T,
}

/// Build a grid from inputs in canonical order, assigning indices 0, 1, ...
pub fn grid<T>(inputs: impl IntoIterator<Item = T>) -> Vec<GridPoint<T>> {
    inputs
        .into_iter()
        .enumerate()
        .map(|(index, input)| GridPoint {
            index: index as u64,
            input,
        })
        .collect()
}

/// Run `estimator` over every grid point, seeding each point with
/// `mc.seed XOR point.index` so the per-point substreams are independent and
/// the batch equals the corresponding sequence of direct calls.
pub fn sweep<T, F>(estimator: F, points: &[GridPoint<T>], mc: &McConfig) -> Result<Vec<McEstimate>>
where
    T: Sync,
    F: Fn(&T, &McConfig) -> Result<McEstimate> + Sync,
{
    if points.is_empty() {
        return Err(Error::invalid("sweep grid is empty".to_string()));
    }
    mc.validate()?;
    let run_point = |point: &GridPoint<T>| {
        let point_mc = McConfig {
            seed: mc.seed ^ point.index,
            ..*mc
        };
        estimator(&point.input, &point_mc)
    };
    #[cfg(feature = "parallel")]
    {
        points.par_iter().map(run_point).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        points.iter().map(run_point).collect()
    }
}
