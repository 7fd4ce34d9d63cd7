//! Seeded Monte-Carlo sweeps comparing surface configurations on shared
//! channel draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{ExperimentConfig, Method, SweepVariable};
use super::seed::child_seed;
use crate::channel::{realize, to_frequency_domain, ChannelParams};
use crate::error::Result;
use crate::ofdm::{achievable_rate, composite_channel, noise_power, OfdmParams};
use crate::optimizer::{configure_sdr, unconfigured, RisPhaseVector};

const STREAM_CHANNEL: u64 = 0;
const STREAM_SOLVER: u64 = 1;

/// Normal quantile used for the reported confidence half-width.
const CI95_Z: f64 = 1.96;

/// How the (point, trial) grid is evaluated. Results do not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    /// Thread pool with the given size; 0 uses the global pool.
    #[default]
    Parallel,
    Threads(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodOutcome {
    pub method: Method,
    pub rate_mbps: f64,
    /// Total composite channel power `Σ_n |H_n(θ)|²`.
    pub objective: f64,
    /// Per-subcarrier composite power `|H_n(θ)|²`.
    pub subcarrier_power: Vec<f64>,
    /// The SDR configuration lost to the unconfigured surface in rate and
    /// was replaced by it.
    pub fell_back: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub point: usize,
    pub trial: usize,
    pub channel_seed: u64,
    pub outcomes: Vec<MethodOutcome>,
}

impl TrialOutcome {
    pub fn get(&self, method: Method) -> Option<&MethodOutcome> {
        self.outcomes.iter().find(|o| o.method == method)
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SweepRow {
    pub sweep_var: String,
    pub value: f64,
    pub method: Method,
    pub rate_mbps_mean: f64,
    pub rate_mbps_ci95: f64,
    pub trials: usize,
    pub master_seed: u64,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub sweep_var: String,
    /// One row per (value, method), sorted by value then method.
    pub rows: Vec<SweepRow>,
    /// Raw per-trial outcomes, ordered by (point, trial).
    pub outcomes: Vec<TrialOutcome>,
}

impl SweepResult {
    /// Mean rates of `method` in sweep order.
    pub fn means(&self, method: Method) -> Vec<f64> {
        self.rows.iter().filter(|r| r.method == method).map(|r| r.rate_mbps_mean).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.rows.iter().map(|r| r.value).collect();
        v.dedup();
        v
    }
}

fn stream_seed(config: &ExperimentConfig, point: usize, trial: usize, stream: u64) -> u64 {
    if config.paired_across_points {
        child_seed(config.master_seed, &[trial as u64, stream])
    } else {
        child_seed(config.master_seed, &[point as u64, trial as u64, stream])
    }
}

/// One trial at explicit parameters. Every method sees the same channel draw.
pub fn run_trial(
    config: &ExperimentConfig,
    channel: &ChannelParams,
    ofdm: &OfdmParams,
    point: usize,
    trial: usize,
) -> Result<TrialOutcome> {
    let channel_seed = stream_seed(config, point, trial, STREAM_CHANNEL);
    let realization = realize(&config.geometry, channel, channel_seed)?;
    let freq = to_frequency_domain(&realization, channel.num_subcarriers)?;
    let sigma2 = noise_power(&freq, ofdm)?;

    let evaluate = |method: Method, theta: &RisPhaseVector, fell_back: bool| -> Result<MethodOutcome> {
        let h = composite_channel(&freq, theta.as_slice())?;
        let rate = achievable_rate(h.as_slice().expect("contiguous"), sigma2, ofdm)?;
        let subcarrier_power: Vec<f64> = h.iter().map(|x| x.norm_sqr()).collect();
        Ok(MethodOutcome {
            method,
            rate_mbps: rate.rate_mbps,
            objective: subcarrier_power.iter().sum(),
            subcarrier_power,
            fell_back,
        })
    };

    let outcomes = config
        .methods
        .iter()
        .map(|&method| match method {
            Method::Sdr => {
                let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(config, point, trial, STREAM_SOLVER));
                let theta = configure_sdr(&freq, &config.solver, &mut rng)?.theta;
                let configured = evaluate(method, &theta, false)?;
                // Power is only a surrogate for rate: keep the flat surface
                // when it carries more data on this draw.
                let flat = evaluate(method, &unconfigured(freq.num_elements()), true)?;
                Ok(if flat.rate_mbps > configured.rate_mbps {
                    flat
                } else {
                    configured
                })
            }
            Method::Unconfigured => evaluate(method, &unconfigured(freq.num_elements()), false),
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(TrialOutcome {
        point,
        trial,
        channel_seed,
        outcomes,
    })
}

/// One trial at the `point`-th value of a sweep over `variable`.
pub fn run_point(
    config: &ExperimentConfig,
    variable: SweepVariable,
    point: usize,
    value: f64,
    trial: usize,
) -> Result<TrialOutcome> {
    let (channel, ofdm) = config.point_params(variable, value)?;
    run_trial(config, &channel, &ofdm, point, trial)
}

/// Mean and 95% confidence half-width (`1.96 · s / √n`, 0 for one sample).
pub fn mean_ci(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, CI95_Z * (var / n).sqrt())
}

fn evaluate<F>(jobs: usize, execution: Execution, f: F) -> Result<Vec<TrialOutcome>>
where
    F: Fn(usize) -> Result<TrialOutcome> + Sync + Send,
{
    match execution {
        Execution::Serial => (0..jobs).map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..jobs).into_par_iter().map(f).collect()
        }
        #[cfg(feature = "parallel")]
        Execution::Threads(n) => {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| crate::error::Error::config(format!("thread pool: {e}")))?;
            pool.install(|| (0..jobs).into_par_iter().map(&f).collect())
        }
        #[cfg(not(feature = "parallel"))]
        _ => (0..jobs).map(f).collect(),
    }
}

fn aggregate(config: &ExperimentConfig, sweep_var: &str, values: &[f64], outcomes: Vec<TrialOutcome>) -> SweepResult {
    let trials = config.trials;
    let mut methods = config.methods.clone();
    methods.sort();
    let mut rows = Vec::with_capacity(values.len() * methods.len());
    for (p, &value) in values.iter().enumerate() {
        let block = &outcomes[p * trials..(p + 1) * trials];
        for &method in &methods {
            let rates: Vec<f64> = block
                .iter()
                .map(|t| t.get(method).expect("every method evaluated").rate_mbps)
                .collect();
            let (mean, ci) = mean_ci(&rates);
            rows.push(SweepRow {
                sweep_var: sweep_var.to_string(),
                value,
                method,
                rate_mbps_mean: mean,
                rate_mbps_ci95: ci,
                trials,
                master_seed: config.master_seed,
            });
        }
    }
    SweepResult {
        sweep_var: sweep_var.to_string(),
        rows,
        outcomes,
    }
}

/// Runs every (value, trial) of the sweep over `variable`. Values come from
/// `config.sweep` when it names `variable`, else the default grid.
pub fn run_sweep(config: &ExperimentConfig, variable: SweepVariable, execution: Execution) -> Result<SweepResult> {
    let config = config.clone().for_sweep(variable);
    config.validate()?;
    let values = config.sweep.as_ref().expect("set by for_sweep").values.clone();
    let trials = config.trials;
    let outcomes = evaluate(values.len() * trials, execution, |job| {
        let (point, trial) = (job / trials, job % trials);
        run_point(&config, variable, point, values[point], trial)
    })?;
    Ok(aggregate(&config, variable.name(), &values, outcomes))
}

/// Rate versus number of subcarriers at the configured element count.
pub fn sweep_subcarriers(config: &ExperimentConfig) -> Result<SweepResult> {
    run_sweep(config, SweepVariable::Subcarriers, Execution::default())
}

/// Rate versus number of surface elements at the configured subcarrier count.
pub fn sweep_elements(config: &ExperimentConfig) -> Result<SweepResult> {
    run_sweep(config, SweepVariable::Elements, Execution::default())
}

/// Rate versus direct-link SNR.
pub fn sweep_snr(config: &ExperimentConfig) -> Result<SweepResult> {
    run_sweep(config, SweepVariable::Snr, Execution::default())
}

/// All trials at the base configuration, reported as a one-point result
/// with `sweep_var = "single"`.
pub fn run_single(config: &ExperimentConfig, execution: Execution) -> Result<SweepResult> {
    let mut config = config.clone();
    config.sweep = None;
    config.validate()?;
    let ofdm = OfdmParams::from_channel(&config.channel, config.ref_snr_db);
    let outcomes = evaluate(config.trials, execution, |trial| {
        run_trial(&config, &config.channel, &ofdm, 0, trial)
    })?;
    Ok(aggregate(&config, "single", &[0.0], outcomes))
}
