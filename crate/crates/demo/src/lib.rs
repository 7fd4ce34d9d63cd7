//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each exported function takes plain numbers and returns a JSON string; the
//! native functions behind them are public so they can be tested off-browser.

use risuav::channel::{realize, to_frequency_domain};
use risuav::harness::{
    oracle_check, run_sweep, run_trial, Execution, ExperimentConfig, Method, SweepVariable,
};
use risuav::ofdm::noise_power;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
pub struct SweepCurves {
    pub variable: String,
    pub values: Vec<f64>,
    pub sdr: Vec<f64>,
    pub unconfigured: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct Spectrum {
    /// Per-subcarrier SNR in dB.
    pub direct_db: Vec<f64>,
    pub unconfigured_db: Vec<f64>,
    pub sdr_db: Vec<f64>,
    pub unconfigured_mbps: f64,
    pub sdr_mbps: f64,
}

#[derive(Debug, Serialize)]
pub struct OracleSummary {
    pub instances: usize,
    pub worst_ratio: f64,
    pub passed: bool,
    /// Pipeline objective over the 16-level optimum, per instance.
    pub ratios: Vec<f64>,
}

fn base_config(elements: usize, subcarriers: usize, nlos_excess_db: f64, trials: usize, seed: u64) -> ExperimentConfig {
    let mut config = ExperimentConfig::default();
    config.channel.num_elements = elements;
    config.channel.num_subcarriers = subcarriers;
    config.channel.nlos_excess_db = nlos_excess_db;
    config.trials = trials;
    config.master_seed = seed;
    config
}

/// Mean rate curves of a sweep over `variable` ("subcarriers", "elements" or
/// "snr") on its default grid.
pub fn sweep(
    variable: &str,
    elements: usize,
    subcarriers: usize,
    nlos_excess_db: f64,
    trials: usize,
    seed: u64,
) -> Result<SweepCurves, String> {
    let variable: SweepVariable = serde_json::from_value(serde_json::Value::String(variable.to_string()))
        .map_err(|_| format!("unknown sweep variable {variable:?}"))?;
    let config = base_config(elements, subcarriers, nlos_excess_db, trials, seed);
    let result = run_sweep(&config, variable, Execution::Serial).map_err(|e| e.to_string())?;
    Ok(SweepCurves {
        variable: result.sweep_var.clone(),
        values: result.values(),
        sdr: result.means(Method::Sdr),
        unconfigured: result.means(Method::Unconfigured),
    })
}

/// Per-subcarrier SNR of one channel draw with the surface off, unconfigured
/// and SDR-configured.
pub fn spectrum(
    elements: usize,
    subcarriers: usize,
    snr_db: f64,
    nlos_excess_db: f64,
    seed: u64,
) -> Result<Spectrum, String> {
    let mut config = base_config(elements, subcarriers, nlos_excess_db, 1, seed);
    config.ref_snr_db = snr_db;
    config.validate().map_err(|e| e.to_string())?;
    let (channel, ofdm) = config
        .point_params(SweepVariable::Snr, snr_db)
        .map_err(|e| e.to_string())?;
    let trial = run_trial(&config, &channel, &ofdm, 0, 0).map_err(|e| e.to_string())?;

    let realization = realize(&config.geometry, &channel, trial.channel_seed).map_err(|e| e.to_string())?;
    let freq = to_frequency_domain(&realization, subcarriers).map_err(|e| e.to_string())?;
    let sigma2 = noise_power(&freq, &ofdm).map_err(|e| e.to_string())?;
    let db = |p: &[f64]| p.iter().map(|x| 10.0 * (x / sigma2).log10()).collect::<Vec<_>>();
    let direct: Vec<f64> = freq.direct().iter().map(|h| h.norm_sqr()).collect();
    let sdr = trial.get(Method::Sdr).expect("default methods");
    let flat = trial.get(Method::Unconfigured).expect("default methods");
    Ok(Spectrum {
        direct_db: db(&direct),
        unconfigured_db: db(&flat.subcarrier_power),
        sdr_db: db(&sdr.subcarrier_power),
        unconfigured_mbps: flat.rate_mbps,
        sdr_mbps: sdr.rate_mbps,
    })
}

/// SDR pipeline against exhaustive 16-level search on small random instances.
pub fn oracle(instances: usize, seed: u64) -> Result<OracleSummary, String> {
    let report = oracle_check(instances, seed, &Default::default()).map_err(|e| e.to_string())?;
    Ok(OracleSummary {
        instances: report.instances.len(),
        worst_ratio: report.worst_ratio(),
        passed: report.passed(),
        ratios: report.instances.iter().map(|i| i.pipeline / i.quantized_optimum).collect(),
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = sweep)]
pub fn sweep_js(
    variable: &str,
    elements: usize,
    subcarriers: usize,
    nlos_excess_db: f64,
    trials: usize,
    seed: u32,
) -> Result<String, JsValue> {
    to_js(sweep(variable, elements, subcarriers, nlos_excess_db, trials, seed.into()))
}

#[wasm_bindgen(js_name = spectrum)]
pub fn spectrum_js(
    elements: usize,
    subcarriers: usize,
    snr_db: f64,
    nlos_excess_db: f64,
    seed: u32,
) -> Result<String, JsValue> {
    to_js(spectrum(elements, subcarriers, snr_db, nlos_excess_db, seed.into()))
}

#[wasm_bindgen(js_name = oracle)]
pub fn oracle_js(instances: usize, seed: u32) -> Result<String, JsValue> {
    to_js(oracle(instances, seed.into()))
}
