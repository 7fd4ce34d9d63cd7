use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelParams, SystemGeometry};
use crate::error::{Error, Result};
use crate::ofdm::OfdmParams;
use crate::optimizer::SolverOptions;

/// Quantity varied along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVariable {
    Subcarriers,
    Elements,
    Snr,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Subcarriers => "subcarriers",
            SweepVariable::Elements => "elements",
            SweepVariable::Snr => "snr",
        }
    }

    pub fn default_values(self) -> Vec<f64> {
        match self {
            SweepVariable::Subcarriers => vec![200.0, 400.0, 600.0, 800.0, 1000.0],
            SweepVariable::Elements => vec![50.0, 100.0, 200.0, 300.0, 400.0],
            SweepVariable::Snr => (0..9).map(|i| -10.0 + 5.0 * i as f64).collect(),
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How the surface is configured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Sdr,
    Unconfigured,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Sdr => "sdr",
            Method::Unconfigured => "unconfigured",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "sdr" => Ok(Method::Sdr),
            "unconfigured" => Ok(Method::Unconfigured),
            other => Err(Error::config(format!("unknown method '{other}' (expected sdr or unconfigured)"))),
        }
    }
}

/// Parses a comma-separated method list such as `sdr,unconfigured`.
pub fn parse_methods(list: &str) -> Result<Vec<Method>> {
    list.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub geometry: SystemGeometry,
    pub channel: ChannelParams,
    /// Average direct-link SNR (dB) for sweeps that do not vary it.
    pub ref_snr_db: f64,
    pub solver: SolverOptions,
    pub sweep: Option<SweepSpec>,
    pub trials: usize,
    pub master_seed: u64,
    pub methods: Vec<Method>,
    /// Reuse each trial's channel draw at every sweep point, so curves are
    /// compared on common random numbers. When false the point index also
    /// enters the seed.
    pub paired_across_points: bool,
    /// In a subcarrier sweep, keep the subcarrier spacing of the base
    /// configuration so the occupied bandwidth grows with K. When false the
    /// bandwidth stays fixed.
    pub fixed_subcarrier_spacing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            geometry: SystemGeometry::default(),
            channel: ChannelParams::default(),
            ref_snr_db: 10.0,
            solver: SolverOptions::default(),
            sweep: None,
            trials: 50,
            master_seed: 1,
            methods: vec![Method::Sdr, Method::Unconfigured],
            paired_across_points: true,
            fixed_subcarrier_spacing: true,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::config(format!("invalid config {}: {e}", path.display())))
    }

    /// Sets the sweep to `variable`, keeping configured values when they
    /// belong to that variable and using the default grid otherwise.
    pub fn for_sweep(mut self, variable: SweepVariable) -> Self {
        let values = match &self.sweep {
            Some(s) if s.variable == variable => s.values.clone(),
            _ => variable.default_values(),
        };
        self.sweep = Some(SweepSpec { variable, values });
        self
    }

    /// Copy with implicit defaults written out, for provenance.
    pub fn resolved(&self) -> Self {
        let mut out = self.clone();
        out.geometry = self.geometry.resolved();
        out
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate().map_err(|e| Error::config(e.to_string()))?;
        self.channel.validate()?;
        self.solver.validate()?;
        if !self.ref_snr_db.is_finite() {
            return Err(Error::config("ref_snr_db must be finite"));
        }
        if self.trials < 1 {
            return Err(Error::config("trials must be at least 1"));
        }
        if self.methods.is_empty() {
            return Err(Error::config("at least one method is required"));
        }
        let mut sorted = self.methods.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.methods.len() {
            return Err(Error::config("methods must not repeat"));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(Error::config("sweep values must be non-empty"));
            }
            if !sweep.values.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::config("sweep values must be strictly increasing"));
            }
            for &v in &sweep.values {
                let (channel, ofdm) = self.point_params(sweep.variable, v)?;
                channel.validate()?;
                ofdm.validate()?;
            }
        }
        Ok(())
    }

    /// Channel and OFDM parameters at one sweep point.
    pub fn point_params(&self, variable: SweepVariable, value: f64) -> Result<(ChannelParams, OfdmParams)> {
        let mut channel = self.channel.clone();
        let mut snr = self.ref_snr_db;
        let as_count = |v: f64| -> Result<usize> {
            if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                Ok(v as usize)
            } else {
                Err(Error::config(format!("{variable} sweep value {v} is not a positive integer")))
            }
        };
        match variable {
            SweepVariable::Subcarriers => {
                let k = as_count(value)?;
                if self.fixed_subcarrier_spacing {
                    channel.bandwidth = self.channel.bandwidth / self.channel.num_subcarriers as f64 * k as f64;
                }
                channel.num_subcarriers = k;
            }
            SweepVariable::Elements => channel.num_elements = as_count(value)?,
            SweepVariable::Snr => {
                if !value.is_finite() {
                    return Err(Error::config("SNR sweep values must be finite"));
                }
                snr = value;
            }
        }
        let ofdm = OfdmParams::from_channel(&channel, snr);
        Ok((channel, ofdm))
    }
}
