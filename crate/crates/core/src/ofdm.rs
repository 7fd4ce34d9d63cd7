//! Per-subcarrier SNR and achievable rate of the RIS-assisted OFDM link.

use ndarray::{Array1, ArrayView1};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelParams, FrequencyChannel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OfdmParams {
    pub num_subcarriers: usize,
    pub cp_len: usize,
    pub bandwidth: f64,
    /// Average received SNR of the direct link alone, in dB.
    pub ref_snr_db: f64,
}

impl OfdmParams {
    pub fn from_channel(params: &ChannelParams, ref_snr_db: f64) -> Self {
        Self {
            num_subcarriers: params.num_subcarriers,
            cp_len: params.cp_len,
            bandwidth: params.bandwidth,
            ref_snr_db,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_subcarriers < 1 {
            return Err(Error::config("need at least one subcarrier"));
        }
        if !(self.bandwidth > 0.0 && self.bandwidth.is_finite()) {
            return Err(Error::config("bandwidth must be positive"));
        }
        Ok(())
    }

    /// Fraction of airtime carrying data after the cyclic prefix.
    pub fn cp_efficiency(&self) -> f64 {
        let k = self.num_subcarriers as f64;
        k / (k + self.cp_len as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateResult {
    pub rate_mbps: f64,
    /// Linear SNR of each subcarrier.
    pub snr_per_subcarrier: Vec<f64>,
}

/// `H_n = H_d,n + sum_i a_{n,i} theta_i` on every subcarrier.
///
/// `theta` is taken as raw coefficients so that a disabled surface (all
/// zeros) can be evaluated as well.
pub fn composite_channel(freq: &FrequencyChannel, theta: &[Complex64]) -> Result<Array1<Complex64>> {
    if theta.len() != freq.num_elements() {
        return Err(Error::domain(format!(
            "phase vector has {} coefficients, channel has {} elements",
            theta.len(),
            freq.num_elements()
        )));
    }
    Ok(freq.direct() + &freq.cascade().dot(&ArrayView1::from(theta)))
}

/// Noise power that puts the direct link at `ref_snr_db` average SNR under
/// unit transmit power per subcarrier.
pub fn noise_power(freq: &FrequencyChannel, params: &OfdmParams) -> Result<f64> {
    if !params.ref_snr_db.is_finite() {
        return Err(Error::domain("reference SNR must be finite"));
    }
    let mean_power = freq.direct().iter().map(|h| h.norm_sqr()).sum::<f64>() / freq.num_subcarriers() as f64;
    if mean_power == 0.0 {
        return Err(Error::domain("direct channel is identically zero; SNR reference undefined"));
    }
    Ok(mean_power / 10f64.powf(params.ref_snr_db / 10.0))
}

/// Shannon rate summed over subcarriers with cyclic-prefix overhead, in Mbit/s.
pub fn achievable_rate(h: &[Complex64], sigma2: f64, params: &OfdmParams) -> Result<RateResult> {
    if !(sigma2 > 0.0) {
        return Err(Error::domain(format!("noise power must be positive, got {sigma2}")));
    }
    let snr_per_subcarrier: Vec<f64> = h.iter().map(|x| x.norm_sqr() / sigma2).collect();
    let bits: f64 = snr_per_subcarrier.iter().map(|s| (1.0 + s).log2()).sum();
    let spacing = params.bandwidth / params.num_subcarriers as f64;
    Ok(RateResult {
        rate_mbps: 1e-6 * params.cp_efficiency() * spacing * bits,
        snr_per_subcarrier,
    })
}
