//! Radio channels of the BS → RIS-UAV → IoT scenario.
//!
//! The BS–UAV and UAV–IoT hops are line-of-sight free-space links whose
//! per-element phases follow the exact element geometry. The BS–IoT direct
//! link is non-line-of-sight: a tapped-delay line with Rayleigh taps at random
//! integer delays and an exponential power-delay profile.

use std::f64::consts::PI;

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Axis normal to the RIS panel. The element grid lies in the plane spanned
/// by the two remaining axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PanelNormal {
    X,
    Y,
    #[default]
    Z,
}

/// Node positions (meters) and RF parameters of the scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SystemGeometry {
    pub bs_pos: [f64; 3],
    pub uav_pos: [f64; 3],
    pub iot_pos: [f64; 3],
    pub carrier_freq: f64,
    /// Element pitch in meters; half a wavelength when unset.
    pub element_spacing: Option<f64>,
    pub panel_normal: PanelNormal,
}

impl Default for SystemGeometry {
    fn default() -> Self {
        Self {
            bs_pos: [20.0, -300.0, 0.0],
            uav_pos: [0.0, 0.0, 100.0],
            iot_pos: [20.0, 0.0, 0.0],
            carrier_freq: 2e9,
            element_spacing: None,
            panel_normal: PanelNormal::Z,
        }
    }
}

impl SystemGeometry {
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_freq
    }

    pub fn spacing(&self) -> f64 {
        self.element_spacing.unwrap_or_else(|| self.wavelength() / 2.0)
    }

    /// Copy with every implicit default made explicit.
    pub fn resolved(&self) -> Self {
        Self {
            element_spacing: Some(self.spacing()),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |p: &[f64; 3]| p.iter().all(|v| v.is_finite());
        if !(finite(&self.bs_pos) && finite(&self.uav_pos) && finite(&self.iot_pos)) {
            return Err(Error::domain("node positions must be finite"));
        }
        if distance(&self.bs_pos, &self.uav_pos) == 0.0
            || distance(&self.uav_pos, &self.iot_pos) == 0.0
            || distance(&self.bs_pos, &self.iot_pos) == 0.0
        {
            return Err(Error::domain("BS, UAV and IoT positions must be pairwise distinct"));
        }
        if !(self.carrier_freq > 0.0 && self.carrier_freq.is_finite()) {
            return Err(Error::domain("carrier frequency must be positive"));
        }
        if !(self.spacing() > 0.0 && self.spacing().is_finite()) {
            return Err(Error::domain("element spacing must be positive"));
        }
        Ok(())
    }
}

/// Multipath and OFDM dimensioning shared by channel synthesis and rate
/// evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChannelParams {
    pub num_taps: usize,
    /// Cyclic-prefix length in samples; tap delays are drawn below it.
    pub cp_len: usize,
    /// Scale of the exponential power-delay profile, in samples.
    pub decay_const: f64,
    pub bandwidth: f64,
    pub num_subcarriers: usize,
    pub num_elements: usize,
    /// Extra attenuation of the NLoS direct link on top of free-space loss.
    pub nlos_excess_db: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            num_taps: 23,
            cp_len: 32,
            decay_const: 8.0,
            bandwidth: 1e7,
            num_subcarriers: 1000,
            num_elements: 400,
            nlos_excess_db: 20.0,
        }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        if self.num_taps < 1 || self.num_taps > self.cp_len || self.cp_len > self.num_subcarriers {
            return Err(Error::config(format!(
                "need 1 <= num_taps ({}) <= cp_len ({}) <= num_subcarriers ({})",
                self.num_taps, self.cp_len, self.num_subcarriers
            )));
        }
        if !(self.decay_const > 0.0) {
            return Err(Error::config("decay_const must be positive"));
        }
        if !(self.bandwidth > 0.0 && self.bandwidth.is_finite()) {
            return Err(Error::config("bandwidth must be positive"));
        }
        if self.num_elements < 1 {
            return Err(Error::config("num_elements must be at least 1"));
        }
        if !self.nlos_excess_db.is_finite() {
            return Err(Error::config("nlos_excess_db must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tap {
    pub delay: usize,
    pub gain: Complex64,
}

/// One Monte-Carlo draw of every link in the scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub direct_taps: Vec<Tap>,
    /// Frequency-flat BS → element → IoT gain of each RIS element.
    pub cascade_per_element: Vec<Complex64>,
    pub cascade_delay: usize,
    pub rng_seed: u64,
}

/// Per-subcarrier view of a realization.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyChannel {
    direct: Array1<Complex64>,
    /// `cascade[[n, i]]`: gain of element `i` on subcarrier `n`.
    cascade: Array2<Complex64>,
}

impl FrequencyChannel {
    pub fn new(direct: Array1<Complex64>, cascade: Array2<Complex64>) -> Result<Self> {
        if cascade.nrows() != direct.len() {
            return Err(Error::domain(format!(
                "cascade has {} subcarriers, direct channel has {}",
                cascade.nrows(),
                direct.len()
            )));
        }
        if direct.is_empty() || cascade.ncols() == 0 {
            return Err(Error::domain("channel needs at least one subcarrier and one element"));
        }
        Ok(Self { direct, cascade })
    }

    pub fn direct(&self) -> &Array1<Complex64> {
        &self.direct
    }

    pub fn cascade(&self) -> &Array2<Complex64> {
        &self.cascade
    }

    pub fn num_subcarriers(&self) -> usize {
        self.direct.len()
    }

    pub fn num_elements(&self) -> usize {
        self.cascade.ncols()
    }

    /// True when no element couples any energy to the receiver.
    pub fn cascade_is_zero(&self) -> bool {
        self.cascade.iter().all(|a| *a == Complex64::ZERO)
    }
}

pub fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Free-space path loss in dB.
pub fn path_loss_fspl(distance: f64, freq: f64) -> Result<f64> {
    if !(distance > 0.0) || !(freq > 0.0) {
        return Err(Error::domain(format!(
            "free-space loss needs positive distance and frequency (got {distance} m, {freq} Hz)"
        )));
    }
    Ok(20.0 * distance.log10() + 20.0 * freq.log10() + 20.0 * (4.0 * PI / SPEED_OF_LIGHT).log10())
}

pub fn db_to_amplitude(loss_db: f64) -> f64 {
    10f64.powf(-loss_db / 20.0)
}

/// Element centers of a square grid (row-major, truncated to `n_elements`)
/// centered on the UAV in the plane orthogonal to the panel normal.
pub fn element_positions(geometry: &SystemGeometry, n_elements: usize) -> Vec<[f64; 3]> {
    let side = (n_elements as f64).sqrt().ceil() as usize;
    let pitch = geometry.spacing();
    let center = (side as f64 - 1.0) / 2.0;
    let (u_axis, v_axis) = match geometry.panel_normal {
        PanelNormal::X => (1, 2),
        PanelNormal::Y => (0, 2),
        PanelNormal::Z => (0, 1),
    };
    (0..n_elements)
        .map(|k| {
            let (row, col) = (k / side, k % side);
            let mut p = geometry.uav_pos;
            p[u_axis] += (col as f64 - center) * pitch;
            p[v_axis] += (row as f64 - center) * pitch;
            p
        })
        .collect()
}

/// Average received power (dB, relative to unit transmit power) of the NLoS
/// direct link.
pub fn direct_link_power_db(geometry: &SystemGeometry, params: &ChannelParams) -> Result<f64> {
    let loss = path_loss_fspl(distance(&geometry.bs_pos, &geometry.iot_pos), geometry.carrier_freq)?;
    Ok(-(loss + params.nlos_excess_db))
}

/// Draws the NLoS direct link: `num_taps` distinct integer delays below the
/// cyclic prefix, Rayleigh gains with an exponential profile normalized to a
/// mean total power of `avg_power_db`.
pub fn gen_direct_channel<R: Rng + ?Sized>(
    params: &ChannelParams,
    avg_power_db: f64,
    rng: &mut R,
) -> Result<Vec<Tap>> {
    if params.num_taps > params.cp_len {
        return Err(Error::config(format!(
            "num_taps ({}) exceeds cp_len ({})",
            params.num_taps, params.cp_len
        )));
    }
    if params.num_taps == 0 {
        return Err(Error::config("num_taps must be at least 1"));
    }
    if !avg_power_db.is_finite() {
        return Err(Error::domain("average direct-link power must be finite"));
    }
    let mut delays = index::sample(rng, params.cp_len, params.num_taps).into_vec();
    delays.sort_unstable();

    let profile: Vec<f64> = delays
        .iter()
        .map(|&d| (-(d as f64) / params.decay_const).exp())
        .collect();
    let norm: f64 = profile.iter().sum();
    let total = 10f64.powf(avg_power_db / 10.0);

    Ok(delays
        .into_iter()
        .zip(profile)
        .map(|(delay, p)| {
            let std = (total * p / norm / 2.0).sqrt();
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Tap {
                delay,
                gain: Complex64::new(re * std, im * std),
            }
        })
        .collect())
}

/// Deterministic LoS cascade through each element: hop amplitudes from the
/// free-space loss of the two hops, phase from the exact element path length,
/// and a `1/sqrt(N)` split of the aggregate reflected power. The cascade is
/// placed at delay 0.
pub fn gen_cascaded_channel(
    geometry: &SystemGeometry,
    n_elements: usize,
) -> Result<(Vec<Complex64>, usize)> {
    geometry.validate()?;
    if n_elements == 0 {
        return Err(Error::domain("RIS needs at least one element"));
    }
    let f = geometry.carrier_freq;
    let a1 = db_to_amplitude(path_loss_fspl(distance(&geometry.bs_pos, &geometry.uav_pos), f)?);
    let a2 = db_to_amplitude(path_loss_fspl(distance(&geometry.uav_pos, &geometry.iot_pos), f)?);
    let amp = a1 * a2 / (n_elements as f64).sqrt();
    let k0 = 2.0 * PI / geometry.wavelength();

    let gains = element_positions(geometry, n_elements)
        .iter()
        .map(|p| {
            let path = distance(&geometry.bs_pos, p) + distance(p, &geometry.iot_pos);
            Complex64::from_polar(amp, -k0 * path)
        })
        .collect();
    Ok((gains, 0))
}

/// Draws a full realization from `seed`.
pub fn realize(geometry: &SystemGeometry, params: &ChannelParams, seed: u64) -> Result<ChannelRealization> {
    params.validate()?;
    geometry.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let direct_taps = gen_direct_channel(params, direct_link_power_db(geometry, params)?, &mut rng)?;
    let (cascade_per_element, cascade_delay) = gen_cascaded_channel(geometry, params.num_elements)?;
    Ok(ChannelRealization {
        direct_taps,
        cascade_per_element,
        cascade_delay,
        rng_seed: seed,
    })
}

/// K-point DFT of the tap channels.
pub fn to_frequency_domain(realization: &ChannelRealization, k: usize) -> Result<FrequencyChannel> {
    if k == 0 {
        return Err(Error::domain("need at least one subcarrier"));
    }
    let max_delay = realization
        .direct_taps
        .iter()
        .map(|t| t.delay)
        .chain(std::iter::once(realization.cascade_delay))
        .max()
        .unwrap_or(0);
    if max_delay >= k {
        return Err(Error::domain(format!("tap delay {max_delay} does not fit in {k} subcarriers")));
    }

    // Phases are reduced mod K in integer arithmetic to keep them exact.
    let twiddle = |n: usize, delay: usize| {
        let m = (n * delay) % k;
        Complex64::from_polar(1.0, -2.0 * PI * m as f64 / k as f64)
    };
    let direct = Array1::from_shape_fn(k, |n| {
        realization
            .direct_taps
            .iter()
            .map(|t| t.gain * twiddle(n, t.delay))
            .sum()
    });
    let gains = &realization.cascade_per_element;
    let cascade = Array2::from_shape_fn((k, gains.len()), |(n, i)| {
        gains[i] * twiddle(n, realization.cascade_delay)
    });
    FrequencyChannel::new(direct, cascade)
}

/// Circularly-symmetric standard complex Gaussian sample.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// A frequency channel with i.i.d. CN(0, 1) entries; generic instances for
/// exercising the optimizer away from the scenario geometry.
pub fn random_frequency_channel<R: Rng + ?Sized>(k: usize, n: usize, rng: &mut R) -> Result<FrequencyChannel> {
    let direct = Array1::from_shape_fn(k, |_| complex_gaussian(rng));
    let cascade = Array2::from_shape_fn((k, n), |_| complex_gaussian(rng));
    FrequencyChannel::new(direct, cascade)
}
