use num_complex::Complex64;

use super::RisPhaseVector;
use crate::channel::FrequencyChannel;
use crate::error::{Error, Result};
use crate::ofdm::composite_channel;

/// A pass that improves the objective by less than this (relative) ends the run.
const PASS_TOL: f64 = 1e-6;

/// Cyclic per-element phase alignment.
///
/// With the other elements fixed, element `i` sees the residual channel
/// `u_n = H_n − a_{n,i} θ_i`; the power objective is then maximized by
/// `θ_i = conj(s)/|s|`, `s = Σ_n a_{n,i} conj(u_n)`.
pub fn coordinate_ascent(theta0: &RisPhaseVector, freq: &FrequencyChannel, max_passes: usize) -> Result<RisPhaseVector> {
    Ok(coordinate_ascent_trace(theta0, freq, max_passes)?.0)
}

/// Like [`coordinate_ascent`], also returning the objective before the first
/// pass and after each pass.
pub fn coordinate_ascent_trace(
    theta0: &RisPhaseVector,
    freq: &FrequencyChannel,
    max_passes: usize,
) -> Result<(RisPhaseVector, Vec<f64>)> {
    if theta0.len() != freq.num_elements() {
        return Err(Error::domain("phase vector length does not match the channel"));
    }
    let mut theta = theta0.as_slice().to_vec();
    let power = |h: &ndarray::Array1<Complex64>| h.iter().map(|x| x.norm_sqr()).sum::<f64>();
    let mut h = composite_channel(freq, &theta)?;
    let mut trace = vec![power(&h)];

    for _ in 0..max_passes {
        for (i, col) in freq.cascade().columns().into_iter().enumerate() {
            let old = theta[i];
            let s: Complex64 = col
                .iter()
                .zip(h.iter())
                .map(|(a, hn)| a * (hn - a * old).conj())
                .sum();
            let mag = s.norm();
            // Only move when the closed-form phase is a strict improvement.
            if mag == 0.0 || (old * s).re >= mag {
                continue;
            }
            let new = s.conj() / mag;
            let delta = new - old;
            h.zip_mut_with(&col, |hn, a| *hn += a * delta);
            theta[i] = new;
        }
        // Refresh from scratch so rounding does not accumulate across passes.
        h = composite_channel(freq, &theta)?;
        let prev = *trace.last().expect("non-empty");
        let cur = power(&h);
        trace.push(cur);
        if cur - prev < PASS_TOL * prev.abs() {
            break;
        }
    }
    Ok((RisPhaseVector::from_unit_unchecked(theta), trace))
}
