use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;

use super::factor::LowRankFactor;
use super::quadratic::extended_rows;
use super::sdr::SdrSolution;
use super::{coordinate_ascent, power_objective, RisPhaseVector};
use crate::channel::{complex_gaussian, FrequencyChannel};
use crate::error::{Error, Result};

/// Gaussian randomization: turns a relaxed solution into a unit-modulus
/// phase vector.
///
/// Draws `num_samples` vectors `ξ = U g`, `g ~ CN(0, I_r)`, and maps each to
/// `θ_i = exp(j(arg ξ_i − arg ξ_{N+1}))`. The best of these is refined by
/// coordinate ascent (`ascent_passes`, 0 disables it). The all-ones vector is
/// always a candidate, so the result is never worse than the unconfigured
/// surface. Candidates are ranked on the full-band power objective.
pub fn randomize_extract<R: Rng + ?Sized>(
    sol: &SdrSolution,
    freq: &FrequencyChannel,
    num_samples: usize,
    ascent_passes: usize,
    rng: &mut R,
) -> Result<RisPhaseVector> {
    let n = freq.num_elements();
    let d = n + 1;
    if sol.gram_factor.nrows() != d {
        return Err(Error::domain(format!(
            "relaxed solution has {} rows, channel needs {d}",
            sol.gram_factor.nrows()
        )));
    }
    if num_samples == 0 {
        return Err(Error::domain("need at least one randomization sample"));
    }

    let all_subcarriers: Vec<usize> = (0..freq.num_subcarriers()).collect();
    let full_band = LowRankFactor::from_rows(extended_rows(freq, &all_subcarriers).view());

    let g = Array2::from_shape_fn((sol.rank(), num_samples), |_| complex_gaussian(rng));
    let mut lifted = sol.gram_factor.dot(&g);
    for mut col in lifted.columns_mut() {
        let reference = Complex64::from_polar(1.0, -col[n].arg());
        col.mapv_inplace(|x| Complex64::from_polar(1.0, x.arg()) * reference);
    }
    let scores = full_band.quad_columns(&lifted);
    let best_col = scores
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("num_samples >= 1");
    let sampled = RisPhaseVector::from_unit_unchecked(lifted.column(best_col).iter().take(n).copied().collect());

    let refined = if ascent_passes > 0 {
        coordinate_ascent(&sampled, freq, ascent_passes)?
    } else {
        sampled
    };
    let ones = RisPhaseVector::unconfigured(n);
    if power_objective(freq, ones.as_slice())? > power_objective(freq, refined.as_slice())? {
        Ok(ones)
    } else {
        Ok(refined)
    }
}
