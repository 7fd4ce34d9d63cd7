use std::f64::consts::TAU;

use num_complex::Complex64;

use super::RisPhaseVector;
use crate::channel::FrequencyChannel;
use crate::error::{Error, Result};

/// Largest number of phase combinations the exhaustive search will visit.
pub const BRUTE_FORCE_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub theta: RisPhaseVector,
    /// Phase index `q_i` of each element; `θ_i = exp(j 2π q_i / levels)`.
    pub indices: Vec<usize>,
    pub objective: f64,
}

/// Exhaustive search over `levels` uniformly spaced phases per element.
/// Ties go to the lexicographically smallest index tuple.
pub fn brute_force(freq: &FrequencyChannel, levels: usize) -> Result<BruteForceResult> {
    let n = freq.num_elements();
    let k = freq.num_subcarriers();
    let over_budget = Error::Budget {
        levels,
        elements: n,
        budget: BRUTE_FORCE_BUDGET,
    };
    if levels == 0 {
        return Err(Error::domain("need at least one phase level"));
    }
    let total = u32::try_from(n)
        .ok()
        .and_then(|e| (levels as u64).checked_pow(e))
        .filter(|&t| t <= BRUTE_FORCE_BUDGET)
        .ok_or(over_budget)?;

    let phasors: Vec<Complex64> = (0..levels)
        .map(|q| Complex64::from_polar(1.0, TAU * q as f64 / levels as f64))
        .collect();
    // contrib[i][q][n] = a_{n,i} · phasor_q
    let contrib: Vec<Vec<Vec<Complex64>>> = (0..n)
        .map(|i| {
            phasors
                .iter()
                .map(|p| freq.cascade().column(i).iter().map(|a| a * p).collect())
                .collect()
        })
        .collect();

    let mut idx = vec![0usize; n];
    let mut best_idx = idx.clone();
    let mut best = f64::NEG_INFINITY;
    let mut h = vec![Complex64::ZERO; k];
    for _ in 0..total {
        h.copy_from_slice(freq.direct().as_slice().expect("contiguous"));
        for (i, &q) in idx.iter().enumerate() {
            for (hn, c) in h.iter_mut().zip(&contrib[i][q]) {
                *hn += c;
            }
        }
        let f: f64 = h.iter().map(|x| x.norm_sqr()).sum();
        if f > best {
            best = f;
            best_idx.copy_from_slice(&idx);
        }
        // Odometer with the last element varying fastest (lexicographic order).
        for i in (0..n).rev() {
            idx[i] += 1;
            if idx[i] < levels {
                break;
            }
            idx[i] = 0;
        }
    }

    Ok(BruteForceResult {
        theta: RisPhaseVector::from_unit_unchecked(best_idx.iter().map(|&q| phasors[q]).collect()),
        indices: best_idx,
        objective: best,
    })
}
