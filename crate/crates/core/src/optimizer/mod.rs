//! RIS phase configuration: semidefinite relaxation of the channel-power
//! objective, Gaussian randomization, coordinate-ascent refinement, and the
//! exhaustive and unconfigured reference configurations.

mod ascent;
mod brute;
mod extract;
mod factor;
mod quadratic;
mod sdr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub use ascent::{coordinate_ascent, coordinate_ascent_trace};
pub use brute::{brute_force, BruteForceResult, BRUTE_FORCE_BUDGET};
pub use extract::randomize_extract;
pub use factor::LowRankFactor;
pub use quadratic::{build_quadratic, lift, uniform_subset, QuadraticForm};
pub use sdr::{default_rank, sdr_solve, trace_objective, SdrSolution};

use crate::channel::FrequencyChannel;
use crate::error::{Error, Result};
use crate::ofdm::composite_channel;

/// Coefficients must lie on the unit circle to within this.
pub const UNIT_MODULUS_TOL: f64 = 1e-9;

/// Reflection coefficients of the N surface elements, all unit-modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct RisPhaseVector(Vec<Complex64>);

impl RisPhaseVector {
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        if let Some((i, c)) = coefficients
            .iter()
            .enumerate()
            .find(|(_, c)| !((c.norm() - 1.0).abs() <= UNIT_MODULUS_TOL))
        {
            return Err(Error::domain(format!("coefficient {i} has modulus {}", c.norm())));
        }
        Ok(Self(coefficients))
    }

    pub(crate) fn from_unit_unchecked(coefficients: Vec<Complex64>) -> Self {
        debug_assert!(coefficients.iter().all(|c| (c.norm() - 1.0).abs() <= UNIT_MODULUS_TOL));
        Self(coefficients)
    }

    pub fn from_phases(phases: &[f64]) -> Self {
        Self(phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect())
    }

    /// Every element at phase zero.
    pub fn unconfigured(n_elements: usize) -> Self {
        Self(vec![Complex64::ONE; n_elements])
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn phases(&self) -> Vec<f64> {
        self.0.iter().map(|c| c.arg()).collect()
    }
}

/// The unconfigured surface (a passive metal sheet).
pub fn unconfigured(n_elements: usize) -> RisPhaseVector {
    RisPhaseVector::unconfigured(n_elements)
}

/// `f(θ) = Σ_n |H_d,n + a_nᵀθ|²` over every subcarrier.
pub fn power_objective(freq: &FrequencyChannel, theta: &[Complex64]) -> Result<f64> {
    Ok(composite_channel(freq, theta)?.iter().map(|h| h.norm_sqr()).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    /// Factorization rank; `⌈√(2(N+1))⌉` when unset.
    pub rank: Option<usize>,
    pub max_iters: usize,
    /// Relative objective change that ends the ascent.
    pub tolerance: f64,
    pub restarts: usize,
    pub randomization_samples: usize,
    /// Coordinate-ascent passes applied to the best randomized candidate.
    pub ascent_passes: usize,
    /// Subcarriers used to build the relaxed objective (all of them when
    /// there are no more than this).
    pub max_subset: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            rank: None,
            max_iters: 5000,
            tolerance: 1e-8,
            restarts: 3,
            randomization_samples: 1000,
            ascent_passes: 50,
            max_subset: 256,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if self.rank == Some(0) {
            return Err(Error::config("solver rank must be at least 1"));
        }
        if self.max_iters == 0 || self.restarts == 0 || self.randomization_samples == 0 || self.max_subset == 0 {
            return Err(Error::config(
                "max_iters, restarts, randomization_samples and max_subset must be positive",
            ));
        }
        if !(self.tolerance >= 0.0) {
            return Err(Error::config("solver tolerance must be non-negative"));
        }
        Ok(())
    }
}

/// Outcome of the full SDR configuration pipeline.
#[derive(Debug, Clone)]
pub struct SdrConfiguration {
    pub theta: RisPhaseVector,
    /// Relaxation value `Tr(R V)` on the subcarrier subset; `None` when the
    /// solver was skipped.
    pub relaxation_value: Option<f64>,
    pub converged: bool,
    /// The cascade carries no energy, so every configuration is equivalent
    /// and the unconfigured vector was returned.
    pub degenerate: bool,
}

/// Builds the lifted objective, solves the relaxation and extracts a phase
/// vector.
pub fn configure_sdr<R: Rng + ?Sized>(
    freq: &FrequencyChannel,
    opts: &SolverOptions,
    rng: &mut R,
) -> Result<SdrConfiguration> {
    let n = freq.num_elements();
    if freq.cascade_is_zero() {
        return Ok(SdrConfiguration {
            theta: RisPhaseVector::unconfigured(n),
            relaxation_value: None,
            converged: true,
            degenerate: true,
        });
    }
    let subset = freq.num_subcarriers().min(opts.max_subset);
    let form = build_quadratic(freq, subset)?;
    let sol = sdr_solve(&form, opts, rng)?;
    let theta = randomize_extract(&sol, freq, opts.randomization_samples, opts.ascent_passes, rng)?;
    Ok(SdrConfiguration {
        theta,
        relaxation_value: Some(sol.objective),
        converged: sol.converged,
        degenerate: false,
    })
}
