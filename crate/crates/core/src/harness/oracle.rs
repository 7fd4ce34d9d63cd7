//! Compares the SDR pipeline against exhaustive quantized search on small
//! random instances.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::seed::child_seed;
use crate::channel::random_frequency_channel;
use crate::error::Result;
use crate::optimizer::{brute_force, configure_sdr, power_objective, SolverOptions};

pub const ORACLE_LEVELS: usize = 16;
/// Required fraction of the quantized optimum reached by the pipeline.
pub const ORACLE_RATIO: f64 = 0.95;

#[derive(Debug, Clone)]
pub struct OracleInstance {
    pub elements: usize,
    pub subcarriers: usize,
    /// Power objective of the SDR pipeline output.
    pub pipeline: f64,
    /// Value of the relaxation.
    pub relaxation: f64,
    /// Best objective over the quantized phase grid.
    pub quantized_optimum: f64,
}

impl OracleInstance {
    pub fn ratio_ok(&self) -> bool {
        self.pipeline >= ORACLE_RATIO * self.quantized_optimum
    }

    pub fn bound_ok(&self) -> bool {
        self.relaxation >= self.quantized_optimum
    }
}

#[derive(Debug, Clone)]
pub struct OracleReport {
    pub instances: Vec<OracleInstance>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.instances.iter().all(|i| i.ratio_ok() && i.bound_ok())
    }

    pub fn worst_ratio(&self) -> f64 {
        self.instances
            .iter()
            .map(|i| i.pipeline / i.quantized_optimum)
            .fold(f64::INFINITY, f64::min)
    }
}

/// `count` i.i.d. Rayleigh instances cycling through N = 1..=4 elements and
/// K = 2..=8 subcarriers.
pub fn oracle_check(count: usize, master_seed: u64, opts: &SolverOptions) -> Result<OracleReport> {
    let instances = (0..count)
        .map(|i| {
            let elements = 1 + i % 4;
            let subcarriers = 2 + i % 7;
            let mut rng = ChaCha8Rng::seed_from_u64(child_seed(master_seed, &[i as u64]));
            let freq = random_frequency_channel(subcarriers, elements, &mut rng)?;
            let cfg = configure_sdr(&freq, opts, &mut rng)?;
            Ok(OracleInstance {
                elements,
                subcarriers,
                pipeline: power_objective(&freq, cfg.theta.as_slice())?,
                relaxation: cfg.relaxation_value.unwrap_or(f64::NAN),
                quantized_optimum: brute_force(&freq, ORACLE_LEVELS)?.objective,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleReport { instances })
}
