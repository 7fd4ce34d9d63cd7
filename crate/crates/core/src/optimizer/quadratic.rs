use ndarray::{s, Array1, Array2};
use num_complex::Complex64;

use super::factor::{hermitize, LowRankFactor};
use crate::channel::FrequencyChannel;
use crate::error::{Error, Result};

/// Hermitian PSD lift `R` of the channel-power objective: for an extended
/// vector `v = [θ; t]` with `|t| = 1`, `vᴴ R v = Σ_{n∈S} |H_d,n·t + a_nᵀθ|²`.
#[derive(Debug, Clone)]
pub struct QuadraticForm {
    matrix: Array2<Complex64>,
    subcarrier_subset: Vec<usize>,
}

impl QuadraticForm {
    /// Wraps an arbitrary matrix; [`validate`](Self::validate) checks it.
    pub fn from_matrix(matrix: Array2<Complex64>, subcarrier_subset: Vec<usize>) -> Self {
        Self {
            matrix,
            subcarrier_subset,
        }
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn subcarrier_subset(&self) -> &[usize] {
        &self.subcarrier_subset
    }

    /// Side length `N + 1`.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Hermitian to 1e-12 (relative to the largest entry) and PSD to
    /// `-1e-9 · trace`. Returns the low-rank factor used by the solver.
    pub fn validate(&self) -> Result<LowRankFactor> {
        let d = self.matrix.nrows();
        if d == 0 || self.matrix.ncols() != d {
            return Err(Error::domain("quadratic form must be a non-empty square matrix"));
        }
        if self.matrix.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(Error::domain("quadratic form has non-finite entries"));
        }
        let scale = self.matrix.iter().fold(0.0f64, |m, x| m.max(x.norm()));
        for i in 0..d {
            for j in i..d {
                if (self.matrix[[i, j]] - self.matrix[[j, i]].conj()).norm() > 1e-12 * scale {
                    return Err(Error::domain("quadratic form is not Hermitian"));
                }
            }
        }
        LowRankFactor::from_psd(&self.matrix)
    }

    /// `vᴴ R v`.
    pub fn value(&self, v: &[Complex64]) -> f64 {
        let v = Array1::from(v.to_vec());
        let rv = self.matrix.dot(&v);
        v.iter().zip(rv.iter()).map(|(a, b)| (a.conj() * b).re).sum()
    }
}

/// `subset_size` uniformly spaced indices out of `k`.
pub fn uniform_subset(k: usize, subset_size: usize) -> Vec<usize> {
    (0..subset_size).map(|j| j * k / subset_size).collect()
}

/// `R = Σ_{n∈S} c_n c_nᴴ` with `c_n = conj([a_n; H_d,n])` over a uniformly
/// spaced subcarrier subset `S`.
pub fn build_quadratic(freq: &FrequencyChannel, subset_size: usize) -> Result<QuadraticForm> {
    let k = freq.num_subcarriers();
    if subset_size == 0 || subset_size > k {
        return Err(Error::domain(format!(
            "subcarrier subset size {subset_size} must be in 1..={k}"
        )));
    }
    let subset = uniform_subset(k, subset_size);
    let rows = extended_rows(freq, &subset);
    let r = rows.t().mapv(|x| x.conj()).dot(&rows);
    Ok(QuadraticForm {
        matrix: hermitize(r),
        subcarrier_subset: subset,
    })
}

/// Rows `[a_n, H_d,n]` for the given subcarriers; `R = Mᴴ M`.
pub(crate) fn extended_rows(freq: &FrequencyChannel, subcarriers: &[usize]) -> Array2<Complex64> {
    let n = freq.num_elements();
    let mut m = Array2::zeros((subcarriers.len(), n + 1));
    for (row, &sc) in subcarriers.iter().enumerate() {
        m.slice_mut(s![row, ..n]).assign(&freq.cascade().row(sc));
        m[[row, n]] = freq.direct()[sc];
    }
    m
}

/// `[θ; 1]` rotated by the global phase `phi`.
pub fn lift(theta: &[Complex64], phi: f64) -> Vec<Complex64> {
    let rot = Complex64::from_polar(1.0, phi);
    theta.iter().map(|x| x * rot).chain(std::iter::once(rot)).collect()
}
