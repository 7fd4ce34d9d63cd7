//! Low-rank (Burer–Monteiro) solver for the unit-diagonal SDP
//! `max Tr(R V)  s.t.  V ⪰ 0, V_kk = 1`, with `V = U Uᴴ`.

use ndarray::{Array1, Array2, Axis, Zip};
use num_complex::Complex64;
use rand::Rng;

use super::factor::LowRankFactor;
use super::quadratic::QuadraticForm;
use super::SolverOptions;
use crate::channel::complex_gaussian;
use crate::error::Result;

/// Maximum step halvings before an iterate is declared stationary.
const MAX_BACKTRACKS: usize = 40;

#[derive(Debug, Clone)]
pub struct SdrSolution {
    /// `(N+1) × r`, unit-norm rows.
    pub gram_factor: Array2<Complex64>,
    /// `Tr(R U Uᴴ)`.
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl SdrSolution {
    pub fn rank(&self) -> usize {
        self.gram_factor.ncols()
    }
}

/// Default factorization rank `⌈√(2(N+1))⌉`.
pub fn default_rank(dim: usize) -> usize {
    ((2.0 * dim as f64).sqrt().ceil() as usize).clamp(1, dim.max(1))
}

/// Projected gradient ascent on the rows of `U`.
///
/// Each row moves along its block of the Euclidean gradient `2 R U`, scaled
/// by `1 / (2 Σ_j |R_ij|)`, and is then renormalized. The step is halved
/// until the objective does not decrease. Stops when the relative objective
/// change drops below `opts.tolerance` or after `opts.max_iters` iterations;
/// the best of `opts.restarts` random starts is returned.
pub fn sdr_solve<R: Rng + ?Sized>(
    form: &QuadraticForm,
    opts: &SolverOptions,
    rng: &mut R,
) -> Result<SdrSolution> {
    let factor = form.validate()?;
    let d = form.dim();
    let r = opts.rank.unwrap_or_else(|| default_rank(d)).clamp(1, d);

    let row_step: Array1<f64> = form
        .matrix()
        .axis_iter(Axis(0))
        .map(|row| {
            let l1: f64 = row.iter().map(|x| x.norm()).sum();
            if l1 > 0.0 {
                1.0 / (2.0 * l1)
            } else {
                0.0
            }
        })
        .collect();

    let mut best: Option<SdrSolution> = None;
    for _ in 0..opts.restarts.max(1) {
        let mut u = Array2::from_shape_fn((d, r), |_| complex_gaussian(rng));
        normalize_rows(&mut u, None);
        let sol = ascend(&factor, &row_step, u, opts);
        if best.as_ref().is_none_or(|b| sol.objective > b.objective) {
            best = Some(sol);
        }
    }
    let mut best = best.expect("at least one restart");
    best.objective = trace_objective(form.matrix(), &best.gram_factor);
    Ok(best)
}

fn ascend(factor: &LowRankFactor, row_step: &Array1<f64>, mut u: Array2<Complex64>, opts: &SolverOptions) -> SdrSolution {
    let mut ru = factor.apply(&u);
    let mut obj = objective_from(&u, &ru);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < opts.max_iters {
        iterations += 1;
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let mut cand = u.clone();
            Zip::from(cand.rows_mut())
                .and(ru.rows())
                .and(row_step)
                .for_each(|mut c, g, &eta| c.scaled_add(Complex64::new(2.0 * alpha * eta, 0.0), &g));
            normalize_rows(&mut cand, Some(&u));
            let cand_ru = factor.apply(&cand);
            let cand_obj = objective_from(&cand, &cand_ru);
            if cand_obj >= obj {
                accepted = Some((cand, cand_ru, cand_obj));
                break;
            }
            alpha *= 0.5;
        }
        let Some((cand, cand_ru, cand_obj)) = accepted else {
            converged = true;
            break;
        };
        let change = (cand_obj - obj) / obj.abs().max(f64::MIN_POSITIVE);
        u = cand;
        ru = cand_ru;
        obj = cand_obj;
        if change < opts.tolerance {
            converged = true;
            break;
        }
    }
    SdrSolution {
        gram_factor: u,
        objective: obj,
        iterations,
        converged,
    }
}

/// `Re Tr(Uᴴ · RU)`.
fn objective_from(u: &Array2<Complex64>, ru: &Array2<Complex64>) -> f64 {
    u.iter().zip(ru.iter()).map(|(a, b)| (a.conj() * b).re).sum()
}

/// `Tr(R U Uᴴ)` with the dense matrix.
pub fn trace_objective(r: &Array2<Complex64>, u: &Array2<Complex64>) -> f64 {
    objective_from(u, &r.dot(u))
}

/// Scales every row to unit norm. A row that vanished falls back to the
/// corresponding row of `fallback` (or `e_1`).
fn normalize_rows(u: &mut Array2<Complex64>, fallback: Option<&Array2<Complex64>>) {
    for (i, mut row) in u.rows_mut().into_iter().enumerate() {
        let norm = row.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-300 {
            row.mapv_inplace(|x| x / norm);
        } else if let Some(prev) = fallback {
            row.assign(&prev.row(i));
        } else {
            row.fill(Complex64::ZERO);
            row[0] = Complex64::ONE;
        }
    }
}
