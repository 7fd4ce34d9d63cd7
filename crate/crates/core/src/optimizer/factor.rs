//! Low-rank factors `M ≈ Fᴴ F` of Hermitian PSD matrices.
//!
//! The channel-power forms seen in practice have very low numerical rank
//! (a frequency-flat cascade gives rank two), so products and quadratic
//! forms go through the thin factor instead of the dense matrix.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative pivot threshold for the pivoted Cholesky factorization.
const PIVOT_TOL: f64 = 1e-14;
/// Relative residual threshold for the row-space Gram–Schmidt.
const ROW_TOL: f64 = 1e-12;
/// Eigenvalues down to `-PSD_TOL * trace` are accepted as PSD.
pub(crate) const PSD_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct LowRankFactor {
    /// `rank × dim`; the represented matrix is `factorᴴ · factor`.
    factor: Array2<Complex64>,
}

impl LowRankFactor {
    /// Pivoted Cholesky of a Hermitian matrix. Fails when the matrix has an
    /// eigenvalue below `-PSD_TOL * trace`.
    pub fn from_psd(matrix: &Array2<Complex64>) -> Result<Self> {
        let d = matrix.nrows();
        if matrix.ncols() != d {
            return Err(Error::domain("matrix must be square"));
        }
        let mut resid: Vec<f64> = (0..d).map(|i| matrix[[i, i]].re).collect();
        let abs_trace: f64 = resid.iter().map(|x| x.abs()).sum();
        let scale = resid.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let psd_slack = PSD_TOL * abs_trace;

        let mut cols: Vec<Array1<Complex64>> = Vec::new();
        loop {
            let (p, &best) = match resid
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
            {
                Some(x) => x,
                None => break,
            };
            if best <= PIVOT_TOL * scale || cols.len() == d {
                break;
            }
            let pivot = best.sqrt();
            let mut col = matrix.column(p).to_owned();
            for l in &cols {
                let lp = l[p].conj();
                col.zip_mut_with(l, |c, li| *c -= li * lp);
            }
            col.mapv_inplace(|c| c / pivot);
            col[p] = Complex64::new(pivot, 0.0);
            for (r, c) in resid.iter_mut().zip(col.iter()) {
                *r -= c.norm_sqr();
            }
            resid[p] = 0.0;
            cols.push(col);
        }

        if resid.iter().any(|&r| r < -psd_slack) {
            return Err(Error::domain("matrix is not positive semidefinite"));
        }

        let mut factor = Array2::zeros((cols.len(), d));
        for (k, col) in cols.iter().enumerate() {
            factor.row_mut(k).assign(&col.mapv(|c| c.conj()));
        }
        let out = Self { factor };

        // The truncated remainder must itself be (numerically) PSD; bound its
        // smallest eigenvalue with Gershgorin discs.
        if out.rank() < d {
            let residual = matrix - &out.dense();
            for i in 0..d {
                let off: f64 = (0..d).filter(|&j| j != i).map(|j| residual[[i, j]].norm()).sum();
                if residual[[i, i]].re - off < -psd_slack {
                    return Err(Error::domain("matrix is not positive semidefinite"));
                }
            }
        }
        Ok(out)
    }

    /// Factor of `Σ_n rowᴴ_n row_n = Mᴴ M` for the rows of `m`, via
    /// Gram–Schmidt on the row space.
    pub fn from_rows(m: ArrayView2<Complex64>) -> Self {
        let dim = m.ncols();
        let scale = m
            .rows()
            .into_iter()
            .map(|r| norm(r))
            .fold(0.0f64, f64::max);
        let mut basis: Vec<Array1<Complex64>> = Vec::new();
        let mut coeffs: Vec<Vec<Complex64>> = Vec::with_capacity(m.nrows());

        for row in m.rows() {
            let mut r = row.to_owned();
            let mut t = vec![Complex64::ZERO; basis.len()];
            // Two passes of modified Gram–Schmidt keep the basis orthonormal.
            for _ in 0..2 {
                for (k, w) in basis.iter().enumerate() {
                    let proj = inner(w.view(), r.view());
                    r.zip_mut_with(w, |x, wi| *x -= wi * proj);
                    t[k] += proj;
                }
            }
            let rn = norm(r.view());
            if scale > 0.0 && rn > ROW_TOL * scale {
                r.mapv_inplace(|x| x / rn);
                basis.push(r);
                t.push(Complex64::new(rn, 0.0));
            }
            coeffs.push(t);
        }

        let rank = basis.len();
        if rank == 0 {
            return Self {
                factor: Array2::zeros((0, dim)),
            };
        }
        // Mᴴ M = Wᴴ (Tᴴ T) W with W the orthonormal rows.
        let mut t = Array2::<Complex64>::zeros((coeffs.len(), rank));
        for (n, c) in coeffs.iter().enumerate() {
            for (k, v) in c.iter().enumerate() {
                t[[n, k]] = *v;
            }
        }
        let gram = t.t().mapv(|x| x.conj()).dot(&t);
        let gram_factor = Self::from_psd(&hermitize(gram)).expect("Gram matrix is PSD by construction");
        let mut w = Array2::<Complex64>::zeros((rank, dim));
        for (k, b) in basis.iter().enumerate() {
            w.row_mut(k).assign(b);
        }
        Self {
            factor: gram_factor.factor.dot(&w),
        }
    }

    pub fn rank(&self) -> usize {
        self.factor.nrows()
    }

    pub fn dim(&self) -> usize {
        self.factor.ncols()
    }

    pub fn dense(&self) -> Array2<Complex64> {
        self.factor.t().mapv(|x| x.conj()).dot(&self.factor)
    }

    /// `vᴴ M v`.
    pub fn quad(&self, v: ArrayView1<Complex64>) -> f64 {
        self.factor.dot(&v).iter().map(|x| x.norm_sqr()).sum()
    }

    /// `M · U`.
    pub fn apply(&self, u: &Array2<Complex64>) -> Array2<Complex64> {
        let inner = self.factor.dot(u);
        self.factor.t().mapv(|x| x.conj()).dot(&inner)
    }

    /// `vᴴ M v` for every column `v` of `vs`.
    pub fn quad_columns(&self, vs: &Array2<Complex64>) -> Vec<f64> {
        let proj = self.factor.dot(vs);
        proj.axis_iter(Axis(1))
            .map(|c| c.iter().map(|x| x.norm_sqr()).sum())
            .collect()
    }
}

/// `(A + Aᴴ) / 2`, exactly Hermitian.
pub fn hermitize(mut a: Array2<Complex64>) -> Array2<Complex64> {
    let d = a.nrows();
    for i in 0..d {
        a[[i, i]].im = 0.0;
        for j in (i + 1)..d {
            let avg = (a[[i, j]] + a[[j, i]].conj()) * 0.5;
            a[[i, j]] = avg;
            a[[j, i]] = avg.conj();
        }
    }
    a
}

/// `⟨w, x⟩ = Σ conj(w_i) x_i`.
fn inner(w: ArrayView1<Complex64>, x: ArrayView1<Complex64>) -> Complex64 {
    w.iter().zip(x.iter()).map(|(a, b)| a.conj() * b).sum()
}

fn norm(x: ArrayView1<Complex64>) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}
