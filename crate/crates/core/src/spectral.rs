//! Trigonometric calculus on the periodic grid.
//!
//! Coefficients follow the unit-normalized convention
//! `h_k = (1 / N) sum_x h(x) e^{-i k.x}`, which is the trapezoidal value of
//! `(1 / 4 pi^2) int h e^{-i k.x}` and is exact for band-limited fields.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::grid::TorusGrid;

/// Signed wavenumber of FFT bin `i` on a circle with `n` samples. The Nyquist
/// bin `n / 2` is reported as positive.
#[inline]
pub fn wavenumber(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// FFT bin holding wavenumber `k` on a circle with `n` samples.
#[inline]
pub fn bin(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}

/// Cached 2-D transforms for one grid shape.
#[derive(Clone)]
pub struct Spectral {
    grid: TorusGrid,
    theta_fwd: Arc<dyn Fft<f64>>,
    theta_inv: Arc<dyn Fft<f64>>,
    phi_fwd: Arc<dyn Fft<f64>>,
    phi_inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("grid", &self.grid).finish()
    }
}

const ROWS_PER_TASK: usize = 32;

fn run_rows(fft: &Arc<dyn Fft<f64>>, data: &mut [Complex64], row_len: usize) {
    if data.len() <= row_len * ROWS_PER_TASK {
        fft.process(data);
    } else {
        data.par_chunks_mut(row_len * ROWS_PER_TASK)
            .for_each(|chunk| fft.process(chunk));
    }
}

fn transpose(src: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
    out.par_chunks_mut(rows).enumerate().for_each(|(c, col)| {
        for (r, slot) in col.iter_mut().enumerate() {
            *slot = src[r * cols + c];
        }
    });
    out
}

impl Spectral {
    pub fn new(grid: TorusGrid) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            grid,
            theta_fwd: planner.plan_fft_forward(grid.n_theta()),
            theta_inv: planner.plan_fft_inverse(grid.n_theta()),
            phi_fwd: planner.plan_fft_forward(grid.n_phi()),
            phi_inv: planner.plan_fft_inverse(grid.n_phi()),
        }
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    fn transform(&self, mut data: Vec<Complex64>, forward: bool) -> Vec<Complex64> {
        let (nt, np) = (self.grid.n_theta(), self.grid.n_phi());
        let (phi, theta) = if forward {
            (&self.phi_fwd, &self.theta_fwd)
        } else {
            (&self.phi_inv, &self.theta_inv)
        };
        run_rows(phi, &mut data, np);
        let mut cols = transpose(&data, nt, np);
        run_rows(theta, &mut cols, nt);
        transpose(&cols, np, nt)
    }

    /// Unit-normalized Fourier coefficients of a real field.
    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        debug_assert_eq!(values.len(), self.grid.len());
        let data = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let scale = 1.0 / self.grid.len() as f64;
        let mut out = self.transform(data, true);
        out.iter_mut().for_each(|c| *c *= scale);
        out
    }

    /// Real part of the synthesis of unit-normalized coefficients.
    pub fn inverse(&self, coeffs: Vec<Complex64>) -> Vec<f64> {
        self.transform(coeffs, false).into_iter().map(|c| c.re).collect()
    }

    /// Applies a real Fourier multiplier `m(k_theta, k_phi)` to the coefficients.
    pub fn multiply<F>(&self, coeffs: &[Complex64], multiplier: F) -> Vec<Complex64>
    where
        F: Fn(i64, i64) -> f64 + Sync,
    {
        let (nt, np) = (self.grid.n_theta(), self.grid.n_phi());
        coeffs
            .par_iter()
            .enumerate()
            .map(|(idx, c)| {
                let (i, j) = (idx / np, idx % np);
                c * multiplier(wavenumber(i, nt), wavenumber(j, np))
            })
            .collect()
    }

    /// Mixed partial `d^p/dtheta^p d^q/dphi^q` from precomputed coefficients.
    ///
    /// Odd-order derivatives drop the Nyquist bin so the result stays real.
    pub fn derivative(&self, coeffs: &[Complex64], p: u32, q: u32) -> Vec<f64> {
        let (nt, np) = (self.grid.n_theta(), self.grid.n_phi());
        let (nyq_t, nyq_p) = ((nt / 2) as i64, (np / 2) as i64);
        let i_pow = Complex64::new(0.0, 1.0).powu(p + q);
        let scaled: Vec<Complex64> = coeffs
            .par_iter()
            .enumerate()
            .map(|(idx, c)| {
                let kt = wavenumber(idx / np, nt);
                let kp = wavenumber(idx % np, np);
                if (p % 2 == 1 && kt == nyq_t) || (q % 2 == 1 && kp == nyq_p) {
                    return Complex64::new(0.0, 0.0);
                }
                c * i_pow * (kt as f64).powi(p as i32) * (kp as f64).powi(q as i32)
            })
            .collect();
        self.inverse(scaled)
    }

    /// Convenience wrapper: derivative of a sampled field.
    pub fn differentiate(&self, values: &[f64], p: u32, q: u32) -> Vec<f64> {
        self.derivative(&self.forward(values), p, q)
    }

    /// Trigonometric interpolation of a real field onto another grid.
    ///
    /// Nyquist bins are split evenly between `+N/2` and `-N/2` when padding and
    /// folded back when truncating, so band-limited fields are reproduced exactly.
    pub fn resample(&self, values: &[f64], target: TorusGrid) -> Vec<f64> {
        let coeffs = self.forward(values);
        let (nt, np) = (self.grid.n_theta(), self.grid.n_phi());
        let (mt, mp) = (target.n_theta(), target.n_phi());
        let mut out = vec![Complex64::new(0.0, 0.0); target.len()];
        for (idx, c) in coeffs.iter().enumerate() {
            let (i, j) = (idx / np, idx % np);
            let kt = wavenumber(i, nt);
            let kp = wavenumber(j, np);
            let t_targets = spread(kt, nt, mt);
            let p_targets = spread(kp, np, mp);
            for &(ti, wt) in &t_targets {
                for &(pj, wp) in &p_targets {
                    out[ti * mp + pj] += c * (wt * wp);
                }
            }
        }
        Spectral::new(target).inverse(out)
    }
}

/// Destination bins and weights for wavenumber `k` moving from `n` to `m` samples.
fn spread(k: i64, n: usize, m: usize) -> Vec<(usize, f64)> {
    let nyq = (n / 2) as i64;
    let half_m = (m / 2) as i64;
    if k == nyq {
        if m > n {
            return vec![(bin(k, m), 0.5), (bin(-k, m), 0.5)];
        }
        if k == half_m {
            return vec![(bin(k, m), 1.0)];
        }
    }
    if k.abs() < half_m || (k.abs() == half_m && m >= n) {
        vec![(bin(k, m), 1.0)]
    } else if k.abs() == half_m {
        vec![(bin(half_m, m), 1.0)]
    } else {
        Vec::new()
    }
}
