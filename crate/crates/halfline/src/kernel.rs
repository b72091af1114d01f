//! Dense two-point kernels `K(x_i, y_j)` with quadrature-weighted
//! application. Row and column grids may differ (transform kernels) or
//! coincide (resolvents, projections).

use crate::grid::{same_grid, GridError, GridFunction, RadialGrid};
use crate::util::par;
use num_complex::Complex64;
use std::sync::Arc;

#[derive(Clone)]
pub struct IntegralKernel {
    rows: Arc<RadialGrid>,
    cols: Arc<RadialGrid>,
    entries: Vec<Complex64>,
}

impl IntegralKernel {
    /// Assemble entries row-parallel from a pointwise rule.
    pub fn from_fn<F>(rows: &Arc<RadialGrid>, cols: &Arc<RadialGrid>, f: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64 + Sync,
    {
        let (nr, nc) = (rows.len(), cols.len());
        let mut entries = vec![Complex64::new(0.0, 0.0); nr * nc];
        let xs = rows.nodes();
        let ys = cols.nodes();
        par::fill_rows(&mut entries, nr, nc, |i, row| {
            for (j, out) in row.iter_mut().enumerate() {
                *out = f(xs[i], ys[j]);
            }
        });
        IntegralKernel {
            rows: rows.clone(),
            cols: cols.clone(),
            entries,
        }
    }

    /// Symmetric separable kernel `K(x, y) = u0(min(x,y)) uinf(max(x,y))`
    /// from sampled factor functions (the Green construction).
    pub fn separable_symmetric(u0: &GridFunction, uinf: &GridFunction) -> Result<Self, GridError> {
        if !same_grid(u0.grid(), uinf.grid()) {
            return Err(GridError::Mismatch);
        }
        let g = u0.grid().clone();
        let n = g.len();
        let a = u0.values();
        let b = uinf.values();
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        par::fill_rows(&mut entries, n, n, |i, row| {
            for (j, out) in row.iter_mut().enumerate() {
                *out = if j >= i { a[i] * b[j] } else { a[j] * b[i] };
            }
        });
        Ok(IntegralKernel {
            rows: g.clone(),
            cols: g,
            entries,
        })
    }

    pub fn rows(&self) -> &Arc<RadialGrid> {
        &self.rows
    }

    pub fn cols(&self) -> &Arc<RadialGrid> {
        &self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols.len() + j]
    }

    /// `(K f)(x_i) = Σ_j K(x_i, y_j) w_j f(y_j)`, fixed row-major order.
    pub fn apply(&self, f: &GridFunction) -> Result<GridFunction, GridError> {
        if !same_grid(f.grid(), &self.cols) {
            return Err(GridError::Mismatch);
        }
        let w = self.cols.weights();
        let fv = f.values();
        let nc = self.cols.len();
        let values = (0..self.rows.len())
            .map(|i| {
                let row = &self.entries[i * nc..(i + 1) * nc];
                row.iter()
                    .zip(fv)
                    .zip(w)
                    .map(|((k, v), wj)| k * v * *wj)
                    .sum()
            })
            .collect();
        GridFunction::from_values(self.rows.clone(), values)
    }

    /// Transposed application (row grid as the integration variable):
    /// `(Kᵀ g)(y_j) = Σ_i K(x_i, y_j) w_i g(x_i)`.
    pub fn apply_transpose(&self, g: &GridFunction) -> Result<GridFunction, GridError> {
        if !same_grid(g.grid(), &self.rows) {
            return Err(GridError::Mismatch);
        }
        let w = self.rows.weights();
        let gv = g.values();
        let nc = self.cols.len();
        let mut values = vec![Complex64::new(0.0, 0.0); nc];
        for i in 0..self.rows.len() {
            let row = &self.entries[i * nc..(i + 1) * nc];
            let c = w[i] * gv[i];
            for (out, k) in values.iter_mut().zip(row) {
                *out += k * c;
            }
        }
        GridFunction::from_values(self.cols.clone(), values)
    }

    /// Max entrywise deviation against another kernel on the same lattice.
    pub fn max_entry_deviation(&self, other: &IntegralKernel) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max |K(x,y) - K(y,x)| over the lattice (square kernels).
    pub fn symmetry_deviation(&self) -> f64 {
        let n = self.cols.len();
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in 0..i {
                dev = dev.max((self.entry(i, j) - self.entry(j, i)).norm());
            }
        }
        dev
    }
}
