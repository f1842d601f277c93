//! Sparse storage of `A_αλκ`.

use std::sync::Arc;

use super::KernelSpec;
use crate::error::{Error, Result};
use crate::index::{basis_size, MultiIndex};

#[derive(Debug)]
struct Storage {
    /// `row_ptr[a]..row_ptr[a+1]` spans the entries of α-rank `a`.
    row_ptr: Vec<usize>,
    cols: Vec<(u32, u32)>,
    vals: Vec<f64>,
}

/// Collision tensor for one `(m, kernel)` pair, expanded about `[0, T̄]`.
///
/// Entries are stored once about `[0, 1]`; a rescaled tensor shares the same
/// storage and only carries a different scale factor.
#[derive(Clone, Debug)]
pub struct CollisionTensor {
    m: usize,
    kernel: KernelSpec,
    drop_tol: f64,
    storage: Arc<Storage>,
    scale: f64,
    center_temperature: f64,
}

impl CollisionTensor {
    /// Builds a tensor from rows of `(rank λ, rank κ, value)` ordered by α-rank.
    pub(crate) fn from_rows(m: usize, kernel: KernelSpec, drop_tol: f64, rows: Vec<Vec<(u32, u32, f64)>>) -> Self {
        debug_assert_eq!(rows.len(), basis_size(m));
        let nnz = rows.iter().map(Vec::len).sum();
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        let mut cols = Vec::with_capacity(nnz);
        let mut vals = Vec::with_capacity(nnz);
        row_ptr.push(0);
        for mut row in rows {
            row.sort_unstable_by_key(|&(l, k, _)| (l, k));
            for (l, k, v) in row {
                cols.push((l, k));
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        CollisionTensor {
            m,
            kernel,
            drop_tol,
            storage: Arc::new(Storage { row_ptr, cols, vals }),
            scale: 1.0,
            center_temperature: 1.0,
        }
    }

    /// Builds a tensor from `(α, λ, κ, value)` records in any order.
    ///
    /// Fails on out-of-range ranks or duplicate keys.
    pub fn from_entries(
        m: usize,
        kernel: KernelSpec,
        drop_tol: f64,
        entries: impl IntoIterator<Item = (u32, u32, u32, f64)>,
    ) -> Result<Self> {
        let n = basis_size(m);
        let mut rows: Vec<Vec<(u32, u32, f64)>> = vec![Vec::new(); n];
        for (a, l, k, v) in entries {
            if a as usize >= n || l as usize >= n || k as usize >= n {
                return Err(Error::Config(format!("tensor entry ({a}, {l}, {k}) outside order {m}")));
            }
            rows[a as usize].push((l, k, v));
        }
        for (a, row) in rows.iter_mut().enumerate() {
            row.sort_unstable_by_key(|&(l, k, _)| (l, k));
            if row.windows(2).any(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
                return Err(Error::Config(format!("duplicate tensor entry in row {a}")));
            }
        }
        Ok(Self::from_rows(m, kernel, drop_tol, rows))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn drop_tol(&self) -> f64 {
        self.drop_tol
    }

    pub fn nnz(&self) -> usize {
        self.storage.vals.len()
    }

    /// Factor applied to every stored value, `T̄^{1−ϖ}`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Temperature `T̄` of the expansion center the values refer to.
    pub fn center_temperature(&self) -> f64 {
        self.center_temperature
    }

    /// Entry `A_αλκ` (zero if absent).
    pub fn get(&self, alpha: MultiIndex, lambda: MultiIndex, kappa: MultiIndex) -> f64 {
        let n = basis_size(self.m);
        let (a, l, k) = (alpha.rank(), lambda.rank(), kappa.rank());
        if a >= n || l >= n || k >= n {
            return 0.0;
        }
        let (cols, vals) = self.row_slices(a);
        match cols.binary_search(&(l as u32, k as u32)) {
            Ok(i) => vals[i] * self.scale,
            Err(_) => 0.0,
        }
    }

    /// Unscaled `(λ, κ)` keys and values of row `alpha_rank`.
    #[inline]
    pub fn row_slices(&self, alpha_rank: usize) -> (&[(u32, u32)], &[f64]) {
        let s = &self.storage;
        let (lo, hi) = (s.row_ptr[alpha_rank], s.row_ptr[alpha_rank + 1]);
        (&s.cols[lo..hi], &s.vals[lo..hi])
    }

    /// Scaled entries `(α, λ, κ, value)` sorted by key.
    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, u32, f64)> + '_ {
        (0..basis_size(self.m)).flat_map(move |a| {
            let (cols, vals) = self.row_slices(a);
            cols.iter().zip(vals).map(move |(&(l, k), &v)| (a as u32, l, k, v * self.scale))
        })
    }

    pub fn row_nnz(&self, alpha_rank: usize) -> usize {
        let s = &self.storage;
        s.row_ptr[alpha_rank + 1] - s.row_ptr[alpha_rank]
    }

    /// Same entries multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut t = self.clone();
        t.scale *= factor;
        t
    }
}

impl PartialEq for CollisionTensor {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
            && self.kernel == other.kernel
            && self.drop_tol.to_bits() == other.drop_tol.to_bits()
            && self.nnz() == other.nnz()
            && self.entries().zip(other.entries()).all(|(a, b)| a.0 == b.0 && a.1 == b.1 && a.2 == b.2 && a.3.to_bits() == b.3.to_bits())
    }
}

/// Tensor for a center whose temperature is `t_bar` times the current one:
/// values scale by `t_bar^{1−ϖ}` and do not depend on `ū`.
pub fn rescale_center(tensor: &CollisionTensor, t_bar: f64) -> Result<CollisionTensor> {
    if !(t_bar > 0.0 && t_bar.is_finite()) {
        return Err(Error::InvalidCenter(format!("temperature {t_bar} must be positive")));
    }
    let mut t = tensor.clone();
    let exponent = 1.0 - tensor.kernel.varpi;
    if exponent != 0.0 {
        t.scale *= t_bar.powf(exponent);
    }
    t.center_temperature *= t_bar;
    Ok(t)
}
