//! Finite-volume convection of the coefficient field: moment fluxes, WENO
//! reconstruction, HLL interface fluxes, CFL control and boundary ghosts.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermite::{largest_hermite_root, ExpansionCenter};
use crate::index::{basis_size, IndexSet, NONE};
use crate::macrostate::macro_from_state;
use crate::scalar::Real;
use crate::state::{project, SpectralState};

/// Ghost layers on each side (the WENO stencil half-width plus one).
pub const GHOST: usize = 2;

const WENO_EPS: f64 = 1e-6;
const WENO_G1: f64 = 1.0 / 3.0;
const WENO_G2: f64 = 2.0 / 3.0;

/// Coefficient vectors on a uniform 1D or 2D cell-centered grid, all
/// expanded about one shared convection center.
#[derive(Clone, Debug)]
pub struct GridField<T> {
    pub dims: usize,
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub m: usize,
    pub center: ExpansionCenter<T>,
    basis: Arc<IndexSet>,
    c_root: f64,
    /// Padded cells, row-major with `x` fastest; `GHOST` layers per side on
    /// every active axis.
    data: Vec<T>,
}

impl<T: Real> GridField<T> {
    /// Grid of zero coefficients. For `dims == 1`, `ny` and `dy` are ignored.
    pub fn new(dims: usize, nx: usize, ny: usize, dx: f64, dy: f64, m: usize, center: ExpansionCenter<T>) -> Result<Self> {
        if !(dims == 1 || dims == 2) {
            return Err(Error::Config(format!("grid dimension {dims} must be 1 or 2")));
        }
        let ny = if dims == 1 { 1 } else { ny };
        if nx == 0 || ny == 0 {
            return Err(Error::Config("grid needs at least one cell per axis".into()));
        }
        if !(dx > 0.0) || (dims == 2 && !(dy > 0.0)) {
            return Err(Error::Config("cell sizes must be positive".into()));
        }
        center.validate()?;
        let basis = Arc::new(IndexSet::new(m));
        let padded = (nx + 2 * GHOST) * if dims == 2 { ny + 2 * GHOST } else { 1 };
        Ok(GridField {
            dims,
            nx,
            ny,
            dx,
            dy: if dims == 2 { dy } else { dx },
            m,
            center,
            basis,
            c_root: largest_hermite_root(m + 1),
            data: vec![T::zero(); padded * basis_size(m)],
        })
    }

    pub fn ncoef(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &IndexSet {
        &self.basis
    }

    /// Largest root of `He_{M+1}`, the characteristic-speed bound.
    pub fn speed_root(&self) -> f64 {
        self.c_root
    }

    fn px(&self) -> usize {
        self.nx + 2 * GHOST
    }

    fn y_ghost(&self) -> usize {
        if self.dims == 2 {
            GHOST
        } else {
            0
        }
    }

    /// Offset of padded cell `(i, j)`, indices shifted so that interior cells
    /// start at 0.
    #[inline]
    fn offset(&self, i: isize, j: isize) -> usize {
        let pi = (i + GHOST as isize) as usize;
        let pj = (j + self.y_ghost() as isize) as usize;
        (pj * self.px() + pi) * self.ncoef()
    }

    #[inline]
    fn padded(&self, i: isize, j: isize) -> &[T] {
        let o = self.offset(i, j);
        &self.data[o..o + self.ncoef()]
    }

    #[inline]
    fn padded_mut(&mut self, i: isize, j: isize) -> &mut [T] {
        let o = self.offset(i, j);
        let n = self.ncoef();
        &mut self.data[o..o + n]
    }

    /// Coefficients of interior cell `(i, j)`.
    pub fn cell(&self, i: usize, j: usize) -> &[T] {
        self.padded(i as isize, j as isize)
    }

    pub fn cell_mut(&mut self, i: usize, j: usize) -> &mut [T] {
        self.padded_mut(i as isize, j as isize)
    }

    /// Interior cell as a spectral state at the convection center.
    pub fn state(&self, i: usize, j: usize) -> SpectralState<T> {
        SpectralState { m: self.m, coeffs: self.cell(i, j).to_vec(), center: self.center }
    }

    pub fn set_state(&mut self, i: usize, j: usize, state: &SpectralState<T>) -> Result<()> {
        let s = if state.center == self.center { state.clone() } else { project(state, &self.center, &self.basis)? };
        self.cell_mut(i, j).copy_from_slice(&s.coeffs);
        Ok(())
    }

    /// Cell-center coordinates of interior cell `(i, j)`.
    pub fn cell_center(&self, i: usize, j: usize) -> (f64, f64) {
        ((i as f64 + 0.5) * self.dx, (j as f64 + 0.5) * self.dy)
    }

    /// Interior cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| (i, j)))
    }

    fn cell_volume(&self) -> f64 {
        if self.dims == 2 {
            self.dx * self.dy
        } else {
            self.dx
        }
    }

    /// `Σ_cells f_α · volume` for every coefficient.
    pub fn coefficient_totals(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.ncoef()];
        for (i, j) in self.cells() {
            for (o, &c) in out.iter_mut().zip(self.cell(i, j)) {
                *o += c;
            }
        }
        let vol = T::of(self.cell_volume());
        out.iter_mut().for_each(|x| *x *= vol);
        out
    }

    pub fn total_mass(&self) -> T {
        self.coefficient_totals()[0]
    }

    pub fn is_finite(&self) -> bool {
        self.cells().all(|(i, j)| self.cell(i, j).iter().all(|c| c.is_finite()))
    }

    /// Applies `f` to every interior cell in parallel.
    pub fn par_map_cells<F>(&mut self, f: F) -> Result<()>
    where
        F: Fn(usize, usize, &mut [T]) -> Result<()> + Sync + Send,
    {
        let (nx, ncoef, px, g, yg) = (self.nx, self.ncoef(), self.px(), GHOST, self.y_ghost());
        let row_len = px * ncoef;
        self.data
            .par_chunks_mut(row_len)
            .enumerate()
            .filter(|(pj, _)| *pj >= yg && *pj < yg + self.ny)
            .try_for_each(|(pj, row)| {
                for i in 0..nx {
                    let o = (i + g) * ncoef;
                    f(i, pj - yg, &mut row[o..o + ncoef])?;
                }
                Ok(())
            })
    }
}

/// Kind of boundary on one side of the domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SideKind {
    Periodic,
    /// Purely diffusive wall re-emitting the Maxwellian `ω_{u_w, θ_w}`.
    DiffusiveWall { u_w: [f64; 3], theta_w: f64 },
}

/// Boundary kinds on the four sides (`y` sides are ignored in 1D).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundarySpec {
    pub x_lo: SideKind,
    pub x_hi: SideKind,
    pub y_lo: SideKind,
    pub y_hi: SideKind,
}

impl BoundarySpec {
    pub fn periodic() -> Self {
        BoundarySpec { x_lo: SideKind::Periodic, x_hi: SideKind::Periodic, y_lo: SideKind::Periodic, y_hi: SideKind::Periodic }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, lo, hi) in [("x", self.x_lo, self.x_hi), ("y", self.y_lo, self.y_hi)] {
            let lp = lo == SideKind::Periodic;
            let hp = hi == SideKind::Periodic;
            if lp != hp {
                return Err(Error::Config(format!("{name} axis pairs a periodic side with a wall")));
            }
            for side in [lo, hi] {
                if let SideKind::DiffusiveWall { theta_w, .. } = side {
                    if !(theta_w > 0.0) {
                        return Err(Error::Config(format!("wall temperature {theta_w} must be positive")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `F_α = (α_d+1)√T̄ f_{α+e_d} + ū_d f_α + √T̄ f_{α−e_d}` for every `α`.
pub fn flux_vector<T: Real>(coeffs: &[T], center: &ExpansionCenter<T>, d: usize, basis: &IndexSet) -> Vec<T> {
    let mut out = vec![T::zero(); coeffs.len()];
    flux_into(coeffs, center, d, basis, &mut out);
    out
}

fn flux_into<T: Real>(coeffs: &[T], center: &ExpansionCenter<T>, d: usize, basis: &IndexSet, out: &mut [T]) {
    let st = center.t_bar.sqrt();
    let ud = center.u_bar[d];
    for (r, o) in out.iter_mut().enumerate() {
        let mut v = ud * coeffs[r];
        let p = basis.plus(d, r);
        if p != NONE {
            v += T::of((basis.index(r).get(d) + 1) as f64) * st * coeffs[p as usize];
        }
        let mn = basis.minus(d, r);
        if mn != NONE {
            v += st * coeffs[mn as usize];
        }
        *o = v;
    }
}

/// Matrix `A_d` of the flux map, assembled column by column from
/// [`flux_vector`].
pub fn flux_jacobian(m: usize, center: &ExpansionCenter<f64>, d: usize) -> faer::Mat<f64> {
    let basis = IndexSet::new(m);
    let n = basis.len();
    let mut a = faer::Mat::<f64>::zeros(n, n);
    let mut e = vec![0.0; n];
    for c in 0..n {
        e[c] = 1.0;
        for (r, v) in flux_vector(&e, center, d, &basis).into_iter().enumerate() {
            a[(r, c)] = v;
        }
        e[c] = 0.0;
    }
    a
}

/// Componentwise WENO reconstruction from three consecutive cells
/// `(j−1, j, j+1)`: returns `(f^L_{j+1/2}, f^R_{j−1/2})`.
pub fn weno_reconstruct<T: Real>(fm1: &[T], f0: &[T], fp1: &[T]) -> (Vec<T>, Vec<T>) {
    let mut left = vec![T::zero(); f0.len()];
    let mut right = vec![T::zero(); f0.len()];
    weno_into(fm1, f0, fp1, &mut left, &mut right);
    (left, right)
}

#[inline]
fn weno_into<T: Real>(fm1: &[T], f0: &[T], fp1: &[T], left: &mut [T], right: &mut [T]) {
    let eps = T::of(WENO_EPS);
    let (g1, g2) = (T::of(WENO_G1), T::of(WENO_G2));
    let half = T::of(0.5);
    let three_half = T::of(1.5);
    for k in 0..f0.len() {
        let (a, b, c) = (fm1[k], f0[k], fp1[k]);
        let dl = b - a;
        let dr = c - b;
        let sl = eps + dl * dl;
        let sr = eps + dr * dr;
        let (sl2, sr2) = (sl * sl, sr * sr);
        let wl1 = g1 / sl2;
        let wl2 = g2 / sr2;
        let fl1 = three_half * b - half * a;
        let fl2 = half * (b + c);
        left[k] = (wl1 * fl1 + wl2 * fl2) / (wl1 + wl2);
        let wr1 = g1 / sr2;
        let wr2 = g2 / sl2;
        let fr1 = three_half * b - half * c;
        let fr2 = half * (b + a);
        right[k] = (wr1 * fr1 + wr2 * fr2) / (wr1 + wr2);
    }
}

/// HLL flux with wave speeds `ū_d ∓ C_{M+1}√T̄`.
pub fn hll_flux<T: Real>(fl: &[T], fr: &[T], center: &ExpansionCenter<T>, m: usize, d: usize, basis: &IndexSet) -> Vec<T> {
    let mut out = vec![T::zero(); fl.len()];
    let mut scratch = vec![T::zero(); fl.len()];
    hll_into(fl, fr, center, T::of(largest_hermite_root(m + 1)), d, basis, &mut out, &mut scratch);
    out
}

#[allow(clippy::too_many_arguments)]
fn hll_into<T: Real>(
    fl: &[T],
    fr: &[T],
    center: &ExpansionCenter<T>,
    c_root: T,
    d: usize,
    basis: &IndexSet,
    out: &mut [T],
    scratch: &mut [T],
) {
    let spread = c_root * center.t_bar.sqrt();
    let lam_l = center.u_bar[d] - spread;
    let lam_r = center.u_bar[d] + spread;
    if lam_l >= T::zero() {
        flux_into(fl, center, d, basis, out);
    } else if lam_r <= T::zero() {
        flux_into(fr, center, d, basis, out);
    } else {
        flux_into(fl, center, d, basis, out);
        flux_into(fr, center, d, basis, scratch);
        let inv = (lam_r - lam_l).recip();
        for k in 0..out.len() {
            out[k] = (lam_r * out[k] - lam_l * scratch[k] + lam_l * lam_r * (fr[k] - fl[k])) * inv;
        }
    }
}

/// `Δt = cfl · min_d Δx_d / (|ū_d| + C_{M+1}√T̄)`.
pub fn cfl_dt<T: Real>(grid: &GridField<T>, center: &ExpansionCenter<T>, m: usize, cfl: f64) -> f64 {
    let root = if m == grid.m { grid.c_root } else { largest_hermite_root(m + 1) };
    let st = center.t_bar.to_f64_lossy().sqrt();
    let mut dt = f64::INFINITY;
    for (d, h) in [(0, grid.dx), (1, grid.dy)].into_iter().take(grid.dims) {
        dt = dt.min(h / (center.u_bar[d].to_f64_lossy().abs() + root * st));
    }
    cfl * dt
}

/// `erfc`-based half-range flux `∫_{c>0} c N(c; u, θ) dc`.
fn half_flux(u: f64, theta: f64) -> f64 {
    (theta / (2.0 * std::f64::consts::PI)).sqrt() * (-u * u / (2.0 * theta)).exp()
        + 0.5 * u * libm::erfc(-u / (2.0 * theta).sqrt())
}

/// Ghost coefficients for a diffusive wall next to `interior`; `normal` is
/// the axis and `sign` the direction pointing into the domain.
fn wall_ghost<T: Real>(
    interior: &SpectralState<T>,
    u_w: [f64; 3],
    theta_w: f64,
    normal: usize,
    sign: f64,
    basis: &IndexSet,
) -> Result<Vec<T>> {
    let mac = macro_from_state(interior)?;
    let un_i = sign * mac.u[normal].to_f64_lossy();
    let outgoing = mac.rho.to_f64_lossy() * half_flux(-un_i, mac.theta.to_f64_lossy());
    let un_w = sign * u_w[normal];
    let rho_g = outgoing / half_flux(un_w, theta_w);
    let wall = ExpansionCenter::new(u_w.map(T::of), T::of(theta_w))?;
    let ghost = SpectralState::maxwellian(interior.m, T::of(rho_g), wall);
    Ok(project(&ghost, &interior.center, basis)?.coeffs)
}

/// Fills the ghost layers of `grid` according to `spec`.
pub fn apply_boundaries<T: Real>(grid: &mut GridField<T>, spec: &BoundarySpec) -> Result<()> {
    spec.validate()?;
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let g = GHOST as isize;
    let basis = grid.basis.clone();
    for j in 0..ny {
        for (side, inner, ghosts, sign) in [(spec.x_lo, 0, [-1, -2], 1.0), (spec.x_hi, nx - 1, [nx, nx + 1], -1.0)] {
            match side {
                SideKind::Periodic => {
                    for gi in ghosts {
                        let src = gi.rem_euclid(nx);
                        let v = grid.padded(src, j).to_vec();
                        grid.padded_mut(gi, j).copy_from_slice(&v);
                    }
                }
                SideKind::DiffusiveWall { u_w, theta_w } => {
                    let st = SpectralState { m: grid.m, coeffs: grid.padded(inner, j).to_vec(), center: grid.center };
                    let v = wall_ghost(&st, u_w, theta_w, 0, sign, &basis)?;
                    for gi in ghosts {
                        grid.padded_mut(gi, j).copy_from_slice(&v);
                    }
                }
            }
        }
    }
    if grid.dims == 2 {
        for i in 0..nx {
            for (side, inner, ghosts, sign) in [(spec.y_lo, 0, [-1, -2], 1.0), (spec.y_hi, ny - 1, [ny, ny + 1], -1.0)] {
                match side {
                    SideKind::Periodic => {
                        for gj in ghosts {
                            let src = gj.rem_euclid(ny);
                            let v = grid.padded(i, src).to_vec();
                            grid.padded_mut(i, gj).copy_from_slice(&v);
                        }
                    }
                    SideKind::DiffusiveWall { u_w, theta_w } => {
                        let st = SpectralState { m: grid.m, coeffs: grid.padded(i, inner).to_vec(), center: grid.center };
                        let v = wall_ghost(&st, u_w, theta_w, 1, sign, &basis)?;
                        for gj in ghosts {
                            grid.padded_mut(i, gj).copy_from_slice(&v);
                        }
                    }
                }
            }
        }
    }
    let _ = g;
    Ok(())
}

/// Interface fluxes along axis `d` for one line of cells; `line[k]` is the
/// padded cell `k − GHOST`. Returns `n + 1` fluxes, entry `k` at `k − 1/2`.
fn line_fluxes<T: Real>(line: &[&[T]], n: usize, center: &ExpansionCenter<T>, c_root: T, d: usize, basis: &IndexSet) -> Vec<Vec<T>> {
    let nc = basis.len();
    let g = GHOST;
    // Reconstructed values for cells −1 ..= n.
    let mut left = vec![vec![T::zero(); nc]; n + 2];
    let mut right = vec![vec![T::zero(); nc]; n + 2];
    for c in 0..n + 2 {
        let p = c + g - 1;
        let (l, r) = (&mut left[c], &mut right[c]);
        weno_into(line[p - 1], line[p], line[p + 1], l, r);
    }
    let mut scratch = vec![T::zero(); nc];
    (0..=n)
        .map(|k| {
            // Interface between cells k−1 and k.
            let mut out = vec![T::zero(); nc];
            hll_into(&left[k], &right[k + 1], center, c_root, d, basis, &mut out, &mut scratch);
            out
        })
        .collect()
}

/// One forward-Euler convection step, `f ← f − Δt/Δx (F_{j+1/2} − F_{j−1/2})`
/// summed over axes.
pub fn convection_step<T: Real>(grid: &GridField<T>, dt: f64, spec: &BoundarySpec) -> Result<GridField<T>> {
    let limit = cfl_dt(grid, &grid.center, grid.m, 1.0);
    if !(dt > 0.0) || dt >= limit {
        return Err(Error::TimeStep { dt, cfl: dt / limit });
    }
    let mut g = grid.clone();
    apply_boundaries(&mut g, spec)?;
    let nc = g.ncoef();
    let c_root = T::of(g.c_root);
    let center = g.center;
    let basis = g.basis.clone();
    let (nx, ny) = (g.nx, g.ny);
    let px = g.px();
    let mut update = vec![T::zero(); nx * ny * nc];

    let rx = T::of(dt / g.dx);
    let rows: Vec<Vec<Vec<T>>> = (0..ny)
        .into_par_iter()
        .map(|j| {
            let line: Vec<&[T]> = (0..px).map(|p| g.padded(p as isize - GHOST as isize, j as isize)).collect();
            line_fluxes(&line, nx, &center, c_root, 0, &basis)
        })
        .collect();
    for (j, fl) in rows.iter().enumerate() {
        for i in 0..nx {
            let u = &mut update[(j * nx + i) * nc..(j * nx + i + 1) * nc];
            for k in 0..nc {
                u[k] -= rx * (fl[i + 1][k] - fl[i][k]);
            }
        }
    }
    if g.dims == 2 {
        let ry = T::of(dt / g.dy);
        let py = ny + 2 * GHOST;
        let cols: Vec<Vec<Vec<T>>> = (0..nx)
            .into_par_iter()
            .map(|i| {
                let line: Vec<&[T]> = (0..py).map(|p| g.padded(i as isize, p as isize - GHOST as isize)).collect();
                line_fluxes(&line, ny, &center, c_root, 1, &basis)
            })
            .collect();
        for (i, fl) in cols.iter().enumerate() {
            for j in 0..ny {
                let u = &mut update[(j * nx + i) * nc..(j * nx + i + 1) * nc];
                for k in 0..nc {
                    u[k] -= ry * (fl[j + 1][k] - fl[j][k]);
                }
            }
        }
    }
    for j in 0..ny {
        for i in 0..nx {
            let u = &update[(j * nx + i) * nc..(j * nx + i + 1) * nc];
            for (c, du) in g.cell_mut(i, j).iter_mut().zip(u) {
                *c += *du;
            }
        }
    }
    Ok(g)
}
