//! Direct quadrature of the defining eight-dimensional integral
//!
//! `A_αλκ = (1/α!) ∫∫∫ B ℋ_λ(v) ℋ_κ(v*) [H_α(v′) − H_α(v)] dσ dv dv*`.
//!
//! The integral is taken in the variables `h = (v+v*)/2`, `g = v − v*`
//! (unit Jacobian), where `ω(v)ω(v*) = (2π)^{−3} e^{−|h|²} e^{−|g|²/4}` and
//! `v′ = h + g′/2`. Nodes:
//! - `h`: tensor Gauss–Hermite, exact for polynomial degree `2n−1`;
//! - `g`: Gauss–Legendre in `|g|` on `[0, G_MAX]` times a sphere rule;
//! - `σ`: sphere rule (Gauss–Legendre in `cos θ`, uniform azimuth).
//!
//! For total degree `d = |α|+|λ|+|κ|` the `h` and angular parts are exact
//! once `2n−1 ≥ d` and the sphere rules reach degree `d`; the radial factor
//! `r^{2+μ}e^{−r²/4}·poly(r)` is smooth and converges geometrically in the
//! number of radial nodes (`G_MAX = 16` leaves a tail below `e^{−64}`).

use super::KernelSpec;
use crate::hermite::hermite_values;
use crate::index::{basis_size, MultiIndex};
use crate::quadrature::{gauss_hermite, gauss_legendre_on, SphereRule};

const G_MAX: f64 = 16.0;

/// Node counts of the oracle quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleResolution {
    /// Gauss–Hermite nodes per axis in `h`.
    pub hermite_points: usize,
    /// Gauss–Legendre nodes in `|g|`.
    pub radial_points: usize,
    /// Polar × azimuthal nodes of both sphere rules.
    pub sphere_polar: usize,
    pub sphere_azimuth: usize,
}

impl Default for OracleResolution {
    fn default() -> Self {
        OracleResolution { hermite_points: 4, radial_points: 48, sphere_polar: 5, sphere_azimuth: 10 }
    }
}

impl OracleResolution {
    /// Smallest resolution that is exact in `h` and the angles for total degree `d`.
    pub fn for_degree(d: usize) -> Self {
        OracleResolution {
            hermite_points: d / 2 + 1,
            radial_points: 48,
            sphere_polar: d / 2 + 1,
            sphere_azimuth: d + 2,
        }
    }

    /// Reason the resolution is insufficient for total degree `d`, if any.
    pub fn shortfall(&self, d: usize) -> Option<String> {
        let sphere = SphereRule::exact_degree(self.sphere_polar.max(1), self.sphere_azimuth);
        if 2 * self.hermite_points < d + 1 {
            Some(format!("{} Hermite nodes are not exact for degree {d}", self.hermite_points))
        } else if sphere < d {
            Some(format!("sphere rule of degree {sphere} is not exact for degree {d}"))
        } else if self.radial_points < 24 + d {
            Some(format!("{} radial nodes are too few for degree {d}", self.radial_points))
        } else {
            None
        }
    }
}

/// One oracle value and an accuracy warning if the resolution is too coarse.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub warning: Option<String>,
}

/// Dense oracle values for all `|α|, |λ|, |κ| ≤ max_degree`.
#[derive(Clone, Debug)]
pub struct OracleBlock {
    pub max_degree: usize,
    values: Vec<f64>,
    pub warning: Option<String>,
}

impl OracleBlock {
    pub fn get(&self, alpha: MultiIndex, lambda: MultiIndex, kappa: MultiIndex) -> f64 {
        let n = basis_size(self.max_degree);
        self.values[(alpha.rank() * n + lambda.rank()) * n + kappa.rank()]
    }
}

fn products(vals: &[Vec<f64>; 3], indices: &[MultiIndex], out: &mut [f64]) {
    for (o, ix) in out.iter_mut().zip(indices) {
        *o = vals[0][ix.0[0] as usize] * vals[1][ix.0[1] as usize] * vals[2][ix.0[2] as usize];
    }
}

/// Oracle values for every index triple up to `max_degree` in one sweep.
pub fn oracle_block(max_degree: usize, kernel: &KernelSpec, resolution: OracleResolution) -> OracleBlock {
    let d = max_degree;
    let n = basis_size(d);
    let indices: Vec<MultiIndex> = (0..n).map(MultiIndex::unrank).collect();
    let warning = resolution.shortfall(3 * d);

    let gh = gauss_hermite(resolution.hermite_points);
    let radial = gauss_legendre_on(resolution.radial_points, 0.0, G_MAX);
    let sphere = SphereRule::new(resolution.sphere_polar, resolution.sphere_azimuth);
    let mu = kernel.mu();
    let a = 0.5 * (1.0 - kernel.e);
    let b = 0.5 * (1.0 + kernel.e);
    let sphere_total: f64 = sphere.weights.iter().sum();

    // h = y/√2 with y standard normal: ∫F(h)e^{−|h|²}dh = π^{3/2}·E[F].
    let mut h_nodes = Vec::new();
    for (i, &yi) in gh.nodes.iter().enumerate() {
        for (j, &yj) in gh.nodes.iter().enumerate() {
            for (k, &yk) in gh.nodes.iter().enumerate() {
                let w = gh.weights[i] * gh.weights[j] * gh.weights[k];
                h_nodes.push(([yi, yj, yk].map(|y| y * std::f64::consts::FRAC_1_SQRT_2), w));
            }
        }
    }

    let mut acc = vec![0.0; n * n * n];
    let mut vals: [Vec<f64>; 3] = Default::default();
    let mut h_lam = vec![0.0; n];
    let mut h_kap = vec![0.0; n];
    let mut h_alpha = vec![0.0; n];
    let mut delta = vec![0.0; n];
    for (&r, &wr) in radial.nodes.iter().zip(&radial.weights) {
        let radial_w = wr * r.powf(2.0 + mu) * (-0.25 * r * r).exp();
        for (s_hat, &ws) in sphere.points.iter().zip(&sphere.weights) {
            let g = s_hat.map(|c| r * c);
            for (h, wh) in &h_nodes {
                let v = [0, 1, 2].map(|c| h[c] + 0.5 * g[c]);
                let vs = [0, 1, 2].map(|c| h[c] - 0.5 * g[c]);
                for c in 0..3 {
                    hermite_values(d, v[c], &mut vals[c]);
                }
                products(&vals, &indices, &mut h_lam);
                for c in 0..3 {
                    hermite_values(d, vs[c], &mut vals[c]);
                }
                products(&vals, &indices, &mut h_kap);
                // ∫ [H_α(v′) − H_α(v)] dσ
                for x in delta.iter_mut() {
                    *x = 0.0;
                }
                for (sigma, &wsig) in sphere.points.iter().zip(&sphere.weights) {
                    for c in 0..3 {
                        hermite_values(d, h[c] + 0.5 * (a * g[c] + b * r * sigma[c]), &mut vals[c]);
                    }
                    products(&vals, &indices, &mut h_alpha);
                    for (x, y) in delta.iter_mut().zip(&h_alpha) {
                        *x += wsig * y;
                    }
                }
                for (x, y) in delta.iter_mut().zip(&h_lam) {
                    *x -= sphere_total * y;
                }
                let w = radial_w * ws * wh;
                for ia in 0..n {
                    let wa = w * delta[ia];
                    if wa == 0.0 {
                        continue;
                    }
                    let block = &mut acc[ia * n * n..(ia + 1) * n * n];
                    for il in 0..n {
                        let wl = wa * h_lam[il];
                        let line = &mut block[il * n..(il + 1) * n];
                        for (x, y) in line.iter_mut().zip(&h_kap) {
                            *x += wl * y;
                        }
                    }
                }
            }
        }
    }

    // C·(2π)^{−3}·π^{3/2}/α!
    let pi = std::f64::consts::PI;
    let pref = kernel.c_const * pi.powf(1.5) / (8.0 * pi.powi(3));
    for (ia, alpha) in indices.iter().enumerate() {
        let f = pref / alpha.factorial();
        for x in &mut acc[ia * n * n..(ia + 1) * n * n] {
            *x *= f;
        }
    }
    OracleBlock { max_degree: d, values: acc, warning }
}

/// Oracle value of a single entry.
pub fn oracle_a(
    alpha: MultiIndex,
    lambda: MultiIndex,
    kappa: MultiIndex,
    kernel: &KernelSpec,
    resolution: OracleResolution,
) -> OracleResult {
    let d = alpha.degree().max(lambda.degree()).max(kappa.degree()) as usize;
    let block = oracle_block(d, kernel, resolution);
    let total = (alpha.degree() + lambda.degree() + kappa.degree()) as usize;
    OracleResult { value: block.get(alpha, lambda, kappa), warning: resolution.shortfall(total) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_row_vanishes() {
        let k = KernelSpec::hard_sphere(0.5);
        let block = oracle_block(1, &k, OracleResolution::for_degree(3));
        for l in 0..4 {
            for kk in 0..4 {
                assert!(block.get(MultiIndex::ZERO, MultiIndex::unrank(l), MultiIndex::unrank(kk)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn elastic_maxwellian_is_stationary() {
        let r = oracle_a(
            MultiIndex::new(2, 0, 0),
            MultiIndex::ZERO,
            MultiIndex::ZERO,
            &KernelSpec::maxwell(1.0),
            OracleResolution::for_degree(2),
        );
        assert!(r.value.abs() < 1e-12, "{}", r.value);
        assert!(r.warning.is_none());
    }

    #[test]
    fn coarse_resolution_warns() {
        let coarse = OracleResolution { hermite_points: 1, radial_points: 8, sphere_polar: 1, sphere_azimuth: 2 };
        let r = oracle_a(MultiIndex::new(2, 0, 0), MultiIndex::ZERO, MultiIndex::ZERO, &KernelSpec::maxwell(0.5), coarse);
        assert!(r.warning.is_some());
    }

    #[test]
    fn maxwell_cooling_rate_by_quadrature() {
        let e = 0.5;
        let block = oracle_block(2, &KernelSpec::maxwell(e), OracleResolution::for_degree(2));
        let sum: f64 = [MultiIndex::new(2, 0, 0), MultiIndex::new(0, 2, 0), MultiIndex::new(0, 0, 2)]
            .iter()
            .map(|&a| block.get(a, MultiIndex::ZERO, MultiIndex::ZERO))
            .sum();
        assert!((sum + 3.0 * (1.0 - e * e) / 8.0).abs() < 1e-12, "{sum}");
    }
}
