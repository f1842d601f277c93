//! Gauss rules built from Jacobi matrices (Golub–Welsch), plus the product
//! sphere rule used by the collision oracle.

use faer::{Mat, Side};

use crate::hermite::hermite_eval_1d;

/// Nodes and weights of a one-dimensional rule.
#[derive(Clone, Debug)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

fn jacobi_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let j = Mat::<f64>::from_fn(n, n, |r, c| {
        if r == c {
            diag[r]
        } else if r + 1 == c {
            off[r]
        } else if c + 1 == r {
            off[c]
        } else {
            0.0
        }
    });
    j.self_adjoint_eigenvalues(Side::Lower).expect("symmetric tridiagonal eigenproblem converges")
}

/// Newton refinement of a root of the probabilists' Hermite polynomial `He_n`.
fn polish_hermite_root(n: usize, mut x: f64) -> f64 {
    for _ in 0..8 {
        let p = hermite_eval_1d::<f64>(n, x);
        let dp = n as f64 * hermite_eval_1d::<f64>(n - 1, x);
        if dp == 0.0 {
            break;
        }
        let step = p / dp;
        x -= step;
        if step.abs() <= 1e-16 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// Roots of `He_n` in ascending order.
pub fn hermite_roots(n: usize) -> Vec<f64> {
    assert!(n >= 1, "Hermite degree must be positive");
    let off: Vec<f64> = (1..n).map(|k| (k as f64).sqrt()).collect();
    let mut roots: Vec<f64> = jacobi_eigenvalues(&vec![0.0; n], &off)
        .into_iter()
        .map(|x| polish_hermite_root(n, x))
        .collect();
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

/// Gauss–Hermite rule for the standard normal density `exp(−x²/2)/√(2π)`.
/// Weights sum to one.
pub fn gauss_hermite(n: usize) -> Rule {
    let nodes = hermite_roots(n);
    // w_i = (n−1)! / (n · He_{n−1}(x_i)²), evaluated through the normalised
    // recurrence to avoid overflow.
    let weights = nodes
        .iter()
        .map(|&x| {
            let (mut p0, mut p1) = (1.0f64, x);
            if n == 1 {
                return 1.0;
            }
            // q_k = He_k / √(k!)
            for k in 1..n - 1 {
                let kf = k as f64;
                let p2 = (x * p1 - kf.sqrt() * p0) / (kf + 1.0).sqrt();
                p0 = p1;
                p1 = p2;
            }
            1.0 / (n as f64 * p1 * p1)
        })
        .collect();
    Rule { nodes, weights }
}

/// Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n >= 1);
    let off: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        })
        .collect();
    let mut nodes: Vec<f64> = jacobi_eigenvalues(&vec![0.0; n], &off);
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        let mut dp = 1.0;
        for _ in 0..3 {
            let (p, d) = legendre_with_derivative(n, *x);
            *x -= p / d;
            dp = d;
        }
        let (_, d) = legendre_with_derivative(n, *x);
        dp = if d.is_finite() { d } else { dp };
        weights.push(2.0 / ((1.0 - *x * *x) * dp * dp));
    }
    Rule { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Gauss–Legendre rule mapped onto `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Rule {
    let base = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    Rule {
        nodes: base.nodes.iter().map(|&x| mid + half * x).collect(),
        weights: base.weights.iter().map(|&w| half * w).collect(),
    }
}

/// Product rule on the unit sphere: Gauss–Legendre in `cos θ` times a uniform
/// azimuthal grid. Integrates spherical polynomials of degree up to
/// `min(2·n_polar − 1, n_azimuth − 1)` exactly; weights sum to 4π.
#[derive(Clone, Debug)]
pub struct SphereRule {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    pub fn new(n_polar: usize, n_azimuth: usize) -> Self {
        let gl = gauss_legendre(n_polar);
        let dphi = 2.0 * std::f64::consts::PI / n_azimuth as f64;
        let mut points = Vec::with_capacity(n_polar * n_azimuth);
        let mut weights = Vec::with_capacity(n_polar * n_azimuth);
        for (&z, &w) in gl.nodes.iter().zip(&gl.weights) {
            let r = (1.0 - z * z).max(0.0).sqrt();
            for k in 0..n_azimuth {
                let phi = (k as f64 + 0.5) * dphi;
                points.push([r * phi.cos(), r * phi.sin(), z]);
                weights.push(w * dphi);
            }
        }
        SphereRule { points, weights }
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exact_degree(n_polar: usize, n_azimuth: usize) -> usize {
        (2 * n_polar - 1).min(n_azimuth.saturating_sub(1))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_rule_reproduces_gaussian_moments() {
        let rule = gauss_hermite(20);
        let mut double_fact = 1.0;
        for k in 0..20 {
            let m = rule.integrate(|x| x.powi(2 * k as i32));
            assert!((m - double_fact).abs() <= 1e-11 * double_fact, "k={k}: {m} vs {double_fact}");
            double_fact *= (2 * k + 1) as f64;
            let odd = rule.integrate(|x| x.powi(2 * k as i32 + 1));
            assert!(odd.abs() < 1e-9 * double_fact);
        }
    }

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let rule = gauss_legendre_on(8, 0.0, 2.0);
        let v = rule.integrate(|x| x.powi(15));
        assert!((v - 2f64.powi(16) / 16.0).abs() < 1e-10);
    }

    #[test]
    fn sphere_rule_moments() {
        let rule = SphereRule::new(6, 12);
        let total: f64 = rule.weights.iter().sum();
        assert!((total - 4.0 * std::f64::consts::PI).abs() < 1e-13);
        let m: f64 = rule
            .points
            .iter()
            .zip(&rule.weights)
            .map(|(p, w)| w * p[0] * p[0] * p[1] * p[1])
            .sum();
        assert!((m - 4.0 * std::f64::consts::PI / 15.0).abs() < 1e-13);
    }
}
