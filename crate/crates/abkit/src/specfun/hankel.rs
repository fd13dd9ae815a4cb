//! Quadrature Hankel transform of real order on a truncated radial grid.

use super::bessel::jv;
use super::quad::QuadratureRule;
use crate::error::{Error, Result};

/// Gauss-Legendre discretization of ∫₀^R · r dr.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    pub r_max: f64,
    pub nodes: Vec<f64>,
    /// w_i r_i, so that Σ weights[i] f(nodes[i]) ≈ ∫₀^R f(r) r dr.
    pub weights: Vec<f64>,
}

impl RadialGrid {
    pub fn new(r_max: f64, n: usize) -> Result<Self> {
        if !(r_max > 0.0) || n == 0 {
            return Err(Error::config("radial grid needs R > 0 and at least one node"));
        }
        let rule = QuadratureRule::gauss_legendre(n, 0.0, r_max);
        let weights = rule.nodes.iter().zip(&rule.weights).map(|(r, w)| r * w).collect();
        Ok(RadialGrid { r_max, nodes: rule.nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Grid-weighted L² norm (Σ w_i r_i |f_i|²)^{1/2}.
    pub fn norm(&self, f: &[f64]) -> f64 {
        self.weights.iter().zip(f).map(|(w, v)| w * v * v).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Cached Bessel table J_ν(ρ_i r_j) for one order. The dual grid has the same
/// nodes as the radial grid, so forward and inverse share one matrix.
#[derive(Debug, Clone)]
pub struct HankelPlan {
    pub nu: f64,
    pub grid: RadialGrid,
    table: Vec<f64>,
}

impl HankelPlan {
    pub fn new(grid: &RadialGrid, nu: f64) -> Result<Self> {
        if !(nu >= 0.0) {
            return Err(Error::domain(format!("Hankel order must be >= 0, got {nu}")));
        }
        let n = grid.len();
        let mut table = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = jv(nu, grid.nodes[i] * grid.nodes[j]);
                table[i * n + j] = v;
                table[j * n + i] = v;
            }
        }
        Ok(HankelPlan { nu, grid: grid.clone(), table })
    }

    /// J_ν(ρ_i r_j).
    pub fn bessel(&self, i: usize, j: usize) -> f64 {
        self.table[i * self.grid.len() + j]
    }

    pub fn apply(&self, nu: f64, f: &[f64], _dir: Direction) -> Result<Vec<f64>> {
        if nu != self.nu {
            return Err(Error::config(format!("Hankel plan built for order {} used with {}", self.nu, nu)));
        }
        let n = self.grid.len();
        if f.len() != n {
            return Err(Error::config("sample count does not match radial grid"));
        }
        let g: Vec<f64> = f.iter().zip(&self.grid.weights).map(|(v, w)| v * w).collect();
        Ok((0..n)
            .map(|i| self.table[i * n..(i + 1) * n].iter().zip(&g).map(|(a, b)| a * b).sum())
            .collect())
    }
}

/// (H_ν f)(ρ) = ∫₀^R J_ν(rρ) f(r) r dr on the dual grid.
pub fn hankel_transform(nu: f64, f: &[f64], grid: &RadialGrid, dir: Direction) -> Result<Vec<f64>> {
    HankelPlan::new(grid, nu)?.apply(nu, f, dir)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_measure() {
        let g = RadialGrid::new(7.0, 33).unwrap();
        let s: f64 = g.weights.iter().sum();
        assert!((s - 24.5).abs() < 1e-10 * 24.5);
    }

    #[test]
    fn gaussian_self_reciprocal() {
        let g = RadialGrid::new(12.0, 256).unwrap();
        let f: Vec<f64> = g.nodes.iter().map(|r| (-0.5 * r * r).exp()).collect();
        let h = hankel_transform(0.0, &f, &g, Direction::Forward).unwrap();
        let e = h.iter().zip(&f).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(e < 1e-8, "max error {e}");
    }

    #[test]
    fn order_mismatch_is_config_error() {
        let g = RadialGrid::new(5.0, 8).unwrap();
        let p = HankelPlan::new(&g, 0.5).unwrap();
        assert!(matches!(p.apply(0.4, &[0.0; 8], Direction::Forward), Err(Error::Config(_))));
    }
}
