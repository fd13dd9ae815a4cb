//! Grid specification for the partial-wave pipeline.

use crate::error::{Error, Result};
use crate::specfun::ln_gamma;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Discretization of R⁴ = (r, θ) × (x₃, x₄).
///
/// The radial direction uses Gauss-Legendre nodes on (0, R) with spectral
/// nodes ρ = (ρ_max/R) r; the angular direction keeps modes |k| ≤ K_max on
/// 2K_max + 1 equispaced angles; the transverse plane is the periodic box
/// [−L, L)² with N_t points per axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r_max: f64,
    pub n_r: usize,
    pub k_max: usize,
    pub l: f64,
    pub n_t: usize,
    pub dt: f64,
    pub r_min: f64,
    /// Radial bandwidth; `None` picks 1.8·N_r/R, which keeps Gaussian
    /// transforms accurate to round-off on resolved data.
    pub rho_max: Option<f64>,
    /// Width of the reference Gaussian used by the containment check.
    pub sigma_ref: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            r_max: 24.0,
            n_r: 256,
            k_max: 8,
            l: 24.0,
            n_t: 32,
            dt: 5e-3,
            r_min: 1e-6,
            rho_max: None,
            sigma_ref: 1.0,
        }
    }
}

impl GridSpec {
    pub fn n_theta(&self) -> usize {
        2 * self.k_max + 1
    }

    /// Transverse points per plane, N_t².
    pub fn n_c(&self) -> usize {
        self.n_t * self.n_t
    }

    pub fn len(&self) -> usize {
        self.n_theta() * self.n_r * self.n_c()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn radial_bandwidth(&self) -> f64 {
        self.rho_max.unwrap_or(1.8 * self.n_r as f64 / self.r_max)
    }

    pub fn h_t(&self) -> f64 {
        2.0 * self.l / self.n_t as f64
    }

    pub fn theta(&self, j: usize) -> f64 {
        TAU * j as f64 / self.n_theta() as f64
    }

    pub fn x_t(&self, p: usize) -> f64 {
        -self.l + self.h_t() * p as f64
    }

    /// Signed transverse wavenumber of FFT slot m.
    pub fn xi_t(&self, m: usize) -> f64 {
        let n = self.n_t as i64;
        let m = m as i64;
        let s = if m < n / 2 { m } else { m - n };
        PI / self.l * s as f64
    }

    /// Mode index k of angular slot `a` on the transform side.
    pub fn mode(&self, a: usize) -> i64 {
        a as i64 - self.k_max as i64
    }

    /// Structural checks plus containment of the reference Gaussian
    /// e^{−|x|²/(2σ²)}: less than 1e-10 of its mass may fall outside
    /// [0, R/2] × [−L/2, L/2]².
    pub fn validate(&self) -> Result<()> {
        let finite = [self.r_max, self.l, self.dt, self.r_min, self.sigma_ref];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("grid parameters must be finite"));
        }
        if self.r_max <= 0.0 || self.l <= 0.0 || self.sigma_ref <= 0.0 {
            return Err(Error::config("R, L and sigma_ref must be positive"));
        }
        if self.n_r < 2 || self.n_t < 2 || self.n_t % 2 != 0 {
            return Err(Error::config("need n_r >= 2 and an even n_t >= 2"));
        }
        if let Some(b) = self.rho_max {
            if !(b > 0.0 && b.is_finite()) {
                return Err(Error::config("rho_max must be positive"));
            }
        }
        if self.r_min < 0.0 || self.r_min >= self.r_max {
            return Err(Error::config("axis guard r_min must lie in [0, R)"));
        }
        let s = self.sigma_ref;
        // |u|² ∝ e^{−|x|²/σ²}: the planar tail beyond ρ is e^{−ρ²/σ²}, each
        // transverse tail beyond a is erfc(a/σ).
        let radial = (-(self.r_max / 2.0 / s).powi(2)).exp();
        let transverse = 2.0 * erfc_bound(self.l / 2.0 / s);
        let outside = radial + transverse;
        if outside >= 1e-10 {
            return Err(Error::config(format!(
                "grid too small for the reference Gaussian (sigma_ref={s}): outside mass {outside:e}"
            )));
        }
        Ok(())
    }

    /// (ρ_max R/2)^{K_max}/Γ(K_max+1): how much of a band-limited field can
    /// live above the angular cutoff. Reported, since it is pessimistic for
    /// smooth data.
    pub fn angular_tail_bound(&self) -> f64 {
        let k = self.k_max as f64;
        (k * (self.radial_bandwidth() * self.r_max / 2.0).ln() - ln_gamma(k + 1.0)).exp()
    }
}

/// Upper bound e^{−x²}/(x√π) on erfc(x) for x > 0.
fn erfc_bound(x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else {
        ((-x * x).exp() / (x * PI.sqrt())).min(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        GridSpec::default().validate().unwrap();
    }

    #[test]
    fn rejects_odd_transverse() {
        let g = GridSpec { n_t: 31, ..GridSpec::default() };
        assert!(matches!(g.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn rejects_small_box() {
        let g = GridSpec { l: 4.0, ..GridSpec::default() };
        assert!(g.validate().is_err());
    }

    #[test]
    fn wavenumbers_are_symmetric() {
        let g = GridSpec { n_t: 8, l: 4.0, ..GridSpec::default() };
        let xi: Vec<f64> = (0..8).map(|m| g.xi_t(m) * g.l / PI).collect();
        assert_eq!(xi, vec![0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]);
    }
}
