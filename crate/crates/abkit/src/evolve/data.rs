//! Initial data adapted to the flux.
//!
//! A Cartesian Gaussian is not smooth for L_A: its k-th angular mode behaves
//! like r^{|k|} at the axis instead of r^{|k+α|}, which gives its partial-wave
//! transform a power-law tail. `RegularGaussian` keeps the Gaussian's mode
//! amplitudes and corrects only the axis behaviour, mode by mode.

use super::field::{ModeField, PartialWave};
use crate::geometry::{CylPoint4, FluxParam};
use crate::specfun::iv_scaled;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularGaussian {
    pub amplitude: f64,
    pub sigma: f64,
    pub center: CylPoint4,
    /// Optional plane-wave momentum along x₃.
    pub k3: f64,
}

impl RegularGaussian {
    pub fn new(amplitude: f64, sigma: f64, center: CylPoint4) -> Self {
        RegularGaussian { amplitude, sigma, center, k3: 0.0 }
    }

    /// Planar factor at (r, θ), modes e^{ijθ} for |j| ≤ k_max.
    pub fn planar(&self, flux: FluxParam, k_max: usize, r: f64, theta: f64) -> C {
        let s2 = self.sigma * self.sigma;
        let rc = self.center.r;
        let z = r * rc / s2;
        let envelope = (-(r - rc).powi(2) / (2.0 * s2)).exp();
        let mut sum = C::new(0.0, 0.0);
        let kk = k_max as i64;
        for j in -kk..=kk {
            let i_j = if rc == 0.0 {
                if j == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                iv_scaled(j.unsigned_abs() as f64, z)
            };
            if i_j == 0.0 {
                continue;
            }
            // e^{ijθ} is the mode Y_{−j}, of order |α − j|.
            let nu = flux.order(-j);
            let reg = (r / self.sigma).powf(nu - j.unsigned_abs() as f64);
            sum += C::from_polar(i_j * reg, j as f64 * (theta - self.center.theta));
        }
        envelope * sum * self.amplitude
    }

    pub fn transverse(&self, x3: f64, x4: f64) -> C {
        let d2 = (x3 - self.center.x3).powi(2) + (x4 - self.center.x4).powi(2);
        C::from_polar((-d2 / (2.0 * self.sigma * self.sigma)).exp(), self.k3 * x3)
    }

    pub fn sample(&self, pw: &PartialWave) -> ModeField {
        let k = pw.grid.k_max;
        let f = pw.flux;
        pw.sample_product(|r, th| self.planar(f, k, r, th), |x3, x4| self.transverse(x3, x4))
    }
}
