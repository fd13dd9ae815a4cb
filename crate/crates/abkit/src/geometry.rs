//! Coordinates, the pair change of variables, the potential A and the
//! diffractive distance vector n_s.

use crate::error::{Error, Result};
use std::f64::consts::{PI, TAU};

/// Default axis guard used when no grid radius is at hand.
pub const R_MIN_DEFAULT: f64 = 1e-12;

/// Flux α; angular mode k carries order ν(k) = |k + α|.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FluxParam {
    pub alpha: f64,
}

impl FluxParam {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::domain("flux must be finite"));
        }
        Ok(FluxParam { alpha })
    }

    pub fn order(&self, k: i64) -> f64 {
        (k as f64 + self.alpha).abs()
    }

    /// α = n + α₀ with n integer and α₀ ∈ [0, 1).
    pub fn split(&self) -> (i64, f64) {
        let n = self.alpha.floor();
        (n as i64, self.alpha - n)
    }

    pub fn is_integer(&self) -> bool {
        self.alpha.fract() == 0.0
    }
}

/// A point of R⁴ as (r, θ, x₃, x₄), θ ∈ [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CylPoint4 {
    pub r: f64,
    pub theta: f64,
    pub x3: f64,
    pub x4: f64,
}

impl CylPoint4 {
    pub fn new(r: f64, theta: f64, x3: f64, x4: f64) -> Self {
        CylPoint4 { r, theta: theta.rem_euclid(TAU), x3, x4 }
    }

    pub fn to_cartesian(&self) -> [f64; 4] {
        [self.r * self.theta.cos(), self.r * self.theta.sin(), self.x3, self.x4]
    }

    pub fn transverse(&self) -> [f64; 2] {
        [self.x3, self.x4]
    }

    pub fn check_off_axis(&self, r_min: f64) -> Result<()> {
        if self.r < r_min {
            return Err(Error::Singularity(format!("point at r = {:e} is on the flux axis", self.r)));
        }
        Ok(())
    }
}

pub fn to_cylindrical(p: [f64; 4]) -> CylPoint4 {
    let r = p[0].hypot(p[1]);
    let theta = if r == 0.0 { 0.0 } else { p[1].atan2(p[0]).rem_euclid(TAU) };
    // atan2 can return exactly 2π after rem_euclid of -0.0-ish inputs
    let theta = if theta >= TAU { 0.0 } else { theta };
    CylPoint4 { r, theta, x3: p[2], x4: p[3] }
}

pub fn dist(x: &CylPoint4, y: &CylPoint4) -> f64 {
    let a = x.to_cartesian();
    let b = y.to_cartesian();
    a.iter().zip(&b).map(|(u, v)| (u - v) * (u - v)).sum::<f64>().sqrt()
}

/// Which side of the |δ| = π split an angle difference falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Near,
    Far,
    Boundary,
}

/// Signed angle difference δ = θ − θ̄ ∈ (−2π, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleDiff {
    pub delta: f64,
    pub branch: Branch,
}

impl AngleDiff {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta.abs() < TAU) {
            return Err(Error::domain(format!("angle difference {delta} outside (-2π, 2π)")));
        }
        let m = delta.abs();
        let branch = if (m - PI).abs() <= 1e-14 {
            Branch::Boundary
        } else if m < PI {
            Branch::Near
        } else {
            Branch::Far
        };
        Ok(AngleDiff { delta, branch })
    }

    pub fn between(x: &CylPoint4, y: &CylPoint4) -> Self {
        AngleDiff::new(x.theta - y.theta).expect("angles are canonical")
    }

    /// Representative of δ in [−π, π].
    pub fn principal(&self) -> f64 {
        match self.branch {
            Branch::Far => self.delta - TAU * self.delta.signum(),
            _ => self.delta,
        }
    }
}

/// Two particle positions in R².
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PairConfig {
    pub x1: [f64; 2],
    pub x2: [f64; 2],
}

impl PairConfig {
    pub fn on_singular_set(&self) -> bool {
        self.x1 == self.x2
    }
}

/// y₁ = (x₁ − x₂)/√2, y₂ = (x₁ + x₂)/√2.
pub fn pair_change_of_variables(c: &PairConfig) -> ([f64; 2], [f64; 2]) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (
        [s * (c.x1[0] - c.x2[0]), s * (c.x1[1] - c.x2[1])],
        [s * (c.x1[0] + c.x2[0]), s * (c.x1[1] + c.x2[1])],
    )
}

pub fn pair_inverse(y1: [f64; 2], y2: [f64; 2]) -> PairConfig {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PairConfig {
        x1: [s * (y2[0] + y1[0]), s * (y2[1] + y1[1])],
        x2: [s * (y2[0] - y1[0]), s * (y2[1] - y1[1])],
    }
}

/// A(x) = α(−x₂, x₁, 0, 0)/(x₁² + x₂²).
pub fn potential_a(flux: FluxParam, p: [f64; 4]) -> Result<[f64; 4]> {
    let r2 = p[0] * p[0] + p[1] * p[1];
    if r2 == 0.0 || r2.sqrt() < R_MIN_DEFAULT {
        return Err(Error::Singularity("potential evaluated on the flux axis".into()));
    }
    let a = flux.alpha / r2;
    Ok([-a * p[1], a * p[0], 0.0, 0.0])
}

/// n_s = (r + r̄, √(2 r r̄ (cosh s − 1)), x′ − y′) and its length.
pub fn n_vector(r: f64, rb: f64, s: f64, xp: [f64; 2], yp: [f64; 2]) -> ([f64; 4], f64) {
    // 2(cosh s − 1) = 4 sinh²(s/2) avoids cancellation at small s
    let sh = (0.5 * s).sinh();
    let v = [r + rb, 2.0 * (r * rb).sqrt() * sh, xp[0] - yp[0], xp[1] - yp[1]];
    let m = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    (v, m)
}

/// |n_s|² = r² + r̄² + |x′ − y′|² + 2 r r̄ cosh s.
pub fn n_norm_sq(r: f64, rb: f64, s: f64, dxp2: f64) -> f64 {
    let sh = (0.5 * s).sinh();
    (r + rb) * (r + rb) + 4.0 * r * rb * sh * sh + dxp2
}
