//! Mass, energy, the magnetic gradient and the virial/Morawetz integrands.

use super::field::{ModeField, PartialWave, Space};
use crate::error::{Error, Result};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Conserved and monitored quantities at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    pub time: f64,
    pub mass: f64,
    /// ‖∇_A u‖₂² = Σ_k ∫ (ρ² + |ξ|²)|ã_k|².
    pub kinetic: f64,
    /// ∫ |u|^{p+1}.
    pub potential_pp1: f64,
    /// ½ kinetic + potential_pp1/(p+1).
    pub energy: f64,
    /// Φ_a = ∫ a_δ |u|², a_δ = √(|x|² + δ²).
    pub morawetz_phi: f64,
    /// ∫ |u|^{p+1}/a_δ, the Morawetz density.
    pub morawetz_density: f64,
}

/// Integrands of the virial identity
/// Φ_a'' = 4∫∇_A u·D²a·conj(∇_A u) − ∫|u|²Δ²a + (2(p−1)/(p+1))∫|u|^{p+1}Δa.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VirialTerms {
    pub hessian: f64,
    pub bilaplacian: f64,
    pub nonlinear: f64,
}

impl VirialTerms {
    pub fn rhs(&self) -> f64 {
        self.hessian + self.bilaplacian + self.nonlinear
    }
}

/// Weight a_δ(x) = √(|x|² + δ²) and its closed-form derivatives in R⁴.
#[derive(Debug, Clone, Copy)]
pub struct MorawetzWeight {
    pub delta: f64,
}

impl MorawetzWeight {
    pub fn a(&self, s2: f64) -> f64 {
        (s2 + self.delta * self.delta).sqrt()
    }

    /// Δa = (3|x|² + 4δ²)/a³.
    pub fn laplacian(&self, s2: f64) -> f64 {
        let d2 = self.delta * self.delta;
        (3.0 * s2 + 4.0 * d2) / self.a(s2).powi(3)
    }

    /// Δ²a = −3(|x|⁴ + 4δ²|x|² + 8δ⁴)/a⁷.
    pub fn bilaplacian(&self, s2: f64) -> f64 {
        let d2 = self.delta * self.delta;
        -3.0 * (s2 * s2 + 4.0 * d2 * s2 + 8.0 * d2 * d2) / self.a(s2).powi(7)
    }

    /// G·D²a·conj(G) with D²a = I/a − x xᵀ/a³, for G given in the
    /// orthonormal frame (e_r, e_θ, e₃, e₄) where x = (r, 0, x₃, x₄).
    pub fn hessian_form(&self, x: [f64; 4], g: [C; 4]) -> f64 {
        let s2 = x.iter().map(|v| v * v).sum::<f64>();
        let a = self.a(s2);
        let g2: f64 = g.iter().map(|v| v.norm_sqr()).sum();
        let xg: C = (0..4).map(|i| g[i] * x[i]).sum();
        g2 / a - xg.norm_sqr() / (a * a * a)
    }
}

/// Σ over physical nodes of weight·f(node, value).
pub fn integrate_physical<F: FnMut(f64, f64, f64, C) -> f64>(pw: &PartialWave, u: &ModeField, mut f: F) -> Result<f64> {
    Ok(integrate_many(pw, u, |r, x3, x4, v| [f(r, x3, x4, v)])?[0])
}

/// Several physical integrals in one pass over the grid.
pub fn integrate_many<const N: usize, F>(pw: &PartialWave, u: &ModeField, mut f: F) -> Result<[f64; N]>
where
    F: FnMut(f64, f64, f64, C) -> [f64; N],
{
    if !u.is_physical() {
        return Err(Error::config("physical integral needs a physical field"));
    }
    let g = &pw.grid;
    let w = TAU / g.n_theta() as f64 * g.h_t().powi(2);
    let xs: Vec<f64> = (0..g.n_t).map(|p| g.x_t(p)).collect();
    let mut total = [0.0; N];
    for j in 0..g.n_theta() {
        for i in 0..g.n_r {
            let r = pw.radial.r(i);
            let base = u.index(j, i, 0);
            let mut s = [0.0; N];
            for c in 0..g.n_c() {
                let v = f(r, xs[c / g.n_t], xs[c % g.n_t], u.data[base + c]);
                for n in 0..N {
                    s[n] += v[n];
                }
            }
            let wr = pw.radial.r_weight(i) * w;
            for n in 0..N {
                total[n] += s[n] * wr;
            }
        }
    }
    Ok(total)
}

/// Σ_k ∫ λ²|ã_k|², which equals ‖∇_A u‖².
pub fn kinetic(pw: &PartialWave, m: &ModeField) -> Result<f64> {
    if !m.is_transform() {
        return Err(Error::config("kinetic term needs the transform-side field"));
    }
    let g = &pw.grid;
    let n_c = g.n_c();
    let table = pw.lambda_sq();
    let mut total = 0.0;
    for a in 0..g.n_theta() {
        for i in 0..g.n_r {
            let base = m.index(a, i, 0);
            let s: f64 = (0..n_c).map(|c| table[i * n_c + c] * m.data[base + c].norm_sqr()).sum();
            total += s * pw.radial.rho_weight(i);
        }
    }
    Ok(total * (std::f64::consts::PI / g.l).powi(2))
}

pub fn observables(pw: &PartialWave, u: &ModeField, m: &ModeField, p: f64, time: f64, delta: f64) -> Result<Observables> {
    let w = MorawetzWeight { delta };
    let e = 0.5 * (p + 1.0);
    let [mass, pot, phi, density] = integrate_many(pw, u, |r, x3, x4, v| {
        let m2 = v.norm_sqr();
        let up = if m2 > 0.0 { m2.powf(e) } else { 0.0 };
        let a = w.a(r * r + x3 * x3 + x4 * x4);
        [m2, up, a * m2, up / a]
    })?;
    let kin = kinetic(pw, m)?;
    Ok(Observables {
        time,
        mass,
        kinetic: kin,
        potential_pp1: pot,
        energy: 0.5 * kin + pot / (p + 1.0),
        morawetz_phi: phi,
        morawetz_density: density,
    })
}

/// ∇_A u = (∂_r u, r^{-1}(∂_θ − iα)u, ∂₃u, ∂₄u) on the physical grid, from
/// the transform-side field.
pub fn magnetic_gradient(pw: &PartialWave, m: &ModeField) -> Result<[ModeField; 4]> {
    if !m.is_transform() {
        return Err(Error::config("gradient needs the transform-side field"));
    }
    let g = &pw.grid;
    let n_c = g.n_c();
    let block = g.n_r * n_c;
    // radial
    let mut gr = m.clone();
    pw.transverse(&mut gr, Space::Physical)?;
    pw.radial_derivative(&mut gr)?;
    pw.angular(&mut gr, Space::Physical)?;
    // angular: Y_k = e^{−ikθ}, so ∂_θ − iα acts as −i(k + α)
    let mut gt = m.clone();
    for a in 0..g.n_theta() {
        let f = C::new(0.0, -(g.mode(a) as f64 + pw.flux.alpha));
        gt.data[a * block..(a + 1) * block].iter_mut().for_each(|v| *v *= f);
    }
    pw.synthesize(&mut gt)?;
    for j in 0..g.n_theta() {
        for i in 0..g.n_r {
            let inv_r = 1.0 / pw.radial.r(i);
            let base = gt.index(j, i, 0);
            gt.data[base..base + n_c].iter_mut().for_each(|v| *v *= inv_r);
        }
    }
    let transverse = |second: bool| -> Result<ModeField> {
        let mut d = m.clone();
        for blk in d.data.chunks_mut(n_c) {
            for p in 0..g.n_t {
                for q in 0..g.n_t {
                    let xi = if second { g.xi_t(q) } else { g.xi_t(p) };
                    blk[p * g.n_t + q] *= C::new(0.0, xi);
                }
            }
        }
        pw.synthesize(&mut d)?;
        Ok(d)
    };
    Ok([gr, gt, transverse(false)?, transverse(true)?])
}

/// Virial integrands at one time. With `nonlinear = false` the p-term is
/// dropped (linear flow).
pub fn virial_terms(pw: &PartialWave, u: &ModeField, m: &ModeField, p: f64, delta: f64, nonlinear: bool) -> Result<VirialTerms> {
    let w = MorawetzWeight { delta };
    let grad = magnetic_gradient(pw, m)?;
    let g = &pw.grid;
    let w_ang = TAU / g.n_theta() as f64;
    let w_t = g.h_t().powi(2);
    let xs: Vec<f64> = (0..g.n_t).map(|q| g.x_t(q)).collect();
    let (mut hess, mut bil, mut nl) = (0.0, 0.0, 0.0);
    for j in 0..g.n_theta() {
        for i in 0..g.n_r {
            let r = pw.radial.r(i);
            let base = u.index(j, i, 0);
            let (mut h, mut b, mut n) = (0.0, 0.0, 0.0);
            for c in 0..g.n_c() {
                let (x3, x4) = (xs[c / g.n_t], xs[c % g.n_t]);
                let s2 = r * r + x3 * x3 + x4 * x4;
                let gv = [grad[0].data[base + c], grad[1].data[base + c], grad[2].data[base + c], grad[3].data[base + c]];
                h += w.hessian_form([r, 0.0, x3, x4], gv);
                let m2 = u.data[base + c].norm_sqr();
                b += m2 * w.bilaplacian(s2);
                n += m2.powf(0.5 * (p + 1.0)) * w.laplacian(s2);
            }
            let wr = pw.radial.r_weight(i);
            hess += h * wr;
            bil += b * wr;
            nl += n * wr;
        }
    }
    let s = w_ang * w_t;
    let coeff = if nonlinear { 2.0 * (p - 1.0) / (p + 1.0) } else { 0.0 };
    Ok(VirialTerms { hessian: 4.0 * hess * s, bilaplacian: -bil * s, nonlinear: coeff * nl * s })
}

/// Fraction of the mass in the outer layer r > 0.9R or |x₃|, |x₄| > 0.9L.
pub fn boundary_mass_fraction(pw: &PartialWave, u: &ModeField) -> Result<f64> {
    let (rb, lb) = (0.9 * pw.grid.r_max, 0.9 * pw.grid.l);
    let [total, outer] = integrate_many(pw, u, |r, x3, x4, v| {
        let m2 = v.norm_sqr();
        [m2, if r > rb || x3.abs() > lb || x4.abs() > lb { m2 } else { 0.0 }]
    })?;
    Ok(if total > 0.0 { outer / total } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::GridSpec;
    use crate::geometry::FluxParam;

    #[test]
    fn weight_derivatives_match_finite_differences() {
        let w = MorawetzWeight { delta: 0.3 };
        // radial Laplacian in R⁴: f'' + 3f'/s
        let lap = |f: &dyn Fn(f64) -> f64, s: f64| {
            let h = 1e-3;
            (f(s + h) - 2.0 * f(s) + f(s - h)) / (h * h) + 3.0 * (f(s + h) - f(s - h)) / (2.0 * h * s)
        };
        for &s in &[0.2, 0.7, 1.5, 3.0] {
            let a = |s: f64| w.a(s * s);
            let la = |s: f64| w.laplacian(s * s);
            assert!((lap(&a, s) - w.laplacian(s * s)).abs() < 1e-5 * w.laplacian(s * s).abs().max(1.0));
            assert!((lap(&la, s) - w.bilaplacian(s * s)).abs() < 1e-4 * w.bilaplacian(s * s).abs().max(1.0));
        }
    }

    #[test]
    fn normalized_gaussian_mass_and_free_kinetic() {
        let g = GridSpec { r_max: 8.0, n_r: 40, k_max: 10, l: 6.0, n_t: 32, dt: 1e-2, r_min: 1e-6, rho_max: None, sigma_ref: 0.5 };
        let pw = PartialWave::new(&g, FluxParam::new(0.0).unwrap()).unwrap();
        // e^{−|x−c|²/(2σ²)} has mass π²σ⁴ and ‖∇u‖² = 2π²σ².
        let sigma: f64 = 0.7;
        let c = [0.3, 0.0, 0.2, -0.1];
        let scale = 1.0 / (std::f64::consts::PI * sigma * sigma);
        let u = pw.sample(|p| {
            let x = p.to_cartesian();
            let d2: f64 = (0..4).map(|i| (x[i] - c[i]).powi(2)).sum();
            C::new(scale * (-d2 / (2.0 * sigma * sigma)).exp(), 0.0)
        });
        let mut m = u.clone();
        pw.decompose(&mut m).unwrap();
        let obs = observables(&pw, &u, &m, 2.5, 0.0, 0.1).unwrap();
        assert!((obs.mass - 1.0).abs() < 1e-10, "{}", obs.mass);
        let expect = 2.0 / (sigma * sigma);
        assert!((obs.kinetic - expect).abs() < 1e-6 * expect, "{} {expect}", obs.kinetic);
        // gradient components reproduce the same kinetic energy
        let grad = magnetic_gradient(&pw, &m).unwrap();
        let k2: f64 = grad.iter().map(|f| pw.norm_sq(f)).sum();
        assert!((k2 - expect).abs() < 1e-6 * expect, "{k2}");
    }
}
