//! Mode fields and the unitary transform pipeline.

use super::grid::GridSpec;
use super::radial::{ModeHankel, RadialNodes};
use crate::error::{Error, Result};
use crate::geometry::{CylPoint4, FluxParam};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Space {
    Physical,
    Transform,
}

/// Samples or coefficients over (angular slot, radial node, transverse index).
///
/// On the physical side the angular slot is the angle θ_j = 2πj/N_θ; on the
/// transform side it is the mode k = slot − K_max with Y_k = e^{−ikθ}/√(2π).
/// Radially the physical side holds a_k(r_i) and the transform side
/// ã_k(ρ_i). Transversally the index is p·N_t + q for (x₃, x₄) = (x_p, x_q)
/// or the wavenumbers (ξ_p, ξ_q).
#[derive(Debug, Clone, PartialEq)]
pub struct ModeField {
    pub alpha: f64,
    pub angular: Space,
    pub radial: Space,
    pub transverse: Space,
    pub n_theta: usize,
    pub n_r: usize,
    pub n_t: usize,
    pub data: Vec<Complex64>,
}

impl ModeField {
    pub fn n_c(&self) -> usize {
        self.n_t * self.n_t
    }

    pub fn index(&self, a: usize, i: usize, c: usize) -> usize {
        (a * self.n_r + i) * self.n_c() + c
    }

    pub fn get(&self, a: usize, i: usize, c: usize) -> Complex64 {
        self.data[self.index(a, i, c)]
    }

    pub fn is_physical(&self) -> bool {
        [self.angular, self.radial, self.transverse].iter().all(|s| *s == Space::Physical)
    }

    pub fn is_transform(&self) -> bool {
        [self.angular, self.radial, self.transverse].iter().all(|s| *s == Space::Transform)
    }

    pub fn scale(&mut self, s: Complex64) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }

    /// self += s·other (same layout required).
    pub fn axpy(&mut self, s: Complex64, other: &ModeField) {
        for (v, w) in self.data.iter_mut().zip(&other.data) {
            *v += s * w;
        }
    }
}

/// All plans needed to move a field between physical and transform space for
/// one grid and one flux.
pub struct PartialWave {
    pub grid: GridSpec,
    pub flux: FluxParam,
    pub radial: RadialNodes,
    hankel: Vec<Arc<ModeHankel>>,
    theta_fwd: Arc<dyn Fft<f64>>,
    theta_inv: Arc<dyn Fft<f64>>,
    t_fwd: Arc<dyn Fft<f64>>,
    t_inv: Arc<dyn Fft<f64>>,
    /// λ² at (radial node, transverse index), shared by every mode.
    lambda_sq: Vec<f64>,
}

impl std::fmt::Debug for PartialWave {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PartialWave").field("grid", &self.grid).field("flux", &self.flux).finish()
    }
}

impl PartialWave {
    pub fn new(grid: &GridSpec, flux: FluxParam) -> Result<Self> {
        grid.validate()?;
        let radial = RadialNodes::new(grid.r_max, grid.n_r, grid.radial_bandwidth())?;
        if radial.r(0) <= grid.r_min {
            return Err(Error::config("innermost radial node lies inside the axis guard"));
        }
        let mut cache: HashMap<u64, Arc<ModeHankel>> = HashMap::new();
        let mut hankel = Vec::with_capacity(grid.n_theta());
        for a in 0..grid.n_theta() {
            let nu = flux.order(grid.mode(a));
            let plan = match cache.get(&nu.to_bits()) {
                Some(p) => p.clone(),
                None => {
                    let p = Arc::new(ModeHankel::new(&radial, nu)?);
                    cache.insert(nu.to_bits(), p.clone());
                    p
                }
            };
            hankel.push(plan);
        }
        let mut planner = FftPlanner::new();
        let n_c = grid.n_c();
        let mut lambda_sq = Vec::with_capacity(grid.n_r * n_c);
        for i in 0..grid.n_r {
            let rho = radial.rho(i);
            for p in 0..grid.n_t {
                for q in 0..grid.n_t {
                    lambda_sq.push(rho * rho + grid.xi_t(p).powi(2) + grid.xi_t(q).powi(2));
                }
            }
        }
        Ok(PartialWave {
            theta_fwd: planner.plan_fft_forward(grid.n_theta()),
            theta_inv: planner.plan_fft_inverse(grid.n_theta()),
            t_fwd: planner.plan_fft_forward(grid.n_t),
            t_inv: planner.plan_fft_inverse(grid.n_t),
            grid: grid.clone(),
            flux,
            radial,
            hankel,
            lambda_sq,
        })
    }

    pub fn hankel(&self, a: usize) -> &ModeHankel {
        &self.hankel[a]
    }

    /// Worst deviation of a quadrature Hankel eigenvalue from ±1.
    pub fn polar_defect(&self) -> f64 {
        self.hankel.iter().map(|h| h.polar_defect).fold(0.0, f64::max)
    }

    pub fn zeros(&self, space: Space) -> ModeField {
        ModeField {
            alpha: self.flux.alpha,
            angular: space,
            radial: space,
            transverse: space,
            n_theta: self.grid.n_theta(),
            n_r: self.grid.n_r,
            n_t: self.grid.n_t,
            data: vec![Complex64::new(0.0, 0.0); self.grid.len()],
        }
    }

    /// Physical coordinates of node (j, i, c).
    pub fn point(&self, j: usize, i: usize, c: usize) -> CylPoint4 {
        let g = &self.grid;
        CylPoint4::new(self.radial.r(i), g.theta(j), g.x_t(c / g.n_t), g.x_t(c % g.n_t))
    }

    /// Sample f on the physical grid.
    pub fn sample<F: FnMut(&CylPoint4) -> Complex64>(&self, mut f: F) -> ModeField {
        let mut m = self.zeros(Space::Physical);
        let n_c = self.grid.n_c();
        for j in 0..self.grid.n_theta() {
            for i in 0..self.grid.n_r {
                for c in 0..n_c {
                    let idx = m.index(j, i, c);
                    m.data[idx] = f(&self.point(j, i, c));
                }
            }
        }
        m
    }

    /// Sample a product f(r, θ)·g(x₃, x₄), evaluating each factor once per node.
    pub fn sample_product<F, G>(&self, mut planar: F, mut transverse: G) -> ModeField
    where
        F: FnMut(f64, f64) -> Complex64,
        G: FnMut(f64, f64) -> Complex64,
    {
        let g = &self.grid;
        let tv: Vec<Complex64> = (0..g.n_c()).map(|c| transverse(g.x_t(c / g.n_t), g.x_t(c % g.n_t))).collect();
        let mut m = self.zeros(Space::Physical);
        for j in 0..g.n_theta() {
            for i in 0..g.n_r {
                let pv = planar(self.radial.r(i), g.theta(j));
                let base = m.index(j, i, 0);
                for (c, t) in tv.iter().enumerate() {
                    m.data[base + c] = pv * t;
                }
            }
        }
        m
    }

    fn check_layout(&self, m: &ModeField) -> Result<()> {
        if m.n_theta != self.grid.n_theta() || m.n_r != self.grid.n_r || m.n_t != self.grid.n_t {
            return Err(Error::config("field layout does not match the grid"));
        }
        if m.alpha != self.flux.alpha {
            return Err(Error::config(format!("field flux {} differs from plan flux {}", m.alpha, self.flux.alpha)));
        }
        Ok(())
    }

    /// Quadrature weight of a node in the field's current spaces.
    fn weights(&self, m: &ModeField) -> (f64, Vec<f64>, f64) {
        let g = &self.grid;
        let ang = match m.angular {
            Space::Physical => TAU / g.n_theta() as f64,
            Space::Transform => 1.0,
        };
        let rad = (0..g.n_r)
            .map(|i| match m.radial {
                Space::Physical => self.radial.r_weight(i),
                Space::Transform => self.radial.rho_weight(i),
            })
            .collect();
        let tr = match m.transverse {
            Space::Physical => g.h_t().powi(2),
            Space::Transform => (PI / g.l).powi(2),
        };
        (ang, rad, tr)
    }

    /// Discrete L² norm in whatever space the field is in.
    pub fn norm(&self, m: &ModeField) -> f64 {
        self.norm_sq(m).sqrt()
    }

    pub fn norm_sq(&self, m: &ModeField) -> f64 {
        let (ang, rad, tr) = self.weights(m);
        let n_c = m.n_c();
        let mut total = 0.0;
        for a in 0..m.n_theta {
            for (i, w) in rad.iter().enumerate() {
                let base = m.index(a, i, 0);
                let s: f64 = m.data[base..base + n_c].iter().map(|v| v.norm_sqr()).sum();
                total += w * s;
            }
        }
        total * ang * tr
    }

    /// ⟨f, g⟩ with the same quadrature as `norm`.
    pub fn inner(&self, f: &ModeField, g: &ModeField) -> Complex64 {
        let (ang, rad, tr) = self.weights(f);
        let n_c = f.n_c();
        let mut total = Complex64::new(0.0, 0.0);
        for a in 0..f.n_theta {
            for (i, w) in rad.iter().enumerate() {
                let base = f.index(a, i, 0);
                let s: Complex64 = f.data[base..base + n_c].iter().zip(&g.data[base..base + n_c]).map(|(x, y)| x * y.conj()).sum();
                total += s * *w;
            }
        }
        total * (ang * tr)
    }

    /// Angular discrete Fourier step, physical ↔ mode.
    pub fn angular(&self, m: &mut ModeField, to: Space) -> Result<()> {
        self.check_layout(m)?;
        if m.angular == to {
            return Ok(());
        }
        if m.radial == Space::Transform {
            return Err(Error::config("angular step requires radially physical data"));
        }
        let nt = m.n_theta;
        let k = self.grid.k_max;
        let plane = m.n_r * m.n_c();
        // Gather CHUNK neighbouring plane positions at a time so that both
        // the gather and the scatter read contiguous runs.
        const CHUNK: usize = 256;
        let mut buf = vec![Complex64::new(0.0, 0.0); CHUNK * nt];
        let (plan, scale) = match to {
            Space::Transform => (&self.theta_inv, TAU.sqrt() / nt as f64),
            Space::Physical => (&self.theta_fwd, 1.0 / TAU.sqrt()),
        };
        let mut p0 = 0;
        while p0 < plane {
            let len = CHUNK.min(plane - p0);
            for a in 0..nt {
                // Forward: FFT slot = angle index. Backward: slot k mod N holds
                // mode k = a − K.
                let slot = match to {
                    Space::Transform => a,
                    Space::Physical => (a + nt - k) % nt,
                };
                let row = &m.data[a * plane + p0..a * plane + p0 + len];
                for (b, v) in row.iter().enumerate() {
                    buf[b * nt + slot] = *v;
                }
            }
            let work = &mut buf[..len * nt];
            // a_k = (√(2π)/N) Σ_j u_j e^{ikθ_j}; u_j = (2π)^{-1/2} Σ_k a_k e^{−ikθ_j}.
            plan.process(work);
            for a in 0..nt {
                let slot = match to {
                    Space::Transform => (a + nt - k) % nt,
                    Space::Physical => a,
                };
                let row = &mut m.data[a * plane + p0..a * plane + p0 + len];
                for (b, v) in row.iter_mut().enumerate() {
                    *v = work[b * nt + slot] * scale;
                }
            }
            p0 += len;
        }
        m.angular = to;
        Ok(())
    }

    /// Per-mode Hankel step of order ν(k) = |k + α|.
    pub fn radial(&self, m: &mut ModeField, to: Space) -> Result<()> {
        self.check_layout(m)?;
        if m.radial == to {
            return Ok(());
        }
        if m.angular != Space::Transform {
            return Err(Error::config("radial step requires angular modes"));
        }
        let block = m.n_r * m.n_c();
        let width = 2 * m.n_c();
        let mut out = vec![0.0f64; 2 * block];
        for a in 0..m.n_theta {
            let slice = &mut m.data[a * block..(a + 1) * block];
            let reals = as_reals(slice);
            self.hankel[a].apply_block(to == Space::Transform, reals, &mut out, width);
            reals.copy_from_slice(&out);
        }
        m.radial = to;
        Ok(())
    }

    /// Transverse 2D discrete Fourier step with the continuum normalization
    /// ĝ(ξ) = (2π)^{-1} ∫ e^{−ix·ξ} g(x) dx.
    pub fn transverse(&self, m: &mut ModeField, to: Space) -> Result<()> {
        self.check_layout(m)?;
        if m.transverse == to {
            return Ok(());
        }
        let nt = m.n_t;
        let n_c = m.n_c();
        let h = self.grid.h_t();
        let (plan, scale) = match to {
            Space::Transform => (&self.t_fwd, h * h / TAU),
            Space::Physical => (&self.t_inv, (PI / self.grid.l).powi(2) / TAU),
        };
        let mut tbuf = vec![Complex64::new(0.0, 0.0); n_c];
        for blk in m.data.chunks_mut(n_c) {
            if to == Space::Physical {
                apply_parity(blk, nt);
            }
            plan.process(blk);
            for p in 0..nt {
                for q in 0..nt {
                    tbuf[q * nt + p] = blk[p * nt + q];
                }
            }
            plan.process(&mut tbuf);
            for p in 0..nt {
                for q in 0..nt {
                    blk[p * nt + q] = tbuf[q * nt + p] * scale;
                }
            }
            if to == Space::Transform {
                apply_parity(blk, nt);
            }
        }
        m.transverse = to;
        Ok(())
    }

    /// ∂_r of a field that is angular- and radial-transform side; the result
    /// is radially physical.
    pub fn radial_derivative(&self, m: &mut ModeField) -> Result<()> {
        self.check_layout(m)?;
        if m.angular != Space::Transform || m.radial != Space::Transform {
            return Err(Error::config("radial derivative needs angular modes on the spectral side"));
        }
        let block = m.n_r * m.n_c();
        let width = 2 * m.n_c();
        let mut out = vec![0.0f64; 2 * block];
        for a in 0..m.n_theta {
            let slice = &mut m.data[a * block..(a + 1) * block];
            let reals = as_reals(slice);
            self.hankel[a].derivative_block(reals, &mut out, width);
            reals.copy_from_slice(&out);
        }
        m.radial = Space::Physical;
        Ok(())
    }

    /// Physical samples → full transform side.
    pub fn decompose(&self, m: &mut ModeField) -> Result<()> {
        self.angular(m, Space::Transform)?;
        self.radial(m, Space::Transform)?;
        self.transverse(m, Space::Transform)
    }

    /// Full transform side → physical samples.
    pub fn synthesize(&self, m: &mut ModeField) -> Result<()> {
        self.transverse(m, Space::Physical)?;
        self.radial(m, Space::Physical)?;
        self.angular(m, Space::Physical)
    }

    fn require_transform(&self, m: &ModeField) -> Result<()> {
        self.check_layout(m)?;
        if !m.is_transform() {
            return Err(Error::config("multiplier needs a field on the transform side"));
        }
        Ok(())
    }

    /// Multiply coefficient-wise by h(λ), λ = √(ρ² + |ξ|²).
    pub fn apply_multiplier<H: FnMut(f64) -> Complex64>(&self, m: &mut ModeField, mut h: H) -> Result<()> {
        self.require_transform(m)?;
        let table: Vec<Complex64> = self.lambda_sq.iter().map(|l2| h(l2.sqrt())).collect();
        self.apply_table(m, &table);
        Ok(())
    }

    /// Same as `apply_multiplier` for a real symbol.
    pub fn apply_real_multiplier<H: FnMut(f64) -> f64>(&self, m: &mut ModeField, mut h: H) -> Result<()> {
        self.apply_multiplier(m, |l| Complex64::new(h(l), 0.0))
    }

    fn apply_table(&self, m: &mut ModeField, table: &[Complex64]) {
        for blk in m.data.chunks_mut(table.len()) {
            for (v, t) in blk.iter_mut().zip(table) {
                *v *= t;
            }
        }
    }

    /// e^{itL_A} on the transform side: multiply by e^{it(ρ² + |ξ|²)}.
    pub fn linear_evolve(&self, m: &mut ModeField, t: f64) -> Result<()> {
        self.require_transform(m)?;
        let table: Vec<Complex64> = self.lambda_sq.iter().map(|l2| Complex64::from_polar(1.0, t * l2)).collect();
        self.apply_table(m, &table);
        Ok(())
    }

    /// λ² table indexed by (radial node, transverse index).
    pub fn lambda_sq(&self) -> &[f64] {
        &self.lambda_sq
    }
}

/// Multiply slot (p, q) by (−1)^{p+q}, the phase e^{i(ξ_p+ξ_q)L} of a box
/// starting at −L.
fn apply_parity(blk: &mut [Complex64], nt: usize) {
    for p in 0..nt {
        for q in 0..nt {
            if (p + q) % 2 == 1 {
                blk[p * nt + q] = -blk[p * nt + q];
            }
        }
    }
}

fn as_reals(s: &mut [Complex64]) -> &mut [f64] {
    // SAFETY: Complex<f64> is #[repr(C)] { re, im }.
    unsafe { std::slice::from_raw_parts_mut(s.as_mut_ptr() as *mut f64, 2 * s.len()) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid(k_max: usize) -> GridSpec {
        GridSpec { r_max: 8.0, n_r: 40, k_max, l: 6.0, n_t: 32, dt: 1e-2, r_min: 1e-6, rho_max: None, sigma_ref: 0.5 }
    }

    fn gaussian(c: [f64; 4], sigma: f64) -> impl Fn(&CylPoint4) -> Complex64 {
        move |p| {
            let x = p.to_cartesian();
            let d2: f64 = (0..4).map(|i| (x[i] - c[i]).powi(2)).sum();
            Complex64::new((-d2 / (2.0 * sigma * sigma)).exp(), 0.0)
        }
    }

    fn rel_l2(pw: &PartialWave, a: &ModeField, b: &ModeField) -> f64 {
        let mut d = a.clone();
        d.axpy(Complex64::new(-1.0, 0.0), b);
        pw.norm(&d) / pw.norm(b)
    }

    #[test]
    fn parseval_and_round_trip() {
        let pw = PartialWave::new(&small_grid(6), FluxParam::new(0.5).unwrap()).unwrap();
        let u0 = pw.sample(|p| {
            let g = gaussian([0.8, -0.4, 0.3, 0.0], 0.8)(p);
            g * Complex64::from_polar(1.0, 2.0 * p.theta) * (1.0 - (-p.r * p.r).exp())
        });
        let mut m = u0.clone();
        pw.decompose(&mut m).unwrap();
        assert!(m.is_transform());
        let (n0, n1) = (pw.norm(&u0), pw.norm(&m));
        assert!((n0 - n1).abs() < 1e-12 * n0, "{n0} {n1}");
        pw.synthesize(&mut m).unwrap();
        assert!(rel_l2(&pw, &m, &u0) < 1e-12);
    }

    #[test]
    fn mode_concentration_follows_convention() {
        let pw = PartialWave::new(&small_grid(4), FluxParam::new(0.5).unwrap()).unwrap();
        let mut m = pw.sample(|p| Complex64::from_polar((-(p.r - 2.0).powi(2) - p.x3 * p.x3 - p.x4 * p.x4).exp(), p.theta));
        pw.angular(&mut m, Space::Transform).unwrap();
        let total = pw.norm_sq(&m);
        let plane = m.n_r * m.n_c();
        let a = (4 - 1) as usize;
        let in_mode: f64 = m.data[a * plane..(a + 1) * plane].iter().map(|v| v.norm_sqr()).sum::<f64>();
        let mut only = m.clone();
        for (s, blk) in only.data.chunks_mut(plane).enumerate() {
            if s != a {
                blk.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
            }
        }
        assert!(in_mode > 0.0);
        assert!((pw.norm_sq(&only) - total).abs() < 1e-12 * total);
    }

    #[test]
    fn impulse_is_a_basis_function() {
        let g = small_grid(3);
        let pw = PartialWave::new(&g, FluxParam::new(0.3).unwrap()).unwrap();
        let (a, j, pm, qm) = (2usize, 20usize, 1usize, 30usize);
        let mut m = pw.zeros(Space::Transform);
        let c = pm * g.n_t + qm;
        let idx = m.index(a, j, c);
        m.data[idx] = Complex64::new(1.0, 0.0);
        pw.synthesize(&mut m).unwrap();
        let k = g.mode(a);
        let nu = pw.flux.order(k);
        let rho = pw.radial.rho(j);
        let norm = pw.radial.rho_weight(j) * (PI / g.l).powi(2) / TAU / TAU.sqrt();
        let phase = |p: &CylPoint4| Complex64::from_polar(1.0, -(k as f64) * p.theta + g.xi_t(pm) * p.x3 + g.xi_t(qm) * p.x4);
        // Angular and transverse factors are exact: every sample is the
        // radial profile times Y_k(θ)e^{iξ·x'}.
        let profile: Vec<Complex64> = (0..g.n_r).map(|i| m.get(0, i, 0) / phase(&pw.point(0, i, 0))).collect();
        for &(jj, ii, cc) in &[(0usize, 3usize, 7usize), (4, 10, 100), (6, 20, 513)] {
            let got = m.get(jj, ii, cc) / phase(&pw.point(jj, ii, cc));
            assert!((got - profile[ii]).norm() < 1e-12 * norm, "{got} {}", profile[ii]);
        }
        // The radial profile is J_ν(rρ_j) up to the truncation at r = R,
        // which an impulse always feels; compare on the inner half.
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..g.n_r {
            let r = pw.radial.r(i);
            if r < g.r_max / 2.0 {
                let w = pw.radial.r_weight(i);
                let expect = norm * crate::specfun::jv(nu, r * rho);
                num += w * (profile[i].re - expect).powi(2) + w * profile[i].im.powi(2);
                den += w * expect * expect;
            }
        }
        assert!((num / den).sqrt() < 0.2, "impulse profile deviation {}", (num / den).sqrt());
    }

    #[test]
    fn free_gaussian_closed_form() {
        let sigma = 0.7;
        let c = [0.3, 0.0, 0.2, -0.1];
        let pw = PartialWave::new(&small_grid(10), FluxParam::new(0.0).unwrap()).unwrap();
        let mut m = pw.sample(gaussian(c, sigma));
        pw.decompose(&mut m).unwrap();
        let t = 0.15;
        pw.linear_evolve(&mut m, t).unwrap();
        pw.synthesize(&mut m).unwrap();
        let a = 1.0 / (2.0 * sigma * sigma);
        let den = Complex64::new(1.0, -4.0 * a * t);
        let exact = pw.sample(|p| {
            let x = p.to_cartesian();
            let d2: f64 = (0..4).map(|i| (x[i] - c[i]).powi(2)).sum();
            (-a * d2 / den).exp() / (den * den)
        });
        let e = rel_l2(&pw, &m, &exact);
        assert!(e < 1e-7, "free Gaussian rel err {e:e}");
    }

    #[test]
    fn unitary_group_law_and_reversal() {
        let pw = PartialWave::new(&small_grid(5), FluxParam::new(0.5).unwrap()).unwrap();
        let mut m = pw.sample(|p| gaussian([1.0, 0.5, 0.0, 0.4], 0.9)(p) * Complex64::new(1.0, p.x3));
        pw.decompose(&mut m).unwrap();
        let n0 = pw.norm(&m);
        let mut a = m.clone();
        pw.linear_evolve(&mut a, 0.3).unwrap();
        pw.linear_evolve(&mut a, 0.45).unwrap();
        let mut b = m.clone();
        pw.linear_evolve(&mut b, 0.75).unwrap();
        assert!((pw.norm(&a) - n0).abs() < 1e-12 * n0);
        assert!(rel_l2(&pw, &a, &b) < 1e-12);
        pw.linear_evolve(&mut b, -0.75).unwrap();
        assert!(rel_l2(&pw, &b, &m) < 1e-12);
    }

    #[test]
    fn gauge_periodicity() {
        let g = small_grid(6);
        let f = |p: &CylPoint4| {
            Complex64::new((-(p.r - 2.0).powi(2) - 0.5 * (p.x3 * p.x3 + p.x4 * p.x4)).exp(), 0.0)
                * (Complex64::new(1.0, 0.0) + Complex64::from_polar(0.4, p.theta) + Complex64::from_polar(0.2, -2.0 * p.theta))
        };
        let evolve = |alpha: f64, shift: f64| -> ModeField {
            let pw = PartialWave::new(&g, FluxParam::new(alpha).unwrap()).unwrap();
            let mut m = pw.sample(|p| f(p) * Complex64::from_polar(1.0, -shift * p.theta));
            pw.decompose(&mut m).unwrap();
            pw.linear_evolve(&mut m, 0.4).unwrap();
            pw.synthesize(&mut m).unwrap();
            m
        };
        let lhs = evolve(1.5, 0.0);
        let mut rhs = evolve(0.5, 1.0);
        let pw = PartialWave::new(&g, FluxParam::new(0.5).unwrap()).unwrap();
        for j in 0..g.n_theta() {
            let e = Complex64::from_polar(1.0, g.theta(j));
            let plane = rhs.n_r * rhs.n_c();
            rhs.data[j * plane..(j + 1) * plane].iter_mut().for_each(|v| *v *= e);
        }
        rhs.alpha = 0.5;
        let mut l = lhs.clone();
        l.alpha = 0.5;
        assert!(rel_l2(&pw, &l, &rhs) < 1e-10);
    }

    #[test]
    fn lambda_squared_matches_finite_differences() {
        let alpha = 0.5;
        let pw = PartialWave::new(&small_grid(6), FluxParam::new(alpha).unwrap()).unwrap();
        // Each mode k carries the regular profile r^{ν(k)}e^{−0.8r²}.
        let u = |r: f64, th: f64, x3: f64, x4: f64| -> Complex64 {
            let tr = (-0.6 * (x3 * x3 + x4 * x4)).exp();
            [(-1i64, 1.0), (1, 0.3), (3, 0.15)]
                .iter()
                .map(|&(k, c)| {
                    let nu = (k as f64 + alpha).abs();
                    Complex64::from_polar(c * r.powf(nu) * (-0.8 * r * r).exp() * tr, -(k as f64) * th)
                })
                .sum()
        };
        let mut m = pw.sample(|p| u(p.r, p.theta, p.x3, p.x4));
        pw.decompose(&mut m).unwrap();
        pw.apply_real_multiplier(&mut m, |l| l * l).unwrap();
        pw.synthesize(&mut m).unwrap();
        let fd = |p: &CylPoint4, h: f64| -> Complex64 {
            let (r, th, x3, x4) = (p.r, p.theta, p.x3, p.x4);
            let c = u(r, th, x3, x4);
            let d2 = |a: Complex64, b: Complex64| (a - 2.0 * c + b) / (h * h);
            let drr = d2(u(r + h, th, x3, x4), u(r - h, th, x3, x4));
            let dr = (u(r + h, th, x3, x4) - u(r - h, th, x3, x4)) / (2.0 * h);
            let dtt = d2(u(r, th + h, x3, x4), u(r, th - h, x3, x4));
            let dt = (u(r, th + h, x3, x4) - u(r, th - h, x3, x4)) / (2.0 * h);
            let d33 = d2(u(r, th, x3 + h, x4), u(r, th, x3 - h, x4));
            let d44 = d2(u(r, th, x3, x4 + h), u(r, th, x3, x4 - h));
            // (∂_θ − iα)² = ∂_θ² − 2iα∂_θ − α².
            let i = Complex64::new(0.0, 1.0);
            let ang = dtt - 2.0 * i * alpha * dt - alpha * alpha * c;
            -(drr + dr / r + ang / (r * r) + d33 + d44)
        };
        let samples = [(1usize, 8usize, 16 * 32 + 15), (4, 12, 17 * 32 + 16), (9, 6, 14 * 32 + 18)];
        let mut errs = Vec::new();
        for &h in &[2e-2, 1e-2] {
            let mut worst: f64 = 0.0;
            for &(j, i, c) in &samples {
                let p = pw.point(j, i, c);
                worst = worst.max((m.get(j, i, c) - fd(&p, h)).norm());
            }
            errs.push(worst);
        }
        let ratio = errs[0] / errs[1];
        assert!(errs[1] < 1e-3 && (3.0..5.0).contains(&ratio), "{errs:?}");
    }
}
