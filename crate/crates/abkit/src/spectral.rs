//! Spectral measure of √L_A:
//!
//! dE/dλ(x, y) = (2π)^{-4} λ³ [ S(λ|x−y|) A_α(δ) + (1/π) ∫₀^∞ S(λ|n_s|) B_α(s, δ) ds ],
//! S(w) = ∫_{S³} e^{−iw·ω} dσ(ω) = (2π)² J₁(|w|)/|w|,
//!
//! plus Stone-formula reconstruction of the propagator and the frequency
//! localized wave kernels.

use crate::error::{Error, Result};
use crate::geometry::{dist, AngleDiff, Branch, CylPoint4, FluxParam, R_MIN_DEFAULT};
use crate::kernel::{angular_factor_a, angular_factor_a_branch, kernel_at, KernelTime};
use crate::report::ScanReport;
use crate::specfun::{adaptive, gauss_legendre, hankel_asymptotic, jv, quad_semi_infinite};
use num_complex::Complex64 as C;
use std::f64::consts::PI;

const I: C = C { re: 0.0, im: 1.0 };
const FOUR_PI2: f64 = 4.0 * PI * PI;
/// (2π)^{-4}
pub const DENSITY_CONST: f64 = 1.0 / (16.0 * PI * PI * PI * PI);
/// |z| beyond which J₁ is split into Hankel functions on rotated contours.
const Z_SPLIT: f64 = 30.0;

/// ∫_{S³} e^{−iw·ω} dσ(ω) = (2π)² J₁(|w|)/|w|, equal to 2π² at w = 0.
pub fn sphere_surface_ft(w: [f64; 4]) -> f64 {
    sphere_ft_radial(w.iter().map(|c| c * c).sum::<f64>().sqrt())
}

/// The same as a function of |w|.
pub fn sphere_ft_radial(m: f64) -> f64 {
    if m < 1e-4 {
        // J₁(m)/m = 1/2 − m²/16 + m⁴/384
        let m2 = m * m;
        return FOUR_PI2 * (0.5 - m2 / 16.0 + m2 * m2 / 384.0);
    }
    FOUR_PI2 * jv(1.0, m) / m
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensityValue {
    pub value: C,
    pub lambda: f64,
    /// (geometric, diffractive)
    pub parts: (C, C),
    pub err_estimate: f64,
}

/// Dimensionless data of a pair of points after scaling by λ.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    r: f64,
    rb: f64,
    tr2: f64,
    d: f64,
}

fn b_complex(a0: f64, s: C, c: f64) -> C {
    let sa = (a0 * PI).sin();
    let num = ((-s).exp() - c.cos()) * (a0 * s).sinh() - I * c.sin() * (a0 * s).cosh();
    let den = s.cosh() - c.cos();
    -(sa * (-a0 * s).exp() + sa * num / den)
}

fn b_real(flux_a0: f64, s: f64, c: f64) -> C {
    // reuse the kernel's stable real-axis form through the public API
    let f = FluxParam { alpha: flux_a0 };
    crate::kernel::diffractive_factor_b(f, s, AngleDiff { delta: c - PI, branch: Branch::Near })
}

// (1/π)∫₀^∞ S(|n_s|) B_{α₀}(s, δ) ds for scaled points.
fn diffractive_scaled(a0: f64, delta: f64, sc: Scaled, tol: f64) -> Result<(C, f64)> {
    let c = delta + PI;
    let q = sc.r * sc.r + sc.rb * sc.rb + sc.tr2;
    let a = 2.0 * sc.r * sc.rb;
    let scale = 1.0 / a0.min(1.0 - a0).max(1e-3);
    if a == 0.0 {
        let ib = quad_semi_infinite(|s: f64| b_real(a0, s, c), scale, tol)?;
        return Ok((sphere_ft_radial(q.sqrt()) * ib.value / PI, ib.err));
    }
    // |z|² ≥ Z² along the vertical legs once q² + a² sinh² s₁ ≥ Z⁴
    let z4 = Z_SPLIT.powi(4);
    let need = if z4 > q * q { ((z4 - q * q).sqrt() / a).asinh() } else { 0.0 };
    let s1 = need.max(0.5);
    let zr = |s: f64| (q + a * s.cosh()).sqrt();
    let seg = adaptive(|s: f64| b_real(a0, s, c) * sphere_ft_radial(zr(s)), 0.0, s1, tol / 3.0, 20000)?;
    let mut total = seg.value;
    let mut err = seg.err;
    for (kind, sg) in [(1u8, 1.0), (2u8, -1.0)] {
        let f = |s: C| {
            let z = (q + a * s.cosh()).sqrt();
            FOUR_PI2 * hankel_asymptotic(1.0, z, kind) / (2.0 * z) * b_complex(a0, s, c)
        };
        let vert = adaptive(|psi: f64| f(C::new(s1, sg * psi)) * (I * sg), 0.0, 0.5 * PI, tol / 6.0, 4000)?;
        let ray = quad_semi_infinite(|u: f64| f(C::new(s1 + u, sg * 0.5 * PI)), 1.0, tol / 6.0)?;
        total += vert.value + ray.value;
        err += vert.err + ray.err;
    }
    Ok((total / PI, err / PI))
}

fn check_points(x: &CylPoint4, y: &CylPoint4) -> Result<()> {
    x.check_off_axis(R_MIN_DEFAULT)?;
    y.check_off_axis(R_MIN_DEFAULT)
}

/// Bracketed density λ^{-3}(2π)^4 dE/dλ as a function of the λ-scaled points
/// only; this keeps the λ-scaling covariance exact in floating point.
fn bracket(flux: FluxParam, lambda: f64, x: &CylPoint4, y: &CylPoint4, tol: f64) -> Result<(C, C, f64)> {
    let d = AngleDiff::between(x, y);
    let (n, a0) = flux.split();
    let a = if d.branch == Branch::Boundary {
        0.5 * (angular_factor_a_branch(flux, d.delta, false) + angular_factor_a_branch(flux, d.delta, true))
    } else {
        angular_factor_a(flux, d)
    };
    let geo = sphere_ft_radial(lambda * dist(x, y)) * a;
    if a0 == 0.0 {
        return Ok((geo, C::new(0.0, 0.0), 0.0));
    }
    let dx3 = lambda * (x.x3 - y.x3);
    let dx4 = lambda * (x.x4 - y.x4);
    let sc = Scaled { r: lambda * x.r, rb: lambda * y.r, tr2: dx3 * dx3 + dx4 * dx4, d: d.delta };
    let (v, e) = diffractive_scaled(a0, sc.d, sc, tol * 2.0 * PI * PI)?;
    let phase = (I * (n as f64) * d.delta).exp();
    Ok((geo, phase * v, e))
}

/// dE/dλ(x, y) for λ > 0 (λ = 0 returns 0).
pub fn spectral_density(flux: FluxParam, lambda: f64, x: &CylPoint4, y: &CylPoint4, tol: f64) -> Result<SpectralDensityValue> {
    check_points(x, y)?;
    if !(lambda >= 0.0) {
        return Err(Error::domain("spectral density needs λ >= 0"));
    }
    if lambda == 0.0 {
        let z = C::new(0.0, 0.0);
        return Ok(SpectralDensityValue { value: z, lambda, parts: (z, z), err_estimate: 0.0 });
    }
    let (g, dpart, e) = bracket(flux, lambda, x, y, tol)?;
    let pre = DENSITY_CONST * lambda.powi(3);
    Ok(SpectralDensityValue { value: pre * (g + dpart), lambda, parts: (pre * g, pre * dpart), err_estimate: pre * e })
}

/// Independent oracle: the density as a sum over angular modes,
/// (2π)^{-2} λ³ Σ_k e^{−ikδ} ∫₀^{π/2} J_ν(λr cos β) J_ν(λr̄ cos β) J₀(λ|x′−y′| sin β) cos β sin β dβ.
pub fn spectral_density_mode_sum(flux: FluxParam, lambda: f64, x: &CylPoint4, y: &CylPoint4) -> Result<C> {
    check_points(x, y)?;
    let delta = x.theta - y.theta;
    let tr = ((x.x3 - y.x3).powi(2) + (x.x4 - y.x4).powi(2)).sqrt();
    let lr = lambda * x.r;
    let lrb = lambda * y.r;
    let lt = lambda * tr;
    let m = |nu: f64| -> Result<f64> {
        Ok(adaptive(
            |b: f64| jv(nu, lr * b.cos()) * jv(nu, lrb * b.cos()) * jv(0.0, lt * b.sin()) * b.cos() * b.sin(),
            0.0,
            0.5 * PI,
            1e-14,
            4000,
        )?
        .value)
    };
    let reach = lr.max(lrb);
    let mut sum = C::new(m(flux.order(0))?, 0.0);
    let mut k = 1i64;
    loop {
        let a = m(flux.order(k))?;
        let b = m(flux.order(-k))?;
        let kf = k as f64;
        sum += a * (-I * kf * delta).exp() + b * (I * kf * delta).exp();
        if kf > reach + 10.0 && a.abs() + b.abs() < 1e-16 {
            break;
        }
        k += 1;
        if k > 10_000 {
            return Err(Error::accuracy("density mode sum did not converge", sum.norm(), f64::NAN));
        }
    }
    Ok(sum * lambda.powi(3) / FOUR_PI2)
}

/// Composite Gauss-Legendre λ-grid on [0, λ_max] with panels no wider than
/// `width` (chosen from the oscillation rates).
fn lambda_grid(lmax: f64, width: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let panels = ((lmax / width).ceil() as usize).max(1);
    let (x, w) = gauss_legendre(n);
    let h = lmax / panels as f64;
    let mut nodes = Vec::with_capacity(panels * n);
    let mut weights = Vec::with_capacity(panels * n);
    for p in 0..panels {
        let lo = h * p as f64;
        for (t, v) in x.iter().zip(&w) {
            nodes.push(lo + 0.5 * h * (t + 1.0));
            weights.push(0.5 * h * v);
        }
    }
    (nodes, weights)
}

#[derive(Debug, Clone)]
pub struct ConsistencyRow {
    pub t: f64,
    /// Abel parameters η (absolute) and the regularized integrals.
    pub etas: Vec<f64>,
    pub regularized: Vec<C>,
    /// Closed-form K(η − it) at each η.
    pub closed_regularized: Vec<C>,
    /// Richardson limit η → 0 and the closed-form K(−it).
    pub reconstructed: C,
    pub kernel: C,
    pub rel_dev: f64,
    /// max_j |∫e^{−(η_j−it)λ²}dE − K(η_j − it)| / |K(η_j − it)|
    pub rel_dev_regularized: f64,
}

/// Stone-formula check: ∫₀^∞ e^{itλ²} dE(λ; x, y) dλ against the closed-form
/// propagator. The improper integral is Abel-regularized with e^{−ηλ²},
/// η = η₀|t|·2^{-j}, and extrapolated η → 0. The λ-grid (cut at λ_max where
/// e^{−η λ²} < 1e-16 for the smallest η) is shared by all η.
pub fn measure_kernel_consistency(
    flux: FluxParam,
    t: f64,
    x: &CylPoint4,
    y: &CylPoint4,
    eta0: f64,
    levels: usize,
    tol: f64,
) -> Result<ConsistencyRow> {
    if t == 0.0 {
        return Err(Error::domain("consistency check needs t != 0"));
    }
    let etas: Vec<f64> = (0..levels).map(|j| eta0 * t.abs() / 2f64.powi(j as i32)).collect();
    let eta_min = etas[levels - 1];
    let lmax = (37.0 / eta_min).sqrt();
    let reach = x.r + y.r + ((x.x3 - y.x3).powi(2) + (x.x4 - y.x4).powi(2)).sqrt();
    // phase rate of e^{itλ²} at λ_max plus that of the Bessel factors
    let rate = 2.0 * t.abs() * lmax + reach + 1.0;
    let (nodes, weights) = lambda_grid(lmax, 2.0 / rate * 3.0, 16);
    let mut dens = Vec::with_capacity(nodes.len());
    for &l in &nodes {
        dens.push(spectral_density(flux, l, x, y, tol)?.value);
    }
    let mut regularized = Vec::new();
    let mut closed = Vec::new();
    for &eta in &etas {
        let p = C::new(eta, -t);
        let mut s = C::new(0.0, 0.0);
        for ((l, w), dv) in nodes.iter().zip(&weights).zip(&dens) {
            s += (-p * l * l).exp() * *dv * *w;
        }
        regularized.push(s);
        closed.push(kernel_at(flux, KernelTime::Complex(p), x, y, 1e-13)?.value);
    }
    let reconstructed = richardson(&regularized);
    let kernel = kernel_at(flux, KernelTime::Schrodinger(t), x, y, 1e-13)?.value;
    let rel_dev = (reconstructed - kernel).norm() / kernel.norm();
    let rel_dev_regularized = regularized
        .iter()
        .zip(&closed)
        .map(|(a, b)| (a - b).norm() / b.norm())
        .fold(0.0, f64::max);
    Ok(ConsistencyRow { t, etas, regularized, closed_regularized: closed, reconstructed, kernel, rel_dev, rel_dev_regularized })
}

/// Polynomial Richardson extrapolation to h → 0 of values at h, h/2, h/4, ….
pub fn richardson(v: &[C]) -> C {
    let mut t: Vec<C> = v.to_vec();
    let n = t.len();
    for k in 1..n {
        let f = 2f64.powi(k as i32);
        for j in (k..n).rev() {
            t[j] = (f * t[j] - t[j - 1]) / (f - 1.0);
        }
    }
    t[n - 1]
}

/// Dyadic profile φ(u) = χ(u) − χ(2u), supported in [1/2, 2], with χ = 1 on
/// [0, 1] and 0 on [2, ∞). Σ_k φ(2^{-k}λ) = 1 for λ > 0.
pub fn dyadic_profile(u: f64) -> f64 {
    cutoff_chi(u) - cutoff_chi(2.0 * u)
}

/// Smooth cutoff: 1 on [0, 1], 0 on [2, ∞).
pub fn cutoff_chi(u: f64) -> f64 {
    if u <= 1.0 {
        1.0
    } else if u >= 2.0 {
        0.0
    } else {
        let f = |v: f64| if v <= 0.0 { 0.0 } else { (-1.0 / v).exp() };
        let v = u - 1.0;
        f(1.0 - v) / (f(1.0 - v) + f(v))
    }
}

/// Density samples on the support of φ(2^{-k}·), reused across a t-grid:
/// U_k(t) ≈ Σ_j e^{itλ_j} c_j with c_j = φ(2^{-k}λ_j) dE(λ_j) w_j.
#[derive(Debug, Clone)]
pub struct LocalizedSamples {
    pub k: i32,
    pub nodes: Vec<f64>,
    pub coeffs: Vec<C>,
}

impl LocalizedSamples {
    /// Nodes λ = 2^k u with u on a fixed composite grid of [1/2, 2], so the
    /// k-scaling covariance is exact in floating point.
    pub fn new<F: Fn(f64) -> f64>(
        flux: FluxParam,
        k: i32,
        x: &CylPoint4,
        y: &CylPoint4,
        profile: F,
        panels: usize,
        tol: f64,
    ) -> Result<Self> {
        let sc = 2f64.powi(k);
        let (gx, gw) = gauss_legendre(16);
        let h = 1.5 / panels as f64;
        let mut nodes = Vec::new();
        let mut coeffs = Vec::new();
        for p in 0..panels {
            let lo = 0.5 + h * p as f64;
            for (t, v) in gx.iter().zip(&gw) {
                let u = lo + 0.5 * h * (t + 1.0);
                let ph = profile(u);
                if !(0.0..=1.0).contains(&ph) {
                    return Err(Error::domain("profile must take values in [0, 1]"));
                }
                if ph == 0.0 {
                    continue;
                }
                let l = sc * u;
                let dv = spectral_density(flux, l, x, y, tol)?.value;
                nodes.push(l);
                coeffs.push(dv * (ph * sc * 0.5 * h * v));
            }
        }
        Ok(LocalizedSamples { k, nodes, coeffs })
    }

    /// ∫ e^{itλ} φ(2^{-k}λ) dE(λ; x, y).
    pub fn at(&self, t: f64) -> C {
        self.nodes.iter().zip(&self.coeffs).map(|(l, c)| (I * t * l).exp() * c).sum()
    }
}

/// U_k(t)(x, y) = ∫₀^∞ e^{itλ} φ(2^{-k}λ) dE(λ; x, y) for one t.
pub fn localized_wave_kernel<F: Fn(f64) -> f64>(
    flux: FluxParam,
    k: i32,
    t: f64,
    x: &CylPoint4,
    y: &CylPoint4,
    profile: F,
    tol: f64,
) -> Result<C> {
    let panels = panels_for(k, &[t], x, y);
    Ok(LocalizedSamples::new(flux, k, x, y, profile, panels, tol)?.at(t))
}

// Enough panels on u ∈ [1/2, 2] to resolve e^{itλ} and the Bessel phases λ|n|.
// Depends on 2^k t and 2^k·(x, y) only, so the scaled problem gets the same grid.
fn panels_for(k: i32, times: &[f64], x: &CylPoint4, y: &CylPoint4) -> usize {
    let sc = 2f64.powi(k);
    let tmax = times.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let reach = x.r + y.r + ((x.x3 - y.x3).powi(2) + (x.x4 - y.x4).powi(2)).sqrt();
    let rate = sc * (tmax + reach) * 2.0;
    ((1.5 * rate / 3.0).ceil() as usize).clamp(24, 4000)
}

/// Dispersive scan of the localized half-wave kernels: rows |U_k(t)(x, y)|·(2^{-k} + |t|)^{3/2}·2^{-5k/2}
/// over k and t for each pair; the bound column holds the same quantity in the
/// 2^{4k}(1 + 2^k|x−y|)^{-3/2}·(1 + 2^k|t|)^{-3/2} normalization.
pub fn wave_localized_scan(
    flux: FluxParam,
    ks: &[i32],
    times: &[f64],
    pairs: &[(CylPoint4, CylPoint4)],
    tol: f64,
) -> Result<ScanReport> {
    let mut rep = ScanReport::new("wave_localized", &["k", "t", "pair"]);
    for (ip, (x, y)) in pairs.iter().enumerate() {
        let dxy = dist(x, y);
        for &k in ks {
            let sc = 2f64.powi(k);
            let panels = panels_for(k, times, x, y);
            let samp = LocalizedSamples::new(flux, k, x, y, dyadic_profile, panels, tol)?;
            for &t in times {
                let u = samp.at(t).norm();
                let m = u * (1.0 / sc + t.abs()).powf(1.5) * sc.powf(-2.5);
                let alt = u / (sc.powi(4) * (1.0 + sc * dxy).powf(-1.5) * (1.0 + sc * t.abs()).powf(-1.5));
                rep.push(vec![k as f64, t, ip as f64], m, alt, m.is_finite());
            }
        }
    }
    rep.meta("alpha", flux.alpha);
    Ok(rep)
}

/// Localized kernel bound at t = 0: |∫ψ(2^{-k}λ)dE|·(1 + 2^k|x−y|)^K / 2^{4k}.
pub fn localized_bound_scan(
    flux: FluxParam,
    ks: &[i32],
    pairs: &[(CylPoint4, CylPoint4)],
    k_decay: i32,
    tol: f64,
) -> Result<ScanReport> {
    let mut rep = ScanReport::new("localized_bound", &["k", "pair", "dist"]);
    for (ip, (x, y)) in pairs.iter().enumerate() {
        let dxy = dist(x, y);
        for &k in ks {
            let sc = 2f64.powi(k);
            let panels = panels_for(k, &[0.0], x, y);
            let v = LocalizedSamples::new(flux, k, x, y, dyadic_profile, panels, tol)?.at(0.0).norm();
            let m = v * (1.0 + sc * dxy).powi(k_decay) / sc.powi(4);
            rep.push(vec![k as f64, ip as f64, dxy], m, f64::NAN, m.is_finite());
        }
    }
    rep.meta("alpha", flux.alpha);
    rep.meta("K_decay", k_decay);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::propagator_kernel;
    use crate::specfun::bessel_j;

    fn fx(a: f64) -> FluxParam {
        FluxParam::new(a).unwrap()
    }

    #[test]
    fn sphere_examples() {
        assert!((sphere_surface_ft([0.0; 4]) - 2.0 * PI * PI).abs() < 1e-13);
        assert!(sphere_surface_ft([3.831_705_970_2, 0.0, 0.0, 0.0]).abs() < 1e-9);
        let v = sphere_surface_ft([0.0, 1.0, 0.0, 0.0]);
        assert!((v - FOUR_PI2 * bessel_j(1.0, 1.0).unwrap()).abs() < 1e-13);
        assert!((v - 17.372).abs() < 1e-2);
        // continuity across the small-argument branch
        assert!((sphere_ft_radial(0.99e-4) - sphere_ft_radial(1.01e-4)).abs() < 1e-9);
    }

    #[test]
    fn free_diagonal_density() {
        let x = CylPoint4::new(1.0, 0.5, 0.0, 0.0);
        for &l in &[0.3, 1.0, 7.0] {
            let d = spectral_density(fx(0.0), l, &x, &x, 1e-10).unwrap();
            assert!((d.value.re - DENSITY_CONST * l.powi(3) * 2.0 * PI * PI).abs() < 1e-14);
        }
    }

    #[test]
    fn density_matches_mode_sum() {
        let pairs = [
            (CylPoint4::new(1.0, 0.4, 0.1, 0.0), CylPoint4::new(0.7, 2.9, -0.2, 0.3)),
            (CylPoint4::new(1.5, 5.5, 0.0, 0.5), CylPoint4::new(0.9, 0.2, 0.0, 0.0)),
        ];
        for &al in &[0.5, 0.25] {
            for (x, y) in &pairs {
                for &l in &[0.5, 3.0, 12.0, 40.0] {
                    let a = spectral_density(fx(al), l, x, y, 1e-12).unwrap().value;
                    let b = spectral_density_mode_sum(fx(al), l, x, y).unwrap();
                    let scale = DENSITY_CONST * l.powi(3) * 2.0 * PI * PI;
                    assert!((a - b).norm() < 1e-8 * scale, "al={al} l={l} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn density_hermitian_and_diagonal_positive() {
        let x = CylPoint4::new(1.2, 0.3, 0.1, -0.2);
        let y = CylPoint4::new(0.6, 4.0, 0.0, 0.4);
        for &l in &[0.7, 5.0] {
            let a = spectral_density(fx(0.5), l, &x, &y, 1e-12).unwrap().value;
            let b = spectral_density(fx(0.5), l, &y, &x, 1e-12).unwrap().value;
            assert!((a - b.conj()).norm() < 1e-8 * a.norm().max(1e-12));
            let dd = spectral_density(fx(0.5), l, &x, &x, 1e-12).unwrap().value;
            assert!(dd.re > 0.0 && dd.im.abs() < 1e-10 * dd.re);
        }
    }

    #[test]
    fn stone_formula_free_diagonal() {
        let x = CylPoint4::new(1.0, 0.0, 0.0, 0.0);
        let row = measure_kernel_consistency(fx(0.0), 1.0, &x, &x, 0.08, 4, 1e-10).unwrap();
        let k = propagator_kernel(fx(0.0), 1.0, &x, &x, 1e-12).unwrap().value;
        assert!((row.reconstructed - k).norm() < 1e-4 * k.norm(), "{}", row.rel_dev);
        assert!(row.rel_dev_regularized < 1e-8);
    }

    #[test]
    fn localized_covariance_and_scaling() {
        let x = CylPoint4::new(1.0, 0.4, 0.1, 0.0);
        let y = CylPoint4::new(0.7, 2.9, -0.2, 0.3);
        let scaled = |p: &CylPoint4, f: f64| CylPoint4::new(p.r * f, p.theta, p.x3 * f, p.x4 * f);
        for &k in &[-2, 1, 3] {
            let sc = 2f64.powi(k);
            let t = 0.7;
            let a = localized_wave_kernel(fx(0.5), k, t, &x, &y, dyadic_profile, 1e-11).unwrap();
            let b = localized_wave_kernel(fx(0.5), 0, sc * t, &scaled(&x, sc), &scaled(&y, sc), dyadic_profile, 1e-11)
                .unwrap();
            assert!((a - sc.powi(4) * b).norm() < 1e-8 * a.norm(), "k={k}");
        }
        let v0 = localized_wave_kernel(fx(0.0), 0, 0.0, &x, &x, dyadic_profile, 1e-12).unwrap();
        let v2 = localized_wave_kernel(fx(0.0), 2, 0.0, &x, &x, dyadic_profile, 1e-12).unwrap();
        assert!(v0.re > 0.0 && (v2.re / v0.re - 256.0).abs() < 1e-9 * 256.0);
    }

    #[test]
    fn profile_partition_of_unity() {
        for &l in &[0.013, 0.7, 1.0, 3.3, 100.0] {
            let s: f64 = (-20..20).map(|k| dyadic_profile(l / 2f64.powi(k))).sum();
            assert!((s - 1.0).abs() < 1e-14);
        }
    }
}
