//! Closed-form kernels of e^{−pL_A} for Re p ≥ 0:
//!
//! K(p; x, y) = (4πp)^{-2} [ e^{−|x−y|²/(4p)} A_α(δ)
//!              + (1/π) ∫₀^∞ e^{−|n_s|²/(4p)} B_α(s, δ) ds ],
//!
//! with p = −it for the propagator e^{itL_A} and p = t for the heat kernel.
//! The s-integral at real t is not absolutely convergent; it is evaluated on a
//! deformed contour where the integrand decays double-exponentially.

use crate::error::{Error, Result};
use crate::geometry::{dist, AngleDiff, Branch, CylPoint4, FluxParam, R_MIN_DEFAULT};
use crate::report::ScanReport;
use crate::specfun::{adaptive, iv_scaled, jv, quad_semi_infinite, QuadResult};
use num_complex::Complex64 as C;
use std::f64::consts::{PI, TAU};

const I: C = C { re: 0.0, im: 1.0 };

/// Start of the contour deformation on the real s-axis.
const S_DEFORM: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: C,
    pub err_estimate: f64,
    /// (geometric, diffractive) parts.
    pub parts: Option<(C, C)>,
}

/// Which semigroup a kernel belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelTime {
    /// e^{itL}, p = −it.
    Schrodinger(f64),
    /// e^{−tL}, p = t.
    Heat(f64),
    /// e^{−pL}, Re p ≥ 0.
    Complex(C),
}

impl KernelTime {
    pub fn p(&self) -> C {
        match *self {
            KernelTime::Schrodinger(t) => C::new(0.0, -t),
            KernelTime::Heat(t) => C::new(t, 0.0),
            KernelTime::Complex(p) => p,
        }
    }
}

/// (4πp)^{-2}; for the propagator N(t) = (−4πit)^{-2} = −1/(16π²t²).
pub fn normalization(p: C) -> C {
    let q = 4.0 * PI * p;
    1.0 / (q * q)
}

/// A_α(δ) = e^{iαδ} for |δ| < π and e^{iα(δ ∓ 2π)} for π < ±δ < 2π.
/// On |δ| = π the near branch is returned.
pub fn angular_factor_a(flux: FluxParam, d: AngleDiff) -> C {
    (I * flux.alpha * d.principal()).exp()
}

/// A_α with an explicit branch choice (used at |δ| = π).
pub fn angular_factor_a_branch(flux: FluxParam, delta: f64, far: bool) -> C {
    let arg = if far { delta - TAU * delta.signum() } else { delta };
    (I * flux.alpha * arg).exp()
}

// B for α₀ ∈ (0, 1) at real s ≥ 0 with c = δ + π. Uses
// cosh s − cos c = 2sinh²(s/2) + 2sin²(c/2) and e^{−s} − cos c = expm1(−s) + 2sin²(c/2).
fn b_reduced_real(a0: f64, s: f64, c: f64) -> C {
    let sa = (a0 * PI).sin();
    let sh = (0.5 * s).sinh();
    let sc = (0.5 * c).sin();
    let den = 2.0 * sh * sh + 2.0 * sc * sc;
    let first = sa * (-a0 * s).exp();
    if s < 1e-4 && sc * sc < 1e-300 {
        // removable point (s, δ) = (0, ±π): second term → −2α₀(1 − s/2 + (1 + 2α₀²)s²/12)
        let ser = -2.0 * a0 * (1.0 - 0.5 * s + (1.0 + 2.0 * a0 * a0) * s * s / 12.0);
        return C::new(-(first + sa * ser), 0.0);
    }
    let num_re = ((-s).exp_m1() + 2.0 * sc * sc) * (a0 * s).sinh();
    let num_im = -c.sin() * (a0 * s).cosh();
    -(C::new(first, 0.0) + sa * C::new(num_re, num_im) / den)
}

// B for α₀ ∈ (0, 1) at complex s (used on the deformed contour, Re s ≥ S_DEFORM).
fn b_reduced_complex(a0: f64, s: C, c: f64) -> C {
    let sa = (a0 * PI).sin();
    let num = ((-s).exp() - c.cos()) * (a0 * s).sinh() - I * c.sin() * (a0 * s).cosh();
    let den = s.cosh() - c.cos();
    -(sa * (-a0 * s).exp() + sa * num / den)
}

/// B_α(s, δ) = −[sin(|α|π)e^{−|α|s} + sin(απ)((e^{−s} − cos(δ+π))sinh(αs)
/// − i sin(δ+π)cosh(αs))/(cosh s − cos(δ+π))] for α ∈ [0, 1), extended to all
/// α by B_{α+n} = e^{inδ}B_α.
pub fn diffractive_factor_b(flux: FluxParam, s: f64, d: AngleDiff) -> C {
    let (n, a0) = flux.split();
    if a0 == 0.0 {
        return C::new(0.0, 0.0);
    }
    let phase = (I * (n as f64) * d.delta).exp();
    phase * b_reduced_real(a0, s, d.delta + PI)
}

/// B_α evaluated directly from its defining expression (valid for |α| < 1),
/// without the flux reduction. Used to test the reduction.
pub fn diffractive_factor_b_literal(alpha: f64, s: f64, delta: f64) -> C {
    let c = delta + PI;
    let sa = (alpha * PI).sin();
    let num = C::new(((-s).exp() - c.cos()) * (alpha * s).sinh(), -c.sin() * (alpha * s).cosh());
    -(C::new((alpha.abs() * PI).sin() * (-alpha.abs() * s).exp(), 0.0) + sa * num / (s.cosh() - c.cos()))
}

fn decay_scale(a0: f64) -> f64 {
    1.0 / a0.min(1.0 - a0).max(1e-3)
}

/// ∫₀^∞ |B_α(s, δ)| ds.
pub fn b_l1_norm(flux: FluxParam, d: AngleDiff, tol: f64) -> Result<f64> {
    let (_, a0) = flux.split();
    if a0 == 0.0 {
        return Ok(0.0);
    }
    let c = d.delta + PI;
    let r = quad_semi_infinite(|s: f64| b_reduced_real(a0, s, c).norm(), decay_scale(a0), tol)?;
    Ok(r.value)
}

/// ∫₀^∞ e^{e0 − w cosh s} B_{α₀}(s, δ) ds for Re w ≥ 0, Re(e0 − w) ≤ 0.
/// For arg w ≠ 0 the ray [S_DEFORM, ∞) is rotated to [S_DEFORM, ∞) − i·arg w.
pub fn diffractive_integral(a0: f64, d: AngleDiff, w: C, e0: C, tol: f64) -> Result<QuadResult<C>> {
    let c = d.delta + PI;
    let scale = decay_scale(a0);
    let f_real = |s: f64| (e0 - w * s.cosh()).exp() * b_reduced_real(a0, s, c);
    let phi = if w.norm() == 0.0 { 0.0 } else { w.arg() };
    if phi.abs() < 1e-3 {
        return quad_semi_infinite(f_real, scale, tol);
    }
    let f_cplx = |s: C| (e0 - w * s.cosh()).exp() * b_reduced_complex(a0, s, c);
    let seg = adaptive(f_real, 0.0, S_DEFORM, tol / 4.0, 4000)?;
    let vert = adaptive(|psi: f64| f_cplx(C::new(S_DEFORM, -psi)) * (-I), 0.0, phi, tol / 4.0, 4000)?;
    let ray = quad_semi_infinite(|u: f64| f_cplx(C::new(S_DEFORM + u, -phi)), scale, tol / 4.0)?;
    Ok(QuadResult {
        value: seg.value + vert.value + ray.value,
        err: seg.err + vert.err + ray.err,
        evals: seg.evals + vert.evals + ray.evals,
    })
}

fn check_points(x: &CylPoint4, y: &CylPoint4) -> Result<()> {
    x.check_off_axis(R_MIN_DEFAULT)?;
    y.check_off_axis(R_MIN_DEFAULT)
}

/// Kernel of e^{−pL_A} for Re p ≥ 0, p ≠ 0.
pub fn kernel_at(flux: FluxParam, time: KernelTime, x: &CylPoint4, y: &CylPoint4, tol: f64) -> Result<KernelValue> {
    check_points(x, y)?;
    let p = time.p();
    if p.re < 0.0 || p.norm() == 0.0 {
        return Err(Error::domain("kernel needs Re p >= 0 and p != 0"));
    }
    let d = AngleDiff::between(x, y);
    let (n, a0) = flux.split();
    let nrm = normalization(p);
    let dxy = dist(x, y);
    let gauss = (-(dxy * dxy) / (4.0 * p)).exp();
    let a = if d.branch == Branch::Boundary {
        // A jumps across |δ| = π while the full kernel is continuous; the
        // diffractive integral at δ = ±π is the mean of its one-sided limits.
        0.5 * (angular_factor_a_branch(flux, d.delta, false) + angular_factor_a_branch(flux, d.delta, true))
    } else {
        angular_factor_a(flux, d)
    };
    let g = nrm * gauss * a;
    if a0 == 0.0 {
        return Ok(KernelValue { value: g, err_estimate: 0.0, parts: Some((g, C::new(0.0, 0.0))) });
    }
    let dx3 = x.x3 - y.x3;
    let dx4 = x.x4 - y.x4;
    let e0 = -(x.r * x.r + y.r * y.r + dx3 * dx3 + dx4 * dx4) / (4.0 * p);
    let w = x.r * y.r / (2.0 * p);
    // scale the absolute tolerance by the prefactor so `tol` applies to K
    let pre = nrm.norm() / PI;
    let q = diffractive_integral(a0, d, w, e0, tol / pre.max(1e-300))?;
    let phase = (I * (n as f64) * d.delta).exp();
    let dpart = nrm * phase * q.value / PI;
    Ok(KernelValue { value: g + dpart, err_estimate: pre * q.err, parts: Some((g, dpart)) })
}

/// Kernel of e^{itL_A}.
pub fn propagator_kernel(flux: FluxParam, t: f64, x: &CylPoint4, y: &CylPoint4, tol: f64) -> Result<KernelValue> {
    if t == 0.0 {
        return Err(Error::domain("propagator kernel needs t != 0"));
    }
    kernel_at(flux, KernelTime::Schrodinger(t), x, y, tol)
}

/// Kernel of e^{−tL_A}, t > 0.
pub fn heat_kernel(flux: FluxParam, t: f64, x: &CylPoint4, y: &CylPoint4, tol: f64) -> Result<KernelValue> {
    if !(t > 0.0) {
        return Err(Error::domain("heat kernel needs t > 0"));
    }
    kernel_at(flux, KernelTime::Heat(t), x, y, tol)
}

/// Propagator via the regularized kernels at p = ε − it, ε = η|t| for
/// η ∈ {1e-2, 5e-3, 2.5e-3}, Richardson-extrapolated to ε = 0. Cross-check for
/// the contour evaluation; its error estimate is the extrapolation spread.
pub fn propagator_kernel_regularized(
    flux: FluxParam,
    t: f64,
    x: &CylPoint4,
    y: &CylPoint4,
    tol: f64,
) -> Result<KernelValue> {
    if t == 0.0 {
        return Err(Error::domain("propagator kernel needs t != 0"));
    }
    let ks: Vec<C> = [1e-2, 5e-3, 2.5e-3]
        .iter()
        .map(|eta| kernel_at(flux, KernelTime::Complex(C::new(eta * t.abs(), -t)), x, y, tol).map(|k| k.value))
        .collect::<Result<_>>()?;
    let r1 = 2.0 * ks[1] - ks[0];
    let r2 = 2.0 * ks[2] - ks[1];
    let r = (4.0 * r2 - r1) / 3.0;
    Ok(KernelValue { value: r, err_estimate: (r - r2).norm(), parts: None })
}

/// The kernel as an explicit sum over angular modes,
/// (4πp)^{-2} e^{−(r²+r̄²+|x′−y′|²)/(4p)} Σ_k e^{−ikδ} I_{|k+α|}(rr̄/(2p)),
/// for the propagator and heat cases.
pub fn mode_sum_kernel(flux: FluxParam, time: KernelTime, x: &CylPoint4, y: &CylPoint4) -> Result<KernelValue> {
    check_points(x, y)?;
    let delta = x.theta - y.theta;
    let dx3 = x.x3 - y.x3;
    let dx4 = x.x4 - y.x4;
    let tr2 = dx3 * dx3 + dx4 * dx4;
    let (pre, term): (C, Box<dyn Fn(f64) -> C>) = match time {
        KernelTime::Schrodinger(t) => {
            if t == 0.0 {
                return Err(Error::domain("t != 0 required"));
            }
            let p = C::new(0.0, -t);
            let yv = x.r * y.r / (2.0 * t);
            let e0 = -(x.r * x.r + y.r * y.r + tr2) / (4.0 * p);
            let sg = yv.signum();
            let ya = yv.abs();
            (normalization(p) * e0.exp(), Box::new(move |nu| (I * sg * nu * PI / 2.0).exp() * jv(nu, ya)))
        }
        KernelTime::Heat(t) => {
            if !(t > 0.0) {
                return Err(Error::domain("t > 0 required"));
            }
            let wv = x.r * y.r / (2.0 * t);
            let e0 = -((x.r - y.r).powi(2) + tr2) / (4.0 * t);
            (normalization(C::new(t, 0.0)) * e0.exp(), Box::new(move |nu| C::new(iv_scaled(nu, wv), 0.0)))
        }
        KernelTime::Complex(_) => return Err(Error::domain("mode-sum kernel supports real t only")),
    };
    let arg = match time {
        KernelTime::Schrodinger(t) => (x.r * y.r / (2.0 * t)).abs(),
        KernelTime::Heat(t) => (x.r * y.r / (2.0 * t)).sqrt() * 10.0,
        _ => 0.0,
    };
    let mut sum = term(flux.order(0));
    let mut small = 0;
    let mut k = 1i64;
    loop {
        let a = term(flux.order(k)) * (-I * (k as f64) * delta).exp();
        let b = term(flux.order(-k)) * (I * (k as f64) * delta).exp();
        sum += a + b;
        let kk = k as f64;
        if a.norm() + b.norm() < 1e-18 * (1.0 + sum.norm()) && kk > arg + 5.0 {
            small += 1;
            if small > 3 {
                break;
            }
        } else {
            small = 0;
        }
        k += 1;
        if k > 100_000 {
            return Err(Error::accuracy("mode sum did not converge", sum.norm(), f64::NAN));
        }
    }
    Ok(KernelValue { value: pre * sum, err_estimate: 1e-16 * (k as f64) * (pre * sum).norm(), parts: None })
}

/// The two truncated mode sums
/// first  = Σ_k e^{−ikδ} (1/π)∫₀^π e^{z cos s} cos(ν_k s) ds,
/// second = Σ_k e^{−ikδ} (sin(ν_k π)/π) ∫₀^∞ e^{−ζ cosh s − ν_k s} ds, ζ = |z|.
/// The second integral diverges for negative argument, hence ζ.
#[derive(Debug, Clone, Copy)]
pub struct ModeSums {
    pub first: C,
    pub second: C,
    /// Spread between the windowed sums at K_max and K_max/2.
    pub tail: f64,
}

// Smooth window: 1 on [0, 1/2], 0 from 1, C^∞ in between.
fn window(x: f64) -> f64 {
    if x <= 0.5 {
        1.0
    } else if x >= 1.0 {
        0.0
    } else {
        let u = (x - 0.5) * 2.0;
        let f = |v: f64| if v <= 0.0 { 0.0 } else { (-1.0 / v).exp() };
        f(1.0 - u) / (f(1.0 - u) + f(u))
    }
}

/// Per-mode integrals of `ModeSums` for one flux, reusable across δ.
#[derive(Debug, Clone)]
pub struct ModeTable {
    pub z: f64,
    pub zeta: f64,
    /// (k, first integral, second integral) for |k| ≤ K_max.
    pub rows: Vec<(i64, f64, f64)>,
    pub k_max: i64,
}

impl ModeTable {
    pub fn new(flux: FluxParam, z: f64, k_max: i64) -> Result<Self> {
        if !(z < 0.0) {
            return Err(Error::domain("mode-sum oracle takes z < 0"));
        }
        let zeta = -z;
        let mut rows = Vec::with_capacity((2 * k_max + 1) as usize);
        for k in -k_max..=k_max {
            let nu = flux.order(k);
            let f = adaptive(|s: f64| (z * s.cos()).exp() * (nu * s).cos(), 0.0, PI, 1e-14, 20000)?.value / PI;
            let sn = (nu * PI).sin();
            let g = if sn.abs() < 1e-15 {
                0.0
            } else {
                let sc = 1.0 / (zeta + nu).max(0.25);
                sn / PI * quad_semi_infinite(|s: f64| (-zeta * s.cosh() - nu * s).exp(), sc, 1e-15)?.value
            };
            rows.push((k, f, g));
        }
        Ok(ModeTable { z, zeta, rows, k_max })
    }

    fn sums(&self, delta: f64, kcut: i64) -> (C, C) {
        let mut a = C::new(0.0, 0.0);
        let mut b = C::new(0.0, 0.0);
        for &(k, f, g) in &self.rows {
            let wv = window(k.abs() as f64 / kcut as f64);
            if wv == 0.0 {
                continue;
            }
            let e = (-I * (k as f64) * delta).exp() * wv;
            a += e * f;
            b += e * g;
        }
        (a, b)
    }

    pub fn evaluate(&self, delta: f64) -> ModeSums {
        let (a, b) = self.sums(delta, self.k_max + 1);
        let (a2, b2) = self.sums(delta, (self.k_max + 1) / 2);
        ModeSums { first: a, second: b, tail: (a - a2).norm().max((b - b2).norm()) }
    }
}

/// Truncated (smoothly windowed) mode sums at one δ; the accuracy error fires
/// when the tail estimate exceeds `tol`.
pub fn mode_sum_oracle(flux: FluxParam, d: AngleDiff, z: f64, k_max: i64, tol: f64) -> Result<ModeSums> {
    let m = ModeTable::new(flux, z, k_max)?.evaluate(d.delta);
    if m.tail > tol {
        return Err(Error::accuracy("mode-sum tail above tolerance", m.first.norm(), m.tail));
    }
    Ok(m)
}

/// Closed-form right sides of the mode sums: (e^{z cos δ}A_α(δ),
/// −(1/π)∫₀^∞ e^{−ζ cosh s}B_α(s, δ) ds) with ζ = |z|.
pub fn mode_sum_closed_forms(flux: FluxParam, d: AngleDiff, z: f64, tol: f64) -> Result<(C, C)> {
    let zeta = z.abs();
    let first = (z * d.delta.cos()).exp() * angular_factor_a(flux, d);
    let (n, a0) = flux.split();
    if a0 == 0.0 {
        return Ok((first, C::new(0.0, 0.0)));
    }
    let q = diffractive_integral(a0, d, C::new(zeta, 0.0), C::new(0.0, 0.0), tol)?;
    let phase = (I * (n as f64) * d.delta).exp();
    Ok((first, -phase * q.value / PI))
}

/// Rows t²|K(t, x, y)| against |N(1)|(1 + ∫|B_α|) (and the sharper
/// |N(1)|(1 + (1/π)∫|B_α|) reported in metadata).
pub fn dispersive_ratio_scan(
    flux: FluxParam,
    times: &[f64],
    pairs: &[(CylPoint4, CylPoint4)],
    tol: f64,
) -> Result<ScanReport> {
    let mut rep = ScanReport::new("dispersive", &["t", "pair", "delta"]);
    let n1 = 1.0 / (16.0 * PI * PI);
    let mut sharp_max: f64 = 0.0;
    for (ip, (x, y)) in pairs.iter().enumerate() {
        let d = AngleDiff::between(x, y);
        let bl1 = b_l1_norm(flux, d, 1e-10)?;
        let bound = n1 * (1.0 + bl1);
        let sharp = n1 * (1.0 + bl1 / PI);
        for &t in times {
            let k = propagator_kernel(flux, t, x, y, tol)?;
            let m = t * t * k.value.norm();
            let e = t * t * k.err_estimate;
            sharp_max = sharp_max.max(m / sharp);
            rep.push(vec![t, ip as f64, d.delta], m, bound, m <= bound + 1e-8 + e);
        }
    }
    rep.meta("alpha", flux.alpha);
    rep.meta("N1", n1);
    rep.meta("max_ratio_to_sharp_bound", sharp_max);
    Ok(rep)
}

/// Rows |K_heat(t, x, y)|·t²·e^{|x−y|²/(4t)} against |N(1)|(1 + (1/π)∫|B_α|).
/// On the heat side |n_s|² ≥ |x−y|², so the bound is a plain triangle
/// inequality; at α = 0 the ratio is exactly 1/(16π²).
pub fn heat_ratio_scan(flux: FluxParam, times: &[f64], pairs: &[(CylPoint4, CylPoint4)], tol: f64) -> Result<ScanReport> {
    let mut rep = ScanReport::new("heat", &["t", "pair", "delta"]);
    let n1 = 1.0 / (16.0 * PI * PI);
    for (ip, (x, y)) in pairs.iter().enumerate() {
        let d = AngleDiff::between(x, y);
        let bound = n1 * (1.0 + b_l1_norm(flux, d, 1e-10)? / PI);
        let dxy2 = dist(x, y).powi(2);
        for &t in times {
            let k = heat_kernel(flux, t, x, y, tol * (-dxy2 / (4.0 * t)).exp() / (t * t))?;
            let w = t * t * (dxy2 / (4.0 * t)).exp();
            let m = w * k.value.norm();
            rep.push(vec![t, ip as f64, d.delta], m, bound, m.is_finite() && m <= bound * (1.0 + 1e-9) + w * k.err_estimate);
        }
    }
    rep.meta("alpha", flux.alpha);
    rep.meta("N1", n1);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fx(a: f64) -> FluxParam {
        FluxParam::new(a).unwrap()
    }

    fn ad(d: f64) -> AngleDiff {
        AngleDiff::new(d).unwrap()
    }

    #[test]
    fn a_examples() {
        assert_eq!(angular_factor_a(fx(0.0), ad(2.0)), C::new(1.0, 0.0));
        let v = angular_factor_a(fx(0.5), ad(PI / 2.0));
        assert!((v - C::new(0.5f64.sqrt(), 0.5f64.sqrt())).norm() < 1e-15);
        let v = angular_factor_a(fx(0.5), ad(1.5 * PI));
        assert!((v - (-I * PI / 4.0).exp()).norm() < 1e-15);
    }

    #[test]
    fn b_examples() {
        for s in [0.0, 0.3, 2.0] {
            assert_eq!(diffractive_factor_b(fx(2.0), s, ad(1.0)), C::new(0.0, 0.0));
        }
        let v = diffractive_factor_b(fx(0.5), 0.0, ad(0.0));
        assert!((v - C::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn b_removable_point_is_continuous() {
        let a = fx(0.3);
        let at = diffractive_factor_b(a, 5e-5, ad(PI));
        let near = diffractive_factor_b(a, 2e-4, ad(PI));
        assert!((at - near).norm() < 1e-3);
        let lit = diffractive_factor_b_literal(0.3, 1e-3, PI);
        assert!((diffractive_factor_b(a, 1e-3, ad(PI)) - lit).norm() < 1e-9);
    }

    #[test]
    fn b_reduction_matches_literal() {
        for &al in &[0.25, 0.5, 0.75, -0.3, -0.8] {
            for &dl in &[0.3, 2.0, -2.0, 3.5, -3.5, -5.0] {
                for &s in &[0.1, 1.0, 4.0] {
                    let r = diffractive_factor_b(fx(al), s, ad(dl));
                    let l = diffractive_factor_b_literal(al, s, dl);
                    assert!((r - l).norm() < 1e-12, "al={al} d={dl} s={s}");
                }
            }
        }
    }

    #[test]
    fn b_l1_examples() {
        assert_eq!(b_l1_norm(fx(2.0), ad(0.4), 1e-10).unwrap(), 0.0);
        let v1 = b_l1_norm(fx(0.5), ad(0.0), 1e-8).unwrap();
        let v2 = b_l1_norm(fx(0.5), ad(0.0), 1e-11).unwrap();
        assert!(v1 > 0.0 && (v1 - v2).abs() < 1e-8);
    }

    #[test]
    fn free_values() {
        let x = CylPoint4::new(1.0, 0.3, 0.2, -0.1);
        let k = propagator_kernel(fx(0.0), 1.0, &x, &x, 1e-12).unwrap();
        assert!((k.value - C::new(-1.0 / (16.0 * PI * PI), 0.0)).norm() < 1e-15);
        let h = heat_kernel(fx(0.0), 1.0, &x, &x, 1e-12).unwrap();
        assert!((h.value.re - 1.0 / (16.0 * PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn closed_form_matches_mode_sum_kernel() {
        let pts = [
            (CylPoint4::new(1.0, 0.4, 0.1, 0.0), CylPoint4::new(0.7, 2.9, -0.2, 0.3)),
            (CylPoint4::new(1.5, 5.5, 0.0, 0.5), CylPoint4::new(0.9, 0.2, 0.0, 0.0)),
            (CylPoint4::new(0.6, 1.0, 0.3, 0.3), CylPoint4::new(2.2, 4.0, 0.0, -0.4)),
        ];
        for &al in &[0.25, 0.5, 0.75, 1.3] {
            for (x, y) in &pts {
                for &t in &[0.3, -0.7, 2.0] {
                    let c = propagator_kernel(fx(al), t, x, y, 1e-12).unwrap().value;
                    let m = mode_sum_kernel(fx(al), KernelTime::Schrodinger(t), x, y).unwrap().value;
                    assert!((c - m).norm() < 1e-8 * m.norm(), "al={al} t={t} c={c} m={m}");
                    let c = heat_kernel(fx(al), t.abs(), x, y, 1e-14).unwrap().value;
                    let m = mode_sum_kernel(fx(al), KernelTime::Heat(t.abs()), x, y).unwrap().value;
                    assert!((c - m).norm() < 1e-8 * m.norm(), "heat al={al} t={t}");
                }
            }
        }
    }

    #[test]
    fn regularized_path_agrees() {
        let x = CylPoint4::new(1.0, 0.4, 0.1, 0.0);
        let y = CylPoint4::new(0.7, 2.9, -0.2, 0.3);
        let c = propagator_kernel(fx(0.5), 0.8, &x, &y, 1e-12).unwrap();
        let r = propagator_kernel_regularized(fx(0.5), 0.8, &x, &y, 1e-12).unwrap();
        assert!((c.value - r.value).norm() < 1e-5 * c.value.norm() + r.err_estimate);
    }

    #[test]
    fn boundary_continuity() {
        let y = CylPoint4::new(0.8, 0.0, 0.0, 0.0);
        let at = CylPoint4::new(1.1, PI, 0.2, 0.0);
        let lo = CylPoint4::new(1.1, PI - 1e-6, 0.2, 0.0);
        let hi = CylPoint4::new(1.1, PI + 1e-6, 0.2, 0.0);
        for t in [KernelTime::Schrodinger(0.6), KernelTime::Heat(0.6)] {
            let k0 = kernel_at(fx(0.3), t, &at, &y, 1e-13).unwrap().value;
            let k1 = kernel_at(fx(0.3), t, &lo, &y, 1e-13).unwrap().value;
            let k2 = kernel_at(fx(0.3), t, &hi, &y, 1e-13).unwrap().value;
            assert!((k0 - k1).norm() < 1e-5 * k0.norm() && (k0 - k2).norm() < 1e-5 * k0.norm());
        }
    }

    #[test]
    fn mode_sum_oracle_examples() {
        let m = mode_sum_oracle(fx(0.0), ad(0.7), -2.0, 60, 1e-9).unwrap();
        assert!((m.first - (-2.0 * 0.7f64.cos()).exp()).norm() < 1e-9);
        assert!(m.second.norm() < 1e-12);
        let t = ModeTable::new(fx(0.5), -1.0, 1500).unwrap();
        for &dl in &[PI / 2.0, -2.5, 4.0] {
            let m = t.evaluate(dl);
            let (f, g) = mode_sum_closed_forms(fx(0.5), ad(dl), -1.0, 1e-13).unwrap();
            assert!((m.first - f).norm() < 1e-8, "d={dl} {}", (m.first - f).norm());
            assert!((m.second - g).norm() < 1e-8, "d={dl} {}", (m.second - g).norm());
        }
        assert!(ModeTable::new(fx(0.5), 1.0, 10).is_err());
    }

    #[test]
    fn on_axis_rejected() {
        let x = CylPoint4::new(0.0, 0.0, 1.0, 1.0);
        let y = CylPoint4::new(1.0, 0.0, 0.0, 0.0);
        assert!(matches!(propagator_kernel(fx(0.5), 1.0, &x, &y, 1e-10), Err(Error::Singularity(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn conjugation_symmetry(al in -0.99..0.99f64, s in 0.0..6.0f64, dl in -6.2..6.2f64) {
            let d = ad(dl);
            let a1 = angular_factor_a(fx(al), d);
            let a2 = angular_factor_a(fx(-al), d).conj();
            prop_assert!((a1 - a2).norm() < 1e-12 && (a1.norm() - 1.0).abs() < 1e-14);
            let b1 = diffractive_factor_b(fx(al), s, d);
            let b2 = diffractive_factor_b(fx(-al), s, d).conj();
            prop_assert!((b1 - b2).norm() < 1e-12);
        }

        #[test]
        fn flux_periodicity(al in 0.05..0.95f64, t in 0.2..3.0f64, th in 0.0..TAU, thb in 0.0..TAU, r in 0.3..2.0f64) {
            let x = CylPoint4::new(r, th, 0.1, 0.0);
            let y = CylPoint4::new(1.0, thb, 0.0, 0.2);
            let k0 = propagator_kernel(fx(al), t, &x, &y, 1e-12).unwrap().value;
            let k1 = propagator_kernel(fx(al + 1.0), t, &x, &y, 1e-12).unwrap().value;
            let ph = (I * (th - thb)).exp();
            prop_assert!((k1 - ph * k0).norm() < 1e-6 * k0.norm());
        }

        #[test]
        fn hermitian_symmetry(al in 0.05..0.95f64, t in 0.2..3.0f64, th in 0.0..TAU, thb in 0.0..TAU) {
            let x = CylPoint4::new(1.2, th, 0.1, 0.0);
            let y = CylPoint4::new(0.8, thb, 0.0, 0.2);
            let k = propagator_kernel(fx(al), t, &x, &y, 1e-12).unwrap().value;
            let kr = propagator_kernel(fx(al), -t, &y, &x, 1e-12).unwrap().value;
            prop_assert!((k - kr.conj()).norm() < 1e-8 * k.norm());
        }
    }
}
