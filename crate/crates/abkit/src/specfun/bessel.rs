//! Bessel functions J_ν and I_ν of real order ν ≥ 0.
//!
//! J_ν uses three regimes: the power series while its terms do not cancel badly,
//! Steed's continued-fraction method in the transition zone, and the Hankel
//! asymptotic expansion once x ≫ ν². I_ν uses the (positive-term) series and the
//! large-argument expansion.

use super::gamma::{gamma_pos, ln_gamma};
use super::quad::{adaptive, quad_semi_infinite};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-290;
const MAXIT: usize = 100_000;

/// Which evaluation path `bessel_j` takes for (ν, x).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JRegime {
    Series,
    Steed,
    Asymptotic,
}

pub fn j_regime(nu: f64, x: f64) -> JRegime {
    if x <= 2.0 || 0.25 * x * x <= nu + 1.0 {
        JRegime::Series
    } else if x >= 30.0 && x >= nu * nu {
        JRegime::Asymptotic
    } else {
        JRegime::Steed
    }
}

/// J_ν(x) for ν ≥ 0, x ≥ 0.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !(nu >= 0.0) || !(x >= 0.0) {
        return Err(Error::domain(format!("bessel_j needs nu, x >= 0 (nu={nu}, x={x})")));
    }
    Ok(jv(nu, x))
}

/// Unchecked J_ν(x); callers guarantee ν ≥ 0, x ≥ 0.
pub fn jv(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    match j_regime(nu, x) {
        JRegime::Series => j_series(nu, x),
        JRegime::Steed => j_steed(nu, x),
        JRegime::Asymptotic => j_asymptotic(nu, x),
    }
}

pub(crate) fn j_series(nu: f64, x: f64) -> f64 {
    let h = 0.5 * x;
    let mut term = if nu == 0.0 {
        1.0
    } else if nu < 140.0 {
        h.powf(nu) / gamma_pos(nu + 1.0)
    } else {
        (nu * h.ln() - ln_gamma(nu + 1.0)).exp()
    };
    let q = -h * h;
    let mut sum = term;
    let mut m = 1.0;
    loop {
        term *= q / (m * (m + nu));
        sum += term;
        if term.abs() <= EPS * sum.abs() || m > 500.0 {
            break;
        }
        m += 1.0;
    }
    sum
}

// Coefficients a_k(ν) of the Hankel expansion, up to the first k where the
// term size |a_k| / x^k stops decreasing or drops below tolerance.
fn hankel_coeffs(nu: f64, modulus: f64) -> Vec<f64> {
    let mu = 4.0 * nu * nu;
    let mut out = vec![1.0];
    let mut a = 1.0;
    let mut last = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (kf * 8.0);
        let size = a.abs() / modulus.powi(k);
        if size > last && k > 2 {
            break;
        }
        out.push(a);
        if size < 1e-18 {
            break;
        }
        last = size;
    }
    out
}

pub(crate) fn j_asymptotic(nu: f64, x: f64) -> f64 {
    let a = hankel_coeffs(nu, x);
    let (mut p, mut q) = (0.0, 0.0);
    let mut xp = 1.0;
    for (k, ak) in a.iter().enumerate() {
        let t = ak / xp;
        match k % 4 {
            0 => p += t,
            1 => q += t,
            2 => p -= t,
            _ => q -= t,
        }
        xp *= x;
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

// Steed's method (CF1 for J'/J, CF2 for p + iq), valid for x >= 2.
pub(crate) fn j_steed(nu: f64, x: f64) -> f64 {
    let nl = ((nu - x + 1.5).floor()).max(0.0) as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            break;
        }
    }

    let mut rjl = isign * FPMIN;
    let mut rjpl = h * rjl;
    let mut rjl1 = rjl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
        if rjl.abs() > 1e250 {
            rjl *= 1e-250;
            rjpl *= 1e-250;
            rjl1 *= 1e-250;
        }
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let mut a = 0.25 - xmu2;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let mut fct = a * xi / (p * p + q * q);
    let mut cr = br + q * fct;
    let mut ci = bi + p * fct;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    for i in 2..MAXIT {
        a += 2.0 * (i as f64 - 1.0);
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < FPMIN {
            dr = FPMIN;
        }
        fct = a / (cr * cr + ci * ci);
        cr = br + cr * fct;
        ci = bi - ci * fct;
        if cr.abs() + ci.abs() < FPMIN {
            cr = FPMIN;
        }
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (dlr - 1.0).abs() + dli.abs() < EPS {
            break;
        }
    }
    let gam = (p - f) / q;
    let mut rjmu = (w / ((p - f) * gam + q)).sqrt();
    if rjl < 0.0 {
        rjmu = -rjmu;
    }
    rjl1 * (rjmu / rjl)
}

/// I_ν(z) for ν ≥ 0 and real z. Negative z is only defined (as a real number)
/// for integer ν.
pub fn bessel_i(nu: f64, z: f64) -> Result<f64> {
    if !(nu >= 0.0) {
        return Err(Error::domain(format!("bessel_i needs nu >= 0, got {nu}")));
    }
    if z < 0.0 {
        if nu.fract() != 0.0 {
            return Err(Error::domain("bessel_i at negative z needs integer order"));
        }
        let s = if (nu as i64) % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(s * iv(nu, -z));
    }
    Ok(iv(nu, z))
}

/// Unchecked I_ν(z), z ≥ 0.
pub fn iv(nu: f64, z: f64) -> f64 {
    if z > 700.0 {
        return f64::INFINITY;
    }
    iv_scaled(nu, z) * z.exp()
}

/// e^{-z} I_ν(z) for z ≥ 0 (no overflow for large z).
pub fn iv_scaled(nu: f64, z: f64) -> f64 {
    if z == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if z >= 30.0 && z >= nu * nu {
        let a = hankel_coeffs(nu, z);
        let mut s = 0.0;
        let mut zp = 1.0;
        for (k, ak) in a.iter().enumerate() {
            let t = ak / zp;
            s += if k % 2 == 0 { t } else { -t };
            zp *= z;
        }
        return s / (2.0 * PI * z).sqrt();
    }
    let h = 0.5 * z;
    let mut term = (nu * h.ln() - ln_gamma(nu + 1.0) - z).exp();
    if nu == 0.0 {
        term = (-z).exp();
    }
    let q = h * h;
    let mut sum = term;
    let mut m = 1.0;
    loop {
        term *= q / (m * (m + nu));
        sum += term;
        if (term <= EPS * sum && m > h) || m > 5000.0 {
            break;
        }
        m += 1.0;
    }
    sum
}

/// Large-|z| expansion of the Hankel functions H^{(1)}_ν (kind = 1) and
/// H^{(2)}_ν (kind = 2); accurate for |z| ≳ 30 off the negative real axis.
pub fn hankel_asymptotic(nu: f64, z: Complex64, kind: u8) -> Complex64 {
    let sgn = if kind == 1 { 1.0 } else { -1.0 };
    let a = hankel_coeffs(nu, z.norm());
    let i = Complex64::new(0.0, sgn);
    let mut s = Complex64::new(0.0, 0.0);
    let mut ik = Complex64::new(1.0, 0.0);
    let mut zk = Complex64::new(1.0, 0.0);
    for ak in a.iter() {
        s += ik * *ak / zk;
        ik *= i;
        zk *= z;
    }
    let omega = z - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * z)).sqrt() * (i * omega).exp() * s
}

/// J_ν(x) from the Poisson integral
/// (x/2)^ν / (√π Γ(ν+1/2)) ∫₀^π cos(x cos φ) sin^{2ν}φ dφ.
pub fn bessel_j_integral(nu: f64, x: f64, tol: f64) -> Result<f64> {
    let pre = (0.5 * x).powf(nu) / (PI.sqrt() * gamma_pos(nu + 0.5));
    let r = adaptive(|p: f64| (x * p.cos()).cos() * p.sin().powf(2.0 * nu), 0.0, PI, tol, 2000)?;
    Ok(pre * r.value)
}

/// I_ν(z) from the two-integral representation
/// (1/π)∫₀^π e^{z cos s} cos(νs) ds − (sin νπ/π) ∫₀^∞ e^{−z cosh s − νs} ds.
pub fn bessel_i_integral(nu: f64, z: f64, tol: f64) -> Result<f64> {
    let a = adaptive(|s: f64| (z * s.cos()).exp() * (nu * s).cos(), 0.0, PI, tol, 2000)?;
    let sn = (nu * PI).sin();
    let b = if sn.abs() < 1e-15 {
        0.0
    } else {
        let scale = 1.0 / (z + nu).max(0.5);
        quad_semi_infinite(|s: f64| (-z * s.cosh() - nu * s).exp(), scale, tol)?.value
    };
    Ok(a.value / PI - sn / PI * b)
}

/// ∫₀^∞ J_ν(rρ)J_ν(r̄ρ)e^{−ερ²}ρ dρ by direct quadrature.
pub fn weber_integral(nu: f64, r: f64, rb: f64, eps: f64, tol: f64) -> Result<f64> {
    if !(eps > 0.0) || r < 0.0 || rb < 0.0 {
        return Err(Error::domain("weber_integral needs eps > 0 and r, r̄ ≥ 0"));
    }
    // panels no wider than a few oscillations of the product
    let scale = (1.0 / eps.sqrt()).min(3.0 / (r + rb).max(1e-3));
    Ok(quad_semi_infinite(|x: f64| jv(nu, r * x) * jv(nu, rb * x) * (-eps * x * x).exp() * x, scale, tol)?.value)
}

/// Right side of the Weber identity, (1/(2ε)) e^{−(r²+r̄²)/(4ε)} I_ν(rr̄/(2ε)).
pub fn weber_closed_form(nu: f64, r: f64, rb: f64, eps: f64) -> f64 {
    let z = r * rb / (2.0 * eps);
    (-(r - rb).powi(2) / (4.0 * eps)).exp() * iv_scaled(nu, z) / (2.0 * eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weber_instance() {
        // I_{1/2}(z) = √(2/(πz)) sinh z
        let v = weber_closed_form(0.5, 1.0, 1.0, 1.0);
        let exact = 0.5 * (-0.5f64).exp() * (4.0 / PI).sqrt() * 0.5f64.sinh();
        assert!((v - exact).abs() < 1e-14, "{v}");
        assert!((v - 0.178318).abs() < 1e-6);
        let q = weber_integral(0.5, 1.0, 1.0, 1.0, 1e-13).unwrap();
        assert!((q - v).abs() < 1e-10);
        assert!(weber_integral(0.0, 1.0, 1.0, 0.0, 1e-10).is_err());
    }

    #[test]
    fn j_examples() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert!(bessel_j(0.5, PI).unwrap().abs() < 1e-14);
        assert!(bessel_j(0.0, 2.404_825_557_695_773).unwrap().abs() < 1e-9);
        assert!(bessel_j(-0.1, 1.0).is_err());
        assert!(bessel_j(1.0, -1.0).is_err());
    }

    #[test]
    fn j_half_integer_closed_form() {
        for &x in &[0.3, 1.9, 2.5, 7.0, 13.3, 29.0, 31.0, 120.0, 999.0] {
            let exact = (2.0 / (PI * x)).sqrt() * x.sin();
            assert!((jv(0.5, x) - exact).abs() < 5e-15, "x={x}");
            let exact15 = (2.0 / (PI * x)).sqrt() * (x.sin() / x - x.cos());
            assert!((jv(1.5, x) - exact15).abs() < 5e-15, "x={x}");
        }
    }

    #[test]
    fn regimes_agree_on_overlap() {
        for &nu in &[0.0, 0.3, 1.0, 2.7, 5.5] {
            for &x in &[31.0, 40.0, 60.0] {
                if x < nu * nu {
                    continue;
                }
                let d = (j_steed(nu, x) - j_asymptotic(nu, x)).abs();
                assert!(d < 1e-13, "nu={nu} x={x} d={d}");
            }
            for &x in &[2.5, 3.0, 4.0] {
                let d = (j_steed(nu, x) - j_series(nu, x)).abs();
                assert!(d < 1e-13, "nu={nu} x={x} d={d}");
            }
        }
    }

    #[test]
    fn j_recurrence_large_order() {
        // J_{ν-1} + J_{ν+1} = (2ν/x) J_ν
        for &nu in &[10.3, 40.0, 99.0] {
            for &x in &[5.0, 50.0, 120.0, 400.0] {
                let l = jv(nu - 1.0, x) + jv(nu + 1.0, x);
                let r = 2.0 * nu / x * jv(nu, x);
                assert!((l - r).abs() < 1e-12, "nu={nu} x={x}");
            }
        }
    }

    #[test]
    fn i_examples() {
        assert_eq!(bessel_i(0.0, 0.0).unwrap(), 1.0);
        // quoted reference value; it is off from the closed form by ~5e-11
        assert!((bessel_i(0.5, 0.5).unwrap() - 0.587_993_086_743_208_6).abs() < 1e-10);
        let closed = (2.0 / (PI * 0.5)).sqrt() * 0.5f64.sinh();
        assert!((bessel_i(0.5, 0.5).unwrap() - closed).abs() < 1e-14);
        let q = bessel_i_integral(0.3, 2.0, 1e-13).unwrap();
        assert!((bessel_i(0.3, 2.0).unwrap() - q).abs() < 1e-9);
        assert!(bessel_i(-1.0, 1.0).is_err());
        assert!((bessel_i(1.0, -2.0).unwrap() + iv(1.0, 2.0)).abs() < 1e-14);
    }

    #[test]
    fn i_scaled_continuity() {
        for &nu in &[0.0, 0.5, 1.3, 4.0] {
            let z = 30.0f64.max(nu * nu);
            let below = iv_scaled(nu, z * (1.0 - 1e-12));
            let exact = if nu == 0.5 {
                (1.0 - (-2.0 * z).exp()) / (2.0 * PI * z).sqrt()
            } else {
                below
            };
            let above = iv_scaled(nu, z);
            assert!((above / below - 1.0).abs() < 1e-12, "nu={nu}");
            assert!((above / exact - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hankel_asymptotic_matches_real_axis() {
        for &x in &[35.0, 80.0] {
            let h1 = hankel_asymptotic(1.0, Complex64::new(x, 0.0), 1);
            let h2 = hankel_asymptotic(1.0, Complex64::new(x, 0.0), 2);
            let j = 0.5 * (h1 + h2);
            assert!((j.re - jv(1.0, x)).abs() < 1e-14);
            assert!(j.im.abs() < 1e-14);
        }
    }

    #[test]
    fn integral_representations() {
        for &nu in &[0.0, 0.3, 1.0, 2.5] {
            for &x in &[0.5, 3.0, 11.0, 25.0] {
                let q = bessel_j_integral(nu, x, 1e-13).unwrap();
                assert!((jv(nu, x) - q).abs() < 1e-9, "nu={nu} x={x}");
                let qi = bessel_i_integral(nu, x.min(12.0), 1e-13).unwrap();
                let v = iv(nu, x.min(12.0));
                assert!((v - qi).abs() < 1e-9 * v.max(1.0), "nu={nu} z={x}");
            }
        }
    }
}
