//! Quadrature: Gauss-Legendre rules, adaptive Gauss-Kronrod, geometric-panel
//! semi-infinite integration.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

/// Values an integrand may return (real or complex).
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn modulus(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn modulus(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite { a: f64, b: f64 },
    /// [a, ∞) with integrand assumed to decay like e^{-(s-a)/scale}.
    SemiInfinite { a: f64, scale: f64 },
}

/// A fixed rule: ∫ f ≈ Σ w_i f(x_i).
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub domain: Domain,
}

/// Gauss-Legendre nodes and weights on [-1, 1], nodes increasing.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

impl QuadratureRule {
    pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Self {
        let (x, w) = gauss_legendre(n);
        let h = 0.5 * (b - a);
        let c = 0.5 * (b + a);
        QuadratureRule {
            nodes: x.iter().map(|t| c + h * t).collect(),
            weights: w.iter().map(|v| h * v).collect(),
            domain: Domain::Finite { a, b },
        }
    }

    /// `panels` equal Gauss-Legendre panels of `n` nodes each.
    pub fn composite(n: usize, panels: usize, a: f64, b: f64) -> Self {
        let (x, w) = gauss_legendre(n);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(n * panels);
        let mut weights = Vec::with_capacity(n * panels);
        for p in 0..panels {
            let lo = a + h * p as f64;
            for (t, v) in x.iter().zip(&w) {
                nodes.push(lo + 0.5 * h * (t + 1.0));
                weights.push(0.5 * h * v);
            }
        }
        QuadratureRule { nodes, weights, domain: Domain::Finite { a, b } }
    }

    /// Panels of geometrically growing width on [a, ∞), truncated where
    /// e^{-(s-a)/scale} falls below `cutoff`.
    pub fn semi_infinite(n: usize, a: f64, scale: f64, cutoff: f64) -> Self {
        let end = a + scale * (1.0 / cutoff).ln();
        let (x, w) = gauss_legendre(n);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut lo = a;
        let mut width = scale;
        while lo < end {
            let hi = (lo + width).min(end);
            let h = hi - lo;
            for (t, v) in x.iter().zip(&w) {
                nodes.push(lo + 0.5 * h * (t + 1.0));
                weights.push(0.5 * h * v);
            }
            lo = hi;
            width *= 2.0;
        }
        QuadratureRule { nodes, weights, domain: Domain::SemiInfinite { a, scale } }
    }

    pub fn integrate<T: QuadValue, F: FnMut(f64) -> T>(&self, mut f: F) -> T {
        let mut s = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s = s + f(*x) * *w;
        }
        s
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub err: f64,
    pub evals: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

// QUADPACK-style error estimate: the raw |K − G| is sharpened with
// (200|K−G|/resasc)^{3/2} and floored at the round-off level 50·ε·∫|f|.
fn gk15<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut fv = [T::zero(); 15];
    fv[7] = fc;
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        k = k + (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            g = g + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = k * 0.5;
    let mut resabs = fc.modulus() * WGK[7];
    let mut resasc = (fc - mean).modulus() * WGK[7];
    for j in 0..7 {
        resabs += (fv[j].modulus() + fv[14 - j].modulus()) * WGK[j];
        resasc += ((fv[j] - mean).modulus() + (fv[14 - j] - mean).modulus()) * WGK[j];
    }
    let ah = h.abs();
    let resabs = resabs * ah;
    let resasc = resasc * ah;
    let k = k * h;
    let g = g * h;
    let mut err = (k - g).modulus();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    (k, err, floor)
}

/// Adaptive 15-point Gauss-Kronrod on [a, b] to absolute tolerance `tol`.
pub fn adaptive<T: QuadValue, F: FnMut(f64) -> T>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_intervals: usize,
) -> Result<QuadResult<T>> {
    let (v0, e0, r0) = gk15(&mut f, a, b);
    // (lo, hi, value, error, round-off floor)
    let mut segs = vec![(a, b, v0, e0, r0)];
    let mut evals = 15;
    loop {
        let mut total = T::zero();
        let mut err = 0.0;
        let mut floor = 0.0;
        let mut worst = 0;
        for (i, s) in segs.iter().enumerate() {
            total = total + s.2;
            err += s.3;
            floor += s.4;
            if s.3 > segs[worst].3 {
                worst = i;
            }
        }
        if err <= tol.max(4.0 * f64::EPSILON * total.modulus()).max(2.0 * floor) {
            return Ok(QuadResult { value: total, err, evals });
        }
        if segs.len() >= max_intervals || (segs[worst].1 - segs[worst].0).abs() < 1e-14 * (b - a).abs() {
            return Err(Error::accuracy("adaptive quadrature", total.modulus(), err));
        }
        let (lo, hi, _, _, _) = segs.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1, r1) = gk15(&mut f, lo, mid);
        let (v2, e2, r2) = gk15(&mut f, mid, hi);
        evals += 30;
        segs.push((lo, mid, v1, e1, r1));
        segs.push((mid, hi, v2, e2, r2));
    }
}

/// ∫₀^∞ f for an integrand decaying at least like e^{-s/scale} eventually.
/// Geometric panels [0, L], [L, 2L], [2L, 4L], … with L = scale; stops once the
/// analytic tail bound scale·|f(b)| drops below tol/10.
pub fn quad_semi_infinite<T: QuadValue, F: FnMut(f64) -> T>(
    mut f: F,
    scale: f64,
    tol: f64,
) -> Result<QuadResult<T>> {
    if !(scale > 0.0) {
        return Err(Error::domain("quad_semi_infinite needs a positive decay scale"));
    }
    let mut total = T::zero();
    let mut err = 0.0;
    let mut evals = 0;
    let mut lo = 0.0;
    let mut hi = scale;
    for _ in 0..64 {
        let r = adaptive(&mut f, lo, hi, tol / 8.0, 400)?;
        total = total + r.value;
        err += r.err;
        evals += r.evals;
        let tail = scale * f(hi).modulus().max(f(hi - 0.1 * (hi - lo)).modulus());
        evals += 2;
        if tail < tol / 10.0 && r.value.modulus() < tol.max(1e-14 * total.modulus()) * 100.0 {
            return Ok(QuadResult { value: total, err: err + tail, evals });
        }
        lo = hi;
        hi *= 2.0;
    }
    Err(Error::accuracy("semi-infinite quadrature tail", total.modulus(), err))
}
